//! Size guardrails for the expensive operations.
//!
//! The defaults keep every check interactive on a laptop. They can be raised
//! programmatically or through the `TORSLAT_MAX_ELEMENTS` / `TORSLAT_MAX_RANK`
//! environment variables.

use crate::error::{Error, Result};

pub const MAX_ELEMENTS_ENV: &str = "TORSLAT_MAX_ELEMENTS";
pub const MAX_RANK_ENV: &str = "TORSLAT_MAX_RANK";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest lattice on which O(N^3) checks (semidistributivity) run.
    pub cubic_elements: usize,
    /// Largest lattice whose congruences are enumerated.
    pub enumeration_elements: usize,
    /// Largest rank n for an unlabelled weak order on S_{n+1}.
    pub weak_order_rank: usize,
    /// Largest rank n for a labelled weak order.
    pub labelled_rank: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cubic_elements: 5040,
            enumeration_elements: 720,
            weak_order_rank: 6,
            labelled_rank: 5,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            cubic_elements: usize::MAX,
            enumeration_elements: usize::MAX,
            weak_order_rank: 9,
            labelled_rank: 9,
        }
    }

    /// Defaults, overridden by the environment when the variables parse.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = read_env(MAX_ELEMENTS_ENV) {
            limits.cubic_elements = n;
            limits.enumeration_elements = n;
        }
        if let Some(r) = read_env(MAX_RANK_ENV) {
            limits.weak_order_rank = r.min(9);
            limits.labelled_rank = r.min(9);
        }
        limits
    }

    pub(crate) fn check(operation: &'static str, size: usize, limit: usize) -> Result<()> {
        if size > limit {
            Err(Error::SizeLimit {
                operation,
                size,
                limit,
            })
        } else {
            Ok(())
        }
    }
}

fn read_env(key: &str) -> Option<usize> {
    std::env::var(key).ok()?.trim().parse().ok()
}
