//! Hasse quivers with one label per arrow.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::poset::Lattice;

/// A lattice whose Hasse arrows carry labels.
///
/// Labels are dense ids `0..label_count()` with display names. Each label
/// may carry attribute flags such as `"simple"`.
#[derive(Debug, Clone)]
pub struct LabelledHasse {
    lattice: Lattice,
    labels: Vec<usize>,
    label_names: Vec<String>,
    label_attrs: Vec<BTreeSet<String>>,
}

impl LabelledHasse {
    /// `labels[c]` is the label id of cover `c` (in `lattice.covers()` order).
    pub fn new(lattice: Lattice, labels: Vec<usize>, label_names: Vec<String>) -> Result<Self> {
        if labels.len() != lattice.covers().len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} arrows",
                labels.len(),
                lattice.covers().len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= label_names.len()) {
            return Err(Error::InvalidArgument(format!(
                "label id {bad} has no name"
            )));
        }
        let mut seen = BTreeSet::new();
        for name in &label_names {
            if !seen.insert(name) {
                return Err(Error::InvalidArgument(format!(
                    "label name {name} repeated"
                )));
            }
        }
        let label_attrs = vec![BTreeSet::new(); label_names.len()];
        Ok(LabelledHasse {
            lattice,
            labels,
            label_names,
            label_attrs,
        })
    }

    /// Labels given by name per cover; ids are assigned in sorted name order.
    pub fn from_named(lattice: Lattice, names: &[String]) -> Result<Self> {
        let sorted: BTreeSet<&String> = names.iter().collect();
        let label_names: Vec<String> = sorted.into_iter().cloned().collect();
        let index: BTreeMap<&String, usize> = label_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let labels = names.iter().map(|n| index[n]).collect();
        LabelledHasse::new(lattice, labels, label_names)
    }

    pub fn with_attr(mut self, label: usize, attr: &str) -> Self {
        self.label_attrs[label].insert(attr.to_string());
        self
    }

    pub fn set_attrs(&mut self, label: usize, attrs: BTreeSet<String>) {
        self.label_attrs[label] = attrs;
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> Lattice {
        self.lattice
    }

    /// Label id of cover `c`.
    pub fn label(&self, cover: usize) -> usize {
        self.labels[cover]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn label_name(&self, label: usize) -> &str {
        &self.label_names[label]
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_id(&self, name: &str) -> Option<usize> {
        self.label_names.iter().position(|n| n == name)
    }

    pub fn attrs(&self, label: usize) -> &BTreeSet<String> {
        &self.label_attrs[label]
    }

    pub fn labels_with_attr(&self, attr: &str) -> BTreeSet<usize> {
        (0..self.label_count())
            .filter(|&l| self.label_attrs[l].contains(attr))
            .collect()
    }

    /// Covers carrying `label`.
    pub fn arrows_with_label(&self, label: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l == label)
            .map(|(c, _)| c)
    }

    /// Label ids actually used by some arrow.
    pub fn used_labels(&self) -> BTreeSet<usize> {
        self.labels.iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::examples::boolean_square;

    #[test]
    fn named_labels_get_sorted_ids() {
        let sq = boolean_square();
        let names: Vec<String> = ["b", "a", "a", "b"].iter().map(|s| s.to_string()).collect();
        let lh = LabelledHasse::from_named(sq, &names).unwrap();
        assert_eq!(lh.label_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(lh.labels(), &[1, 0, 0, 1]);
        assert_eq!(lh.arrows_with_label(0).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn rejects_mismatched_label_count() {
        let sq = boolean_square();
        assert!(LabelledHasse::new(sq, vec![0], vec!["a".into()]).is_err());
    }
}
