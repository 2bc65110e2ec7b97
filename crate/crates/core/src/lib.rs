//! Finite lattice engine for weak orders of symmetric groups, their lattice
//! congruences, brick labellings of Hasse arrows and Cambrian quotients.
//!
//! The central types are [`Lattice`] (a validated finite lattice given by its
//! Hasse quiver), [`Congruence`], [`LabelledHasse`] and [`WeakOrder`].

pub mod bitset;
pub mod bricks;
pub mod cambrian;
pub mod congruence;
pub mod error;
pub mod io;
pub mod labelled;
pub mod limits;
pub mod poset;
pub mod suite;
pub mod union_find;
pub mod weak_order;

pub use bitset::BitSet;
pub use bricks::{OrientedPath, StringBrick};
pub use cambrian::Orientation;
pub use congruence::{congruence_closure, Congruence, Forcing, QuotientLattice};
pub use error::{Error, Result};
pub use labelled::LabelledHasse;
pub use limits::Limits;
pub use poset::{HasseArrow, Lattice};
pub use weak_order::{DoubleJI, Permutation, WeakOrder};
