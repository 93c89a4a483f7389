//! Finite-model engine for lattice-valued rough sets over an L-universe.
//!
//! The crate is layered bottom-up: [`lattice`] supplies exact residuated
//! arithmetic, [`universe`] the bounded L-subsets, [`relation`] and
//! [`approx`] the relations and their approximation operators, [`product`]
//! the inner/outer products and inverse mappings, [`axiom`] the axiom
//! registry and checker, and [`oracle`] the brute-force theorem harness.

pub mod approx;
pub mod axiom;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod label;
pub mod lattice;
pub mod oracle;
pub mod product;
pub mod relation;
pub mod universe;

pub use approx::{Builtin, Direction, Operator};
pub use axiom::{AxiomId, AxiomReport, Family, Mode};
pub use error::{Error, Result};
pub use label::Label;
pub use lattice::{Elem, FiniteResiduatedLattice};
pub use relation::{LValuedRelation, RelationProperties};
pub use universe::{LSubset, Powerset, Universe};
