//! Stable models of normal propositional logic programs computed three ways:
//! by the Gelfond-Lifschitz fixpoint, by proof schemes and their supports,
//! and as the propositional models of defining equations. The same machinery
//! is extended to programs with cardinality constraints.

pub mod atoms;
pub mod cc;
pub mod equations;
pub mod error;
pub mod fixpoint;
pub mod generate;
pub mod lab;
pub mod logic;
pub mod schemes;
pub mod syntax;

pub use atoms::{Atom, AtomSet, Interpretation, Universe};
pub use error::{Error, Result};
pub use logic::{Formula, Theory};
pub use syntax::{Clause, Program};
