//! Exact Hilbert polynomials of rational homogeneous spaces `G/P` with
//! Picard number one, of their complete intersections and double covers,
//! and of complete intersections in abelian varieties, together with exact
//! certification of where their roots lie.
//!
//! - [`root_system`]: root systems, marked nodes, the level grading and index.
//! - [`ratpoly`]: exact rational polynomials, Sturm chains, symmetry reductions.
//! - [`hilbert`]: the level-factored Weyl-formula Hilbert polynomial.
//! - [`varieties`]: hyperplane sections, double covers, abelian complete intersections.
//! - [`verify`]: canonical-strip / canonical-line verdicts.
//! - [`cli`]: command-line front end and batch sweeps.

pub mod cli;
pub mod hilbert;
pub mod ratpoly;
pub mod root_system;
pub mod varieties;
pub mod verify;

pub use hilbert::{HilbertData, LevelTable, Variable};
pub use ratpoly::{RatPoly, Rational};
pub use root_system::{MarkedSystem, RootSystem, Series, SimpleType};
pub use verify::{strip_report, Hypothesis, StripReport};
