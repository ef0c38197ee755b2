//! Welded string links up to self-virtualization, computed through Gauss
//! diagrams: the move calculus, the conjugating automorphism of the reduced
//! free group that classifies them, and welded Milnor invariants.

pub mod coloring;
pub mod error;
pub mod freegroup;
pub mod gauss;
pub mod milnor;
pub mod reduced;

pub use error::{Error, Result};
pub use freegroup::{lcs_equal, Letter, TruncatedSeries, Word};
pub use gauss::{Arrow, GaussDiagram, Move, MoveKind, Sign, Slot};
pub use reduced::{
    aut_equal, compose, invert_aut, reduced_magnus, rf_equal, rho, ConjAut, MultilinearPoly, ReducedElement,
};
