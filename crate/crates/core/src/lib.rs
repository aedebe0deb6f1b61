//! Diagnostics for the global hypoellipticity of systems of toroidal
//! pseudo-differential operators L_j = D_{t_j} + c_j(t_j) P_j(D_x).
//!
//! The crate decides, at desk scale, whether such a system is globally
//! hypoelliptic by combining exact lattice scans, Diophantine analysis,
//! per-frequency solvers and singular-solution constructions. Asymptotic
//! hypotheses are always reported as window trends, never as certainties;
//! exact rational/integer arithmetic is used wherever the declared
//! structure permits it.

pub mod conditions;
pub mod diophantine;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod freq;
pub mod grid;
pub mod gw;
pub mod model;
pub mod solver;
pub mod verdict;

pub use error::{Error, Result};
pub use freq::Freq;
pub use model::{
    validate_system, CoeffSpec, FreqWindow, SymbolForm, SymbolSpec, SystemSpec, ToleranceSet,
    TrigMode,
};
