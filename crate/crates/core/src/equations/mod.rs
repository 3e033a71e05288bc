//! Residuals of the associator equations and an exact degree-by-degree solver.

mod pair;
mod params;
mod residual;
mod solver;

pub use pair::{AssociatorPair, Provenance};
pub use residual::{
    residual_distribution, residual_hexagons, residual_mixed_pentagon, residual_octagon,
    residual_pentagon, residual_special_action, Equation, Residual,
};
pub use solver::{solve_degreewise, FreeParameterPolicy, SolverConfig};
