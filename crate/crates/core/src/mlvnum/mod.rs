//! Double-precision numerics with error bounds: multiple L-values, one- and
//! two-variable multiple polylogarithms, the cyclotomic KZ associator and
//! checks of the polylogarithm differential equations.

mod approx;
mod iterated;
mod kz;
mod ode;
mod values;

pub use approx::{root_of_unity, ApproxValue, Precision, MAX_DIGITS};
pub use kz::{phi_kz, phi_kz_from_mlv, phi_kz_with, ApproxSeries, PathSpec};
pub use ode::{ode_check, OdeReport, OdeRow};
pub use values::{bar_value, mlv, mpl_one_var, mpl_two_var, nested_polylog};
