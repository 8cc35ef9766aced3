//! Groebner bases and zero-dimensional solving.

pub(crate) mod algebra;
pub(crate) mod f4;
pub(crate) mod modp;
pub(crate) mod modular;
pub mod groebner;
pub mod param;
pub mod zerodim;

pub use groebner::{buchberger, GbLimits, GbStats, GroebnerBasis, MonomialOrder};
pub use param::{ParamRecord, RationalParametrization};
pub use zerodim::{rational_parametrization, zero_dim_solve, zero_dim_solve_max_rank, SolveOutcome};
