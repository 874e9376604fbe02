//! Operators of the form "polynomial in `xₐ` and `t` with matrix-valued
//! momentum-function coefficients", closed under products, commutators and
//! conjugation by momentum-dependent unitaries.

mod function;
mod onshell;
mod operator;
mod sampling;
mod scalar;
mod set;

/// A point `p ∈ R³` of momentum space.
pub type Momentum = [f64; 3];

pub use function::{difference_step, MomentumFunction};
pub use onshell::{on_shell_reduce, Factor, OffShellOperator};
pub use operator::{conjugate, conjugate_checked, symmetrized_x, CanonicalOperator, Monomial, MAX_X_DEGREE};
pub use sampling::{lattice_samples, random_ball_samples, standard_samples, standard_samples_nonzero};
pub use scalar::Scalar;
pub use set::{OperatorSet, Picture, SetLabel, GENERATOR_NAMES};
