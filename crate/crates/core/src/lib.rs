//! Numerical operator algebra for the Dirac and Maxwell equations.
//!
//! The crate builds the free Dirac Hamiltonian, its canonical (diagonal in
//! momentum space) form, four families of ten invariance generators and the
//! nonlocal O(4) spin operators, plus the six-component Maxwell analogue. Every
//! identity is checked twice: once as an equality of normal-ordered
//! coefficient functions ([`calculus`]) and once by acting on wavepackets on a
//! periodic spectral grid ([`grid`]).
//!
//! ```
//! use fwlab::dirac::DiracContext;
//!
//! let ctx = DiracContext::new(1.0).unwrap();
//! let e = ctx.energy().eval(&[3.0, 0.0, 0.0]);
//! assert!((e.get(0, 0).re - 10f64.sqrt()).abs() < 1e-14);
//! ```

pub mod algebra;
pub mod calculus;
pub mod dirac;
pub mod error;
pub mod grid;
pub mod maxwell;
pub mod verify;

pub use error::{Error, Result};
