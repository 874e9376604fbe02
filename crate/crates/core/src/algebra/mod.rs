//! Constant matrices: dense complex arithmetic, the gamma/Clifford algebra and
//! the Maxwell spin-1 blocks.

mod gamma;
mod matrix;
mod maxwell_blocks;

pub use gamma::{gamma, levi_civita, metric, pauli, spin_matrix, GammaSet, Representation};
pub use matrix::{
    anticommutator, c64, commutator, hermitian_function, hermitian_function_off_kernel, kron, max_abs_diff,
    ComplexMatrix, I, ONE, ZERO,
};
pub use maxwell_blocks::MaxwellBlocks;
