//! Dense complex matrices.
//!
//! A thin newtype over [`nalgebra::DMatrix`] so that the rest of the crate
//! speaks in terms of the handful of operations the operator algebra needs:
//! products, adjoints, Kronecker products, (anti)commutators and functions of
//! Hermitian matrices.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shorthand for building a complex number.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const I: Complex64 = c64(0.0, 1.0);
pub const ONE: Complex64 = c64(1.0, 0.0);
pub const ZERO: Complex64 = c64(0.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(dim, dim, |i, j| f(i, j)))
    }

    /// Row-major construction. Panics unless `rows` is square.
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { c64(entries[i], 0.0) } else { ZERO })
    }

    pub fn from_inner(inner: DMatrix<Complex64>) -> Self {
        assert_eq!(inner.nrows(), inner.ncols(), "matrix must be square");
        Self(inner)
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.0[(i, j)] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        let sv = self.0.clone().singular_values();
        sv.iter().fold(0.0_f64, |m, s| m.max(*s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |M - M†|` relative to `max |M|` (absolute when `M = 0`).
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let diff = (&self.0 - self.0.adjoint()).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if self.max_abs() == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `max |M M† - I|`.
    pub fn unitary_defect(&self) -> f64 {
        let prod = &self.0 * self.0.adjoint();
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        (prod - id).iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_defect() <= tol
    }

    /// Kronecker product `A ⊗ B` with `(A⊗B)[i·q+k, j·q+l] = A[i,j]·B[k,l]`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    /// Matrix-vector product on a raw slice.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        assert_eq!(v.len(), d);
        (0..d)
            .map(|i| (0..d).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    /// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let defect = self.hermitian_defect();
        if defect > 1e-10 {
            return Err(Error::NotHermitian { defect });
        }
        let sym = (&self.0 + self.0.adjoint()) * c64(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, ComplexMatrix(vectors)))
    }

    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigen()?.0)
    }
}

/// `V f(Λ) V†` for Hermitian `M = V Λ V†`.
///
/// `f` returns `None` for eigenvalues outside its domain, which surfaces as
/// [`Error::Domain`] carrying the offending eigenvalue.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> Option<f64>) -> Result<ComplexMatrix> {
    let (values, vectors) = m.hermitian_eigen()?;
    let mapped = values
        .iter()
        .map(|&l| f(l).ok_or(Error::Domain { eigenvalue: l }))
        .collect::<Result<Vec<f64>>>()?;
    Ok(spectral_recompose(&vectors, &mapped))
}

/// Like [`hermitian_function`] but eigenvalues with `|λ| <= kernel_tol` are
/// mapped to zero without consulting `f`.
pub fn hermitian_function_off_kernel(
    m: &ComplexMatrix,
    kernel_tol: f64,
    f: impl Fn(f64) -> Option<f64>,
) -> Result<ComplexMatrix> {
    let (values, vectors) = m.hermitian_eigen()?;
    let mapped = values
        .iter()
        .map(|&l| {
            if l.abs() <= kernel_tol {
                Ok(0.0)
            } else {
                f(l).ok_or(Error::Domain { eigenvalue: l })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(spectral_recompose(&vectors, &mapped))
}

fn spectral_recompose(vectors: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let d = vectors.dim();
    let v = &vectors.0;
    ComplexMatrix::from_fn(d, |i, j| {
        (0..d).map(|k| v[(i, k)] * values[k] * v[(j, k)].conj()).sum()
    })
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(ComplexMatrix(&a.0 * &b.0 - &b.0 * &a.0))
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(ComplexMatrix(&a.0 * &b.0 + &b.0 * &a.0))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// `max |A - B|` entrywise.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.0.iter().zip(b.0.iter()).fold(0.0_f64, |m, (x, y)| m.max((x - y).norm()))
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.0[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<Complex64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Complex64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Complex64) -> ComplexMatrix {
        ComplexMatrix(self.0 * rhs)
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli2() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]])
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = ComplexMatrix::from_fn(2, |i, j| c64(i as f64 + 1.0, j as f64 - 0.5));
        let b = ComplexMatrix::from_fn(3, |i, j| c64((i * 3 + j) as f64, -(i as f64)));
        let k = kron(&a, &b);
        assert_eq!(k.dim(), 6);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..3 {
                    for q in 0..3 {
                        assert_eq!(k.get(i * 3 + p, j * 3 + q), a.get(i, j) * b.get(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)), ComplexMatrix::identity(6));
        let s3 = ComplexMatrix::real_diag(&[1.0, -1.0]);
        assert_eq!(
            kron(&s3, &ComplexMatrix::identity(3)),
            ComplexMatrix::real_diag(&[1.0, 1.0, 1.0, -1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let err = commutator(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
        assert!(anticommutator(&ComplexMatrix::identity(4), &ComplexMatrix::identity(6)).is_err());
    }

    #[test]
    fn commutator_with_identity_vanishes() {
        let m = ComplexMatrix::from_fn(3, |i, j| c64(i as f64, j as f64 * 2.0));
        assert_eq!(commutator(&ComplexMatrix::identity(3), &m).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn square_root_of_diagonal() {
        let m = ComplexMatrix::real_diag(&[4.0, 9.0]);
        let r = hermitian_function(&m, |l| if l >= 0.0 { Some(l.sqrt()) } else { None }).unwrap();
        assert!(max_abs_diff(&r, &ComplexMatrix::real_diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn inverse_sqrt_domain_error_reports_eigenvalue() {
        let m = ComplexMatrix::real_diag(&[0.0, 1.0]);
        let err = hermitian_function(&m, |l| if l > 1e-12 { Some(1.0 / l.sqrt()) } else { None }).unwrap_err();
        assert_eq!(err, Error::Domain { eigenvalue: 0.0 });
    }

    #[test]
    fn off_kernel_function_skips_zero_modes() {
        let m = ComplexMatrix::real_diag(&[0.0, 4.0]);
        let r = hermitian_function_off_kernel(&m, 1e-12, |l| Some(1.0 / l.sqrt())).unwrap();
        assert!(max_abs_diff(&r, &ComplexMatrix::real_diag(&[0.0, 0.5])) < 1e-14);
    }

    #[test]
    fn non_hermitian_input_rejected() {
        let m = ComplexMatrix::from_rows(&[&[ONE, ONE], &[ZERO, ONE]]);
        assert!(matches!(hermitian_function(&m, Some), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rotated_spectrum_round_trips() {
        let s2 = pauli2();
        // exp-like: f(l) = l^2 on sigma_2 gives the identity
        let sq = hermitian_function(&s2, |l| Some(l * l)).unwrap();
        assert!(max_abs_diff(&sq, &ComplexMatrix::identity(2)) < 1e-14);
        assert!(s2.is_unitary(1e-15));
        assert!(s2.is_hermitian(1e-15));
    }
}
