//! Matrix-valued functions of the spatial momentum.
//!
//! A [`MomentumFunction`] is an expression tree over constant matrices,
//! scalar functions of `p` and matrix products. Derivatives are taken
//! symbolically, so `∂/∂pₐ` of anything assembled from the constructors here
//! is exact to rounding. Functions known only through a sampling closure
//! ([`MomentumFunction::sampled`]) fall back to central differences.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::scalar::Scalar;
use super::Momentum;
use crate::algebra::{max_abs_diff, ComplexMatrix};

type SampleFn = Arc<dyn Fn(&Momentum) -> ComplexMatrix + Send + Sync>;

#[derive(Clone)]
pub struct MomentumFunction {
    dim: usize,
    node: Arc<Node>,
}

enum Node {
    Zero,
    Const(ComplexMatrix),
    /// `factor · scalar(p) · inner(p)`.
    Scaled { factor: Complex64, scalar: Option<Scalar>, inner: MomentumFunction },
    Sum(Vec<MomentumFunction>),
    Product(MomentumFunction, MomentumFunction),
    Adjoint(MomentumFunction),
    Sampled(SampleFn),
    CentralDifference { axis: usize, inner: MomentumFunction },
}

#[derive(Default)]
struct BatchCache {
    matrices: HashMap<usize, Arc<Vec<Complex64>>>,
    scalars: HashMap<usize, Arc<Vec<f64>>>,
}

/// Central-difference step `h = 1e-5 · max(1, |p|)`.
pub fn difference_step(p: &Momentum) -> f64 {
    let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    1e-5 * norm.max(1.0)
}

impl MomentumFunction {
    fn wrap(dim: usize, node: Node) -> Self {
        Self { dim, node: Arc::new(node) }
    }

    pub fn zero(dim: usize) -> Self {
        Self::wrap(dim, Node::Zero)
    }

    pub fn constant(m: ComplexMatrix) -> Self {
        let dim = m.dim();
        if m.max_abs() == 0.0 {
            return Self::zero(dim);
        }
        Self::wrap(dim, Node::Const(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self::constant(ComplexMatrix::identity(dim))
    }

    /// `s(p) · 1`.
    pub fn scalar(dim: usize, s: Scalar) -> Self {
        Self::identity(dim).times_scalar(s)
    }

    /// `p_a · 1` for 0-based `a`.
    pub fn momentum(dim: usize, a: usize) -> Self {
        Self::scalar(dim, Scalar::p(a))
    }

    /// A function known only through samples; derivatives are numeric.
    pub fn sampled(dim: usize, f: impl Fn(&Momentum) -> ComplexMatrix + Send + Sync + 'static) -> Self {
        Self::wrap(dim, Node::Sampled(Arc::new(f)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Structurally zero (no evaluation involved).
    pub fn is_zero(&self) -> bool {
        matches!(*self.node, Node::Zero)
    }

    pub fn as_constant(&self) -> Option<&ComplexMatrix> {
        match &*self.node {
            Node::Const(m) => Some(m),
            _ => None,
        }
    }

    /// Whether any part of the tree relies on finite differences or samples.
    pub fn is_analytic(&self) -> bool {
        match &*self.node {
            Node::Zero | Node::Const(_) => true,
            Node::Scaled { inner, .. } | Node::Adjoint(inner) => inner.is_analytic(),
            Node::Sum(ts) => ts.iter().all(|t| t.is_analytic()),
            Node::Product(a, b) => a.is_analytic() && b.is_analytic(),
            Node::Sampled(_) | Node::CentralDifference { .. } => false,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        if self.is_zero() || factor == Complex64::new(0.0, 0.0) {
            return Self::zero(self.dim);
        }
        if factor == Complex64::new(1.0, 0.0) {
            return self.clone();
        }
        match &*self.node {
            Node::Const(m) => Self::constant(m.scale(factor)),
            Node::Scaled { factor: f, scalar, inner } => {
                Self::wrap(self.dim, Node::Scaled { factor: f * factor, scalar: scalar.clone(), inner: inner.clone() })
            }
            _ => Self::wrap(self.dim, Node::Scaled { factor, scalar: None, inner: self.clone() }),
        }
    }

    pub fn times_scalar(&self, s: Scalar) -> Self {
        if self.is_zero() || s.is_zero() {
            return Self::zero(self.dim);
        }
        if let Some(c) = s.as_const() {
            return self.scale(Complex64::new(c, 0.0));
        }
        match &*self.node {
            Node::Scaled { factor, scalar, inner } => {
                let combined = match scalar {
                    Some(old) => old.clone() * s,
                    None => s,
                };
                Self::wrap(self.dim, Node::Scaled { factor: *factor, scalar: Some(combined), inner: inner.clone() })
            }
            _ => Self::wrap(
                self.dim,
                Node::Scaled { factor: Complex64::new(1.0, 0.0), scalar: Some(s), inner: self.clone() },
            ),
        }
    }

    pub fn sum(dim: usize, terms: impl IntoIterator<Item = MomentumFunction>) -> Self {
        let mut flat = Vec::new();
        let mut constant: Option<ComplexMatrix> = None;
        for t in terms {
            assert_eq!(t.dim, dim, "dimension mismatch in sum");
            match &*t.node {
                Node::Zero => {}
                Node::Const(m) => {
                    constant = Some(match constant {
                        Some(c) => c + m,
                        None => m.clone(),
                    })
                }
                Node::Sum(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(t),
            }
        }
        if let Some(c) = constant {
            let c = Self::constant(c);
            if !c.is_zero() {
                flat.push(c);
            }
        }
        match flat.len() {
            0 => Self::zero(dim),
            1 => flat.pop().unwrap(),
            _ => Self::wrap(dim, Node::Sum(flat)),
        }
    }

    pub fn product(&self, rhs: &MomentumFunction) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.dim);
        }
        // pull scalar prefactors outward so constant cores can fold
        if let Node::Scaled { factor, scalar, inner } = &*self.node {
            let core = inner.product(rhs).scale(*factor);
            return match scalar {
                Some(s) => core.times_scalar(s.clone()),
                None => core,
            };
        }
        if let Node::Scaled { factor, scalar, inner } = &*rhs.node {
            let core = self.product(inner).scale(*factor);
            return match scalar {
                Some(s) => core.times_scalar(s.clone()),
                None => core,
            };
        }
        match (&*self.node, &*rhs.node) {
            (Node::Const(a), Node::Const(b)) => return Self::constant(a * b),
            (Node::Const(a), _) if *a == ComplexMatrix::identity(self.dim) => return rhs.clone(),
            (_, Node::Const(b)) if *b == ComplexMatrix::identity(self.dim) => return self.clone(),
            _ => {}
        }
        Self::wrap(self.dim, Node::Product(self.clone(), rhs.clone()))
    }

    /// Pointwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        match &*self.node {
            Node::Zero => self.clone(),
            Node::Const(m) => Self::constant(m.adjoint()),
            Node::Scaled { factor, scalar, inner } => {
                let core = inner.adjoint().scale(factor.conj());
                match scalar {
                    Some(s) => core.times_scalar(s.clone()),
                    None => core,
                }
            }
            Node::Sum(ts) => Self::sum(self.dim, ts.iter().map(|t| t.adjoint())),
            Node::Product(a, b) => b.adjoint().product(&a.adjoint()),
            Node::Adjoint(inner) => inner.clone(),
            _ => Self::wrap(self.dim, Node::Adjoint(self.clone())),
        }
    }

    /// `∂/∂p_a` (0-based), exact wherever the tree is analytic.
    pub fn derivative(&self, a: usize) -> Self {
        let dim = self.dim;
        match &*self.node {
            Node::Zero | Node::Const(_) => Self::zero(dim),
            Node::Scaled { factor, scalar, inner } => {
                let d_inner = inner.derivative(a).scale(*factor);
                match scalar {
                    None => d_inner,
                    Some(s) => Self::sum(
                        dim,
                        [
                            inner.scale(*factor).times_scalar(s.derivative(a)),
                            d_inner.times_scalar(s.clone()),
                        ],
                    ),
                }
            }
            Node::Sum(ts) => Self::sum(dim, ts.iter().map(|t| t.derivative(a))),
            Node::Product(x, y) => Self::sum(dim, [x.derivative(a).product(y), x.product(&y.derivative(a))]),
            Node::Adjoint(inner) => inner.derivative(a).adjoint(),
            Node::Sampled(_) | Node::CentralDifference { .. } => {
                Self::wrap(dim, Node::CentralDifference { axis: a, inner: self.clone() })
            }
        }
    }

    /// Mixed derivative `∂^α` for a multi-index `α`.
    pub fn derivative_multi(&self, alpha: [u32; 3]) -> Self {
        let mut out = self.clone();
        for (a, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                out = out.derivative(a);
            }
        }
        out
    }

    /// Central-difference derivative evaluated at `p`, regardless of whether
    /// an analytic derivative exists.
    pub fn numeric_derivative(&self, a: usize, p: &Momentum) -> ComplexMatrix {
        let h = difference_step(p);
        let mut plus = *p;
        let mut minus = *p;
        plus[a] += h;
        minus[a] -= h;
        (self.eval(&plus) - self.eval(&minus)).scale_real(0.5 / h)
    }

    pub fn eval(&self, p: &Momentum) -> ComplexMatrix {
        let mut cache = HashMap::new();
        self.eval_cached(p, &mut cache)
    }

    fn eval_cached(&self, p: &Momentum, cache: &mut HashMap<usize, ComplexMatrix>) -> ComplexMatrix {
        let key = Arc::as_ptr(&self.node) as usize;
        let shareable = !matches!(*self.node, Node::Zero | Node::Const(_));
        if shareable {
            if let Some(m) = cache.get(&key) {
                return m.clone();
            }
        }
        let value = match &*self.node {
            Node::Zero => ComplexMatrix::zeros(self.dim),
            Node::Const(m) => m.clone(),
            Node::Scaled { factor, scalar, inner } => {
                let mut f = *factor;
                if let Some(s) = scalar {
                    f *= s.eval(p);
                }
                inner.eval_cached(p, cache).scale(f)
            }
            Node::Sum(ts) => {
                let mut acc = ComplexMatrix::zeros(self.dim);
                for t in ts {
                    acc += &t.eval_cached(p, cache);
                }
                acc
            }
            Node::Product(a, b) => a.eval_cached(p, cache) * b.eval_cached(p, cache),
            Node::Adjoint(inner) => inner.eval_cached(p, cache).adjoint(),
            Node::Sampled(f) => f(p),
            Node::CentralDifference { axis, inner } => inner.numeric_derivative(*axis, p),
        };
        if shareable {
            cache.insert(key, value.clone());
        }
        value
    }

    /// Evaluate at many points at once. The result holds one row-major
    /// `dim × dim` block per point, in input order. Agrees with
    /// [`MomentumFunction::eval`] to rounding, without per-node allocations.
    pub fn eval_batch(&self, points: &[Momentum]) -> Vec<Complex64> {
        const CHUNK: usize = 256;
        let block = self.dim * self.dim;
        let mut out = Vec::with_capacity(points.len() * block);
        for chunk in points.chunks(CHUNK) {
            let mut cache = BatchCache::default();
            out.extend_from_slice(&self.batch_cached(chunk, &mut cache));
        }
        out
    }

    fn batch_cached(&self, pts: &[Momentum], cache: &mut BatchCache) -> Arc<Vec<Complex64>> {
        let key = Arc::as_ptr(&self.node) as usize;
        if let Some(v) = cache.matrices.get(&key) {
            return v.clone();
        }
        let d = self.dim;
        let block = d * d;
        let n = pts.len();
        let value: Vec<Complex64> = match &*self.node {
            Node::Zero => vec![Complex64::new(0.0, 0.0); n * block],
            Node::Const(m) => {
                let flat = m.to_row_major();
                let mut v = Vec::with_capacity(n * block);
                for _ in 0..n {
                    v.extend_from_slice(&flat);
                }
                v
            }
            Node::Scaled { factor, scalar, inner } => {
                let src = inner.batch_cached(pts, cache);
                let values = scalar.as_ref().map(|s| s.eval_batch_cached(pts, &mut cache.scalars));
                let mut v = Vec::with_capacity(n * block);
                for i in 0..n {
                    let f = match &values {
                        Some(vals) => *factor * vals[i],
                        None => *factor,
                    };
                    v.extend(src[i * block..(i + 1) * block].iter().map(|z| z * f));
                }
                v
            }
            Node::Sum(ts) => {
                let mut acc = vec![Complex64::new(0.0, 0.0); n * block];
                for t in ts {
                    let src = t.batch_cached(pts, cache);
                    for (a, b) in acc.iter_mut().zip(src.iter()) {
                        *a += b;
                    }
                }
                acc
            }
            Node::Product(a, b) => {
                let x = a.batch_cached(pts, cache);
                let y = b.batch_cached(pts, cache);
                let mut v = vec![Complex64::new(0.0, 0.0); n * block];
                for i in 0..n {
                    let (xb, yb) = (&x[i * block..], &y[i * block..]);
                    let vb = &mut v[i * block..(i + 1) * block];
                    for r in 0..d {
                        for k in 0..d {
                            let xv = xb[r * d + k];
                            if xv == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            for c in 0..d {
                                vb[r * d + c] += xv * yb[k * d + c];
                            }
                        }
                    }
                }
                v
            }
            Node::Adjoint(inner) => {
                let src = inner.batch_cached(pts, cache);
                let mut v = vec![Complex64::new(0.0, 0.0); n * block];
                for i in 0..n {
                    for r in 0..d {
                        for c in 0..d {
                            v[i * block + r * d + c] = src[i * block + c * d + r].conj();
                        }
                    }
                }
                v
            }
            Node::Sampled(_) | Node::CentralDifference { .. } => {
                let mut v = Vec::with_capacity(n * block);
                for p in pts {
                    v.extend_from_slice(&self.eval(p).to_row_major());
                }
                v
            }
        };
        let value = Arc::new(value);
        cache.matrices.insert(key, value.clone());
        value
    }

    /// Largest entrywise deviation from `other` over the given samples.
    pub fn max_distance(&self, other: &MomentumFunction, samples: &[Momentum]) -> f64 {
        samples
            .iter()
            .map(|p| max_abs_diff(&self.eval(p), &other.eval(p)))
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus over the given samples.
    pub fn max_abs(&self, samples: &[Momentum]) -> f64 {
        samples.iter().map(|p| self.eval(p).max_abs()).fold(0.0, f64::max)
    }

    /// Node count, useful to keep an eye on expression growth.
    pub fn size(&self) -> usize {
        1 + match &*self.node {
            Node::Zero | Node::Const(_) | Node::Sampled(_) => 0,
            Node::Scaled { inner, .. } | Node::Adjoint(inner) => inner.size(),
            Node::CentralDifference { inner, .. } => inner.size(),
            Node::Sum(ts) => ts.iter().map(|t| t.size()).sum(),
            Node::Product(a, b) => a.size() + b.size(),
        }
    }
}

impl fmt::Debug for MomentumFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Zero => write!(f, "0"),
            Node::Const(_) => write!(f, "C{}", self.dim),
            Node::Scaled { factor, scalar, inner } => {
                write!(f, "({factor})")?;
                if let Some(s) = scalar {
                    write!(f, "·{s:?}")?;
                }
                write!(f, "·{inner:?}")
            }
            Node::Sum(ts) => {
                write!(f, "[")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t:?}")?;
                }
                write!(f, "]")
            }
            Node::Product(a, b) => write!(f, "{a:?}*{b:?}"),
            Node::Adjoint(a) => write!(f, "({a:?})†"),
            Node::Sampled(_) => write!(f, "sampled"),
            Node::CentralDifference { axis, inner } => write!(f, "Δ{}({inner:?})", axis + 1),
        }
    }
}

impl std::ops::Add for &MomentumFunction {
    type Output = MomentumFunction;
    fn add(self, rhs: &MomentumFunction) -> MomentumFunction {
        MomentumFunction::sum(self.dim, [self.clone(), rhs.clone()])
    }
}

impl std::ops::Sub for &MomentumFunction {
    type Output = MomentumFunction;
    fn sub(self, rhs: &MomentumFunction) -> MomentumFunction {
        MomentumFunction::sum(self.dim, [self.clone(), rhs.scale(Complex64::new(-1.0, 0.0))])
    }
}

impl std::ops::Mul for &MomentumFunction {
    type Output = MomentumFunction;
    fn mul(self, rhs: &MomentumFunction) -> MomentumFunction {
        self.product(rhs)
    }
}

impl std::ops::Neg for &MomentumFunction {
    type Output = MomentumFunction;
    fn neg(self) -> MomentumFunction {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c64, pauli};

    fn sample_fn() -> MomentumFunction {
        // σ₁ p₁ / E + σ₃ p₂ p₃
        let e = Scalar::energy(1.0);
        let a = MomentumFunction::constant(pauli(1).unwrap()).times_scalar(Scalar::p(0) * e.recip());
        let b = MomentumFunction::constant(pauli(3).unwrap()).times_scalar(Scalar::p(1) * Scalar::p(2));
        &a + &b
    }

    #[test]
    fn constant_has_zero_derivative() {
        let c = MomentumFunction::constant(pauli(2).unwrap());
        assert!(c.derivative(0).is_zero());
        let sampled = MomentumFunction::sampled(2, |_| pauli(2).unwrap());
        let d = sampled.derivative(1).eval(&[0.3, 1.0, -2.0]);
        assert!(d.max_abs() <= 1e-12);
    }

    #[test]
    fn analytic_matches_central_difference() {
        let f = sample_fn();
        for p in [[0.1, 0.2, 0.3], [-2.0, 1.0, 0.5], [3.0, -4.0, 0.0]] {
            for a in 0..3 {
                let exact = f.derivative(a).eval(&p);
                let numeric = f.numeric_derivative(a, &p);
                assert!(max_abs_diff(&exact, &numeric) < 1e-8);
            }
        }
    }

    #[test]
    fn product_rule_and_adjoint() {
        let f = sample_fn();
        let g = MomentumFunction::constant(pauli(2).unwrap().scale(c64(0.0, 1.0))).times_scalar(Scalar::p(2));
        let fg = f.product(&g);
        let p = [0.7, -0.4, 1.2];
        let lhs = fg.derivative(2).eval(&p);
        let rhs = f.derivative(2).eval(&p) * g.eval(&p) + f.eval(&p) * g.derivative(2).eval(&p);
        assert!(max_abs_diff(&lhs, &rhs) < 1e-14);
        assert!(max_abs_diff(&fg.adjoint().eval(&p), &fg.eval(&p).adjoint()) < 1e-15);
    }

    #[test]
    fn constant_products_fold() {
        let a = MomentumFunction::constant(pauli(1).unwrap());
        let b = MomentumFunction::constant(pauli(2).unwrap());
        assert!(a.product(&b).as_constant().is_some());
        assert!((&a - &a).max_abs(&[[0.0; 3]]) == 0.0);
    }

    #[test]
    fn batch_matches_pointwise() {
        let f = sample_fn();
        let g = f.product(&f.adjoint()).derivative(1);
        let pts: Vec<Momentum> = (0..300).map(|i| [0.01 * i as f64, -0.5, 1.0 - 0.003 * i as f64]).collect();
        let batch = g.eval_batch(&pts);
        for (i, p) in pts.iter().enumerate() {
            let m = g.eval(p).to_row_major();
            for (a, b) in m.iter().zip(&batch[i * 4..(i + 1) * 4]) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }
}
