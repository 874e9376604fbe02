//! Real scalar expressions in the momentum components, closed under symbolic
//! differentiation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::Momentum;

#[derive(Clone)]
pub struct Scalar(Arc<Node>);

enum Node {
    Const(f64),
    P(usize),
    Sum(Vec<Scalar>),
    Product(Vec<Scalar>),
    Pow(Scalar, f64),
}

impl Scalar {
    pub fn constant(c: f64) -> Self {
        Scalar(Arc::new(Node::Const(c)))
    }

    /// The momentum component `p_a`, `a ∈ 0..3`.
    pub fn p(a: usize) -> Self {
        assert!(a < 3, "momentum component {a} out of range");
        Scalar(Arc::new(Node::P(a)))
    }

    /// `|p|²`.
    pub fn p_squared() -> Self {
        Scalar::sum((0..3).map(|a| Scalar::p(a) * Scalar::p(a)).collect())
    }

    /// `√(|p|² + m²)`.
    pub fn energy(mass: f64) -> Self {
        (Scalar::p_squared() + Scalar::constant(mass * mass)).powf(0.5)
    }

    pub fn as_const(&self) -> Option<f64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn sum(terms: Vec<Scalar>) -> Self {
        let mut constant = 0.0;
        let mut rest = Vec::new();
        for t in terms {
            match &*t.0 {
                Node::Const(c) => constant += c,
                Node::Sum(inner) => {
                    for s in inner {
                        match s.as_const() {
                            Some(c) => constant += c,
                            None => rest.push(s.clone()),
                        }
                    }
                }
                _ => rest.push(t),
            }
        }
        if constant != 0.0 {
            rest.push(Scalar::constant(constant));
        }
        match rest.len() {
            0 => Scalar::constant(0.0),
            1 => rest.pop().unwrap(),
            _ => Scalar(Arc::new(Node::Sum(rest))),
        }
    }

    pub fn product(factors: Vec<Scalar>) -> Self {
        let mut constant = 1.0;
        let mut rest = Vec::new();
        for f in factors {
            match &*f.0 {
                Node::Const(c) => constant *= c,
                Node::Product(inner) => {
                    for s in inner {
                        match s.as_const() {
                            Some(c) => constant *= c,
                            None => rest.push(s.clone()),
                        }
                    }
                }
                _ => rest.push(f),
            }
        }
        if constant == 0.0 {
            return Scalar::constant(0.0);
        }
        if constant != 1.0 {
            rest.insert(0, Scalar::constant(constant));
        }
        match rest.len() {
            0 => Scalar::constant(1.0),
            1 => rest.pop().unwrap(),
            _ => Scalar(Arc::new(Node::Product(rest))),
        }
    }

    pub fn powf(&self, exponent: f64) -> Self {
        if exponent == 0.0 {
            return Scalar::constant(1.0);
        }
        if exponent == 1.0 {
            return self.clone();
        }
        match &*self.0 {
            Node::Const(c) => Scalar::constant(c.powf(exponent)),
            Node::Pow(base, r) => base.powf(r * exponent),
            _ => Scalar(Arc::new(Node::Pow(self.clone(), exponent))),
        }
    }

    pub fn recip(&self) -> Self {
        self.powf(-1.0)
    }

    pub fn eval(&self, p: &Momentum) -> f64 {
        match &*self.0 {
            Node::Const(c) => *c,
            Node::P(a) => p[*a],
            Node::Sum(ts) => ts.iter().map(|t| t.eval(p)).sum(),
            Node::Product(fs) => fs.iter().map(|f| f.eval(p)).product(),
            Node::Pow(base, r) => {
                let b = base.eval(p);
                if *r == 0.5 {
                    b.sqrt()
                } else if *r == -0.5 {
                    1.0 / b.sqrt()
                } else if r.fract() == 0.0 && r.abs() < 16.0 {
                    b.powi(*r as i32)
                } else {
                    b.powf(*r)
                }
            }
        }
    }

    /// Values at every point of `pts`, memoized by node so shared subtrees
    /// are evaluated once per batch.
    pub(crate) fn eval_batch_cached(&self, pts: &[Momentum], cache: &mut HashMap<usize, Arc<Vec<f64>>>) -> Arc<Vec<f64>> {
        let key = Arc::as_ptr(&self.0) as usize;
        if let Some(v) = cache.get(&key) {
            return v.clone();
        }
        let value: Vec<f64> = match &*self.0 {
            Node::Const(c) => vec![*c; pts.len()],
            Node::P(a) => pts.iter().map(|p| p[*a]).collect(),
            Node::Sum(ts) => {
                let mut acc = vec![0.0; pts.len()];
                for t in ts {
                    for (a, v) in acc.iter_mut().zip(t.eval_batch_cached(pts, cache).iter()) {
                        *a += v;
                    }
                }
                acc
            }
            Node::Product(fs) => {
                let mut acc = vec![1.0; pts.len()];
                for f in fs {
                    for (a, v) in acc.iter_mut().zip(f.eval_batch_cached(pts, cache).iter()) {
                        *a *= v;
                    }
                }
                acc
            }
            Node::Pow(base, r) => {
                let r = *r;
                base.eval_batch_cached(pts, cache)
                    .iter()
                    .map(|&b| {
                        if r == 0.5 {
                            b.sqrt()
                        } else if r == -0.5 {
                            1.0 / b.sqrt()
                        } else if r.fract() == 0.0 && r.abs() < 16.0 {
                            b.powi(r as i32)
                        } else {
                            b.powf(r)
                        }
                    })
                    .collect()
            }
        };
        let value = Arc::new(value);
        cache.insert(key, value.clone());
        value
    }

    /// `∂/∂p_a`.
    pub fn derivative(&self, a: usize) -> Scalar {
        match &*self.0 {
            Node::Const(_) => Scalar::constant(0.0),
            Node::P(b) => Scalar::constant(if *b == a { 1.0 } else { 0.0 }),
            Node::Sum(ts) => Scalar::sum(ts.iter().map(|t| t.derivative(a)).collect()),
            Node::Product(fs) => {
                let mut terms = Vec::new();
                for i in 0..fs.len() {
                    let d = fs[i].derivative(a);
                    if d.is_zero() {
                        continue;
                    }
                    let mut factors: Vec<Scalar> = Vec::with_capacity(fs.len());
                    for (j, f) in fs.iter().enumerate() {
                        factors.push(if i == j { d.clone() } else { f.clone() });
                    }
                    terms.push(Scalar::product(factors));
                }
                Scalar::sum(terms)
            }
            Node::Pow(base, r) => {
                let d = base.derivative(a);
                if d.is_zero() {
                    return Scalar::constant(0.0);
                }
                Scalar::product(vec![Scalar::constant(*r), base.powf(r - 1.0), d])
            }
        }
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar::sum(vec![self, rhs])
    }
}

impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar::sum(vec![self, Scalar::product(vec![Scalar::constant(-1.0), rhs])])
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar::product(vec![self, rhs])
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::P(a) => write!(f, "p{}", a + 1),
            Node::Sum(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t:?}")?;
                }
                write!(f, ")")
            }
            Node::Product(fs) => {
                for (i, t) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "{t:?}")?;
                }
                Ok(())
            }
            Node::Pow(b, r) => write!(f, "{b:?}^{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_derivative_is_p_over_e() {
        let e = Scalar::energy(1.3);
        let p = [0.4, -1.1, 2.0];
        let ev = e.eval(&p);
        for a in 0..3 {
            let d = e.derivative(a).eval(&p);
            assert!((d - p[a] / ev).abs() < 1e-15);
        }
    }

    #[test]
    fn second_derivative_of_energy() {
        let m = 0.7;
        let e = Scalar::energy(m);
        let p = [0.3, 0.2, -0.5];
        let ev = e.eval(&p);
        for a in 0..3 {
            for b in 0..3 {
                let d2 = e.derivative(a).derivative(b).eval(&p);
                let delta = if a == b { 1.0 } else { 0.0 };
                let expect = delta / ev - p[a] * p[b] / ev.powi(3);
                assert!((d2 - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn constants_fold() {
        let s = Scalar::constant(2.0) * Scalar::constant(3.0) + Scalar::constant(1.0);
        assert_eq!(s.as_const(), Some(7.0));
        assert!(Scalar::p(0).derivative(1).is_zero());
        assert!((Scalar::constant(0.0) * Scalar::p(2)).is_zero());
    }
}
