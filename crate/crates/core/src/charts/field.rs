//! Scalar fields over a chart and Minkowski vectors of them.
//!
//! Every geometric formula in the crate is written once against [`Field`]
//! and runs on two backends: exact Taylor jets at a point ([`Jet`]) and
//! finite-difference grids ([`Grid`](super::grid::Grid)).

use super::jet::Jet;
use num_complex::Complex64 as C64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A complex-valued function on a chart that can be differentiated in `z`, `z̄`.
pub trait Field:
    Clone
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<C64, Output = Self>
    + Mul<f64, Output = Self>
    + Add<C64, Output = Self>
    + Add<f64, Output = Self>
{
    /// The constant function `c` on the same domain.
    fn constant_like(&self, c: C64) -> Self;
    fn dz(&self) -> Self;
    fn dzb(&self) -> Self;
    fn conj(&self) -> Self;
    fn re(&self) -> Self;
    fn im(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn recip(&self) -> Self;

    /// Largest modulus over the domain (the value itself for a jet).
    fn sup(&self) -> f64;

    /// Pointwise `sqrt(Σ |p_k|²)`; not differentiable.
    fn euclid(parts: &[Self]) -> Self;

    /// Pointwise image under `f`; not differentiable.
    fn pointwise(&self, f: impl Fn(C64) -> C64) -> Self;

    /// Smallest modulus over the domain.
    fn inf(&self) -> f64;

    fn zero_like(&self) -> Self {
        self.constant_like(C64::new(0.0, 0.0))
    }

    /// `|g|²` as a field.
    fn abs2(&self) -> Self {
        self.clone() * self.conj()
    }
}

impl Field for Jet {
    fn constant_like(&self, c: C64) -> Self {
        Jet::constant(c, self.order())
    }
    fn dz(&self) -> Self {
        Jet::dz(self)
    }
    fn dzb(&self) -> Self {
        Jet::dzb(self)
    }
    fn conj(&self) -> Self {
        Jet::conj(self)
    }
    fn re(&self) -> Self {
        Jet::re(self)
    }
    fn im(&self) -> Self {
        Jet::im(self)
    }
    fn sqrt(&self) -> Self {
        Jet::sqrt(self)
    }
    fn recip(&self) -> Self {
        Jet::recip(self)
    }
    fn sup(&self) -> f64 {
        self.value().norm()
    }
    fn euclid(parts: &[Self]) -> Self {
        let r = parts.iter().map(|p| p.value().norm_sqr()).sum::<f64>().sqrt();
        Jet::real(r, 0)
    }
    fn pointwise(&self, f: impl Fn(C64) -> C64) -> Self {
        Jet::constant(f(self.value()), 0)
    }
    fn inf(&self) -> f64 {
        self.value().norm()
    }
}

/// A vector of fields in `R^{n+1,1}` (index 0 timelike), complexified.
#[derive(Clone, Debug)]
pub struct MVec<S>(pub Vec<S>);

impl<S: Field> MVec<S> {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Bilinear Minkowski product.
    pub fn inner(&self, o: &Self) -> S {
        assert_eq!(self.dim(), o.dim(), "Minkowski dimension mismatch");
        let mut acc = -(self.0[0].clone() * o.0[0].clone());
        for (a, b) in self.0.iter().zip(o.0.iter()).skip(1) {
            acc = acc + a.clone() * b.clone();
        }
        acc
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        MVec(self.0.iter().map(f).collect())
    }

    pub fn dz(&self) -> Self {
        self.map(S::dz)
    }

    pub fn dzb(&self) -> Self {
        self.map(S::dzb)
    }

    pub fn conj(&self) -> Self {
        self.map(S::conj)
    }

    pub fn re(&self) -> Self {
        self.map(S::re)
    }

    pub fn zero_like(&self) -> Self {
        self.map(S::zero_like)
    }

    /// Constant vector `c` on the same domain as `self`.
    pub fn constant_like(&self, c: &[f64]) -> Self {
        assert_eq!(self.dim(), c.len(), "Minkowski dimension mismatch");
        MVec(self.0.iter().zip(c).map(|(s, &x)| s.constant_like(C64::new(x, 0.0))).collect())
    }

    /// Pointwise Euclidean length of the coordinate vector.
    pub fn norm(&self) -> S {
        S::euclid(&self.0)
    }

    /// Pointwise `sqrt|<v, v̄>|`, the Lorentz-invariant length of normal fields.
    pub fn mnorm(&self) -> S {
        self.inner(&self.conj()).pointwise(|x| C64::new(x.norm().sqrt(), 0.0))
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|x| x.clone() * k.clone())
    }
}

impl<S: Field> Add for &MVec<S> {
    type Output = MVec<S>;
    fn add(self, o: &MVec<S>) -> MVec<S> {
        MVec(self.0.iter().zip(&o.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<S: Field> Sub for &MVec<S> {
    type Output = MVec<S>;
    fn sub(self, o: &MVec<S>) -> MVec<S> {
        MVec(self.0.iter().zip(&o.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<S: Field> Neg for &MVec<S> {
    type Output = MVec<S>;
    fn neg(self) -> MVec<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Field> Mul<&S> for &MVec<S> {
    type Output = MVec<S>;
    fn mul(self, k: &S) -> MVec<S> {
        self.scale(k)
    }
}

impl<S: Field> Mul<C64> for &MVec<S> {
    type Output = MVec<S>;
    fn mul(self, k: C64) -> MVec<S> {
        self.map(|x| x.clone() * k)
    }
}

impl<S: Field> Mul<f64> for &MVec<S> {
    type Output = MVec<S>;
    fn mul(self, k: f64) -> MVec<S> {
        self.map(|x| x.clone() * k)
    }
}

/// Sum of `coefficient * vector` terms.
pub fn lincomb<S: Field>(terms: &[(&S, &MVec<S>)]) -> MVec<S> {
    let mut it = terms.iter();
    let (k0, v0) = it.next().expect("empty linear combination");
    let mut acc = v0.scale(k0);
    for (k, v) in it {
        acc = &acc + &v.scale(k);
    }
    acc
}

/// Values of a jet vector at its expansion point.
pub fn jet_values(v: &MVec<Jet>) -> Vec<C64> {
    v.0.iter().map(Jet::value).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_matches_signature() {
        let one = Jet::real(1.0, 2);
        let a = MVec(vec![one, one, one * 0.0]);
        assert!(a.inner(&a).value().norm() < 1e-15);
        let t = MVec(vec![one, one * 0.0, one * 0.0]);
        assert!((t.inner(&t).value() + 1.0).norm() < 1e-15);
    }

    #[test]
    fn inner_product_rule() {
        let u = Jet::var_u(0.3, 4);
        let v = Jet::var_v(0.1, 4);
        let a = MVec(vec![u * v, u.sin(), v.exp()]);
        let b = MVec(vec![u + v, v * v, u.cos()]);
        let lhs = a.inner(&b).dz().value();
        let rhs = (a.dz().inner(&b) + a.inner(&b.dz())).value();
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
