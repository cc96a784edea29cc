//! Truncated bivariate Taylor jets in the chart variables `(u, v)`.
//!
//! A [`Jet`] of order `k` stores the normalized Taylor coefficients
//! `c[a,b] = ∂_u^a ∂_v^b g / (a! b!)` for `a + b <= k` with complex values.
//! Arithmetic truncates to the smaller order of its operands and every
//! derivative lowers the order by one, so a jet never claims more accuracy
//! than its inputs carry.

use num_complex::Complex64 as C64;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::LazyLock;

/// Highest supported total degree.
pub const MAX_ORDER: usize = 9;
const NCOEF: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

#[inline]
const fn idx(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

#[inline]
const fn ncoef(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

struct Tables {
    /// `(a, b)` exponents of each slot.
    exps: Vec<(usize, usize)>,
    /// Product pairs contributing to each output slot, grouped by output slot.
    pairs: Vec<(u8, u8)>,
    start: Vec<usize>,
}

static TABLES: LazyLock<Tables> = LazyLock::new(|| {
    let mut exps = vec![(0, 0); NCOEF];
    for d in 0..=MAX_ORDER {
        for b in 0..=d {
            exps[idx(d - b, b)] = (d - b, b);
        }
    }
    let mut pairs = Vec::new();
    let mut start = vec![0];
    for &(a, b) in exps.iter() {
        for i in 0..NCOEF {
            let (a1, b1) = exps[i];
            if a1 <= a && b1 <= b {
                pairs.push((i as u8, idx(a - a1, b - b1) as u8));
            }
        }
        start.push(pairs.len());
    }
    Tables { exps, pairs, start }
});

const ZERO: C64 = C64::new(0.0, 0.0);

/// A truncated Taylor expansion in the chart variables.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    order: u8,
    c: [C64; NCOEF],
}

impl Jet {
    pub fn constant(value: C64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [ZERO; NCOEF];
        c[0] = value;
        Self { order: order as u8, c }
    }

    pub fn real(value: f64, order: usize) -> Self {
        Self::constant(C64::new(value, 0.0), order)
    }

    /// The coordinate function `u` expanded at `u0`.
    pub fn var_u(u0: f64, order: usize) -> Self {
        let mut j = Self::real(u0, order);
        if order >= 1 {
            j.c[idx(1, 0)] = C64::new(1.0, 0.0);
        }
        j
    }

    /// The coordinate function `v` expanded at `v0`.
    pub fn var_v(v0: f64, order: usize) -> Self {
        let mut j = Self::real(v0, order);
        if order >= 1 {
            j.c[idx(0, 1)] = C64::new(1.0, 0.0);
        }
        j
    }

    /// The holomorphic coordinate `z = u + i v` expanded at `z0`.
    pub fn var_z(z0: C64, order: usize) -> Self {
        Self::var_u(z0.re, order) + Self::var_v(z0.im, order) * C64::new(0.0, 1.0)
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn value(&self) -> C64 {
        self.c[0]
    }

    /// `∂_u^a ∂_v^b` at the expansion point.
    pub fn partial(&self, a: usize, b: usize) -> C64 {
        assert!(a + b <= self.order(), "partial of degree {} beyond jet order {}", a + b, self.order);
        self.c[idx(a, b)] * (factorial(a) * factorial(b))
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        let mut c = [ZERO; NCOEF];
        c[..ncoef(order)].copy_from_slice(&self.c[..ncoef(order)]);
        Self { order: order as u8, c }
    }

    pub fn du(&self) -> Self {
        self.derive(1, 0)
    }

    pub fn dv(&self) -> Self {
        self.derive(0, 1)
    }

    fn derive(&self, da: usize, db: usize) -> Self {
        assert!(self.order >= 1, "jet order exhausted by differentiation");
        let order = self.order() - 1;
        let t = &*TABLES;
        let mut c = [ZERO; NCOEF];
        for (k, slot) in c.iter_mut().enumerate().take(ncoef(order)) {
            let (a, b) = t.exps[k];
            let factor = if da == 1 { a + 1 } else { b + 1 };
            *slot = self.c[idx(a + da, b + db)] * factor as f64;
        }
        Self { order: order as u8, c }
    }

    /// Wirtinger derivative `∂_z = (∂_u - i ∂_v) / 2`.
    pub fn dz(&self) -> Self {
        let (u, v) = (self.du(), self.dv());
        (u - v * C64::new(0.0, 1.0)) * 0.5
    }

    /// Wirtinger derivative `∂_z̄ = (∂_u + i ∂_v) / 2`.
    pub fn dzb(&self) -> Self {
        let (u, v) = (self.du(), self.dv());
        (u + v * C64::new(0.0, 1.0)) * 0.5
    }

    /// Complex conjugate of the represented function (the variables are real).
    pub fn conj(&self) -> Self {
        self.map_coeffs(|x| x.conj())
    }

    pub fn re(&self) -> Self {
        self.map_coeffs(|x| C64::new(x.re, 0.0))
    }

    pub fn im(&self) -> Self {
        self.map_coeffs(|x| C64::new(x.im, 0.0))
    }

    fn map_coeffs(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut out = *self;
        for x in out.c.iter_mut().take(ncoef(self.order())) {
            *x = f(*x);
        }
        out
    }

    /// Evaluates `g(self)` from the normalized derivatives `g^(k)(x0)/k!`,
    /// `k = 0..=order`, at `x0 = self.value()`.
    fn compose(&self, taylor: &[C64]) -> Self {
        let order = self.order();
        let mut delta = *self;
        delta.c[0] = ZERO;
        let mut acc = Jet::constant(taylor[order], order);
        for k in (0..order).rev() {
            acc = acc * delta;
            acc.c[0] += taylor[k];
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let t: Vec<C64> = (0..=self.order()).map(|k| e / factorial(k)).collect();
        self.compose(&t)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cyc = [s, c, -s, -c];
        let t: Vec<C64> = (0..=self.order()).map(|k| cyc[k % 4] / factorial(k)).collect();
        self.compose(&t)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cyc = [c, -s, -c, s];
        let t: Vec<C64> = (0..=self.order()).map(|k| cyc[k % 4] / factorial(k)).collect();
        self.compose(&t)
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        let t: Vec<C64> = (0..=self.order())
            .map(|k| if k % 2 == 0 { s } else { c } / factorial(k))
            .collect();
        self.compose(&t)
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        let t: Vec<C64> = (0..=self.order())
            .map(|k| if k % 2 == 0 { c } else { s } / factorial(k))
            .collect();
        self.compose(&t)
    }

    pub fn tanh(&self) -> Self {
        self.sinh() * self.cosh().recip()
    }

    /// `x^p` for real `p` on the principal branch.
    pub fn powf(&self, p: f64) -> Self {
        let x0 = self.value();
        let mut t = Vec::with_capacity(self.order() + 1);
        let mut binom = 1.0;
        for k in 0..=self.order() {
            t.push(x0.powf(p - k as f64) * binom);
            binom *= (p - k as f64) / (k as f64 + 1.0);
        }
        self.compose(&t)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Self {
        let inv = 1.0 / self.value();
        let mut t = Vec::with_capacity(self.order() + 1);
        let mut p = inv;
        for k in 0..=self.order() {
            t.push(if k % 2 == 0 { p } else { -p });
            p *= inv;
        }
        self.compose(&t)
    }

    pub fn ln(&self) -> Self {
        let x0 = self.value();
        let mut t = vec![x0.ln()];
        for k in 1..=self.order() {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            t.push(sign / (k as f64 * x0.powi(k as i32)));
        }
        self.compose(&t)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut c = [ZERO; NCOEF];
        for k in 0..ncoef(order as usize) {
            c[k] = self.c[k] + o.c[k];
        }
        Jet { order, c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut c = [ZERO; NCOEF];
        for k in 0..ncoef(order as usize) {
            c[k] = self.c[k] - o.c[k];
        }
        Jet { order, c }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_coeffs(|x| -x)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let t = &*TABLES;
        let mut c = [ZERO; NCOEF];
        for (k, slot) in c.iter_mut().enumerate().take(ncoef(order as usize)) {
            let mut acc = ZERO;
            for &(i, j) in &t.pairs[t.start[k]..t.start[k + 1]] {
                acc += self.c[i as usize] * o.c[j as usize];
            }
            *slot = acc;
        }
        Jet { order, c }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Mul<C64> for Jet {
    type Output = Jet;
    fn mul(self, k: C64) -> Jet {
        self.map_coeffs(|x| x * k)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.map_coeffs(|x| x * k)
    }
}

impl Add<C64> for Jet {
    type Output = Jet;
    fn add(mut self, k: C64) -> Jet {
        self.c[0] += k;
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, k: f64) -> Jet {
        self.c[0] += k;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, k: f64) -> Jet {
        self.c[0] -= k;
        self
    }
}
