//! Finite-difference fields on a uniform rectangular chart.
//!
//! A [`Grid`] stores one complex value per chart node together with the
//! window of nodes where the value is trustworthy. Each derivative shrinks
//! the window by the stencil half-width; binary operations intersect windows.

use super::field::Field;
use super::Chart;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Central first-derivative stencil of the given accuracy order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Stencil {
    Second,
    #[default]
    Fourth,
    Sixth,
    Eighth,
}

impl Stencil {
    pub fn from_order(p: usize) -> Result<Self> {
        match p {
            2 => Ok(Stencil::Second),
            4 => Ok(Stencil::Fourth),
            6 => Ok(Stencil::Sixth),
            8 => Ok(Stencil::Eighth),
            _ => Err(Error::Invalid(format!("unsupported stencil order {p}"))),
        }
    }

    pub fn order(self) -> usize {
        2 * self.half_width()
    }

    pub fn half_width(self) -> usize {
        self.weights().len()
    }

    /// `f'(x) ≈ Σ_k w_k (f(x+kh) − f(x−kh)) / h`, k = 1..=m.
    pub fn weights(self) -> &'static [f64] {
        match self {
            Stencil::Second => &[0.5],
            Stencil::Fourth => &[2.0 / 3.0, -1.0 / 12.0],
            Stencil::Sixth => &[0.75, -3.0 / 20.0, 1.0 / 60.0],
            Stencil::Eighth => &[0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0],
        }
    }
}

/// Half-open node window `[i0, i1) × [j0, j1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub i0: usize,
    pub i1: usize,
    pub j0: usize,
    pub j1: usize,
}

impl Window {
    pub fn intersect(self, o: Window) -> Window {
        Window { i0: self.i0.max(o.i0), i1: self.i1.min(o.i1), j0: self.j0.max(o.j0), j1: self.j1.min(o.j1) }
    }

    pub fn shrink(self, di: usize, dj: usize) -> Window {
        Window {
            i0: self.i0 + di,
            i1: self.i1.saturating_sub(di).max(self.i0 + di),
            j0: self.j0 + dj,
            j1: self.j1.saturating_sub(dj).max(self.j0 + dj),
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        (self.i0..self.i1).contains(&i) && (self.j0..self.j1).contains(&j)
    }

    pub fn is_empty(&self) -> bool {
        self.i0 >= self.i1 || self.j0 >= self.j1
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = *self;
        (w.j0..w.j1).flat_map(move |j| (w.i0..w.i1).map(move |i| (i, j)))
    }
}

#[derive(Debug, PartialEq)]
struct Shape {
    chart: Chart,
    stencil: Stencil,
}

/// A complex scalar field sampled on a chart.
#[derive(Clone, Debug)]
pub struct Grid {
    shape: Arc<Shape>,
    win: Window,
    data: Arc<Vec<C64>>,
    exact: Option<Arc<(Grid, Grid)>>,
}

impl Grid {
    /// Samples `f(i, j)` on every node of `chart`.
    pub fn from_fn(chart: &Chart, stencil: Stencil, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(chart.nu * chart.nv);
        for j in 0..chart.nv {
            for i in 0..chart.nu {
                data.push(f(i, j));
            }
        }
        Grid {
            shape: Arc::new(Shape { chart: chart.clone(), stencil }),
            win: Window { i0: 0, i1: chart.nu, j0: 0, j1: chart.nv },
            data: Arc::new(data),
            exact: None,
        }
    }

    /// Same domain as `self` with values `f(i, j)`.
    pub fn like(&self, f: impl Fn(usize, usize) -> C64) -> Self {
        let c = &self.shape.chart;
        let mut data = vec![C64::new(0.0, 0.0); c.nu * c.nv];
        for (i, j) in self.win.iter() {
            data[j * c.nu + i] = f(i, j);
        }
        Grid { shape: self.shape.clone(), win: self.win, data: Arc::new(data), exact: None }
    }

    /// Attaches exactly known `∂_z` and `∂_z̄`, used instead of differencing.
    pub fn with_derivatives(mut self, dz: Grid, dzb: Grid) -> Self {
        self.exact = Some(Arc::new((dz, dzb)));
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.shape.chart
    }

    pub fn stencil(&self) -> Stencil {
        self.shape.stencil
    }

    pub fn window(&self) -> Window {
        self.win
    }

    /// Value at node `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> Result<C64> {
        if !self.win.contains(i, j) {
            return Err(Error::OutOfInterior(i, j));
        }
        Ok(self.data[j * self.shape.chart.nu + i])
    }

    pub(crate) fn raw(&self, i: usize, j: usize) -> C64 {
        self.data[j * self.shape.chart.nu + i]
    }

    /// Restricts the trusted window.
    pub fn restrict(&self, w: Window) -> Self {
        let mut g = self.clone();
        g.win = g.win.intersect(w);
        g
    }

    /// Largest modulus over the window (0 for an empty window).
    pub fn sup(&self) -> f64 {
        self.win.iter().map(|(i, j)| self.raw(i, j).norm()).fold(0.0, f64::max)
    }

    /// Largest modulus over the intersection of the window with `w`.
    pub fn sup_on(&self, w: Window) -> f64 {
        self.win.intersect(w).iter().map(|(i, j)| self.raw(i, j).norm()).fold(0.0, f64::max)
    }

    fn zip(&self, o: &Grid, f: impl Fn(C64, C64) -> C64) -> Grid {
        assert!(
            Arc::ptr_eq(&self.shape, &o.shape) || self.shape == o.shape,
            "grid fields live on different charts"
        );
        let win = self.win.intersect(o.win);
        let nu = self.shape.chart.nu;
        let mut data = vec![C64::new(0.0, 0.0); self.data.len()];
        for (i, j) in win.iter() {
            let k = j * nu + i;
            data[k] = f(self.data[k], o.data[k]);
        }
        Grid { shape: self.shape.clone(), win, data: Arc::new(data), exact: None }
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Grid {
        let nu = self.shape.chart.nu;
        let mut data = vec![C64::new(0.0, 0.0); self.data.len()];
        for (i, j) in self.win.iter() {
            let k = j * nu + i;
            data[k] = f(self.data[k]);
        }
        Grid { shape: self.shape.clone(), win: self.win, data: Arc::new(data), exact: None }
    }

    fn diff(&self, along_u: bool) -> Grid {
        let st = self.shape.stencil;
        let w = st.weights();
        let m = st.half_width();
        let (nu, h) = (self.shape.chart.nu, self.shape.chart.h);
        let win = if along_u { self.win.shrink(m, 0) } else { self.win.shrink(0, m) };
        let mut data = vec![C64::new(0.0, 0.0); self.data.len()];
        for (i, j) in win.iter() {
            let mut acc = C64::new(0.0, 0.0);
            for (k, wk) in w.iter().enumerate() {
                let k = k + 1;
                let (p, q) = if along_u {
                    (self.data[j * nu + i + k], self.data[j * nu + i - k])
                } else {
                    (self.data[(j + k) * nu + i], self.data[(j - k) * nu + i])
                };
                acc += (p - q) * *wk;
            }
            data[j * nu + i] = acc / h;
        }
        Grid { shape: self.shape.clone(), win, data: Arc::new(data), exact: None }
    }

    pub fn du(&self) -> Grid {
        self.diff(true)
    }

    pub fn dv(&self) -> Grid {
        self.diff(false)
    }
}

impl Field for Grid {
    fn constant_like(&self, c: C64) -> Self {
        self.map(|_| c)
    }

    fn dz(&self) -> Self {
        if let Some(e) = &self.exact {
            return e.0.clone();
        }
        let (u, v) = (self.du(), self.dv());
        u.zip(&v, |a, b| (a - C64::i() * b) * 0.5)
    }

    fn dzb(&self) -> Self {
        if let Some(e) = &self.exact {
            return e.1.clone();
        }
        let (u, v) = (self.du(), self.dv());
        u.zip(&v, |a, b| (a + C64::i() * b) * 0.5)
    }

    fn conj(&self) -> Self {
        let mut g = self.map(|x| x.conj());
        if let Some(e) = &self.exact {
            g.exact = Some(Arc::new((e.1.conj(), e.0.conj())));
        }
        g
    }

    fn re(&self) -> Self {
        self.map(|x| C64::new(x.re, 0.0))
    }

    fn im(&self) -> Self {
        self.map(|x| C64::new(x.im, 0.0))
    }

    fn sqrt(&self) -> Self {
        self.map(|x| x.sqrt())
    }

    fn recip(&self) -> Self {
        self.map(|x| 1.0 / x)
    }

    fn sup(&self) -> f64 {
        Grid::sup(self)
    }

    fn euclid(parts: &[Self]) -> Self {
        let mut acc = parts[0].map(|x| C64::new(x.norm_sqr(), 0.0));
        for p in &parts[1..] {
            acc = acc.zip(p, |a, b| a + b.norm_sqr());
        }
        acc.map(|x| C64::new(x.re.sqrt(), 0.0))
    }
    fn pointwise(&self, f: impl Fn(C64) -> C64) -> Self {
        self.map(f)
    }
    fn inf(&self) -> f64 {
        self.win.iter().map(|(i, j)| self.raw(i, j).norm()).fold(f64::INFINITY, f64::min)
    }
}

impl Add for Grid {
    type Output = Grid;
    fn add(self, o: Grid) -> Grid {
        self.zip(&o, |a, b| a + b)
    }
}

impl Sub for Grid {
    type Output = Grid;
    fn sub(self, o: Grid) -> Grid {
        self.zip(&o, |a, b| a - b)
    }
}

impl Mul for Grid {
    type Output = Grid;
    fn mul(self, o: Grid) -> Grid {
        self.zip(&o, |a, b| a * b)
    }
}

impl Div for Grid {
    type Output = Grid;
    fn div(self, o: Grid) -> Grid {
        self.zip(&o, |a, b| a / b)
    }
}

impl Neg for Grid {
    type Output = Grid;
    fn neg(self) -> Grid {
        self.map(|x| -x)
    }
}

impl Mul<C64> for Grid {
    type Output = Grid;
    fn mul(self, k: C64) -> Grid {
        self.map(|x| x * k)
    }
}

impl Mul<f64> for Grid {
    type Output = Grid;
    fn mul(self, k: f64) -> Grid {
        self.map(|x| x * k)
    }
}

impl Add<C64> for Grid {
    type Output = Grid;
    fn add(self, k: C64) -> Grid {
        self.map(|x| x + k)
    }
}

impl Add<f64> for Grid {
    type Output = Grid;
    fn add(self, k: f64) -> Grid {
        self.map(|x| x + k)
    }
}

/// `(∂_z, ∂_z̄)` of `field` at node `(i, j)` by the grid's stencil.
pub fn wirtinger(field: &Grid, i: usize, j: usize) -> Result<(C64, C64)> {
    Ok((field.dz().at(i, j)?, field.dzb().at(i, j)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(h: f64, n: usize) -> Chart {
        Chart::new(C64::new(-0.5, -0.3), h, n, n).unwrap()
    }

    fn sample(c: &Chart, st: Stencil, f: impl Fn(C64) -> C64) -> Grid {
        Grid::from_fn(c, st, |i, j| f(c.z(i, j)))
    }

    #[test]
    fn constant_has_zero_derivative() {
        let c = chart(0.01, 20);
        let g = sample(&c, Stencil::Fourth, |_| C64::new(3.0, -1.0));
        let (dz, dzb) = wirtinger(&g, 10, 10).unwrap();
        assert_eq!(dz.norm() + dzb.norm(), 0.0);
    }

    #[test]
    fn holomorphic_monomial() {
        let c = chart(0.01, 20);
        let g = sample(&c, Stencil::Fourth, |z| z);
        let (dz, dzb) = wirtinger(&g, 10, 10).unwrap();
        assert!((dz - 1.0).norm() < 1e-12);
        assert!(dzb.norm() < 1e-12);
    }

    #[test]
    fn modulus_squared() {
        let c = chart(0.01, 20);
        let g = sample(&c, Stencil::Fourth, |z| z * z.conj());
        let z = c.z(7, 12);
        let (dz, dzb) = wirtinger(&g, 7, 12).unwrap();
        assert!((dz - z.conj()).norm() < 1e-10);
        assert!((dzb - z).norm() < 1e-10);
    }

    #[test]
    fn out_of_interior() {
        let c = chart(0.01, 20);
        let g = sample(&c, Stencil::Fourth, |z| z);
        assert!(matches!(wirtinger(&g, 1, 10), Err(Error::OutOfInterior(1, 10))));
        assert!(wirtinger(&g, 2, 2).is_ok());
    }

    #[test]
    fn real_field_conjugate_symmetry() {
        let c = chart(0.02, 24);
        let g = sample(&c, Stencil::Fourth, |z| C64::new((z.re * z.im).sin(), 0.0));
        let d = g.dz().conj() - g.dzb();
        assert!(d.sup() < 1e-14);
    }

    #[test]
    fn observed_order_matches_stencil() {
        for st in [Stencil::Second, Stencil::Fourth, Stencil::Sixth] {
            let f = |z: C64| (z * 1.3).exp() * z.conj();
            let exact = |z: C64| (z * 1.3).exp() * 1.3 * z.conj();
            let err = |h: f64| {
                let c = Chart::new(C64::new(0.2, 0.1) - C64::new(10.0 * h, 10.0 * h), h, 21, 21).unwrap();
                let g = sample(&c, st, f).dz();
                (g.at(10, 10).unwrap() - exact(c.z(10, 10))).norm()
            };
            let p = (err(0.04) / err(0.02)).log2();
            assert!((p - st.order() as f64).abs() < 0.5, "{st:?}: observed {p}");
        }
    }

    #[test]
    fn exact_derivatives_override() {
        let c = chart(0.1, 10);
        let g = sample(&c, Stencil::Fourth, |z| z);
        let one = g.constant_like(C64::new(1.0, 0.0));
        let zero = g.zero_like();
        let g = g.with_derivatives(one, zero);
        assert_eq!(g.dz().window().i0, 0);
        assert_eq!(g.conj().dzb().at(0, 0).unwrap(), C64::new(1.0, 0.0));
    }
}
