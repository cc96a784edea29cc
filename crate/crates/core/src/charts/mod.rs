//! Complex charts, immersions into `S^n`, and derivative backends.

pub mod field;
pub mod grid;
pub mod jet;

use crate::error::{Error, Result};
use field::MVec;
use grid::{Grid, Stencil};
use jet::{Jet, MAX_ORDER};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Uniform rectangular chart; node `(i, j)` sits at `origin + i·h + i·(j·h)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    #[serde(with = "complex_pair")]
    pub origin: C64,
    pub h: f64,
    #[serde(rename = "Nu")]
    pub nu: usize,
    #[serde(rename = "Nv")]
    pub nv: usize,
}

impl Chart {
    pub fn new(origin: C64, h: f64, nu: usize, nv: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Invalid(format!("chart spacing must be positive, got {h}")));
        }
        if nu == 0 || nv == 0 {
            return Err(Error::Invalid("chart must have at least one node per side".into()));
        }
        Ok(Chart { origin, h, nu, nv })
    }

    /// Chart of `nu × nv` nodes centred on `center`.
    pub fn centered(center: C64, h: f64, nu: usize, nv: usize) -> Result<Self> {
        let origin = center - C64::new((nu - 1) as f64, (nv - 1) as f64) * (h / 2.0);
        Chart::new(origin, h, nu, nv)
    }

    pub fn z(&self, i: usize, j: usize) -> C64 {
        self.origin + C64::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes at least `margin` cells away from the boundary.
    pub fn interior(&self, margin: usize) -> grid::Window {
        grid::Window {
            i0: margin,
            i1: self.nu.saturating_sub(margin).max(margin),
            j0: margin,
            j1: self.nv.saturating_sub(margin).max(margin),
        }
    }

    pub fn center_node(&self) -> (usize, usize) {
        (self.nu / 2, self.nv / 2)
    }

    /// Evaluates `f` at every node in parallel; results in row-major order.
    pub fn par_map<T: Send>(&self, f: impl Fn(usize, usize) -> T + Sync + Send) -> Vec<T> {
        (0..self.len()).into_par_iter().map(|k| f(k % self.nu, k / self.nu)).collect()
    }
}

mod complex_pair {
    use num_complex::Complex64 as C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// A conformal immersion of a chart domain into the unit sphere `S^n ⊂ R^{n+1}`.
///
/// Implementors describe `f` as a composition of jet operations so that
/// partial derivatives of every order are exact.
pub trait Immersion: Send + Sync {
    /// Dimension `n` of the target sphere.
    fn n(&self) -> usize;

    /// The `n + 1` coordinates of `f(u, v)` for arbitrary real-valued jets `u`, `v`.
    fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet>;

    fn name(&self) -> String {
        "immersion".into()
    }

    fn eval(&self, z: C64) -> Vec<f64> {
        self.eval_jet(Jet::real(z.re, 0), Jet::real(z.im, 0)).iter().map(|x| x.value().re).collect()
    }

    /// `F = (1, f)` expanded at `z` to `order`.
    fn flat_lift_jet(&self, z: C64, order: usize) -> MVec<Jet> {
        let f = self.eval_jet(Jet::var_u(z.re, order), Jet::var_v(z.im, order));
        let mut comps = Vec::with_capacity(f.len() + 1);
        comps.push(Jet::real(1.0, order));
        comps.extend(f);
        MVec(comps)
    }
}

impl<T: Immersion + ?Sized> Immersion for Box<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
        (**self).eval_jet(u, v)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

impl<T: Immersion + ?Sized> Immersion for std::sync::Arc<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
        (**self).eval_jet(u, v)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

/// `f ∘ φ` for a holomorphic chart map `z = φ(w)`, given on complex jets.
pub struct Reparametrized<I> {
    pub inner: I,
    pub map: fn(Jet) -> Jet,
    pub label: String,
}

impl<I: Immersion> Immersion for Reparametrized<I> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
        let w = u + v * C64::i();
        let z = (self.map)(w);
        self.inner.eval_jet(z.re(), z.im())
    }
    fn name(&self) -> String {
        format!("{}@{}", self.inner.name(), self.label)
    }
}

/// `f(z + delta)`; a chart translation of the same surface.
pub struct Shifted<I> {
    pub inner: I,
    pub delta: C64,
}

impl<I: Immersion> Immersion for Shifted<I> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
        self.inner.eval_jet(u + self.delta.re, v + self.delta.im)
    }
    fn name(&self) -> String {
        format!("{}+({},{})", self.inner.name(), self.delta.re, self.delta.im)
    }
}

/// `|⟨F_z, F_z⟩|` of the flat lift at `z`; zero exactly for conformal charts.
pub fn conformality_residual_at(f: &dyn Immersion, z: C64) -> f64 {
    let fz = f.flat_lift_jet(z, 1).dz();
    fz.inner(&fz).value().norm()
}

/// [`conformality_residual_at`] on every node of `chart`.
pub fn conformality_residual(f: &dyn Immersion, chart: &Chart) -> Grid {
    let vals = chart.par_map(|i, j| conformality_residual_at(f, chart.z(i, j)));
    Grid::from_fn(chart, Stencil::default(), |i, j| C64::new(vals[j * chart.nu + i], 0.0))
}

/// Jet of the flat lift at the highest supported order.
pub fn flat_lift(f: &dyn Immersion, z: C64) -> MVec<Jet> {
    f.flat_lift_jet(z, MAX_ORDER)
}

/// Optional exact partials of a sampled surface, each row-major like `points`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SamplePartials {
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub uu: Vec<Vec<f64>>,
    pub uv: Vec<Vec<f64>>,
    pub vv: Vec<Vec<f64>>,
}

/// Surface sample file: `points[j * Nu + i]` is `f(z(i, j)) ∈ S^n`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SurfaceSamples {
    pub n: usize,
    pub chart: Chart,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partials: Option<SamplePartials>,
}

impl SurfaceSamples {
    /// Samples an immersion, including exact partials up to order two.
    pub fn from_immersion(f: &dyn Immersion, chart: &Chart) -> Self {
        let jets = chart.par_map(|i, j| {
            let z = chart.z(i, j);
            f.eval_jet(Jet::var_u(z.re, 2), Jet::var_v(z.im, 2))
        });
        let pick = |a: usize, b: usize| -> Vec<Vec<f64>> {
            jets.iter().map(|p| p.iter().map(|x| x.partial(a, b).re).collect()).collect()
        };
        SurfaceSamples {
            n: f.n(),
            chart: chart.clone(),
            points: pick(0, 0),
            partials: Some(SamplePartials { u: pick(1, 0), v: pick(0, 1), uu: pick(2, 0), uv: pick(1, 1), vv: pick(0, 2) }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let count = self.chart.nu * self.chart.nv;
        let check_shape = |rows: &Vec<Vec<f64>>, what: &str| -> Result<()> {
            if rows.len() != count {
                return Err(Error::Invalid(format!("{what}: expected {count} rows, found {}", rows.len())));
            }
            if let Some(r) = rows.iter().find(|r| r.len() != self.n + 1) {
                return Err(Error::DimensionMismatch(r.len(), self.n + 1));
            }
            Ok(())
        };
        Chart::new(self.chart.origin, self.chart.h, self.chart.nu, self.chart.nv)?;
        check_shape(&self.points, "points")?;
        for (k, p) in self.points.iter().enumerate() {
            let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (r - 1.0).abs() > 1e-9 {
                return Err(Error::Invalid(format!("point {k} has norm {r}, expected 1")));
            }
        }
        if let Some(p) = &self.partials {
            for (rows, what) in [(&p.u, "u"), (&p.v, "v"), (&p.uu, "uu"), (&p.uv, "uv"), (&p.vv, "vv")] {
                check_shape(rows, what)?;
            }
        }
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let s: SurfaceSamples = serde_json::from_str(&text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    fn component_grid(&self, rows: &[Vec<f64>], c: usize, stencil: Stencil) -> Grid {
        let nu = self.chart.nu;
        Grid::from_fn(&self.chart, stencil, |i, j| C64::new(rows[j * nu + i][c], 0.0))
    }

    /// Flat lift `F = (1, f)` as grid fields. With partials present the
    /// fields carry exact first derivatives, which carry exact second ones.
    pub fn flat_lift_grid(&self, stencil: Stencil) -> MVec<Grid> {
        let mut comps = Vec::with_capacity(self.n + 2);
        let one = Grid::from_fn(&self.chart, stencil, |_, _| C64::new(1.0, 0.0));
        let zero = one.zero_like_grid();
        comps.push(match &self.partials {
            Some(_) => one.clone().with_derivatives(
                zero.clone().with_derivatives(zero.clone(), zero.clone()),
                zero.clone().with_derivatives(zero.clone(), zero.clone()),
            ),
            None => one.clone(),
        });
        for c in 0..=self.n {
            let f = self.component_grid(&self.points, c, stencil);
            let f = match &self.partials {
                None => f,
                Some(p) => {
                    let g = |rows: &Vec<Vec<f64>>| self.component_grid(rows, c, stencil);
                    let (fu, fv, fuu, fuv, fvv) = (g(&p.u), g(&p.v), g(&p.uu), g(&p.uv), g(&p.vv));
                    let i = C64::i();
                    let fz = (fu.clone() - fv.clone() * i) * 0.5;
                    let fzb = (fu + fv * i) * 0.5;
                    let fzz = (fuu.clone() - fvv.clone() - fuv.clone() * (2.0 * i)) * 0.25;
                    let fzbzb = (fuu.clone() - fvv.clone() + fuv * (2.0 * i)) * 0.25;
                    let fzzb = (fuu + fvv) * 0.25;
                    f.with_derivatives(
                        fz.with_derivatives(fzz, fzzb.clone()),
                        fzb.with_derivatives(fzzb, fzbzb),
                    )
                }
            };
            comps.push(f);
        }
        MVec(comps)
    }
}

impl Grid {
    fn zero_like_grid(&self) -> Grid {
        use field::Field;
        self.zero_like()
    }
}

/// Largest deviation of `|f|` from 1 over the chart nodes.
pub fn unit_defect(f: &dyn Immersion, chart: &Chart) -> f64 {
    chart
        .par_map(|i, j| {
            let p = f.eval(chart.z(i, j));
            (p.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs()
        })
        .into_iter()
        .fold(0.0, f64::max)
}
