//! Single-surface classifiers: Willmore and S-Willmore tests, isothermic
//! charts, and the curvature-line coordinate `dw = √θ dz`.

use crate::charts::field::{Field, MVec};
use crate::charts::grid::{Grid, Window};
use crate::error::{Error, Result};
use crate::frame::FrameFields;
use crate::pair::{PairFields, PairInvariants};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

/// Floor on `<κ, κ̄>` relative to the frame scale below which a point is umbilic.
pub const UMBILIC_FLOOR: f64 = 1e-12;

/// `D_z̄ D_z̄ κ + ½ s̄ κ`, which vanishes exactly on Willmore surfaces.
pub fn willmore_field<S: Field>(fr: &FrameFields<S>) -> MVec<S> {
    let k1 = fr.kappa_zb();
    let k2 = fr.d_zb(&k1);
    &k2 + &fr.kappa.scale(&(fr.s.conj() * 0.5))
}

pub fn willmore_residual<S: Field>(fr: &FrameFields<S>) -> S {
    willmore_field(fr).mnorm()
}

/// Comparison scale of the Willmore residual: `‖D_z̄D_z̄κ‖ + ½|s| ‖κ‖`.
pub fn willmore_scale<S: Field>(fr: &FrameFields<S>) -> S {
    let k2 = fr.d_zb(&fr.kappa_zb());
    k2.mnorm() + S::euclid(std::slice::from_ref(&fr.s)) * fr.kappa.mnorm() * 0.5
}

/// `μ` from the strong condition `D_z̄κ + (μ̄/2)κ = 0` and how well it holds.
#[derive(Clone, Debug)]
pub struct SWillmoreData<S> {
    pub mu: S,
    pub dependence_residual: S,
}

/// Least-squares `μ̄ = −2<D_z̄κ, κ̄>/<κ, κ̄>`; the residual is measured against
/// `‖D_z̄κ‖ + ‖κ‖^{3/2}`, which scales like `D_z̄κ` under `z → λz`.
pub fn swillmore_extract<S: Field>(fr: &FrameFields<S>) -> Result<SWillmoreData<S>> {
    let kk = fr.kappa_sq();
    let frame_scale = fr.y_z.norm().sup().powi(2).max(1.0);
    let kmin = kk.inf();
    if !(kmin >= UMBILIC_FLOOR * frame_scale) {
        return Err(Error::UmbilicPoint(kmin));
    }
    let dk = fr.kappa_zb();
    let mub = dk.inner(&fr.kappa.conj()) * kk.recip() * (-2.0);
    let defect = &dk + &fr.kappa.scale(&(mub.clone() * 0.5));
    let num = defect.mnorm();
    let den = dk.mnorm() + kk.pointwise(|x| C64::new(x.re.abs().powf(0.75), 0.0));
    let ratio = (num / den).pointwise(|x| if x.re.is_finite() { x } else { C64::new(0.0, 0.0) });
    Ok(SWillmoreData { mu: mub.conj(), dependence_residual: ratio })
}

/// `‖Im κ‖ / ‖κ‖` in the given chart (sup over sup on grids), with the
/// Minkowski length of normal fields.
pub fn isothermic_verify<S: Field>(kappa: &MVec<S>) -> Result<f64> {
    let total = kappa.mnorm().sup();
    if !(total >= 1e-12) {
        return Err(Error::UmbilicPoint(total));
    }
    Ok(kappa.map(|x| x.im()).mnorm().sup() / total)
}

/// The chart map `w(z)` with `dw = √θ dz`, sampled on a grid.
#[derive(Clone, Debug)]
pub struct ThetaCoordinate {
    pub base: (usize, usize),
    pub w: Grid,
    pub sqrt_theta: Grid,
    /// `sup |w_z̄| / sup |w_z|` by finite differences.
    pub cauchy_riemann: f64,
    /// `sup |w_z − √θ| / sup |√θ|` by finite differences.
    pub derivative_defect: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaTolerances {
    pub holomorphy: f64,
    pub zero_floor: f64,
}

impl Default for ThetaTolerances {
    fn default() -> Self {
        ThetaTolerances { holomorphy: 1e-5, zero_floor: 1e-8 }
    }
}

fn nearest_root(t: C64, prev: C64) -> C64 {
    let r = t.sqrt();
    if (r - prev).norm() <= (-r - prev).norm() {
        r
    } else {
        -r
    }
}

/// Integrates `dw = √θ dz` from `base`, first along the base row and then up
/// and down each column, choosing at each node the root of `θ` closest to its
/// predecessor. Uses the end-corrected trapezoid rule, exact to fourth order.
pub fn theta_coordinate(theta: &Grid, base: (usize, usize), tol: &ThetaTolerances) -> Result<ThetaCoordinate> {
    let tz = theta.dz();
    let tzb = theta.dzb();
    let win = tz.window().intersect(tzb.window());
    if !win.contains(base.0, base.1) {
        return Err(Error::OutOfInterior(base.0, base.1));
    }
    let scale = tz.sup_on(win).max(theta.sup_on(win));
    let tzb_sup = tzb.sup_on(win);
    if !(tzb_sup < (tol.holomorphy * scale).max(tol.holomorphy * 1e-3)) {
        return Err(Error::NonHolomorphicTheta(tzb_sup));
    }
    let t_sup = theta.sup_on(win);
    let t_inf = theta.restrict(win).inf();
    if !(t_inf > tol.zero_floor * t_sup.max(1.0)) {
        return Err(Error::ZeroOfTheta(t_inf));
    }
    let chart = theta.chart().clone();
    let h = chart.h;
    let at = |g: &Grid, i: usize, j: usize| g.at(i, j).expect("inside window");
    let (bi, bj) = base;
    let nu = chart.nu;
    let mut row_root = vec![C64::new(0.0, 0.0); nu];
    let mut row_w = vec![C64::new(0.0, 0.0); nu];
    row_root[bi] = at(theta, bi, bj).sqrt();
    let deriv = |root: C64, i: usize, j: usize| at(&tz, i, j) / (root * 2.0);
    // along u: dw/du = g, d²w/du² = g_z
    let step = |w0: C64, r0: C64, r1: C64, d0: C64, d1: C64, dir: f64| w0 + (r0 + r1) * (h * dir / 2.0) + (d0 - d1) * (h * h / 12.0);
    for i in bi + 1..win.i1 {
        row_root[i] = nearest_root(at(theta, i, bj), row_root[i - 1]);
        let (d0, d1) = (deriv(row_root[i - 1], i - 1, bj), deriv(row_root[i], i, bj));
        row_w[i] = step(row_w[i - 1], row_root[i - 1], row_root[i], d0, d1, 1.0);
    }
    for i in (win.i0..bi).rev() {
        row_root[i] = nearest_root(at(theta, i, bj), row_root[i + 1]);
        let (d0, d1) = (deriv(row_root[i + 1], i + 1, bj), deriv(row_root[i], i, bj));
        row_w[i] = step(row_w[i + 1], row_root[i + 1], row_root[i], d0, d1, -1.0);
    }
    let iu = C64::i();
    // along v: dw/dv = i g, d²w/dv² = −g_z
    let cstep = |w0: C64, r0: C64, r1: C64, d0: C64, d1: C64, dir: f64| {
        w0 + (r0 + r1) * iu * (h * dir / 2.0) - (d0 - d1) * iu * iu * (h * h / 12.0) * (-1.0)
    };
    let columns: Vec<Vec<(usize, C64, C64)>> = (win.i0..win.i1)
        .into_par_iter()
        .map(|i| {
            let nv = chart.nv;
            let mut root = vec![C64::new(0.0, 0.0); nv];
            let mut w = vec![C64::new(0.0, 0.0); nv];
            root[bj] = row_root[i];
            w[bj] = row_w[i];
            for j in bj + 1..win.j1 {
                root[j] = nearest_root(at(theta, i, j), root[j - 1]);
                let (d0, d1) = (deriv(root[j - 1], i, j - 1), deriv(root[j], i, j));
                w[j] = cstep(w[j - 1], root[j - 1], root[j], d0, d1, 1.0);
            }
            for j in (win.j0..bj).rev() {
                root[j] = nearest_root(at(theta, i, j), root[j + 1]);
                let (d0, d1) = (deriv(root[j + 1], i, j + 1), deriv(root[j], i, j));
                w[j] = cstep(w[j + 1], root[j + 1], root[j], d0, d1, -1.0);
            }
            (win.j0..win.j1).map(|j| (j, w[j], root[j])).collect()
        })
        .collect();
    let mut wdata = vec![C64::new(0.0, 0.0); chart.len()];
    let mut rdata = vec![C64::new(0.0, 0.0); chart.len()];
    for (c, i) in columns.iter().zip(win.i0..win.i1) {
        for &(j, w, r) in c {
            wdata[j * nu + i] = w;
            rdata[j * nu + i] = r;
        }
    }
    let w = Grid::from_fn(&chart, theta.stencil(), |i, j| wdata[j * nu + i]).restrict(win);
    let sqrt_theta = Grid::from_fn(&chart, theta.stencil(), |i, j| rdata[j * nu + i]).restrict(win);
    let wz = w.dz();
    let wzb = w.dzb();
    let inner = wz.window();
    let cauchy_riemann = wzb.sup_on(inner) / wz.sup_on(inner).max(1e-300);
    let derivative_defect = (wz.clone() - sqrt_theta.clone()).sup_on(inner) / sqrt_theta.sup_on(inner).max(1e-300);
    Ok(ThetaCoordinate { base, w, sqrt_theta, cauchy_riemann, derivative_defect })
}

/// `κ` in the chart `w` with `dw = √θ dz`: `κ' = κ |√θ| / θ`.
pub fn kappa_in_theta_chart<S: Field>(kappa: &MVec<S>, sqrt_theta: &S) -> MVec<S> {
    let t = sqrt_theta.clone() * sqrt_theta.clone();
    let k = S::euclid(std::slice::from_ref(sqrt_theta)) * t.recip();
    kappa.scale(&k)
}

/// Both sides of the expansion of `D_z̄D_z̄κ + ½s̄κ` through `ζ = 0`; they
/// agree on enveloping pairs.
pub fn kappa_identity<S: Field>(pf: &PairFields<S>, inv: &PairInvariants<S>) -> (MVec<S>, MVec<S>) {
    let fr = &pf.frame;
    let lhs = willmore_field(fr);
    let mu = &pf.mu;
    let mub = mu.conj();
    let xi = &pf.xi;
    let dzxi = fr.d_z(xi);
    let dzbxi = fr.d_zb(xi);
    let dzbdzxi = fr.d_zb(&dzxi);
    let mut rhs = &dzbdzxi * (-0.5);
    rhs = &rhs - &fr.kappa.scale(&xi.inner(&fr.kappa.conj()));
    rhs = &rhs + &dzbxi.scale(&(mu.clone() * 0.25));
    rhs = &rhs + &dzxi.scale(&(mub * 0.25));
    rhs = &rhs - &xi.scale(&(mu.abs2() * 0.125));
    rhs = &rhs + &xi.scale(&(mu.dzb() * 0.25));
    rhs = &rhs - &fr.kappa.scale(&(inv.theta.conj() * 0.5));
    (lhs, rhs)
}

/// `sup ‖lhs − rhs‖` of [`kappa_identity`] over `w`.
pub fn kappa_identity_residual(pf: &PairFields<Grid>, inv: &PairInvariants<Grid>, w: Option<Window>) -> f64 {
    let (l, r) = kappa_identity(pf, inv);
    let d = (&l - &r).mnorm();
    match w {
        Some(w) => d.sup_on(w),
        None => d.sup(),
    }
}
