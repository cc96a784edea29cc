//! Pairs of immersions: normalized lifts, the decomposition
//! `Ŷ = λY + μ̄Y_z + μY_z̄ + N + ξ`, the invariants `θ, ρ, ζ`, and the
//! classification of enveloping conformal pairs.

use crate::charts::field::{Field, MVec};
use crate::charts::grid::{Grid, Stencil};
use crate::charts::jet::{Jet, MAX_ORDER};
use crate::charts::{Chart, Immersion};
use crate::error::{Error, Result};
use crate::frame::{frame_at, frame_sampled, FrameFields, Residuals};
use crate::minkowski::{Lorentz, MinkVector};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::sync::Arc;

/// Source of a (not necessarily normalized) lift of the second surface.
pub trait LiftSource: Send + Sync {
    /// A lift jet of `f̂` at chart point `z`, of order at least 5.
    fn lift_jet(&self, z: C64) -> Result<MVec<Jet>>;
    fn name(&self) -> String;
}

/// The flat lift `(1, f̂)` of an immersion on the same chart.
pub struct SurfaceLift(pub Arc<dyn Immersion>);

impl LiftSource for SurfaceLift {
    fn lift_jet(&self, z: C64) -> Result<MVec<Jet>> {
        Ok(self.0.flat_lift_jet(z, MAX_ORDER))
    }
    fn name(&self) -> String {
        self.0.name()
    }
}

/// `Ŷ = R Y`, the reflection of `f` in the unit spacelike vector `X̃`.
pub struct ReflectionLift {
    pub surface: Arc<dyn Immersion>,
    pub x: MinkVector,
}

impl ReflectionLift {
    pub fn new(surface: Arc<dyn Immersion>, x: MinkVector) -> Result<Self> {
        if x.0.len() != surface.n() + 2 {
            return Err(Error::DimensionMismatch(x.0.len(), surface.n() + 2));
        }
        if !(x.norm_sq() > 0.0) {
            return Err(Error::Invalid("reflection vector must be spacelike".into()));
        }
        Ok(ReflectionLift { surface, x })
    }

    /// Reflection in `X̃ = (½, −(6/5) f(z))`, a sphere kept away from `f` near `z`.
    pub fn away_from(surface: Arc<dyn Immersion>, z: C64) -> Result<Self> {
        let mut x = vec![0.5];
        x.extend(surface.eval(z).iter().map(|c| -1.2 * c));
        ReflectionLift::new(surface, MinkVector(x))
    }
}

impl LiftSource for ReflectionLift {
    fn lift_jet(&self, z: C64) -> Result<MVec<Jet>> {
        let f = self.surface.flat_lift_jet(z, MAX_ORDER);
        let r = Lorentz::reflection(&self.x)?;
        Ok(apply_lorentz(&r, &f))
    }
    fn name(&self) -> String {
        format!("reflect({})", self.surface.name())
    }
}

/// `T Ŷ` for a lift source `Ŷ`.
pub struct TransformedLift {
    pub inner: Arc<dyn LiftSource>,
    pub map: Lorentz,
}

impl LiftSource for TransformedLift {
    fn lift_jet(&self, z: C64) -> Result<MVec<Jet>> {
        Ok(apply_lorentz(&self.map, &self.inner.lift_jet(z)?))
    }
    fn name(&self) -> String {
        format!("moebius({})", self.inner.name())
    }
}

/// A Lorentz map applied to a vector of fields.
pub fn apply_lorentz<S: Field>(t: &Lorentz, v: &MVec<S>) -> MVec<S> {
    let m = &t.matrix;
    MVec(
        (0..v.dim())
            .map(|r| {
                let mut acc = v.0[0].clone() * m[(r, 0)];
                for c in 1..v.dim() {
                    acc = acc + v.0[c].clone() * m[(r, c)];
                }
                acc
            })
            .collect(),
    )
}

/// `f`'s frame together with the normalized second lift and its decomposition.
#[derive(Clone, Debug)]
pub struct PairFields<S> {
    pub frame: FrameFields<S>,
    pub yhat: MVec<S>,
    pub lambda: S,
    pub mu: S,
    pub xi: MVec<S>,
}

/// The pair invariants as fields.
#[derive(Clone, Debug)]
pub struct PairInvariants<S> {
    pub theta: S,
    pub rho: S,
    pub zeta: MVec<S>,
}

/// Rescales `Ŷ` so that `<Y, Ŷ> = −1`.
pub fn normalize<S: Field>(y: &MVec<S>, yhat: &MVec<S>) -> MVec<S> {
    let p = y.inner(yhat);
    yhat.scale(&(-p.recip()))
}

impl<S: Field> PairFields<S> {
    /// Normalizes `yhat_raw` against the frame and decomposes it.
    pub fn new(frame: FrameFields<S>, yhat_raw: &MVec<S>) -> Self {
        let yhat = normalize(&frame.y, yhat_raw);
        Self::from_normalized(frame, yhat)
    }

    /// Decomposes an already normalized `Ŷ`.
    pub fn from_normalized(frame: FrameFields<S>, yhat: MVec<S>) -> Self {
        let mu = yhat.inner(&frame.y_z) * 2.0;
        let lambda = -yhat.inner(&frame.n);
        let mub = mu.conj();
        let mut xi = &yhat - &frame.y.scale(&lambda);
        xi = &xi - &frame.y_z.scale(&mub);
        xi = &xi - &frame.y_zb.scale(&mu);
        xi = &xi - &frame.n;
        PairFields { frame, yhat, lambda, mu, xi }
    }

    pub fn invariants(&self) -> PairInvariants<S> {
        let fr = &self.frame;
        let mu = &self.mu;
        let mub = mu.conj();
        let xk = self.xi.inner(&fr.kappa);
        let theta = mu.dz() - mu.clone() * mu.clone() * 0.5 - fr.s.clone() - xk * 2.0;
        let rho = mub.dz() - fr.kappa_sq() * 2.0 + self.xi.inner(&self.xi) * 0.5;
        let dzxi = fr.d_z(&self.xi);
        let mut zeta = &dzxi - &self.xi.scale(&(mu.clone() * 0.5));
        let t = &fr.kappa_zb() + &fr.kappa.scale(&(mub * 0.5));
        zeta = &zeta + &(&t * 2.0);
        PairInvariants { theta, rho, zeta }
    }

    /// `Ŷ − (λY + μ̄Y_z + μY_z̄ + N + ξ)` with `λ` from isotropy.
    pub fn decomposition_residual(&self) -> S {
        let fr = &self.frame;
        let lam = (self.mu.abs2() + self.xi.inner(&self.xi)) * 0.5;
        let mut r = &self.yhat - &fr.y.scale(&lam);
        r = &r - &fr.y_z.scale(&self.mu.conj());
        r = &r - &fr.y_zb.scale(&self.mu);
        r = &r - &fr.n;
        (&r - &self.xi).norm()
    }

    /// `λ − (|μ|² + <ξ, ξ>)/2`.
    pub fn isotropy_residual(&self) -> S {
        self.lambda.clone() - (self.mu.abs2() + self.xi.inner(&self.xi)) * 0.5
    }

    /// Largest inner product of `ξ` with the central sphere frame.
    pub fn xi_normal_residual(&self) -> S {
        let fr = &self.frame;
        S::euclid(&[self.xi.inner(&fr.y), self.xi.inner(&fr.y_z), self.xi.inner(&fr.n)])
    }

    /// `Ŷ_z` minus its reconstruction from `(μ, θ, ρ, ζ)`.
    pub fn fundamental_residual(&self, inv: &PairInvariants<S>) -> S {
        let fr = &self.frame;
        let mu = &self.mu;
        let mub = mu.conj();
        let yhat_z = self.yhat.dz();
        let a = &fr.y_zb + &fr.y.scale(&(mub * 0.5));
        let b = &fr.y_z + &fr.y.scale(&(mu.clone() * 0.5));
        let mut r = &yhat_z - &self.yhat.scale(&(mu.clone() * 0.5));
        r = &r - &a.scale(&inv.theta);
        r = &r - &b.scale(&inv.rho);
        r = &r - &fr.y.scale(&self.xi.inner(&inv.zeta));
        (&r - &inv.zeta).norm()
    }

    /// `<Ŷ_z, Ŷ_z>` and the product `θρ`.
    pub fn conformality_terms(&self, inv: &PairInvariants<S>) -> (S, S) {
        let yz = self.yhat.dz();
        (yz.inner(&yz), inv.theta.clone() * inv.rho.clone())
    }

    /// `θ_z̄ − (ρ̄_z − μρ̄)`, zero on enveloping pairs.
    pub fn theta_zbar_identity(&self, inv: &PairInvariants<S>) -> S {
        let rb = inv.rho.conj();
        inv.theta.dzb() - rb.dz() + self.mu.clone() * rb
    }

    /// `Im(μ_z̄ ξ − 2θ̄κ)`, zero on enveloping pairs.
    pub fn real_identity(&self, inv: &PairInvariants<S>) -> S {
        let v = &self.xi.scale(&self.mu.dzb()) - &self.frame.kappa.scale(&(inv.theta.conj() * 2.0));
        v.map(|x| x.im()).norm()
    }

    /// Comparison scales of `θ, ρ, ζ` (sums of the moduli of their terms) and
/// of `ξ` (`max(1, sqrt(2|λ|))`).
    pub fn scales(&self) -> (S, S, S, S) {
        let fr = &self.frame;
        let mu = &self.mu;
        let abs = |x: S| S::euclid(&[x]);
        let th = abs(mu.dz()) + abs(mu.abs2()) * 0.5 + abs(fr.s.clone()) + abs(self.xi.inner(&fr.kappa)) * 2.0;
        let rh = abs(mu.conj().dz()) + abs(fr.kappa_sq()) * 2.0 + abs(self.xi.inner(&self.xi)) * 0.5;
        let muabs = abs(mu.clone());
        let ze = fr.d_z(&self.xi).mnorm()
            + muabs.clone() * self.xi.mnorm() * 0.5
            + fr.kappa_zb().mnorm() * 2.0
            + muabs.clone() * fr.kappa.mnorm();
        let xs = self.lambda.pointwise(|l| C64::new((2.0 * l.norm()).sqrt().max(1.0), 0.0));
        (th, rh, ze, xs)
    }
}

/// `(θ, ρ)` from bivectors: `θ/2 = <Y_z∧Y, Ŷ_z∧Ŷ>/‖Y∧Ŷ‖²`,
/// `ρ/2 = <Y_z̄∧Y, Ŷ_z∧Ŷ>/‖Y∧Ŷ‖²`, with the signed `‖Y∧Ŷ‖² = −<Y,Ŷ>²`.
pub fn invariants_geometric<S: Field>(y: &MVec<S>, yhat: &MVec<S>) -> (S, S) {
    let yz = y.dz();
    let yzb = y.dzb();
    let hz = yhat.dz();
    let p = y.inner(yhat);
    let denom = -(p.clone() * p);
    let w = |a: &MVec<S>| a.inner(&hz) * y.inner(yhat) - a.inner(yhat) * y.inner(&hz);
    let inv = denom.recip();
    (w(&yz) * inv.clone() * 2.0, w(&yzb) * inv * 2.0)
}

/// Relative size of the part of `a` not parallel to `b`: `‖a∧b‖ / ‖b‖²`.
pub fn parallel_defect(a: &[C64], b: &[C64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            acc += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    let bb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    acc.sqrt() / bb
}

/// Per-point values used by the classifier and the reports.
#[derive(Clone, Debug, Serialize)]
pub struct PairPoint {
    pub point: [usize; 2],
    pub theta: C64,
    pub rho: C64,
    pub theta_geom: C64,
    pub rho_geom: C64,
    pub mu: C64,
    pub zeta: f64,
    pub xi: f64,
    pub theta_scale: f64,
    pub rho_scale: f64,
    pub zeta_scale: f64,
    pub xi_scale: f64,
    pub yhat_zz: C64,
    pub theta_zb: f64,
    pub yhat: Vec<f64>,
    pub y: Vec<f64>,
    pub yhat_parallel: f64,
    /// `|<κ, κ̄>|` of the first surface.
    pub kappa_sq: f64,
    pub residuals: Residuals,
}

impl PairPoint {
    /// `X̃ = sqrt|ρ| (Ŷ/ρ − Y)`, constant for Möbius-reflection pairs.
    pub fn witness(&self) -> Vec<f64> {
        let r = self.rho.re;
        let k = r.abs().sqrt();
        self.yhat.iter().zip(&self.y).map(|(a, b)| k * (a / r - b)).collect()
    }
}

fn collect_point<S: Field>(pf: &PairFields<S>, inv: &PairInvariants<S>, read: impl Fn(&S) -> Option<C64>, point: [usize; 2]) -> Option<PairPoint> {
    let re_vec = |v: &MVec<S>| -> Option<Vec<f64>> { v.0.iter().map(|x| read(x).map(|c| c.re)).collect() };
    let c_vec = |v: &MVec<S>| -> Option<Vec<C64>> { v.0.iter().map(&read).collect() };
    let (tg, rg) = invariants_geometric(&pf.frame.y, &pf.yhat);
    let (yzz, _) = pf.conformality_terms(inv);
    let (ts, rs, zs, xs) = pf.scales();
    let theta = read(&inv.theta)?;
    let rho = read(&inv.rho)?;
    let fund = read(&pf.fundamental_residual(inv))?.re;
    let tzb = read(&pf.theta_zbar_identity(inv))?.norm();
    let real = read(&pf.real_identity(inv))?.re;
    let yhat_z = c_vec(&pf.yhat.dz())?;
    let yhat_c = c_vec(&pf.yhat)?;
    let mut residuals = Residuals::new();
    residuals.insert("decomposition".into(), read(&pf.decomposition_residual())?.norm());
    residuals.insert("isotropy".into(), read(&pf.isotropy_residual())?.norm());
    residuals.insert("xi_normal".into(), read(&pf.xi_normal_residual())?.norm());
    residuals.insert("fundamental".into(), fund);
    residuals.insert("theta_zbar_identity".into(), tzb);
    residuals.insert("real_identity".into(), real);
    residuals.insert("two_path_theta".into(), (read(&tg)? - theta).norm());
    residuals.insert("two_path_rho".into(), (read(&rg)? - rho).norm());
    residuals.insert("conformality".into(), (read(&yzz)? - theta * rho).norm());
    Some(PairPoint {
        point,
        theta,
        rho,
        theta_geom: read(&tg)?,
        rho_geom: read(&rg)?,
        mu: read(&pf.mu)?,
        zeta: read(&inv.zeta.mnorm())?.re,
        xi: read(&pf.xi.mnorm())?.re,
        theta_scale: read(&ts)?.re,
        rho_scale: read(&rs)?.re,
        zeta_scale: read(&zs)?.re,
        xi_scale: read(&xs)?.re,
        yhat_zz: read(&yzz)?,
        theta_zb: read(&inv.theta.dzb())?.norm(),
        yhat: re_vec(&pf.yhat)?,
        y: re_vec(&pf.frame.y)?,
        yhat_parallel: parallel_defect(&yhat_z, &yhat_c),
        kappa_sq: read(&pf.frame.kappa_sq())?.norm(),
        residuals,
    })
}

/// Normalized pair at a point from a frame jet and a raw second lift.
pub fn normalize_pair(frame: FrameFields<Jet>, yhat_raw: &MVec<Jet>) -> Result<PairFields<Jet>> {
    let p = frame.y.inner(yhat_raw).value().norm();
    let scale = frame.y.norm().value().re * yhat_raw.norm().value().re;
    if !(p > 1e-10 * scale) {
        return Err(Error::CoincidentPoints(p / scale.max(1e-300)));
    }
    Ok(PairFields::new(frame, yhat_raw))
}

/// Pair fields of `(f, f̂)` at chart point `z`.
pub fn pair_at(f: &dyn Immersion, second: &dyn LiftSource, z: C64) -> Result<PairFields<Jet>> {
    let frame = frame_at(f, z)?;
    normalize_pair(frame, &second.lift_jet(z)?)
}

/// Pair point record at one chart point by exact jets.
pub fn pair_point(f: &dyn Immersion, second: &dyn LiftSource, chart: &Chart, i: usize, j: usize) -> Result<PairPoint> {
    let pf = pair_at(f, second, chart.z(i, j))?;
    let inv = pf.invariants();
    collect_point(&pf, &inv, |x| Some(x.value()), [i, j])
        .ok_or_else(|| Error::FrameDegenerate("jet order exhausted".into()))
}

/// Pair point records on every node of `chart` by exact jets.
pub fn pair_points(f: &dyn Immersion, second: &dyn LiftSource, chart: &Chart) -> Result<Vec<PairPoint>> {
    chart.par_map(|i, j| pair_point(f, second, chart, i, j)).into_iter().collect()
}

/// Exact values of the frame of `f` and of the normalized `Ŷ` on every node
/// of `chart`, as grid fields.
pub fn pair_sampled(f: &dyn Immersion, second: &dyn LiftSource, chart: &Chart, stencil: Stencil) -> Result<PairFields<Grid>> {
    let frame = frame_sampled(f, chart, stencil)?;
    let vals: Vec<Vec<C64>> = chart
        .par_map(|i, j| pair_at(f, second, chart.z(i, j)).map(|p| p.yhat.0.iter().map(|x| C64::new(x.value().re, 0.0)).collect()))
        .into_iter()
        .collect::<Result<_>>()?;
    let nu = chart.nu;
    let yhat = MVec((0..f.n() + 2).map(|a| Grid::from_fn(chart, stencil, |i, j| vals[j * nu + i][a])).collect());
    Ok(PairFields::from_normalized(frame, yhat))
}

/// Pair point records of grid fields, on the window where every field is defined.
pub fn pair_points_grid(pf: &PairFields<Grid>) -> Vec<PairPoint> {
    let inv = pf.invariants();
    let probe = pf.theta_zbar_identity(&inv);
    let w = probe.window();
    let win = pf.real_identity(&inv).window();
    let w = crate::charts::grid::Window { i0: w.i0.max(win.i0), i1: w.i1.min(win.i1), j0: w.j0.max(win.j0), j1: w.j1.min(win.j1) };
    let mut out = Vec::new();
    let fields = GridPointCache::new(pf, &inv);
    for (i, j) in w.iter() {
        if let Some(p) = fields.point(i, j) {
            out.push(p);
        }
    }
    out
}

struct GridPointCache {
    theta: Grid,
    rho: Grid,
    theta_geom: Grid,
    rho_geom: Grid,
    mu: Grid,
    zeta: Grid,
    xi: Grid,
    scales: (Grid, Grid, Grid, Grid),
    yhat_zz: Grid,
    theta_zb: Grid,
    yhat: MVec<Grid>,
    yhat_z: MVec<Grid>,
    y: MVec<Grid>,
    kappa_sq: Grid,
    residuals: Vec<(&'static str, Grid)>,
}

impl GridPointCache {
    fn new(pf: &PairFields<Grid>, inv: &PairInvariants<Grid>) -> Self {
        let (tg, rg) = invariants_geometric(&pf.frame.y, &pf.yhat);
        let (yzz, tr) = pf.conformality_terms(inv);
        let residuals = vec![
            ("decomposition", pf.decomposition_residual()),
            ("isotropy", pf.isotropy_residual()),
            ("xi_normal", pf.xi_normal_residual()),
            ("fundamental", pf.fundamental_residual(inv)),
            ("theta_zbar_identity", pf.theta_zbar_identity(inv)),
            ("real_identity", pf.real_identity(inv)),
            ("two_path_theta", tg.clone() - inv.theta.clone()),
            ("two_path_rho", rg.clone() - inv.rho.clone()),
            ("conformality", yzz.clone() - tr),
        ];
        GridPointCache {
            theta: inv.theta.clone(),
            rho: inv.rho.clone(),
            theta_geom: tg,
            rho_geom: rg,
            mu: pf.mu.clone(),
            zeta: inv.zeta.mnorm(),
            xi: pf.xi.mnorm(),
            scales: pf.scales(),
            yhat_zz: yzz,
            theta_zb: inv.theta.dzb(),
            yhat: pf.yhat.clone(),
            yhat_z: pf.yhat.dz(),
            y: pf.frame.y.clone(),
            kappa_sq: pf.frame.kappa_sq(),
            residuals,
        }
    }

    fn point(&self, i: usize, j: usize) -> Option<PairPoint> {
        let g = |x: &Grid| x.at(i, j).ok();
        let cv = |v: &MVec<Grid>| -> Option<Vec<C64>> { v.0.iter().map(|x| x.at(i, j).ok()).collect() };
        let yhat_c = cv(&self.yhat)?;
        let yhat_z = cv(&self.yhat_z)?;
        let mut residuals = Residuals::new();
        for (k, f) in &self.residuals {
            residuals.insert(k.to_string(), g(f)?.norm());
        }
        Some(PairPoint {
            point: [i, j],
            theta: g(&self.theta)?,
            rho: g(&self.rho)?,
            theta_geom: g(&self.theta_geom)?,
            rho_geom: g(&self.rho_geom)?,
            mu: g(&self.mu)?,
            zeta: g(&self.zeta)?.re,
            xi: g(&self.xi)?.re,
            theta_scale: g(&self.scales.0)?.re,
            rho_scale: g(&self.scales.1)?.re,
            zeta_scale: g(&self.scales.2)?.re,
            xi_scale: g(&self.scales.3)?.re,
            yhat_zz: g(&self.yhat_zz)?,
            theta_zb: g(&self.theta_zb)?.norm(),
            yhat: yhat_c.iter().map(|x| x.re).collect(),
            y: cv(&self.y)?.iter().map(|x| x.re).collect(),
            yhat_parallel: parallel_defect(&yhat_z, &yhat_c),
            kappa_sq: g(&self.kappa_sq)?.norm(),
            residuals,
        })
    }
}

/// Thresholds of the `≈ 0` test: `sup < max(rel · scale, abs)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rel: 1e-5, abs: 1e-8 }
    }
}

impl Tolerances {
    pub fn is_zero(&self, sup: f64, scale: f64) -> bool {
        sup < (self.rel * scale).max(self.abs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    DarbouxIsothermic,
    SWillmoreDual,
    TrivialMoebius,
    Degenerate,
    NotEnveloping,
    NotConformalPair,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Outcome of [`classify_pair`] with the evidence it was decided on.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Residuals,
    pub trivial_witness: Option<Vec<f64>>,
}

fn sup_by(points: &[PairPoint], f: impl Fn(&PairPoint) -> f64) -> f64 {
    points.iter().map(f).fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Decision tree over per-point invariants. A totally umbilic first surface has
/// no S-Willmore dual, so `ξ = 0` there does not select that branch.
pub fn classify_pair(points: &[PairPoint], tol: &Tolerances) -> Classification {
    let mut ev = Residuals::new();
    let zeta = sup_by(points, |p| p.zeta);
    let zeta_s = sup_by(points, |p| p.zeta_scale);
    let theta = sup_by(points, |p| p.theta.norm());
    let theta_s = sup_by(points, |p| p.theta_scale);
    let rho = sup_by(points, |p| p.rho.norm());
    let rho_s = sup_by(points, |p| p.rho_scale);
    let prod = sup_by(points, |p| (p.theta * p.rho).norm());
    let xi = sup_by(points, |p| p.xi);
    let xi_s = sup_by(points, |p| p.xi_scale);
    ev.insert("zeta_sup".into(), zeta);
    ev.insert("zeta_scale".into(), zeta_s);
    ev.insert("theta_sup".into(), theta);
    ev.insert("theta_scale".into(), theta_s);
    ev.insert("rho_sup".into(), rho);
    ev.insert("rho_scale".into(), rho_s);
    ev.insert("theta_rho_sup".into(), prod);
    ev.insert("xi_sup".into(), xi);
    ev.insert("xi_scale".into(), xi_s);
    ev.insert("theta_zbar_sup".into(), sup_by(points, |p| p.theta_zb));
    ev.insert("yhat_parallel_sup".into(), sup_by(points, |p| p.yhat_parallel));
    let umbilic = tol.is_zero(sup_by(points, |p| p.kappa_sq), 0.0);
    let done = |verdict, ev| Classification { verdict, evidence: ev, trivial_witness: None };
    if points.is_empty() || [zeta, theta, rho, xi].iter().any(|x| x.is_nan()) {
        return done(Verdict::Inconclusive, ev);
    }
    if !tol.is_zero(zeta, zeta_s) {
        return done(Verdict::NotEnveloping, ev);
    }
    if !tol.is_zero(prod, theta_s * rho_s) {
        return done(Verdict::NotConformalPair, ev);
    }
    let th0 = tol.is_zero(theta, theta_s);
    let rh0 = tol.is_zero(rho, rho_s);
    match (th0, rh0) {
        (true, true) => done(Verdict::Degenerate, ev),
        (false, true) => done(Verdict::DarbouxIsothermic, ev),
        (false, false) => done(Verdict::NotConformalPair, ev),
        (true, false) => {
            if !umbilic && tol.is_zero(xi, xi_s) {
                return done(Verdict::SWillmoreDual, ev);
            }
            let imag = sup_by(points, |p| p.rho.im.abs());
            let pos = points.iter().all(|p| p.rho.re > 0.0);
            let neg = points.iter().all(|p| p.rho.re < 0.0);
            ev.insert("rho_imag_sup".into(), imag);
            if !tol.is_zero(imag, rho_s) || !(pos || neg) {
                return done(Verdict::Inconclusive, ev);
            }
            let ws: Vec<Vec<f64>> = points.iter().map(PairPoint::witness).collect();
            let dim = ws[0].len();
            let mean: Vec<f64> = (0..dim).map(|k| ws.iter().map(|w| w[k]).sum::<f64>() / ws.len() as f64).collect();
            let dev = |w: &Vec<f64>| w.iter().zip(&mean).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            let spread = ws.iter().map(|w| dev(w).sqrt()).fold(0.0, f64::max);
            let variance = ws.iter().map(dev).sum::<f64>() / ws.len() as f64;
            let size = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
            ev.insert("witness_spread".into(), spread);
            ev.insert("witness_variance".into(), variance);
            if tol.is_zero(spread, size) {
                Classification { verdict: Verdict::TrivialMoebius, evidence: ev, trivial_witness: Some(mean) }
            } else {
                done(Verdict::Inconclusive, ev)
            }
        }
    }
}

/// Summary statistics of a real sample.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    pub fn of(xs: impl IntoIterator<Item = f64>) -> Stats {
        let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for x in xs {
            min = min.min(x);
            max = max.max(x);
            sum += x;
            n += 1;
        }
        if n == 0 {
            return Stats { min: 0.0, max: 0.0, mean: 0.0 };
        }
        Stats { min, max, mean: sum / n as f64 }
    }
}

/// Largest residual per name over a set of points.
pub fn residual_sups(points: &[PairPoint]) -> Residuals {
    let mut out = Residuals::new();
    for p in points {
        crate::frame::merge_max(&mut out, &p.residuals);
    }
    out
}
