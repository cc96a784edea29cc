//! Second envelopes of the central sphere congruence and the cmc-1 branch.

use crate::charts::field::{Field, MVec};
use crate::charts::grid::{Grid, Window};
use crate::charts::jet::{Jet, MAX_ORDER};
use crate::charts::Immersion;
use crate::classify::{swillmore_extract, willmore_residual, willmore_scale};
use crate::error::{Error, Result};
use crate::frame::{canonical_lift, FrameFields};
use crate::minkowski::{minkowski_dot, MinkVector};
use crate::pair::{pair_points_grid, LiftSource, PairFields, Tolerances};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::sync::Arc;

fn det<S: Field>(m: &[Vec<S>]) -> S {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<S> = None;
    for c in 0..m.len() {
        let minor: Vec<Vec<S>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect()).collect();
        let t = m[0][c].clone() * det(&minor);
        acc = Some(match acc {
            None => t,
            Some(a) if c % 2 == 0 => a + t,
            Some(a) => a - t,
        });
    }
    acc.expect("nonempty matrix")
}

/// The vector `S` with `<S, W> = det(W, rows)` for every `W`; orthogonal to all rows.
pub fn cross<S: Field>(rows: &[MVec<S>]) -> MVec<S> {
    let d = rows.len() + 1;
    MVec(
        (0..d)
            .map(|a| {
                let m: Vec<Vec<S>> = rows.iter().map(|r| (0..d).filter(|&b| b != a).map(|b| r.0[b].clone()).collect()).collect();
                let cof = det(&m);
                let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
                if a == 0 {
                    -(cof * sign)
                } else {
                    cof * sign
                }
            })
            .collect(),
    )
}

/// Unit spacelike generator of `V⊥` for a surface in `S³`.
pub fn unit_normal<S: Field>(fr: &FrameFields<S>) -> Result<MVec<S>> {
    if fr.dim() != 5 {
        return Err(Error::WrongCodimension(fr.dim() - 2));
    }
    let yu = (&fr.y_z + &fr.y_zb).re();
    let yv = (&fr.y_zb - &fr.y_z).map(|x| x.clone() * C64::i()).re();
    let s = cross(&[fr.y.re(), yu, yv, fr.n.clone()]);
    let nn = s.inner(&s);
    Ok(s.scale(&nn.sqrt().recip()))
}

/// The touching point `S − <S,Q> Q` of the central sphere `S` with the
/// sphere `Q⊥`; null where `|<S, Q>| = 1`.
pub struct HorosphereLift {
    pub surface: Arc<dyn Immersion>,
    pub q: MinkVector,
}

impl LiftSource for HorosphereLift {
    fn lift_jet(&self, z: C64) -> Result<MVec<Jet>> {
        let fr = crate::frame::frame_of_lift(&self.surface.flat_lift_jet(z, MAX_ORDER))?;
        let mut s = unit_normal(&fr)?;
        let q = s.constant_like(&self.q.0);
        let mut sq = s.inner(&q);
        if sq.value().re < 0.0 {
            s = -&s;
            sq = -sq;
        }
        Ok(&s - &q.scale(&sq))
    }
    fn name(&self) -> String {
        format!("horosphere({})", self.surface.name())
    }
}

/// Singular values of a point cloud and whether it lies in a `k`-dim subspace.
#[derive(Clone, Debug, Serialize)]
pub struct RankTest {
    pub singular_values: Vec<f64>,
    pub k: usize,
    /// `σ_{k+1} / σ_1` (0 when the ambient dimension is `k`).
    pub gap: f64,
    pub confined: bool,
}

pub const RANK_GAP: f64 = 1e-6;

pub fn rank_test(cloud: &[Vec<f64>], k: usize) -> RankTest {
    let d = cloud.first().map_or(0, Vec::len);
    let m = DMatrix::from_fn(cloud.len(), d, |r, c| cloud[r][c]);
    let sv: Vec<f64> = m.singular_values().iter().copied().collect();
    let mut sv = sv;
    sv.sort_by(|a, b| b.total_cmp(a));
    let gap = if sv.len() > k && sv[0] > 0.0 { sv[k] / sv[0] } else { 0.0 };
    RankTest { singular_values: sv, k, gap, confined: gap < RANK_GAP }
}

/// The spacelike unit `Q` whose orthogonal complement best contains the cloud
/// of null vectors, and the fit defect `σ_min / σ_max`.
pub fn sphere_normal(cloud: &[Vec<f64>]) -> Result<(MinkVector, f64)> {
    let d = cloud[0].len();
    let m = DMatrix::from_fn(cloud.len(), d, |r, c| {
        let n: f64 = cloud[r].iter().map(|x| x * x).sum::<f64>().sqrt();
        cloud[r][c] / n
    });
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let sv = &svd.singular_values;
    let (imin, _) = sv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let mut q: Vec<f64> = (0..d).map(|c| vt[(imin, c)]).collect();
    q[0] = -q[0];
    let qq = minkowski_dot(&q, &q);
    if !(qq > 0.0) {
        return Err(Error::SignatureFailure(format!("sphere normal has <Q,Q> = {qq:e}")));
    }
    let q = MinkVector(q.iter().map(|x| x / qq.sqrt()).collect());
    Ok((q, sv[imin] / smax))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    SWillmore,
    Cmc1,
    Minimal,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cmc1Report {
    pub branch: Branch,
    pub xi_sup: f64,
    pub dependence: f64,
    pub mu_mismatch: f64,
    pub willmore: f64,
    pub theta_sup: f64,
    pub rho_sup: f64,
    pub confinement: RankTest,
    pub kappa_hat: Option<f64>,
    pub sphere_defect: Option<f64>,
    pub q: Option<MinkVector>,
    pub mean_curvature_defect: Option<f64>,
    pub cmc1_confirmed: bool,
}

fn values(v: &MVec<Grid>, w: Window) -> Vec<Vec<f64>> {
    w.iter().map(|(i, j)| v.0.iter().map(|x| x.at(i, j).map_or(f64::NAN, |c| c.re)).collect()).collect()
}

/// Checks that `Ŷ` envelopes the central spheres of `f`, decides the branch,
/// and on the Darboux branch confirms the round sphere `f̂` and `H = 1`.
pub fn cmc1_verify(pf: &PairFields<Grid>, tol: &Tolerances) -> Result<Cmc1Report> {
    let fr = &pf.frame;
    let points = pair_points_grid(pf);
    if points.is_empty() {
        return Err(Error::Invalid("chart too small for the pair stencil".into()));
    }
    let w = Window {
        i0: points.iter().map(|p| p.point[0]).min().unwrap_or(0),
        i1: points.iter().map(|p| p.point[0]).max().unwrap_or(0) + 1,
        j0: points.iter().map(|p| p.point[1]).min().unwrap_or(0),
        j1: points.iter().map(|p| p.point[1]).max().unwrap_or(0) + 1,
    };
    let sup = |f: &dyn Fn(&crate::pair::PairPoint) -> f64| points.iter().map(f).fold(0.0, f64::max);
    let xi_sup = sup(&|p| p.xi);
    if !tol.is_zero(xi_sup, sup(&|p| p.xi_scale)) {
        return Err(Error::NotSecondEnvelope(xi_sup));
    }
    let sw = swillmore_extract(fr)?;
    let dependence = sw.dependence_residual.sup_on(w);
    let mu_mismatch = (sw.mu.clone() - pf.mu.clone()).sup_on(w);
    let willmore = willmore_residual(fr).sup_on(w);
    let wscale = willmore_scale(fr).sup_on(w);
    let theta_sup = sup(&|p| p.theta.norm());
    let rho_sup = sup(&|p| p.rho.norm());
    let th0 = tol.is_zero(theta_sup, sup(&|p| p.theta_scale));
    let rh0 = tol.is_zero(rho_sup, sup(&|p| p.rho_scale));
    let mut cloud = values(&fr.y.re(), w);
    cloud.extend(values(&fr.n, w));
    cloud.extend(values(&fr.y_z.re(), w));
    cloud.extend(values(&fr.y_z.map(|x| x.im()), w));
    let confinement = rank_test(&cloud, 5);
    let mut rep = Cmc1Report {
        branch: Branch::Minimal,
        xi_sup,
        dependence,
        mu_mismatch,
        willmore,
        theta_sup,
        rho_sup,
        confinement,
        kappa_hat: None,
        sphere_defect: None,
        q: None,
        mean_curvature_defect: None,
        cmc1_confirmed: false,
    };
    match (th0, rh0) {
        (true, true) => Ok(rep),
        (true, false) => {
            if !tol.is_zero(willmore, wscale) {
                return Err(Error::AmbiguousBranch(format!("theta vanishes but Willmore residual is {willmore:e}")));
            }
            rep.branch = Branch::SWillmore;
            Ok(rep)
        }
        (false, true) => {
            rep.branch = Branch::Cmc1;
            let fh = FrameFields::from_lift(canonical_lift(&pf.yhat));
            let kh = fh.kappa.mnorm();
            let wk = w.intersect(kh.window());
            rep.kappa_hat = Some(kh.sup_on(wk));
            let yh = values(&pf.yhat, w);
            let (q, defect) = sphere_normal(&yh)?;
            rep.sphere_defect = Some(defect);
            let s = unit_normal(fr)?;
            let sq = s.inner(&s.constant_like(&q.0));
            let h_defect = sq.pointwise(|x| C64::new(x.norm() - 1.0, 0.0)).sup_on(w);
            rep.mean_curvature_defect = Some(h_defect);
            rep.q = Some(q);
            rep.cmc1_confirmed = tol.is_zero(kh.sup_on(wk), 1.0) && defect < RANK_GAP && h_defect < 1e-6;
            Ok(rep)
        }
        (false, false) => Err(Error::AmbiguousBranch(format!("theta {theta_sup:e} and rho {rho_sup:e} both nonzero"))),
    }
}
