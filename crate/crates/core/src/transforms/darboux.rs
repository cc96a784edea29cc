//! Darboux transforms of isothermic surfaces by integrating
//! `θ ≡ c`, `ρ ≡ 0`, `ζ ≡ 0` for `(μ, ξ)` from a base point.

use crate::charts::field::{Field, MVec};
use crate::charts::grid::{Grid, Stencil, Window};
use crate::charts::jet::Jet;
use crate::charts::{Chart, Immersion};
use crate::classify::isothermic_verify;
use crate::error::{Error, Result};
use crate::frame::{canonical_lift, frame_at_order, frame_sampled, FrameFields, Residuals};
use crate::minkowski::minkowski_dot;
use crate::pair::{classify_pair, pair_points_grid, residual_sups, Classification, PairFields, Tolerances};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `|μ|` beyond which the Riccati integration is abandoned.
pub const BLOWUP: f64 = 1e3;

/// Largest `‖Im κ‖/‖κ‖` accepted for the input chart.
pub const ISOTHERMIC_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DarbouxParams {
    pub c: f64,
    pub mu0: C64,
    /// Initial `ξ`; empty means zero.
    pub xi0: Vec<f64>,
    /// Base node `(i, j)`; `None` means the chart center.
    pub base: Option<(usize, usize)>,
    /// Bound on `h_sub (1 + |μ|²)` per substep.
    pub step_tol: f64,
}

impl Default for DarbouxParams {
    fn default() -> Self {
        DarbouxParams { c: 1.0, mu0: C64::new(0.0, 0.0), xi0: Vec::new(), base: None, step_tol: 0.05 }
    }
}

const MAXD: usize = 8;

#[derive(Clone, Copy, Debug)]
struct Local {
    dim: usize,
    y: [C64; MAXD],
    y_z: [C64; MAXD],
    y_zb: [C64; MAXD],
    n: [C64; MAXD],
    s: C64,
    kappa: [C64; MAXD],
    kappa_zb: [C64; MAXD],
}

fn cdot(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = -(a[0] * b[0]);
    for k in 1..a.len() {
        acc += a[k] * b[k];
    }
    acc
}

fn rdot(a: &[C64], b: &[f64]) -> C64 {
    let mut acc = -(a[0] * b[0]);
    for k in 1..a.len() {
        acc += a[k] * b[k];
    }
    acc
}

impl Local {
    fn at(f: &dyn Immersion, z: C64) -> Result<Local> {
        let fr = frame_at_order(f, z, 6)?;
        let dim = fr.dim();
        if dim > MAXD {
            return Err(Error::Invalid(format!("ambient dimension {dim} too large for the integrator")));
        }
        let take = |v: &MVec<Jet>| {
            let mut a = [C64::new(0.0, 0.0); MAXD];
            for (k, x) in v.0.iter().enumerate() {
                a[k] = x.value();
            }
            a
        };
        Ok(Local {
            dim,
            y: take(&fr.y),
            y_z: take(&fr.y_z),
            y_zb: take(&fr.y_zb),
            n: take(&fr.n),
            s: fr.s.value(),
            kappa: take(&fr.kappa),
            kappa_zb: take(&fr.kappa_zb()),
        })
    }

    /// `(μ_z, μ_z̄, ξ_z)` from the system `θ = c`, `ρ = 0`, `ζ = 0`.
    fn rhs(&self, c: f64, mu: C64, xi: &[f64]) -> (C64, C64, Vec<C64>) {
        let d = self.dim;
        let k = &self.kappa[..d];
        let kb: Vec<C64> = k.iter().map(|x| x.conj()).collect();
        let xk = rdot(k, xi);
        let xx = minkowski_dot(xi, xi);
        let mu_z = mu * mu * 0.5 + c + self.s + xk * 2.0;
        let mu_zb = C64::new((cdot(k, &kb) * 2.0).re - xx * 0.5, 0.0);
        let xdk = rdot(&self.kappa_zb[..d], xi);
        let xi_z = (0..d)
            .map(|a| {
                let dzxi = mu * 0.5 * xi[a] - self.kappa_zb[a] * 2.0 - mu.conj() * k[a];
                dzxi + self.y[a] * xdk * 2.0 - self.y_zb[a] * xk * 2.0
            })
            .collect();
        (mu_z, mu_zb, xi_z)
    }

    fn project_perp(&self, xi: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let pn = rdot(&self.n[..d], xi);
        let pzb = rdot(&self.y_zb[..d], xi);
        let pz = rdot(&self.y_z[..d], xi);
        let py = rdot(&self.y[..d], xi);
        (0..d)
            .map(|a| {
                let v = -pn * self.y[a] + pzb * self.y_z[a] * 2.0 + pz * self.y_zb[a] * 2.0 - py * self.n[a];
                xi[a] - v.re
            })
            .collect()
    }

    /// `Ŷ = λY + μ̄Y_z + μY_z̄ + N + ξ` with `λ` from isotropy.
    fn yhat(&self, mu: C64, xi: &[f64]) -> Vec<f64> {
        let lam = 0.5 * (mu.norm_sqr() + minkowski_dot(xi, xi));
        (0..self.dim)
            .map(|a| (self.y[a] * lam + self.y_z[a] * mu.conj() + self.y_zb[a] * mu + self.n[a]).re + xi[a])
            .collect()
    }
}

#[derive(Clone, Debug)]
struct State {
    mu: C64,
    xi: Vec<f64>,
}

fn derivative(loc: &Local, c: f64, st: &State, e: C64) -> State {
    let (mz, mzb, xz) = loc.rhs(c, st.mu, &st.xi);
    State { mu: mz * e + mzb * e.conj(), xi: xz.iter().map(|x| 2.0 * (x * e).re).collect() }
}

fn axpy(a: &State, k: f64, b: &State) -> State {
    State { mu: a.mu + b.mu * k, xi: a.xi.iter().zip(&b.xi).map(|(x, y)| x + k * y).collect() }
}

fn check(st: &State) -> Result<()> {
    let m = st.mu.norm();
    if !(m <= BLOWUP) || st.xi.iter().any(|x| !x.is_finite()) {
        return Err(Error::BlowUp(m));
    }
    Ok(())
}

/// RK4 from `z0` to `z0 + h e` with substeps bounded by `step_tol`.
fn advance(f: &dyn Immersion, c: f64, z0: C64, e: C64, h: f64, st: &State, step_tol: f64) -> Result<(State, usize)> {
    let m = ((h * (1.0 + st.mu.norm_sqr()) / step_tol).ceil() as usize).clamp(1, 1024);
    let dt = h / m as f64;
    let mut st = st.clone();
    let mut z = z0;
    for _ in 0..m {
        let l0 = Local::at(f, z)?;
        let lm = Local::at(f, z + e * (dt / 2.0))?;
        let l1 = Local::at(f, z + e * dt)?;
        let k1 = derivative(&l0, c, &st, e);
        let k2 = derivative(&lm, c, &axpy(&st, dt / 2.0, &k1), e);
        let k3 = derivative(&lm, c, &axpy(&st, dt / 2.0, &k2), e);
        let k4 = derivative(&l1, c, &axpy(&st, dt, &k3), e);
        let mut next = axpy(&st, dt / 6.0, &k1);
        next = axpy(&next, dt / 3.0, &k2);
        next = axpy(&next, dt / 3.0, &k3);
        next = axpy(&next, dt / 6.0, &k4);
        check(&next)?;
        st = next;
        z += e * dt;
    }
    Ok((st, m))
}

/// Integrated Darboux partner on a chart.
#[derive(Clone, Debug)]
pub struct DarbouxResult {
    pub params: DarbouxParams,
    pub base: (usize, usize),
    pub mu: Grid,
    pub xi: MVec<Grid>,
    pub yhat: MVec<Grid>,
    /// Exact frame of the input surface sampled on the chart.
    pub frame: FrameFields<Grid>,
    pub max_substeps: usize,
}

/// Integrates `(μ, ξ)` along the base row and then along every column.
pub fn darboux_integrate(f: &dyn Immersion, chart: &Chart, stencil: Stencil, params: &DarbouxParams) -> Result<DarbouxResult> {
    if !(params.c.is_finite() && params.c != 0.0) {
        return Err(Error::Invalid("Darboux constant c must be real and nonzero".into()));
    }
    if !(params.step_tol > 0.0) {
        return Err(Error::Invalid("step_tol must be positive".into()));
    }
    let base = params.base.unwrap_or_else(|| chart.center_node());
    if !chart.interior(0).contains(base.0, base.1) {
        return Err(Error::OutOfInterior(base.0, base.1));
    }
    let frame = frame_sampled(f, chart, stencil)?;
    let iso = isothermic_verify(&frame.kappa)?;
    if !(iso < ISOTHERMIC_TOL) {
        return Err(Error::NotIsothermicChart(iso));
    }
    let dim = f.n() + 2;
    let xi0 = if params.xi0.is_empty() { vec![0.0; dim] } else { params.xi0.clone() };
    if xi0.len() != dim {
        return Err(Error::DimensionMismatch(xi0.len(), dim));
    }
    let c = params.c;
    let h = chart.h;
    let (bi, bj) = base;
    let (nu, nv) = (chart.nu, chart.nv);
    let lb = Local::at(f, chart.z(bi, bj))?;
    let start = State { mu: params.mu0, xi: lb.project_perp(&xi0) };
    check(&start)?;
    let one = C64::new(1.0, 0.0);
    let iu = C64::i();
    let mut row: Vec<Option<State>> = vec![None; nu];
    row[bi] = Some(start.clone());
    let mut max_sub = 1;
    let mut st = start.clone();
    for i in bi + 1..nu {
        let (n, m) = advance(f, c, chart.z(i - 1, bj), one, h, &st, params.step_tol)?;
        max_sub = max_sub.max(m);
        row[i] = Some(n.clone());
        st = n;
    }
    st = start;
    for i in (0..bi).rev() {
        let (n, m) = advance(f, c, chart.z(i + 1, bj), -one, h, &st, params.step_tol)?;
        max_sub = max_sub.max(m);
        row[i] = Some(n.clone());
        st = n;
    }
    let columns: Vec<Result<(Vec<State>, usize)>> = (0..nu)
        .into_par_iter()
        .map(|i| {
            let mut col: Vec<Option<State>> = vec![None; nv];
            let s0 = row[i].clone().expect("row filled");
            col[bj] = Some(s0.clone());
            let mut ms = 1;
            let mut st = s0.clone();
            for j in bj + 1..nv {
                let (n, m) = advance(f, c, chart.z(i, j - 1), iu, h, &st, params.step_tol)?;
                ms = ms.max(m);
                col[j] = Some(n.clone());
                st = n;
            }
            st = s0;
            for j in (0..bj).rev() {
                let (n, m) = advance(f, c, chart.z(i, j + 1), -iu, h, &st, params.step_tol)?;
                ms = ms.max(m);
                col[j] = Some(n.clone());
                st = n;
            }
            Ok((col.into_iter().map(|s| s.expect("column filled")).collect(), ms))
        })
        .collect();
    let mut states = vec![Vec::new(); nu];
    for (i, c) in columns.into_iter().enumerate() {
        let (col, ms) = c?;
        max_sub = max_sub.max(ms);
        states[i] = col;
    }
    let nodes: Vec<Result<(Vec<f64>, Vec<f64>)>> = chart.par_map(|i, j| {
        let loc = Local::at(f, chart.z(i, j))?;
        let st = &states[i][j];
        let xi = loc.project_perp(&st.xi);
        Ok((loc.yhat(st.mu, &xi), xi))
    });
    let nodes: Vec<(Vec<f64>, Vec<f64>)> = nodes.into_iter().collect::<Result<_>>()?;
    let mu = Grid::from_fn(chart, stencil, |i, j| states[i][j].mu);
    let comp = |sel: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>| {
        MVec((0..dim).map(|a| Grid::from_fn(chart, stencil, |i, j| C64::new(sel(&nodes[j * nu + i])[a], 0.0))).collect())
    };
    let yhat = comp(|p| &p.0);
    let xi = comp(|p| &p.1);
    Ok(DarbouxResult { params: params.clone(), base, mu, xi, yhat, frame, max_substeps: max_sub })
}

/// Verification of an integrated Darboux pair.
#[derive(Clone, Debug, Serialize)]
pub struct DarbouxReport {
    pub theta_minus_c: f64,
    pub rho_residual: f64,
    pub zeta_residual: f64,
    pub conformality: f64,
    pub null_defect: f64,
    pub kappa_hat_imag: f64,
    pub kappa_hat_imag_relative: f64,
    pub commutator_mu: f64,
    pub commutator_xi: f64,
    pub max_substeps: usize,
    pub classification: Classification,
    pub residuals: Residuals,
}

impl DarbouxReport {
    /// Largest of the residuals that certify the transform.
    pub fn worst(&self) -> f64 {
        [self.rho_residual, self.zeta_residual, self.kappa_hat_imag, self.commutator_mu, self.commutator_xi]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn common(ws: &[Window]) -> Window {
    ws.iter().skip(1).fold(ws[0], |a, b| a.intersect(*b))
}

/// The normalized pair `(f, Ŷ)` of a Darboux run.
pub fn darboux_pair(res: &DarbouxResult) -> PairFields<Grid> {
    PairFields::from_normalized(res.frame.clone(), res.yhat.clone())
}

pub fn verify_darboux(res: &DarbouxResult, tol: &Tolerances) -> DarbouxReport {
    let c = res.params.c;
    let pf = darboux_pair(res);
    let inv = pf.invariants();
    let fr = &res.frame;
    let mu = &res.mu;
    let xi = &res.xi;
    let mu_z = mu.clone() * mu.clone() * 0.5 + c + fr.s.clone() + xi.inner(&fr.kappa) * 2.0;
    let mu_zb = (fr.kappa_sq() * 2.0 - xi.inner(xi) * 0.5).re();
    let xk = xi.inner(&fr.kappa);
    let xdk = xi.inner(&fr.kappa_zb());
    let mut xi_z = &xi.scale(&(mu.clone() * 0.5)) - &(&fr.kappa_zb() * 2.0);
    xi_z = &xi_z - &fr.kappa.scale(&mu.conj());
    xi_z = &xi_z + &fr.y.scale(&(xdk * 2.0));
    xi_z = &xi_z - &fr.y_zb.scale(&(xk * 2.0));
    let comm_mu = mu_z.dzb() - mu_zb.dz();
    let comm_xi = xi_z.dzb().map(|x| x.im()).norm() * 2.0;
    let yh = canonical_lift(&res.yhat);
    let fh = FrameFields::from_lift(yh);
    let kh_im = fh.kappa.map(|x| x.im()).mnorm();
    let kh = fh.kappa.mnorm();
    let (yzz, _) = pf.conformality_terms(&inv);
    let w = common(&[
        inv.theta.window(),
        inv.rho.window(),
        inv.zeta.0[0].window(),
        comm_mu.window(),
        comm_xi.window(),
        kh_im.window(),
    ]);
    let points: Vec<_> = pair_points_grid(&pf).into_iter().filter(|p| w.contains(p.point[0], p.point[1])).collect();
    let classification = classify_pair(&points, tol);
    DarbouxReport {
        theta_minus_c: (inv.theta.clone() + (-c)).sup_on(w),
        rho_residual: inv.rho.sup_on(w),
        zeta_residual: inv.zeta.mnorm().sup_on(w),
        conformality: yzz.sup_on(w),
        null_defect: res.yhat.inner(&res.yhat).sup_on(w),
        kappa_hat_imag: kh_im.sup_on(w),
        kappa_hat_imag_relative: kh_im.sup_on(w) / kh.sup_on(w).max(1e-300),
        commutator_mu: comm_mu.sup_on(w),
        commutator_xi: comm_xi.sup_on(w),
        max_substeps: res.max_substeps,
        classification,
        residuals: residual_sups(&points),
    }
}

/// Integrates and verifies; a commutator above `monitor_tol` is an error.
pub fn darboux_transform(
    f: &dyn Immersion,
    chart: &Chart,
    stencil: Stencil,
    params: &DarbouxParams,
    monitor_tol: f64,
) -> Result<(DarbouxResult, DarbouxReport)> {
    let res = darboux_integrate(f, chart, stencil, params)?;
    let rep = verify_darboux(&res, &Tolerances::default());
    let comm = rep.commutator_mu.max(rep.commutator_xi);
    if !(comm < monitor_tol) {
        return Err(Error::ConsistencyFailure(comm));
    }
    Ok((res, rep))
}
