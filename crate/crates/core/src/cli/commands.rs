//! Surface references and the analysis behind each subcommand.

use super::config::RunConfig;
use super::report::{Check, Report, Table};
use crate::catalog::{self, CatalogEntry};
use crate::charts::field::{jet_values, Field, MVec};
use crate::charts::grid::{Grid, Stencil};
use crate::charts::{Chart, SurfaceSamples};
use crate::classify::UMBILIC_FLOOR;
use crate::contact::{proposition_at, PropositionCheck};
use crate::error::{Error, Result};
use crate::frame::{central_sphere, frame_at, frame_grid, frame_of_lift, frame_sampled, FrameFields};
use crate::minkowski::{random_spacelike, subspace_distance, MinkVector};
use crate::pair::{
    classify_pair, pair_at, pair_point, pair_points_grid, parallel_defect, residual_sups, LiftSource, PairFields,
    PairPoint, ReflectionLift, SurfaceLift, Verdict,
};
use crate::transforms::darboux::ISOTHERMIC_TOL;
use crate::transforms::{darboux_integrate, darboux_pair, dual_swillmore, verify_darboux, DarbouxParams, DualLift};
use num_complex::Complex64 as C64;
use std::path::PathBuf;
use std::sync::Arc;

/// `--surface`, `--a`, `--b` values.
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceRef {
    Catalog(String),
    File(PathBuf),
    Dual(String),
    Reflect(String, Option<Vec<f64>>),
    /// Reflection in a spacelike vector drawn from `--seed`.
    ReflectRandom(String),
}

impl SurfaceRef {
    pub fn parse(s: &str) -> Result<SurfaceRef> {
        let s = s.trim();
        if let Some(r) = s.strip_prefix("catalog:") {
            return Ok(SurfaceRef::Catalog(r.into()));
        }
        if let Some(r) = s.strip_prefix("file:") {
            let p = PathBuf::from(r);
            if !p.exists() {
                return Err(Error::Invalid(format!("no such file: {r}")));
            }
            return Ok(SurfaceRef::File(p));
        }
        if let Some(r) = s.strip_prefix("dual:") {
            return Ok(SurfaceRef::Dual(r.into()));
        }
        if let Some(r) = s.strip_prefix("reflect:") {
            return Ok(match r.split_once(':') {
                None => SurfaceRef::Reflect(r.into(), None),
                Some((name, "random")) => SurfaceRef::ReflectRandom(name.into()),
                Some((name, v)) => {
                    let x = v
                        .split(',')
                        .map(|c| c.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("reflection vector entry '{c}'"))))
                        .collect::<Result<Vec<f64>>>()?;
                    SurfaceRef::Reflect(name.into(), Some(x))
                }
            });
        }
        Ok(SurfaceRef::Catalog(s.into()))
    }
}

enum Base {
    Analytic(CatalogEntry),
    Sampled(SurfaceSamples),
}

enum Second {
    Lift(Arc<dyn LiftSource>),
    Sampled(SurfaceSamples),
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Invalid(format!("missing --{flag}")))
}

fn base(r: &str) -> Result<Base> {
    match SurfaceRef::parse(r)? {
        SurfaceRef::Catalog(n) => Ok(Base::Analytic(catalog::get(&n)?)),
        SurfaceRef::File(p) => Ok(Base::Sampled(SurfaceSamples::read(&p)?)),
        _ => Err(Error::Invalid(format!("'{r}' can only be used as the second surface of a pair"))),
    }
}

fn second(r: &str, cfg: &RunConfig) -> Result<Second> {
    Ok(match SurfaceRef::parse(r)? {
        SurfaceRef::Catalog(n) => Second::Lift(Arc::new(SurfaceLift(catalog::get(&n)?.surface))),
        SurfaceRef::File(p) => Second::Sampled(SurfaceSamples::read(&p)?),
        SurfaceRef::Dual(n) => Second::Lift(Arc::new(DualLift { surface: catalog::get(&n)?.surface, tol: cfg.tol })),
        SurfaceRef::Reflect(n, x) => {
            let e = catalog::get(&n)?;
            let src = match x {
                Some(x) => ReflectionLift::new(e.surface, MinkVector(x))?,
                None => {
                    let z = chart_for(cfg, &e)?.z(cfg.grid[0] / 2, cfg.grid[1] / 2);
                    ReflectionLift::away_from(e.surface, z)?
                }
            };
            Second::Lift(Arc::new(src))
        }
        SurfaceRef::ReflectRandom(n) => {
            let e = catalog::get(&n)?;
            let x = random_spacelike(cfg.seed, e.n + 2);
            Second::Lift(Arc::new(ReflectionLift::new(e.surface, x)?))
        }
    })
}

fn chart_for(cfg: &RunConfig, e: &CatalogEntry) -> Result<Chart> {
    let [nu, nv] = cfg.grid;
    match cfg.origin {
        Some([u, v]) => Chart::new(C64::new(u, v), cfg.h, nu, nv),
        None => Chart::centered(e.center, cfg.h, nu, nv),
    }
}

fn stencil(cfg: &RunConfig, default: usize) -> Result<Stencil> {
    Stencil::from_order(cfg.stencil.unwrap_or(default))
}

fn uv(chart: &Chart, i: usize, j: usize) -> (f64, f64) {
    let z = chart.z(i, j);
    (z.re, z.im)
}

// ---------------------------------------------------------------- analyze

struct FrameRow {
    point: [usize; 2],
    s: C64,
    kappa_sq: f64,
    willmore: f64,
    willmore_scale: f64,
    kappa_im: f64,
    kappa_norm: f64,
    dependence: f64,
    constraints: f64,
    structure: f64,
}

fn mdot(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = -(a[0] * b[0]);
    for k in 1..a.len() {
        acc += a[k] * b[k];
    }
    acc
}

struct FrameProbe<S> {
    willmore: S,
    willmore_scale: S,
    kappa_zb: MVec<S>,
    constraints: Vec<(&'static str, S)>,
    structure: Vec<(&'static str, S)>,
}

impl<S: Field> FrameProbe<S> {
    fn new(fr: &FrameFields<S>) -> Self {
        FrameProbe {
            willmore: crate::classify::willmore_residual(fr),
            willmore_scale: crate::classify::willmore_scale(fr),
            kappa_zb: fr.kappa_zb(),
            constraints: fr.constraint_fields(),
            structure: fr.structure_fields(),
        }
    }

    fn row(&self, fr: &FrameFields<S>, read: impl Fn(&S) -> Option<C64>, point: [usize; 2]) -> Option<FrameRow> {
        let vec = |v: &MVec<S>| -> Option<Vec<C64>> { v.0.iter().map(&read).collect() };
        let kappa = vec(&fr.kappa)?;
        let kb: Vec<C64> = kappa.iter().map(|c| c.conj()).collect();
        let dk = vec(&self.kappa_zb)?;
        let kk = mdot(&kappa, &kb).re;
        let kim: Vec<C64> = kappa.iter().map(|c| C64::new(c.im, 0.0)).collect();
        let dk_norm = mdot(&dk, &dk.iter().map(|c| c.conj()).collect::<Vec<_>>()).re.abs().sqrt();
        let dependence = if kk > UMBILIC_FLOOR && dk_norm > 1e-14 {
            let mub = mdot(&dk, &kb) / kk * (-2.0);
            let d: Vec<C64> = dk.iter().zip(&kappa).map(|(a, k)| a + k * mub * 0.5).collect();
            mdot(&d, &d.iter().map(|c| c.conj()).collect::<Vec<_>>()).re.abs().sqrt() / dk_norm
        } else {
            0.0
        };
        let sup = |fs: &[(&'static str, S)]| -> Option<f64> {
            fs.iter().map(|(_, f)| read(f).map(|c| c.norm())).try_fold(0.0f64, |a, b| b.map(|b| a.max(b)))
        };
        Some(FrameRow {
            point,
            s: read(&fr.s)?,
            kappa_sq: kk,
            willmore: read(&self.willmore)?.re,
            willmore_scale: read(&self.willmore_scale)?.re,
            kappa_im: mdot(&kim, &kim).re.abs().sqrt(),
            kappa_norm: kk.abs().sqrt(),
            dependence,
            constraints: sup(&self.constraints)?,
            structure: sup(&self.structure)?,
        })
    }
}

pub fn analyze(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let (rows, chart, known) = match base(required(&cfg.surface, "surface")?)? {
        Base::Analytic(e) => {
            let chart = chart_for(cfg, &e)?;
            let rows = chart
                .par_map(|i, j| {
                    let fr = frame_at(e.surface.as_ref(), chart.z(i, j))?;
                    FrameProbe::new(&fr)
                        .row(&fr, |x| Some(x.value()), [i, j])
                        .ok_or_else(|| Error::FrameDegenerate("jet order exhausted".into()))
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            (rows, chart, Some(e.flags))
        }
        Base::Sampled(s) => {
            let fr = frame_grid(&s, stencil(cfg, 4)?)?;
            let probe = FrameProbe::new(&fr);
            let chart = s.chart.clone();
            let rows: Vec<FrameRow> = (0..chart.nv)
                .flat_map(|j| (0..chart.nu).map(move |i| (i, j)))
                .filter_map(|(i, j)| probe.row(&fr, |x: &Grid| x.at(i, j).ok(), [i, j]))
                .collect();
            if rows.is_empty() {
                return Err(Error::Invalid("chart too small for the stencil".into()));
            }
            (rows, chart, None)
        }
    };
    let max = |f: &dyn Fn(&FrameRow) -> f64| rows.iter().map(f).fold(0.0f64, f64::max);
    rep.summary("abs_s", rows.iter().map(|r| r.s.norm()));
    rep.summary("kappa_sq", rows.iter().map(|r| r.kappa_sq));
    rep.summary("willmore", rows.iter().map(|r| r.willmore));
    rep.summary("constraints", rows.iter().map(|r| r.constraints));
    rep.summary("structure", rows.iter().map(|r| r.structure));
    let kmax = max(&|r| r.kappa_sq);
    let umbilic = kmax < UMBILIC_FLOOR;
    let willmore = cfg.tol.is_zero(max(&|r| r.willmore), max(&|r| r.willmore_scale));
    let iso_ratio = max(&|r| r.kappa_im) / max(&|r| r.kappa_norm).max(1e-300);
    let isothermic = !umbilic && iso_ratio < ISOTHERMIC_TOL;
    let dependence = max(&|r| r.dependence);
    let swillmore = willmore && !umbilic && cfg.tol.is_zero(dependence, 1.0);
    rep.value("constraints_sup", max(&|r| r.constraints));
    rep.value("structure_sup", max(&|r| r.structure));
    rep.value("willmore_sup", max(&|r| r.willmore));
    rep.value("isothermic_ratio", iso_ratio);
    rep.value("strong_dependence_sup", dependence);
    for (k, v) in [("umbilic", umbilic), ("willmore", willmore), ("isothermic_chart", isothermic), ("swillmore", swillmore)] {
        rep.flags.insert(k.into(), v);
    }
    if let Some(k) = known {
        let agree = k.umbilic == umbilic && k.willmore == willmore && k.swillmore == swillmore && k.isothermic == isothermic;
        rep.checks.push(Check::holds("catalog_flags_agree", agree));
    }
    let mut t = Table::new(&[
        "i", "j", "u", "v", "abs_s", "kappa_sq", "willmore", "kappa_im", "dependence", "constraints", "structure",
    ]);
    for r in &rows {
        let (u, v) = uv(&chart, r.point[0], r.point[1]);
        t.push(vec![
            r.point[0] as f64,
            r.point[1] as f64,
            u,
            v,
            r.s.norm(),
            r.kappa_sq,
            r.willmore,
            r.kappa_im,
            r.dependence,
            r.constraints,
            r.structure,
        ]);
    }
    t.sort_row_major();
    rep.table = Some(t);
    Ok(())
}

// ---------------------------------------------------------------- pairs

/// Values at one node needed for the contact-element checks.
struct ContactInput {
    y: Vec<C64>,
    y_z: Vec<C64>,
    yhat: Vec<C64>,
    yhat_z: Vec<C64>,
}

struct PairRun {
    chart: Chart,
    points: Vec<PairPoint>,
    contact: Vec<ContactInput>,
}

fn sampled_lift(src: &dyn LiftSource, chart: &Chart, st: Stencil) -> Result<MVec<Grid>> {
    let vals: Vec<Vec<C64>> = chart
        .par_map(|i, j| src.lift_jet(chart.z(i, j)).map(|l| jet_values(&l)))
        .into_iter()
        .collect::<Result<_>>()?;
    let dim = vals[0].len();
    let nu = chart.nu;
    Ok(MVec((0..dim).map(|a| Grid::from_fn(chart, st, |i, j| C64::new(vals[j * nu + i][a].re, 0.0))).collect()))
}

fn grid_run(pf: PairFields<Grid>, chart: Chart, want_contact: bool) -> Result<PairRun> {
    let points = pair_points_grid(&pf);
    if points.is_empty() {
        return Err(Error::Invalid(format!("{}x{} grid leaves no interior points for this stencil", chart.nu, chart.nv)));
    }
    let contact = if want_contact {
        let yhz = pf.yhat.dz();
        let at = |v: &MVec<Grid>, i, j| -> Vec<C64> { v.0.iter().map(|g| g.at(i, j).unwrap_or(C64::new(f64::NAN, 0.0))).collect() };
        points
            .iter()
            .map(|p| {
                let [i, j] = p.point;
                ContactInput { y: at(&pf.frame.y, i, j), y_z: at(&pf.frame.y_z, i, j), yhat: at(&pf.yhat, i, j), yhat_z: at(&yhz, i, j) }
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(PairRun { chart, points, contact })
}

fn run_pair(cfg: &RunConfig, want_contact: bool) -> Result<PairRun> {
    let a = base(required(&cfg.a, "a")?)?;
    let b = second(required(&cfg.b, "b")?, cfg)?;
    let st = stencil(cfg, 4)?;
    match (a, b) {
        (Base::Analytic(e), Second::Lift(src)) => {
            let chart = chart_for(cfg, &e)?;
            let f = e.surface.as_ref();
            let nodes = chart
                .par_map(|i, j| -> Result<(PairPoint, Option<ContactInput>)> {
                    let p = pair_point(f, src.as_ref(), &chart, i, j)?;
                    let c = if want_contact {
                        let pf = pair_at(f, src.as_ref(), chart.z(i, j))?;
                        Some(ContactInput {
                            y: jet_values(&pf.frame.y),
                            y_z: jet_values(&pf.frame.y_z),
                            yhat: jet_values(&pf.yhat),
                            yhat_z: jet_values(&pf.yhat.dz()),
                        })
                    } else {
                        None
                    };
                    Ok((p, c))
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let (points, contact): (Vec<_>, Vec<_>) = nodes.into_iter().unzip();
            Ok(PairRun { chart, points, contact: contact.into_iter().flatten().collect() })
        }
        (Base::Analytic(e), Second::Sampled(s)) => {
            let frame = frame_sampled(e.surface.as_ref(), &s.chart, st)?;
            let pf = PairFields::new(frame, &s.flat_lift_grid(st));
            grid_run(pf, s.chart, want_contact)
        }
        (Base::Sampled(s), b) => {
            let frame = frame_grid(&s, st)?;
            let yhat = match b {
                Second::Lift(src) => sampled_lift(src.as_ref(), &s.chart, st)?,
                Second::Sampled(t) => {
                    if t.chart != s.chart {
                        return Err(Error::Invalid("sampled surfaces of a pair must share one chart".into()));
                    }
                    t.flat_lift_grid(st)
                }
            };
            let pf = PairFields::new(frame, &yhat);
            grid_run(pf, s.chart, want_contact)
        }
    }
}

fn pair_table(points: &[PairPoint], chart: &Chart) -> Table {
    let res_names: Vec<String> = points.first().map(|p| p.residuals.keys().cloned().collect()).unwrap_or_default();
    let mut cols: Vec<String> = [
        "i", "j", "u", "v", "theta_re", "theta_im", "rho_re", "rho_im", "abs_theta", "abs_rho", "zeta", "xi", "mu_re",
        "mu_im",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    cols.extend(res_names.iter().cloned());
    let mut t = Table { columns: cols, rows: Vec::new() };
    for p in points {
        let (u, v) = uv(chart, p.point[0], p.point[1]);
        let mut row = vec![
            p.point[0] as f64,
            p.point[1] as f64,
            u,
            v,
            p.theta.re,
            p.theta.im,
            p.rho.re,
            p.rho.im,
            p.theta.norm(),
            p.rho.norm(),
            p.zeta,
            p.xi,
            p.mu.re,
            p.mu.im,
        ];
        row.extend(res_names.iter().map(|k| p.residuals.get(k).copied().unwrap_or(f64::NAN)));
        t.push(row);
    }
    t.sort_row_major();
    t
}

fn report_pair(rep: &mut Report, cfg: &RunConfig, chart: &Chart, points: &[PairPoint]) -> Verdict {
    let cls = classify_pair(points, &cfg.tol);
    rep.summary("abs_theta", points.iter().map(|p| p.theta.norm()));
    rep.summary("abs_rho", points.iter().map(|p| p.rho.norm()));
    rep.summary("zeta", points.iter().map(|p| p.zeta));
    rep.summary("xi", points.iter().map(|p| p.xi));
    rep.summary("abs_mu", points.iter().map(|p| p.mu.norm()));
    rep.values_from("evidence.", &cls.evidence);
    rep.values_from("residual.", &residual_sups(points));
    rep.verdict = Some(cls.verdict.to_string());
    if let Some(w) = cls.trivial_witness {
        rep.witnesses.insert("reflection_vector".into(), w);
    }
    rep.table = Some(pair_table(points, chart));
    cls.verdict
}

pub fn pair(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let run = run_pair(cfg, false)?;
    report_pair(rep, cfg, &run.chart, &run.points);
    Ok(())
}

pub fn contact(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let run = run_pair(cfg, true)?;
    let verdict = classify_pair(&run.points, &cfg.tol).verdict;
    let checks: Vec<PropositionCheck> = run
        .points
        .iter()
        .zip(&run.contact)
        .map(|(p, c)| proposition_at(&c.y, &c.y_z, &c.yhat, &c.yhat_z, (p.theta_scale, p.rho_scale), &cfg.tol))
        .collect::<Result<_>>()?;
    let defect = checks.iter().map(PropositionCheck::defect).fold(0.0, f64::max);
    let frame_route = run
        .points
        .iter()
        .zip(&checks)
        .map(|(p, c)| (p.theta - c.theta_prime).norm().max((p.rho - c.rho_prime).norm()))
        .fold(0.0, f64::max);
    rep.value("proposition_defect", defect);
    rep.value("proposition_vs_frame_route", frame_route);
    rep.summary("abs_theta_prime", checks.iter().map(|c| c.theta_prime.norm()));
    rep.summary("abs_rho_prime", checks.iter().map(|c| c.rho_prime.norm()));
    rep.checks.push(Check::holds("predicates_match_branches", checks.iter().all(PropositionCheck::consistent)));
    let all_touch = checks.iter().all(|c| c.touch);
    let all_cotouch = checks.iter().all(|c| c.cotouch);
    rep.flags.insert("touch_everywhere".into(), all_touch);
    rep.flags.insert("cotouch_everywhere".into(), all_cotouch);
    match verdict {
        Verdict::DarbouxIsothermic => rep.checks.push(Check::holds("darboux_pair_touches", all_touch)),
        Verdict::SWillmoreDual => rep.checks.push(Check::holds("dual_pair_cotouches", all_cotouch)),
        _ => {}
    }
    rep.verdict = Some(verdict.to_string());
    let mut t = Table::new(&[
        "i",
        "j",
        "u",
        "v",
        "theta_re",
        "theta_im",
        "rho_re",
        "rho_im",
        "theta_prime_re",
        "theta_prime_im",
        "rho_prime_re",
        "rho_prime_im",
        "touch",
        "cotouch",
    ]);
    for (p, c) in run.points.iter().zip(&checks) {
        let (u, v) = uv(&run.chart, p.point[0], p.point[1]);
        let b = |x: bool| if x { 1.0 } else { 0.0 };
        t.push(vec![
            p.point[0] as f64,
            p.point[1] as f64,
            u,
            v,
            c.theta.re,
            c.theta.im,
            c.rho.re,
            c.rho.im,
            c.theta_prime.re,
            c.theta_prime.im,
            c.rho_prime.re,
            c.rho_prime.im,
            b(c.touch),
            b(c.cotouch),
        ]);
    }
    t.sort_row_major();
    rep.table = Some(t);
    Ok(())
}

// ---------------------------------------------------------------- transforms

pub fn dual(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    match base(required(&cfg.surface, "surface")?)? {
        Base::Analytic(e) => {
            let chart = chart_for(cfg, &e)?;
            let f = e.surface.as_ref();
            let src = DualLift { surface: e.surface.clone(), tol: cfg.tol };
            let nodes = chart
                .par_map(|i, j| -> Result<(PairPoint, f64, f64, Option<f64>)> {
                    let fr = frame_at(f, chart.z(i, j))?;
                    let (pf, data) = dual_swillmore(&fr, &cfg.tol)?;
                    let p = pair_point(f, &src, &chart, i, j)?;
                    let v = central_sphere(&fr.y)?;
                    let sphere = match central_sphere(&pf.yhat) {
                        Ok(vh) => subspace_distance(&v.v, &vh.v)?,
                        Err(_) => f64::NAN,
                    };
                    let back = frame_of_lift(&pf.yhat).and_then(|fh| dual_swillmore(&fh, &cfg.tol)).ok().map(|(pf2, _)| {
                        let a = jet_values(&pf2.yhat);
                        let b = jet_values(&fr.y);
                        let na = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                        let nb = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                        parallel_defect(&a, &b) * nb / na
                    });
                    Ok((p, data.dependence_residual.value().re, sphere, back))
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let points: Vec<PairPoint> = nodes.iter().map(|n| n.0.clone()).collect();
            rep.value("strong_dependence_sup", nodes.iter().map(|n| n.1).fold(0.0, f64::max));
            let degenerate = nodes.iter().any(|n| n.2.is_nan() || n.3.is_none());
            if !degenerate {
                rep.value("central_sphere_distance_sup", nodes.iter().map(|n| n.2).fold(0.0, f64::max));
                rep.value("dual_of_dual_defect_sup", nodes.iter().filter_map(|n| n.3).fold(0.0, f64::max));
            }
            rep.flags.insert("dual_degenerate".into(), degenerate);
            report_pair(rep, cfg, &chart, &points);
        }
        Base::Sampled(s) => {
            let fr = frame_grid(&s, stencil(cfg, 4)?)?;
            let (pf, data) = dual_swillmore(&fr, &cfg.tol)?;
            rep.value("strong_dependence_sup", data.dependence_residual.sup());
            let run = grid_run(pf, s.chart, false)?;
            report_pair(rep, cfg, &run.chart, &run.points);
        }
    }
    Ok(())
}

pub fn darboux(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let e = match base(required(&cfg.surface, "surface")?)? {
        Base::Analytic(e) => e,
        Base::Sampled(_) => return Err(Error::Invalid("darboux needs a catalog surface".into())),
    };
    let chart = chart_for(cfg, &e)?;
    let params = DarbouxParams { c: cfg.c, mu0: C64::new(cfg.mu0[0], cfg.mu0[1]), xi0: cfg.xi0.clone(), ..Default::default() };
    let res = darboux_integrate(e.surface.as_ref(), &chart, stencil(cfg, 8)?, &params)?;
    let dr = verify_darboux(&res, &cfg.tol);
    for (k, v) in [
        ("theta_minus_c", dr.theta_minus_c),
        ("rho_residual", dr.rho_residual),
        ("zeta_residual", dr.zeta_residual),
        ("conformality", dr.conformality),
        ("null_defect", dr.null_defect),
        ("kappa_hat_imag", dr.kappa_hat_imag),
        ("kappa_hat_imag_relative", dr.kappa_hat_imag_relative),
        ("commutator_mu", dr.commutator_mu),
        ("commutator_xi", dr.commutator_xi),
        ("max_substeps", dr.max_substeps as f64),
    ] {
        rep.value(k, v);
    }
    rep.checks.push(Check::below("darboux_certificate", dr.worst(), 1e-5));
    let pf = darboux_pair(&res);
    let w = dr.classification.evidence.clone();
    let points: Vec<PairPoint> = pair_points_grid(&pf);
    report_pair(rep, cfg, &chart, &points);
    rep.values_from("evidence.", &w);
    rep.verdict = Some(dr.classification.verdict.to_string());
    Ok(())
}

// ---------------------------------------------------------------- catalog

pub fn catalog_cmd(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    match &cfg.surface {
        None => {
            for name in catalog::list() {
                let e = catalog::get(name)?;
                rep.names.push(name.to_string());
                let f = e.flags;
                for (k, v) in [
                    ("isothermic", f.isothermic),
                    ("willmore", f.willmore),
                    ("swillmore", f.swillmore),
                    ("minimal_in_space_form", f.minimal_in_space_form),
                    ("umbilic", f.umbilic),
                ] {
                    rep.flags.insert(format!("{name}.{k}"), v);
                }
                rep.value(&format!("{name}.n"), e.n as f64);
            }
        }
        Some(r) => {
            let e = match SurfaceRef::parse(r)? {
                SurfaceRef::Catalog(n) => catalog::get(&n)?,
                _ => return Err(Error::Invalid("catalog export takes a catalog surface".into())),
            };
            let chart = chart_for(cfg, &e)?;
            let s = e.export(&chart);
            let mut cols: Vec<String> = ["i", "j", "u", "v"].iter().map(|c| c.to_string()).collect();
            cols.extend((0..=e.n).map(|k| format!("x{k}")));
            let mut t = Table { columns: cols, rows: Vec::new() };
            for j in 0..chart.nv {
                for i in 0..chart.nu {
                    let (u, v) = uv(&chart, i, j);
                    let mut row = vec![i as f64, j as f64, u, v];
                    row.extend(&s.points[j * chart.nu + i]);
                    t.push(row);
                }
            }
            rep.table = Some(t);
            rep.names.push(e.name.clone());
            rep.export = Some(s);
        }
    }
    Ok(())
}
