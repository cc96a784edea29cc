//! A fast property suite over the catalog, run by `lightcone selftest`.

use super::config::RunConfig;
use super::report::{Check, Report};
use crate::catalog::{self, Transformed};
use crate::charts::field::jet_values;
use crate::charts::grid::Stencil;
use crate::charts::{Chart, Immersion, Shifted};
use crate::contact::proposition_at;
use crate::error::Result;
use crate::frame::{central_sphere, frame_at, frame_fd, mean_curvature_oracle_s3};
use crate::minkowski::{random_lorentz, MinkVector};
use crate::pair::{classify_pair, pair_at, pair_points, LiftSource, ReflectionLift, SurfaceLift, TransformedLift, Verdict};
use crate::transforms::{darboux_transform, DarbouxParams, DualLift};
use num_complex::Complex64 as C64;
use std::sync::Arc;

fn sup(m: &crate::frame::Residuals) -> f64 {
    m.values().copied().fold(0.0, f64::max)
}

pub fn selftest(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    for name in catalog::list() {
        let e = catalog::get(name)?;
        let fr = frame_at(e.surface.as_ref(), e.center)?;
        rep.checks.push(Check::below(format!("frame_constraints.{name}"), sup(&fr.constraints()), 1e-9));
    }
    for name in ["round_sphere", "clifford_torus", "cylinder"] {
        let e = catalog::get(name)?;
        let fr = frame_fd(e.surface.as_ref(), &e.chart(cfg.h, 16)?, Stencil::Fourth, true)?;
        rep.checks.push(Check::below(format!("structure_fd.{name}"), sup(&fr.structure_residuals()), 1e-6));
    }

    let clifford = catalog::get("clifford_torus")?;
    let torus = catalog::get("torus_of_revolution")?;
    let catenoid = catalog::get("catenoid_s3")?;
    let x = MinkVector(vec![0.3, 1.0, 0.2, -0.4, 0.5]);
    let shifted: Arc<dyn Immersion> = Arc::new(Shifted { inner: torus.surface.clone(), delta: C64::new(0.07, 0.05) });
    let matrix: Vec<(&str, &catalog::CatalogEntry, Arc<dyn LiftSource>, Verdict)> = vec![
        ("clifford_dual", &clifford, Arc::new(DualLift::new(clifford.surface.clone())), Verdict::SWillmoreDual),
        ("torus_reflection", &torus, Arc::new(ReflectionLift::away_from(torus.surface.clone(), torus.center)?), Verdict::TrivialMoebius),
        ("catenoid_dual", &catenoid, Arc::new(DualLift::new(catenoid.surface.clone())), Verdict::Degenerate),
        ("torus_shifted", &torus, Arc::new(SurfaceLift(shifted)), Verdict::NotEnveloping),
    ];
    let mut two_path = 0.0f64;
    for (label, e, src, want) in &matrix {
        let chart = Chart::centered(e.center, 0.05, 5, 5)?;
        let pts = pair_points(e.surface.as_ref(), src.as_ref(), &chart)?;
        for p in &pts {
            two_path = two_path.max(p.residuals["two_path_theta"]).max(p.residuals["two_path_rho"]);
        }
        let got = classify_pair(&pts, &cfg.tol).verdict;
        rep.checks.push(Check::holds(format!("classify.{label}.{want}"), got == *want));
    }
    rep.checks.push(Check::below("two_path_invariants", two_path, 1e-10));

    let t = random_lorentz(cfg.seed, 3);
    let moved = Transformed { inner: clifford.surface.clone(), map: t.clone() };
    let moved_dual = TransformedLift { inner: Arc::new(DualLift::new(clifford.surface.clone())), map: t };
    let src = ReflectionLift::new(clifford.surface.clone(), x)?;
    let a = pair_at(clifford.surface.as_ref(), &src, clifford.center)?.invariants();
    let moved_src = TransformedLift { inner: Arc::new(src), map: moved_dual.map.clone() };
    let b = pair_at(&moved, &moved_src, clifford.center)?.invariants();
    let dv = (a.theta.value() - b.theta.value()).norm().max((a.rho.value() - b.rho.value()).norm());
    rep.checks.push(Check::below("moebius_invariance", dv, 1e-8));

    let pf = pair_at(clifford.surface.as_ref(), &DualLift::new(clifford.surface.clone()), clifford.center)?;
    let c = proposition_at(
        &jet_values(&pf.frame.y),
        &jet_values(&pf.frame.y_z),
        &jet_values(&pf.yhat),
        &jet_values(&pf.yhat.dz()),
        (1.0, 1.0),
        &cfg.tol,
    )?;
    rep.checks.push(Check::below("contact_proposition", c.defect(), 1e-8));
    rep.checks.push(Check::holds("dual_pair_cotouches", c.cotouch && c.consistent()));

    let v = central_sphere(&frame_at(clifford.surface.as_ref(), clifford.center)?.y)?;
    let (hs, hsph) = mean_curvature_oracle_s3(clifford.surface.as_ref(), clifford.center, &v.vperp)?;
    rep.checks.push(Check::below("mean_curvature_sphere", (hs.abs() - hsph).abs(), 1e-6));

    let cyl = catalog::get("cylinder")?;
    let chart = Chart::centered(cyl.center, 5e-3, 40, 40)?;
    let (_, dr) = darboux_transform(cyl.surface.as_ref(), &chart, Stencil::Eighth, &DarbouxParams::default(), 1e-5)?;
    rep.checks.push(Check::below("darboux_certificate", dr.worst(), 1e-5));
    rep.checks.push(Check::holds("darboux_verdict", dr.classification.verdict == Verdict::DarbouxIsothermic));

    for c in &rep.checks {
        rep.values.insert(c.name.clone(), c.value);
    }
    rep.value("checks_failed", rep.checks.iter().filter(|c| !c.pass).count() as f64);
    Ok(())
}
