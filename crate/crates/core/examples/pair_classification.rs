//! Classifies a few surface pairs: an S-Willmore dual, a Möbius reflection,
//! a degenerate dual and a pair that envelopes nothing.

use lightcone::catalog;
use lightcone::charts::{Chart, Immersion, Shifted};
use lightcone::pair::{classify_pair, pair_points, LiftSource, ReflectionLift, SurfaceLift, Tolerances};
use lightcone::transforms::DualLift;
use num_complex::Complex64 as C64;
use std::sync::Arc;

fn main() -> lightcone::Result<()> {
    let clifford = catalog::get("clifford_torus")?;
    let torus = catalog::get("torus_of_revolution")?;
    let catenoid = catalog::get("catenoid_s3")?;
    let shifted: Arc<dyn Immersion> = Arc::new(Shifted { inner: torus.surface.clone(), delta: C64::new(0.07, 0.05) });

    let pairs: Vec<(&str, &catalog::CatalogEntry, Arc<dyn LiftSource>)> = vec![
        ("clifford + dual", &clifford, Arc::new(DualLift::new(clifford.surface.clone()))),
        ("torus + reflection", &torus, Arc::new(ReflectionLift::away_from(torus.surface.clone(), torus.center)?)),
        ("catenoid + dual", &catenoid, Arc::new(DualLift::new(catenoid.surface.clone()))),
        ("torus + shifted torus", &torus, Arc::new(SurfaceLift(shifted))),
    ];
    for (label, e, src) in pairs {
        let chart = Chart::centered(e.center, 1e-2, 8, 8)?;
        let pts = pair_points(e.surface.as_ref(), src.as_ref(), &chart)?;
        let c = classify_pair(&pts, &Tolerances::default());
        println!("{label:<24} {}", c.verdict);
        for k in ["zeta_sup", "theta_sup", "rho_sup", "xi_sup"] {
            println!("    {k:<10} {:.3e}", c.evidence[k]);
        }
        if let Some(w) = c.trivial_witness {
            let w: Vec<String> = w.iter().map(|x| format!("{x:.4}")).collect();
            println!("    witness    [{}]", w.join(", "));
        }
    }
    Ok(())
}
