//! `s`, `|κ|²`, `θ` and `ρ` are unchanged when both surfaces of a pair are
//! moved by the same Lorentz transformation.

use lightcone::catalog::{self, Transformed};
use lightcone::frame::frame_at;
use lightcone::minkowski::random_lorentz;
use lightcone::pair::{pair_at, ReflectionLift};

fn main() -> lightcone::Result<()> {
    let e = catalog::get("torus_of_revolution")?;
    let x = ReflectionLift::away_from(e.surface.clone(), e.center)?.x;
    let a = frame_at(e.surface.as_ref(), e.center)?;
    let pa = pair_at(e.surface.as_ref(), &ReflectionLift::new(e.surface.clone(), x.clone())?, e.center)?.invariants();
    for seed in 0..5 {
        let t = random_lorentz(seed, 3);
        let moved = std::sync::Arc::new(Transformed { inner: e.surface.clone(), map: t.clone() });
        let b = frame_at(moved.as_ref(), e.center)?;
        let pb = pair_at(moved.as_ref(), &ReflectionLift::new(moved.clone(), t.apply(&x))?, e.center)?.invariants();
        println!(
            "seed {seed}: |Δs| {:.1e}  |Δ|κ|²| {:.1e}  |Δθ| {:.1e}  |Δρ| {:.1e}",
            (a.s.value() - b.s.value()).norm(),
            (a.kappa_sq().value() - b.kappa_sq().value()).norm(),
            (pa.theta.value() - pb.theta.value()).norm(),
            (pa.rho.value() - pb.rho.value()).norm(),
        );
    }
    Ok(())
}
