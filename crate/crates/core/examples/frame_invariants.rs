//! Canonical frame, Schwarzian and Hopf differential of every catalog surface.

use lightcone::catalog;
use lightcone::classify::{isothermic_verify, willmore_residual};
use lightcone::frame::frame_at;

fn main() -> lightcone::Result<()> {
    println!("{:<22} {:>22} {:>10} {:>10} {:>10} {:>9}", "surface", "s", "|κ|²", "constr", "willmore", "Im κ/κ");
    for name in catalog::list() {
        let e = catalog::get(name)?;
        let fr = frame_at(e.surface.as_ref(), e.center)?;
        let constraints = fr.constraints().values().copied().fold(0.0, f64::max);
        let iso = isothermic_verify(&fr.kappa).map(|r| format!("{r:9.1e}")).unwrap_or_else(|_| "umbilic".into());
        println!(
            "{:<22} {:>22} {:>10.3e} {:>10.1e} {:>10.1e} {:>9}",
            name,
            format!("{:.4}", fr.s.value()),
            fr.kappa_sq().value().norm(),
            constraints,
            willmore_residual(&fr).value().norm(),
            iso,
        );
    }
    Ok(())
}
