//! Recovers a curvature-line chart from a holomorphic `θ`.
//!
//! The cylinder is viewed through `z = φ(w) = w + w²/4`, where its Hopf
//! differential is no longer real. Integrating `dw' = √θ dw` with `θ = φ'²`
//! returns a chart in which `κ` is real again.

use lightcone::catalog;
use lightcone::charts::grid::{Grid, Stencil};
use lightcone::charts::jet::Jet;
use lightcone::charts::{Chart, Reparametrized};
use lightcone::classify::{isothermic_verify, kappa_in_theta_chart, theta_coordinate, ThetaTolerances};
use lightcone::frame::frame_sampled;
use num_complex::Complex64 as C64;

fn phi(w: Jet) -> Jet {
    w * w * 0.25 + w
}

fn main() -> lightcone::Result<()> {
    let e = catalog::get("cylinder")?;
    let f = Reparametrized { inner: e.surface.clone(), map: phi, label: "phi".into() };
    let chart = Chart::centered(C64::new(0.3, 0.2), 1e-2, 41, 41)?;
    let fr = frame_sampled(&f, &chart, Stencil::Sixth)?;
    println!("Im κ / |κ| in the w chart       {:.3e}", isothermic_verify(&fr.kappa)?);

    let theta = Grid::from_fn(&chart, Stencil::Sixth, |i, j| {
        let d = 1.0 + chart.z(i, j) * 0.5;
        d * d
    });
    let tc = theta_coordinate(&theta, chart.center_node(), &ThetaTolerances::default())?;
    println!("Cauchy-Riemann defect of w'     {:.3e}", tc.cauchy_riemann);
    println!("w'_z - √θ defect                {:.3e}", tc.derivative_defect);

    let win = tc.sqrt_theta.window();
    let kappa = lightcone::charts::field::MVec(fr.kappa.0.iter().map(|k| k.restrict(win)).collect());
    let k2 = kappa_in_theta_chart(&kappa, &tc.sqrt_theta);
    println!("Im κ / |κ| in the θ chart       {:.3e}", isothermic_verify(&k2)?);
    Ok(())
}
