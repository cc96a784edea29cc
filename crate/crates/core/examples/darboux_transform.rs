//! Darboux transform of the cylinder by integrating the Riccati system for
//! `(μ, ξ)`, followed by verification of the produced pair.

use lightcone::catalog;
use lightcone::charts::grid::Stencil;
use lightcone::charts::Chart;
use lightcone::transforms::{darboux_transform, DarbouxParams};
use num_complex::Complex64 as C64;

fn main() -> lightcone::Result<()> {
    let e = catalog::get("cylinder")?;
    let chart = Chart::centered(e.center, 5e-3, 40, 40)?;
    for (c, mu0) in [(1.0, C64::new(0.0, 0.0)), (0.5, C64::new(-0.1, 0.05))] {
        let params = DarbouxParams { c, mu0, ..DarbouxParams::default() };
        let (res, rep) = darboux_transform(e.surface.as_ref(), &chart, Stencil::Eighth, &params, 1e-5)?;
        println!("c = {c}, mu0 = {mu0}");
        println!("  verdict          {}", rep.classification.verdict);
        println!("  |theta - c|      {:.3e}", rep.theta_minus_c);
        println!("  rho residual     {:.3e}", rep.rho_residual);
        println!("  zeta residual    {:.3e}", rep.zeta_residual);
        println!("  Im kappa^        {:.3e}", rep.kappa_hat_imag);
        println!("  commutators      {:.3e} {:.3e}", rep.commutator_mu, rep.commutator_xi);
        println!("  max substeps     {}", res.max_substeps);
    }
    Ok(())
}
