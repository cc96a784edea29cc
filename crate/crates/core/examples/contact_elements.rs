//! Pair invariants read off contact elements: the tangent sphere through the
//! second point meets the second surface with `θ' = θ` and `ρ' = ρ`.

use lightcone::catalog;
use lightcone::charts::field::jet_values;
use lightcone::contact::proposition_at;
use lightcone::pair::{pair_at, LiftSource, ReflectionLift, Tolerances};
use lightcone::transforms::DualLift;

fn main() -> lightcone::Result<()> {
    let clifford = catalog::get("clifford_torus")?;
    let torus = catalog::get("torus_of_revolution")?;
    let cases: Vec<(&str, &catalog::CatalogEntry, Box<dyn LiftSource>)> = vec![
        ("clifford + dual", &clifford, Box::new(DualLift::new(clifford.surface.clone()))),
        ("torus + reflection", &torus, Box::new(ReflectionLift::away_from(torus.surface.clone(), torus.center)?)),
    ];
    for (label, e, src) in cases {
        let pf = pair_at(e.surface.as_ref(), src.as_ref(), e.center)?;
        let (ts, rs, _, _) = pf.scales();
        let c = proposition_at(
            &jet_values(&pf.frame.y),
            &jet_values(&pf.frame.y_z),
            &jet_values(&pf.yhat),
            &jet_values(&pf.yhat.dz()),
            (ts.value().re, rs.value().re),
            &Tolerances::default(),
        )?;
        println!("{label}");
        println!("  theta  {:.6}   theta' {:.6}", c.theta, c.theta_prime);
        println!("  rho    {:.6}   rho'   {:.6}", c.rho, c.rho_prime);
        println!("  touch {}  co-touch {}  defect {:.1e}", c.touch, c.cotouch, c.defect());
    }
    Ok(())
}
