//! A horocyclic cmc-1 surface: the second envelope of its central spheres is
//! confined to a round sphere, and the mean curvature there equals one.

use lightcone::catalog;
use lightcone::charts::grid::Stencil;
use lightcone::charts::Chart;
use lightcone::minkowski::MinkVector;
use lightcone::pair::{pair_sampled, Tolerances};
use lightcone::transforms::{cmc1_verify, HorosphereLift};

fn main() -> lightcone::Result<()> {
    let e = catalog::get("cmc1_horocyclic")?;
    let src = HorosphereLift { surface: e.surface.clone(), q: MinkVector::basis(5, 4) };
    let chart = Chart::centered(e.center, 1e-2, 24, 24)?;
    let pf = pair_sampled(e.surface.as_ref(), &src, &chart, Stencil::Eighth)?;
    let rep = cmc1_verify(&pf, &Tolerances::default())?;
    println!("branch               {:?}", rep.branch);
    println!("theta sup            {:.3e}", rep.theta_sup);
    println!("rho sup              {:.3e}", rep.rho_sup);
    println!("confined to a sphere {}", rep.confinement.confined);
    if let Some(d) = rep.sphere_defect {
        println!("sphere defect        {d:.3e}");
    }
    if let Some(d) = rep.mean_curvature_defect {
        println!("|H - 1|              {d:.3e}");
    }
    println!("cmc-1 confirmed      {}", rep.cmc1_confirmed);
    Ok(())
}
