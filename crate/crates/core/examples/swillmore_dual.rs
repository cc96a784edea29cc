//! The dual of the Clifford torus: same central spheres, and the dual of the
//! dual is the original surface.

use lightcone::catalog;
use lightcone::charts::field::jet_values;
use lightcone::frame::{central_sphere, frame_at, frame_of_lift};
use lightcone::minkowski::subspace_distance;
use lightcone::pair::{parallel_defect, Tolerances};
use lightcone::transforms::dual_swillmore;

fn main() -> lightcone::Result<()> {
    let tol = Tolerances::default();
    let e = catalog::get("clifford_torus")?;
    let fr = frame_at(e.surface.as_ref(), e.center)?;
    let (pf, data) = dual_swillmore(&fr, &tol)?;
    let inv = pf.invariants();
    println!("mu                 {:.6}", data.mu.value());
    println!("theta              {:.3e}", inv.theta.value().norm());
    println!("rho                {:.6}", inv.rho.value());

    let v = central_sphere(&fr.y)?;
    let vh = central_sphere(&pf.yhat)?;
    println!("dist(V, V^)        {:.3e}", subspace_distance(&v.v, &vh.v)?);

    let back = frame_of_lift(&pf.yhat)?;
    let (pf2, _) = dual_swillmore(&back, &tol)?;
    let a = jet_values(&pf2.yhat);
    let b = jet_values(&fr.y);
    let na = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    println!("dual of dual angle {:.3e}", parallel_defect(&a, &b) * nb / na);

    let cyl = catalog::get("cylinder")?;
    match dual_swillmore(&frame_at(cyl.surface.as_ref(), cyl.center)?, &tol) {
        Ok(_) => println!("cylinder: unexpectedly S-Willmore"),
        Err(err) => println!("cylinder: {err}"),
    }
    Ok(())
}
