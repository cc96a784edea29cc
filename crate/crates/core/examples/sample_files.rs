//! Round trip through the surface-sample file format: export a catalog
//! surface, read it back and compare the finite-difference frame with jets.

use lightcone::catalog;
use lightcone::charts::grid::Stencil;
use lightcone::charts::SurfaceSamples;
use lightcone::frame::{frame_at, frame_grid};

fn main() -> lightcone::Result<()> {
    let e = catalog::get("torus_of_revolution")?;
    let chart = e.chart(1e-2, 32)?;
    let path = std::env::temp_dir().join("torus_samples.json");
    e.export(&chart).write(&path)?;
    let samples = SurfaceSamples::read(&path)?;
    println!("wrote and read {} ({} points)", path.display(), samples.points.len());

    let fd = frame_grid(&samples, Stencil::Sixth)?;
    let (i, j) = chart.center_node();
    let exact = frame_at(e.surface.as_ref(), chart.z(i, j))?;
    println!("|s_fd - s|        {:.3e}", (fd.s.at(i, j)? - exact.s.value()).norm());
    let dk = fd.kappa.0.iter().zip(&exact.kappa.0).map(|(g, k)| (g.at(i, j).unwrap() - k.value()).norm()).fold(0.0, f64::max);
    println!("|κ_fd - κ|        {dk:.3e}");
    println!("constraints (fd)  {:.3e}", fd.constraints().values().copied().fold(0.0, f64::max));
    std::fs::remove_file(&path)?;
    Ok(())
}
