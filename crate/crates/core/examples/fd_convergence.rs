//! Structure equations on finite-difference frames: residual against grid
//! spacing for the 2nd and 4th order stencils.

use lightcone::catalog;
use lightcone::charts::grid::Stencil;
use lightcone::charts::Chart;
use lightcone::frame::frame_fd;

fn main() -> lightcone::Result<()> {
    let e = catalog::get("cylinder")?;
    for stencil in [Stencil::Second, Stencil::Fourth] {
        println!("{stencil:?} stencil");
        let mut prev: Option<f64> = None;
        for (h, n) in [(0.04, 24), (0.02, 48), (0.01, 96)] {
            let chart = Chart::centered(e.center, h, n, n)?;
            let fr = frame_fd(e.surface.as_ref(), &chart, stencil, false)?;
            let worst = fr.structure_residuals().values().copied().fold(0.0, f64::max);
            let order = prev.map(|p| format!("order {:.2}", (p / worst).log2())).unwrap_or_default();
            println!("  h = {h:<5} sup residual {worst:.3e}  {order}");
            prev = Some(worst);
        }
    }
    Ok(())
}
