//! Transformation of `s` and `κ` under holomorphic chart changes, checked
//! against a direct recomputation in the new chart.

use lightcone::catalog;
use lightcone::charts::field::jet_values;
use lightcone::charts::jet::Jet;
use lightcone::charts::Reparametrized;
use lightcone::frame::{frame_at, map_derivatives, schwarzian, transform_coordinate};
use num_complex::Complex64 as C64;

fn moebius(w: Jet) -> Jet {
    (w * 0.8 + C64::new(0.1, 0.2)) / (w * C64::new(0.1, 0.05) + 1.0)
}

fn cubic(w: Jet) -> Jet {
    w * w * w * 0.2 + w
}

fn main() -> lightcone::Result<()> {
    let e = catalog::get("torus_of_revolution")?;
    let w = C64::new(0.4, 0.1);
    for (label, map) in [("moebius", moebius as fn(Jet) -> Jet), ("cubic", cubic as fn(Jet) -> Jet)] {
        let (z, d1, d2, d3) = map_derivatives(map, w);
        let base = frame_at(e.surface.as_ref(), z)?;
        let (s2, k2) = transform_coordinate(base.s.value(), &jet_values(&base.kappa), d1, d2, d3)?;
        let direct = frame_at(&Reparametrized { inner: e.surface.clone(), map, label: label.into() }, w)?;
        let dk = jet_values(&direct.kappa).iter().zip(&k2).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        println!("{label:<8} schwarzian {:.3e}  |Δs| {:.3e}  |Δκ| {:.3e}", schwarzian(d1, d2, d3).norm(), (direct.s.value() - s2).norm(), dk);
    }
    Ok(())
}
