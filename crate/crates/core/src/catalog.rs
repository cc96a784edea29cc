//! Built-in analytic surfaces with exact jets.

use crate::charts::jet::Jet;
use crate::charts::{Chart, Immersion, SurfaceSamples};
use crate::error::{Error, Result};
use crate::minkowski::Lorentz;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::sync::Arc;

/// Inverse stereographic projection `R^m → S^m`,
/// `σ(x) = ((|x|² − 1)/(|x|² + 1), 2x/(|x|² + 1))`.
pub fn inverse_stereographic(x: &[f64]) -> Vec<f64> {
    let r2: f64 = x.iter().map(|a| a * a).sum();
    let d = 1.0 / (r2 + 1.0);
    let mut out = vec![(r2 - 1.0) * d];
    out.extend(x.iter().map(|a| 2.0 * a * d));
    out
}

/// [`inverse_stereographic`] on jets.
pub fn inverse_stereographic_jet(x: &[Jet]) -> Vec<Jet> {
    let mut r2 = x[0] * x[0];
    for a in &x[1..] {
        r2 = r2 + *a * *a;
    }
    let d = (r2 + 1.0).recip();
    let mut out = vec![(r2 + -1.0) * d];
    out.extend(x.iter().map(|a| *a * d * 2.0));
    out
}

/// Which classical classes a catalog surface belongs to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KnownFlags {
    pub isothermic: bool,
    pub willmore: bool,
    pub swillmore: bool,
    pub minimal_in_space_form: bool,
    pub umbilic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    RoundSphere,
    CliffordTorus,
    Cylinder,
    TorusOfRevolution(f64),
    CatenoidS3,
    EnneperS3,
    HolomorphicCurveS4,
    Cmc1Horocyclic,
}

/// A named analytic surface.
#[derive(Clone, Debug)]
pub struct Surface {
    kind: Kind,
}

impl Immersion for Surface {
    fn n(&self) -> usize {
        match self.kind {
            Kind::HolomorphicCurveS4 => 4,
            _ => 3,
        }
    }

    fn name(&self) -> String {
        match self.kind {
            Kind::TorusOfRevolution(r) => format!("torus_of_revolution({r})"),
            k => NAMES.iter().find(|(_, kk)| *kk == k).map(|(n, _)| n.to_string()).unwrap_or_default(),
        }
    }

    fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
        let zero = u * 0.0;
        match self.kind {
            Kind::RoundSphere => inverse_stereographic_jet(&[u, v, zero]),
            Kind::CliffordTorus => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                vec![u.cos() * s, u.sin() * s, v.cos() * s, v.sin() * s]
            }
            Kind::Cylinder => inverse_stereographic_jet(&[u.cos(), u.sin(), v]),
            Kind::TorusOfRevolution(ratio) => {
                let (big, r) = (1.0, 1.0 / ratio);
                let k = ((big + r) / (big - r)).sqrt();
                let a = (big * big - r * r).sqrt() / r;
                let half = v * (a / 2.0);
                let (s, c) = (half.sin() * k, half.cos());
                let den = (c * c + s * s).recip();
                let cos_phi = (c * c - s * s) * den;
                let sin_phi = s * c * den * 2.0;
                let rho = cos_phi * r + big;
                inverse_stereographic_jet(&[rho * u.cos(), rho * u.sin(), sin_phi * r])
            }
            Kind::CatenoidS3 => {
                let ch = v.cosh();
                inverse_stereographic_jet(&[ch * u.cos(), ch * u.sin(), v])
            }
            Kind::EnneperS3 => {
                let x = u - u * u * u * (1.0 / 3.0) + u * v * v;
                let y = -v + v * v * v * (1.0 / 3.0) - u * u * v;
                inverse_stereographic_jet(&[x, y, u * u - v * v])
            }
            Kind::HolomorphicCurveS4 => inverse_stereographic_jet(&[u, v, u * u - v * v, u * v * 2.0]),
            Kind::Cmc1Horocyclic => {
                let t = v.tanh();
                let sech = v.cosh().recip();
                inverse_stereographic_jet(&[u, v - t * 2.0, sech * 2.0])
            }
        }
    }
}

const NAMES: &[(&str, Kind)] = &[
    ("round_sphere", Kind::RoundSphere),
    ("clifford_torus", Kind::CliffordTorus),
    ("cylinder", Kind::Cylinder),
    ("torus_of_revolution", Kind::TorusOfRevolution(3.0)),
    ("catenoid_s3", Kind::CatenoidS3),
    ("enneper_s3", Kind::EnneperS3),
    ("holomorphic_curve_s4", Kind::HolomorphicCurveS4),
    ("cmc1_horocyclic", Kind::Cmc1Horocyclic),
];

/// A catalog surface with its reference chart centre and class flags.
#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub n: usize,
    pub center: C64,
    pub flags: KnownFlags,
    pub surface: Arc<dyn Immersion>,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("center", &self.center)
            .field("flags", &self.flags)
            .finish()
    }
}

impl CatalogEntry {
    /// Square chart of `size × size` nodes around the reference centre.
    pub fn chart(&self, h: f64, size: usize) -> Result<Chart> {
        Chart::centered(self.center, h, size, size)
    }

    /// Samples the surface on `chart` in the surface-sample file schema.
    pub fn export(&self, chart: &Chart) -> SurfaceSamples {
        SurfaceSamples::from_immersion(self.surface.as_ref(), chart)
    }
}

/// Names accepted by [`get`]; `torus_of_revolution(r)` selects the radius ratio.
pub fn list() -> Vec<&'static str> {
    NAMES.iter().map(|(n, _)| *n).collect()
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    let name = name.trim();
    let kind = if let Some(arg) = name.strip_prefix("torus_of_revolution(").and_then(|s| s.strip_suffix(')')) {
        let ratio: f64 = arg.trim().parse().map_err(|_| Error::UnknownSurface(name.into()))?;
        if !(ratio > 1.0) {
            return Err(Error::Invalid(format!("torus radius ratio must exceed 1, got {ratio}")));
        }
        Kind::TorusOfRevolution(ratio)
    } else {
        NAMES.iter().find(|(n, _)| *n == name).map(|(_, k)| *k).ok_or_else(|| Error::UnknownSurface(name.into()))?
    };
    let (center, flags) = match kind {
        Kind::RoundSphere => (
            C64::new(0.3, -0.2),
            KnownFlags { willmore: true, minimal_in_space_form: true, umbilic: true, ..Default::default() },
        ),
        Kind::CliffordTorus => (
            C64::new(0.4, 0.7),
            KnownFlags { isothermic: true, willmore: true, swillmore: true, minimal_in_space_form: true, umbilic: false },
        ),
        Kind::Cylinder => (C64::new(0.3, 0.2), KnownFlags { isothermic: true, ..Default::default() }),
        Kind::TorusOfRevolution(_) => (C64::new(0.5, 0.1), KnownFlags { isothermic: true, ..Default::default() }),
        Kind::CatenoidS3 => (
            C64::new(0.2, 0.4),
            KnownFlags { isothermic: true, willmore: true, swillmore: true, minimal_in_space_form: true, umbilic: false },
        ),
        Kind::EnneperS3 => (
            C64::new(0.3, 0.25),
            KnownFlags { isothermic: true, willmore: true, swillmore: true, minimal_in_space_form: true, umbilic: false },
        ),
        Kind::HolomorphicCurveS4 => (
            C64::new(0.3, 0.2),
            KnownFlags { willmore: true, swillmore: true, minimal_in_space_form: true, ..Default::default() },
        ),
        Kind::Cmc1Horocyclic => (
            C64::new(0.2, 0.5),
            KnownFlags { isothermic: true, minimal_in_space_form: false, ..Default::default() },
        ),
    };
    let surface = Surface { kind };
    Ok(CatalogEntry { name: surface.name(), n: surface.n(), center, flags, surface: Arc::new(surface) })
}

/// `f' = π(T(1, f))`: the image of a surface under a Möbius transformation.
pub struct Transformed<I> {
    pub inner: I,
    pub map: Lorentz,
}

impl<I: Immersion> Immersion for Transformed<I> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
        let f = self.inner.eval_jet(u, v);
        let m = &self.map.matrix;
        let mut x = vec![f[0] * 0.0; f.len() + 1];
        for (r, xr) in x.iter_mut().enumerate() {
            let mut acc = f[0] * 0.0 + m[(r, 0)];
            for (c, fc) in f.iter().enumerate() {
                acc = acc + *fc * m[(r, c + 1)];
            }
            *xr = acc;
        }
        let inv = x[0].recip();
        x[1..].iter().map(|c| *c * inv).collect()
    }
    fn name(&self) -> String {
        format!("moebius({})", self.inner.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{conformality_residual, unit_defect};
    use crate::minkowski::random_lorentz;

    #[test]
    fn stereographic_convention() {
        assert_eq!(inverse_stereographic(&[0.0, 0.0, 0.0]), vec![-1.0, 0.0, 0.0, 0.0]);
        assert!(inverse_stereographic(&[0.6, 0.0, 0.8])[0].abs() < 1e-15);
        let p = inverse_stereographic(&[1.3, -2.0, 0.4]);
        assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn every_entry_is_conformal_and_spherical() {
        for name in list() {
            let e = get(name).unwrap();
            let c = e.chart(0.05, 13).unwrap();
            assert!(unit_defect(e.surface.as_ref(), &c) < 1e-12, "{name}");
            let r = conformality_residual(e.surface.as_ref(), &c).sup();
            assert!(r < 1e-10, "{name}: conformality {r}");
        }
    }

    #[test]
    fn lookup() {
        assert!(get("round_sphere").unwrap().flags.willmore);
        assert!(matches!(get("nonexistent"), Err(Error::UnknownSurface(_))));
        assert_eq!(get("torus_of_revolution(2.5)").unwrap().name, "torus_of_revolution(2.5)");
        assert_eq!(get("torus_of_revolution").unwrap().name, "torus_of_revolution(3)");
    }

    #[test]
    fn moebius_image_stays_on_sphere_and_conformal() {
        let e = get("enneper_s3").unwrap();
        let t = Transformed { inner: e.surface.clone(), map: random_lorentz(7, 3) };
        let c = e.chart(0.05, 9).unwrap();
        assert!(unit_defect(&t, &c) < 1e-12);
        assert!(conformality_residual(&t, &c).sup() < 1e-10);
    }
}
