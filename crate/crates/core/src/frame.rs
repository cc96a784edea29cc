//! Canonical lift, Möbius frame `{Y, Y_z, Y_z̄, N}`, Schwarzian `s`, Hopf
//! differential `κ`, central sphere congruence and the normal connection.

use crate::charts::field::{Field, MVec};
use crate::charts::grid::{Grid, Stencil};
use crate::charts::jet::{Jet, MAX_ORDER};
use crate::charts::{Chart, Immersion, SurfaceSamples};
use crate::error::{Error, Result};
use crate::minkowski::{MinkVector, Signature, SubspaceBasis};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::collections::BTreeMap;

/// Named sup-norm residuals; merging keeps the larger value per name.
pub type Residuals = BTreeMap<String, f64>;

pub fn merge_max(into: &mut Residuals, other: &Residuals) {
    for (k, v) in other {
        let e = into.entry(k.clone()).or_insert(0.0);
        if *v > *e || v.is_nan() {
            *e = *v;
        }
    }
}

/// `Y = F / sqrt(2 <F_z, F_z̄>)` for the flat lift `F = (1, f)`.
pub fn canonical_lift<S: Field>(f: &MVec<S>) -> MVec<S> {
    let g = f.dz().inner(&f.dzb());
    let phi = (g * 2.0).sqrt().recip();
    f.scale(&phi)
}

/// The frame and Möbius invariants of one immersion, on either backend.
#[derive(Clone, Debug)]
pub struct FrameFields<S> {
    pub y: MVec<S>,
    pub y_z: MVec<S>,
    pub y_zb: MVec<S>,
    pub y_zz: MVec<S>,
    pub y_zzb: MVec<S>,
    pub n: MVec<S>,
    pub s: S,
    pub kappa: MVec<S>,
}

impl<S: Field> FrameFields<S> {
    /// Builds the frame from a canonical lift `Y`.
    pub fn from_lift(y: MVec<S>) -> Self {
        let y_z = y.dz();
        let y_zb = y.dzb();
        let y_zz = y_z.dz();
        let y_zzb = y_z.dzb();
        let c = y_zzb.inner(&y_zzb);
        let n = (&(&y_zzb * 2.0) + &y.scale(&(c * 2.0))).re();
        let s = y_zz.inner(&n) * 2.0;
        let kappa = &y_zz + &y.scale(&(s.clone() * 0.5));
        FrameFields { y, y_z, y_zb, y_zz, y_zzb, n, s, kappa }
    }

    pub fn dim(&self) -> usize {
        self.y.dim()
    }

    /// `<κ, κ̄>`.
    pub fn kappa_sq(&self) -> S {
        self.kappa.inner(&self.kappa.conj())
    }

    /// Component of `ψ` in the central sphere `V = span{Y, Y_z, Y_z̄, N}`.
    pub fn proj_v(&self, psi: &MVec<S>) -> MVec<S> {
        let a = -psi.inner(&self.n);
        let b = psi.inner(&self.y_zb) * 2.0;
        let c = psi.inner(&self.y_z) * 2.0;
        let d = -psi.inner(&self.y);
        let mut out = self.y.scale(&a);
        out = &out + &self.y_z.scale(&b);
        out = &out + &self.y_zb.scale(&c);
        &out + &self.n.scale(&d)
    }

    /// Normal connection `D_z ψ`.
    pub fn d_z(&self, psi: &MVec<S>) -> MVec<S> {
        let p = psi.dz();
        &p - &self.proj_v(&p)
    }

    /// Normal connection `D_z̄ ψ`.
    pub fn d_zb(&self, psi: &MVec<S>) -> MVec<S> {
        let p = psi.dzb();
        &p - &self.proj_v(&p)
    }

    /// `D_z̄ κ`.
    pub fn kappa_zb(&self) -> MVec<S> {
        self.d_zb(&self.kappa)
    }

    /// The six frame constraints and `κ ⊥ V`, as named residual fields.
    pub fn constraint_fields(&self) -> Vec<(&'static str, S)> {
        let k = &self.kappa;
        vec![
            ("yy", self.y.inner(&self.y)),
            ("yz_yz", self.y_z.inner(&self.y_z)),
            ("yz_yzb", self.y_z.inner(&self.y_zb) + (-0.5)),
            ("nn", self.n.inner(&self.n)),
            ("ny", self.n.inner(&self.y) + 1.0),
            ("nyz", self.n.inner(&self.y_z)),
            ("yzz_yzb", self.y_zz.inner(&self.y_zb)),
            ("kappa_y", k.inner(&self.y)),
            ("kappa_yz", k.inner(&self.y_z)),
            ("kappa_yzb", k.inner(&self.y_zb)),
            ("kappa_n", k.inner(&self.n)),
            ("kappa_sq_vs_yzzb", self.kappa_sq() - self.y_zzb.inner(&self.y_zzb)),
        ]
    }

    pub fn constraints(&self) -> Residuals {
        self.constraint_fields().into_iter().map(|(k, v)| (k.to_string(), v.sup())).collect()
    }

    /// Structure and integrability equations as named residual fields.
    pub fn structure_fields(&self) -> Vec<(&'static str, S)> {
        let kk = self.kappa_sq();
        let kb = self.kappa.conj();
        let dzb_k = self.kappa_zb();
        let dz_k = self.d_z(&self.kappa);
        let dz_kb = self.d_z(&kb);

        let mov2 = &(&self.y_zzb + &self.y.scale(&kk)) - &(&self.n * 0.5);

        let n_z = self.n.dz();
        let mov3 = &(&(&n_z + &self.y_z.scale(&(kk.clone() * 2.0))) + &self.y_zb.scale(&self.s)) - &(&dzb_k * 2.0);

        let mov4 = |psi: &MVec<S>, dz_psi: &MVec<S>| {
            let p = psi.dz();
            let lhs = self.proj_v(&p);
            let rhs = &self.y.scale(&(psi.inner(&dzb_k) * 2.0)) - &self.y_zb.scale(&(psi.inner(&self.kappa) * 2.0));
            let tangential = (&lhs - &rhs).norm();
            let normal = (&(&p - &lhs) - dz_psi).norm();
            tangential + normal
        };
        let mov4k = mov4(&self.kappa, &dz_k);
        let mov4kb = mov4(&kb, &dz_kb);

        let gauss = self.s.dzb() * 0.5 - dz_kb.inner(&self.kappa) * 3.0 - kb.inner(&dz_k);

        let ddk = self.d_zb(&dzb_k);
        let codazzi = (&ddk + &self.kappa.scale(&(self.s.conj() * 0.5))).map(|x| x.im());

        let psi = &self.kappa;
        let ricci = &(&(&self.d_zb(&dz_k) - &self.d_z(&dzb_k)) - &kb.scale(&(psi.inner(&self.kappa) * 2.0)))
            + &self.kappa.scale(&(psi.inner(&kb) * 2.0));

        vec![
            ("mov2", mov2.norm()),
            ("mov3", mov3.norm()),
            ("mov4", mov4k + mov4kb),
            ("gauss", gauss),
            ("codazzi", codazzi.norm()),
            ("ricci", ricci.norm()),
        ]
    }

    pub fn structure_residuals(&self) -> Residuals {
        self.structure_fields().into_iter().map(|(k, v)| (k.to_string(), v.sup())).collect()
    }
}

fn check_chart(f: &MVec<Jet>) -> Result<()> {
    let fz = f.dz();
    let g = fz.inner(&f.dzb()).value();
    let c = fz.inner(&fz).value().norm();
    if !(g.re > 1e-14) {
        return Err(Error::DegenerateMetric(g.re));
    }
    if c > 1e-8 * g.re {
        return Err(Error::NonConformalChart(c / g.re));
    }
    Ok(())
}

/// Rejects degenerate charts; `bound` leaves room for discretization error on grids.
fn check_frame<S: Field>(fr: &FrameFields<S>, bound: f64) -> Result<()> {
    let d = (fr.y.inner(&fr.y_zzb) + 0.5).sup();
    if !(d < bound) {
        return Err(Error::FrameDegenerate(format!("<Y, Y_zzbar> + 1/2 = {d:e}")));
    }
    Ok(())
}

/// Canonical lift jet at `z` with the full order budget.
pub fn lift_at(f: &dyn Immersion, z: C64) -> Result<MVec<Jet>> {
    let flat = f.flat_lift_jet(z, MAX_ORDER);
    check_chart(&flat)?;
    Ok(canonical_lift(&flat))
}

/// Exact frame of `f` at chart point `z`.
pub fn frame_at(f: &dyn Immersion, z: C64) -> Result<FrameFields<Jet>> {
    let fr = FrameFields::from_lift(lift_at(f, z)?);
    check_frame(&fr, 1e-6)?;
    Ok(fr)
}

/// Frame of the immersion represented by any lift jet.
pub fn frame_of_lift(lift: &MVec<Jet>) -> Result<FrameFields<Jet>> {
    check_chart(lift)?;
    let fr = FrameFields::from_lift(canonical_lift(lift));
    check_frame(&fr, 1e-6)?;
    Ok(fr)
}

/// Exact frame of `f` at `z` from jets of the given order (at least 5).
pub fn frame_at_order(f: &dyn Immersion, z: C64, order: usize) -> Result<FrameFields<Jet>> {
    let flat = f.flat_lift_jet(z, order);
    check_chart(&flat)?;
    let fr = FrameFields::from_lift(canonical_lift(&flat));
    check_frame(&fr, 1e-6)?;
    Ok(fr)
}

/// Frame of a sampled surface by finite differences. When the samples carry
/// exact partials, `Y` and `Y_z` are formed analytically.
pub fn frame_grid(samples: &SurfaceSamples, stencil: Stencil) -> Result<FrameFields<Grid>> {
    samples.validate()?;
    let f = samples.flat_lift_grid(stencil);
    let y = if samples.partials.is_some() {
        let f_z = f.dz();
        let f_zb = f.dzb();
        let f_zz = f_z.dz();
        let f_zzb = f_z.dzb();
        let g = f_z.inner(&f_zb);
        let g_z = f_zz.inner(&f_zb) + f_z.inner(&f_zzb);
        let phi = (g * 2.0).sqrt().recip();
        let phi_z = -(phi.clone() * phi.clone() * phi.clone() * g_z);
        let y = f.scale(&phi);
        let y_z = &f_z.scale(&phi) + &f.scale(&phi_z);
        MVec(
            y.0.into_iter()
                .zip(y_z.0)
                .map(|(c, cz)| {
                    let czb = cz.conj();
                    c.with_derivatives(cz, czb)
                })
                .collect(),
        )
    } else {
        canonical_lift(&f)
    };
    let fr = FrameFields::from_lift(y);
    let w = fr.y_zzb.0[0].window();
    if w.is_empty() {
        return Err(Error::Invalid("chart too small for the stencil".into()));
    }
    check_frame(&fr, 1e-3)?;
    Ok(fr)
}

/// Frame of a catalog-type immersion by finite differences on `chart`,
/// optionally seeded with exact partials up to order two.
pub fn frame_fd(f: &dyn Immersion, chart: &Chart, stencil: Stencil, exact_partials: bool) -> Result<FrameFields<Grid>> {
    let mut s = SurfaceSamples::from_immersion(f, chart);
    if !exact_partials {
        s.partials = None;
    }
    frame_grid(&s, stencil)
}

/// Exact frame values of `f` on every node of `chart`, as grid fields.
/// Derivatives of these fields are taken by finite differences.
pub fn frame_sampled(f: &dyn Immersion, chart: &Chart, stencil: Stencil) -> Result<FrameFields<Grid>> {
    let vals = chart.par_map(|i, j| frame_at(f, chart.z(i, j)).map(|fr| flatten(&fr)));
    let vals: Vec<Vec<C64>> = vals.into_iter().collect::<Result<_>>()?;
    Ok(unflatten(chart, stencil, &vals, f.n() + 2))
}

fn flatten(fr: &FrameFields<Jet>) -> Vec<C64> {
    let mut out = Vec::new();
    for v in [&fr.y, &fr.y_z, &fr.y_zb, &fr.y_zz, &fr.y_zzb, &fr.n, &fr.kappa] {
        out.extend(v.0.iter().map(Jet::value));
    }
    out.push(fr.s.value());
    out
}

fn unflatten(chart: &Chart, stencil: Stencil, vals: &[Vec<C64>], dim: usize) -> FrameFields<Grid> {
    let nu = chart.nu;
    let grid = |k: usize| Grid::from_fn(chart, stencil, |i, j| vals[j * nu + i][k]);
    let vec = |slot: usize| MVec((0..dim).map(|c| grid(slot * dim + c)).collect());
    FrameFields {
        y: vec(0),
        y_z: vec(1),
        y_zb: vec(2),
        y_zz: vec(3),
        y_zzb: vec(4),
        n: vec(5),
        kappa: vec(6),
        s: grid(7 * dim),
    }
}

/// Real Minkowski vector from the value of a jet vector.
pub fn real_value(v: &MVec<Jet>) -> MinkVector {
    MinkVector(v.0.iter().map(|x| x.value().re).collect())
}

/// Central sphere `V = span{X, X_u, X_v, X_zz̄}` and its orthogonal complement.
#[derive(Clone, Debug, Serialize)]
pub struct SphereCongruence {
    pub v: SubspaceBasis,
    pub vperp: SubspaceBasis,
}

/// Central sphere at a point from any (not necessarily canonical) lift jet.
pub fn central_sphere(lift: &MVec<Jet>) -> Result<SphereCongruence> {
    let x_u = lift.map(|c| c.du());
    let x_v = lift.map(|c| c.dv());
    let x_zzb = lift.dz().dzb();
    let vecs = vec![real_value(lift), real_value(&x_u), real_value(&x_v), real_value(&x_zzb)];
    let v = SubspaceBasis::with_signature(vecs, Signature { positive: 3, negative: 1 })?;
    let vperp = v.complement()?;
    if vperp.signature.negative != 0 {
        return Err(Error::SignatureFailure("normal bundle is not spacelike".into()));
    }
    Ok(SphereCongruence { v, vperp })
}

/// Normal connection `(D_z ψ, D_z̄ ψ)` at a point; `ψ` must be normal.
pub fn normal_connection(psi: &MVec<Jet>, fr: &FrameFields<Jet>) -> Result<(MVec<Jet>, MVec<Jet>)> {
    let scale = 1.0 + psi.norm().value().re;
    let worst = [&fr.y, &fr.y_z, &fr.y_zb, &fr.n]
        .iter()
        .map(|b| psi.inner(b).value().norm())
        .fold(0.0, f64::max);
    if worst > 1e-9 * scale {
        return Err(Error::NotNormal(worst));
    }
    Ok((fr.d_z(psi), fr.d_zb(psi)))
}

/// Classical Schwarzian `φ'''/φ' − (3/2)(φ''/φ')²` from the first three derivatives.
pub fn schwarzian(d1: C64, d2: C64, d3: C64) -> C64 {
    d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1)
}

/// Derivatives `φ', φ'', φ'''` of a holomorphic chart map at `w`.
pub fn map_derivatives(map: fn(Jet) -> Jet, w: C64) -> (C64, C64, C64, C64) {
    let j = map(Jet::var_z(w, 3));
    (j.value(), j.partial(1, 0), j.partial(2, 0), j.partial(3, 0))
}

/// `(s', κ')` in the chart `w` where `z = φ(w)`, from `(s, κ)` at `φ(w)`:
/// `κ' = κ φ'^{3/2} conj(φ')^{-1/2}` and `s' = s φ'² + S_w(z)`.
pub fn transform_coordinate(s: C64, kappa: &[C64], d1: C64, d2: C64, d3: C64) -> Result<(C64, Vec<C64>)> {
    if d1.norm() < 1e-12 {
        return Err(Error::CriticalPoint(d1.norm()));
    }
    let k = d1 * d1 / d1.norm();
    let s2 = s * d1 * d1 + schwarzian(d1, d2, d3);
    Ok((s2, kappa.iter().map(|x| x * k).collect()))
}

/// Mean curvatures `(H_surface, H_sphere)` at `z` for a surface in `S^3`,
/// using the central sphere `S = (s0, s)`: the surface is measured with
/// respect to `ν = s − s0 f` and the sphere `{p · s = s0}` has `|H| = |s0|`.
pub fn mean_curvature_oracle_s3(f: &dyn Immersion, z: C64, vperp: &SubspaceBasis) -> Result<(f64, f64)> {
    if f.n() != 3 || vperp.rank() != 1 {
        return Err(Error::WrongCodimension(f.n()));
    }
    let sv = &vperp.vectors[0];
    let unit = sv.norm_sq();
    let sv = sv.scale(1.0 / unit.sqrt());
    let jets = f.eval_jet(Jet::var_u(z.re, 2), Jet::var_v(z.im, 2));
    let p: Vec<f64> = jets.iter().map(|x| x.value().re).collect();
    let lap: Vec<f64> = jets.iter().map(|x| (x.partial(2, 0) + x.partial(0, 2)).re).collect();
    let fu2: f64 = jets.iter().map(|x| x.partial(1, 0).re.powi(2)).sum();
    let s0 = sv.0[0];
    let nu: Vec<f64> = (0..4).map(|k| sv.0[k + 1] - s0 * p[k]).collect();
    let h = nu.iter().zip(&lap).map(|(a, b)| a * b).sum::<f64>() / (2.0 * fu2);
    Ok((h, s0.abs()))
}

/// One line of a per-point frame report.
#[derive(Clone, Debug, Serialize)]
pub struct FramePointRecord {
    pub point: [usize; 2],
    pub s: [f64; 2],
    pub kappa_norm: f64,
    pub residuals: Residuals,
}

/// Frame report record at node `(i, j)` of `chart`.
pub fn frame_record(f: &dyn Immersion, chart: &Chart, i: usize, j: usize) -> Result<FramePointRecord> {
    let fr = frame_at(f, chart.z(i, j))?;
    let mut residuals = fr.constraints();
    merge_max(&mut residuals, &fr.structure_residuals());
    Ok(FramePointRecord {
        point: [i, j],
        s: [fr.s.value().re, fr.s.value().im],
        kappa_norm: fr.kappa_sq().value().re.abs().sqrt(),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::minkowski::{random_lorentz, subspace_equal, Lorentzian};

    fn entry(name: &str) -> catalog::CatalogEntry {
        catalog::get(name).unwrap()
    }

    #[test]
    fn round_sphere_lift_is_closed_form() {
        let e = entry("round_sphere");
        let z = C64::new(0.3, -0.4);
        let y = lift_at(e.surface.as_ref(), z).unwrap();
        let k = (1.0 + z.norm_sqr()) / 2.0;
        let p = e.surface.eval(z);
        assert!((y.0[0].value().re - k).abs() < 1e-14);
        for c in 0..4 {
            assert!((y.0[c + 1].value().re - k * p[c]).abs() < 1e-14);
        }
        let fr = frame_at(e.surface.as_ref(), z).unwrap();
        assert!((fr.y_z.inner(&fr.y_zb).value() - 0.5).norm() < 1e-14);
        assert!(fr.s.value().norm() < 1e-12);
        assert!(fr.kappa.norm().value().re < 1e-12);
    }

    #[test]
    fn lift_of_normalized_flat_lift_is_identity() {
        let order = 4;
        let u = Jet::var_u(0.2, order);
        let v = Jet::var_v(0.1, order);
        let one = Jet::real(1.0, order);
        // flat plane in light-cone coordinates, <F_z, F_zb> = 1/2
        let q = (u * u + v * v) * 0.5;
        let f = MVec(vec![one + q, u, v, q]);
        let y = canonical_lift(&f);
        for c in 0..4 {
            assert!((y.0[c].value() - f.0[c].value()).norm() < 1e-14);
        }
    }

    #[test]
    fn chart_dilation_scales_lift() {
        struct Half;
        impl Immersion for Half {
            fn n(&self) -> usize {
                3
            }
            fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
                catalog::get("clifford_torus").unwrap().surface.eval_jet(u * 0.5, v * 0.5)
            }
        }
        let e = entry("clifford_torus");
        let z = C64::new(0.4, 0.2);
        let a = lift_at(e.surface.as_ref(), z * 0.5).unwrap();
        let b = lift_at(&Half, z).unwrap();
        for c in 0..5 {
            assert!((b.0[c].value() - a.0[c].value() * 2.0).norm() < 1e-13);
        }
    }

    #[test]
    fn constraints_hold_on_catalog() {
        for name in catalog::list() {
            let e = entry(name);
            for k in 0..5 {
                let z = e.center + C64::new(0.07 * k as f64, -0.05 * k as f64);
                let fr = frame_at(e.surface.as_ref(), z).unwrap();
                for (key, r) in fr.constraints() {
                    assert!(r < 1e-9, "{name} {key} {r}");
                }
                for (key, r) in fr.structure_residuals() {
                    assert!(r < 1e-8, "{name} {key} {r}");
                }
            }
        }
    }

    #[test]
    fn clifford_torus_invariants() {
        let e = entry("clifford_torus");
        let fr = frame_at(e.surface.as_ref(), C64::new(0.3, 1.1)).unwrap();
        assert!(fr.s.value().norm() < 1e-12);
        let kk = fr.kappa_sq().value();
        assert!(kk.re > 0.1 && kk.im.abs() < 1e-12);
        assert!(fr.kappa_zb().norm().value().re < 1e-12);
        let fr2 = frame_at(e.surface.as_ref(), C64::new(-0.7, 0.2)).unwrap();
        assert!((fr2.kappa_sq().value() - kk).norm() < 1e-12);
    }

    #[test]
    fn corrupted_normal_is_detected() {
        let e = entry("cylinder");
        let mut fr = frame_at(e.surface.as_ref(), e.center).unwrap();
        fr.n = &fr.n + &(&fr.y * 0.1);
        let r = fr.structure_residuals();
        assert!(r["mov2"] > 1e-3);
    }

    #[test]
    fn great_sphere_central_sphere_is_itself() {
        let e = entry("round_sphere");
        let y = lift_at(e.surface.as_ref(), C64::new(0.2, 0.5)).unwrap();
        let cs = central_sphere(&y).unwrap();
        assert_eq!(cs.vperp.rank(), 1);
        let m = MinkVector(vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        let expected = SubspaceBasis::new(vec![m]).unwrap();
        assert!(subspace_equal(&cs.vperp, &expected, 1e-10).unwrap());
    }

    #[test]
    fn central_sphere_is_lift_independent() {
        let e = entry("enneper_s3");
        let z = C64::new(0.3, 0.1);
        let y = lift_at(e.surface.as_ref(), z).unwrap();
        let w = (Jet::var_u(z.re, MAX_ORDER) * 0.7 - Jet::var_v(z.im, MAX_ORDER) * 0.4).exp();
        let scaled = y.scale(&w);
        let a = central_sphere(&y).unwrap();
        let b = central_sphere(&scaled).unwrap();
        assert!(subspace_equal(&a.v, &b.v, 1e-9).unwrap());
    }

    #[test]
    fn normal_connection_examples() {
        let e = entry("clifford_torus");
        let fr = frame_at(e.surface.as_ref(), C64::new(0.3, 0.2)).unwrap();
        let zero = fr.kappa.zero_like();
        let (a, b) = normal_connection(&zero, &fr).unwrap();
        assert!(a.norm().value().re + b.norm().value().re < 1e-15);
        let (_, dzb) = normal_connection(&fr.kappa, &fr).unwrap();
        assert!(dzb.norm().value().re < 1e-12);
        // unit normal sphere vector
        let k = fr.kappa.re();
        let unit = k.scale(&k.inner(&k).sqrt().recip());
        let (dz, _) = normal_connection(&unit, &fr).unwrap();
        assert!(dz.inner(&unit).value().norm() < 1e-12);
        assert!(matches!(normal_connection(&fr.y, &fr), Err(Error::NotNormal(_))));
    }

    #[test]
    fn normal_connection_product_rule() {
        let e = entry("holomorphic_curve_s4");
        let fr = frame_at(e.surface.as_ref(), C64::new(0.3, 0.2)).unwrap();
        let a = fr.kappa.clone();
        let b = fr.kappa.conj();
        let lhs = a.inner(&b).dz();
        let rhs = fr.d_z(&a).inner(&b) + a.inner(&fr.d_z(&b));
        assert!((lhs.value() - rhs.value()).norm() < 1e-12);
    }

    #[test]
    fn sampled_surfaces_agree_with_jets() {
        let e = entry("torus_of_revolution");
        let chart = e.chart(0.01, 24).unwrap();
        let fd = frame_fd(e.surface.as_ref(), &chart, Stencil::Fourth, true).unwrap();
        let (i, j) = chart.center_node();
        let exact = frame_at(e.surface.as_ref(), chart.z(i, j)).unwrap();
        assert!((fd.s.at(i, j).unwrap() - exact.s.value()).norm() < 1e-6);
        for c in 0..5 {
            assert!((fd.kappa.0[c].at(i, j).unwrap() - exact.kappa.0[c].value()).norm() < 1e-6);
        }
        for (k, r) in fd.constraints() {
            assert!(r < 1e-6, "{k} {r}");
        }
    }

    #[test]
    fn frame_of_lorentz_image() {
        let e = entry("torus_of_revolution");
        let t = random_lorentz(3, 3);
        let img = catalog::Transformed { inner: e.surface.clone(), map: t.clone() };
        let z = e.center;
        let a = frame_at(e.surface.as_ref(), z).unwrap();
        let b = frame_at(&img, z).unwrap();
        assert!((a.s.value() - b.s.value()).norm() < 1e-8);
        assert!((a.kappa_sq().value() - b.kappa_sq().value()).norm() < 1e-8);
        let va = central_sphere(&a.y).unwrap().v;
        let vb = central_sphere(&b.y).unwrap().v;
        let mapped = SubspaceBasis::new(va.vectors.iter().map(|x| t.apply(x)).collect()).unwrap();
        assert!(subspace_equal(&mapped, &vb, 1e-8).unwrap());
    }

    #[test]
    fn schwarzian_of_moebius_map_vanishes() {
        fn m(w: Jet) -> Jet {
            (w * C64::new(2.0, 1.0) + C64::new(0.5, 0.0)) / (w * C64::new(0.3, -0.2) + C64::new(1.0, 0.0))
        }
        let (_, d1, d2, d3) = map_derivatives(m, C64::new(0.4, 0.1));
        assert!(schwarzian(d1, d2, d3).norm() < 1e-12);
        let (s, k) = transform_coordinate(C64::new(0.3, 0.4), &[C64::new(1.0, 0.0)], C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        assert_eq!(s, C64::new(0.3, 0.4));
        assert_eq!(k[0], C64::new(1.0, 0.0));
        assert!(matches!(
            transform_coordinate(C64::new(0.0, 0.0), &[], C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            Err(Error::CriticalPoint(_))
        ));
    }

    fn check_two_path(map: fn(Jet) -> Jet, w: C64, tol: f64) {
        let e = entry("torus_of_revolution");
        let re = Reparam(e.surface.clone(), map);
        let (z, d1, d2, d3) = map_derivatives(map, w);
        let base = frame_at(e.surface.as_ref(), z).unwrap();
        let kz: Vec<C64> = base.kappa.0.iter().map(Jet::value).collect();
        let (s2, k2) = transform_coordinate(base.s.value(), &kz, d1, d2, d3).unwrap();
        let direct = frame_at(&re, w).unwrap();
        assert!((direct.s.value() - s2).norm() < tol, "{} vs {}", direct.s.value(), s2);
        for c in 0..5 {
            assert!((direct.kappa.0[c].value() - k2[c]).norm() < tol);
        }
    }

    struct Reparam(std::sync::Arc<dyn Immersion>, fn(Jet) -> Jet);

    impl Immersion for Reparam {
        fn n(&self) -> usize {
            self.0.n()
        }
        fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
            let z = (self.1)(u + v * C64::i());
            self.0.eval_jet(z.re(), z.im())
        }
    }

    #[test]
    fn coordinate_change_two_paths() {
        fn quad(w: Jet) -> Jet {
            w * w + w
        }
        fn moeb(w: Jet) -> Jet {
            (w * 0.8 + C64::new(0.1, 0.2)) / (w * C64::new(0.1, 0.05) + 1.0)
        }
        check_two_path(quad, C64::new(0.5, 0.2), 1e-9);
        check_two_path(moeb, C64::new(0.4, 0.1), 1e-9);
    }

    #[test]
    fn geodesic_sphere_mean_curvature_oracle() {
        // sphere of angular radius r about the north pole e4: p4 = cos r
        struct Cap(f64);
        impl Immersion for Cap {
            fn n(&self) -> usize {
                3
            }
            fn eval_jet(&self, u: Jet, v: Jet) -> Vec<Jet> {
                let zero = u * 0.0;
                let p = catalog::inverse_stereographic_jet(&[u, v, zero]);
                let (s, c) = (self.0.sin(), self.0.cos());
                vec![p[0] * s, p[1] * s, p[2] * s, zero + c]
            }
        }
        for r in [0.4, 1.0, 1.3] {
            let cap = Cap(r);
            let z = C64::new(0.2, -0.3);
            let y = lift_at(&cap, z).unwrap();
            let cs = central_sphere(&y).unwrap();
            let (hs, hsph) = mean_curvature_oracle_s3(&cap, z, &cs.vperp).unwrap();
            let cot = r.cos() / r.sin();
            assert!((hsph - cot).abs() < 1e-10, "{hsph} vs {cot}");
            assert!((hs.abs() - cot).abs() < 1e-10);
        }
    }

    #[test]
    fn oracle_rejects_codimension() {
        let e = entry("holomorphic_curve_s4");
        let y = lift_at(e.surface.as_ref(), e.center).unwrap();
        let cs = central_sphere(&y).unwrap();
        assert!(matches!(
            mean_curvature_oracle_s3(e.surface.as_ref(), e.center, &cs.vperp),
            Err(Error::WrongCodimension(4))
        ));
        let _ = cs.v.vectors[0].inner(&cs.v.vectors[0]).unwrap();
    }
}
