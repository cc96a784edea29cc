//! Oriented contact elements, touch and co-touch, and the tangent sphere
//! `S(p)` through a point of the second surface.

use crate::error::{Error, Result};
use crate::minkowski::{minkowski_dot, Lorentz, MinkVector, Signature, SubspaceBasis};
use crate::pair::{parallel_defect, Tolerances};
use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::Serialize;

const FRAME_TOL: f64 = 1e-9;

fn cdot(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = -(a[0] * b[0]);
    for k in 1..a.len() {
        acc += a[k] * b[k];
    }
    acc
}

fn complexify(v: &MinkVector) -> Vec<C64> {
    v.0.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// `<a∧b, c∧d> = <a,c><b,d> − <a,d><b,c>`.
fn wedge(a: &[C64], b: &[C64], c: &[C64], d: &[C64]) -> C64 {
    cdot(a, c) * cdot(b, d) - cdot(a, d) * cdot(b, c)
}

/// An oriented 2-dim contact element `{X, X1, X2}` at the point `[X]`.
#[derive(Clone, Debug, Serialize)]
pub struct ContactElement {
    pub x: MinkVector,
    pub x1: MinkVector,
    pub x2: MinkVector,
}

impl ContactElement {
    /// Validates the frame: `X` null, `X1, X2 ⊥ X`, orthogonal and of equal positive length.
    pub fn new(x: MinkVector, x1: MinkVector, x2: MinkVector) -> Result<Self> {
        if x.0.len() != x1.0.len() || x.0.len() != x2.0.len() {
            return Err(Error::DimensionMismatch(x.0.len(), x1.0.len()));
        }
        let (ex, e1, e2) = (x.euclid_norm(), x1.euclid_norm(), x2.euclid_norm());
        let l1 = x1.norm_sq();
        if !(l1 > 1e-13 * e1 * e1) {
            return Err(Error::FrameDegenerate("contact element frame has no length".into()));
        }
        let checks = [
            ("<X,X>", x.norm_sq(), ex * ex),
            ("<X,X1>", minkowski_dot(&x.0, &x1.0), ex * e1),
            ("<X,X2>", minkowski_dot(&x.0, &x2.0), ex * e2),
            ("<X1,X2>", minkowski_dot(&x1.0, &x2.0), l1 + 1e-4 * e1 * e2),
            ("<X1,X1> - <X2,X2>", l1 - x2.norm_sq(), l1 + 1e-4 * e1 * e2),
        ];
        for (name, v, scale) in checks {
            if !(v.abs() <= FRAME_TOL * scale) {
                return Err(Error::FrameDegenerate(format!("contact element: {name} = {v:e}")));
            }
        }
        Ok(ContactElement { x, x1, x2 })
    }

    /// The element `[X] ∧ (Re w, −Im w)`, whose complex form is `X ∧ w`.
    pub fn from_complex(x: &[C64], w: &[C64]) -> Result<Self> {
        let x = MinkVector(x.iter().map(|c| c.re).collect());
        let x1 = MinkVector(w.iter().map(|c| c.re).collect());
        let x2 = MinkVector(w.iter().map(|c| -c.im).collect());
        ContactElement::new(x, x1, x2)
    }

    /// `X1 − i X2`.
    pub fn complex(&self) -> Vec<C64> {
        self.x1.0.iter().zip(&self.x2.0).map(|(a, b)| C64::new(*a, -*b)).collect()
    }

    pub fn reversed(&self) -> Self {
        ContactElement { x: self.x.clone(), x1: self.x1.clone(), x2: self.x2.scale(-1.0) }
    }
}

/// `A = (<X_i, X̂_j>)` and its parts commuting and anti-commuting with `J`.
#[derive(Clone, Debug, Serialize)]
pub struct TouchInvariants {
    #[serde(serialize_with = "ser_matrix")]
    pub a: Matrix2<f64>,
    #[serde(serialize_with = "ser_matrix")]
    pub q: Matrix2<f64>,
    #[serde(serialize_with = "ser_matrix")]
    pub p: Matrix2<f64>,
    pub theta_prime: C64,
    pub rho_prime: C64,
    /// `2 |X1| |X̂1|`, the largest possible `|θ'|` or `|ρ'|`.
    pub scale: f64,
}

impl TouchInvariants {
    pub fn touch(&self, tol: &Tolerances) -> bool {
        tol.is_zero(self.rho_prime.norm(), self.scale)
    }
    pub fn cotouch(&self, tol: &Tolerances) -> bool {
        tol.is_zero(self.theta_prime.norm(), self.scale)
    }
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix2<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]].serialize(s)
}

pub fn j_matrix() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// `Q = ½(A − JAJ)`, `P = ½(A + JAJ)`.
pub fn qp_decompose(a: &Matrix2<f64>) -> (Matrix2<f64>, Matrix2<f64>) {
    let j = j_matrix();
    let jaj = j * a * j;
    ((a - jaj) * 0.5, (a + jaj) * 0.5)
}

/// Touch invariants of two contact elements at the same point.
pub fn touch_invariants(pi: &ContactElement, pih: &ContactElement) -> Result<TouchInvariants> {
    let d = parallel_defect(&complexify(&pi.x), &complexify(&pih.x)) * pih.x.euclid_norm() / pi.x.euclid_norm();
    if !(d < 1e-8) {
        return Err(Error::BasePointMismatch);
    }
    let rows = [&pi.x1, &pi.x2];
    let cols = [&pih.x1, &pih.x2];
    let a = Matrix2::from_fn(|i, j| minkowski_dot(&rows[i].0, &cols[j].0));
    let (q, p) = qp_decompose(&a);
    let theta_prime = C64::new(a[(0, 0)] + a[(1, 1)], a[(0, 1)] - a[(1, 0)]);
    let rho_prime = C64::new(a[(0, 0)] - a[(1, 1)], a[(0, 1)] + a[(1, 0)]);
    let scale = 2.0 * (pi.x1.norm_sq() * pih.x1.norm_sq()).sqrt();
    Ok(TouchInvariants { a, q, p, theta_prime, rho_prime, scale })
}

/// `(θ, ρ)` of two contact elements at distinct points.
pub fn pair_invariants_contact(pi: &ContactElement, pih: &ContactElement) -> Result<(C64, C64)> {
    let y = complexify(&pi.x);
    let yh = complexify(&pih.x);
    let p = cdot(&y, &yh);
    let scale = pi.x.euclid_norm() * pih.x.euclid_norm();
    if !(p.norm() > 1e-10 * scale) {
        return Err(Error::CoincidentPoints(p.norm() / scale));
    }
    let norm2 = -(p * p);
    let w = pi.complex();
    let wb: Vec<C64> = w.iter().map(|c| c.conj()).collect();
    let wh = pih.complex();
    let theta = wedge(&y, &w, &yh, &wh) / norm2 * 2.0;
    let rho = wedge(&y, &wb, &yh, &wh) / norm2 * 2.0;
    Ok((theta, rho))
}

/// The oriented sphere through `Y(p)` and `Ŷ(p)` tangent to `f`, its contact
/// element at `Ŷ(p)` and the reflection exchanging the two points.
#[derive(Clone, Debug, Serialize)]
pub struct TangentSphere {
    pub sphere: SubspaceBasis,
    pub contact_at_yhat: ContactElement,
    #[serde(skip)]
    pub reflection: Lorentz,
}

/// Requires `<Y, Ŷ> = −1`; `y_z` is the derivative of the canonical lift.
pub fn tangent_sphere_through(y: &[C64], y_z: &[C64], yhat: &[C64]) -> Result<TangentSphere> {
    let re = |v: &[C64]| MinkVector(v.iter().map(|c| c.re).collect());
    let yu = MinkVector(y_z.iter().map(|c| 2.0 * c.re).collect());
    let yv = MinkVector(y_z.iter().map(|c| -2.0 * c.im).collect());
    let yh = re(yhat);
    let (a, b) = (minkowski_dot(&yh.0, &yu.0), minkowski_dot(&yh.0, &yv.0));
    let yr = re(y);
    let partner = MinkVector(
        (0..yh.0.len()).map(|k| yh.0[k] - a * yu.0[k] - b * yv.0[k] - 0.5 * (a * a + b * b) * yr.0[k]).collect(),
    );
    let sphere = SubspaceBasis::with_signature(vec![yr, yu, yv, partner], Signature { positive: 3, negative: 1 })?;
    let mu = cdot(yhat, y_z) * 2.0;
    let w: Vec<C64> = y_z.iter().zip(y).map(|(a, b)| (a.conj() + b * mu.conj() * 0.5) * 2.0).collect();
    let contact_at_yhat = ContactElement::from_complex(yhat, &w)?;
    let x = MinkVector(y.iter().zip(yhat).map(|(a, b)| a.re - b.re).collect());
    let reflection = Lorentz::reflection_with_norm(&x, -2.0 * cdot(y, yhat).re)?;
    Ok(TangentSphere { sphere, contact_at_yhat, reflection })
}

/// Both sides of the touch/co-touch characterization at one point.
#[derive(Clone, Debug, Serialize)]
pub struct PropositionCheck {
    pub theta: C64,
    pub rho: C64,
    pub theta_prime: C64,
    pub rho_prime: C64,
    pub touch: bool,
    pub cotouch: bool,
    pub rho_zero: bool,
    pub theta_zero: bool,
}

impl PropositionCheck {
    pub fn defect(&self) -> f64 {
        (self.theta - self.theta_prime).norm().max((self.rho - self.rho_prime).norm())
    }
    pub fn consistent(&self) -> bool {
        self.touch == self.rho_zero && self.cotouch == self.theta_zero
    }
}

/// Compares `(θ', ρ')` of `S(p)` against `f̂` with `(θ, ρ)` of the pair, all
/// from values at one point of a normalized pair. `theta_scale`, `rho_scale`
/// are the comparison scales of the pair invariants.
pub fn proposition_at(
    y: &[C64],
    y_z: &[C64],
    yhat: &[C64],
    yhat_z: &[C64],
    scales: (f64, f64),
    tol: &Tolerances,
) -> Result<PropositionCheck> {
    let ts = tangent_sphere_through(y, y_z, yhat)?;
    let pih = ContactElement::from_complex(yhat, yhat_z)?;
    let t = touch_invariants(&ts.contact_at_yhat, &pih)?;
    let pi = ContactElement::from_complex(y, y_z)?;
    let (theta, rho) = pair_invariants_contact(&pi, &pih)?;
    Ok(PropositionCheck {
        theta,
        rho,
        theta_prime: t.theta_prime,
        rho_prime: t.rho_prime,
        touch: tol.is_zero(t.rho_prime.norm(), scales.1),
        cotouch: tol.is_zero(t.theta_prime.norm(), scales.0),
        rho_zero: tol.is_zero(rho.norm(), scales.1),
        theta_zero: tol.is_zero(theta.norm(), scales.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::charts::field::jet_values;
    use crate::charts::jet::Jet;
    use crate::pair::{invariants_geometric, pair_at, ReflectionLift, SurfaceLift};
    use crate::transforms::DualLift;
    use proptest::prelude::*;

    fn unit_element() -> ContactElement {
        ContactElement::new(
            MinkVector(vec![1.0, 1.0, 0.0, 0.0, 0.0]),
            MinkVector(vec![0.0, 0.0, 1.0, 0.0, 0.0]),
            MinkVector(vec![0.0, 0.0, 0.0, 1.0, 0.0]),
        )
        .unwrap()
    }

    #[test]
    fn self_touch() {
        let p = unit_element();
        let t = touch_invariants(&p, &p).unwrap();
        assert_eq!(t.a, Matrix2::identity());
        assert_eq!(t.q, Matrix2::identity());
        assert_eq!(t.p, Matrix2::zeros());
        assert_eq!(t.theta_prime, C64::new(2.0, 0.0));
        assert_eq!(t.rho_prime, C64::new(0.0, 0.0));
        let t = touch_invariants(&p, &p.reversed()).unwrap();
        assert_eq!(t.theta_prime, C64::new(0.0, 0.0));
        assert_eq!(t.rho_prime, C64::new(2.0, 0.0));
    }

    #[test]
    fn qp_examples() {
        let (q, p) = qp_decompose(&Matrix2::new(1.0, 2.0, 3.0, 4.0));
        assert_eq!(q, Matrix2::new(2.5, -0.5, 0.5, 2.5));
        assert_eq!(p, Matrix2::new(-1.5, 2.5, 2.5, 1.5));
        let (q, p) = qp_decompose(&j_matrix());
        assert_eq!(q, j_matrix());
        assert_eq!(p, Matrix2::zeros());
        let p0 = Matrix2::new(0.3, 0.7, 0.7, -0.3);
        let (q, p) = qp_decompose(&p0);
        assert_eq!(q, Matrix2::zeros());
        assert_eq!(p, p0);
    }

    #[test]
    fn base_point_mismatch() {
        let p = unit_element();
        let mut o = p.clone();
        o.x = MinkVector(vec![1.0, 0.0, 0.0, 0.0, 1.0]);
        o.x1 = MinkVector(vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        o.x2 = MinkVector(vec![0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!(matches!(touch_invariants(&p, &o), Err(Error::BasePointMismatch)));
    }

    proptest! {
        #[test]
        fn qp_properties(a in prop::array::uniform4(-5.0f64..5.0)) {
            let a = Matrix2::new(a[0], a[1], a[2], a[3]);
            let (q, p) = qp_decompose(&a);
            let j = j_matrix();
            prop_assert!((q + p - a).norm() < 1e-12);
            prop_assert!((q * j - j * q).norm() < 1e-12);
            prop_assert!((p * j + j * p).norm() < 1e-12);
        }

        #[test]
        fn frame_rotation_and_scaling(phi in 0.0f64..std::f64::consts::TAU, k in 0.2f64..5.0) {
            let p = unit_element();
            let (c, s) = (phi.cos(), phi.sin());
            let r = ContactElement {
                x: p.x.clone(),
                x1: MinkVector(p.x1.0.iter().zip(&p.x2.0).map(|(a, b)| k * (c * a + s * b)).collect()),
                x2: MinkVector(p.x1.0.iter().zip(&p.x2.0).map(|(a, b)| k * (-s * a + c * b)).collect()),
            };
            let t0 = touch_invariants(&p, &p).unwrap();
            let t = touch_invariants(&r, &p).unwrap();
            prop_assert!((t.theta_prime.norm() - k * t0.theta_prime.norm()).abs() < 1e-12);
            prop_assert!(t.rho_prime.norm() < 1e-12);
        }
    }

    fn contact_of(v: &crate::charts::field::MVec<Jet>) -> ContactElement {
        ContactElement::from_complex(&jet_values(v), &jet_values(&v.dz())).unwrap()
    }

    #[test]
    fn contact_route_matches_bivectors() {
        let e = catalog::get("torus_of_revolution").unwrap();
        let g = catalog::get("enneper_s3").unwrap();
        let pf = pair_at(e.surface.as_ref(), &SurfaceLift(g.surface.clone()), e.center).unwrap();
        let (t, r) = pair_invariants_contact(&contact_of(&pf.frame.y), &contact_of(&pf.yhat)).unwrap();
        let (tg, rg) = invariants_geometric(&pf.frame.y, &pf.yhat);
        assert!((t - tg.value()).norm() < 1e-10 && (r - rg.value()).norm() < 1e-10);
        let (ts, rs) = pair_invariants_contact(&contact_of(&pf.yhat), &contact_of(&pf.frame.y)).unwrap();
        assert!((ts - t).norm() < 1e-10 && (rs - r.conj()).norm() < 1e-10);
    }

    #[test]
    fn clifford_dual_contact() {
        let e = catalog::get("clifford_torus").unwrap();
        let pf = pair_at(e.surface.as_ref(), &DualLift::new(e.surface.clone()), e.center).unwrap();
        let (t, _) = pair_invariants_contact(&contact_of(&pf.frame.y), &contact_of(&pf.yhat)).unwrap();
        assert!(t.norm() < 1e-10);
        let ts = tangent_sphere_through(&jet_values(&pf.frame.y), &jet_values(&pf.frame.y_z), &jet_values(&pf.yhat)).unwrap();
        let v = crate::frame::central_sphere(&pf.frame.y).unwrap();
        assert!(crate::minkowski::subspace_equal(&ts.sphere, &v.v, 1e-8).unwrap());
    }

    #[test]
    fn reflection_is_an_involution_swapping_points() {
        let e = catalog::get("clifford_torus").unwrap();
        let x = MinkVector(vec![0.3, 1.0, 0.2, -0.4, 0.5]);
        let src = ReflectionLift::new(e.surface.clone(), x).unwrap();
        let pf = pair_at(e.surface.as_ref(), &src, e.center).unwrap();
        let y = jet_values(&pf.frame.y);
        let yh = jet_values(&pf.yhat);
        let ts = tangent_sphere_through(&y, &jet_values(&pf.frame.y_z), &yh).unwrap();
        let r2 = ts.reflection.compose(&ts.reflection);
        for b in &ts.sphere.vectors {
            let back = r2.apply(b);
            assert!(back.0.iter().zip(&b.0).all(|(p, q)| (p - q).abs() < 1e-12));
        }
        let ry = ts.reflection.apply(&MinkVector(y.iter().map(|c| c.re).collect()));
        assert!(ry.0.iter().zip(&yh).all(|(p, q)| (p - q.re).abs() < 1e-12));
    }

    #[test]
    fn proposition_on_reflection_pair() {
        let e = catalog::get("clifford_torus").unwrap();
        let x = MinkVector(vec![0.3, 1.0, 0.2, -0.4, 0.5]);
        let src = ReflectionLift::new(e.surface.clone(), x).unwrap();
        let pf = pair_at(e.surface.as_ref(), &src, e.center).unwrap();
        let inv = pf.invariants();
        let c = proposition_at(
            &jet_values(&pf.frame.y),
            &jet_values(&pf.frame.y_z),
            &jet_values(&pf.yhat),
            &jet_values(&pf.yhat.dz()),
            (1.0, 1.0),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(c.defect() < 1e-10, "{c:?}");
        assert!((c.theta - inv.theta.value()).norm() < 1e-10);
        assert!(c.cotouch && !c.touch && c.consistent());
    }
}
