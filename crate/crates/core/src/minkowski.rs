//! Linear algebra over the Minkowski space `R^{n+1,1}`.
//!
//! Coordinate 0 is the timelike direction, so
//! `<x, y> = -x0 y0 + x1 y1 + ... + x_{n+1} y_{n+1}`. Points of `S^n` are null
//! lines, round `k`-spheres are spacelike `(n-k)`-dimensional subspaces.
//! Complexified vectors use the bilinear (never Hermitian) extension.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative tolerance used for Gram determinants and rank decisions.
pub const GRAM_TOL: f64 = 1e-10;

/// A real vector of `R^{n+1,1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinkVector(pub Vec<f64>);

/// A complexified vector of `R^{n+1,1} ⊗ C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMinkVector(pub Vec<C64>);

/// Vectors carrying the signature `(n+1, 1)` bilinear form.
pub trait Lorentzian: Sized {
    type Scalar: Copy + Mul<Output = Self::Scalar> + Sub<Output = Self::Scalar>;

    fn dim(&self) -> usize;

    /// Bilinear inner product of signature `(n+1, 1)`.
    fn inner(&self, other: &Self) -> Result<Self::Scalar>;
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(a, b));
    }
    Ok(())
}

impl Lorentzian for MinkVector {
    type Scalar = f64;

    fn dim(&self) -> usize {
        self.0.len()
    }

    fn inner(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(minkowski_dot(&self.0, &other.0))
    }
}

impl Lorentzian for CMinkVector {
    type Scalar = C64;

    fn dim(&self) -> usize {
        self.0.len()
    }

    fn inner(&self, other: &Self) -> Result<C64> {
        check_dims(self.dim(), other.dim())?;
        let mut acc = -self.0[0] * other.0[0];
        for (a, b) in self.0.iter().zip(&other.0).skip(1) {
            acc += a * b;
        }
        Ok(acc)
    }
}

pub(crate) fn minkowski_dot(a: &[f64], b: &[f64]) -> f64 {
    -a[0] * b[0] + a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<f64>()
}

/// `<a ∧ b, c ∧ d> = <a,c><b,d> - <a,d><b,c>`.
pub fn wedge_inner<V: Lorentzian>(a: &V, b: &V, c: &V, d: &V) -> Result<V::Scalar> {
    Ok(a.inner(c)? * b.inner(d)? - a.inner(d)? * b.inner(c)?)
}

impl MinkVector {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        Self(v)
    }

    pub fn norm_sq(&self) -> f64 {
        minkowski_dot(&self.0, &self.0)
    }

    /// Euclidean length of the coordinate vector.
    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_null(&self, tol: f64) -> bool {
        self.norm_sq().abs() <= tol * self.euclid_norm().powi(2)
    }

    pub fn is_forward(&self) -> bool {
        self.0[0] > 0.0
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    pub fn complexify(&self) -> CMinkVector {
        CMinkVector(self.0.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }
}

impl Add for &MinkVector {
    type Output = MinkVector;
    fn add(self, o: &MinkVector) -> MinkVector {
        MinkVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MinkVector {
    type Output = MinkVector;
    fn sub(self, o: &MinkVector) -> MinkVector {
        MinkVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &MinkVector {
    type Output = MinkVector;
    fn neg(self) -> MinkVector {
        self.scale(-1.0)
    }
}

impl CMinkVector {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![C64::new(0.0, 0.0); dim])
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|x| x.conj()).collect())
    }

    pub fn re(&self) -> MinkVector {
        MinkVector(self.0.iter().map(|x| x.re).collect())
    }

    pub fn im(&self) -> MinkVector {
        MinkVector(self.0.iter().map(|x| x.im).collect())
    }

    pub fn scale(&self, k: C64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    /// Euclidean (Hermitian coordinate) length.
    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `sqrt(|<v, v̄>|)`, a genuine norm on spacelike subspaces such as `V⊥`.
    pub fn hermitian_norm(&self) -> f64 {
        let h: C64 = self.inner(&self.conj()).expect("same dimension");
        h.re.abs().sqrt()
    }
}

impl Add for &CMinkVector {
    type Output = CMinkVector;
    fn add(self, o: &CMinkVector) -> CMinkVector {
        CMinkVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CMinkVector {
    type Output = CMinkVector;
    fn sub(self, o: &CMinkVector) -> CMinkVector {
        CMinkVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

/// Signature `(p, q)` of a nondegenerate subspace: `p` positive, `q` negative directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

/// A finite family of real vectors spanning a nondegenerate subspace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubspaceBasis {
    pub vectors: Vec<MinkVector>,
    pub signature: Signature,
}

impl SubspaceBasis {
    /// Builds a basis and records the signature of its Gram matrix.
    pub fn new(vectors: Vec<MinkVector>) -> Result<Self> {
        let gram = gram_matrix(&vectors)?;
        let signature = gram_signature(&gram, &vectors)?;
        Ok(Self { vectors, signature })
    }

    /// Like [`SubspaceBasis::new`] but fails unless the signature matches.
    pub fn with_signature(vectors: Vec<MinkVector>, expected: Signature) -> Result<Self> {
        let b = Self::new(vectors)?;
        if b.signature != expected {
            return Err(Error::SignatureFailure(format!(
                "expected ({}, {}), found ({}, {})",
                expected.positive, expected.negative, b.signature.positive, b.signature.negative
            )));
        }
        Ok(b)
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.dim())
    }

    pub fn gram(&self) -> DMatrix<f64> {
        gram_matrix(&self.vectors).expect("validated on construction")
    }

    /// Coordinate matrix whose columns are the basis vectors.
    fn matrix(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.vectors.iter().map(|v| v.as_dvector()).collect();
        DMatrix::from_columns(&cols)
    }

    /// Orthogonal projector `P = B G^{-1} B^T η` as a coordinate matrix.
    pub fn projector(&self) -> Result<DMatrix<f64>> {
        let b = self.matrix();
        let g_inv = invert_gram(&self.gram())?;
        let eta = metric(self.ambient_dim());
        Ok(&b * g_inv * b.transpose() * eta)
    }

    /// Pivoted Gram–Schmidt producing `<e_i, e_j> = ±δ_ij`.
    pub fn orthonormalized(&self) -> Result<SubspaceBasis> {
        let scale = self.vectors.iter().map(|v| v.euclid_norm().powi(2)).fold(0.0, f64::max);
        let mut pool = self.vectors.clone();
        let mut out: Vec<MinkVector> = Vec::new();
        while !pool.is_empty() {
            let (k, best) = pool
                .iter()
                .enumerate()
                .map(|(k, v)| (k, v.norm_sq().abs()))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best < GRAM_TOL * scale.max(1e-300) {
                return Err(Error::DegenerateGram(best));
            }
            let pivot = pool.swap_remove(k);
            let e = pivot.scale(1.0 / pivot.norm_sq().abs().sqrt());
            let ee = e.norm_sq();
            for v in pool.iter_mut() {
                let c = minkowski_dot(&v.0, &e.0) / ee;
                *v = &*v - &e.scale(c);
            }
            out.push(e);
        }
        SubspaceBasis::new(out)
    }

    /// Orthogonal complement in the ambient space, orthonormalized.
    pub fn complement(&self) -> Result<SubspaceBasis> {
        let dim = self.ambient_dim();
        let target = dim - self.rank();
        let mut residuals: Vec<MinkVector> = (0..dim)
            .map(|k| project(self, &MinkVector::basis(dim, k)).map(|(_, perp)| perp))
            .collect::<Result<_>>()?;
        let mut out: Vec<MinkVector> = Vec::new();
        while out.len() < target {
            let (k, best) = residuals
                .iter()
                .enumerate()
                .map(|(k, v)| (k, v.norm_sq().abs()))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best < GRAM_TOL {
                return Err(Error::DegenerateGram(best));
            }
            let pivot = residuals.swap_remove(k);
            let e = pivot.scale(1.0 / best.sqrt());
            let ee = e.norm_sq();
            for v in residuals.iter_mut() {
                let c = minkowski_dot(&v.0, &e.0) / ee;
                *v = &*v - &e.scale(c);
            }
            out.push(e);
        }
        SubspaceBasis::new(out)
    }
}

fn metric(dim: usize) -> DMatrix<f64> {
    let mut eta = DMatrix::identity(dim, dim);
    eta[(0, 0)] = -1.0;
    eta
}

fn gram_matrix(vectors: &[MinkVector]) -> Result<DMatrix<f64>> {
    let k = vectors.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = vectors[i].inner(&vectors[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

fn gram_scale(g: &DMatrix<f64>) -> f64 {
    (0..g.nrows()).map(|i| g.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn invert_gram(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let det = g.determinant();
    let scale = gram_scale(g).powi(g.nrows() as i32);
    if !det.is_finite() || det.abs() < GRAM_TOL * scale.max(1e-300) {
        return Err(Error::DegenerateGram(det.abs()));
    }
    g.clone().try_inverse().ok_or(Error::DegenerateGram(det.abs()))
}

fn gram_signature(g: &DMatrix<f64>, vectors: &[MinkVector]) -> Result<Signature> {
    if vectors.is_empty() {
        return Ok(Signature { positive: 0, negative: 0 });
    }
    let dim = vectors[0].dim();
    for v in vectors {
        check_dims(dim, v.dim())?;
    }
    invert_gram(g)?;
    let eig = g.clone().symmetric_eigen();
    let tol = GRAM_TOL * gram_scale(g);
    let positive = eig.eigenvalues.iter().filter(|&&l| l > tol).count();
    let negative = eig.eigenvalues.iter().filter(|&&l| l < -tol).count();
    if positive + negative != vectors.len() {
        return Err(Error::DegenerateGram(0.0));
    }
    Ok(Signature { positive, negative })
}

/// Splits `v` into its component in `span(basis)` and the orthogonal remainder.
pub fn project(basis: &SubspaceBasis, v: &MinkVector) -> Result<(MinkVector, MinkVector)> {
    check_dims(basis.ambient_dim(), v.dim())?;
    let g_inv = invert_gram(&basis.gram())?;
    let rhs = DVector::from_iterator(
        basis.rank(),
        basis.vectors.iter().map(|b| minkowski_dot(&b.0, &v.0)),
    );
    let coeff = g_inv * rhs;
    let mut par = MinkVector::zeros(v.dim());
    for (c, b) in coeff.iter().zip(&basis.vectors) {
        par = &par + &b.scale(*c);
    }
    let perp = v - &par;
    Ok((par, perp))
}

/// Complex version of [`project`], applied to real and imaginary parts.
pub fn project_complex(basis: &SubspaceBasis, v: &CMinkVector) -> Result<(CMinkVector, CMinkVector)> {
    let (pr, qr) = project(basis, &v.re())?;
    let (pi, qi) = project(basis, &v.im())?;
    let join = |a: MinkVector, b: MinkVector| {
        CMinkVector(a.0.iter().zip(&b.0).map(|(x, y)| C64::new(*x, *y)).collect())
    };
    Ok((join(pr, pi), join(qr, qi)))
}

/// True iff the orthogonal projectors onto the two spans differ by less than `tol`
/// in operator (spectral) norm.
pub fn subspace_equal(b1: &SubspaceBasis, b2: &SubspaceBasis, tol: f64) -> Result<bool> {
    Ok(subspace_distance(b1, b2)? < tol)
}

/// Spectral norm of the difference of the two orthogonal projectors.
pub fn subspace_distance(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<f64> {
    check_dims(b1.ambient_dim(), b2.ambient_dim())?;
    let d = b1.projector()? - b2.projector()?;
    Ok(d.singular_values().max())
}

/// An element of `O(n+1, 1)` acting on coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Lorentz {
    pub matrix: DMatrix<f64>,
}

impl Lorentz {
    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Reflection `x ↦ x - 2 <x,r>/<r,r> r` in a non-null vector.
    pub fn reflection(r: &MinkVector) -> Result<Self> {
        let rr = r.norm_sq();
        if rr.abs() < GRAM_TOL * r.euclid_norm().powi(2) {
            return Err(Error::Invalid("reflection vector is null".into()));
        }
        let dim = r.dim();
        let rv = r.as_dvector();
        let m = DMatrix::identity(dim, dim) - (&rv * (metric(dim) * &rv).transpose()) * (2.0 / rr);
        Ok(Self { matrix: m })
    }

    /// Reflection in `r` with `<r,r>` supplied by the caller, for vectors whose
    /// length is known more accurately than it can be recomputed.
    pub fn reflection_with_norm(r: &MinkVector, rr: f64) -> Result<Self> {
        if !(rr.abs() > 0.0 && rr.is_finite()) {
            return Err(Error::Invalid("reflection vector is null".into()));
        }
        let dim = r.dim();
        let rv = r.as_dvector();
        let m = DMatrix::identity(dim, dim) - (&rv * (metric(dim) * &rv).transpose()) * (2.0 / rr);
        Ok(Self { matrix: m })
    }

    pub fn apply(&self, x: &MinkVector) -> MinkVector {
        MinkVector((&self.matrix * x.as_dvector()).iter().copied().collect())
    }

    pub fn apply_complex(&self, x: &CMinkVector) -> CMinkVector {
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..n {
                *o += x.0[j] * self.matrix[(i, j)];
            }
        }
        CMinkVector(out)
    }

    pub fn compose(&self, other: &Lorentz) -> Lorentz {
        Lorentz { matrix: &self.matrix * &other.matrix }
    }

    pub fn inverse(&self) -> Lorentz {
        let eta = metric(self.dim());
        Lorentz { matrix: &eta * self.matrix.transpose() * &eta }
    }

    /// Max entry of `T^T η T - η`.
    pub fn metric_defect(&self) -> f64 {
        let eta = metric(self.dim());
        (self.matrix.transpose() * &eta * &self.matrix - eta).amax()
    }

    /// Orthochronous maps keep the forward cone forward.
    pub fn is_orthochronous(&self) -> bool {
        self.matrix[(0, 0)] > 0.0
    }
}

/// Deterministic random element of `O⁺(n+1, 1)` on `R^{n+1,1}`: a spatial rotation,
/// a boost of rapidity at most `max_rapidity`, and another spatial rotation.
pub fn random_lorentz_with(seed: u64, n: usize, max_rapidity: f64) -> Lorentz {
    let dim = n + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r1 = random_rotation(&mut rng, dim);
    let r2 = random_rotation(&mut rng, dim);
    let mut dir: Vec<f64> = (0..dim - 1).map(|_| rng.sample(StandardNormal)).collect();
    let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    dir.iter_mut().for_each(|x| *x /= len);
    let phi: f64 = rng.gen_range(-max_rapidity..=max_rapidity);
    let mut boost = DMatrix::identity(dim, dim);
    let (ch, sh) = (phi.cosh(), phi.sinh());
    boost[(0, 0)] = ch;
    for i in 0..dim - 1 {
        boost[(0, i + 1)] = sh * dir[i];
        boost[(i + 1, 0)] = sh * dir[i];
        for j in 0..dim - 1 {
            boost[(i + 1, j + 1)] += (ch - 1.0) * dir[i] * dir[j];
        }
    }
    Lorentz { matrix: r2 * boost * r1 }
}

/// [`random_lorentz_with`] with rapidity bounded by one.
pub fn random_lorentz(seed: u64, n: usize) -> Lorentz {
    random_lorentz_with(seed, n, 1.0)
}

/// Deterministic random unit spacelike vector of `R^{dim-1,1}` with time component in `[-½, ½]`.
pub fn random_spacelike(seed: u64, dim: usize) -> MinkVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<f64> = (0..dim - 1).map(|_| rng.sample(StandardNormal)).collect();
    let len = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    s.iter_mut().for_each(|x| *x /= len);
    let t: f64 = rng.gen_range(-0.5..=0.5);
    let k = (1.0 + t * t).sqrt();
    let mut v = vec![t];
    v.extend(s.iter().map(|x| x * k));
    MinkVector(v)
}

fn random_rotation(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    let k = dim - 1;
    let a = DMatrix::from_fn(k, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = a.qr().q();
    let mut m = DMatrix::identity(dim, dim);
    m.view_mut((1, 1), (k, k)).copy_from(&q);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[f64]) -> MinkVector {
        MinkVector(x.to_vec())
    }

    #[test]
    fn inner_examples() {
        let a = v(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let b = v(&[1.0, -1.0, 0.0, 0.0, 0.0]);
        assert_eq!(a.inner(&a).unwrap(), 0.0);
        assert_eq!(v(&[1.0, 0.0, 0.0, 0.0, 0.0]).norm_sq(), -1.0);
        assert_eq!(a.inner(&b).unwrap(), -2.0);
        assert!(matches!(a.inner(&v(&[1.0, 0.0])), Err(Error::DimensionMismatch(5, 2))));
        assert!(a.is_null(1e-14) && a.is_forward());
    }

    #[test]
    fn complex_inner_is_bilinear() {
        let a = CMinkVector(vec![C64::new(1.0, 2.0), C64::new(0.5, -1.0), C64::new(0.0, 3.0)]);
        let b = CMinkVector(vec![C64::new(-1.0, 0.5), C64::new(2.0, 1.0), C64::new(1.0, 1.0)]);
        let i = C64::new(0.0, 1.0);
        let lhs = a.scale(i).inner(&b).unwrap();
        assert!((lhs - i * a.inner(&b).unwrap()).norm() < 1e-14);
        let c = a.conj().inner(&b.conj()).unwrap();
        assert!((c - a.inner(&b).unwrap().conj()).norm() < 1e-14);
    }

    #[test]
    fn wedge_inner_examples() {
        let a = v(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let b = v(&[1.0, -1.0, 0.0, 0.0, 0.0]);
        assert_eq!(wedge_inner(&a, &a, &a, &a).unwrap(), 0.0);
        assert_eq!(wedge_inner(&a, &b, &a, &b).unwrap(), -4.0);
        let e1 = MinkVector::basis(5, 1);
        let e2 = MinkVector::basis(5, 2);
        assert_eq!(wedge_inner(&e1, &e2, &e1, &e2).unwrap(), 1.0);
    }

    #[test]
    fn project_examples() {
        let e1 = MinkVector::basis(5, 1);
        let e2 = MinkVector::basis(5, 2);
        let basis = SubspaceBasis::new(vec![e1.clone()]).unwrap();
        let (par, perp) = project(&basis, &(&e1 + &e2)).unwrap();
        assert_eq!(par, e1);
        assert_eq!(perp, e2);
        let (par, perp) = project(&basis, &e2).unwrap();
        assert_eq!(par, MinkVector::zeros(5));
        assert_eq!(perp, e2);
    }

    #[test]
    fn degenerate_gram_is_reported() {
        let null = v(&[1.0, 1.0, 0.0]);
        assert!(matches!(SubspaceBasis::new(vec![null]), Err(Error::DegenerateGram(_))));
    }

    #[test]
    fn complement_of_timelike_plane() {
        let b = SubspaceBasis::new(vec![v(&[1.0, 1.0, 0.0, 0.0]), v(&[1.0, -1.0, 0.0, 0.0])]).unwrap();
        assert_eq!(b.signature, Signature { positive: 1, negative: 1 });
        let c = b.complement().unwrap();
        assert_eq!(c.signature, Signature { positive: 2, negative: 0 });
        for x in &c.vectors {
            for y in &b.vectors {
                assert!(x.inner(y).unwrap().abs() < 1e-14);
            }
        }
    }

    #[test]
    fn subspace_equal_examples() {
        let b1 = SubspaceBasis::new(vec![MinkVector::basis(5, 1), MinkVector::basis(5, 2)]).unwrap();
        assert!(subspace_equal(&b1, &b1, 1e-12).unwrap());
        let mixed = SubspaceBasis::new(vec![
            &MinkVector::basis(5, 1) + &MinkVector::basis(5, 2).scale(3.0),
            MinkVector::basis(5, 2).scale(-2.0),
        ])
        .unwrap();
        assert!(subspace_equal(&b1, &mixed, 1e-12).unwrap());
        let other = SubspaceBasis::new(vec![MinkVector::basis(5, 1), MinkVector::basis(5, 3)]).unwrap();
        assert!(!subspace_equal(&b1, &other, 1e-3).unwrap());
    }

    #[test]
    fn identity_and_reflection() {
        let id = Lorentz::identity(5);
        let x = v(&[2.0, 0.3, -1.0, 0.5, 0.1]);
        assert_eq!(id.apply(&x), x);
        let r = Lorentz::reflection(&v(&[0.0, 1.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(r.metric_defect() < 1e-15);
        let rr = r.compose(&r);
        assert!((rr.matrix - DMatrix::identity(5, 5)).amax() < 1e-15);
    }

    #[test]
    fn random_lorentz_is_orthochronous_isometry() {
        for seed in 0..20 {
            let t = random_lorentz(seed, 3);
            assert!(t.metric_defect() < 1e-12, "seed {seed}: {}", t.metric_defect());
            assert!(t.is_orthochronous());
            let fwd = v(&[1.0, 0.6, 0.0, 0.8, 0.0]);
            assert!(t.apply(&fwd).is_forward());
            let inv = t.inverse().compose(&t);
            assert!((inv.matrix - DMatrix::identity(5, 5)).amax() < 1e-12);
        }
        assert_eq!(random_lorentz(7, 4), random_lorentz(7, 4));
    }

    fn vec5() -> impl Strategy<Value = MinkVector> {
        prop::collection::vec(-3.0f64..3.0, 5).prop_map(MinkVector)
    }

    proptest! {
        #[test]
        fn inner_symmetric_bilinear(a in vec5(), b in vec5(), c in vec5(), k in -2.0f64..2.0) {
            let ab = a.inner(&b).unwrap();
            prop_assert!((ab - b.inner(&a).unwrap()).abs() < 1e-12);
            let lhs = (&a.scale(k) + &c).inner(&b).unwrap();
            prop_assert!((lhs - (k * ab + c.inner(&b).unwrap())).abs() < 1e-10);
        }

        #[test]
        fn wedge_antisymmetric(a in vec5(), b in vec5(), c in vec5(), d in vec5()) {
            let w = wedge_inner(&a, &b, &c, &d).unwrap();
            prop_assert!((w + wedge_inner(&b, &a, &c, &d).unwrap()).abs() < 1e-9);
            prop_assert!((w + wedge_inner(&a, &b, &d, &c).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn projection_properties(b1 in vec5(), b2 in vec5(), x in vec5()) {
            let Ok(basis) = SubspaceBasis::new(vec![b1, b2]) else { return Ok(()) };
            let g = basis.gram();
            prop_assume!(g.determinant().abs() > 1e-2);
            let (par, perp) = project(&basis, &x).unwrap();
            for b in &basis.vectors {
                prop_assert!(perp.inner(b).unwrap().abs() < 1e-10 * (1.0 + x.euclid_norm() * b.euclid_norm()));
            }
            let (par2, perp2) = project(&basis, &par).unwrap();
            prop_assert!((&par2 - &par).euclid_norm() < 1e-9 * (1.0 + par.euclid_norm()));
            prop_assert!(perp2.euclid_norm() < 1e-9 * (1.0 + par.euclid_norm()));
        }

        #[test]
        fn lorentz_preserves_inner(seed in 0u64..1000, x in vec5(), y in vec5()) {
            let t = random_lorentz(seed, 3);
            let d = t.apply(&x).inner(&t.apply(&y)).unwrap() - x.inner(&y).unwrap();
            prop_assert!(d.abs() < 1e-12 * (1.0 + x.euclid_norm() * y.euclid_norm()) * 50.0);
        }
    }
}
