//! Pointwise fibre algebra: su(n) and SU(n) with validated invariants.
//!
//! [`AlgElement`] is an anti-Hermitian traceless n×n complex matrix,
//! [`GroupElement`] a unitary matrix with determinant one. Both validate at
//! construction; operations that can drift (exponentials, products) correct
//! themselves by polar projection once the drift exceeds
//! [`tol::REPROJECT_DRIFT`]. The real pairing used throughout is the trace
//! form tr(XY), negative definite on su(n).

use crate::error::{Error, Result};
use crate::kernels as k;
use crate::scalar::{cc, ci, czero, C, Real};
use crate::tol;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;

/// Deterministic, portable generator used by every randomized routine.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// AlgElement
// ---------------------------------------------------------------------------

/// Element of su(n): anti-Hermitian, traceless.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement<R: Real> {
    n: usize,
    m: Vec<C<R>>,
}

impl<R: Real> AlgElement<R> {
    /// Validating constructor; entries are row-major n×n.
    pub fn new(n: usize, entries: Vec<C<R>>) -> Result<Self> {
        assert_eq!(entries.len(), n * n, "entry count must be n²");
        let defect = k::su_defect(&entries, n).as_f64();
        let scale = 1.0 + k::frob_norm_sq(&entries).sqrt().as_f64();
        if defect > tol::ALGEBRA_DEFECT * scale {
            return Err(Error::NotInAlgebra {
                defect,
                tol: tol::ALGEBRA_DEFECT * scale,
            });
        }
        Ok(Self { n, m: entries })
    }

    /// Orthogonal projection of an arbitrary matrix onto su(n):
    /// (m − m†)/2 minus its trace part. Also returns the distance moved.
    pub fn project(n: usize, entries: &[C<R>]) -> (Self, R) {
        let mut m = entries.to_vec();
        let drift = k::project_su(&mut m, n);
        (Self { n, m }, drift)
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            m: vec![czero(); n * n],
        }
    }

    /// Orthonormal basis of su(n) for the pairing ⟨X,Y⟩ = −tr(XY):
    /// antisymmetric-real and symmetric-imaginary pairs, then Cartan diagonals.
    pub fn basis(n: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(n * n - 1);
        let s = R::of(std::f64::consts::FRAC_1_SQRT_2);
        for p in 0..n {
            for q in (p + 1)..n {
                let mut a = vec![czero(); n * n];
                a[p * n + q] = Complex::new(s, R::zero());
                a[q * n + p] = Complex::new(-s, R::zero());
                out.push(Self { n, m: a });
                let mut b = vec![czero(); n * n];
                b[p * n + q] = Complex::new(R::zero(), s);
                b[q * n + p] = Complex::new(R::zero(), s);
                out.push(Self { n, m: b });
            }
        }
        for kdx in 1..n {
            let norm = R::of((kdx * (kdx + 1)) as f64).sqrt();
            let mut d = vec![czero(); n * n];
            for j in 0..kdx {
                d[j * n + j] = Complex::new(R::zero(), R::one() / norm);
            }
            d[kdx * n + kdx] = Complex::new(R::zero(), -R::of(kdx as f64) / norm);
            out.push(Self { n, m: d });
        }
        out
    }

    /// Random element with basis coefficients uniform in [−1, 1].
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let basis = Self::basis(n);
        let mut m = vec![czero(); n * n];
        for b in &basis {
            let c: f64 = rng.gen_range(-1.0..=1.0);
            k::mat_axpy(&mut m, cc(c, 0.0), &b.m);
        }
        Self { n, m }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[C<R>] {
        &self.m
    }

    pub fn entry(&self, r: usize, c: usize) -> C<R> {
        self.m[r * self.n + c]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> R {
        k::frob_norm_sq(&self.m).sqrt()
    }

    pub fn distance(&self, other: &Self) -> R {
        k::frob_dist(&self.m, &other.m)
    }

    pub(crate) fn from_raw_unchecked(n: usize, m: Vec<C<R>>) -> Self {
        Self { n, m }
    }
}

/// Commutator [X, Y] = XY − YX; closed in su(n) exactly.
pub fn commutator<R: Real>(x: &AlgElement<R>, y: &AlgElement<R>) -> Result<AlgElement<R>> {
    let n = same_rank(x.n, y.n)?;
    let mut m = vec![czero(); n * n];
    k::mul_acc(&mut m, cc(1.0, 0.0), &x.m, &y.m, n);
    k::mul_acc(&mut m, cc(-1.0, 0.0), &y.m, &x.m, n);
    Ok(AlgElement { n, m })
}

/// Trace pairing tr(XY); real (imaginary part at roundoff) on su(n) pairs,
/// negative definite on the diagonal.
pub fn trace_pair<R: Real>(x: &AlgElement<R>, y: &AlgElement<R>) -> Result<C<R>> {
    let n = same_rank(x.n, y.n)?;
    Ok(k::trace_of_product(&x.m, &y.m, n))
}

fn same_rank(a: usize, b: usize) -> Result<usize> {
    if a != b {
        return Err(Error::RankMismatch(a, b));
    }
    Ok(a)
}

impl<R: Real> std::ops::Add for &AlgElement<R> {
    type Output = AlgElement<R>;
    fn add(self, rhs: Self) -> AlgElement<R> {
        assert_eq!(self.n, rhs.n);
        let mut m = self.m.clone();
        k::mat_axpy(&mut m, cc(1.0, 0.0), &rhs.m);
        AlgElement { n: self.n, m }
    }
}

impl<R: Real> std::ops::Sub for &AlgElement<R> {
    type Output = AlgElement<R>;
    fn sub(self, rhs: Self) -> AlgElement<R> {
        assert_eq!(self.n, rhs.n);
        let mut m = self.m.clone();
        k::mat_axpy(&mut m, cc(-1.0, 0.0), &rhs.m);
        AlgElement { n: self.n, m }
    }
}

impl<R: Real> std::ops::Neg for &AlgElement<R> {
    type Output = AlgElement<R>;
    fn neg(self) -> AlgElement<R> {
        let mut m = self.m.clone();
        k::mat_scale(&mut m, cc(-1.0, 0.0));
        AlgElement { n: self.n, m }
    }
}

impl<R: Real> std::ops::Mul<R> for &AlgElement<R> {
    type Output = AlgElement<R>;
    fn mul(self, s: R) -> AlgElement<R> {
        let mut m = self.m.clone();
        k::mat_scale(&mut m, Complex::new(s, R::zero()));
        AlgElement { n: self.n, m }
    }
}

// ---------------------------------------------------------------------------
// GroupElement
// ---------------------------------------------------------------------------

/// Element of SU(n): unitary with determinant one.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<R: Real> {
    n: usize,
    m: Vec<C<R>>,
}

impl<R: Real> GroupElement<R> {
    /// Validating constructor.
    pub fn new(n: usize, entries: Vec<C<R>>) -> Result<Self> {
        assert_eq!(entries.len(), n * n, "entry count must be n²");
        let udef = k::unitary_defect(&entries, n).as_f64();
        let ddef = (k::determinant(&entries, n) - cc::<R>(1.0, 0.0)).norm().as_f64();
        let defect = udef.max(ddef);
        if defect > tol::GROUP_DEFECT {
            return Err(Error::NotInGroup {
                defect,
                tol: tol::GROUP_DEFECT,
            });
        }
        Ok(Self { n, m: entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            m: k::identity(n),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[C<R>] {
        &self.m
    }

    pub fn entry(&self, r: usize, c: usize) -> C<R> {
        self.m[r * self.n + c]
    }

    /// Group product; the result is polar-corrected when accumulated drift
    /// exceeds [`tol::REPROJECT_DRIFT`].
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        let n = same_rank(self.n, rhs.n)?;
        let mut m = vec![czero(); n * n];
        k::mul_into(&mut m, &self.m, &rhs.m, n);
        if k::unitary_defect(&m, n) > R::of(tol::REPROJECT_DRIFT) {
            k::polar_special_unitarize(&mut m, n);
        }
        Ok(Self { n, m })
    }

    /// Inverse = adjoint for unitary matrices.
    pub fn inverse(&self) -> Self {
        let mut m = vec![czero(); self.n * self.n];
        k::adjoint_into(&mut m, &self.m, self.n);
        Self { n: self.n, m }
    }

    /// Adjoint action g⁻¹ X g; exactly preserves su(n) up to roundoff,
    /// re-projected to keep the invariant sharp.
    pub fn conjugate_alg(&self, x: &AlgElement<R>) -> Result<AlgElement<R>> {
        let n = same_rank(self.n, x.n)?;
        let ginv = self.inverse();
        let mut tmp = vec![czero(); n * n];
        k::mul_into(&mut tmp, &ginv.m, &x.m, n);
        let mut out = vec![czero(); n * n];
        k::mul_into(&mut out, &tmp, &self.m, n);
        k::project_su(&mut out, n);
        Ok(AlgElement { n, m: out })
    }

    pub fn distance(&self, other: &Self) -> R {
        k::frob_dist(&self.m, &other.m)
    }

    pub(crate) fn from_raw_unchecked(n: usize, m: Vec<C<R>>) -> Self {
        Self { n, m }
    }
}

// ---------------------------------------------------------------------------
// exponential
// ---------------------------------------------------------------------------

/// Eigen-factorization of an anti-Hermitian matrix, X = V diag(iλ) V†, kept
/// around so exp(tX) can be formed for many t from one decomposition.
pub struct AntiHermitianEigen<R: Real> {
    n: usize,
    lambda: Vec<R>,
    v: Vec<C<R>>,
}

impl<R: Real> AntiHermitianEigen<R> {
    pub fn new(x: &AlgElement<R>) -> Self {
        let n = x.n;
        // H = −iX is Hermitian
        let mut h = x.m.clone();
        k::mat_scale(&mut h, -ci::<R>());
        let (lambda, v) = k::hermitian_eigen(&h, n);
        Self { n, lambda, v }
    }

    /// exp(tX) = V diag(e^{itλ}) V†; unitary by construction, with a polar
    /// correction if roundoff drift exceeds the reprojection threshold.
    pub fn exp_scaled(&self, t: R) -> GroupElement<R> {
        let n = self.n;
        let mut vd = vec![czero(); n * n];
        for r in 0..n {
            for c in 0..n {
                let phase = Complex::from_polar(R::one(), t * self.lambda[c]);
                vd[r * n + c] = self.v[r * n + c] * phase;
            }
        }
        let mut vt = vec![czero(); n * n];
        k::adjoint_into(&mut vt, &self.v, n);
        let mut m = vec![czero(); n * n];
        k::mul_into(&mut m, &vd, &vt, n);
        if k::unitary_defect(&m, n) > R::of(tol::REPROJECT_DRIFT) {
            k::polar_special_unitarize(&mut m, n);
        }
        GroupElement { n, m }
    }
}

/// Matrix exponential su(n) → SU(n).
pub fn su_exponential<R: Real>(x: &AlgElement<R>) -> GroupElement<R> {
    AntiHermitianEigen::new(x).exp_scaled(R::one())
}
