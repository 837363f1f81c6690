//! Slice-level kernels for n×n complex matrices and deterministic reductions.
//!
//! Field storage is flat (`[node][component][row][col]`), so every field
//! operator bottoms out in these routines on `&[C<R>]` blocks of length n²,
//! with no per-node allocation. Matrix ranks are small (n ≤ 4 in practice);
//! the loops are plain and rely on the optimizer.

use crate::scalar::{czero, C, Real};

// ---------------------------------------------------------------------------
// elementwise
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn mat_zero<R: Real>(a: &mut [C<R>]) {
    a.fill(czero());
}

/// out += s · x
#[inline]
pub(crate) fn mat_axpy<R: Real>(out: &mut [C<R>], s: C<R>, x: &[C<R>]) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += s * v;
    }
}

#[inline]
pub(crate) fn mat_scale<R: Real>(a: &mut [C<R>], s: C<R>) {
    for v in a {
        *v *= s;
    }
}

/// Sum of |a_ij|².
#[inline]
pub(crate) fn frob_norm_sq<R: Real>(a: &[C<R>]) -> R {
    let mut s = R::zero();
    for v in a {
        s += v.norm_sqr();
    }
    s
}

/// Frobenius distance ‖a − b‖.
pub(crate) fn frob_dist<R: Real>(a: &[C<R>], b: &[C<R>]) -> R {
    let mut s = R::zero();
    for (x, y) in a.iter().zip(b) {
        s += (*x - *y).norm_sqr();
    }
    s.sqrt()
}

// ---------------------------------------------------------------------------
// products and traces
// ---------------------------------------------------------------------------

/// out += s · (x · y), all n×n row-major.
#[inline]
pub(crate) fn mul_acc<R: Real>(out: &mut [C<R>], s: C<R>, x: &[C<R>], y: &[C<R>], n: usize) {
    for r in 0..n {
        for k in 0..n {
            let xv = s * x[r * n + k];
            if xv.re == R::zero() && xv.im == R::zero() {
                continue;
            }
            let yrow = &y[k * n..(k + 1) * n];
            let orow = &mut out[r * n..(r + 1) * n];
            for c in 0..n {
                orow[c] += xv * yrow[c];
            }
        }
    }
}

/// out = x · y
#[inline]
pub(crate) fn mul_into<R: Real>(out: &mut [C<R>], x: &[C<R>], y: &[C<R>], n: usize) {
    mat_zero(out);
    mul_acc(out, crate::scalar::cone(), x, y, n);
}

/// tr(x · y) without forming the product.
#[inline]
pub(crate) fn trace_of_product<R: Real>(x: &[C<R>], y: &[C<R>], n: usize) -> C<R> {
    let mut s = czero();
    for r in 0..n {
        for c in 0..n {
            s += x[r * n + c] * y[c * n + r];
        }
    }
    s
}

/// In-place su(n) projection reporting the two defect channels separately:
/// returns (‖Hermitian part removed‖_F, ‖trace part removed‖_F).
pub(crate) fn project_su_split<R: Real>(a: &mut [C<R>], n: usize) -> (R, R) {
    let half = R::of(0.5);
    let mut herm_sq = R::zero();
    for r in 0..n {
        for c in r..n {
            let x = a[r * n + c];
            let y = a[c * n + r].conj();
            let anti = (x - y).scale(half);
            let herm = (x + y).scale(half);
            herm_sq += herm.norm_sqr() * if r == c { R::one() } else { R::of(2.0) };
            a[r * n + c] = anti;
            if c != r {
                a[c * n + r] = -anti.conj();
            }
        }
    }
    let tr = trace(a, n).unscale(R::of(n as f64));
    for r in 0..n {
        a[r * n + r] -= tr;
    }
    (herm_sq.sqrt(), tr.norm() * R::of((n as f64).sqrt()))
}

/// tr(x · y · z) without forming any product.
#[inline]
pub(crate) fn trace_of_triple<R: Real>(x: &[C<R>], y: &[C<R>], z: &[C<R>], n: usize) -> C<R> {
    let mut s = czero();
    for r in 0..n {
        for k in 0..n {
            let xv = x[r * n + k];
            if xv.re == R::zero() && xv.im == R::zero() {
                continue;
            }
            for c in 0..n {
                s += xv * y[k * n + c] * z[c * n + r];
            }
        }
    }
    s
}

#[inline]
pub(crate) fn trace<R: Real>(a: &[C<R>], n: usize) -> C<R> {
    let mut s = czero();
    for r in 0..n {
        s += a[r * n + r];
    }
    s
}

/// out = a†
#[inline]
pub(crate) fn adjoint_into<R: Real>(out: &mut [C<R>], a: &[C<R>], n: usize) {
    for r in 0..n {
        for c in 0..n {
            out[r * n + c] = a[c * n + r].conj();
        }
    }
}

pub(crate) fn identity<R: Real>(n: usize) -> Vec<C<R>> {
    let mut m = vec![czero(); n * n];
    for r in 0..n {
        m[r * n + r] = crate::scalar::cone();
    }
    m
}

// ---------------------------------------------------------------------------
// su(n) projection
// ---------------------------------------------------------------------------

/// Project onto anti-Hermitian traceless matrices: (a − a†)/2 − tr/n.
/// Returns the Frobenius distance moved (the "drift" of the input from su(n)).
pub(crate) fn project_su<R: Real>(a: &mut [C<R>], n: usize) -> R {
    let half = C::new(R::of(0.5), R::zero());
    let mut drift = R::zero();
    // (a - a†)/2 in place: handle (r,c)/(c,r) pairs together.
    for r in 0..n {
        for c in r..n {
            let x = a[r * n + c];
            let y = a[c * n + r];
            let p = (x - y.conj()) * half;
            if r == c {
                drift += (x - p).norm_sqr();
                a[r * n + c] = p;
            } else {
                let q = (y - x.conj()) * half;
                drift += (x - p).norm_sqr() + (y - q).norm_sqr();
                a[r * n + c] = p;
                a[c * n + r] = q;
            }
        }
    }
    // remove the (now purely imaginary) trace
    let t = trace(a, n) / C::new(R::of(n as f64), R::zero());
    for r in 0..n {
        a[r * n + r] -= t;
        drift += t.norm_sqr();
    }
    drift.sqrt()
}

/// ‖a + a†‖_F + |tr a|, the defect from su(n) used by validators.
pub(crate) fn su_defect<R: Real>(a: &[C<R>], n: usize) -> R {
    let mut s = R::zero();
    for r in 0..n {
        for c in 0..n {
            s += (a[r * n + c] + a[c * n + r].conj()).norm_sqr();
        }
    }
    s.sqrt() + trace(a, n).norm()
}

// ---------------------------------------------------------------------------
// small dense linear algebra (partial-pivot elimination)
// ---------------------------------------------------------------------------

/// Determinant by LU with partial pivoting. Destroys a local copy only.
pub(crate) fn determinant<R: Real>(a: &[C<R>], n: usize) -> C<R> {
    let mut m = a.to_vec();
    let mut det = crate::scalar::cone::<R>();
    for k in 0..n {
        let mut piv = k;
        let mut best = m[k * n + k].norm_sqr();
        for r in (k + 1)..n {
            let v = m[r * n + k].norm_sqr();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == R::zero() {
            return czero();
        }
        if piv != k {
            for c in 0..n {
                m.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        let d = m[k * n + k];
        det *= d;
        for r in (k + 1)..n {
            let f = m[r * n + k] / d;
            for c in k..n {
                let v = m[k * n + c];
                m[r * n + c] -= f * v;
            }
        }
    }
    det
}

/// Inverse by Gauss–Jordan with partial pivoting; `None` if singular.
pub(crate) fn invert<R: Real>(a: &[C<R>], n: usize) -> Option<Vec<C<R>>> {
    let mut m = a.to_vec();
    let mut inv = identity::<R>(n);
    for k in 0..n {
        let mut piv = k;
        let mut best = m[k * n + k].norm_sqr();
        for r in (k + 1)..n {
            let v = m[r * n + k].norm_sqr();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == R::zero() {
            return None;
        }
        if piv != k {
            for c in 0..n {
                m.swap(k * n + c, piv * n + c);
                inv.swap(k * n + c, piv * n + c);
            }
        }
        let d = m[k * n + k];
        for c in 0..n {
            m[k * n + c] /= d;
            inv[k * n + c] /= d;
        }
        for r in 0..n {
            if r == k {
                continue;
            }
            let f = m[r * n + k];
            if f.re == R::zero() && f.im == R::zero() {
                continue;
            }
            for c in 0..n {
                let mv = m[k * n + c];
                let iv = inv[k * n + c];
                m[r * n + c] -= f * mv;
                inv[r * n + c] -= f * iv;
            }
        }
    }
    Some(inv)
}

/// ‖a†a − I‖_F, the unitarity defect.
pub(crate) fn unitary_defect<R: Real>(a: &[C<R>], n: usize) -> R {
    let mut g = vec![czero(); n * n];
    let mut at = vec![czero(); n * n];
    adjoint_into(&mut at, a, n);
    mul_into(&mut g, &at, a, n);
    for r in 0..n {
        g[r * n + r] -= crate::scalar::cone::<R>();
    }
    frob_norm_sq(&g).sqrt()
}

/// Pull a matrix back onto SU(n): Newton polar iteration to the nearest
/// unitary, then a determinant phase correction. Returns the distance moved.
pub(crate) fn polar_special_unitarize<R: Real>(a: &mut [C<R>], n: usize) -> R {
    let orig = a.to_vec();
    let half = C::new(R::of(0.5), R::zero());
    for _ in 0..40 {
        if unitary_defect(a, n) <= R::of(1e-14) {
            break;
        }
        let mut at = vec![czero(); n * n];
        adjoint_into(&mut at, a, n);
        let Some(ait) = invert(&at, n) else { break };
        for i in 0..n * n {
            a[i] = (a[i] + ait[i]) * half;
        }
    }
    // det is now on the unit circle up to roundoff; divide out its n-th root phase
    let d = determinant(a, n);
    let theta = d.im.atan2(d.re) / R::of(n as f64);
    let rho = d.norm().powf(-R::one() / R::of(n as f64));
    let corr = C::from_polar(rho, -theta);
    mat_scale(a, corr);
    frob_dist(&orig, a)
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic complex Jacobi)
// ---------------------------------------------------------------------------

/// Eigendecomposition h = V diag(λ) V† of a Hermitian matrix.
/// Eigenvalues ascend; V is unitary to machine precision by construction.
pub(crate) fn hermitian_eigen<R: Real>(h: &[C<R>], n: usize) -> (Vec<R>, Vec<C<R>>) {
    let mut m = h.to_vec();
    let mut v = identity::<R>(n);
    let scale = frob_norm_sq(&m).sqrt().max(R::one());
    let tol = scale * R::of(1e-15);
    for _sweep in 0..60 {
        let mut off = R::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = m[p * n + q];
                let r = hpq.norm();
                if r <= scale * R::of(1e-300) {
                    continue;
                }
                let phase = hpq / C::new(r, R::zero());
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let tau = (aqq - app) / (R::of(2.0) * r);
                let t = {
                    let s = if tau >= R::zero() { R::one() } else { -R::one() };
                    s / (tau.abs() + (R::one() + tau * tau).sqrt())
                };
                let cth = R::one() / (R::one() + t * t).sqrt();
                let s = phase * C::new(t * cth, R::zero());
                let c = C::new(cth, R::zero());
                // columns p,q of m and v:  col_p ← c·col_p − s̄·col_q ; col_q ← s·col_p + c·col_q
                for i in 0..n {
                    let mp = m[i * n + p];
                    let mq = m[i * n + q];
                    m[i * n + p] = c * mp - s.conj() * mq;
                    m[i * n + q] = s * mp + c * mq;
                    let vp = v[i * n + p];
                    let vq = v[i * n + q];
                    v[i * n + p] = c * vp - s.conj() * vq;
                    v[i * n + q] = s * vp + c * vq;
                }
                // rows p,q of m:  row_p ← c·row_p − s·row_q ; row_q ← s̄·row_p + c·row_q
                for j in 0..n {
                    let mp = m[p * n + j];
                    let mq = m[q * n + j];
                    m[p * n + j] = c * mp - s * mq;
                    m[q * n + j] = s.conj() * mp + c * mq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let evs: Vec<R> = (0..n).map(|i| m[i * n + i].re).collect();
    order.sort_by(|&a, &b| evs[a].partial_cmp(&evs[b]).unwrap());
    let lambda: Vec<R> = order.iter().map(|&i| evs[i]).collect();
    let mut vs = vec![czero(); n * n];
    for (newc, &oldc) in order.iter().enumerate() {
        for r in 0..n {
            vs[r * n + newc] = v[r * n + oldc];
        }
    }
    (lambda, vs)
}

// ---------------------------------------------------------------------------
// deterministic reductions
// ---------------------------------------------------------------------------

const REDUCE_CHUNK: usize = 4096;

/// Deterministic chunked pairwise sum of f(0..count).
///
/// The chunk layout is fixed, so the floating-point result is a pure function
/// of the inputs — independent of any execution schedule — and the pairwise
/// tree keeps roundoff growth logarithmic in the node count.
pub(crate) fn reduce_indexed<R: Real, F: FnMut(usize) -> C<R>>(count: usize, mut f: F) -> C<R> {
    let nchunks = count.div_ceil(REDUCE_CHUNK).max(1);
    let mut partials: Vec<C<R>> = Vec::with_capacity(nchunks);
    for ch in 0..nchunks {
        let lo = ch * REDUCE_CHUNK;
        let hi = ((ch + 1) * REDUCE_CHUNK).min(count);
        let mut s = czero();
        for i in lo..hi {
            s += f(i);
        }
        partials.push(s);
    }
    pairwise_sum(&partials)
}

pub(crate) fn pairwise_sum<R: Real>(xs: &[C<R>]) -> C<R> {
    match xs.len() {
        0 => czero(),
        1 => xs[0],
        k => pairwise_sum(&xs[..k / 2]) + pairwise_sum(&xs[k / 2..]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cc;

    fn m2(entries: [(f64, f64); 4]) -> Vec<C<f64>> {
        entries.iter().map(|&(re, im)| cc(re, im)).collect()
    }

    #[test]
    fn product_and_trace_agree() {
        // X = iσ₂ , Y = iσ₁
        let x = m2([(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 0.0)]);
        let y = m2([(0.0, 0.0), (0.0, 1.0), (0.0, 1.0), (0.0, 0.0)]);
        let mut xy = vec![czero(); 4];
        mul_into(&mut xy, &x, &y, 2);
        let tr_direct = trace(&xy, 2);
        let tr_fast = trace_of_product(&x, &y, 2);
        assert!((tr_direct - tr_fast).norm() < 1e-15);
    }

    #[test]
    fn inverse_of_random_matrix() {
        let a = m2([(1.0, 2.0), (0.5, -1.0), (3.0, 0.25), (-2.0, 1.0)]);
        let inv = invert(&a, 2).unwrap();
        let mut p = vec![czero(); 4];
        mul_into(&mut p, &a, &inv, 2);
        let id = identity::<f64>(2);
        assert!(frob_dist(&p, &id) < 1e-13);
    }

    #[test]
    fn determinant_triangular() {
        let a = m2([(2.0, 0.0), (5.0, 1.0), (0.0, 0.0), (3.0, 0.0)]);
        let d = determinant(&a, 2);
        assert!((d - cc::<f64>(6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn jacobi_eigen_reconstructs() {
        // Hermitian 3×3 with distinct eigenvalues
        let h: Vec<C<f64>> = vec![
            cc(2.0, 0.0), cc(0.5, 0.3), cc(0.1, -0.2),
            cc(0.5, -0.3), cc(-1.0, 0.0), cc(0.4, 0.1),
            cc(0.1, 0.2), cc(0.4, -0.1), cc(0.5, 0.0),
        ];
        let (lam, v) = hermitian_eigen(&h, 3);
        assert!(lam.windows(2).all(|w| w[0] <= w[1]));
        // V unitary
        assert!(unitary_defect(&v, 3) < 1e-13);
        // V diag(λ) V† = h
        let mut d = vec![czero(); 9];
        for i in 0..3 {
            d[i * 3 + i] = cc(lam[i], 0.0);
        }
        let mut vd = vec![czero(); 9];
        mul_into(&mut vd, &v, &d, 3);
        let mut vt = vec![czero(); 9];
        adjoint_into(&mut vt, &v, 3);
        let mut rec = vec![czero(); 9];
        mul_into(&mut rec, &vd, &vt, 3);
        assert!(frob_dist(&rec, &h) < 1e-12);
    }

    #[test]
    fn projection_lands_in_algebra_and_is_idempotent() {
        let a = m2([(1.0, 2.0), (0.5, -1.0), (3.0, 0.25), (-2.0, 1.0)]);
        let mut p = a.clone();
        let drift = project_su(&mut p, 2);
        assert!(drift > 0.0);
        assert!(su_defect(&p, 2) < 1e-14);
        let mut q = p.clone();
        let drift2 = project_su(&mut q, 2);
        assert!(drift2 < 1e-15);
    }

    #[test]
    fn polar_correction_restores_unitarity() {
        // perturb a unitary matrix
        let mut a = m2([(0.6, 0.0), (0.8, 0.0), (-0.8, 0.0), (0.6, 0.0)]);
        a[1] += cc(1e-6, -2e-6);
        let moved = polar_special_unitarize(&mut a, 2);
        assert!(moved < 1e-5);
        assert!(unitary_defect(&a, 2) < 1e-13);
        assert!((determinant(&a, 2) - cc::<f64>(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn pairwise_reduction_is_chunk_stable() {
        let direct = reduce_indexed(10_000, |i| cc::<f64>((i as f64).sin(), 0.0));
        let again = reduce_indexed(10_000, |i| cc::<f64>((i as f64).sin(), 0.0));
        assert_eq!(direct, again);
    }
}
