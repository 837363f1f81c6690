//! Scalar functionals of gauge fields: the three-dimensional Chern–Simons value,
//! topological mapping degree, the 4-dimensional ∫tr(F∧F), flat-sector
//! charge, and the cotangent-section 3-form with its pairing.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::form::{integral_wedge_trace, integral_wedge_trace3, FormField};
use crate::gauge::{curvature, require_flat, Connection, GaugeMap};
use crate::kernels as k;
use crate::mesh::Mesh;
use crate::scalar::{czero, C, Real};
use crate::tol;

/// Fixed normalization constants, echoed in every report.
///
/// The two families (1/(24π³) vs 1/(8π²), 1/(24π²)) coexist deliberately:
/// the source formulas use both powers of π and the toolkit exposes each
/// constant under its own name rather than reconciling them.
#[derive(Debug, Clone, Copy)]
pub struct Normalizations {
    /// q = 1/(24π³), the cotangent-section and pre-symplectic weight.
    pub q: f64,
    /// 1/(8π²), the Chern–Simons weight.
    pub cs3_norm: f64,
    /// 1/(24π²), the mapping-degree weight.
    pub deg_norm: f64,
    /// 1/(24π²), the flat-sector charge weight (chosen so pure-gauge
    /// connections land on integers; documented deviation from the
    /// unnormalized ∫tr A³).
    pub sector_norm: f64,
}

/// The build-time constants.
pub const NORMALIZATIONS: Normalizations = Normalizations {
    q: 1.0 / (24.0 * PI * PI * PI),
    cs3_norm: 1.0 / (8.0 * PI * PI),
    deg_norm: 1.0 / (24.0 * PI * PI),
    sector_norm: 1.0 / (24.0 * PI * PI),
};

fn require_dim<R: Real>(mesh: &Mesh<R>, expected: usize) -> Result<()> {
    if mesh.dim() != expected {
        return Err(Error::WrongDimension {
            expected,
            got: mesh.dim(),
        });
    }
    Ok(())
}

/// Antisymmetrized traces of su(n) values are real; enforce it.
fn assert_real<R: Real>(v: C<R>, context: &str) -> C<R> {
    assert!(
        v.im.abs().as_f64() <= tol::PROJECTION_DRIFT_MAX * (1.0 + v.norm().as_f64()),
        "{context}: imaginary part {:?} not at roundoff",
        v.im
    );
    v
}

/// CS₍₃₎(A) = (1/8π²)∫ tr(A∧F_A − ⅓A∧A∧A) on a 3-mesh.
pub fn chern_simons3<R: Real>(a: &Connection<R>) -> Result<C<R>> {
    require_dim(a.mesh(), 3)?;
    let f = curvature(a)?;
    let af = integral_wedge_trace(a.field(), &f)?;
    let aaa = integral_wedge_trace3(a.field(), a.field(), a.field())?;
    let third: R = R::of(1.0) / R::of(3.0);
    let val = (af - aaa.scale(third)).scale(R::of(NORMALIZATIONS.cs3_norm));
    Ok(assert_real(val, "chern_simons3"))
}

/// Σ_pieces sign · CS₍₃₎(restriction) over the oriented boundary of a 4-mesh.
pub fn boundary_chern_simons3<R: Real>(a: &Connection<R>) -> Result<C<R>> {
    require_dim(a.mesh(), 4)?;
    let boundary = a.field().boundary_restrict()?;
    let mut total = czero::<R>();
    for piece in boundary.pieces {
        let cs = chern_simons3(&Connection::new(piece.field)?)?;
        total += cs.scale(R::of(piece.sign as f64));
    }
    Ok(total)
}

/// deg g = (1/24π²)∫ tr((dg·g⁻¹)∧(dg·g⁻¹)∧(dg·g⁻¹)) on a 3-mesh;
/// near-integer real value for smooth g.
pub fn map_degree<R: Real>(g: &GaugeMap<R>) -> Result<C<R>> {
    require_dim(g.mesh(), 3)?;
    let r = right_log_derivative(g)?;
    let val =
        integral_wedge_trace3(&r, &r, &r)?.scale(R::of(NORMALIZATIONS.deg_norm));
    Ok(assert_real(val, "map_degree"))
}

/// The 1-form (dg)·g⁻¹ with values projected to su(n); the projection removes
/// the same O(h²) stencil consistency defect logged by the gauge action.
fn right_log_derivative<R: Real>(g: &GaugeMap<R>) -> Result<FormField<R>> {
    let n = g.rank();
    let dg = g.as_matrix_form().exterior_d()?;
    let mut out = FormField::zero(g.mesh(), 1, n)?;
    let mut adj = vec![czero(); n * n];
    for node in 0..g.mesh().num_nodes() {
        k::adjoint_into(&mut adj, g.block(node), n);
        for comp in 0..out.num_components() {
            k::mul_into(out.block_mut(node, comp), dg.block(node, comp), &adj, n);
        }
    }
    out.project_su_blocks();
    Ok(out)
}

/// ∫ tr(F_A∧F_A) on a 4-mesh, unnormalized.
pub fn second_chern<R: Real>(a: &Connection<R>) -> Result<C<R>> {
    require_dim(a.mesh(), 4)?;
    let f = curvature(a)?;
    Ok(assert_real(integral_wedge_trace(&f, &f)?, "second_chern"))
}

/// (1/24π²)∫ tr(A∧A∧A) for a flat connection on a 3-mesh; near-integer for
/// pure-gauge fields. Rejects inputs whose curvature residual exceeds the
/// resolution-scaled flatness threshold.
pub fn sector_charge<R: Real>(a: &Connection<R>) -> Result<C<R>> {
    require_dim(a.mesh(), 3)?;
    require_flat(a)?;
    let val = integral_wedge_trace3(a.field(), a.field(), a.field())?
        .scale(R::of(NORMALIZATIONS.sector_norm));
    Ok(assert_real(val, "sector_charge"))
}

/// The cotangent-section 3-form q·(A∧F + F∧A − ½A∧A∧A) on a 4-mesh.
/// Values are anticommutators of su elements, hence Hermitian — this form is
/// genuinely gl-valued and is not projected.
pub fn cs_form<R: Real>(a: &Connection<R>) -> Result<FormField<R>> {
    require_dim(a.mesh(), 4)?;
    let q = R::of(NORMALIZATIONS.q);
    let f = curvature(a)?;
    let mut out = FormField::zero(a.mesh(), 3, a.rank())?;
    out.wedge_accumulate(a.field(), &f, q)?;
    out.wedge_accumulate(&f, a.field(), q)?;
    let aa = a.field().wedge(a.field())?;
    out.wedge_accumulate(a.field(), &aa, -(q * R::of(0.5)))?;
    Ok(out)
}

/// θ^cs_A(a) = ∫ tr(cs_form(A)∧a) on a 4-mesh.
pub fn theta_cs<R: Real>(a: &Connection<R>, dir: &FormField<R>) -> Result<C<R>> {
    require_dim(a.mesh(), 4)?;
    integral_wedge_trace(&cs_form(a)?, dir)
}

/// Directional derivative of CS₍₃₎ at flat connections along flat directions:
/// (1/8π²)∫ tr(A∧A∧a). An exact-form integral over a closed 3-manifold, so it
/// decays at O(h²) when A and a are flat.
pub fn cs3_flat_derivative<R: Real>(a: &Connection<R>, dir: &FormField<R>) -> Result<C<R>> {
    require_dim(a.mesh(), 3)?;
    Ok(integral_wedge_trace3(a.field(), a.field(), dir)?
        .scale(R::of(NORMALIZATIONS.cs3_norm)))
}

// ---------------------------------------------------------------------------
// degree-one bump maps (the oracle fixture for degree and quantization tests)
// ---------------------------------------------------------------------------

/// Smooth bump profile: π at the center, 0 at s = 1, flat to all orders at
/// both ends (exp-based smoothstep), monotone in between — so every rotation
/// angle in (0,π) has exactly one preimage radius. Full flatness at s = 0
/// makes the assembled map smooth in x across the center, which keeps the
/// stencil error a clean O(h²) with no kink-induced transients.
pub fn bump_profile<R: Real>(s: R) -> R {
    let s = s.as_f64().clamp(0.0, 1.0);
    let e = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let (a, b) = (e(s), e(1.0 - s));
    R::of(PI * (1.0 - a / (a + b)))
}

/// A degree-±1 gauge map on a 3-torus: inside the ball of `radius` around
/// `center` the value rotates through an SU(2) block embedded in the top-left
/// corner, reaching −I₂ at the center; outside it is the identity.
pub fn bump_gauge_map<R: Real>(
    mesh: &Mesh<R>,
    n: usize,
    center: &[R],
    radius: R,
) -> Result<GaugeMap<R>> {
    require_dim(mesh, 3)?;
    if n < 2 {
        return Err(Error::RankMismatch(2, n));
    }
    let ext = mesh.extents();
    let extents = [ext[0], ext[1], ext[2]];
    let center = [center[0], center[1], center[2]];
    GaugeMap::from_fn(mesh, n, move |x| {
        // displacement with periodic wrap, so the ball is well-defined on T³
        let mut d = [R::zero(); 3];
        let mut rho2 = R::zero();
        for i in 0..3 {
            let li = extents[i];
            let mut di = x[i] - center[i];
            while di > li * R::of(0.5) {
                di -= li;
            }
            while di < -(li * R::of(0.5)) {
                di += li;
            }
            d[i] = di;
            rho2 += di * di;
        }
        let rho = rho2.sqrt();
        let mut entries = k::identity::<R>(n);
        if rho >= radius {
            return crate::lie::GroupElement::from_raw_unchecked(n, entries);
        }
        let f = bump_profile(rho / radius);
        let (cosf, sinf) = (f.cos(), f.sin());
        // unit direction; at the exact center sin f = 0 so any choice works
        let inv = if rho > R::zero() {
            R::one() / rho
        } else {
            R::zero()
        };
        let (n1, n2, n3) = (d[0] * inv, d[1] * inv, d[2] * inv);
        // cos f·I₂ + i sin f·(n̂·σ) in the top-left block
        entries[0] = C::new(cosf, sinf * n3);
        entries[1] = C::new(sinf * n2, sinf * n1);
        entries[n] = C::new(-(sinf * n2), sinf * n1);
        entries[n + 1] = C::new(cosf, -(sinf * n3));
        crate::lie::GroupElement::from_raw_unchecked(n, entries)
    })
}

/// Connection on a 4-dimensional cylinder ramping from zero at t = 0 to a
/// fixed helical spatial field at t = 1 (t = the interval axis).
///
/// The endpoint field is chosen so the bulk invariant ∫Tr(F∧F) and the
/// end-cap Chern–Simons value are both O(1); random trigonometric fields can
/// collapse to exact quadrature zeros on both sides, which would make a
/// transgression check vacuous.  The ramp is flat at both ends, so the
/// restrictions to the caps are exactly 0 and exactly the helical field.
pub fn ramped_cylinder_connection<R: Real>(mesh: &Mesh<R>, n: usize) -> Result<Connection<R>> {
    require_dim(mesh, 4)?;
    let axis = mesh.interval_axis().ok_or(Error::NoIntervalAxis)?;
    if axis != 0 {
        return Err(Error::InvalidMesh("interval axis must come first".into()));
    }
    if n < 2 {
        return Err(Error::RankMismatch(2, n));
    }
    let basis = crate::lie::AlgElement::<R>::basis(n);
    let (x_dir, y_dir) = (basis[0].clone(), basis[1].clone());
    let ext = mesh.extents();
    let extents = [ext[0], ext[1], ext[2], ext[3]];
    let tau = R::of(std::f64::consts::TAU);
    let field = FormField::sample(mesh, 1, n, move |pos, key| {
        let ramp = crate::gauge::smooth_ramp(pos[0] / extents[0]);
        let phase1 = tau * pos[1] / extents[1];
        let phase3 = tau * pos[3] / extents[3];
        let scaled = |m: &crate::lie::AlgElement<R>, s: R| m * (ramp * s);
        match key[0] {
            1 => scaled(&x_dir, phase3.cos()),
            2 => scaled(&x_dir, phase3.sin()),
            3 => scaled(&y_dir, phase1.sin()),
            _ => crate::lie::AlgElement::zero(n),
        }
    })?;
    Connection::new(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::fourier_test_form;
    use crate::gauge::{gauge_transform, pure_gauge};
    use crate::lie::AlgElement;

    fn observed_order(hs: &[f64], es: &[f64]) -> f64 {
        let m = hs.len();
        (es[m - 2] / es[m - 1]).ln() / (hs[m - 2] / hs[m - 1]).ln()
    }

    fn least_squares_order(hs: &[f64], es: &[f64]) -> f64 {
        let n = hs.len() as f64;
        let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
        let ys: Vec<f64> = es.iter().map(|e| e.ln()).collect();
        let xm = xs.iter().sum::<f64>() / n;
        let ym = ys.iter().sum::<f64>() / n;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
        let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
        num / den
    }

    fn bump(mesh: &Mesh<f64>, n: usize, center: [f64; 3], radius: f64) -> GaugeMap<f64> {
        bump_gauge_map(mesh, n, &center, radius).unwrap()
    }

    #[test]
    fn normalization_constants() {
        assert!((NORMALIZATIONS.q * 24.0 * PI.powi(3) - 1.0).abs() < 1e-15);
        assert!((NORMALIZATIONS.cs3_norm * 8.0 * PI.powi(2) - 1.0).abs() < 1e-15);
        assert!((NORMALIZATIONS.deg_norm * 24.0 * PI.powi(2) - 1.0).abs() < 1e-15);
        assert_eq!(NORMALIZATIONS.deg_norm, NORMALIZATIONS.sector_norm);
    }

    #[test]
    fn chern_simons_trivial_values() {
        let mesh = Mesh::<f64>::torus(&[6, 6, 6]).unwrap();
        let zero = Connection::zero(&mesh, 2).unwrap();
        assert_eq!(chern_simons3(&zero).unwrap().norm(), 0.0);
        // constant A = X dx: A∧F = 0 and A³ repeats dx
        let x = AlgElement::<f64>::basis(2).remove(0);
        let a = Connection::new(
            FormField::sample(&mesh, 1, 2, |_, key| {
                if key == [0] {
                    x.clone()
                } else {
                    AlgElement::zero(2)
                }
            })
            .unwrap(),
        )
        .unwrap();
        assert!(chern_simons3(&a).unwrap().norm() < 1e-14);
        // dimension guard
        let flat2 = Mesh::<f64>::torus(&[6, 6]).unwrap();
        assert!(matches!(
            chern_simons3(&Connection::zero(&flat2, 2).unwrap()),
            Err(Error::WrongDimension { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn degree_of_constant_map_vanishes() {
        let mesh = Mesh::<f64>::torus(&[6, 6, 6]).unwrap();
        assert_eq!(map_degree(&GaugeMap::identity(&mesh, 3)).unwrap().norm(), 0.0);
    }

    #[test]
    fn profile_is_monotone_with_unique_preimage() {
        // the radial angle decreases strictly from π to 0, so a regular value
        // α ∈ (0,π) is hit at exactly one radius — the preimage-count oracle
        assert!((bump_profile(0.0_f64) - PI).abs() < 1e-15);
        assert!(bump_profile(1.0_f64).abs() < 1e-15);
        // strict decrease away from the machine-flat tails (the exp-based
        // step is numerically constant below s ≈ 0.03 — by design)
        let samples = 500;
        let mut prev = bump_profile(0.05_f64);
        for i in 1..=samples {
            let s = 0.05 + 0.90 * i as f64 / samples as f64;
            let v = bump_profile(s);
            assert!(v < prev, "profile not strictly decreasing at s={s}");
            prev = v;
        }
        // bisection for the α = π/2 preimage radius; uniqueness from
        // monotonicity makes the count exactly one
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if bump_profile(mid) > PI / 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((bump_profile(root) - PI / 2.0).abs() < 1e-12);
        assert!(root > 0.0 && root < 1.0);
    }

    #[test]
    fn bump_degree_is_a_unit() {
        // preimage count 1 ⇒ |deg| = 1; the sign is the orientation audit.
        // The stencil value carries a scale-invariant O((h/r)²) constant, so
        // the integer gate is checked on the h² extrapolation of the two
        // finest grids (16, 32); the raw finest value is tracked for decay.
        let mut vals = Vec::new();
        for counts in [16usize, 32] {
            let mesh = Mesh::<f64>::torus(&[counts; 3]).unwrap();
            let g = bump(&mesh, 2, [0.5, 0.5, 0.5], 0.5);
            vals.push(map_degree(&g).unwrap().re);
        }
        let extrapolated = (4.0 * vals[1] - vals[0]) / 3.0;
        assert!(
            (extrapolated - crate::conventions::DEGREE_SIGN).abs() < 1e-2,
            "extrapolated deg = {extrapolated}, raw {vals:?}"
        );
        let (e16, e32) = (
            (vals[0] - crate::conventions::DEGREE_SIGN).abs(),
            (vals[1] - crate::conventions::DEGREE_SIGN).abs(),
        );
        assert!(e32 < 0.4 * e16, "raw errors not contracting: {e16} -> {e32}");
    }

    #[test]
    fn degree_converges_to_the_integer() {
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for counts in [16usize, 32, 48] {
            let mesh = Mesh::<f64>::torus(&[counts; 3]).unwrap();
            let g = bump(&mesh, 2, [0.5, 0.5, 0.5], 0.5);
            let deg = map_degree(&g).unwrap();
            hs.push(mesh.spacing(0));
            errs.push((deg.re - crate::conventions::DEGREE_SIGN).abs());
        }
        let slope = observed_order(&hs, &errs);
        assert!(slope > 1.9, "order {slope}, errors {errs:?}");
    }

    #[test]
    fn degree_additivity() {
        // disjoint supports: the integrands literally tile, exact additivity
        let mesh = Mesh::<f64>::torus(&[16, 16, 16]).unwrap();
        let g = bump(&mesh, 2, [0.3, 0.3, 0.3], 0.2);
        let f = bump(&mesh, 2, [0.75, 0.75, 0.75], 0.2);
        let gf = g.compose(&f).unwrap();
        let lhs = map_degree(&gf).unwrap();
        let rhs = map_degree(&g).unwrap() + map_degree(&f).unwrap();
        assert!((lhs - rhs).norm() < 1e-12, "disjoint defect {}", (lhs - rhs).norm());
        // overlapping supports: additivity is a continuum identity, O(h²)
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for counts in [36usize, 54, 81] {
            let mesh = Mesh::<f64>::torus(&[counts; 3]).unwrap();
            let g = bump(&mesh, 2, [0.36, 0.5, 0.5], 0.44);
            let f = bump(&mesh, 2, [0.64, 0.5, 0.5], 0.44);
            let gf = g.compose(&f).unwrap();
            let resid = (map_degree(&gf).unwrap()
                - map_degree(&g).unwrap()
                - map_degree(&f).unwrap())
            .norm();
            hs.push(mesh.spacing(0));
            errs.push(resid);
        }
        let slope = observed_order(&hs, &errs);
        assert!(slope > 1.9, "order {slope}, errors {errs:?}");
    }

    #[test]
    fn pure_gauge_chern_simons_is_minus_degree() {
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for counts in [16usize, 32, 48] {
            let mesh = Mesh::<f64>::torus(&[counts; 3]).unwrap();
            let g = bump(&mesh, 2, [0.5, 0.5, 0.5], 0.5);
            let a = pure_gauge(&g).unwrap();
            let cs = chern_simons3(&a).unwrap();
            let target = crate::conventions::CS_DEGREE_SIGN * crate::conventions::DEGREE_SIGN;
            hs.push(mesh.spacing(0));
            errs.push((cs.re - target).abs());
        }
        let slope = observed_order(&hs, &errs);
        assert!(slope > 1.9, "order {slope}, errors {errs:?}");
    }

    #[test]
    fn quantization_shift_under_gauge_action() {
        // CS₍₃₎(g·A) − CS₍₃₎(A) → s_cs·deg g under refinement
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for counts in [16usize, 32, 48] {
            let mesh = Mesh::<f64>::torus(&[counts; 3]).unwrap();
            let a = Connection::new(
                fourier_test_form(&mesh, 1, 2, 31).unwrap().scaled(0.4),
            )
            .unwrap();
            let g = bump(&mesh, 2, [0.5, 0.5, 0.5], 0.5);
            let moved = gauge_transform(&a, &g).unwrap();
            let shift = chern_simons3(&moved).unwrap() - chern_simons3(&a).unwrap();
            let target =
                crate::conventions::CS_DEGREE_SIGN * crate::conventions::DEGREE_SIGN;
            hs.push(mesh.spacing(0));
            errs.push((shift.re - target).abs().max(shift.im.abs()));
        }
        let slope = observed_order(&hs, &errs);
        assert!(slope > 1.9, "order {slope}, errors {errs:?}");
    }

    #[test]
    fn sector_charge_values() {
        let mesh = Mesh::<f64>::torus(&[16, 16, 16]).unwrap();
        // zero connection is flat with zero charge
        assert_eq!(
            sector_charge(&Connection::zero(&mesh, 2).unwrap()).unwrap().norm(),
            0.0
        );
        // generic connections are rejected with the residual attached
        let rough = Connection::new(fourier_test_form(&mesh, 1, 2, 33).unwrap()).unwrap();
        assert!(matches!(sector_charge(&rough), Err(Error::NotFlat { .. })));
        // constant commuting-valued flat connection: the antisymmetrized
        // integrand cancels exactly; reported value is 0 (flagged upstream)
        let x = AlgElement::<f64>::basis(3).remove(1);
        let cartan = Connection::new(
            FormField::sample(&mesh, 1, 3, |_, _| x.clone()).unwrap(),
        )
        .unwrap();
        let q = sector_charge(&cartan).unwrap();
        assert!(q.norm() < 1e-12, "commuting constants give {q:?}");
    }

    #[test]
    fn sector_charge_of_pure_gauge_counts_degree() {
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for counts in [16usize, 32, 48] {
            let mesh = Mesh::<f64>::torus(&[counts; 3]).unwrap();
            let g = bump(&mesh, 2, [0.5, 0.5, 0.5], 0.5);
            let a = pure_gauge(&g).unwrap();
            let q = sector_charge(&a).unwrap();
            // tr((g⁻¹dg)³) = tr((dg·g⁻¹)³) by cyclicity, exactly, node by node
            let d = map_degree(&g).unwrap();
            let exact = (q - crate::conventions::SECTOR_DEGREE_SIGN * d).norm();
            assert!(exact < 1e-12, "charge should equal the stencil degree: {exact}");
            let target =
                crate::conventions::SECTOR_DEGREE_SIGN * crate::conventions::DEGREE_SIGN;
            hs.push(mesh.spacing(0));
            errs.push((q.re - target).abs());
        }
        let slope = observed_order(&hs, &errs);
        assert!(slope > 1.9, "order {slope}, errors {errs:?}");
    }

    #[test]
    fn second_chern_trivial_and_flat_extension() {
        let mesh = Mesh::<f64>::torus(&[5, 4, 4, 4]).unwrap();
        assert_eq!(
            second_chern(&Connection::zero(&mesh, 2).unwrap()).unwrap().norm(),
            0.0
        );
        // flat extension over a cylinder: the O(h²) curvature residuals pair
        // antisymmetrically and the integral cancels to the roundoff floor,
        // far below the O(h²) bound the contract asks for
        let cyl = Mesh::<f64>::cylinder(&[12; 4]).unwrap();
        let slice = Mesh::<f64>::torus(&[12; 3]).unwrap();
        let xi = fourier_test_form(&slice, 0, 2, 35).unwrap();
        let a = crate::gauge::flat_extend_exp(&cyl, &xi, crate::gauge::smooth_ramp).unwrap();
        assert!(second_chern(&a).unwrap().norm() < 1e-11);
        // a null-homotopic endpoint map has degree 0, so both end caps sit at
        // the roundoff floor as well (measured ~1e−14)
        let boundary = boundary_chern_simons3(&a).unwrap();
        assert!(boundary.norm() < 1e-8, "boundary CS {boundary:?}");
    }

    #[test]
    fn cs_form_and_pairing() {
        let mesh = Mesh::<f64>::torus(&[5, 4, 4, 4]).unwrap();
        let zero = Connection::zero(&mesh, 3).unwrap();
        assert_eq!(cs_form(&zero).unwrap().norm_linf(), 0.0);
        let a =
            Connection::new(fourier_test_form(&mesh, 1, 3, 36).unwrap().scaled(3.0)).unwrap();
        let b = fourier_test_form(&mesh, 1, 3, 21).unwrap();
        // the section is exactly quadratic-plus-cubic in the connection, so
        // three scalings overdetermine it: predict t=1/4 from t=1 and t=1/2
        let pair = |t: f64| {
            let at = Connection::new(a.field().scaled(t)).unwrap();
            theta_cs(&at, &b).unwrap()
        };
        let (p1, p05, p025) = (pair(1.0), pair(0.5), pair(0.25));
        let predicted = (p05.scale(12.0) - p1).scale(1.0 / 32.0);
        assert!(
            (p025 - predicted).norm() <= 1e-13 * (1.0 + p1.norm()),
            "split mismatch: {p025:?} vs {predicted:?}"
        );
        // non-vacuous pairing, and the value sits on the imaginary axis
        assert!(p1.norm() > 1e-7, "pairing collapsed: {p1:?}");
        assert!(p1.re.abs() <= 1e-10 * (1.0 + p1.norm()), "real leak: {p1:?}");
        // pairing the section with the connection itself dies by graded
        // cyclicity (tr A⁴ = 0, tr[F, A²] = 0), discretely exactly
        let self_pair = theta_cs(&a, a.field()).unwrap().norm();
        assert!(self_pair < 1e-12, "self-pairing {self_pair}");
        // θ^cs is linear in the direction
        let u = fourier_test_form(&mesh, 1, 3, 37).unwrap();
        let v = fourier_test_form(&mesh, 1, 3, 38).unwrap();
        let lin = theta_cs(&a, &u.scaled(0.7).add(&v.scaled(-1.3)).unwrap()).unwrap();
        let split = theta_cs(&a, &u).unwrap().scale(0.7) - theta_cs(&a, &v).unwrap().scale(1.3);
        assert!((lin - split).norm() < 1e-12 * (1.0 + lin.norm()));
        assert_eq!(theta_cs(&zero, &u).unwrap().norm(), 0.0);
        assert_eq!(
            theta_cs(&a, &FormField::zero(&mesh, 1, 3).unwrap()).unwrap().norm(),
            0.0
        );
    }

    #[test]
    fn transgression_balances_boundary_terms() {
        // both sides of ∫Tr(F∧F) = 8π²·Σ± CS₃ are O(1) for the ramped
        // helical fixture; the residual contracts at second order or better
        // (observed ≈ 3.5 — the leading quadrature defects of the bulk and
        // boundary quadratures cancel against each other for this fixture)
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        let mut lhs_abs = 0.0f64;
        for counts in [8usize, 16, 32] {
            let cyl = Mesh::<f64>::cylinder(&[counts; 4]).unwrap();
            let a = ramped_cylinder_connection(&cyl, 3).unwrap();
            let lhs = second_chern(&a).unwrap().re;
            let rhs = boundary_chern_simons3(&a).unwrap().re;
            lhs_abs = lhs.abs();
            hs.push(cyl.spacing(0));
            errs.push((lhs - 8.0 * PI.powi(2) * rhs).abs());
        }
        assert!(lhs_abs > 1.0, "fixture collapsed to a trivial identity");
        let lsq = least_squares_order(&hs, &errs);
        let pair = observed_order(&hs, &errs);
        assert!(lsq > 1.9, "least-squares order {lsq}, errors {errs:?}");
        assert!(pair > 1.9, "finest-pair order {pair}, errors {errs:?}");
    }

    #[test]
    fn flat_derivative_of_cs_decays() {
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for counts in [16usize, 32, 48] {
            let mesh = Mesh::<f64>::torus(&[counts; 3]).unwrap();
            let g = bump(&mesh, 2, [0.5, 0.5, 0.5], 0.5);
            let a = pure_gauge(&g).unwrap();
            let xi = fourier_test_form(&mesh, 0, 2, 39).unwrap();
            let dir = crate::gauge::infinitesimal_action(&a, &xi).unwrap();
            hs.push(mesh.spacing(0));
            errs.push(cs3_flat_derivative(&a, &dir).unwrap().norm());
        }
        let slope = observed_order(&hs, &errs);
        assert!(slope > 1.9, "order {slope}, errors {errs:?}");
    }
}
