//! Canonical structure on the cotangent space of connections: the
//! tautological 1-form θ, the exact 2-form σ = d̃θ, the Yang–Mills
//! Hamiltonian with its Hamiltonian vector field, moment maps for the based
//! gauge action, and the two-dimensional surface pairing.
//!
//! A point is (A, λ) — a connection plus a momentum (m−1)-form; a tangent is
//! (a, α). All functionals here are polynomial in the fields, so central
//! finite differences in a scalar step are exact on the bilinear ones and
//! O(t²)-accurate (O(t⁴) after one Richardson pass) on the quartic
//! Hamiltonian; every identity check can therefore report an analytic value,
//! an FD value, and their gap.
//!
//! Sign conventions, fixed once and audited by tests:
//! σ(v₁,v₂) = ∫tr(a₂∧α₁ − a₁∧α₂), the exterior derivative of θ(v) = ∫tr(a∧λ)
//! on constant directions. A Hamiltonian vector field satisfies
//! σ(X_f, ·) = d̃f. With these choices X_H = (−⋆λ, d_A⋆F_A) as quoted, while
//! the moment direction for J^ξ = ∫tr(d_Aξ∧λ) is the *negated* infinitesimal
//! gauge flow: X_J = −(d_Aξ, [λ,ξ]) = (−d_Aξ, [ξ,λ]). The flow itself is
//! pinned independently by differencing the finite gauge action.

use crate::error::{Error, Result};
use crate::form::{integral_wedge_trace, FormField};
use crate::gauge::{covariant_d, curvature, Connection};
use crate::mesh::Mesh;
use crate::scalar::{C, Real};

/// Base point (A, λ): a connection together with a momentum (m−1)-form of
/// the same rank on the same mesh.
#[derive(Debug, Clone)]
pub struct CotangentPoint<R: Real> {
    a: Connection<R>,
    lambda: FormField<R>,
}

impl<R: Real> CotangentPoint<R> {
    pub fn new(a: Connection<R>, lambda: FormField<R>) -> Result<Self> {
        let m = a.mesh().dim();
        if lambda.degree() != m - 1 {
            return Err(Error::DegreeMismatch(lambda.degree(), m - 1));
        }
        if a.mesh() != lambda.mesh() {
            return Err(Error::MeshMismatch("point components on different meshes".into()));
        }
        if a.rank() != lambda.rank() {
            return Err(Error::RankMismatch(a.rank(), lambda.rank()));
        }
        Ok(Self { a, lambda })
    }

    /// Zero section over the zero connection.
    pub fn zero(mesh: &Mesh<R>, n: usize) -> Result<Self> {
        Self::new(
            Connection::zero(mesh, n)?,
            FormField::zero(mesh, mesh.dim() - 1, n)?,
        )
    }

    pub fn connection(&self) -> &Connection<R> {
        &self.a
    }

    pub fn momentum(&self) -> &FormField<R> {
        &self.lambda
    }

    pub fn mesh(&self) -> &Mesh<R> {
        self.a.mesh()
    }

    pub fn rank(&self) -> usize {
        self.a.rank()
    }

    /// The point (A + t·a, λ + t·α); the workhorse of every FD check.
    pub fn translate(&self, v: &CotangentTangent<R>, t: R) -> Result<Self> {
        Self::new(
            Connection::new(self.a.field().add(&v.a.scaled(t))?)?,
            self.lambda.add(&v.alpha.scaled(t))?,
        )
    }
}

/// Tangent (a, α) at a cotangent point: a 1-form and an (m−1)-form.
#[derive(Debug, Clone)]
pub struct CotangentTangent<R: Real> {
    a: FormField<R>,
    alpha: FormField<R>,
}

impl<R: Real> CotangentTangent<R> {
    pub fn new(a: FormField<R>, alpha: FormField<R>) -> Result<Self> {
        if a.degree() != 1 {
            return Err(Error::DegreeOutOfRange {
                degree: a.degree(),
                dim: a.mesh().dim(),
            });
        }
        let m = a.mesh().dim();
        if alpha.degree() != m - 1 {
            return Err(Error::DegreeMismatch(alpha.degree(), m - 1));
        }
        if a.mesh() != alpha.mesh() {
            return Err(Error::MeshMismatch("tangent components on different meshes".into()));
        }
        if a.rank() != alpha.rank() {
            return Err(Error::RankMismatch(a.rank(), alpha.rank()));
        }
        Ok(Self { a, alpha })
    }

    pub fn zero(mesh: &Mesh<R>, n: usize) -> Result<Self> {
        Self::new(
            FormField::zero(mesh, 1, n)?,
            FormField::zero(mesh, mesh.dim() - 1, n)?,
        )
    }

    pub fn a(&self) -> &FormField<R> {
        &self.a
    }

    pub fn alpha(&self) -> &FormField<R> {
        &self.alpha
    }

    pub fn scaled(&self, s: R) -> Self {
        Self {
            a: self.a.scaled(s),
            alpha: self.alpha.scaled(s),
        }
    }

    /// The Hodge partner (⋆α, ⋆a) used by the non-degeneracy pairing.
    pub fn star_partner(&self) -> Self {
        Self {
            a: self.alpha.hodge_star(),
            alpha: self.a.hodge_star(),
        }
    }
}

fn same_mesh<R: Real>(pt: &CotangentPoint<R>, v: &CotangentTangent<R>) -> Result<()> {
    if pt.mesh() != v.a.mesh() {
        return Err(Error::MeshMismatch("tangent not over the base point".into()));
    }
    Ok(())
}

/// Tautological 1-form: θ_{(A,λ)}(a,α) = ∫tr(a∧λ). Depends only on the
/// a-component of the tangent.
pub fn theta_eval<R: Real>(pt: &CotangentPoint<R>, v: &CotangentTangent<R>) -> Result<C<R>> {
    same_mesh(pt, v)?;
    integral_wedge_trace(&v.a, &pt.lambda)
}

/// Canonical 2-form σ(v₁,v₂) = ∫tr(a₂∧α₁ − a₁∧α₂); antisymmetric exactly
/// (the assembly mirrors, it does not recompute).
pub fn sigma_eval<R: Real>(
    pt: &CotangentPoint<R>,
    v1: &CotangentTangent<R>,
    v2: &CotangentTangent<R>,
) -> Result<C<R>> {
    same_mesh(pt, v1)?;
    same_mesh(pt, v2)?;
    Ok(integral_wedge_trace(&v2.a, &v1.alpha)? - integral_wedge_trace(&v1.a, &v2.alpha)?)
}

/// |FD exterior derivative of θ on constant directions − σ(v₁,v₂)|.
///
/// θ is linear in λ and independent of A, so the central difference is exact
/// up to roundoff for every step t; the residual stays at the floor instead
/// of scaling like O(t²).
pub fn sigma_is_dtheta_check<R: Real>(
    pt: &CotangentPoint<R>,
    v1: &CotangentTangent<R>,
    v2: &CotangentTangent<R>,
    t: R,
) -> Result<R> {
    let d1 = {
        let plus = theta_eval(&pt.translate(v1, t)?, v2)?;
        let minus = theta_eval(&pt.translate(v1, -t)?, v2)?;
        (plus - minus).scale((R::of(2.0) * t).recip())
    };
    let d2 = {
        let plus = theta_eval(&pt.translate(v2, t)?, v1)?;
        let minus = theta_eval(&pt.translate(v2, -t)?, v1)?;
        (plus - minus).scale((R::of(2.0) * t).recip())
    };
    Ok((d1 - d2 - sigma_eval(pt, v1, v2)?).norm())
}

/// H(A,λ) = ½∫tr(F∧⋆F) + ½∫tr(λ∧⋆λ), kept with the literal trace: the value
/// is negative-definite, and −H is the usual energy.
pub fn ym_hamiltonian<R: Real>(pt: &CotangentPoint<R>) -> Result<C<R>> {
    let f = curvature(&pt.a)?;
    let field_part = integral_wedge_trace(&f, &f.hodge_star())?;
    let momentum_part = integral_wedge_trace(&pt.lambda, &pt.lambda.hodge_star())?;
    Ok((field_part + momentum_part).scale(R::of(0.5)))
}

/// Analytic directional derivative of the Hamiltonian:
/// d̃H(a,α) = ∫tr(d_A a∧⋆F) + ∫tr(α∧⋆λ).
pub fn ym_differential<R: Real>(
    pt: &CotangentPoint<R>,
    v: &CotangentTangent<R>,
) -> Result<C<R>> {
    same_mesh(pt, v)?;
    let f = curvature(&pt.a)?;
    let da = covariant_d(&pt.a, &v.a)?;
    Ok(integral_wedge_trace(&da, &f.hodge_star())?
        + integral_wedge_trace(&v.alpha, &pt.lambda.hodge_star())?)
}

/// Hamiltonian vector field of H: X_H = (−⋆λ, d_A⋆F_A), so that
/// σ(X_H, ·) = d̃H up to the O(h²) summation-by-parts defect.
pub fn ym_ham_vector_field<R: Real>(pt: &CotangentPoint<R>) -> Result<CotangentTangent<R>> {
    let star_f = curvature(&pt.a)?.hodge_star();
    CotangentTangent::new(
        pt.lambda.hodge_star().scaled(-R::one()),
        covariant_d(&pt.a, &star_f)?,
    )
}

/// Moment value J^ξ(A,λ) = ∫tr(d_Aξ∧λ) for a 0-form ξ.
pub fn moment_j<R: Real>(pt: &CotangentPoint<R>, xi: &FormField<R>) -> Result<C<R>> {
    if xi.degree() != 0 {
        return Err(Error::DegreeOutOfRange {
            degree: xi.degree(),
            dim: xi.mesh().dim(),
        });
    }
    let dxi = covariant_d(&pt.a, xi)?;
    integral_wedge_trace(&dxi, &pt.lambda)
}

/// Infinitesimal gauge flow on the cotangent space: (d_Aξ, [λ,ξ]).
///
/// This is the t-derivative of (A,λ) ↦ (g⁻¹Ag + g⁻¹dg, g⁻¹λg) along
/// g = exp(tξ); the test suite pins it against that finite action by
/// differencing. The Hamiltonian direction of J^ξ is its negation:
/// σ(−flow, ·) = d̃J^ξ.
pub fn gauge_flow_direction<R: Real>(
    pt: &CotangentPoint<R>,
    xi: &FormField<R>,
) -> Result<CotangentTangent<R>> {
    if xi.degree() != 0 {
        return Err(Error::DegreeOutOfRange {
            degree: xi.degree(),
            dim: xi.mesh().dim(),
        });
    }
    let dxi = covariant_d(&pt.a, xi)?;
    // [λ, ξ] = λ∧ξ − ξ∧λ for a 0-form ξ
    let bracket = pt.lambda.wedge(xi)?.sub(&xi.wedge(&pt.lambda)?)?;
    CotangentTangent::new(dxi, bracket)
}

/// Hamiltonian direction of the moment value: X_J = (−d_Aξ, [ξ,λ]), the
/// negated gauge flow, satisfying σ(X_J, ·) = d̃J^ξ exactly (all terms are
/// bilinear, so the identity has no discretization defect).
pub fn moment_direction<R: Real>(
    pt: &CotangentPoint<R>,
    xi: &FormField<R>,
) -> Result<CotangentTangent<R>> {
    Ok(gauge_flow_direction(pt, xi)?.scaled(-R::one()))
}

/// Universal moment map J₀(A,λ) = d_Aλ, an m-form.
pub fn moment_j0<R: Real>(pt: &CotangentPoint<R>) -> Result<FormField<R>> {
    covariant_d(&pt.a, &pt.lambda)
}

/// Surface pairing on a 2-mesh: 2∫tr(b∧a).
pub fn atiyah_bott_omega<R: Real>(a: &FormField<R>, b: &FormField<R>) -> Result<C<R>> {
    if a.mesh().dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: a.mesh().dim(),
        });
    }
    if a.degree() != 1 || b.degree() != 1 {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    Ok(integral_wedge_trace(b, a)?.scale(R::of(2.0)))
}

/// Central difference of a scalar functional along a tangent direction.
pub fn fd_directional<R: Real, F>(
    f: F,
    pt: &CotangentPoint<R>,
    v: &CotangentTangent<R>,
    t: R,
) -> Result<C<R>>
where
    F: Fn(&CotangentPoint<R>) -> Result<C<R>>,
{
    let plus = f(&pt.translate(v, t)?)?;
    let minus = f(&pt.translate(v, -t)?)?;
    Ok((plus - minus).scale((R::of(2.0) * t).recip()))
}

/// Richardson-extrapolated central difference: O(t⁴) instead of O(t²).
pub fn fd_directional_refined<R: Real, F>(
    f: F,
    pt: &CotangentPoint<R>,
    v: &CotangentTangent<R>,
    t: R,
) -> Result<C<R>>
where
    F: Fn(&CotangentPoint<R>) -> Result<C<R>>,
{
    let coarse = fd_directional(&f, pt, v, t)?;
    let fine = fd_directional(&f, pt, v, t * R::of(0.5))?;
    Ok((fine.scale(R::of(4.0)) - coarse).scale(R::of(1.0 / 3.0)))
}
