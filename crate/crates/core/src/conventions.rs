//! Global sign conventions.
//!
//! Orientation choices (row-major axis order, wedge ordering, the exp(−hA)
//! transport) fix a handful of signs that the formulas leave open. Each is
//! measured once — by the degree oracle or a convention audit at high
//! resolution — then frozen here and asserted everywhere. Reports echo all
//! of them so downstream consumers never have to re-derive an orientation.

/// Measured degree of the reference bump map (center (½,½,½), outward radial
/// axis, angle falling from π to 0): the orientation audit for the volume
/// form, measured at counts 48–64 across radii 0.42/0.46.
pub const DEGREE_SIGN: f64 = -1.0;

/// s_cs in CS₍₃₎(g·A) = CS₍₃₎(A) + s_cs·deg g. Analytic for pure gauge:
/// CS₍₃₎(g⁻¹dg) = −(1/24π²)∫tr((g⁻¹dg)³) = −deg g by conjugation invariance
/// of the integrand.
pub const CS_DEGREE_SIGN: f64 = -1.0;

/// s_q in sector_charge(pure_gauge(g)) = s_q·deg g; +1 by the same
/// conjugation identity without the −⅓ weight.
pub const SECTOR_DEGREE_SIGN: f64 = 1.0;

/// s_σ in σ((a,α),(⋆α,⋆a)) = s_σ·(‖α‖² − ‖a‖²), fixed by the a = 0 case of
/// the canonical-pairing audit.
pub const SIGMA_SIGN: f64 = -1.0;
