//! Gap-state densities and their occupied-charge integrals.
//!
//! Energies are referenced to the conduction band edge: `e = E - E_C`, so
//! every in-gap state has `e < 0`.

use super::{DeviceParams, PhysicalConstants};
use crate::numeric::integrate_adaptive;
use crate::scalar::Scalar;
use crate::Result;

/// Lower edge of the energy quadrature window, eV relative to E_C. Deep
/// enough that every admissible defect profile has decayed below 1e-6 of
/// its peak.
pub const QUAD_E_MIN: f64 = -1.5;

/// Relative tolerance for the charge integrals (double precision; wider
/// scalars fall back to a multiple of their epsilon).
pub const QUAD_REL_TOL: f64 = 1e-9;

/// Fraction of the full trap capacity below which charge is not worth
/// resolving; sets the absolute tolerance floor of the quadrature.
const CAPACITY_FLOOR: f64 = 1e-15;

fn quad_rel_tol<S: Scalar>() -> S {
    S::of(QUAD_REL_TOL).max(S::epsilon() * S::of(100.0))
}

/// Donor-like gap states: a Gaussian centered `e_d_mid` below the band
/// edge, truncated to the gap (`e < 0`). eV⁻¹cm⁻².
pub fn donor_density<S: Scalar>(e: S, p: &DeviceParams<S>) -> S {
    if e >= S::zero() {
        return S::zero();
    }
    let d = (e + p.e_d_mid) / p.sigma_d;
    p.n_d0 * (-d * d / S::of(2.0)).exp()
}

/// Acceptor-like band tail: exponential decay from the band edge into the
/// gap, zero above it. eV⁻¹cm⁻².
pub fn acceptor_density<S: Scalar>(e: S, p: &DeviceParams<S>) -> S {
    if e >= S::zero() {
        return S::zero();
    }
    p.n_a0 * (e / p.sigma_a).exp()
}

/// Fermi-Dirac occupancy of a state at energy `e` for Fermi level `ef`.
pub fn fermi_occupancy<S: Scalar>(e: S, ef: S, k_b_t: S) -> S {
    let x = (e - ef) / k_b_t;
    // exp overflows to +inf for large x; 1/(1+inf) = 0 is the right limit.
    S::one() / (S::one() + x.exp())
}

/// Fermi-Dirac vacancy `1 - f`. Computed directly as a sigmoid of the
/// negated argument; the naive `1 - f` cancels catastrophically once the
/// occupancy saturates.
pub fn fermi_vacancy<S: Scalar>(e: S, ef: S, k_b_t: S) -> S {
    let x = (ef - e) / k_b_t;
    S::one() / (S::one() + x.exp())
}

/// Free-carrier sheet density for a 2D band: `n_c · ln(1 + exp(ef/kT))`.
/// Strictly increasing in `ef`; exponential below the band edge, linear
/// (up to log corrections) above it.
pub fn free_carrier_density<S: Scalar>(ef: S, p: &DeviceParams<S>, c: &PhysicalConstants<S>) -> S {
    p.n_c * (ef / c.k_b_t).softplus()
}

/// Breakpoints seeding the adaptive quadrature: the Fermi transition window
/// around `ef` plus the donor peak.
fn energy_breakpoints<S: Scalar>(ef: S, p: &DeviceParams<S>, c: &PhysicalConstants<S>) -> [S; 5] {
    let w = S::of(12.0) * c.k_b_t;
    [ef - w, ef, ef + w, -p.e_d_mid - p.sigma_d, -p.e_d_mid + p.sigma_d]
}

/// Sheet charge trapped in acceptor states, cm⁻²: occupied band-tail
/// density integrated over the gap window. Nondecreasing in `ef`.
///
/// The integral runs over the open gap interval, so it uses the continuous
/// in-gap profile; the truncation at the band edge is a measure-zero
/// endpoint and must not feed a jump into the quadrature.
pub fn trapped_acceptor_charge<S: Scalar>(
    ef: S,
    p: &DeviceParams<S>,
    c: &PhysicalConstants<S>,
) -> Result<S> {
    if p.n_a0 == S::zero() {
        return Ok(S::zero());
    }
    let f = |e: S| p.n_a0 * (e / p.sigma_a).exp() * fermi_occupancy(e, ef, c.k_b_t);
    integrate_adaptive(
        &f,
        S::of(QUAD_E_MIN),
        S::zero(),
        quad_rel_tol::<S>(),
        p.n_a0 * p.sigma_a * S::of(CAPACITY_FLOOR),
        &energy_breakpoints(ef, p, c),
    )
}

/// Sheet charge contributed by ionized (empty) donors, cm⁻². Nonincreasing
/// in `ef`, bounded by the full donor integral.
pub fn ionized_donor_charge<S: Scalar>(
    ef: S,
    p: &DeviceParams<S>,
    c: &PhysicalConstants<S>,
) -> Result<S> {
    if p.n_d0 == S::zero() {
        return Ok(S::zero());
    }
    let f = |e: S| {
        let d = (e + p.e_d_mid) / p.sigma_d;
        p.n_d0 * (-d * d / S::of(2.0)).exp() * fermi_vacancy(e, ef, c.k_b_t)
    };
    integrate_adaptive(
        &f,
        S::of(QUAD_E_MIN),
        S::zero(),
        quad_rel_tol::<S>(),
        p.n_d0 * p.sigma_d * S::of(CAPACITY_FLOOR),
        &energy_breakpoints(ef, p, c),
    )
}
