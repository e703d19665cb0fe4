//! Gate charge balance: solving for the surface Fermi level.

use super::defects::{
    free_carrier_density, ionized_donor_charge, trapped_acceptor_charge, QUAD_E_MIN,
};
use super::{DeviceParams, PhysicalConstants};
use crate::numeric::{brent_root, PiecewiseChebyshev};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Search bracket for the surface Fermi level, eV relative to E_C.
pub const EF_MIN: f64 = -2.0;
pub const EF_MAX: f64 = 2.0;

const EF_XTOL: f64 = 1e-11;

/// Result of a charge-balance solve. `depleted` marks gate drives so
/// negative that even fully ionized donors cannot supply the demanded
/// charge; the Fermi level is pinned at the bracket floor there and the
/// channel is effectively empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSolution<S> {
    pub ef: S,
    pub depleted: bool,
}

fn balance_root<S: Scalar>(
    target: S,
    mut charge_sum: impl FnMut(S) -> S,
) -> Result<SurfaceSolution<S>> {
    let lo = S::of(EF_MIN);
    let hi = S::of(EF_MAX);
    // g is strictly decreasing in ef, so the root (if any) is unique.
    let g_lo = target - charge_sum(lo);
    if g_lo <= S::zero() {
        return Ok(SurfaceSolution { ef: lo, depleted: true });
    }
    let g_hi = target - charge_sum(hi);
    if g_hi >= S::zero() {
        return Err(Error::ModelDomain(format!(
            "charge balance has no sign change in ef ∈ [{EF_MIN}, {EF_MAX}] (target {target} cm^-2)"
        )));
    }
    let ef = brent_root(
        |ef| target - charge_sum(ef),
        lo,
        hi,
        g_lo,
        g_hi,
        S::of(EF_XTOL),
        200,
    )?;
    Ok(SurfaceSolution { ef, depleted: false })
}

/// Solve the gate charge balance at one gate voltage with full-accuracy
/// quadrature for the trap charges:
///
/// `c_ox (vgs - v_fb)/q = n_free(ef) + Q_acceptor(ef) - Q_donor(ef)`
pub fn solve_surface_ef<S: Scalar>(
    vgs: S,
    p: &DeviceParams<S>,
    c: &PhysicalConstants<S>,
) -> Result<SurfaceSolution<S>> {
    if !vgs.is_finite() {
        return Err(Error::Input(format!("non-finite gate voltage {vgs}")));
    }
    let target = c.c_ox * (vgs - c.v_fb) / c.q;
    let mut err = None;
    let sol = balance_root(target, |ef| {
        let qa = trapped_acceptor_charge(ef, p, c).unwrap_or_else(|e| {
            err = Some(e);
            S::zero()
        });
        let qd = ionized_donor_charge(ef, p, c).unwrap_or_else(|e| {
            err = Some(e);
            S::zero()
        });
        free_carrier_density(ef, p, c) + qa - qd
    });
    match err {
        Some(e) => Err(e),
        None => sol,
    }
}

/// Per-device electrostatics with the trap-charge integrals tabulated once
/// as piecewise Chebyshev series over the ef bracket.
///
/// Building costs a few thousand exact quadratures; evaluating afterwards
/// is a Clenshaw recurrence, which is what makes dense curve simulation
/// affordable. Interpolation error is held near 1e-9 of the trap capacity,
/// far below the 1e-6 relative residual contract of the balance solve.
#[derive(Debug, Clone)]
pub struct ChargeModel<S> {
    params: DeviceParams<S>,
    constants: PhysicalConstants<S>,
    qa: Option<PiecewiseChebyshev<S>>,
    qd: Option<PiecewiseChebyshev<S>>,
}

const CHEB_PANELS: usize = 10;
const CHEB_DEGREE: usize = 64;

impl<S: Scalar> ChargeModel<S> {
    pub fn new(params: DeviceParams<S>, constants: PhysicalConstants<S>) -> Result<Self> {
        params.validate()?;
        constants.validate()?;
        // Pad the fit interval so panel-edge evaluation stays interior.
        let lo = S::of(EF_MIN - 0.05);
        let hi = S::of(EF_MAX + 0.05);
        let mut quad_err = None;
        let qa = if params.n_a0 > S::zero() {
            Some(PiecewiseChebyshev::fit(
                |ef| {
                    trapped_acceptor_charge(ef, &params, &constants).unwrap_or_else(|e| {
                        quad_err = Some(e);
                        S::zero()
                    })
                },
                lo,
                hi,
                CHEB_PANELS,
                CHEB_DEGREE,
            ))
        } else {
            None
        };
        let qd = if params.n_d0 > S::zero() {
            Some(PiecewiseChebyshev::fit(
                |ef| {
                    ionized_donor_charge(ef, &params, &constants).unwrap_or_else(|e| {
                        quad_err = Some(e);
                        S::zero()
                    })
                },
                lo,
                hi,
                CHEB_PANELS,
                CHEB_DEGREE,
            ))
        } else {
            None
        };
        if let Some(e) = quad_err {
            return Err(e);
        }
        Ok(Self { params, constants, qa, qd })
    }

    pub fn params(&self) -> &DeviceParams<S> {
        &self.params
    }

    pub fn constants(&self) -> &PhysicalConstants<S> {
        &self.constants
    }

    /// Net semiconductor sheet charge at a given Fermi level, cm⁻².
    pub fn charge_sum(&self, ef: S) -> S {
        let mut q = free_carrier_density(ef, &self.params, &self.constants);
        if let Some(qa) = &self.qa {
            // The tabulated trap charge may ring slightly negative where the
            // true value underflows; clamp to the physical sign.
            q = q + qa.eval(ef).max(S::zero());
        }
        if let Some(qd) = &self.qd {
            q = q - qd.eval(ef).max(S::zero());
        }
        q
    }

    /// Charge-balance solve against the tabulated charges.
    pub fn solve_ef(&self, vgs: S) -> Result<SurfaceSolution<S>> {
        let target = self.constants.c_ox * (vgs - self.constants.v_fb) / self.constants.q;
        balance_root(target, |ef| self.charge_sum(ef))
    }

    /// Same solve, but first trying a caller-supplied bracket (from a
    /// neighbouring bias point). Falls back to the full bracket when the
    /// hint does not straddle the root.
    pub fn solve_ef_hinted(&self, vgs: S, hint: Option<(S, S)>) -> Result<SurfaceSolution<S>> {
        if let Some((lo, hi)) = hint {
            let lo = lo.max(S::of(EF_MIN));
            let hi = hi.min(S::of(EF_MAX));
            if lo < hi {
                let target = self.constants.c_ox * (vgs - self.constants.v_fb) / self.constants.q;
                let g_lo = target - self.charge_sum(lo);
                let g_hi = target - self.charge_sum(hi);
                if g_lo > S::zero() && g_hi < S::zero() {
                    let ef = brent_root(
                        |ef| target - self.charge_sum(ef),
                        lo,
                        hi,
                        g_lo,
                        g_hi,
                        S::of(EF_XTOL),
                        200,
                    )?;
                    return Ok(SurfaceSolution { ef, depleted: false });
                }
            }
        }
        self.solve_ef(vgs)
    }

    /// Free-carrier sheet density at one gate drive, cm⁻².
    pub fn sheet_density(&self, vgs: S) -> Result<S> {
        let sol = self.solve_ef(vgs)?;
        Ok(if sol.depleted {
            S::zero()
        } else {
            free_carrier_density(sol.ef, &self.params, &self.constants)
        })
    }

    pub fn free_density(&self, ef: S) -> S {
        free_carrier_density(ef, &self.params, &self.constants)
    }
}

/// Window low edge re-exported for oracle tests.
pub const _QUAD_WINDOW_LOW: f64 = QUAD_E_MIN;
