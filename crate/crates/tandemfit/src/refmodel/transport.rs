//! Channel current, contact resistance, and the coupled drain current.

use ndarray::Array2;

use super::electrostatics::{ChargeModel, EF_MIN};
use super::{BiasSpec, DeviceParams, IvCurveSet, PhysicalConstants};
use crate::numeric::brent_root;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Lower clamp on the simulated drain current, µA/µm. Keeps logarithmic
/// features finite for fully off devices.
pub const ID_CLAMP: f64 = 1e-12;

/// A/cm to µA/µm.
const CURRENT_UNIT: f64 = 100.0;
/// (µA/µm) · (Ω·µm) to volts.
const DROP_UNIT: f64 = 1e-6;

/// Minimum Simpson panels for the channel integral; more are added for
/// larger internal drops so the panel width never exceeds ~16 mV. That
/// keeps the quadrature error orders of magnitude below the spacing between
/// the two drain-bias curves.
const CHANNEL_MIN_PANELS: usize = 32;
const CHANNEL_PANEL_STEP: f64 = 1.0 / 64.0;

const FIXED_POINT_TOL: f64 = 1e-8;
const FIXED_POINT_MAX_ITER: usize = 200;
const DAMPING: f64 = 0.5;

/// Contact resistance law, Ω·µm per contact: thermionic barrier factor
/// normalized so a zero barrier at sheet density `n_c` gives `rho_c0`.
pub fn contact_resistance_for_density<S: Scalar>(
    density: S,
    p: &DeviceParams<S>,
    c: &PhysicalConstants<S>,
) -> S {
    c.rho_c0 * (p.phi_b0 / c.k_b_t).exp() * p.n_c / density.max(c.n_floor)
}

/// Gate-dependent contact resistance at one gate drive, Ω·µm per contact.
pub fn contact_resistance<S: Scalar>(
    vgs: S,
    p: &DeviceParams<S>,
    c: &PhysicalConstants<S>,
) -> Result<S> {
    let model = ChargeModel::new(*p, *c)?;
    contact_resistance_with(&model, vgs)
}

pub(crate) fn contact_resistance_with<S: Scalar>(model: &ChargeModel<S>, vgs: S) -> Result<S> {
    let n = model.sheet_density(vgs)?;
    Ok(contact_resistance_for_density(n, model.params(), model.constants()))
}

/// Gradual-channel current for a given internal drain-source drop, µA/µm:
///
/// `I = (mu / l_ch) · q · ∫_0^{vds_int} n_s(vgs - v) dv`
///
/// by composite Simpson quadrature with ef warm-started node to node.
pub fn channel_current_gca<S: Scalar>(
    vds_int: S,
    vgs: S,
    p: &DeviceParams<S>,
    c: &PhysicalConstants<S>,
) -> Result<S> {
    let model = ChargeModel::new(*p, *c)?;
    channel_current_with(&model, vds_int, vgs)
}

pub(crate) fn channel_current_with<S: Scalar>(
    model: &ChargeModel<S>,
    vds_int: S,
    vgs: S,
) -> Result<S> {
    if vds_int < S::zero() {
        return Err(Error::Contract(format!(
            "channel current needs a nonnegative internal drop, got {vds_int}"
        )));
    }
    if vds_int == S::zero() {
        return Ok(S::zero());
    }
    let panels = channel_panels(vds_int.as_f64());
    let h = vds_int / S::of(panels as f64);
    let ef_floor = S::of(EF_MIN);

    let mut prev_ef: Option<S> = None;
    let mut sum = S::zero();
    for k in 0..=panels {
        let v = h * S::of(k as f64);
        let u = vgs - v;
        // ef is monotone in the gate drive and moves at most one eV per
        // volt, so the previous node brackets the next from above.
        let hint = prev_ef.map(|ef| (ef - h - S::of(1e-6), ef + S::of(1e-9)));
        let sol = model.solve_ef_hinted(u, hint)?;
        prev_ef = if sol.depleted { None } else { Some(sol.ef) };
        let n = if sol.depleted {
            S::zero()
        } else {
            model.free_density(sol.ef.max(ef_floor))
        };
        let w = if k == 0 || k == panels {
            S::one()
        } else if k % 2 == 1 {
            S::of(4.0)
        } else {
            S::of(2.0)
        };
        sum = sum + w * n;
    }
    let integral = sum * h / S::of(3.0);
    let p = model.params();
    let c = model.constants();
    Ok(p.mu / c.l_ch * c.q * integral * S::of(CURRENT_UNIT))
}

fn channel_panels(vds_int: f64) -> usize {
    let wanted = (vds_int / CHANNEL_PANEL_STEP).ceil() as usize;
    let p = wanted.max(CHANNEL_MIN_PANELS);
    p + p % 2
}

/// Drain current at one bias point, µA/µm: the self-consistent solution of
/// the channel in series with the two contacts,
///
/// `I = I_channel(vds - I·(R_src + R_drn), vgs)`.
///
/// Both contact resistances are evaluated at the source-side gate drive
/// `vgs`; see `contact_resistance` for the law. A damped fixed point
/// handles the mild-feedback regime and the solver falls back to bracketed
/// root finding on the series-circuit equation when the iteration
/// oscillates (strong contacts).
pub fn simulate_id<S: Scalar>(
    vgs: S,
    vds: S,
    p: &DeviceParams<S>,
    c: &PhysicalConstants<S>,
) -> Result<S> {
    let model = ChargeModel::new(*p, *c)?;
    simulate_id_with(&model, vgs, vds)
}

pub(crate) fn simulate_id_with<S: Scalar>(model: &ChargeModel<S>, vgs: S, vds: S) -> Result<S> {
    if !(vds.is_finite() && vds > S::zero()) {
        return Err(Error::Input(format!("drain bias must be positive, got {vds}")));
    }
    let clamp = S::of(ID_CLAMP);
    let r_contact = contact_resistance_with(model, vgs)?;
    // Source and drain in series.
    let r_total = r_contact * S::of(2.0);

    let open = channel_current_with(model, vds, vgs)?;
    if open <= clamp {
        return Ok(clamp);
    }

    let series = |i: S| -> Result<S> {
        let drop = i * r_total * S::of(DROP_UNIT);
        let vint = (vds - drop).max(S::zero()).min(vds);
        channel_current_with(model, vint, vgs)
    };

    let tol = S::of(FIXED_POINT_TOL);
    let mut i = open;
    let mut prev_delta = S::infinity();
    for iter in 0..FIXED_POINT_MAX_ITER {
        let target = series(i)?;
        let next = i * S::of(1.0 - DAMPING) + target * S::of(DAMPING);
        let delta = (next - i).abs();
        if delta <= tol * next.max(clamp) {
            return Ok(next.max(clamp));
        }
        // Oscillation or divergence: the series equation is monotone, so
        // bracketed root finding always recovers.
        if (iter >= 2 && delta > prev_delta) || iter >= 60 {
            return series_circuit_root(&series, open, clamp);
        }
        prev_delta = delta;
        i = next;
    }
    Err(Error::Numerical(format!(
        "drain-current fixed point did not converge in {FIXED_POINT_MAX_ITER} iterations \
         (last residual {prev_delta} µA/µm at vgs = {vgs}, vds = {vds})"
    )))
}

/// Root of `F(I) = I - I_channel(vds - I R, vgs)` on `[0, I_open]`. F is
/// strictly increasing because the channel current falls as the series drop
/// rises, so the bracket is guaranteed.
fn series_circuit_root<S: Scalar>(
    series: &impl Fn(S) -> Result<S>,
    open: S,
    clamp: S,
) -> Result<S> {
    let mut err = None;
    let f = |i: S| match series(i) {
        Ok(v) => i - v,
        Err(e) => {
            err = Some(e);
            S::zero()
        }
    };
    let f_lo = -open; // F(0) = -I_channel(vds)
    let f_hi = {
        let v = series(open)?;
        open - v
    };
    let root = brent_root(f, S::zero(), open, f_lo, f_hi, open * S::of(1e-12), 200);
    if let Some(e) = err {
        return Err(e);
    }
    Ok(root?.max(clamp))
}

/// Dense drain-current evaluation over the full bias grid. Deterministic
/// for identical inputs; errors carry the offending bias point.
pub fn simulate_curves<S: Scalar>(
    p: &DeviceParams<S>,
    bias: &BiasSpec<S>,
    c: &PhysicalConstants<S>,
) -> Result<IvCurveSet<S>> {
    bias.validate()?;
    let model = ChargeModel::new(*p, *c)?;
    let mut id = Array2::zeros((bias.vds_values.len(), bias.vgs_grid.len()));
    for (j, &vds) in bias.vds_values.iter().enumerate() {
        for (k, &vgs) in bias.vgs_grid.iter().enumerate() {
            id[(j, k)] = simulate_id_with(&model, vgs, vds).map_err(|e| {
                Error::Numerical(format!("device simulation failed at (vds {vds}, vgs {vgs}): {e}"))
            })?;
        }
    }
    Ok(IvCurveSet { id, params: Some(*p) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refmodel::{free_carrier_density, N_VGS};

    fn params() -> DeviceParams<f64> {
        DeviceParams {
            mu: 18.0,
            phi_b0: 0.15,
            n_c: 2.0e12,
            n_d0: 1.0e13,
            e_d_mid: 0.10,
            sigma_d: 0.05,
            n_a0: 1.0e13,
            sigma_a: 0.10,
        }
    }

    fn constants() -> PhysicalConstants<f64> {
        PhysicalConstants::default_300k()
    }

    #[test]
    fn contact_law_normalization_and_barrier_ratio() {
        let mut p = params();
        let c = constants();
        p.phi_b0 = 0.0;
        assert_eq!(contact_resistance_for_density(p.n_c, &p, &c), c.rho_c0);

        let mut lo = p;
        lo.phi_b0 = 0.1;
        let mut hi = p;
        hi.phi_b0 = 0.2;
        let ratio = contact_resistance_for_density(p.n_c, &hi, &c)
            / contact_resistance_for_density(p.n_c, &lo, &c);
        assert!((ratio - (0.1f64 / 0.025852).exp()).abs() / ratio < 1e-12);
        assert!((ratio - 47.9).abs() < 0.1);
    }

    #[test]
    fn contact_resistance_monotone_in_gate_and_barrier() {
        let p = params();
        let c = constants();
        let model = ChargeModel::new(p, c).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..12 {
            let vgs = 49.9 * i as f64 / 11.0;
            let r = contact_resistance_with(&model, vgs).unwrap();
            assert!(r <= prev, "R_c increased with vgs at {vgs}");
            prev = r;
        }
        let r_low = contact_resistance(30.0, &p, &c).unwrap();
        let mut p_hi = p;
        p_hi.phi_b0 = 0.3;
        let r_high = contact_resistance(30.0, &p_hi, &c).unwrap();
        assert!(r_high > r_low);
    }

    #[test]
    fn channel_current_zero_drop_and_linear_regime() {
        let p = params();
        let c = constants();
        let model = ChargeModel::new(p, c).unwrap();
        assert_eq!(channel_current_with(&model, 0.0, 30.0).unwrap(), 0.0);

        // 1 mV drop: ohmic formula I = vds · q · mu · n_s(vgs) / l_ch.
        let vgs = 30.0;
        let n = model.sheet_density(vgs).unwrap();
        let ohmic = 1e-3 * c.q * p.mu * n / c.l_ch * 100.0;
        let got = channel_current_with(&model, 1e-3, vgs).unwrap();
        assert!((got - ohmic).abs() / ohmic < 0.01, "{got:e} vs ohmic {ohmic:e}");
    }

    #[test]
    fn channel_current_monotone_in_gate() {
        let p = params();
        let c = constants();
        let model = ChargeModel::new(p, c).unwrap();
        let mut prev = -1.0;
        for i in 0..16 {
            let vgs = -5.9 + 55.8 * i as f64 / 15.0;
            let i_ch = channel_current_with(&model, 0.5, vgs).unwrap();
            assert!(i_ch >= prev);
            prev = i_ch;
        }
    }

    #[test]
    fn zero_contact_prefactor_reduces_to_channel_current() {
        let p = params();
        let mut c = constants();
        c.rho_c0 = 0.0;
        let model = ChargeModel::new(p, c).unwrap();
        let vgs = 25.0;
        let direct = channel_current_with(&model, 1.0, vgs).unwrap();
        let coupled = simulate_id_with(&model, vgs, 1.0).unwrap();
        assert!((coupled - direct).abs() / direct < 1e-12);
    }

    #[test]
    fn mobility_scaling_in_both_contact_regimes() {
        let c = constants();
        let vgs = 40.0;
        // Negligible contacts: current scales with mobility.
        let mut lo = params();
        lo.phi_b0 = 0.01;
        let mut lo2 = lo;
        lo2.mu *= 2.0;
        let i1 = simulate_id(vgs, 1.0, &lo, &c).unwrap();
        let i2 = simulate_id(vgs, 1.0, &lo2, &c).unwrap();
        assert!((i2 / i1 - 2.0).abs() < 1e-3, "ratio {}", i2 / i1);

        // Dominant contacts: nearly unchanged.
        let mut hi = params();
        hi.phi_b0 = 0.5;
        let mut hi2 = hi;
        hi2.mu *= 2.0;
        let j1 = simulate_id(vgs, 1.0, &hi, &c).unwrap();
        let j2 = simulate_id(vgs, 1.0, &hi2, &c).unwrap();
        assert!((j2 / j1 - 1.0).abs() < 0.05, "contact-dominated ratio {}", j2 / j1);
    }

    #[test]
    fn fixed_point_matches_independent_series_root() {
        let p = params();
        let c = constants();
        let model = ChargeModel::new(p, c).unwrap();
        let vgs = 35.0;
        let vds = 1.0;
        let r = 2.0 * contact_resistance_with(&model, vgs).unwrap();
        // Plain bisection on the series-circuit equation.
        let f = |i: f64| {
            let vint = (vds - i * r * 1e-6).clamp(0.0, vds);
            i - channel_current_with(&model, vint, vgs).unwrap()
        };
        let (mut lo, mut hi) = (0.0, channel_current_with(&model, vds, vgs).unwrap());
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let got = simulate_id_with(&model, vgs, vds).unwrap();
        assert!((got - oracle).abs() / oracle < 1e-6, "{got:e} vs {oracle:e}");
    }

    #[test]
    fn drain_bias_ordering_holds_across_the_grid() {
        let p = params();
        let c = constants();
        let curves = simulate_curves(&p, &BiasSpec::standard(), &c).unwrap();
        for k in 0..N_VGS {
            assert!(
                curves.id[(1, k)] >= curves.id[(0, k)],
                "Id(1.0) < Id(0.1) at grid index {k}"
            );
        }
        // Nondecreasing along vgs, positive and finite everywhere.
        for j in 0..2 {
            for k in 0..N_VGS {
                let v = curves.id[(j, k)];
                assert!(v.is_finite() && v > 0.0);
                if k > 0 {
                    assert!(v >= curves.id[(j, k - 1)]);
                }
            }
        }
    }

    #[test]
    fn determinism_bitwise() {
        let p = params();
        let c = constants();
        let a = simulate_curves(&p, &BiasSpec::standard(), &c).unwrap();
        let b = simulate_curves(&p, &BiasSpec::standard(), &c).unwrap();
        assert_eq!(a.id, b.id);
    }

    #[test]
    fn f32_instantiation_is_sane() {
        // The generic path must stay usable at single precision.
        let p = DeviceParams::<f32> {
            mu: 18.0,
            phi_b0: 0.15,
            n_c: 2.0e12,
            n_d0: 1.0e13,
            e_d_mid: 0.10,
            sigma_d: 0.05,
            n_a0: 1.0e13,
            sigma_a: 0.10,
        };
        let c = PhysicalConstants::<f32>::default_300k();
        let n = free_carrier_density(0.1f32, &p, &c);
        assert!(n.is_finite() && n > 0.0);
        let i = simulate_id(30.0f32, 1.0, &p, &c).unwrap();
        assert!(i.is_finite() && i > 0.0);
    }
}
