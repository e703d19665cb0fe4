//! Physics-based compact model of a back-gated 2D Schottky-barrier FET.
//!
//! The model maps eight device parameters to drain-current vs. gate-voltage
//! curves through three coupled pieces:
//!
//! 1. a charge balance at the gate: induced gate charge equals free
//!    carriers plus trapped acceptor charge minus ionized donor charge,
//!    solved for the surface Fermi level at every gate drive;
//! 2. a gradual-channel integral of the free-carrier sheet density for the
//!    intrinsic channel current;
//! 3. thermionic, gate-dependent contact resistances coupled to the channel
//!    through a damped fixed point on the series circuit.

mod defects;
mod electrostatics;
mod transport;

pub use defects::{
    acceptor_density, donor_density, fermi_occupancy, fermi_vacancy, free_carrier_density,
    ionized_donor_charge, trapped_acceptor_charge, QUAD_E_MIN, QUAD_REL_TOL,
};
pub use electrostatics::{solve_surface_ef, ChargeModel, SurfaceSolution, EF_MAX, EF_MIN};
pub use transport::{channel_current_gca, contact_resistance, simulate_curves, simulate_id, ID_CLAMP};

use ndarray::Array2;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Number of fitting parameters.
pub const N_PARAMS: usize = 8;
/// Gate-voltage grid points per curve.
pub const N_VGS: usize = 32;
/// Drain biases per device.
pub const N_VDS: usize = 2;

/// Canonical parameter order used everywhere a parameter vector appears
/// (sampling, scaling, network outputs, CSV columns).
pub const PARAM_NAMES: [&str; N_PARAMS] = [
    "mu", "phi_b0", "n_c", "n_d0", "e_d_mid", "sigma_d", "n_a0", "sigma_a",
];

/// The eight physical fitting parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams<S> {
    /// Electron mobility, cm²V⁻¹s⁻¹.
    pub mu: S,
    /// Nominal Schottky barrier height, eV.
    pub phi_b0: S,
    /// Effective conduction-band density of states, cm⁻².
    pub n_c: S,
    /// Peak donor density, eV⁻¹cm⁻².
    pub n_d0: S,
    /// Donor Gaussian center below the conduction band edge, eV.
    pub e_d_mid: S,
    /// Donor Gaussian width, eV.
    pub sigma_d: S,
    /// Peak acceptor band-tail density, eV⁻¹cm⁻².
    pub n_a0: S,
    /// Acceptor tail decay energy, eV.
    pub sigma_a: S,
}

impl<S: Scalar> DeviceParams<S> {
    pub fn to_array(&self) -> [S; N_PARAMS] {
        [
            self.mu, self.phi_b0, self.n_c, self.n_d0, self.e_d_mid, self.sigma_d, self.n_a0,
            self.sigma_a,
        ]
    }

    pub fn from_array(a: [S; N_PARAMS]) -> Self {
        Self {
            mu: a[0],
            phi_b0: a[1],
            n_c: a[2],
            n_d0: a[3],
            e_d_mid: a[4],
            sigma_d: a[5],
            n_a0: a[6],
            sigma_a: a[7],
        }
    }

    /// All parameters must be strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in PARAM_NAMES.iter().zip(self.to_array()) {
            if !(v.is_finite() && v > S::zero()) {
                return Err(Error::ModelDomain(format!(
                    "device parameter {name} = {v} must be strictly positive and finite"
                )));
            }
        }
        Ok(())
    }
}

/// Fixed device and environment constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants<S> {
    /// Thermal energy at 300 K, eV.
    pub k_b_t: S,
    /// Elementary charge, C.
    pub q: S,
    /// Back-gate oxide capacitance per area (100 nm SiO₂), F/cm².
    pub c_ox: S,
    /// Channel length, cm.
    pub l_ch: S,
    /// Flat-band voltage offset, V.
    pub v_fb: S,
    /// Contact resistivity prefactor, Ω·µm.
    pub rho_c0: S,
    /// Carrier-density floor in the contact-resistance law, cm⁻².
    pub n_floor: S,
}

impl<S: Scalar> PhysicalConstants<S> {
    /// Room-temperature constants for the 500 nm channel / 100 nm SiO₂
    /// device this model describes. `rho_c0` is calibrated so the barrier
    /// height sweeps contacts from negligible to dominant without flattening
    /// more than a few percent of sampled devices below the noise floor.
    pub fn default_300k() -> Self {
        Self {
            k_b_t: S::of(0.025852),
            q: S::of(1.602176634e-19),
            // 3.9 * eps0 / 100 nm, in F/cm².
            c_ox: S::of(3.9 * 8.8541878128e-14 / 1.0e-5),
            l_ch: S::of(5.0e-5),
            v_fb: S::zero(),
            rho_c0: S::of(0.3),
            n_floor: S::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("k_b_t", self.k_b_t),
            ("q", self.q),
            ("c_ox", self.c_ox),
            ("l_ch", self.l_ch),
            ("rho_c0", self.rho_c0),
            ("n_floor", self.n_floor),
        ];
        for (name, v) in pos {
            if !(v.is_finite() && v >= S::zero()) {
                return Err(Error::Config(format!("constant {name} = {v} must be nonnegative")));
            }
        }
        for (name, v) in [("k_b_t", self.k_b_t), ("q", self.q), ("c_ox", self.c_ox), ("l_ch", self.l_ch)] {
            if v <= S::zero() {
                return Err(Error::Config(format!("constant {name} must be > 0")));
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Default for PhysicalConstants<S> {
    fn default() -> Self {
        Self::default_300k()
    }
}

/// The bias grid every curve is defined on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasSpec<S> {
    pub vgs_grid: Vec<S>,
    pub vds_values: Vec<S>,
}

impl<S: Scalar> BiasSpec<S> {
    /// 32 gate voltages evenly spaced on [-5.9, 49.9] V, drain biases
    /// 0.1 and 1.0 V.
    pub fn standard() -> Self {
        let lo = S::of(-5.9);
        let hi = S::of(49.9);
        let vgs_grid = (0..N_VGS)
            .map(|k| {
                let t = S::of(k as f64 / (N_VGS - 1) as f64);
                lo * (S::one() - t) + hi * t
            })
            .collect();
        Self {
            vgs_grid,
            vds_values: vec![S::of(0.1), S::one()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.vgs_grid.len() != N_VGS {
            return Err(Error::Config(format!(
                "bias grid must have {N_VGS} gate voltages, got {}",
                self.vgs_grid.len()
            )));
        }
        if !self.vgs_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("gate-voltage grid must be strictly increasing".into()));
        }
        if self.vds_values.len() != N_VDS {
            return Err(Error::Config(format!(
                "bias grid must have {N_VDS} drain biases, got {}",
                self.vds_values.len()
            )));
        }
        Ok(())
    }
}

/// Simulated currents on the bias grid, in µA/µm, indexed `[vds][vgs]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IvCurveSet<S> {
    pub id: Array2<S>,
    /// Present for simulated devices, absent for measured data.
    pub params: Option<DeviceParams<S>>,
}

impl<S: Scalar> IvCurveSet<S> {
    pub fn curve(&self, vds_index: usize) -> Vec<S> {
        self.id.row(vds_index).to_vec()
    }
}

/// Admissible range for one parameter. `log_scale` switches the sampler to
/// uniform-in-log10 draws for sensitivity studies; the defaults are linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange<S> {
    pub lo: S,
    pub hi: S,
    #[serde(default)]
    pub log_scale: bool,
}

/// Per-parameter sampling ranges, in canonical parameter order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRanges<S> {
    pub ranges: [ParamRange<S>; N_PARAMS],
}

impl<S: Scalar> ParamRanges<S> {
    /// The default training ranges.
    pub fn default_ranges() -> Self {
        let lin = |lo: f64, hi: f64| ParamRange {
            lo: S::of(lo),
            hi: S::of(hi),
            log_scale: false,
        };
        Self {
            ranges: [
                lin(1.0, 35.0),      // mu
                lin(0.010, 0.510),   // phi_b0
                lin(2.0e11, 9.0e12), // n_c
                lin(3.0e12, 3.0e13), // n_d0
                lin(0.020, 0.200),   // e_d_mid
                lin(0.020, 0.200),   // sigma_d
                lin(6.0e11, 3.7e13), // n_a0
                lin(0.050, 0.300),   // sigma_a
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in PARAM_NAMES.iter().zip(&self.ranges) {
            if !(r.lo.is_finite() && r.hi.is_finite() && r.lo <= r.hi) {
                return Err(Error::Config(format!(
                    "range for {name} must satisfy lo <= hi, got [{}, {}]",
                    r.lo, r.hi
                )));
            }
            if r.log_scale && r.lo <= S::zero() {
                return Err(Error::Config(format!(
                    "log-scale range for {name} needs a positive lower bound"
                )));
            }
        }
        Ok(())
    }

    /// Width `hi - lo` per parameter, used to normalize extraction errors.
    pub fn widths(&self) -> [S; N_PARAMS] {
        let mut w = [S::zero(); N_PARAMS];
        for (i, r) in self.ranges.iter().enumerate() {
            w[i] = r.hi - r.lo;
        }
        w
    }
}

impl<S: Scalar> Default for ParamRanges<S> {
    fn default() -> Self {
        Self::default_ranges()
    }
}

/// Draw one parameter set, each field independent and uniform (in linear or
/// log10 space per its range flag). Reproducible: the seed fully determines
/// the draw.
pub fn sample_params<S>(ranges: &ParamRanges<S>, seed: u64) -> Result<DeviceParams<S>>
where
    S: Scalar + rand::distributions::uniform::SampleUniform,
{
    ranges.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_params_with(ranges, &mut rng)
}

/// Same as [`sample_params`] but drawing from a caller-owned RNG stream.
pub fn sample_params_with<S, R>(ranges: &ParamRanges<S>, rng: &mut R) -> Result<DeviceParams<S>>
where
    S: Scalar + rand::distributions::uniform::SampleUniform,
    R: rand::Rng,
{
    let mut out = [S::zero(); N_PARAMS];
    for (slot, r) in out.iter_mut().zip(&ranges.ranges) {
        *slot = if r.lo == r.hi {
            r.lo
        } else if r.log_scale {
            let lo = r.lo.as_f64().log10();
            let hi = r.hi.as_f64().log10();
            let u = Uniform::new_inclusive(lo, hi).sample(rng);
            S::of(10f64.powf(u))
        } else {
            Uniform::new_inclusive(r.lo, r.hi).sample(rng)
        };
    }
    Ok(DeviceParams::from_array(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_hits_documented_endpoints() {
        let b: BiasSpec<f64> = BiasSpec::standard();
        b.validate().unwrap();
        assert_eq!(b.vgs_grid.len(), 32);
        assert_eq!(b.vgs_grid[0], -5.9);
        assert_eq!(b.vgs_grid[31], 49.9);
        assert!(b.vgs_grid.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(b.vds_values, vec![0.1, 1.0]);
    }

    #[test]
    fn sampling_is_reproducible_and_in_range() {
        let ranges: ParamRanges<f64> = ParamRanges::default_ranges();
        let a = sample_params(&ranges, 42).unwrap();
        let b = sample_params(&ranges, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_params(&ranges, 43).unwrap();
        assert_ne!(a, c);
        for (v, r) in a.to_array().iter().zip(&ranges.ranges) {
            assert!(*v >= r.lo && *v <= r.hi);
        }
        a.validate().unwrap();
    }

    #[test]
    fn mobility_samples_match_uniform_law() {
        // Bounds check plus a 3-sigma band on the mean of Uniform(1, 35).
        let ranges: ParamRanges<f64> = ParamRanges::default_ranges();
        let n = 10_000;
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for seed in 0..n {
            let p = sample_params(&ranges, seed).unwrap();
            sum += p.mu;
            min = min.min(p.mu);
            max = max.max(p.mu);
        }
        let mean = sum / n as f64;
        assert!(min >= 1.0 && max <= 35.0);
        assert!((16.5..=19.5).contains(&mean), "mean mobility {mean}");
    }

    #[test]
    fn degenerate_range_returns_the_point() {
        let mut ranges: ParamRanges<f64> = ParamRanges::default_ranges();
        ranges.ranges[0] = ParamRange { lo: 7.0, hi: 7.0, log_scale: false };
        for seed in 0..5 {
            assert_eq!(sample_params(&ranges, seed).unwrap().mu, 7.0);
        }
    }

    #[test]
    fn log_scale_sampling_stays_in_bounds() {
        let mut ranges: ParamRanges<f64> = ParamRanges::default_ranges();
        ranges.ranges[2].log_scale = true;
        for seed in 0..200 {
            let p = sample_params(&ranges, seed).unwrap();
            assert!(p.n_c >= 2.0e11 && p.n_c <= 9.0e12);
        }
    }

    #[test]
    fn inverted_range_is_a_configuration_error() {
        let mut ranges: ParamRanges<f64> = ParamRanges::default_ranges();
        ranges.ranges[1] = ParamRange { lo: 0.5, hi: 0.1, log_scale: false };
        assert!(matches!(sample_params(&ranges, 1), Err(crate::Error::Config(_))));
    }
}
