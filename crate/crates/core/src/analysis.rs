//! Closed-form error-rate algebra for the pre-announced basis scheme, the
//! acceptance regions of the three schemes and their grid sweep.
//!
//! Nothing here draws random numbers.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{check_open_unit, check_unit, Error, Result};
use crate::protocols::Scheme;

/// Ratio `e_c1 / e_c0`.
///
/// `0/0` is taken as `Finite(1.0)` (no sign of an attack). `x/0` with
/// `x > 0` is `Infinite`, the signature of an eavesdropper reading the
/// announced basis. Serialized as a JSON number, or the string
/// `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Finite(f64),
    Infinite,
}

impl Alpha {
    pub fn from_rates(e_c0: f64, e_c1: f64) -> Alpha {
        if e_c0 > 0.0 {
            Alpha::Finite(e_c1 / e_c0)
        } else if e_c1 > 0.0 {
            Alpha::Infinite
        } else {
            Alpha::Finite(1.0)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Alpha::Finite(a) => a,
            Alpha::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Alpha::Infinite)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(a) => write!(f, "{a}"),
            Alpha::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Alpha::Finite(a) => s.serialize_f64(*a),
            Alpha::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Alpha, D::Error> {
        struct AlphaVisitor;

        impl Visitor<'_> for AlphaVisitor {
            type Value = Alpha;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or the string \"infinite\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Alpha, E> {
                Ok(Alpha::Finite(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Alpha, E> {
                Ok(Alpha::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Alpha, E> {
                Ok(Alpha::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Alpha, E> {
                if v == "infinite" {
                    Ok(Alpha::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        d.deserialize_any(AlphaVisitor)
    }
}

/// Conditional basis error rates, split by the announced basis bit `s`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ChannelErrorProfile {
    pub ez_s0: f64,
    pub ez_s1: f64,
    pub ex_s0: f64,
    pub ex_s1: f64,
}

impl ChannelErrorProfile {
    pub fn new(ez_s0: f64, ez_s1: f64, ex_s0: f64, ex_s1: f64) -> Result<ChannelErrorProfile> {
        Ok(ChannelErrorProfile {
            ez_s0: check_unit("e_Z^{s=0}", ez_s0)?,
            ez_s1: check_unit("e_Z^{s=1}", ez_s1)?,
            ex_s0: check_unit("e_X^{s=0}", ex_s0)?,
            ex_s1: check_unit("e_X^{s=1}", ex_s1)?,
        })
    }

    /// A channel whose error rates do not depend on the announcement.
    pub fn uniform(e_z: f64, e_x: f64) -> Result<ChannelErrorProfile> {
        ChannelErrorProfile::new(e_z, e_z, e_x, e_x)
    }
}

/// Bit-flip and phase error rates of the equivalent purification protocol,
/// for the un-rotated (`b = 0`) and Hadamard-rotated (`b = 1`) halves and
/// overall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EppErrorRates {
    pub e_bit_b0: f64,
    pub e_phase_b0: f64,
    pub e_bit_b1: f64,
    pub e_phase_b1: f64,
    pub e_bit: f64,
    pub e_phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupErrorRates {
    pub e_c0: f64,
    pub e_c1: f64,
    pub alpha: Alpha,
}

impl GroupErrorRates {
    pub fn new(e_c0: f64, e_c1: f64) -> GroupErrorRates {
        GroupErrorRates {
            e_c0,
            e_c1,
            alpha: Alpha::from_rates(e_c0, e_c1),
        }
    }

    /// Both group rates strictly below `e_max`.
    pub fn accepted(&self, e_max: f64) -> bool {
        self.e_c0 < e_max && self.e_c1 < e_max
    }
}

/// Error rates of the purification protocol, where `p` is the probability
/// that the announced basis is the true one.
pub fn epp_error_rates(profile: &ChannelErrorProfile, p: f64) -> Result<EppErrorRates> {
    check_open_unit("p", p)?;
    let q = 1.0 - p;
    let ChannelErrorProfile {
        ez_s0,
        ez_s1,
        ex_s0,
        ex_s1,
    } = *profile;
    let e_bit_b0 = p * ez_s0 + q * ez_s1;
    let e_phase_b0 = p * ex_s0 + q * ex_s1;
    let e_bit_b1 = q * ex_s0 + p * ex_s1;
    let e_phase_b1 = q * ez_s0 + p * ez_s1;
    Ok(EppErrorRates {
        e_bit_b0,
        e_phase_b0,
        e_bit_b1,
        e_phase_b1,
        e_bit: 0.5 * e_bit_b0 + 0.5 * e_bit_b1,
        e_phase: 0.5 * e_phase_b0 + 0.5 * e_phase_b1,
    })
}

/// Check-group error rates: `c = 0` mixes Z with `s = 0` and X with `s = 1`,
/// `c = 1` the other two.
pub fn group_error_rates(profile: &ChannelErrorProfile) -> GroupErrorRates {
    GroupErrorRates::new(
        0.5 * profile.ez_s0 + 0.5 * profile.ex_s1,
        0.5 * profile.ex_s0 + 0.5 * profile.ez_s1,
    )
}

/// `(e_bit, e_phase)` recovered from the two group rates alone.
pub fn epp_from_groups(groups: &GroupErrorRates, p: f64) -> Result<(f64, f64)> {
    check_open_unit("p", p)?;
    let q = 1.0 - p;
    Ok((p * groups.e_c0 + q * groups.e_c1, q * groups.e_c0 + p * groups.e_c1))
}

/// Unconditional `(e_Z, e_X)`, averaged over the two announcements.
pub fn basis_error_rates(profile: &ChannelErrorProfile) -> (f64, f64) {
    (
        0.5 * profile.ez_s0 + 0.5 * profile.ez_s1,
        0.5 * profile.ex_s0 + 0.5 * profile.ex_s1,
    )
}

/// Margin applied to the region inequalities so decimal grid points that sit
/// exactly on a boundary are rejected regardless of binary rounding.
pub const REGION_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionScheme {
    Lca,
    #[serde(rename = "preannounce")]
    PreAnnounce {
        alpha: f64,
    },
    Bb84,
}

/// Whether a channel with basis error rates `(e_x, e_z)` lies in the
/// acceptance region of `scheme`.
///
/// PreAnnounce uses `e_Z + e_X < min{(1 + a), (1 + 1/a)} * e_max`; a
/// non-positive or NaN `alpha` is never accepted, `alpha = inf` reduces the
/// bound to `e_max`.
pub fn region_accepts(e_x: f64, e_z: f64, scheme: RegionScheme, e_max: f64) -> bool {
    let below = |lhs: f64, rhs: f64| lhs < rhs - REGION_EPS;
    match scheme {
        RegionScheme::Lca => below(e_z, e_max) && below(e_x, e_max),
        RegionScheme::PreAnnounce { alpha } => {
            if alpha.is_nan() || alpha <= 0.0 {
                return false;
            }
            let bound = ((1.0 + alpha) * e_max).min((1.0 + 1.0 / alpha) * e_max);
            below(e_z + e_x, bound)
        }
        RegionScheme::Bb84 => below(0.5 * (e_z + e_x), e_max),
    }
}

/// Axis layout for [`sweep_region`]. Grid points sit at `min + k * step`
/// for `k = 0, 1, ...` while the point stays `<= max`; each point is the
/// centre of a `step`-wide cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::square(0.0, 0.25, 0.005)
    }
}

/// Decimal places kept when placing grid points.
const GRID_DECIMALS: f64 = 1e12;

impl GridSpec {
    pub fn square(min: f64, max: f64, step: f64) -> GridSpec {
        GridSpec {
            x_min: min,
            x_max: max,
            z_min: min,
            z_max: max,
            step,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        for (name, lo, hi) in [("e_x", self.x_min, self.x_max), ("e_z", self.z_min, self.z_max)] {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::InvalidConfig(format!(
                    "{name} range [{lo}, {hi}] must satisfy 0 <= min <= max <= 1"
                )));
            }
        }
        Ok(())
    }

    fn axis(min: f64, max: f64, step: f64) -> Vec<f64> {
        let count = ((max - min) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| ((min + k as f64 * step) * GRID_DECIMALS).round() / GRID_DECIMALS)
            .collect()
    }

    pub fn x_values(&self) -> Vec<f64> {
        GridSpec::axis(self.x_min, self.x_max, self.step)
    }

    pub fn z_values(&self) -> Vec<f64> {
        GridSpec::axis(self.z_min, self.z_max, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub e_x: f64,
    pub e_z: f64,
    pub lca: bool,
    pub preannounce: bool,
    pub bb84: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub spec: GridSpec,
    pub e_max: f64,
    pub alpha: f64,
    pub x_count: usize,
    pub z_count: usize,
    /// Ordered `e_x`-major, then `e_z`.
    pub cells: Vec<RegionCell>,
}

impl RegionGrid {
    pub fn count_lca(&self) -> usize {
        self.cells.iter().filter(|c| c.lca).count()
    }

    pub fn count_preannounce(&self) -> usize {
        self.cells.iter().filter(|c| c.preannounce).count()
    }

    pub fn count_bb84(&self) -> usize {
        self.cells.iter().filter(|c| c.bb84).count()
    }
}

pub fn sweep_region(spec: &GridSpec, e_max: f64, alpha: f64) -> Result<RegionGrid> {
    spec.validate()?;
    let xs = spec.x_values();
    let zs = spec.z_values();
    let pre = RegionScheme::PreAnnounce { alpha };
    let cells = xs
        .iter()
        .flat_map(|&e_x| zs.iter().map(move |&e_z| (e_x, e_z)))
        .map(|(e_x, e_z)| RegionCell {
            e_x,
            e_z,
            lca: region_accepts(e_x, e_z, RegionScheme::Lca, e_max),
            preannounce: region_accepts(e_x, e_z, pre, e_max),
            bb84: region_accepts(e_x, e_z, RegionScheme::Bb84, e_max),
        })
        .collect();
    Ok(RegionGrid {
        spec: *spec,
        e_max,
        alpha,
        x_count: xs.len(),
        z_count: zs.len(),
        cells,
    })
}

/// Expected fraction of received, non-check rounds that survive sifting.
pub fn expected_sift_fraction(scheme: &Scheme) -> f64 {
    match *scheme {
        Scheme::Bb84 => 0.5,
        Scheme::Lca { p } => p * p + (1.0 - p) * (1.0 - p),
        Scheme::PreAnnounce { p } => p,
    }
}
