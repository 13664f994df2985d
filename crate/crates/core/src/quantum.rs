//! Single-qubit pure states, Z/X basis measurement and Pauli noise.
//!
//! States are dense complex 2-vectors so channel noise and intercept-resend
//! attacks compose freely. Every operation that returns a [`QubitState`]
//! keeps it normalized.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};

/// Tolerance on the squared norm of a state.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Measurement / preparation basis. Encoded as a bit: `Z = 0`, `X = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::Z, Basis::X];

    /// Maps a basis-string bit to a basis. Any nonzero value is `X`.
    pub fn from_bit(bit: u8) -> Basis {
        if bit == 0 {
            Basis::Z
        } else {
            Basis::X
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Basis::Z => 0,
            Basis::X => 1,
        }
    }

    /// The conjugate basis.
    pub fn other(self) -> Basis {
        match self {
            Basis::Z => Basis::X,
            Basis::X => Basis::Z,
        }
    }

    /// Draws a basis uniformly at random.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Basis {
        Basis::from_bit(rng.random::<bool>() as u8)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Z => f.write_str("Z"),
            Basis::X => f.write_str("X"),
        }
    }
}

/// A normalized single-qubit pure state `amp0|0> + amp1|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    amp0: Complex64,
    amp1: Complex64,
}

impl QubitState {
    /// Builds a state from raw amplitudes, renormalizing them.
    ///
    /// Returns `None` for the zero vector or non-finite amplitudes.
    pub fn from_amplitudes(amp0: Complex64, amp1: Complex64) -> Option<QubitState> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        Some(QubitState {
            amp0: amp0 / norm,
            amp1: amp1 / norm,
        })
    }

    /// Prepares the eigenstate of `basis` encoding `bit`:
    /// `|0>, |1>` for Z and `|+>, |->` for X.
    pub fn prepare(basis: Basis, bit: u8) -> QubitState {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match (basis, bit & 1) {
            (Basis::Z, 0) => QubitState { amp0: one, amp1: zero },
            (Basis::Z, _) => QubitState { amp0: zero, amp1: one },
            (Basis::X, 0) => QubitState { amp0: h, amp1: h },
            (Basis::X, _) => QubitState { amp0: h, amp1: -h },
        }
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.amp0, self.amp1)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// Born-rule probability of reading `0` when measuring in `basis`.
    pub fn prob_zero(&self, basis: Basis) -> f64 {
        let p = match basis {
            Basis::Z => self.amp0.norm_sqr(),
            Basis::X => 0.5 * (self.amp0 + self.amp1).norm_sqr(),
        };
        p.clamp(0.0, 1.0)
    }

    /// Projective measurement in `basis`. Returns the outcome bit and the
    /// post-measurement eigenstate.
    pub fn measure<R: Rng + ?Sized>(&self, basis: Basis, rng: &mut R) -> (u8, QubitState) {
        let p0 = self.prob_zero(basis);
        let bit = if rng.random::<f64>() < p0 { 0 } else { 1 };
        (bit, QubitState::prepare(basis, bit))
    }

    pub fn hadamard(&self) -> QubitState {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        QubitState {
            amp0: h * (self.amp0 + self.amp1),
            amp1: h * (self.amp0 - self.amp1),
        }
    }

    pub fn apply_pauli(&self, pauli: Pauli) -> QubitState {
        let i = Complex64::new(0.0, 1.0);
        match pauli {
            Pauli::I => *self,
            Pauli::X => QubitState {
                amp0: self.amp1,
                amp1: self.amp0,
            },
            Pauli::Y => QubitState {
                amp0: -i * self.amp1,
                amp1: i * self.amp0,
            },
            Pauli::Z => QubitState {
                amp0: self.amp0,
                amp1: -self.amp1,
            },
        }
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &QubitState) -> f64 {
        (self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1).norm_sqr()
    }

    /// If this state is (up to global phase) one of the four Z/X
    /// eigenstates, returns that basis and bit.
    pub fn as_eigenstate(&self) -> Option<(Basis, u8)> {
        Basis::ALL
            .into_iter()
            .flat_map(|b| [(b, 0u8), (b, 1u8)])
            .find(|&(b, x)| (self.fidelity(&QubitState::prepare(b, x)) - 1.0).abs() < 1e-9)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Pauli noise with an independent erasure probability per transit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliChannel {
    p_i: f64,
    p_x: f64,
    p_y: f64,
    p_z: f64,
    loss: f64,
}

impl PauliChannel {
    pub fn new(p_i: f64, p_x: f64, p_y: f64, p_z: f64, loss: f64) -> Result<PauliChannel> {
        check_unit("p_I", p_i)?;
        check_unit("p_X", p_x)?;
        check_unit("p_Y", p_y)?;
        check_unit("p_Z", p_z)?;
        check_unit("loss", loss)?;
        let total = p_i + p_x + p_y + p_z;
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::UnnormalizedChannel(total));
        }
        Ok(PauliChannel {
            p_i,
            p_x,
            p_y,
            p_z,
            loss,
        })
    }

    pub fn identity() -> PauliChannel {
        PauliChannel {
            p_i: 1.0,
            p_x: 0.0,
            p_y: 0.0,
            p_z: 0.0,
            loss: 0.0,
        }
    }

    /// The `p_Y = 0` channel whose Z-basis flip rate is `e_z` and X-basis
    /// flip rate is `e_x`: `p_X = e_z`, `p_Z = e_x`.
    pub fn from_error_rates(e_z: f64, e_x: f64, loss: f64) -> Result<PauliChannel> {
        check_unit("e_Z", e_z)?;
        check_unit("e_X", e_x)?;
        check_unit("loss", loss)?;
        if e_z + e_x > 1.0 {
            return Err(Error::InfeasibleChannel { e_z, e_x });
        }
        Ok(PauliChannel {
            p_i: 1.0 - (e_z + e_x),
            p_x: e_z,
            p_y: 0.0,
            p_z: e_x,
            loss,
        })
    }

    pub fn p_i(&self) -> f64 {
        self.p_i
    }
    pub fn p_x(&self) -> f64 {
        self.p_x
    }
    pub fn p_y(&self) -> f64 {
        self.p_y
    }
    pub fn p_z(&self) -> f64 {
        self.p_z
    }
    pub fn loss(&self) -> f64 {
        self.loss
    }

    /// Probability that a Z-basis eigenstate is read back flipped.
    pub fn z_flip_rate(&self) -> f64 {
        self.p_x + self.p_y
    }

    /// Probability that an X-basis eigenstate is read back flipped.
    pub fn x_flip_rate(&self) -> f64 {
        self.p_z + self.p_y
    }

    pub fn sample_pauli<R: Rng + ?Sized>(&self, rng: &mut R) -> Pauli {
        let u = rng.random::<f64>();
        if u < self.p_x {
            Pauli::X
        } else if u < self.p_x + self.p_y {
            Pauli::Y
        } else if u < self.p_x + self.p_y + self.p_z {
            Pauli::Z
        } else {
            Pauli::I
        }
    }

    /// Sends `state` through the channel. `None` means the qubit was lost.
    ///
    /// Always consumes two uniform draws so the random stream position does
    /// not depend on the outcome.
    pub fn apply<R: Rng + ?Sized>(&self, state: &QubitState, rng: &mut R) -> Option<QubitState> {
        let lost = rng.random::<f64>() < self.loss;
        let pauli = self.sample_pauli(rng);
        if lost {
            None
        } else {
            Some(state.apply_pauli(pauli))
        }
    }
}

impl Default for PauliChannel {
    fn default() -> Self {
        PauliChannel::identity()
    }
}
