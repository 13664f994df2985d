//! Python bindings. Build with `--features extension-module` to produce an
//! importable `paqkd` module; without the feature the crate links against
//! libpython so `cargo test` works.

use paqkd_core::{
    analysis, AdversaryModel, AttackOrder, Basis, ChannelErrorProfile, GridSpec, InterceptStrategy, RegionScheme,
    Scheme, SessionConfig,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

pub fn parse_basis(name: &str) -> Result<Basis, String> {
    match name {
        "Z" | "z" => Ok(Basis::Z),
        "X" | "x" => Ok(Basis::X),
        _ => Err(format!("unknown basis {name:?}; expected \"Z\" or \"X\"")),
    }
}

pub fn parse_scheme(name: &str, p: f64) -> Result<Scheme, String> {
    let scheme = match name {
        "bb84" => Scheme::Bb84,
        "lca" => Scheme::Lca { p },
        "preannounce" => Scheme::PreAnnounce { p },
        _ => return Err(format!("unknown scheme {name:?}; expected bb84, lca or preannounce")),
    };
    scheme.validate().map_err(|e| e.to_string())?;
    Ok(scheme)
}

pub fn parse_adversary(name: &str) -> Result<AdversaryModel, String> {
    let strategy = match name {
        "none" => return Ok(AdversaryModel::None),
        "random" => InterceptStrategy::RandomBasis,
        "fixed-z" => InterceptStrategy::FixedBasis(Basis::Z),
        "fixed-x" => InterceptStrategy::FixedBasis(Basis::X),
        "use-preannounced" => InterceptStrategy::UsePreAnnounced,
        _ => {
            return Err(format!(
                "unknown adversary {name:?}; expected none, random, fixed-z, fixed-x or use-preannounced"
            ))
        }
    };
    Ok(AdversaryModel::InterceptResend(strategy))
}

pub fn parse_region_scheme(name: &str, alpha: f64) -> Result<RegionScheme, String> {
    match name {
        "bb84" => Ok(RegionScheme::Bb84),
        "lca" => Ok(RegionScheme::Lca),
        "preannounce" => Ok(RegionScheme::PreAnnounce { alpha }),
        _ => Err(format!("unknown scheme {name:?}; expected bb84, lca or preannounce")),
    }
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Single-qubit pure state.
#[pyclass(name = "QubitState", module = "paqkd", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQubitState(paqkd_core::QubitState);

#[pymethods]
impl PyQubitState {
    /// Eigenstate `bit` of `basis` ("Z" or "X").
    #[staticmethod]
    fn prepare(basis: &str, bit: u8) -> PyResult<Self> {
        if bit > 1 {
            return Err(value_error("bit must be 0 or 1"));
        }
        Ok(Self(paqkd_core::QubitState::prepare(
            parse_basis(basis).map_err(value_error)?,
            bit,
        )))
    }

    fn prob_zero(&self, basis: &str) -> PyResult<f64> {
        Ok(self.0.prob_zero(parse_basis(basis).map_err(value_error)?))
    }

    /// Measures in `basis` with a generator seeded from `seed`; returns
    /// `(outcome, post_measurement_state)`.
    fn measure(&self, basis: &str, seed: u64) -> PyResult<(u8, Self)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (bit, post) = self.0.measure(parse_basis(basis).map_err(value_error)?, &mut rng);
        Ok((bit, Self(post)))
    }

    fn hadamard(&self) -> Self {
        Self(self.0.hadamard())
    }

    fn fidelity(&self, other: &Self) -> f64 {
        self.0.fidelity(&other.0)
    }

    /// `(re0, im0, re1, im1)`.
    fn amplitudes(&self) -> (f64, f64, f64, f64) {
        let (a, b) = self.0.amplitudes();
        (a.re, a.im, b.re, b.im)
    }

    fn __repr__(&self) -> String {
        match self.0.as_eigenstate() {
            Some((basis, bit)) => format!("QubitState({basis}, {bit})"),
            None => {
                let (a, b) = self.0.amplitudes();
                format!("QubitState({a}, {b})")
            }
        }
    }
}

/// Pauli channel with independent loss.
#[pyclass(name = "PauliChannel", module = "paqkd", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPauliChannel(paqkd_core::PauliChannel);

#[pymethods]
impl PyPauliChannel {
    /// Channel with Z-basis error rate `e_z` and X-basis error rate `e_x`.
    #[new]
    #[pyo3(signature = (e_z = 0.0, e_x = 0.0, loss = 0.0))]
    fn new(e_z: f64, e_x: f64, loss: f64) -> PyResult<Self> {
        paqkd_core::PauliChannel::from_error_rates(e_z, e_x, loss)
            .map(Self)
            .map_err(value_error)
    }

    #[getter]
    fn p_i(&self) -> f64 {
        self.0.p_i()
    }
    #[getter]
    fn p_x(&self) -> f64 {
        self.0.p_x()
    }
    #[getter]
    fn p_y(&self) -> f64 {
        self.0.p_y()
    }
    #[getter]
    fn p_z(&self) -> f64 {
        self.0.p_z()
    }
    #[getter]
    fn loss(&self) -> f64 {
        self.0.loss()
    }

    /// Transmits `state`; `None` when the qubit is lost.
    fn apply(&self, state: &PyQubitState, seed: u64) -> Option<PyQubitState> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.0.apply(&state.0, &mut rng).map(PyQubitState)
    }

    fn __repr__(&self) -> String {
        format!(
            "PauliChannel(p_i={}, p_x={}, p_y={}, p_z={}, loss={})",
            self.0.p_i(),
            self.0.p_x(),
            self.0.p_y(),
            self.0.p_z(),
            self.0.loss()
        )
    }
}

/// Runs one session and returns the outcome as a dict.
#[pyfunction]
#[pyo3(signature = (
    scheme = "preannounce", p = 0.9, channel = None, rounds = SessionConfig::DEFAULT_ROUNDS,
    check_fraction = SessionConfig::DEFAULT_CHECK_FRACTION, e_max = SessionConfig::DEFAULT_E_MAX,
    adversary = "none", attack_after_channel = true, seed = SessionConfig::DEFAULT_SEED,
    allow_low_statistics = false,
))]
#[allow(clippy::too_many_arguments)]
fn run_session<'py>(
    py: Python<'py>,
    scheme: &str,
    p: f64,
    channel: Option<PyPauliChannel>,
    rounds: usize,
    check_fraction: f64,
    e_max: f64,
    adversary: &str,
    attack_after_channel: bool,
    seed: u64,
    allow_low_statistics: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let channel = channel.map_or_else(paqkd_core::PauliChannel::identity, |c| c.0);
    let config = SessionConfig {
        attack_order: if attack_after_channel {
            AttackOrder::ChannelThenAttack
        } else {
            AttackOrder::AttackThenChannel
        },
        allow_low_statistics,
        ..SessionConfig::new(parse_scheme(scheme, p).map_err(value_error)?, channel)
            .with_rounds(rounds)
            .with_check_fraction(check_fraction)
            .with_e_max(e_max)
            .with_adversary(parse_adversary(adversary).map_err(value_error)?)
            .with_seed(seed)
    };
    let outcome = py.detach(|| paqkd_core::run_session(&config)).map_err(value_error)?;
    json_to_py(py, &outcome)
}

fn profile(ez_s0: f64, ez_s1: f64, ex_s0: f64, ex_s1: f64) -> PyResult<ChannelErrorProfile> {
    ChannelErrorProfile::new(ez_s0, ez_s1, ex_s0, ex_s1).map_err(value_error)
}

/// Bit and phase error rates of the distilled key, per `b` and averaged.
#[pyfunction]
fn epp_error_rates<'py>(
    py: Python<'py>,
    ez_s0: f64,
    ez_s1: f64,
    ex_s0: f64,
    ex_s1: f64,
    p: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let rates = analysis::epp_error_rates(&profile(ez_s0, ez_s1, ex_s0, ex_s1)?, p).map_err(value_error)?;
    json_to_py(py, &rates)
}

/// `(e_c0, e_c1, alpha)`; an infinite alpha is returned as `float("inf")`.
#[pyfunction]
fn group_error_rates(ez_s0: f64, ez_s1: f64, ex_s0: f64, ex_s1: f64) -> PyResult<(f64, f64, f64)> {
    let g = analysis::group_error_rates(&profile(ez_s0, ez_s1, ex_s0, ex_s1)?);
    Ok((g.e_c0, g.e_c1, g.alpha.value()))
}

/// `(e_z, e_x)` averaged over `s`.
#[pyfunction]
fn basis_error_rates(ez_s0: f64, ez_s1: f64, ex_s0: f64, ex_s1: f64) -> PyResult<(f64, f64)> {
    Ok(analysis::basis_error_rates(&profile(ez_s0, ez_s1, ex_s0, ex_s1)?))
}

#[pyfunction]
#[pyo3(signature = (e_x, e_z, scheme = "preannounce", e_max = SessionConfig::DEFAULT_E_MAX, alpha = 1.0))]
fn region_accepts(e_x: f64, e_z: f64, scheme: &str, e_max: f64, alpha: f64) -> PyResult<bool> {
    let scheme = parse_region_scheme(scheme, alpha).map_err(value_error)?;
    Ok(analysis::region_accepts(e_x, e_z, scheme, e_max))
}

type SweepRow = (f64, f64, bool, bool, bool);

/// Acceptance over a square grid; list of `(e_x, e_z, lca, preannounce, bb84)`.
#[pyfunction]
#[pyo3(signature = (e_max = SessionConfig::DEFAULT_E_MAX, alpha = 1.0, min = 0.0, max = 0.25, step = 0.005))]
fn sweep_region(e_max: f64, alpha: f64, min: f64, max: f64, step: f64) -> PyResult<Vec<SweepRow>> {
    let grid = analysis::sweep_region(&GridSpec::square(min, max, step), e_max, alpha).map_err(value_error)?;
    Ok(grid
        .cells
        .iter()
        .map(|c| (c.e_x, c.e_z, c.lca, c.preannounce, c.bb84))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (scheme, p = 0.9))]
fn expected_sift_fraction(scheme: &str, p: f64) -> PyResult<f64> {
    Ok(analysis::expected_sift_fraction(
        &parse_scheme(scheme, p).map_err(value_error)?,
    ))
}

#[pymodule]
fn paqkd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQubitState>()?;
    m.add_class::<PyPauliChannel>()?;
    m.add_function(wrap_pyfunction!(run_session, m)?)?;
    m.add_function(wrap_pyfunction!(epp_error_rates, m)?)?;
    m.add_function(wrap_pyfunction!(group_error_rates, m)?)?;
    m.add_function(wrap_pyfunction!(basis_error_rates, m)?)?;
    m.add_function(wrap_pyfunction!(region_accepts, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_region, m)?)?;
    m.add_function(wrap_pyfunction!(expected_sift_fraction, m)?)?;
    m.add("TWO_WAY_E_MAX", SessionConfig::TWO_WAY_E_MAX)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
