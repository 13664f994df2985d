//! Simulation and analysis of quantum key distribution with a pre-announced
//! basis string, alongside BB84 and the biased-basis LCA variant.
//!
//! - [`quantum`]: single-qubit states, measurement and Pauli noise.
//! - [`adversary`]: intercept-resend eavesdroppers.
//! - [`protocols`]: session runner, error estimation, acceptance and sifting.
//! - [`analysis`]: closed-form error-rate algebra and acceptance regions.

pub mod adversary;
pub mod analysis;
pub mod error;
pub mod protocols;
pub mod quantum;
pub mod seed;

pub use adversary::{AdversaryModel, AttackOrder, InterceptStrategy};
pub use analysis::{
    basis_error_rates, epp_error_rates, epp_from_groups, expected_sift_fraction, group_error_rates, region_accepts,
    sweep_region, Alpha, ChannelErrorProfile, EppErrorRates, GridSpec, GroupErrorRates, RegionGrid, RegionScheme,
};
pub use error::{Error, Result};
pub use protocols::{run_session, run_session_with_transcript, ErrorEstimates, Scheme, SessionConfig, SessionOutcome};
pub use quantum::{Basis, PauliChannel, QubitState};
