//! Exact structural analysis of reaction networks.
//!
//! Networks are parsed from a small text format into exact rational complexes. On top of that
//! model the crate decides siphons, closed sets, criticality, drainability and
//! self-replicability, enumerates minimal siphons, builds and replays reaction pathways,
//! searches for catalytic sets and assembles persistence certificates whose every claim can be
//! re-checked with exact arithmetic. A floating-point mass-action integrator is included for
//! empirical cross-checks only; its output never feeds a certificate.

pub mod catalysis;
pub mod diffusive;
pub mod error;
pub mod feasibility;
pub mod matrix;
pub mod network;
pub mod pathway;
pub mod persistence;
pub mod rational;
pub mod report;
pub mod siphon;
pub mod simulate;
pub mod species_set;

pub use catalysis::{find_catalytic_sets, CatalysisKind, CatalyticFinding};
pub use diffusive::{classify_diffusive_general, trichotomy, TrichotomyVerdict};
pub use error::{Error, Result};
pub use matrix::RationalMatrix;
pub use network::{parse_network, Complex, ConservationLaw, Consistency, Reaction, ReactionNetwork, Species};
pub use pathway::{bounded_reach, replay, witness_from_coefficients, Dilution, PathwayWitness, ReachabilityVerdict};
pub use persistence::{certify, PersistenceCertificate, PersistenceRule, PersistenceVerdict};
pub use rational::Rational;
pub use report::{analyze, AnalysisOptions, AnalysisReport};
pub use simulate::{simulate, SimulationParams, SimulationRun};
pub use siphon::{classify_set, minimal_siphons, SetClassification};
pub use species_set::SpeciesSet;
