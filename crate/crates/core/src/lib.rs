//! Classical correlations, quantum discord and decoherence dynamics of
//! two-qubit X states obtained from spin-chain ground states.
//!
//! The pipeline: exact transverse-field XY correlators (or ingested tables
//! for other models) → the X-state reduced density matrix → Kraus-operator
//! decoherence channels → mutual information / classical correlations /
//! discord along parametrized time → sudden-change times p_sc and their
//! tuning-parameter derivatives, whose growth signals quantum phase
//! transitions.
//!
//! All computations are pure functions of their inputs; scans and the
//! numeric discord search parallelize internally with deterministic
//! reductions.

pub mod channels;
pub mod correlators;
pub mod dynamics;
pub mod error;
pub mod measures;
pub mod quad;
pub mod xstate;

pub use channels::{
    evolve_coefficients, evolve_two_qubit, kraus_ops, ChannelKind, KrausSet, ParametrizedTime,
};
pub use correlators::{
    correlator_set, dispersion, g_coefficient, load_correlator_table, magnetization,
    table_lookup_xxz, CorrelatorSet, CorrelatorTable, ModelKind, ModelPoint,
};
pub use dynamics::{
    classify, default_p_grid, detect_p_sc, detect_p_sc_slope_change, q_exceeds_c_interval, scan,
    state_at, trajectory, trajectory_from_correlators, trajectory_from_state, CriticalScan,
    DetectionMethod, DivergenceIndicator, DynamicsType, ScanConfig, ScanParameter, SuddenChange,
    Trajectory,
};
pub use error::{Error, Result};
pub use measures::{
    analytic_branches, binary_entropy_terms, conditional_entropy_measured, discord_analytic,
    discord_numeric, marginal_entropy, mutual_information, triple, triple_numeric,
    AnalyticBranches, CorrelationTriple, DiscordBranch, GridSpec, MeasurementBasis,
};
pub use quad::{integrate, QuadratureConfig};
pub use xstate::{CorrelationCoefficients, Spectrum, XState};
