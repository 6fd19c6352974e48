//! Correlation dynamics over parametrized time: trajectories, detection of
//! the sudden-change time p_sc, dynamics-type classification, and tuning-
//! parameter scans whose p_sc derivatives signal quantum phase transitions.
//!
//! The sudden change is the switch of the optimal measurement behind the
//! classical correlations. For X states the candidate measurements are the
//! σ_z axis and the two equatorial axes (σ_x, σ_y) — the equatorial pair
//! collapses to the single Q2 branch of the analytic formula, but the x↔y
//! switch inside that branch produces a kink all the same, so the detector
//! tracks all three conditional entropies and root-finds the first point
//! where the minimizer changes.

use rayon::prelude::*;

use crate::channels::{evolve_coefficients, evolve_two_qubit, ChannelKind, ParametrizedTime};
use crate::correlators::{
    correlator_set, table_lookup_xxz, CorrelatorSet, CorrelatorTable, ModelPoint,
};
use crate::error::{Error, Result};
use crate::measures::{
    analytic_branches, discord_analytic, triple, CorrelationTriple, DiscordBranch,
};
use crate::quad::QuadratureConfig;
use crate::xstate::XState;

/// |dC/dp| threshold of the slope-change detector.
pub const SLOPE_TOL: f64 = 1e-6;

/// Bisection tolerance in p for the branch-crossing detector.
pub const P_SC_TOL: f64 = 1e-10;

/// Variation tolerance (bits) of the dynamics-type rules.
pub const CLASSIFY_TOL: f64 = 1e-6;

/// Number of points of [`default_p_grid`] and of the detector grid.
pub const DEFAULT_P_POINTS: usize = 1001;

/// Upper end of the default grid; p = 1 degenerates for some log terms and
/// is evaluated separately in closed form where needed.
pub const DEFAULT_P_MAX: f64 = 0.999;

/// 1001 uniform points on [0, 0.999].
pub fn default_p_grid() -> Vec<f64> {
    uniform_grid(0.0, DEFAULT_P_MAX, DEFAULT_P_POINTS)
}

/// `n` uniform points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && hi > lo);
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * h).collect()
}

/// How the detector located the sudden change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DetectionMethod {
    /// Root of the difference of the two competing measured conditional
    /// entropies (the minimizing measurement switches).
    BranchCrossing,
    /// |dC/dp| fell through [`SLOPE_TOL`] on a 5-point stencil.
    SlopeChange,
}

/// Result of sudden-change detection. Absence is a value, not an error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum SuddenChange {
    Absent,
    At { p_sc: f64, method: DetectionMethod },
}

impl SuddenChange {
    pub fn p_sc(&self) -> Option<f64> {
        match self {
            SuddenChange::Absent => None,
            SuddenChange::At { p_sc, .. } => Some(*p_sc),
        }
    }
}

/// The paper's three dynamics classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DynamicsType {
    /// C constant while Q decays.
    TypeI,
    /// A sudden change exists: C decays until p_sc, the decay rates of C
    /// and Q change abruptly there.
    TypeII,
    /// Both C and Q decay monotonically with no sudden change.
    TypeIII,
}

impl std::fmt::Display for DynamicsType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DynamicsType::TypeI => "type-i",
            DynamicsType::TypeII => "type-ii",
            DynamicsType::TypeIII => "type-iii",
        })
    }
}

/// Correlation triples of one initial state under one channel over a p grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Trajectory {
    pub channel: ChannelKind,
    /// Present when the initial state came from a model point.
    pub model: Option<ModelPoint>,
    pub initial: XState,
    pub p_grid: Vec<f64>,
    pub triples: Vec<CorrelationTriple>,
    pub branches: Vec<DiscordBranch>,
}

fn check_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.len() < 2 {
        return Err(Error::InvalidParameter(
            "p grid needs at least two points".into(),
        ));
    }
    if !p_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(
            "p grid must be strictly increasing".into(),
        ));
    }
    if p_grid[0] < 0.0 || *p_grid.last().unwrap() >= 1.0 {
        return Err(Error::InvalidParameter(
            "p grid must lie within [0, 1)".into(),
        ));
    }
    Ok(())
}

/// Evolve the initial state to parametrized time p: coefficient maps for
/// the flip channels, the Kraus sum for amplitude damping.
pub fn state_at(initial: &XState, channel: ChannelKind, p: f64) -> Result<XState> {
    let p = ParametrizedTime::new(p)?;
    match channel {
        ChannelKind::AmplitudeDamping => evolve_two_qubit(initial, channel, p),
        _ => XState::from_coefficients(&evolve_coefficients(&initial.coefficients(), channel, p)?),
    }
}

/// Trajectory from an already resolved initial state.
pub fn trajectory_from_state(
    initial: &XState,
    model: Option<ModelPoint>,
    channel: ChannelKind,
    p_grid: &[f64],
) -> Result<Trajectory> {
    check_grid(p_grid)?;
    let mut triples = Vec::with_capacity(p_grid.len());
    let mut branches = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let state = state_at(initial, channel, p)?;
        triples.push(triple(&state));
        branches.push(discord_analytic(&state).1);
    }
    Ok(Trajectory {
        channel,
        model,
        initial: *initial,
        p_grid: p_grid.to_vec(),
        triples,
        branches,
    })
}

/// Trajectory of an XY/TIM model point (correlators computed here). XXZ
/// and external points must come through
/// [`trajectory_from_correlators`] with ingested data.
pub fn trajectory(
    point: &ModelPoint,
    channel: ChannelKind,
    p_grid: &[f64],
    quad: &QuadratureConfig,
) -> Result<Trajectory> {
    let set = correlator_set(point, quad)?;
    let initial = XState::from_correlators(&set)?;
    trajectory_from_state(&initial, Some(*point), channel, p_grid)
}

/// Trajectory from explicitly supplied correlators.
pub fn trajectory_from_correlators(
    set: &CorrelatorSet,
    model: Option<ModelPoint>,
    channel: ChannelKind,
    p_grid: &[f64],
) -> Result<Trajectory> {
    let initial = XState::from_correlators(set)?;
    trajectory_from_state(&initial, model, channel, p_grid)
}

/// Candidate measurement axes, in the deterministic comparison order used
/// for argmin ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Z,
    X,
    Y,
}

const AXES: [Axis; 3] = [Axis::Z, Axis::X, Axis::Y];

fn axis_conditionals(initial: &XState, channel: ChannelKind, p: f64) -> Result<[f64; 3]> {
    let state = state_at(initial, channel, p)?;
    let br = analytic_branches(&state);
    Ok([br.cond_z, br.cond_x, br.cond_y])
}

fn argmin_axis(v: &[f64; 3]) -> Axis {
    let mut best = 0;
    for i in 1..3 {
        if v[i] < v[best] {
            best = i;
        }
    }
    AXES[best]
}

/// Locate the sudden-change time of one initial state under one flip
/// channel inside `interval` (defaults to the full default grid span when
/// `None`).
///
/// Primary detector: sample the three measured conditional entropies on a
/// dense grid, find the first point where the minimizing axis switches,
/// and bisect the difference of the two competing branch functions to
/// [`P_SC_TOL`]. Tangencies (a touch without an actual sign change) are
/// ignored. Fallback: the first p where |dC/dp| on a 5-point stencil falls
/// through [`SLOPE_TOL`].
pub fn detect_p_sc(
    initial: &XState,
    channel: ChannelKind,
    interval: Option<(f64, f64)>,
) -> Result<SuddenChange> {
    if channel == ChannelKind::AmplitudeDamping {
        return Err(Error::UnsupportedChannel(
            "p_sc detection needs the closed-form coefficient maps; amplitude damping has none"
                .into(),
        ));
    }
    let (lo, hi) = interval.unwrap_or((0.0, DEFAULT_P_MAX));
    if !(0.0..1.0).contains(&lo) || !(lo..1.0).contains(&hi) || lo >= hi {
        return Err(Error::InvalidParameter(format!(
            "search interval [{lo}, {hi}] must satisfy 0 <= lo < hi < 1"
        )));
    }

    let grid = uniform_grid(lo, hi, DEFAULT_P_POINTS);
    let mut prev_cond = axis_conditionals(initial, channel, grid[0])?;
    let mut prev_axis = argmin_axis(&prev_cond);

    for k in 1..grid.len() {
        let cond = axis_conditionals(initial, channel, grid[k])?;
        let axis = argmin_axis(&cond);
        if axis != prev_axis {
            let (old_i, new_i) = (
                AXES.iter().position(|&a| a == prev_axis).unwrap(),
                AXES.iter().position(|&a| a == axis).unwrap(),
            );
            // difference of the challenger against the incumbent: positive
            // while the incumbent is optimal, negative after the switch
            let diff = |p: f64| -> Result<f64> {
                let c = axis_conditionals(initial, channel, p)?;
                Ok(c[new_i] - c[old_i])
            };
            let (mut a, mut b) = (grid[k - 1], grid[k]);
            let (fa, fb) = (diff(a)?, diff(b)?);
            if fa > 0.0 && fb < 0.0 {
                while b - a > P_SC_TOL {
                    let mid = 0.5 * (a + b);
                    if diff(mid)? > 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                return Ok(SuddenChange::At {
                    p_sc: 0.5 * (a + b),
                    method: DetectionMethod::BranchCrossing,
                });
            }
            // tangency or a degenerate tie: keep scanning
        }
        prev_axis = axis;
        prev_cond = cond;
    }
    let _ = prev_cond;

    detect_p_sc_slope_change(initial, channel, Some((lo, hi)))
}

/// Independent sudden-change detector: locate where |dC/dp| on a 5-point
/// stencil drops through [`SLOPE_TOL`] *abruptly* (by at least a factor of
/// ten across one grid step). A smooth asymptotic flattening of C also
/// drifts below any fixed tolerance eventually, but its slope shrinks by a
/// fraction of a percent per step — only a kink produces the abrupt drop.
/// The reported location compensates the 2.5-step smear of the stencil.
pub fn detect_p_sc_slope_change(
    initial: &XState,
    channel: ChannelKind,
    interval: Option<(f64, f64)>,
) -> Result<SuddenChange> {
    if channel == ChannelKind::AmplitudeDamping {
        return Err(Error::UnsupportedChannel(
            "p_sc detection needs the closed-form coefficient maps; amplitude damping has none"
                .into(),
        ));
    }
    let (lo, hi) = interval.unwrap_or((0.0, DEFAULT_P_MAX));
    let grid = uniform_grid(lo, hi, DEFAULT_P_POINTS);
    let classical: Vec<f64> = grid
        .iter()
        .map(|&p| Ok(triple(&state_at(initial, channel, p)?).classical))
        .collect::<Result<_>>()?;
    let h = grid[1] - grid[0];
    let slope = |k: usize| {
        (classical[k - 2] - 8.0 * classical[k - 1] + 8.0 * classical[k + 1] - classical[k + 2])
            / (12.0 * h)
    };
    for k in 2..grid.len() - 3 {
        let before = slope(k).abs();
        let after = slope(k + 1).abs();
        if before > SLOPE_TOL && after <= SLOPE_TOL && after * 10.0 <= before {
            return Ok(SuddenChange::At {
                p_sc: (grid[k + 1] - 2.5 * h).max(lo),
                method: DetectionMethod::SlopeChange,
            });
        }
    }
    Ok(SuddenChange::Absent)
}

/// Classify a trajectory into the paper's three dynamics types, with
/// variation tolerance [`CLASSIFY_TOL`] bits:
///
/// - type (ii): a sudden change exists inside the trajectory span;
/// - type (i): no sudden change, C constant while Q decays;
/// - type (iii): no sudden change, C and Q both non-increasing.
///
/// Anything else is reported as unclassifiable rather than binned.
pub fn classify(traj: &Trajectory) -> Result<DynamicsType> {
    if traj.p_grid.len() < 50 {
        return Err(Error::InsufficientData(format!(
            "classification needs at least 50 grid points, got {}",
            traj.p_grid.len()
        )));
    }

    if traj.channel != ChannelKind::AmplitudeDamping {
        let span = (traj.p_grid[0], *traj.p_grid.last().unwrap());
        let span = (span.0, span.1.min(DEFAULT_P_MAX));
        if let SuddenChange::At { .. } = detect_p_sc(&traj.initial, traj.channel, Some(span))? {
            return Ok(DynamicsType::TypeII);
        }
    }

    let c: Vec<f64> = traj.triples.iter().map(|t| t.classical).collect();
    let q: Vec<f64> = traj.triples.iter().map(|t| t.discord).collect();
    let variation = |v: &[f64]| -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &x in v {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        hi - lo
    };
    let non_increasing = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0] + CLASSIFY_TOL);
    let q_decays = q.first().unwrap() - q.last().unwrap() > CLASSIFY_TOL;

    if variation(&c) < CLASSIFY_TOL && q_decays && non_increasing(&q) {
        return Ok(DynamicsType::TypeI);
    }
    if non_increasing(&c) && non_increasing(&q) {
        return Ok(DynamicsType::TypeIII);
    }
    Err(Error::Unclassifiable(
        "no sudden change, yet C or Q is non-monotonic".into(),
    ))
}

/// The maximal contiguous p interval where Q - C > 1e-9, if any.
pub fn q_exceeds_c_interval(traj: &Trajectory) -> Option<(f64, f64)> {
    let mut best: Option<(usize, usize)> = None;
    let mut run_start: Option<usize> = None;
    for (k, t) in traj.triples.iter().enumerate() {
        if t.discord - t.classical > 1e-9 {
            run_start.get_or_insert(k);
        } else if let Some(s) = run_start.take() {
            if best.is_none_or(|(bs, be)| k - 1 - s > be - bs) {
                best = Some((s, k - 1));
            }
        }
    }
    if let Some(s) = run_start {
        let e = traj.triples.len() - 1;
        if best.is_none_or(|(bs, be)| e - s > be - bs) {
            best = Some((s, e));
        }
    }
    best.map(|(s, e)| (traj.p_grid[s], traj.p_grid[e]))
}

/// Which tuning parameter a critical scan varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanParameter {
    Lambda,
    Gamma,
    Delta,
}

impl ScanParameter {
    pub fn name(&self) -> &'static str {
        match self {
            ScanParameter::Lambda => "lambda",
            ScanParameter::Gamma => "gamma",
            ScanParameter::Delta => "delta",
        }
    }

    /// Critical values of the tuning parameter: λ_c = 1 (Ising),
    /// γ = 0 (anisotropy), Δ = ±1 (XXZ).
    pub fn critical_values(&self) -> &'static [f64] {
        match self {
            ScanParameter::Lambda => &[1.0],
            ScanParameter::Gamma => &[0.0],
            ScanParameter::Delta => &[-1.0, 1.0],
        }
    }
}

impl std::str::FromStr for ScanParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lambda" => Ok(ScanParameter::Lambda),
            "gamma" => Ok(ScanParameter::Gamma),
            "delta" => Ok(ScanParameter::Delta),
            other => Err(Error::InvalidParameter(format!(
                "unknown scan parameter '{other}'"
            ))),
        }
    }
}

/// Scan configuration. For λ scans γ is fixed from `fixed_gamma` and vice
/// versa; Δ scans resolve every grid point through the ingested correlator
/// table.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub parameter: ScanParameter,
    pub grid: Vec<f64>,
    pub channel: ChannelKind,
    pub fixed_lambda: f64,
    pub fixed_gamma: f64,
    pub r: usize,
    pub quad: QuadratureConfig,
    /// Allow grid points sitting exactly on a critical value. Off by
    /// default: the quantity of interest is the divergence of dp_sc as the
    /// critical point is approached, never a value at it.
    pub allow_critical: bool,
}

impl ScanConfig {
    pub fn new(parameter: ScanParameter, grid: Vec<f64>, channel: ChannelKind) -> Self {
        Self {
            parameter,
            grid,
            channel,
            fixed_lambda: 0.5,
            fixed_gamma: 1.0,
            r: 1,
            quad: QuadratureConfig::default(),
            allow_critical: false,
        }
    }
}

/// Whether the p_sc derivative grows toward the nearest critical point:
/// fires when |d| at the closest grid point is at least twice |d| ten grid
/// steps away. An honest finite-grid restatement of a divergence.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DivergenceIndicator {
    pub critical_value: f64,
    pub at: f64,
    pub reference: f64,
    pub derivative_at: f64,
    pub derivative_reference: f64,
    pub fires: bool,
}

/// p_sc and its finite-difference derivative along a tuning-parameter grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CriticalScan {
    pub parameter: ScanParameter,
    pub channel: ChannelKind,
    pub grid: Vec<f64>,
    pub p_sc: Vec<Option<f64>>,
    pub derivative: Vec<Option<f64>>,
    pub divergence: Option<DivergenceIndicator>,
}

/// Run a critical scan. Grid points evaluate independently (in parallel);
/// results are assembled in grid order.
pub fn scan(cfg: &ScanConfig, table: Option<&CorrelatorTable>) -> Result<CriticalScan> {
    if cfg.grid.len() < 2 || !cfg.grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(
            "scan grid must be strictly increasing with at least two points".into(),
        ));
    }
    if !cfg.allow_critical {
        for &v in &cfg.grid {
            if cfg
                .parameter
                .critical_values()
                .iter()
                .any(|&c| (v - c).abs() < 1e-12)
            {
                return Err(Error::InvalidParameter(format!(
                    "grid contains the critical value {v}; scans approach critical points, \
                     they do not sit on them"
                )));
            }
        }
    }
    if cfg.parameter == ScanParameter::Delta && table.is_none() {
        return Err(Error::UnsupportedModel(
            "delta scans need an ingested XXZ correlator table".into(),
        ));
    }

    let p_sc: Vec<Option<f64>> =
        cfg.grid
            .par_iter()
            .map(|&v| -> Result<Option<f64>> {
                let set = match cfg.parameter {
                    ScanParameter::Lambda => {
                        let point = ModelPoint::xy(v, cfg.fixed_gamma, cfg.r)?;
                        correlator_set(&point, &cfg.quad)?
                    }
                    ScanParameter::Gamma => {
                        let point = ModelPoint::xy(cfg.fixed_lambda, v, cfg.r)?;
                        correlator_set(&point, &cfg.quad)?
                    }
                    ScanParameter::Delta => *table_lookup_xxz(table.unwrap(), v, cfg.r)
                        .ok_or_else(|| {
                            Error::InsufficientData(format!(
                                "correlator table has no xxz row with delta = {v}, r = {}",
                                cfg.r
                            ))
                        })?,
                };
                let initial = XState::from_correlators(&set)?;
                Ok(detect_p_sc(&initial, cfg.channel, None)?.p_sc())
            })
            .collect::<Result<_>>()?;

    if !p_sc.windows(3).any(|w| w.iter().all(Option::is_some)) {
        return Err(Error::InsufficientData(
            "fewer than 3 consecutive grid points have a sudden change; no derivative can \
             be formed"
                .into(),
        ));
    }

    // Central differences where three consecutive values exist; one-sided
    // at the scan boundaries.
    let n = cfg.grid.len();
    let mut derivative = vec![None; n];
    for k in 0..n {
        derivative[k] = match k {
            0 => two_point(&cfg.grid, &p_sc, 0, 1),
            _ if k == n - 1 => two_point(&cfg.grid, &p_sc, n - 2, n - 1),
            _ => match (p_sc[k - 1], p_sc[k + 1]) {
                (Some(a), Some(b)) => Some((b - a) / (cfg.grid[k + 1] - cfg.grid[k - 1])),
                _ => None,
            },
        };
    }

    let divergence = divergence_indicator(cfg.parameter, &cfg.grid, &derivative);

    Ok(CriticalScan {
        parameter: cfg.parameter,
        channel: cfg.channel,
        grid: cfg.grid.clone(),
        p_sc,
        derivative,
        divergence,
    })
}

fn two_point(grid: &[f64], p_sc: &[Option<f64>], i: usize, j: usize) -> Option<f64> {
    match (p_sc[i], p_sc[j]) {
        (Some(a), Some(b)) => Some((b - a) / (grid[j] - grid[i])),
        _ => None,
    }
}

fn divergence_indicator(
    parameter: ScanParameter,
    grid: &[f64],
    derivative: &[Option<f64>],
) -> Option<DivergenceIndicator> {
    // nearest grid point to the nearest critical value
    let (_, critical, at_idx) = parameter
        .critical_values()
        .iter()
        .flat_map(|&c| {
            grid.iter()
                .enumerate()
                .map(move |(i, &g)| ((g - c).abs(), c, i))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))?;
    let ref_idx = if at_idx >= 10 {
        at_idx - 10
    } else if at_idx + 10 < grid.len() {
        at_idx + 10
    } else {
        return None;
    };
    let d_at = derivative[at_idx]?;
    let d_ref = derivative[ref_idx]?;
    Some(DivergenceIndicator {
        critical_value: critical,
        at: grid[at_idx],
        reference: grid[ref_idx],
        derivative_at: d_at,
        derivative_reference: d_ref,
        fires: d_at.abs() >= 2.0 * d_ref.abs(),
    })
}
