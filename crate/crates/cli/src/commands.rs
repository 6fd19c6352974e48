//! The correlators, trajectory and scan subcommands.

use serde_json::{json, Value};

use qdx_core::{
    classify, correlator_set, detect_p_sc, load_correlator_table, q_exceeds_c_interval, scan,
    table_lookup_xxz, trajectory_from_state, ChannelKind, CorrelatorTable, DetectionMethod,
    Error as CoreError, ModelPoint, QuadratureConfig, ScanConfig, ScanParameter, SuddenChange,
    XState,
};

use crate::error::CliError;
use crate::output::{Cell, Report};

pub fn parse_grid_spec(spec: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "grid '{spec}' must have the form from:to:step"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("grid component '{p}' is not a number")))
        })
        .collect::<Result<_, _>>()?;
    Ok((nums[0], nums[1], nums[2]))
}

pub fn build_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step.is_finite() && step > 0.0) || to <= from {
        return Err(CliError::usage(format!(
            "grid requires from < to and step > 0, got {from}:{to}:{step}"
        )));
    }
    let n = ((to - from) / step).round() as usize + 1;
    Ok((0..n).map(|i| from + i as f64 * step).collect())
}

pub fn load_table(path: &std::path::Path) -> Result<CorrelatorTable, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read table {}: {e}", path.display())))?;
    Ok(load_correlator_table(&text)?)
}

fn resolve_xy(
    model: &str,
    lambda: f64,
    gamma: Option<f64>,
    r: usize,
) -> Result<ModelPoint, CliError> {
    match model {
        "xy" => {
            let gamma = gamma.ok_or_else(|| CliError::usage("xy model needs --gamma".into()))?;
            Ok(ModelPoint::xy(lambda, gamma, r)?)
        }
        "tim" => match gamma {
            None => Ok(ModelPoint::tim(lambda, r)?),
            Some(g) if g.abs() == 1.0 => Ok(ModelPoint::xy(lambda, g, r)?),
            Some(g) => Err(CliError::usage(format!("tim requires gamma = ±1, got {g}"))),
        },
        other => Err(CliError::usage(format!(
            "model '{other}' is not computable here (xy or tim)"
        ))),
    }
}

pub struct CorrelatorsArgs {
    pub model: String,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub r: usize,
    pub lambda_grid: Option<String>,
    pub quad: QuadratureConfig,
}

pub fn cmd_correlators(args: &CorrelatorsArgs) -> Result<Report, CliError> {
    let lambdas = match (&args.lambda_grid, args.lambda) {
        (Some(spec), _) => {
            let (from, to, step) = parse_grid_spec(spec)?;
            build_grid(from, to, step)?
        }
        (None, Some(l)) => vec![l],
        (None, None) => {
            return Err(CliError::usage(
                "either --lambda or --lambda-grid is required".into(),
            ))
        }
    };

    let config = json!({
        "command": "correlators",
        "model": args.model,
        "gamma": args.gamma,
        "r": args.r,
        "lambda_grid": args.lambda_grid,
        "lambda": args.lambda,
    });
    let mut report = Report::new(
        config,
        vec!["kind", "lambda", "gamma", "r", "mz", "sxx", "syy", "szz"],
    );

    for lambda in lambdas {
        let point = resolve_xy(&args.model, lambda, args.gamma, args.r)?;
        let c = correlator_set(&point, &args.quad)?;
        report.push_row(vec![
            Cell::Text(point.kind().to_string()),
            Cell::Float(point.lambda()),
            Cell::Float(point.gamma()),
            Cell::Int(point.r() as i64),
            Cell::Float(c.mz),
            Cell::Float(c.sxx),
            Cell::Float(c.syy),
            Cell::Float(c.szz),
        ]);
    }
    Ok(report)
}

pub struct TrajectoryArgs {
    pub model: String,
    pub channel: ChannelKind,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub r: usize,
    pub table: Option<std::path::PathBuf>,
    pub p_points: usize,
    pub p_max: f64,
    pub quad: QuadratureConfig,
}

fn resolve_initial_state(args: &TrajectoryArgs) -> Result<(XState, Option<ModelPoint>), CliError> {
    match args.model.as_str() {
        "xy" | "tim" => {
            let lambda = args
                .lambda
                .ok_or_else(|| CliError::usage("missing --lambda".into()))?;
            let point = resolve_xy(&args.model, lambda, args.gamma, args.r)?;
            let set = correlator_set(&point, &args.quad)?;
            Ok((XState::from_correlators(&set)?, Some(point)))
        }
        "xxz" => {
            let delta = args
                .delta
                .ok_or_else(|| CliError::usage("xxz model needs --delta".into()))?;
            let path = args
                .table
                .as_ref()
                .ok_or_else(|| CliError::usage("xxz model needs --table".into()))?;
            let table = load_table(path)?;
            let set = *table_lookup_xxz(&table, delta, args.r).ok_or_else(|| {
                CoreError::InsufficientData(format!(
                    "table has no xxz row with delta = {delta}, r = {}",
                    args.r
                ))
            })?;
            Ok((
                XState::from_correlators(&set)?,
                Some(ModelPoint::xxz(delta, args.r)?),
            ))
        }
        other => Err(CliError::usage(format!("unknown model '{other}'"))),
    }
}

pub fn cmd_trajectory(args: &TrajectoryArgs) -> Result<Report, CliError> {
    if args.p_points < 2 || !(0.0..1.0).contains(&args.p_max) {
        return Err(CliError::usage(
            "trajectory needs --p-points >= 2 and --p-max in (0, 1)".into(),
        ));
    }
    let (initial, model) = resolve_initial_state(args)?;
    let grid = qdx_core::dynamics::uniform_grid(0.0, args.p_max, args.p_points);
    let traj = trajectory_from_state(&initial, model, args.channel, &grid)?;

    let config = json!({
        "command": "trajectory",
        "model": args.model,
        "channel": args.channel.abbrev(),
        "lambda": args.lambda,
        "gamma": args.gamma,
        "delta": args.delta,
        "r": args.r,
        "p_points": args.p_points,
        "p_max": args.p_max,
    });
    let mut report = Report::new(
        config,
        vec!["p", "mutual", "classical", "discord", "branch"],
    );
    report.footer_entry(
        "initial_state",
        serde_json::to_value(initial).expect("five plain fields"),
    );
    for ((p, t), branch) in grid.iter().zip(&traj.triples).zip(&traj.branches) {
        report.push_row(vec![
            Cell::Float(*p),
            Cell::Float(t.mutual),
            Cell::Float(t.classical),
            Cell::Float(t.discord),
            Cell::Text(branch.to_string()),
        ]);
    }

    // diagnostics: sudden change, classification, Q > C window
    if args.channel != ChannelKind::AmplitudeDamping {
        match detect_p_sc(&initial, args.channel, Some((0.0, args.p_max)))? {
            SuddenChange::At { p_sc, method } => {
                report.footer_entry("p_sc", json!(p_sc));
                report.footer_entry(
                    "p_sc_method",
                    json!(match method {
                        DetectionMethod::BranchCrossing => "branch-crossing",
                        DetectionMethod::SlopeChange => "slope-change",
                    }),
                );
            }
            SuddenChange::Absent => report.footer_entry("p_sc", Value::Null),
        }
    }
    if grid.len() >= 50 {
        let class = match classify(&traj) {
            Ok(t) => t.to_string(),
            Err(CoreError::Unclassifiable(_)) => "unclassifiable".to_string(),
            Err(e) => return Err(e.into()),
        };
        report.footer_entry("classification", json!(class));
    }
    match q_exceeds_c_interval(&traj) {
        Some((lo, hi)) => report.footer_entry("q_exceeds_c", json!({ "from": lo, "to": hi })),
        None => report.footer_entry("q_exceeds_c", Value::Null),
    }
    Ok(report)
}

pub struct ScanArgs {
    pub parameter: ScanParameter,
    pub channel: ChannelKind,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
    pub lambda: f64,
    pub gamma: f64,
    pub r: usize,
    pub table: Option<std::path::PathBuf>,
    pub allow_critical: bool,
    pub quad: QuadratureConfig,
}

pub fn cmd_scan(args: &ScanArgs) -> Result<Report, CliError> {
    let table = match &args.table {
        Some(path) => Some(load_table(path)?),
        None => None,
    };

    let grid = match (args.from, args.to, args.step) {
        (Some(f), Some(t), Some(s)) => build_grid(f, t, s)?,
        (None, None, None) if args.parameter == ScanParameter::Delta => {
            // default to the table's own grid
            let table = table
                .as_ref()
                .ok_or_else(|| CliError::usage("delta scans need --table".into()))?;
            let mut deltas: Vec<f64> = table
                .iter()
                .filter(|(p, _)| p.r() == args.r)
                .map(|(p, _)| p.delta())
                .collect();
            deltas.sort_by(f64::total_cmp);
            deltas.dedup();
            deltas
        }
        _ => {
            return Err(CliError::usage(
                "scan needs --from, --to and --step (all three), or a --table for delta scans"
                    .into(),
            ))
        }
    };

    let mut cfg = ScanConfig::new(args.parameter, grid, args.channel);
    cfg.fixed_lambda = args.lambda;
    cfg.fixed_gamma = args.gamma;
    cfg.r = args.r;
    cfg.allow_critical = args.allow_critical;
    cfg.quad = args.quad;
    let out = scan(&cfg, table.as_ref())?;

    let name = args.parameter.name();
    let columns = match args.parameter {
        ScanParameter::Lambda => vec!["lambda", "p_sc", "dp_sc_dlambda"],
        ScanParameter::Gamma => vec!["gamma", "p_sc", "dp_sc_dgamma"],
        ScanParameter::Delta => vec!["delta", "p_sc", "dp_sc_ddelta"],
    };
    let config = json!({
        "command": "scan",
        "parameter": name,
        "channel": args.channel.abbrev(),
        "lambda": args.lambda,
        "gamma": args.gamma,
        "r": args.r,
        "from": args.from,
        "to": args.to,
        "step": args.step,
    });
    let mut report = Report::new(config, columns);
    for ((v, p_sc), deriv) in out.grid.iter().zip(&out.p_sc).zip(&out.derivative) {
        report.push_row(vec![
            Cell::Float(*v),
            Cell::OptFloat(*p_sc),
            Cell::OptFloat(*deriv),
        ]);
    }

    match &out.divergence {
        Some(ind) => {
            report.footer_entry(
                "divergence",
                json!({
                    "critical_value": ind.critical_value,
                    "at": ind.at,
                    "reference": ind.reference,
                    "derivative_at": ind.derivative_at,
                    "derivative_reference": ind.derivative_reference,
                    "fires": ind.fires,
                }),
            );
            eprintln!(
                "scan divergence: fires={} |d({})|={:.6e} |d({})|={:.6e} critical={}",
                ind.fires,
                ind.at,
                ind.derivative_at.abs(),
                ind.reference,
                ind.derivative_reference.abs(),
                ind.critical_value
            );
        }
        None => {
            report.footer_entry("divergence", Value::Null);
            eprintln!("scan divergence: undefined (derivatives missing near the critical value)");
        }
    }
    Ok(report)
}
