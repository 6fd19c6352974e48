//! Optional TOML configuration file. Each subcommand reads its own
//! section; values act as defaults that explicit command-line flags
//! override. Checked-in config files make sweeps reproducible.

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub correlators: CorrelatorsSection,
    #[serde(default)]
    pub trajectory: TrajectorySection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelatorsSection {
    pub model: Option<String>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub r: Option<usize>,
    pub lambda_grid: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySection {
    pub model: Option<String>,
    pub channel: Option<String>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub r: Option<usize>,
    pub table: Option<String>,
    pub p_points: Option<usize>,
    pub p_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub parameter: Option<String>,
    pub channel: Option<String>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub r: Option<usize>,
    pub table: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub seed: Option<u64>,
    pub states: Option<usize>,
    pub discord_states: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&std::path::Path>) -> Result<Self, String> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
                toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", p.display()))
            }
        }
    }
}

/// First Some wins: explicit flag, then config file, then the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Like [`pick`] but without a default; errors with the flag name.
pub fn require<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, String> {
    flag.or(file)
        .ok_or_else(|| format!("missing required parameter --{name}"))
}
