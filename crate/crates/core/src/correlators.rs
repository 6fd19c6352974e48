//! Exact ground-state correlators of the transverse-field XY chain in the
//! thermodynamic limit, plus ingestion of externally computed correlator
//! tables for models (XXZ) whose correlators this crate does not derive.
//!
//! The chain Hamiltonian is parametrized by the inverse field strength λ
//! and the anisotropy γ; the transverse-field Ising model is the γ = ±1
//! special case. Single-site magnetization and the xx/yy/zz two-site
//! correlators come from one-dimensional integrals over the mode angle φ
//! and from determinants of small Toeplitz matrices built out of the
//! G-coefficients.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureConfig};

/// Largest supported spin separation. The Toeplitz determinants are r x r;
/// the analysis in this crate targets near-neighbour separations.
pub const MAX_SEPARATION: usize = 16;

/// Spin model family of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Transverse-field XY chain (λ, γ).
    Xy,
    /// Transverse-field Ising model: XY at |γ| = 1.
    Tim,
    /// XXZ chain (Δ); correlators must be ingested from a table.
    Xxz,
    /// Any other externally tabulated model.
    External,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ModelKind::Xy => "xy",
            ModelKind::Tim => "tim",
            ModelKind::Xxz => "xxz",
            ModelKind::External => "external",
        };
        f.write_str(s)
    }
}

/// A spin model identifier together with its tuning parameters and the
/// separation r = |i - j| of the spin pair.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ModelPoint {
    kind: ModelKind,
    lambda: f64,
    gamma: f64,
    delta: f64,
    r: usize,
}

impl ModelPoint {
    /// Transverse-field XY point. Requires λ ≥ 0, |γ| ≤ 1, r ≥ 1.
    pub fn xy(lambda: f64, gamma: f64, r: usize) -> Result<Self> {
        Self::check_xy_params(lambda, gamma)?;
        Self::check_r(r)?;
        Ok(Self {
            kind: if gamma.abs() == 1.0 {
                ModelKind::Tim
            } else {
                ModelKind::Xy
            },
            lambda,
            gamma,
            delta: 0.0,
            r,
        })
    }

    /// Transverse-field Ising point: forces γ = 1. The γ = -1 branch is
    /// reachable through [`ModelPoint::xy`].
    pub fn tim(lambda: f64, r: usize) -> Result<Self> {
        let mut p = Self::xy(lambda, 1.0, r)?;
        p.kind = ModelKind::Tim;
        Ok(p)
    }

    /// XXZ point; carries Δ and ignores λ, γ.
    pub fn xxz(delta: f64, r: usize) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "xxz anisotropy delta must be finite, got {delta}"
            )));
        }
        Self::check_r(r)?;
        Ok(Self {
            kind: ModelKind::Xxz,
            lambda: 0.0,
            gamma: 0.0,
            delta,
            r,
        })
    }

    /// Point for an externally tabulated model with no named parameters.
    pub fn external(r: usize) -> Result<Self> {
        Self::check_r(r)?;
        Ok(Self {
            kind: ModelKind::External,
            lambda: 0.0,
            gamma: 0.0,
            delta: 0.0,
            r,
        })
    }

    fn check_xy_params(lambda: f64, gamma: f64) -> Result<()> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        if !gamma.is_finite() || gamma.abs() > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in [-1, 1], got {gamma}"
            )));
        }
        Ok(())
    }

    fn check_r(r: usize) -> Result<()> {
        if r == 0 {
            return Err(Error::InvalidParameter(
                "spin separation r must be >= 1".into(),
            ));
        }
        if r > MAX_SEPARATION {
            return Err(Error::SeparationTooLarge(r, MAX_SEPARATION));
        }
        Ok(())
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn r(&self) -> usize {
        self.r
    }
}

/// Single-site magnetization and two-site correlators at one model point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CorrelatorSet {
    /// ⟨σ^z⟩ (negative at λ = 0 in this convention).
    pub mz: f64,
    /// ⟨σ^x_i σ^x_{i+r}⟩
    pub sxx: f64,
    /// ⟨σ^y_i σ^y_{i+r}⟩
    pub syy: f64,
    /// ⟨σ^z_i σ^z_{i+r}⟩
    pub szz: f64,
}

impl CorrelatorSet {
    /// All entries must lie in [-1, 1].
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mz", self.mz),
            ("sxx", self.sxx),
            ("syy", self.syy),
            ("szz", self.szz),
        ] {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "correlator {name} = {v} is outside [-1, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Quasiparticle energy ω_φ = sqrt((γλ sin φ)² + (1 + λ cos φ)²).
///
/// Vanishes only at the critical point λ = 1, φ = π.
pub fn dispersion(phi: f64, lambda: f64, gamma: f64) -> f64 {
    let s = gamma * lambda * phi.sin();
    let c = 1.0 + lambda * phi.cos();
    (s * s + c * c).sqrt()
}

/// Single-site magnetization ⟨σ^z⟩ = -(1/π) ∫₀^π dφ (1 + λ cos φ)/ω_φ.
pub fn magnetization(lambda: f64, gamma: f64, quad: &QuadratureConfig) -> Result<f64> {
    ModelPoint::check_xy_params(lambda, gamma)?;
    let v = integrate(
        |phi| (1.0 + lambda * phi.cos()) / dispersion(phi, lambda, gamma),
        0.0,
        PI,
        quad,
    )?;
    Ok(-v / PI)
}

/// Toeplitz coefficient
/// G_r = (1/π) ∫₀^π dφ cos(rφ)(1 + λ cos φ)/ω_φ
///     - (γλ/π) ∫₀^π dφ sin(rφ) sin φ/ω_φ.
pub fn g_coefficient(r: i32, lambda: f64, gamma: f64, quad: &QuadratureConfig) -> Result<f64> {
    ModelPoint::check_xy_params(lambda, gamma)?;
    let rf = f64::from(r);
    let first = integrate(
        |phi| (rf * phi).cos() * (1.0 + lambda * phi.cos()) / dispersion(phi, lambda, gamma),
        0.0,
        PI,
        quad,
    )?;
    let second = integrate(
        |phi| (rf * phi).sin() * phi.sin() / dispersion(phi, lambda, gamma),
        0.0,
        PI,
        quad,
    )?;
    Ok(first / PI - gamma * lambda * second / PI)
}

/// Full correlator set of an XY/TIM point.
///
/// ⟨σ^x σ^x⟩ and ⟨σ^y σ^y⟩ are r x r Toeplitz determinants with entries
/// G_{i-j-1} and G_{i-j+1} respectively; ⟨σ^z σ^z⟩ = ⟨σ^z⟩² - G_r G_{-r}.
pub fn correlator_set(point: &ModelPoint, quad: &QuadratureConfig) -> Result<CorrelatorSet> {
    match point.kind() {
        ModelKind::Xy | ModelKind::Tim => {}
        other => {
            return Err(Error::UnsupportedModel(format!(
                "correlator_set computes XY/TIM points only; {other} correlators must be \
                 loaded from a table"
            )))
        }
    }
    let r = point.r();
    let (lambda, gamma) = (point.lambda(), point.gamma());

    // G_k for k in [-r, r], indexed by k + r.
    let mut g = Vec::with_capacity(2 * r + 1);
    for k in -(r as i32)..=(r as i32) {
        g.push(g_coefficient(k, lambda, gamma, quad)?);
    }
    let gk = |k: i32| g[(k + r as i32) as usize];

    let xx = DMatrix::from_fn(r, r, |i, j| gk(i as i32 - j as i32 - 1));
    let yy = DMatrix::from_fn(r, r, |i, j| gk(i as i32 - j as i32 + 1));
    let mz = magnetization(lambda, gamma, quad)?;

    Ok(CorrelatorSet {
        mz,
        sxx: xx.determinant(),
        syy: yy.determinant(),
        szz: mz * mz - gk(r as i32) * gk(-(r as i32)),
    })
}

/// Parsed correlator table: one `(ModelPoint, CorrelatorSet)` pair per row.
pub type CorrelatorTable = Vec<(ModelPoint, CorrelatorSet)>;

/// Look up an XXZ row by anisotropy and separation.
pub fn table_lookup_xxz(table: &CorrelatorTable, delta: f64, r: usize) -> Option<&CorrelatorSet> {
    table.iter().find_map(|(p, c)| {
        (p.kind() == ModelKind::Xxz && p.r() == r && (p.delta() - delta).abs() < 1e-9).then_some(c)
    })
}

/// Parse a correlator table from text.
///
/// Format: UTF-8, comma-separated, `#` starts a comment line, blank lines
/// ignored. The first significant line is a header naming the columns;
/// `kind` must be one of them. Recognized columns: `kind`, `lambda`,
/// `gamma`, `delta`, `r`, `mz`, `sxx`, `syy`, `szz`. Data fields may be
/// written bare (`0.5`) or as `name=value` with the name matching the
/// column. An empty input parses to an empty table.
pub fn load_correlator_table(source: &str) -> Result<CorrelatorTable> {
    let mut lines = source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let Some((header_line, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let columns: Vec<String> = header
        .split(',')
        .map(|c| c.trim().to_ascii_lowercase())
        .collect();
    if !columns.iter().any(|c| c == "kind") {
        return Err(Error::TableParse {
            line: header_line,
            msg: format!("header must name a 'kind' column, got '{header}'"),
        });
    }
    const KNOWN: [&str; 9] = [
        "kind", "lambda", "gamma", "delta", "r", "mz", "sxx", "syy", "szz",
    ];
    for c in &columns {
        if !KNOWN.contains(&c.as_str()) {
            return Err(Error::TableParse {
                line: header_line,
                msg: format!("unknown column '{c}'"),
            });
        }
    }

    let mut out = Vec::new();
    for (line_no, line) in lines {
        out.push(parse_row(&columns, line_no, line)?);
    }
    Ok(out)
}

fn parse_row(columns: &[String], line: usize, text: &str) -> Result<(ModelPoint, CorrelatorSet)> {
    let fields: Vec<&str> = text.split(',').map(str::trim).collect();
    if fields.len() != columns.len() {
        return Err(Error::TableParse {
            line,
            msg: format!(
                "expected {} fields to match the header, got {}",
                columns.len(),
                fields.len()
            ),
        });
    }

    let mut kind = None;
    let mut num = std::collections::HashMap::new();
    for (col, field) in columns.iter().zip(&fields) {
        // Accept `name=value` as long as the name matches the column.
        let value = match field.split_once('=') {
            Some((name, v)) => {
                if !name.trim().eq_ignore_ascii_case(col) {
                    return Err(Error::TableParse {
                        line,
                        msg: format!("field '{field}' does not belong to column '{col}'"),
                    });
                }
                v.trim()
            }
            None => field,
        };
        if col == "kind" {
            kind = Some(match value.to_ascii_lowercase().as_str() {
                "xy" => ModelKind::Xy,
                "tim" => ModelKind::Tim,
                "xxz" => ModelKind::Xxz,
                "external" => ModelKind::External,
                other => {
                    return Err(Error::TableParse {
                        line,
                        msg: format!("unknown model kind '{other}'"),
                    })
                }
            });
        } else if !value.is_empty() {
            let parsed: f64 = value.parse().map_err(|_| Error::TableParse {
                line,
                msg: format!("field '{col}' is not a number: '{value}'"),
            })?;
            num.insert(col.as_str(), parsed);
        }
    }

    let kind = kind.expect("header guarantees a kind column");
    let get = |name: &str| -> Result<f64> {
        num.get(name).copied().ok_or_else(|| Error::TableParse {
            line,
            msg: format!("missing required field '{name}'"),
        })
    };

    let r = get("r")?;
    if r.fract() != 0.0 || r < 1.0 {
        return Err(Error::TableParse {
            line,
            msg: format!("r must be a positive integer, got {r}"),
        });
    }
    let r = r as usize;

    let point = match kind {
        ModelKind::Xy => ModelPoint::xy(get("lambda")?, get("gamma")?, r),
        ModelKind::Tim => {
            let gamma = num.get("gamma").copied().unwrap_or(1.0);
            ModelPoint::xy(get("lambda")?, gamma, r).and_then(|p| {
                if gamma.abs() != 1.0 {
                    Err(Error::InvalidParameter(format!(
                        "tim rows require gamma = ±1, got {gamma}"
                    )))
                } else {
                    Ok(p)
                }
            })
        }
        ModelKind::Xxz => ModelPoint::xxz(get("delta")?, r),
        ModelKind::External => ModelPoint::external(r),
    }
    .map_err(|e| Error::TableParse {
        line,
        msg: e.to_string(),
    })?;

    let set = CorrelatorSet {
        mz: get("mz")?,
        sxx: get("sxx")?,
        syy: get("syy")?,
        szz: get("szz")?,
    };
    for (field, v) in [
        ("mz", set.mz),
        ("sxx", set.sxx),
        ("syy", set.syy),
        ("szz", set.szz),
    ] {
        if !v.is_finite() || v.abs() > 1.0 {
            return Err(Error::TableRange {
                line,
                field,
                value: v,
            });
        }
    }
    Ok((point, set))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen reference values keep all digits
mod tests {
    use super::*;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn dispersion_special_values() {
        assert_eq!(dispersion(0.4, 0.0, 0.9), 1.0);
        assert_eq!(dispersion(2.2, 0.0, -0.3), 1.0);
        assert!((dispersion(0.0, 1.0, 1.0) - 2.0).abs() < 1e-15);
        assert!(dispersion(PI, 1.0, 0.5).abs() < 1e-15);
    }

    #[test]
    fn magnetization_at_zero_lambda() {
        let m = magnetization(0.0, 0.7, &quad()).unwrap();
        assert!((m + 1.0).abs() < 1e-12);
    }

    #[test]
    fn magnetization_even_in_gamma() {
        let a = magnetization(0.5, 1.0, &quad()).unwrap();
        let b = magnetization(0.5, -1.0, &quad()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn magnetization_frozen_value() {
        // Independent reference: adaptive quadrature at 1e-13 tolerance
        // (SciPy QUADPACK), cross-checked by the brute-force composite rule
        // in tests/oracles.rs.
        let m = magnetization(0.7, 0.7, &quad()).unwrap();
        assert!((m - (-0.920_669_619_824_198_15)).abs() < 1e-10);
    }

    #[test]
    fn g_trivial_values() {
        assert!((g_coefficient(0, 0.0, 0.7, &quad()).unwrap() - 1.0).abs() < 1e-12);
        assert!(g_coefficient(1, 0.0, 0.7, &quad()).unwrap().abs() < 1e-12);
        assert!(
            (g_coefficient(-1, 0.7, 0.7, &quad()).unwrap() - 0.282_813_514_764_737_1).abs() < 1e-10
        );
    }

    #[test]
    fn g_reflection_maps_gamma_sign() {
        // G_r(λ, -γ) = G_{-r}(λ, γ)
        for r in [-3i32, -1, 0, 2] {
            let a = g_coefficient(r, 0.8, 0.45, &quad()).unwrap();
            let b = g_coefficient(-r, 0.8, -0.45, &quad()).unwrap();
            assert!((a - b).abs() < 1e-12, "r = {r}: {a} vs {b}");
        }
    }

    #[test]
    fn correlators_at_zero_lambda() {
        for r in [1, 2] {
            let p = ModelPoint::tim(0.0, r).unwrap();
            let c = correlator_set(&p, &quad()).unwrap();
            assert!((c.mz + 1.0).abs() < 1e-12);
            assert!(c.sxx.abs() < 1e-12);
            assert!(c.syy.abs() < 1e-12);
            assert!((c.szz - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn r1_determinant_is_single_entry() {
        let p = ModelPoint::xy(0.7, 0.7, 1).unwrap();
        let c = correlator_set(&p, &quad()).unwrap();
        let gm1 = g_coefficient(-1, 0.7, 0.7, &quad()).unwrap();
        let gp1 = g_coefficient(1, 0.7, 0.7, &quad()).unwrap();
        assert!((c.sxx - gm1).abs() < 1e-12);
        assert!((c.syy - gp1).abs() < 1e-12);
    }

    #[test]
    fn r2_determinant_matches_cofactor_expansion() {
        let p = ModelPoint::xy(0.7, 0.7, 2).unwrap();
        let c = correlator_set(&p, &quad()).unwrap();
        let g = |k: i32| g_coefficient(k, 0.7, 0.7, &quad()).unwrap();
        let sxx = g(-1) * g(-1) - g(-2) * g(0);
        let syy = g(1) * g(1) - g(0) * g(2);
        assert!((c.sxx - sxx).abs() < 1e-12);
        assert!((c.syy - syy).abs() < 1e-12);
        let mz = magnetization(0.7, 0.7, &quad()).unwrap();
        assert!((c.szz - (mz * mz - g(2) * g(-2))).abs() < 1e-12);
    }

    #[test]
    fn frozen_correlators() {
        let c = correlator_set(&ModelPoint::xy(0.7, 0.7, 1).unwrap(), &quad()).unwrap();
        assert!((c.sxx - 0.282_813_514_764_737_15).abs() < 1e-10);
        assert!((c.syy - (-0.222_007_744_450_983_06)).abs() < 1e-10);
        assert!((c.szz - 0.910_419_339_380_407_64).abs() < 1e-10);
        let c2 = correlator_set(&ModelPoint::xy(0.7, 0.7, 2).unwrap(), &quad()).unwrap();
        assert!((c2.sxx - 0.145_046_224_112_833_24).abs() < 1e-10);
        assert!((c2.syy - (-0.052_820_347_772_477_412)).abs() < 1e-10);
        assert!((c2.szz - 0.855_470_157_702_855_84).abs() < 1e-10);
    }

    #[test]
    fn unsupported_models_rejected() {
        let p = ModelPoint::xxz(0.5, 1).unwrap();
        assert!(matches!(
            correlator_set(&p, &quad()),
            Err(Error::UnsupportedModel(_))
        ));
        assert!(matches!(
            ModelPoint::xy(0.7, 0.7, 17),
            Err(Error::SeparationTooLarge(17, MAX_SEPARATION))
        ));
        assert!(ModelPoint::xy(0.7, 0.7, 0).is_err());
        assert!(ModelPoint::xy(-0.1, 0.7, 1).is_err());
        assert!(ModelPoint::xy(0.7, 1.3, 1).is_err());
    }

    #[test]
    fn tim_is_unit_anisotropy() {
        let p = ModelPoint::tim(0.5, 1).unwrap();
        assert_eq!(p.kind(), ModelKind::Tim);
        assert_eq!(p.gamma(), 1.0);
        assert_eq!(ModelPoint::xy(0.5, -1.0, 1).unwrap().kind(), ModelKind::Tim);
    }

    #[test]
    fn table_round_trip() {
        let text = "\
# comment
kind,delta,r,mz,sxx,syy,szz
xxz, delta=0.5, r=1, 0.0, 0.6, 0.6, -0.3
xxz,-1.5,1,0.0,0.53,0.53,-0.69
";
        let rows = load_correlator_table(text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].0.kind(), ModelKind::Xxz);
        assert_eq!(rows[0].0.delta(), 0.5);
        assert_eq!(rows[0].0.r(), 1);
        assert_eq!(rows[0].1.sxx, 0.6);
        assert!(table_lookup_xxz(&rows, -1.5, 1).is_some());
        assert!(table_lookup_xxz(&rows, -1.5, 2).is_none());
    }

    #[test]
    fn table_range_error_names_field() {
        let text = "kind,delta,r,mz,sxx,syy,szz\nxxz,0.5,1,0.0,0.6,0.6,1.5\n";
        match load_correlator_table(text).unwrap_err() {
            Error::TableRange { line, field, value } => {
                assert_eq!(line, 2);
                assert_eq!(field, "szz");
                assert_eq!(value, 1.5);
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn table_parse_error_carries_line() {
        let text = "kind,delta,r,mz,sxx,syy,szz\n\nxxz,0.5,1,0.0,0.6,0.6\n";
        match load_correlator_table(text).unwrap_err() {
            Error::TableParse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad = "kind,delta,r,mz,sxx,syy,szz\nxxz,abc,1,0.0,0.6,0.6,0.1\n";
        assert!(matches!(
            load_correlator_table(bad),
            Err(Error::TableParse { line: 2, .. })
        ));
    }

    #[test]
    fn empty_table_is_ok() {
        assert!(load_correlator_table("").unwrap().is_empty());
        assert!(load_correlator_table("# only comments\n\n")
            .unwrap()
            .is_empty());
        assert!(load_correlator_table("kind,delta,r,mz,sxx,syy,szz\n")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn xy_rows_parse() {
        let text = "kind,lambda,gamma,r,mz,sxx,syy,szz\nxy,0.7,0.7,1,-0.92,0.28,-0.22,0.91\n";
        let rows = load_correlator_table(text).unwrap();
        assert_eq!(rows[0].0.lambda(), 0.7);
        assert_eq!(rows[0].0.gamma(), 0.7);
    }

    #[test]
    fn header_without_kind_rejected() {
        assert!(matches!(
            load_correlator_table("delta,r,mz,sxx,syy,szz\n"),
            Err(Error::TableParse { line: 1, .. })
        ));
    }
}
