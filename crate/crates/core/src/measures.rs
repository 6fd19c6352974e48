//! Correlation measures of X states: von Neumann entropies, quantum mutual
//! information, classical correlations and quantum discord.
//!
//! Two independent routes to the discord are provided. The analytic route
//! evaluates the known two-candidate minimum for X states (a σ_z
//! measurement on B against the best equatorial measurement). The numeric
//! route minimizes the measured conditional entropy over a grid of
//! projective measurement directions on B followed by a local refinement,
//! working directly on the 4x4 matrix; it serves as the brute-force oracle
//! for the analytic formulas. Everything is in bits (log base 2).

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::xstate::XState;

/// Tolerance below which a spectrum entry counts as an outright error
/// rather than clamp-able rounding noise.
const NEG_PROB_TOL: f64 = 1e-12;

/// Breaking tie tolerance between the two analytic discord candidates.
const BRANCH_TIE_TOL: f64 = 1e-12;

/// The mutual information I, classical correlations C and quantum discord Q
/// of one state, with I = C + Q by construction.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CorrelationTriple {
    pub mutual: f64,
    pub classical: f64,
    pub discord: f64,
}

/// Which analytic candidate attained the discord minimum. Q1 is the σ_z
/// measurement branch, Q2 the equatorial branch; ties report Q2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DiscordBranch {
    Q1,
    Q2,
}

impl std::fmt::Display for DiscordBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DiscordBranch::Q1 => "Q1",
            DiscordBranch::Q2 => "Q2",
        })
    }
}

/// Bloch direction n̂(θ, φ) of the projectors Π_± = (I ± n̂·σ)/2 applied to
/// qubit B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

/// Angular resolution of the numeric discord search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_theta: 181,
            n_phi: 91,
        }
    }
}

/// -Σ λ log₂ λ with the 0·log 0 = 0 convention. Entries in
/// [-1e-12, 0) are treated as 0; anything more negative is an error.
pub fn binary_entropy_terms(spectrum: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &lam in spectrum {
        if lam < -NEG_PROB_TOL {
            return Err(Error::NegativeProbability(lam));
        }
        if lam > 0.0 {
            sum -= lam * lam.log2();
        }
    }
    Ok(sum)
}

/// Binary entropy H(x) = -x log₂ x - (1-x) log₂ (1-x), clamped into [0, 1].
fn h_bin(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let mut s = 0.0;
    if x > 0.0 {
        s -= x * x.log2();
    }
    if x < 1.0 {
        s -= (1.0 - x) * (1.0 - x).log2();
    }
    s
}

/// Entropy of either marginal. Both reduce to diag((1 ± c4)/2), so
/// S(ρ_A) = S(ρ_B).
pub fn marginal_entropy(x: &XState) -> f64 {
    let c4 = x.coefficients().c4;
    h_bin(0.5 * (1.0 + c4))
}

/// Joint entropy from the closed-form spectrum.
pub fn joint_entropy(x: &XState) -> f64 {
    binary_entropy_terms(&x.eigenvalues().as_array()).expect("spectrum is clamped non-negative")
}

/// Quantum mutual information I = S(ρ_A) + S(ρ_B) - S(ρ_AB).
pub fn mutual_information(x: &XState) -> f64 {
    2.0 * marginal_entropy(x) - joint_entropy(x)
}

/// The measured conditional entropies behind the analytic discord, one per
/// measurement axis on B, together with the two entropies they combine
/// with. `cond_eq` is the best equatorial direction via
/// Γ² = (a-d)² + 4(|z| + |f|)²; it always equals min(cond_x, cond_y).
#[derive(Debug, Clone, Copy)]
pub struct AnalyticBranches {
    pub s_marginal: f64,
    pub s_joint: f64,
    pub cond_z: f64,
    pub cond_x: f64,
    pub cond_y: f64,
    pub cond_eq: f64,
}

impl AnalyticBranches {
    /// Q1 = S(ρ_B) - S(ρ_AB) + cond_z.
    pub fn q1(&self) -> f64 {
        self.s_marginal - self.s_joint + self.cond_z
    }

    /// Q2 = S(ρ_B) - S(ρ_AB) + cond_eq (the Δ± form).
    pub fn q2(&self) -> f64 {
        self.s_marginal - self.s_joint + self.cond_eq
    }
}

/// Evaluate the analytic candidate branches of one state.
pub fn analytic_branches(x: &XState) -> AnalyticBranches {
    let (a, b, d, z, f) = (x.a(), x.b(), x.d(), x.z(), x.f());
    let c = x.coefficients();

    // σ_z measurement: outcome probabilities a+b and b+d, conditional
    // states diag(a, b)/(a+b) and diag(b, d)/(b+d). Written as the four
    // -v log₂(v/total) terms with zero denominators contributing nothing.
    let mut cond_z = 0.0;
    for (num, tot) in [(a, a + b), (b, a + b), (d, d + b), (b, d + b)] {
        if num > 0.0 && tot > 0.0 {
            cond_z -= num * (num / tot).log2();
        }
    }

    let gamma_eq = ((a - d) * (a - d) + 4.0 * (z.abs() + f.abs()) * (z.abs() + f.abs())).sqrt();
    let gamma_x = (c.c4 * c.c4 + c.c1 * c.c1).sqrt();
    let gamma_y = (c.c4 * c.c4 + c.c2 * c.c2).sqrt();

    AnalyticBranches {
        s_marginal: marginal_entropy(x),
        s_joint: joint_entropy(x),
        cond_z,
        cond_x: h_bin(0.5 * (1.0 + gamma_x.min(1.0))),
        cond_y: h_bin(0.5 * (1.0 + gamma_y.min(1.0))),
        cond_eq: h_bin(0.5 * (1.0 + gamma_eq.min(1.0))),
    }
}

/// Analytic quantum discord Q = min{Q1, Q2} and the attaining branch.
pub fn discord_analytic(x: &XState) -> (f64, DiscordBranch) {
    let br = analytic_branches(x);
    let (q1, q2) = (br.q1(), br.q2());
    if q1 < q2 - BRANCH_TIE_TOL {
        (q1, DiscordBranch::Q1)
    } else {
        (q2, DiscordBranch::Q2)
    }
}

fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -Complex64::i(), Complex64::i(), o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// S(ρ_AB | {Π_i^B}) = Σ_i p_i S(ρ_i) for the projective measurement along
/// n̂(θ, φ) on B, evaluated on the explicit 4x4 matrix. Outcomes with
/// p_i = 0 contribute nothing.
pub fn conditional_entropy_measured(x: &XState, m: &MeasurementBasis) -> f64 {
    let rho = x.to_complex_matrix();
    let [sx, sy, sz] = pauli();
    let n = [
        m.theta.sin() * m.phi.cos(),
        m.theta.sin() * m.phi.sin(),
        m.theta.cos(),
    ];
    let ndot = sx * Complex64::new(n[0], 0.0)
        + sy * Complex64::new(n[1], 0.0)
        + sz * Complex64::new(n[2], 0.0);

    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let proj =
            (Matrix2::identity() + ndot * Complex64::new(sign, 0.0)) * Complex64::new(0.5, 0.0);
        let meas = Matrix2::<Complex64>::identity().kronecker(&proj);
        let projected: Matrix4<Complex64> = meas * rho * meas;
        let p = projected.trace().re;
        if p <= 1e-15 {
            continue;
        }
        // conditional state of A: partial trace over B
        let mut red = Matrix2::<Complex64>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                red[(i, j)] = (projected[(2 * i, 2 * j)] + projected[(2 * i + 1, 2 * j + 1)])
                    / Complex64::new(p, 0.0);
            }
        }
        // eigenvalues of a 2x2 Hermitian matrix
        let mean = 0.5 * (red[(0, 0)].re + red[(1, 1)].re);
        let delta = 0.5 * (red[(0, 0)].re - red[(1, 1)].re);
        let root = (delta * delta + red[(0, 1)].norm_sqr()).sqrt();
        total += p * (h_bin((mean + root).clamp(0.0, 1.0)));
    }
    total
}

/// Brute-force discord: minimize the measured conditional entropy over a
/// θ x φ grid, refine the best cell by compass search to 1e-10 in the
/// objective, then assemble Q = S(ρ_B) - S(ρ_AB) + min S(ρ_AB | {Π}).
///
/// The grid reduction is deterministic: ties break toward the smallest θ
/// index, then the smallest φ index.
pub fn discord_numeric(x: &XState, grid: &GridSpec) -> f64 {
    let n_theta = grid.n_theta.max(2);
    let n_phi = grid.n_phi.max(1);
    let dtheta = std::f64::consts::PI / (n_theta - 1) as f64;
    let dphi = std::f64::consts::TAU / n_phi as f64;

    let best = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * dtheta;
            let mut local = (f64::INFINITY, i, 0usize);
            for j in 0..n_phi {
                let phi = j as f64 * dphi;
                let v = conditional_entropy_measured(x, &MeasurementBasis { theta, phi });
                if v < local.0 {
                    local = (v, i, j);
                }
            }
            local
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );

    // Compass refinement with shrinking step.
    let mut theta = best.1 as f64 * dtheta;
    let mut phi = best.2 as f64 * dphi;
    let mut value = best.0;
    let mut step = dtheta.max(dphi);
    while step > 1e-8 {
        let mut improved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let cand = MeasurementBasis {
                theta: theta + dt,
                phi: phi + dp,
            };
            let v = conditional_entropy_measured(x, &cand);
            if v < value - 1e-16 {
                value = v;
                theta = cand.theta;
                phi = cand.phi;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    marginal_entropy(x) - joint_entropy(x) + value
}

/// Mutual information, classical correlations and discord via the analytic
/// branch formulas; C = I - Q.
pub fn triple(x: &XState) -> CorrelationTriple {
    let mutual = mutual_information(x);
    let (discord, _) = discord_analytic(x);
    CorrelationTriple {
        mutual,
        classical: mutual - discord,
        discord,
    }
}

/// Same as [`triple`] but with the discord from the brute-force
/// measurement minimization.
pub fn triple_numeric(x: &XState, grid: &GridSpec) -> CorrelationTriple {
    let mutual = mutual_information(x);
    let discord = discord_numeric(x, grid);
    CorrelationTriple {
        mutual,
        classical: mutual - discord,
        discord,
    }
}
