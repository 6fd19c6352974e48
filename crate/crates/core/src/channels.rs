//! Markovian decoherence channels in the Kraus representation.
//!
//! Each qubit couples to its own local environment with identical strength,
//! so a two-qubit state evolves through the tensor-product Kraus sum
//! ρ' = Σ_{μν} (E_μ ⊗ E_ν) ρ (E_μ ⊗ E_ν)†. Interaction time enters through
//! the parametrized time p = 1 - e^{-θt}. For the flip channels the action
//! on an X state collapses to closed-form maps on the correlation
//! coefficients; amplitude damping has no such map and always runs through
//! the full Kraus sum.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::xstate::{CorrelationCoefficients, XState};

/// Largest tolerated magnitude outside the X pattern after evolution.
pub const PATTERN_TOL: f64 = 1e-13;

/// The four decoherence channels. Phase damping is not listed separately:
/// its quantum operation is identical to the phase flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ChannelKind {
    AmplitudeDamping,
    PhaseFlip,
    BitFlip,
    BitPhaseFlip,
}

impl ChannelKind {
    pub fn abbrev(&self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "AD",
            ChannelKind::PhaseFlip => "PF",
            ChannelKind::BitFlip => "BF",
            ChannelKind::BitPhaseFlip => "BPF",
        }
    }
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.abbrev())
    }
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ad" | "amplitude-damping" => Ok(ChannelKind::AmplitudeDamping),
            // phase damping acts identically to the phase flip
            "pf" | "phase-flip" | "pd" | "phase-damping" => Ok(ChannelKind::PhaseFlip),
            "bf" | "bit-flip" => Ok(ChannelKind::BitFlip),
            "bpf" | "bit-phase-flip" => Ok(ChannelKind::BitPhaseFlip),
            other => Err(Error::InvalidParameter(format!(
                "unknown channel '{other}' (expected ad, pf, bf or bpf)"
            ))),
        }
    }
}

/// Parametrized time p ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize)]
pub struct ParametrizedTime(f64);

impl ParametrizedTime {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "parametrized time p must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self(p))
    }

    /// p = 1 - e^{-θt} for decay rate θ ≥ 0 and time t ≥ 0; lands in [0, 1).
    pub fn from_rate_time(theta: f64, t: f64) -> Result<Self> {
        if !(theta.is_finite() && theta >= 0.0) || !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "decay rate and time must be non-negative, got theta = {theta}, t = {t}"
            )));
        }
        Self::new(1.0 - (-theta * t).exp())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Single-qubit Kraus operators of one channel at one time.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub ops: Vec<Matrix2<Complex64>>,
}

impl KrausSet {
    /// Max-magnitude entry of Σ E†E - I. Zero (to rounding) for every
    /// channel at every p.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = Matrix2::<Complex64>::zeros();
        for e in &self.ops {
            sum += e.adjoint() * e;
        }
        sum -= Matrix2::identity();
        sum.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn im(v: f64) -> Complex64 {
    Complex64::new(0.0, v)
}

/// The paper-form Kraus matrices.
///
/// AD: E0 = diag(1, sqrt(1-p)), E1 = sqrt(p) |0⟩⟨1|.
/// BF/PF/BPF: E0 = sqrt(1 - p/2) I, E1 = sqrt(p/2) σ_{x,z,y}.
pub fn kraus_ops(kind: ChannelKind, p: ParametrizedTime) -> KrausSet {
    let p = p.value();
    let ops = match kind {
        ChannelKind::AmplitudeDamping => {
            let q = 1.0 - p;
            vec![
                Matrix2::new(re(1.0), re(0.0), re(0.0), re(q.sqrt())),
                Matrix2::new(re(0.0), re(p.sqrt()), re(0.0), re(0.0)),
            ]
        }
        ChannelKind::BitFlip => {
            let (e0, e1) = ((1.0 - p / 2.0).sqrt(), (p / 2.0).sqrt());
            vec![
                Matrix2::new(re(e0), re(0.0), re(0.0), re(e0)),
                Matrix2::new(re(0.0), re(e1), re(e1), re(0.0)),
            ]
        }
        ChannelKind::PhaseFlip => {
            let (e0, e1) = ((1.0 - p / 2.0).sqrt(), (p / 2.0).sqrt());
            vec![
                Matrix2::new(re(e0), re(0.0), re(0.0), re(e0)),
                Matrix2::new(re(e1), re(0.0), re(0.0), re(-e1)),
            ]
        }
        ChannelKind::BitPhaseFlip => {
            let (e0, e1) = ((1.0 - p / 2.0).sqrt(), (p / 2.0).sqrt());
            vec![
                Matrix2::new(re(e0), re(0.0), re(0.0), re(e0)),
                Matrix2::new(re(0.0), im(-e1), im(e1), re(0.0)),
            ]
        }
    };
    KrausSet { ops }
}

/// Evolve through the tensor-product Kraus sum, then re-extract the five
/// X-state parameters. Errors with `PatternViolation` if the result strays
/// from the X form (all four channels preserve it) and with `InvalidState`
/// if the extracted parameters fail the density-matrix checks.
pub fn evolve_two_qubit(x: &XState, kind: ChannelKind, p: ParametrizedTime) -> Result<XState> {
    let rho = x.to_complex_matrix();
    let ops = kraus_ops(kind, p).ops;

    let mut out = Matrix4::<Complex64>::zeros();
    for ea in &ops {
        for eb in &ops {
            let k = ea.kronecker(eb);
            out += k * rho * k.adjoint();
        }
    }

    // X pattern: main diagonal and anti-diagonal only, real entries,
    // equal middle diagonal elements.
    let mut defect: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let on_pattern = i == j || i + j == 3;
            if on_pattern {
                defect = defect.max(out[(i, j)].im.abs());
            } else {
                defect = defect.max(out[(i, j)].norm());
            }
        }
    }
    defect = defect.max((out[(1, 1)] - out[(2, 2)]).norm());
    if defect > PATTERN_TOL {
        return Err(Error::PatternViolation(defect));
    }

    XState::new(
        out[(0, 0)].re,
        0.5 * (out[(1, 1)].re + out[(2, 2)].re),
        out[(3, 3)].re,
        out[(1, 2)].re,
        out[(0, 3)].re,
    )
}

/// Closed-form coefficient maps (no form exists for amplitude damping):
///
/// BPF: c1, c3 scale by (1-p)², c2 fixed, c4 by (1-p).
/// BF:  c2, c3 scale by (1-p)², c1 fixed, c4 by (1-p).
/// PF:  c1, c2 scale by (1-p)², c3 and c4 fixed.
pub fn evolve_coefficients(
    c: &CorrelationCoefficients,
    kind: ChannelKind,
    p: ParametrizedTime,
) -> Result<CorrelationCoefficients> {
    let u = 1.0 - p.value();
    let uu = u * u;
    match kind {
        ChannelKind::AmplitudeDamping => Err(Error::UnsupportedChannel(
            "amplitude damping has no closed-form coefficient map; use evolve_two_qubit".into(),
        )),
        ChannelKind::BitPhaseFlip => Ok(CorrelationCoefficients {
            c1: c.c1 * uu,
            c2: c.c2,
            c3: c.c3 * uu,
            c4: c.c4 * u,
        }),
        ChannelKind::BitFlip => Ok(CorrelationCoefficients {
            c1: c.c1,
            c2: c.c2 * uu,
            c3: c.c3 * uu,
            c4: c.c4 * u,
        }),
        ChannelKind::PhaseFlip => Ok(CorrelationCoefficients {
            c1: c.c1 * uu,
            c2: c.c2 * uu,
            c3: c.c3,
            c4: c.c4,
        }),
    }
}

/// All four kinds, for iteration in tests and sweeps.
pub const ALL_CHANNELS: [ChannelKind; 4] = [
    ChannelKind::AmplitudeDamping,
    ChannelKind::PhaseFlip,
    ChannelKind::BitFlip,
    ChannelKind::BitPhaseFlip,
];

/// The three channels that admit coefficient maps.
pub const FLIP_CHANNELS: [ChannelKind; 3] = [
    ChannelKind::PhaseFlip,
    ChannelKind::BitFlip,
    ChannelKind::BitPhaseFlip,
];
