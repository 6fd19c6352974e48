//! The two-qubit X-state density matrix and its parametrizations.
//!
//! In the computational basis {00, 01, 10, 11} the state is
//!
//! ```text
//!     | a  0  0  f |
//!     | 0  b  z  0 |
//!     | 0  z  b  0 |
//!     | f  0  0  d |
//! ```
//!
//! with real z, f. The state is stored as the five parameters; the matrix
//! is materialized on demand. The equivalent correlation-coefficient
//! parametrization (c1..c4) is what the closed-form channel maps act on.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};

/// Tolerance for trace and positive-semidefiniteness checks. Quadrature
/// noise in the correlators must not reject physically valid states.
pub const STATE_TOL: f64 = 1e-12;

/// Validated X-state parameters {a, b, d, z, f}.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct XState {
    a: f64,
    b: f64,
    d: f64,
    z: f64,
    f: f64,
}

/// Correlation coefficients c1 = 2z + 2f, c2 = 2z - 2f, c3 = a + d - 2b,
/// c4 = a - d. Linear bijection with the X-state parameters at unit trace.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CorrelationCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// The four eigenvalues of the X state, clamped into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub lam0: f64,
    pub lam1: f64,
    pub lam2: f64,
    pub lam3: f64,
}

impl Spectrum {
    pub fn as_array(&self) -> [f64; 4] {
        [self.lam0, self.lam1, self.lam2, self.lam3]
    }
}

impl XState {
    /// Validate and construct. Checks unit trace, non-negative diagonal and
    /// positive semidefiniteness (the two anti-diagonal 2x2 blocks), all to
    /// `STATE_TOL`. Diagonal entries in [-STATE_TOL, 0) are clamped to 0.
    pub fn new(a: f64, b: f64, d: f64, z: f64, f: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("d", d), ("z", z), ("f", f)] {
            if !v.is_finite() {
                return Err(Error::InvalidState(format!("{name} = {v} is not finite")));
            }
        }
        let trace = a + 2.0 * b + d;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace a + 2b + d = {trace} differs from 1 by more than {STATE_TOL}"
            )));
        }
        let clamp = |v: f64, name: &str| -> Result<f64> {
            if v < -STATE_TOL {
                Err(Error::InvalidState(format!("{name} = {v} is negative")))
            } else {
                Ok(v.max(0.0))
            }
        };
        let a = clamp(a, "a")?;
        let b = clamp(b, "b")?;
        let d = clamp(d, "d")?;

        // Eigenvalues of the outer {a, f; f, d} and inner {b, z; z, b}
        // blocks; requiring them >= -STATE_TOL is exactly positive
        // semidefiniteness of the X matrix.
        let outer_min = 0.5 * (a + d) - (0.25 * (a - d) * (a - d) + f * f).sqrt();
        if outer_min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "outer block eigenvalue {outer_min} is negative: |f| = {} exceeds sqrt(a d) = {}",
                f.abs(),
                (a * d).sqrt()
            )));
        }
        if b - z.abs() < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "inner block eigenvalue {} is negative: |z| = {} exceeds b = {b}",
                b - z.abs(),
                z.abs()
            )));
        }
        Ok(Self { a, b, d, z, f })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn z(&self) -> f64 {
        self.z
    }
    pub fn f(&self) -> f64 {
        self.f
    }

    /// I/4.
    pub fn maximally_mixed() -> Self {
        Self {
            a: 0.25,
            b: 0.25,
            d: 0.25,
            z: 0.0,
            f: 0.0,
        }
    }

    /// (|00⟩ + |11⟩)/√2.
    pub fn bell() -> Self {
        Self {
            a: 0.5,
            b: 0.0,
            d: 0.5,
            z: 0.0,
            f: 0.5,
        }
    }

    /// Build the reduced density matrix from magnetization and two-site
    /// correlators:
    /// a = 1/4 + ⟨σ^z⟩/2 + ⟨σ^zσ^z⟩/4, d likewise with -⟨σ^z⟩,
    /// b = (1 - ⟨σ^zσ^z⟩)/4, z = (⟨σ^xσ^x⟩ + ⟨σ^yσ^y⟩)/4,
    /// f = (⟨σ^xσ^x⟩ - ⟨σ^yσ^y⟩)/4.
    pub fn from_correlators(c: &CorrelatorSet) -> Result<Self> {
        c.validate()?;
        Self::new(
            0.25 + 0.5 * c.mz + 0.25 * c.szz,
            0.25 * (1.0 - c.szz),
            0.25 - 0.5 * c.mz + 0.25 * c.szz,
            0.25 * (c.sxx + c.syy),
            0.25 * (c.sxx - c.syy),
        )
    }

    pub fn coefficients(&self) -> CorrelationCoefficients {
        CorrelationCoefficients {
            c1: 2.0 * self.z + 2.0 * self.f,
            c2: 2.0 * self.z - 2.0 * self.f,
            c3: self.a + self.d - 2.0 * self.b,
            c4: self.a - self.d,
        }
    }

    /// Inverse of [`XState::coefficients`] at unit trace.
    pub fn from_coefficients(c: &CorrelationCoefficients) -> Result<Self> {
        let b = 0.25 * (1.0 - c.c3);
        Self::new(
            0.25 * (1.0 + c.c3) + 0.5 * c.c4,
            b,
            0.25 * (1.0 + c.c3) - 0.5 * c.c4,
            0.25 * (c.c1 + c.c2),
            0.25 * (c.c1 - c.c2),
        )
    }

    /// Closed-form spectrum:
    /// λ_{0,1} = (1 + c3 ± sqrt(4c4² + (c1-c2)²))/4,
    /// λ_{2,3} = (1 - c3 ± (c1 + c2))/4,
    /// with entries in [-STATE_TOL, 0) clamped to 0 so that downstream
    /// entropies never see noise-negative probabilities.
    pub fn eigenvalues(&self) -> Spectrum {
        let c = self.coefficients();
        let root = (4.0 * c.c4 * c.c4 + (c.c1 - c.c2) * (c.c1 - c.c2)).sqrt();
        let clamp = |v: f64| if v < 0.0 { 0.0 } else { v };
        Spectrum {
            lam0: clamp(0.25 * (1.0 + c.c3 + root)),
            lam1: clamp(0.25 * (1.0 + c.c3 - root)),
            lam2: clamp(0.25 * (1.0 - c.c3 + c.c1 + c.c2)),
            lam3: clamp(0.25 * (1.0 - c.c3 - c.c1 - c.c2)),
        }
    }

    /// Materialize the 4x4 matrix in the {00, 01, 10, 11} basis.
    #[rustfmt::skip]
    pub fn to_matrix(&self) -> Matrix4<f64> {
        Matrix4::new(
            self.a, 0.0,    0.0,    self.f,
            0.0,    self.b, self.z, 0.0,
            0.0,    self.z, self.b, 0.0,
            self.f, 0.0,    0.0,    self.d,
        )
    }

    /// Complex copy of [`XState::to_matrix`] for channel evolution.
    pub fn to_complex_matrix(&self) -> Matrix4<Complex64> {
        self.to_matrix().map(|v| Complex64::new(v, 0.0))
    }

    /// Map five variates onto a valid state: `u` in (0, 1]³ fixes the
    /// diagonal through normalized exponentials (a + 2b + d = 1), then
    /// `zs`, `fs` in [-1, 1] place z and f inside their positivity bounds
    /// |z| <= b and |f| <= sqrt(a d). Callers supply the randomness, so
    /// seeded sweeps stay reproducible across consumers.
    pub fn from_unit_box(u: [f64; 3], zs: f64, fs: f64) -> Self {
        let e = u.map(|v| -v.clamp(1e-300, 1.0).ln());
        let t = e[0] + e[1] + e[2];
        let (a, d, b) = (e[0] / t, e[1] / t, 0.5 * e[2] / t);
        let z = zs.clamp(-1.0, 1.0) * b;
        let f = fs.clamp(-1.0, 1.0) * (a * d).sqrt();
        Self::new(a, b, d, z, f).expect("construction inside the positivity bounds")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_11_from_polarized_correlators() {
        let c = CorrelatorSet {
            mz: -1.0,
            sxx: 0.0,
            syy: 0.0,
            szz: 1.0,
        };
        let x = XState::from_correlators(&c).unwrap();
        assert_eq!(
            (x.a(), x.b(), x.d(), x.z(), x.f()),
            (0.0, 0.0, 1.0, 0.0, 0.0)
        );
    }

    #[test]
    fn maximally_mixed_from_zero_correlators() {
        let c = CorrelatorSet {
            mz: 0.0,
            sxx: 0.0,
            syy: 0.0,
            szz: 0.0,
        };
        let x = XState::from_correlators(&c).unwrap();
        assert_eq!(x, XState::maximally_mixed());
    }

    #[test]
    fn bell_coefficients() {
        let c = XState::bell().coefficients();
        assert_eq!((c.c1, c.c2, c.c3, c.c4), (1.0, -1.0, 1.0, 0.0));
        let c = XState::maximally_mixed().coefficients();
        assert_eq!((c.c1, c.c2, c.c3, c.c4), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn bell_spectrum_is_pure() {
        let s = XState::bell().eigenvalues().as_array();
        assert_eq!(s, [1.0, 0.0, 0.0, 0.0]);
        let s = XState::maximally_mixed().eigenvalues().as_array();
        assert_eq!(s, [0.25; 4]);
    }

    #[test]
    fn matrix_layout() {
        let m = XState::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap().to_matrix();
        assert_eq!(m, Matrix4::from_diagonal(&[1.0, 0.0, 0.0, 0.0].into()));
        let m = XState::bell().to_matrix();
        assert_eq!(m[(0, 3)], 0.5);
        assert_eq!(m[(3, 0)], 0.5);
        assert_eq!(m[(0, 0)], 0.5);
        assert_eq!(m[(3, 3)], 0.5);
        let x = XState::new(0.3, 0.2, 0.3, 0.1, -0.2).unwrap();
        assert!((x.to_matrix().trace() - (x.a() + 2.0 * x.b() + x.d())).abs() < 1e-15);
    }

    #[test]
    fn coefficient_round_trip_is_identity() {
        let x = XState::new(0.3, 0.2, 0.3, 0.15, 0.25).unwrap();
        let y = XState::from_coefficients(&x.coefficients()).unwrap();
        for (u, v) in [
            (x.a(), y.a()),
            (x.b(), y.b()),
            (x.d(), y.d()),
            (x.z(), y.z()),
            (x.f(), y.f()),
        ] {
            assert!((u - v).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_states_rejected() {
        // trace
        assert!(matches!(
            XState::new(0.5, 0.5, 0.5, 0.0, 0.0),
            Err(Error::InvalidState(_))
        ));
        // |z| > b
        assert!(XState::new(0.25, 0.25, 0.25, 0.3, 0.0).is_err());
        // |f| > sqrt(a d)
        assert!(XState::new(0.4, 0.25, 0.1, 0.0, 0.3).is_err());
        // negative diagonal
        assert!(XState::new(-0.1, 0.25, 0.6, 0.0, 0.0).is_err());
        // tiny negatives are clamped, not rejected
        let x = XState::new(-1e-15, 0.25, 0.5 + 1e-15, 0.0, 0.0).unwrap();
        assert_eq!(x.a(), 0.0);
    }

    #[test]
    fn spectrum_clamps_quadrature_noise() {
        let x = XState::new(0.5, 0.0, 0.5, 0.0, 0.5 + 4e-13).unwrap();
        let s = x.eigenvalues();
        assert!(s.lam1 == 0.0);
        assert!(s.as_array().iter().all(|&v| v >= 0.0));
    }
}
