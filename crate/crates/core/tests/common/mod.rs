//! Shared helpers for the integration suites.
#![allow(dead_code)] // each suite uses a different subset

use qdx_core::XState;
use rand::Rng;

/// Uniformly sample a valid X state.
pub fn random_xstate<R: Rng>(rng: &mut R) -> XState {
    XState::from_unit_box(
        [rng.gen(), rng.gen(), rng.gen()],
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

/// Pure X states: cos(α)|00⟩ + sin(α)|11⟩ for random α (outer block) and
/// the two inner-block Bell states (|01⟩ ± |10⟩)/√2, the only pure states
/// with the equal-middle-diagonal X form.
pub fn random_pure_xstate<R: Rng>(rng: &mut R) -> XState {
    if rng.gen_range(0..8) == 0 {
        let z = if rng.gen::<bool>() { 0.5 } else { -0.5 };
        XState::new(0.0, 0.5, 0.0, z, 0.0).unwrap()
    } else {
        let alpha = rng.gen_range(0.05_f64..(std::f64::consts::FRAC_PI_2 - 0.05));
        let (c, s) = (alpha.cos(), alpha.sin());
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        XState::new(c * c, 0.0, s * s, 0.0, sign * c * s).unwrap()
    }
}
