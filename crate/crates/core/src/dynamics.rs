//! Kinematic propagation, relative-geometry sensing, and the sigma-point
//! noise set shared by the solver transition model and the simulator.

use serde::{Deserialize, Serialize};

use crate::angle::{deg_to_rad, wrap_angle};
use crate::types::{AircraftState, PairwiseObservation};

/// Standard deviations of the process noise injected into speed and turn rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    /// Speed noise std (meters/second).
    pub sigma_v: f64,
    /// Turn-rate noise std (radians/second).
    pub sigma_phidot: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            sigma_v: 2.0,
            sigma_phidot: deg_to_rad(2.0),
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<(), String> {
        if self.sigma_v < 0.0 || self.sigma_phidot < 0.0 {
            return Err(format!(
                "noise stds must be nonnegative, got sigma_v={} sigma_phidot={}",
                self.sigma_v, self.sigma_phidot
            ));
        }
        Ok(())
    }
}

/// Deterministic perturbation set matching the noise model's first two
/// moments exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaPointSet {
    /// (dv, dphidot) perturbations.
    pub points: Vec<(f64, f64)>,
    /// Probability weights, parallel to `points`.
    pub weights: Vec<f64>,
}

impl SigmaPointSet {
    /// Checks the construction invariants: weights nonnegative and summing
    /// to one, perturbations with zero weighted mean per dimension.
    pub fn validate(&self) -> Result<(), String> {
        if self.points.len() != self.weights.len() {
            return Err("points and weights must have equal length".into());
        }
        if self.weights.iter().any(|&w| w < 0.0) {
            return Err("weights must be nonnegative".into());
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(format!("weights must sum to 1, got {total}"));
        }
        let mean_v: f64 = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| p.0 * w)
            .sum();
        let mean_w: f64 = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| p.1 * w)
            .sum();
        if mean_v.abs() > 1e-12 || mean_w.abs() > 1e-12 {
            return Err(format!(
                "perturbations must have zero weighted mean, got ({mean_v}, {mean_w})"
            ));
        }
        Ok(())
    }
}

/// Builds the five-point axis set: the center at weight 1/3 and the four
/// axis points at +-sqrt(3)*sigma with weight 1/6 each. This reproduces the
/// mean and the per-dimension variance of the noise model exactly.
pub fn sigma_points(noise: &NoiseModel) -> SigmaPointSet {
    let sv = 3.0_f64.sqrt() * noise.sigma_v;
    let sw = 3.0_f64.sqrt() * noise.sigma_phidot;
    let sixth = 1.0 / 6.0;
    SigmaPointSet {
        points: vec![(0.0, 0.0), (sv, 0.0), (-sv, 0.0), (0.0, sw), (0.0, -sw)],
        weights: vec![1.0 / 3.0, sixth, sixth, sixth, sixth],
    }
}

/// Advances one aircraft by `dt` seconds at the commanded turn rate.
///
/// The heading updates first; the position then advances along the new
/// heading. Speed is unchanged.
///
/// Panics on a non-finite input state or turn rate.
pub fn step(s: &AircraftState, turn_rate: f64, dt: f64) -> AircraftState {
    assert!(
        s.x.is_finite()
            && s.y.is_finite()
            && s.v.is_finite()
            && s.phi.is_finite()
            && turn_rate.is_finite(),
        "step: non-finite input"
    );
    debug_assert!(dt > 0.0);
    let phi = wrap_angle(s.phi + turn_rate * dt);
    AircraftState {
        x: s.x + s.v * phi.cos() * dt,
        y: s.y + s.v * phi.sin() * dt,
        v: s.v,
        phi,
        phi_dot: turn_rate,
    }
}

/// Computes the relative observation of an intruder from the ownship.
///
/// Coincident positions give rho = 0 with theta defined as 0.
pub fn observe(own: &AircraftState, intruder: &AircraftState) -> PairwiseObservation {
    let dx = intruder.x - own.x;
    let dy = intruder.y - own.y;
    let rho = (dx * dx + dy * dy).sqrt();
    let theta = if rho == 0.0 {
        0.0
    } else {
        wrap_angle(dy.atan2(dx) - own.phi)
    };
    PairwiseObservation {
        rho,
        theta,
        psi: wrap_angle(intruder.phi - own.phi),
        v_own: own.v,
        v_int: intruder.v,
    }
}
