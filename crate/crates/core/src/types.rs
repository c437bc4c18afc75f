//! Shared domain types: aircraft kinematic state, relative observations,
//! and the global constants every subsystem reads.

use serde::{Deserialize, Serialize};

use crate::angle::{deg_to_rad, wrap_angle};

/// Absolute kinematic state of one aircraft in the horizontal plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AircraftState {
    /// Position east (meters).
    pub x: f64,
    /// Position north (meters).
    pub y: f64,
    /// Speed (meters/second), held constant along a trajectory.
    pub v: f64,
    /// Heading (radians), wrapped to (-pi, pi].
    pub phi: f64,
    /// Current commanded turn rate (radians/second).
    pub phi_dot: f64,
}

impl AircraftState {
    pub fn new(x: f64, y: f64, v: f64, phi: f64, phi_dot: f64) -> Self {
        let s = Self {
            x,
            y,
            v,
            phi: wrap_angle(phi),
            phi_dot,
        };
        debug_assert!(s.is_valid(), "invalid aircraft state {s:?}");
        s
    }

    /// Checks the state invariants: finite fields, positive speed,
    /// wrapped heading.
    pub fn is_valid(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.v.is_finite()
            && self.phi.is_finite()
            && self.phi_dot.is_finite()
            && self.v > 0.0
            && self.phi > -std::f64::consts::PI
            && self.phi <= std::f64::consts::PI
    }

    /// Euclidean distance to another aircraft (meters).
    pub fn distance_to(&self, other: &AircraftState) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    /// Euclidean distance to a point (meters).
    pub fn distance_to_point(&self, p: (f64, f64)) -> f64 {
        ((self.x - p.0).powi(2) + (self.y - p.1).powi(2)).sqrt()
    }
}

/// Relative state of one intruder as sensed by the ownship.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairwiseObservation {
    /// Distance from the ownship to the intruder (meters, >= 0).
    pub rho: f64,
    /// Bearing to the intruder relative to ownship heading (radians, (-pi, pi]).
    pub theta: f64,
    /// Intruder heading relative to ownship heading (radians, (-pi, pi]).
    pub psi: f64,
    /// Ownship speed (meters/second).
    pub v_own: f64,
    /// Intruder speed (meters/second).
    pub v_int: f64,
}

impl PairwiseObservation {
    /// The all-zeros tuple encoding "no intruder".
    pub const EMPTY: PairwiseObservation = PairwiseObservation {
        rho: 0.0,
        theta: 0.0,
        psi: 0.0,
        v_own: 0.0,
        v_int: 0.0,
    };

    pub fn new(rho: f64, theta: f64, psi: f64, v_own: f64, v_int: f64) -> Self {
        Self {
            rho,
            theta: wrap_angle(theta),
            psi: wrap_angle(psi),
            v_own,
            v_int,
        }
    }

    /// True for the all-zeros "no intruder" convention.
    pub fn is_empty(&self) -> bool {
        self.rho == 0.0
            && self.theta == 0.0
            && self.psi == 0.0
            && self.v_own == 0.0
            && self.v_int == 0.0
    }

    /// The five components in (rho, theta, psi, v_own, v_int) order.
    pub fn as_array(&self) -> [f64; 5] {
        [self.rho, self.theta, self.psi, self.v_own, self.v_int]
    }
}

/// Global constants shared by the solver, simulator, and metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    /// Sensing range of the ownship (meters).
    pub sensing_range: f64,
    /// Near mid-air collision separation threshold (meters).
    pub nmac_range: f64,
    /// Decision period (seconds).
    pub dt: f64,
    /// Nominal cruise speed (meters/second).
    pub cruise_speed: f64,
    /// Destination capture radius DC (meters).
    pub dest_capture_radius: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            sensing_range: 1000.0,
            nmac_range: 150.0,
            dt: 1.0,
            cruise_speed: 30.0,
            dest_capture_radius: 100.0,
        }
    }
}

impl Constants {
    /// Checks the cross-field invariants.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.nmac_range < self.sensing_range) {
            return Err(format!(
                "nmac_range ({}) must be below sensing_range ({})",
                self.nmac_range, self.sensing_range
            ));
        }
        if !(self.dt > 0.0) {
            return Err(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.cruise_speed > 0.0) {
            return Err(format!(
                "cruise_speed must be positive, got {}",
                self.cruise_speed
            ));
        }
        if !(self.dest_capture_radius > 0.0) {
            return Err(format!(
                "dest_capture_radius must be positive, got {}",
                self.dest_capture_radius
            ));
        }
        Ok(())
    }

    /// Maximum commandable turn magnitude (radians/second): the strong
    /// advisories and the nominal guidance clip share this limit.
    pub fn max_turn_rate(&self) -> f64 {
        deg_to_rad(10.0)
    }
}
