//! Angle wrapping and degree/radian conversion helpers.

use std::f64::consts::PI;

/// Wraps an angle to the half-open interval `(-pi, pi]`.
///
/// Periodic: `wrap_angle(x + 2*pi*k) == wrap_angle(x)` for integer `k`,
/// and idempotent.
///
/// Panics on non-finite input.
pub fn wrap_angle(x: f64) -> f64 {
    assert!(x.is_finite(), "wrap_angle: non-finite angle {x}");
    let w = x.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Degrees to radians.
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

/// Radians to degrees.
pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}
