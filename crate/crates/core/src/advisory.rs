//! The discrete advisory set and its turn-rate mapping.

use serde::{Deserialize, Serialize};

use crate::angle::deg_to_rad;

/// Collision-avoidance advisory issued to the ownship.
///
/// The declaration order is the canonical ordering used for deterministic
/// tie-breaking everywhere (COC first, then MAINTAIN, WR, WL, SR, SL).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Advisory {
    /// Clear of conflict: the aircraft is free to fly towards its destination.
    Coc,
    /// Hold the current heading (zero turn rate).
    Maintain,
    /// Weak right turn, -5 deg/s.
    WeakRight,
    /// Weak left turn, +5 deg/s.
    WeakLeft,
    /// Strong right turn, -10 deg/s.
    StrongRight,
    /// Strong left turn, +10 deg/s.
    StrongLeft,
}

/// Number of advisories.
pub const NUM_ADVISORIES: usize = 6;

impl Advisory {
    /// All advisories in canonical tie-break order.
    pub const ALL: [Advisory; NUM_ADVISORIES] = [
        Advisory::Coc,
        Advisory::Maintain,
        Advisory::WeakRight,
        Advisory::WeakLeft,
        Advisory::StrongRight,
        Advisory::StrongLeft,
    ];

    /// Canonical index of this advisory (position in [`Advisory::ALL`]).
    pub fn index(self) -> usize {
        self as usize
    }

    /// Inverse of [`Advisory::index`].
    pub fn from_index(ix: usize) -> Advisory {
        Self::ALL[ix]
    }

    /// Commanded turn rate in degrees/second.
    ///
    /// COC commands no turn itself: in the pairwise model its turn rate is
    /// defined to be zero, and in simulation it delegates to nominal guidance.
    pub fn turn_rate_deg(self) -> f64 {
        match self {
            Advisory::Coc | Advisory::Maintain => 0.0,
            Advisory::WeakLeft => 5.0,
            Advisory::WeakRight => -5.0,
            Advisory::StrongLeft => 10.0,
            Advisory::StrongRight => -10.0,
        }
    }

    /// Commanded turn rate in radians/second.
    pub fn turn_rate(self) -> f64 {
        deg_to_rad(self.turn_rate_deg())
    }

    /// Mirror image across the ownship heading axis (left <-> right).
    pub fn mirrored(self) -> Advisory {
        match self {
            Advisory::Coc => Advisory::Coc,
            Advisory::Maintain => Advisory::Maintain,
            Advisory::WeakLeft => Advisory::WeakRight,
            Advisory::WeakRight => Advisory::WeakLeft,
            Advisory::StrongLeft => Advisory::StrongRight,
            Advisory::StrongRight => Advisory::StrongLeft,
        }
    }

    /// Short display label used in CSV and SVG output.
    pub fn label(self) -> &'static str {
        match self {
            Advisory::Coc => "COC",
            Advisory::Maintain => "MAINTAIN",
            Advisory::WeakLeft => "WL",
            Advisory::WeakRight => "WR",
            Advisory::StrongLeft => "SL",
            Advisory::StrongRight => "SR",
        }
    }

    /// Parses the short label emitted by [`Advisory::label`].
    pub fn from_label(s: &str) -> Option<Advisory> {
        Advisory::ALL.into_iter().find(|a| a.label() == s)
    }
}

impl std::fmt::Display for Advisory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}
