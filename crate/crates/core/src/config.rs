//! Scenario parameters.

use core::fmt;

use crate::geometry::Region;

/// Drone mobility policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Policy {
    /// Centroid-offset planning with revert-on-loss feedback.
    Feedback,
    /// Uncoordinated random walk of the drones; the comparison baseline.
    RandomWalk,
}

impl Policy {
    pub const ALL: [Policy; 2] = [Policy::Feedback, Policy::RandomWalk];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Feedback => "feedback",
            Policy::RandomWalk => "randomwalk",
        }
    }

    pub fn parse(s: &str) -> Option<Policy> {
        match s {
            "feedback" => Some(Policy::Feedback),
            "randomwalk" => Some(Policy::RandomWalk),
            _ => None,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{key} must be a finite number greater than zero (got {value})")]
    NotPositive { key: &'static str, value: f64 },
    #[error("{key} must be at least {min} (got {value})")]
    TooSmall {
        key: &'static str,
        min: u64,
        value: u64,
    },
    #[error("radius_r ({radius_r}) must not exceed side_l ({side_l})")]
    RadiusExceedsSide { radius_r: f64, side_l: f64 },
    #[error("radius_overlap ({radius_overlap}) must not exceed side_l * sqrt(2) ({limit})")]
    OverlapInfeasible { radius_overlap: f64, limit: f64 },
}

/// Every parameter of one simulation run.
///
/// Lengths are meters, speeds are meters per tick, one tick is one second.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_d: usize,
    pub n_g: usize,
    pub side_l: f64,
    /// Coverage radius `R`.
    pub radius_r: f64,
    /// Minimum inter-drone distance `R_o`.
    pub radius_overlap: f64,
    /// Threshold `phi` above which any drop in served nodes is reverted.
    pub phi: u32,
    /// Tolerated drop below the previous count when at or below `phi`.
    pub loss: u32,
    pub drone_speed: f64,
    pub node_step: f64,
    pub t_max: u64,
    pub check_interval: u64,
    pub seed: u64,
    pub policy: Policy,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_d: 15,
            n_g: 10_000,
            side_l: 1000.0,
            radius_r: 30.0,
            radius_overlap: 60.0,
            phi: 25,
            loss: 5,
            drone_speed: 5.0,
            node_step: 1.0,
            t_max: 1000,
            check_interval: 1,
            seed: 0,
            policy: Policy::Feedback,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, value) in [
            ("side_l", self.side_l),
            ("radius_r", self.radius_r),
            ("radius_overlap", self.radius_overlap),
            ("drone_speed", self.drone_speed),
            ("node_step", self.node_step),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::NotPositive { key, value });
            }
        }
        for (key, min, value) in [
            ("n_d", 1, self.n_d as u64),
            ("t_max", 1, self.t_max),
            ("check_interval", 1, self.check_interval),
        ] {
            if value < min {
                return Err(ConfigError::TooSmall { key, min, value });
            }
        }
        if self.radius_r > self.side_l {
            return Err(ConfigError::RadiusExceedsSide {
                radius_r: self.radius_r,
                side_l: self.side_l,
            });
        }
        let limit = self.side_l * core::f64::consts::SQRT_2;
        if self.radius_overlap > limit {
            return Err(ConfigError::OverlapInfeasible {
                radius_overlap: self.radius_overlap,
                limit,
            });
        }
        Ok(())
    }

    pub fn region(&self) -> Region {
        Region::new(self.side_l).expect("side_l validated")
    }

    /// Expected number of nodes inside one coverage disc for a uniform
    /// node density, ignoring edge effects.
    pub fn expected_nodes_per_disc(&self) -> f64 {
        let r = self.radius_r;
        self.n_g as f64 * core::f64::consts::PI * r * r / (self.side_l * self.side_l)
    }
}
