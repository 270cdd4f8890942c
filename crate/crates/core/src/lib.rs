#![cfg_attr(not(test), no_std)]

//! Discrete-time simulation of drone base stations (DBSs) serving mobile
//! ground nodes.
//!
//! Drones follow either a feedback-driven mobility rule (move toward an
//! offset of the centroid of the nodes they serve, revert the move when the
//! served count drops) or a random-walk baseline. Ground nodes random-walk
//! inside an `L x L` square with reflecting walls.
//!
//! The crate is `no_std` and only needs `alloc`. All randomness flows through
//! [`RngStream`], so a run is a pure function of its [`SimConfig`].

extern crate alloc;

pub mod association;
pub mod config;
pub mod engine;
pub mod geometry;
pub mod metrics;
pub mod mobility;
pub mod model;
pub mod policy;
pub mod rng;

pub use association::{associate, associate_grid, Assignment};
pub use config::{ConfigError, Policy, SimConfig};
pub use engine::{run, RunResult, Simulation, TickTrace};
pub use geometry::{Point2D, Region};
pub use metrics::{
    average_connectivity, drone_stats, linear_fit, summarize, trend_slope, DroneStats, LinearFit,
    MetricsError, RunSummary,
};
pub use model::{init_world, DroneState, GroundNode};
pub use policy::{Action, FeedbackVerdict, PolicyDecision, PolicyError};
pub use rng::RngStream;
