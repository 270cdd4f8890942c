//! Ground nodes, drone state, and world initialization.

use alloc::vec::Vec;

use crate::config::{ConfigError, SimConfig};
use crate::geometry::{Point2D, Region};
use crate::rng::RngStream;

/// A mobile user performing a random walk inside the region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundNode {
    pub id: u32,
    pub pos: Point2D,
}

/// Position of one drone plus the memory the feedback rule keeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneState {
    pub id: u32,
    pub pos: Point2D,
    /// Position at the start of the current tick's movement; the revert target.
    pub prev_pos: Point2D,
    pub dest: Point2D,
    /// Served count at the previous feedback check (`M'`).
    pub m_prev: u32,
    /// Best served count so far, floored at `phi` (`M_max`).
    pub m_max: u32,
    /// Served count at the end of the last tick (`M`).
    pub m_current: u32,
}

impl DroneState {
    pub fn new(id: u32, pos: Point2D, phi: u32) -> Self {
        Self {
            id,
            pos,
            prev_pos: pos,
            dest: pos,
            m_prev: 0,
            m_max: phi,
            m_current: 0,
        }
    }
}

fn uniform_point(region: &Region, rng: &mut RngStream) -> Point2D {
    let x = rng.uniform(0.0, region.side());
    let y = rng.uniform(0.0, region.side());
    Point2D::new(x, y)
}

/// Places `n_g` nodes then `n_d` drones uniformly at random in the region.
///
/// Draw order is fixed: for each node in id order an `x` then a `y`, then
/// the same for each drone.
pub fn init_world(
    config: &SimConfig,
    rng: &mut RngStream,
) -> Result<(Vec<GroundNode>, Vec<DroneState>), ConfigError> {
    config.validate()?;
    let region = config.region();
    let nodes = (0..config.n_g as u32)
        .map(|id| GroundNode {
            id,
            pos: uniform_point(&region, rng),
        })
        .collect();
    let drones = (0..config.n_d as u32)
        .map(|id| DroneState::new(id, uniform_point(&region, rng), config.phi))
        .collect();
    Ok((nodes, drones))
}
