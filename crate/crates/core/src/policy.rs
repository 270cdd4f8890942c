//! Drone mobility decisions.
//!
//! The feedback policy, per drone and per tick:
//!
//! 1. keep every pair of drones at least `R_o` apart ([`separate_all`]);
//! 2. take the centroid of the nodes the drone serves ([`compute_centroid`]);
//! 3. aim at the centroid offset by `(+-R/2, +-R/2)`, sign chosen by a fair
//!    coin ([`compute_destination`]);
//! 4. step toward the destination ([`move_toward`]);
//! 5. after the world moves, recount and undo the step if the count fell
//!    ([`feedback_check`]).
//!
//! The baseline ([`random_walk_policy`]) takes a step in a uniformly random
//! heading and never reverts.

use crate::geometry::{Point2D, Region};
use crate::model::DroneState;
use crate::rng::RngStream;

/// Pairs closer than this are treated as coincident.
pub const COINCIDENCE_EPS: f64 = 1e-9;
/// Jitter applied to the second drone of a coincident pair before separating.
pub const COINCIDENCE_JITTER: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PolicyError {
    #[error("drones coincide; separation direction is undefined")]
    DegenerateCoincidence,
    #[error("drone serves no nodes; centroid is undefined")]
    NoConnections,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    MoveTowardDest,
    Revert,
    Hold,
}

/// Outcome of planning or of the feedback check for one drone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyDecision {
    pub new_dest: Option<Point2D>,
    pub action: Action,
}

impl PolicyDecision {
    pub fn move_to(dest: Point2D) -> Self {
        Self {
            new_dest: Some(dest),
            action: Action::MoveTowardDest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackVerdict {
    Revert,
    Keep,
}

impl From<FeedbackVerdict> for PolicyDecision {
    fn from(v: FeedbackVerdict) -> Self {
        let action = match v {
            FeedbackVerdict::Revert => Action::Revert,
            FeedbackVerdict::Keep => Action::Hold,
        };
        PolicyDecision {
            new_dest: None,
            action,
        }
    }
}

/// Pushes two drones apart along the line joining them so that each ends
/// up exactly `radius_overlap / 2` from their midpoint.
pub fn separate_pair(
    pos_i: Point2D,
    pos_j: Point2D,
    radius_overlap: f64,
) -> Result<(Point2D, Point2D), PolicyError> {
    if pos_i.distance(pos_j) < COINCIDENCE_EPS {
        return Err(PolicyError::DegenerateCoincidence);
    }
    let c = pos_i.midpoint(pos_j);
    let half = radius_overlap / 2.0;
    let push = |p: Point2D| {
        let off = p - c;
        c + off * (half / off.norm())
    };
    Ok((push(pos_i), push(pos_j)))
}

/// One pass over all pairs `(i, j)`, `i < j`, in lexicographic order,
/// separating every pair closer than `radius_overlap` and clamping both
/// drones back into the region. Coincident pairs first get drone `j`
/// nudged by [`COINCIDENCE_JITTER`] in a random heading.
///
/// Returns the number of pairs adjusted. A later adjustment may break an
/// earlier pair; the next pass deals with it.
pub fn separate_all(
    drones: &mut [DroneState],
    radius_overlap: f64,
    region: &Region,
    rng: &mut RngStream,
) -> usize {
    let mut adjusted = 0;
    for i in 0..drones.len() {
        for j in (i + 1)..drones.len() {
            let (a, mut b) = (drones[i].pos, drones[j].pos);
            if a.distance(b) >= radius_overlap {
                continue;
            }
            if a.distance(b) < COINCIDENCE_EPS {
                b = b + Point2D::from_heading(rng.heading()) * COINCIDENCE_JITTER;
            }
            let (na, nb) = separate_pair(a, b, radius_overlap)
                .expect("coincident pairs are jittered apart first");
            drones[i].pos = region.clamp(na);
            drones[j].pos = region.clamp(nb);
            adjusted += 1;
        }
    }
    adjusted
}

/// Arithmetic mean of `members`, summed with Neumaier compensation.
pub fn compute_centroid<I>(members: I) -> Result<Point2D, PolicyError>
where
    I: IntoIterator<Item = Point2D>,
{
    let mut sx = NeumaierSum::default();
    let mut sy = NeumaierSum::default();
    let mut n = 0usize;
    for p in members {
        sx.add(p.x);
        sy.add(p.y);
        n += 1;
    }
    if n == 0 {
        return Err(PolicyError::NoConnections);
    }
    Ok(Point2D::new(sx.total() / n as f64, sy.total() / n as f64))
}

#[derive(Default)]
struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `centroid + (-1)^p * (R/2, R/2)`; the same sign applies to both axes.
pub fn compute_destination(centroid: Point2D, radius_r: f64, p: u8) -> Point2D {
    let off = if p == 0 { radius_r / 2.0 } else { -radius_r / 2.0 };
    Point2D::new(centroid.x + off, centroid.y + off)
}

fn random_step(pos: Point2D, step: f64, region: &Region, rng: &mut RngStream) -> Point2D {
    region.clamp(pos + Point2D::from_heading(rng.heading()) * step)
}

/// Plans the next destination for a feedback-controlled drone.
///
/// With at least one served node, flips a coin and aims at the offset
/// centroid. A drone serving nobody explores instead: one `explore_step`
/// in a random heading, clamped to the region.
pub fn feedback_plan<I>(
    drone: &DroneState,
    members: I,
    radius_r: f64,
    explore_step: f64,
    region: &Region,
    rng: &mut RngStream,
) -> PolicyDecision
where
    I: IntoIterator<Item = Point2D>,
{
    match compute_centroid(members) {
        Ok(c) => {
            let p = rng.coin();
            PolicyDecision::move_to(compute_destination(c, radius_r, p))
        }
        Err(_) => PolicyDecision::move_to(random_step(drone.pos, explore_step, region, rng)),
    }
}

/// Revert when above the threshold and anything was lost, or when at or
/// below it and more than `loss` was lost.
pub fn feedback_check(m_current: u32, m_prev: u32, phi: u32, loss: u32) -> FeedbackVerdict {
    let revert = if m_prev > phi {
        m_current < m_prev
    } else {
        u64::from(m_current) + u64::from(loss) < u64::from(m_prev)
    };
    if revert {
        FeedbackVerdict::Revert
    } else {
        FeedbackVerdict::Keep
    }
}

/// Personal best, never below `phi`.
#[inline]
pub fn update_personal_best(m_max: u32, m_current: u32, phi: u32) -> u32 {
    m_max.max(m_current).max(phi)
}

/// Advances at most `step` meters along the straight line to `dest`, then
/// clamps into the region.
pub fn move_toward(pos: Point2D, dest: Point2D, step: f64, region: &Region) -> Point2D {
    let d = pos.distance(dest);
    if d <= step {
        return region.clamp(dest);
    }
    region.clamp(pos + (dest - pos) * (step / d))
}

/// Baseline: one `step` in a uniformly random heading, clamped to the region.
pub fn random_walk_policy(
    drone: &DroneState,
    step: f64,
    region: &Region,
    rng: &mut RngStream,
) -> PolicyDecision {
    PolicyDecision::move_to(random_step(drone.pos, step, region, rng))
}
