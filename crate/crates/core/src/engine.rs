//! The per-tick simulation loop.
//!
//! Each tick runs, in order:
//!
//! 1. pairwise overlap separation (feedback policy only);
//! 2. association of nodes to drones;
//! 3. per drone, in id order: remember the position, plan a destination,
//!    take one step toward it;
//! 4. one random-walk step for every ground node;
//! 5. association again, giving each drone its new count `M`;
//! 6. on check ticks (feedback policy only), revert every drone whose count
//!    fell too far;
//! 7. if anything reverted, one more association for all drones;
//! 8. bookkeeping of `M_max` and `M'`.
//!
//! Node motion uses the world stream; everything drone-related uses the
//! drone stream, so both policies see identical ground-node trajectories
//! for the same seed.

use alloc::vec::Vec;

use crate::association::{associate_grid, Assignment};
use crate::config::{ConfigError, Policy, SimConfig};
use crate::geometry::{Point2D, Region};
use crate::mobility::step_all_nodes;
use crate::model::{init_world, DroneState, GroundNode};
use crate::policy::{
    feedback_check, feedback_plan, move_toward, random_walk_policy, separate_all,
    update_personal_best, FeedbackVerdict,
};
use crate::rng::RngStream;

/// End-of-tick snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct TickTrace {
    pub t: u64,
    pub per_drone_m: Vec<u32>,
    pub per_drone_pos: Vec<Point2D>,
    /// Ids of drones that reverted this tick, ascending.
    pub reverts: Vec<u32>,
    pub separations: usize,
}

impl TickTrace {
    pub fn total_m(&self) -> u64 {
        self.per_drone_m.iter().map(|&m| u64::from(m)).sum()
    }

    pub fn mean_m(&self) -> f64 {
        if self.per_drone_m.is_empty() {
            0.0
        } else {
            self.total_m() as f64 / self.per_drone_m.len() as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub config: SimConfig,
    pub traces: Vec<TickTrace>,
    pub final_drones: Vec<DroneState>,
}

/// Owns all mutable state of one run.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    region: Region,
    nodes: Vec<GroundNode>,
    drones: Vec<DroneState>,
    world_rng: RngStream,
    drone_rng: RngStream,
    t: u64,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self, ConfigError> {
        let mut world_rng = RngStream::new(config.seed, RngStream::WORLD);
        let (nodes, drones) = init_world(&config, &mut world_rng)?;
        Ok(Self::assemble(config, nodes, drones, world_rng))
    }

    /// Starts from caller-supplied nodes and drones instead of random ones.
    /// `config` must be valid.
    pub fn from_parts(config: SimConfig, nodes: Vec<GroundNode>, drones: Vec<DroneState>) -> Self {
        let world_rng = RngStream::new(config.seed, RngStream::WORLD);
        Self::assemble(config, nodes, drones, world_rng)
    }

    fn assemble(
        config: SimConfig,
        nodes: Vec<GroundNode>,
        drones: Vec<DroneState>,
        world_rng: RngStream,
    ) -> Self {
        let region = config.region();
        Self {
            world_rng,
            drone_rng: RngStream::new(config.seed, RngStream::DRONES),
            region,
            nodes,
            drones,
            config,
            t: 0,
        }
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn nodes(&self) -> &[GroundNode] {
        &self.nodes
    }

    pub fn drones(&self) -> &[DroneState] {
        &self.drones
    }

    /// Index of the next tick to execute.
    pub fn time(&self) -> u64 {
        self.t
    }

    fn associate(&self) -> Assignment {
        let r = self.config.radius_r;
        associate_grid(&self.nodes, &self.drones, r, r)
    }

    /// Executes one tick and returns its trace.
    pub fn tick(&mut self) -> TickTrace {
        let t = self.t;
        let cfg = &self.config;
        let feedback = cfg.policy == Policy::Feedback;

        let separations = if feedback {
            separate_all(&mut self.drones, cfg.radius_overlap, &self.region, &mut self.drone_rng)
        } else {
            0
        };

        let before = self.associate();
        for i in 0..self.drones.len() {
            let drone = self.drones[i];
            let plan = match self.config.policy {
                Policy::Feedback => feedback_plan(
                    &drone,
                    member_positions(&self.nodes, &before.per_drone_members[i]),
                    self.config.radius_r,
                    self.config.drone_speed,
                    &self.region,
                    &mut self.drone_rng,
                ),
                Policy::RandomWalk => random_walk_policy(
                    &drone,
                    self.config.drone_speed,
                    &self.region,
                    &mut self.drone_rng,
                ),
            };
            let d = &mut self.drones[i];
            d.prev_pos = d.pos;
            if let Some(dest) = plan.new_dest {
                d.dest = dest;
            }
            d.pos = move_toward(d.pos, d.dest, self.config.drone_speed, &self.region);
        }

        let cfg = &self.config;
        step_all_nodes(&mut self.nodes, cfg.node_step, &self.region, &mut self.world_rng);

        let mut counts = self.associate().per_drone_count;
        let mut reverts = Vec::new();
        if feedback && t % cfg.check_interval == 0 {
            for (d, &m) in self.drones.iter_mut().zip(&counts) {
                if feedback_check(m, d.m_prev, cfg.phi, cfg.loss) == FeedbackVerdict::Revert {
                    d.pos = d.prev_pos;
                    reverts.push(d.id);
                }
            }
            if !reverts.is_empty() {
                counts = self.associate().per_drone_count;
            }
        }

        let phi = self.config.phi;
        for (d, &m) in self.drones.iter_mut().zip(&counts) {
            d.m_current = m;
            d.m_max = update_personal_best(d.m_max, m, phi);
            d.m_prev = m;
        }

        self.t += 1;
        TickTrace {
            t,
            per_drone_pos: self.drones.iter().map(|d| d.pos).collect(),
            per_drone_m: counts,
            reverts,
            separations,
        }
    }

    /// Runs the remaining ticks up to `t_max`.
    pub fn finish(mut self) -> RunResult {
        let remaining = self.config.t_max.saturating_sub(self.t);
        let traces = (0..remaining).map(|_| self.tick()).collect();
        RunResult {
            config: self.config,
            traces,
            final_drones: self.drones,
        }
    }
}

fn member_positions<'a>(
    nodes: &'a [GroundNode],
    members: &'a [u32],
) -> impl Iterator<Item = Point2D> + 'a {
    members.iter().map(move |&id| nodes[id as usize].pos)
}

/// Initializes a world from `config` and runs it for `t_max` ticks.
pub fn run(config: &SimConfig) -> Result<RunResult, ConfigError> {
    Ok(Simulation::new(config.clone())?.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small(policy: Policy) -> SimConfig {
        SimConfig {
            n_d: 4,
            n_g: 400,
            side_l: 200.0,
            t_max: 50,
            policy,
            seed: 5,
            ..SimConfig::default()
        }
    }

    #[test]
    fn empty_world_drone_explores_without_reverting() {
        let cfg = SimConfig { n_d: 1, n_g: 0, t_max: 20, ..SimConfig::default() };
        let res = run(&cfg).unwrap();
        assert_eq!(res.traces.len(), 20);
        let mut last = None;
        for tr in &res.traces {
            assert_eq!(tr.per_drone_m, vec![0]);
            assert!(tr.reverts.is_empty());
            if let Some(p) = last {
                assert_ne!(p, tr.per_drone_pos[0]);
            }
            last = Some(tr.per_drone_pos[0]);
        }
    }

    #[test]
    fn stationary_cluster_never_reverts() {
        // five nodes packed at the drone, nodes do not move, so every
        // planned step keeps the cluster inside the disc
        let cfg = SimConfig {
            n_d: 1,
            n_g: 5,
            side_l: 1000.0,
            node_step: 1e-12,
            t_max: 2,
            ..SimConfig::default()
        };
        let c = Point2D::new(500.0, 500.0);
        let nodes: Vec<_> = (0..5)
            .map(|i| GroundNode { id: i, pos: c + Point2D::new(i as f64 * 0.1, 0.0) })
            .collect();
        let drones = vec![DroneState::new(0, c, cfg.phi)];
        let mut sim = Simulation::from_parts(cfg, nodes, drones);

        // hand trace: tick 0 plans toward centroid (500.2, 500) +- (15, 15);
        // one 5 m step keeps all five nodes within 30 m, so M stays 5 and
        // the low-branch rule (5 < 0 - 5) cannot fire
        let t0 = sim.tick();
        assert_eq!(t0.per_drone_m, vec![5]);
        assert!(t0.reverts.is_empty());
        let t1 = sim.tick();
        assert_eq!(t1.per_drone_m, vec![5]);
        assert!(t1.reverts.is_empty());
        assert_eq!(sim.drones()[0].m_prev, 5);
        assert_eq!(sim.drones()[0].m_max, 25);
    }

    #[test]
    fn rerun_is_identical() {
        let cfg = SimConfig { t_max: 10, ..small(Policy::Feedback) };
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
    }

    #[test]
    fn trace_length_and_indices() {
        let res = run(&SimConfig { t_max: 5, ..small(Policy::Feedback) }).unwrap();
        let ts: Vec<u64> = res.traces.iter().map(|t| t.t).collect();
        assert_eq!(ts, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn zero_ticks_rejected() {
        assert!(run(&SimConfig { t_max: 0, ..SimConfig::default() }).is_err());
    }

    #[test]
    fn reverted_drones_sit_on_prev_pos() {
        let mut sim = Simulation::new(small(Policy::Feedback)).unwrap();
        let mut saw_revert = false;
        for _ in 0..50 {
            let tr = sim.tick();
            for &id in &tr.reverts {
                let d = sim.drones()[id as usize];
                assert!(d.pos.bit_eq(d.prev_pos));
                assert!(tr.per_drone_pos[id as usize].bit_eq(d.prev_pos));
                saw_revert = true;
            }
        }
        assert!(saw_revert);
    }

    #[test]
    fn random_walk_never_reverts_or_separates() {
        let res = run(&small(Policy::RandomWalk)).unwrap();
        assert!(res.traces.iter().all(|t| t.reverts.is_empty() && t.separations == 0));
    }

    #[test]
    fn counts_conserve_nodes_and_match_final_state() {
        let cfg = small(Policy::Feedback);
        let res = run(&cfg).unwrap();
        for tr in &res.traces {
            assert!(tr.total_m() <= cfg.n_g as u64);
        }
        let last = res.traces.last().unwrap();
        for (d, &m) in res.final_drones.iter().zip(&last.per_drone_m) {
            assert_eq!(d.m_current, m);
            assert!(d.m_max >= cfg.phi);
        }
    }

    #[test]
    fn personal_best_is_nondecreasing() {
        let mut sim = Simulation::new(small(Policy::Feedback)).unwrap();
        let mut best: Vec<u32> = sim.drones().iter().map(|d| d.m_max).collect();
        for _ in 0..50 {
            sim.tick();
            for (b, d) in best.iter_mut().zip(sim.drones()) {
                assert!(d.m_max >= *b);
                *b = d.m_max;
            }
        }
    }

    #[test]
    fn node_trajectories_shared_across_policies() {
        let mut a = Simulation::new(small(Policy::Feedback)).unwrap();
        let mut b = Simulation::new(small(Policy::RandomWalk)).unwrap();
        for _ in 0..10 {
            a.tick();
            b.tick();
        }
        assert_eq!(a.nodes(), b.nodes());
    }

    #[test]
    fn checks_only_on_interval_ticks() {
        let cfg = SimConfig { check_interval: 7, ..small(Policy::Feedback) };
        let res = run(&cfg).unwrap();
        for tr in &res.traces {
            if tr.t % 7 != 0 {
                assert!(tr.reverts.is_empty(), "tick {}", tr.t);
            }
        }
    }
}
