//! Node-to-drone association.
//!
//! A node is served by its nearest drone (ties go to the lowest drone id),
//! provided that drone lies within the coverage radius. The disc is closed:
//! a node at distance exactly `R` is served. All comparisons use squared
//! distances computed as `dx*dx + dy*dy`, identically in both code paths, so
//! the naive and grid versions agree bit for bit.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::Point2D;
use crate::model::{DroneState, GroundNode};

/// Which nodes each drone serves.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    /// Indexed by node position in the input slice.
    pub node_to_drone: Vec<Option<u32>>,
    /// Served count `M` per drone.
    pub per_drone_count: Vec<u32>,
    /// Served node ids per drone, ascending.
    pub per_drone_members: Vec<Vec<u32>>,
}

impl Assignment {
    fn from_map(node_to_drone: Vec<Option<u32>>, nodes: &[GroundNode], n_drones: usize) -> Self {
        let mut per_drone_members = vec![Vec::new(); n_drones];
        for (node, slot) in nodes.iter().zip(&node_to_drone) {
            if let Some(d) = slot {
                per_drone_members[*d as usize].push(node.id);
            }
        }
        let per_drone_count = per_drone_members.iter().map(|m| m.len() as u32).collect();
        Self {
            node_to_drone,
            per_drone_count,
            per_drone_members,
        }
    }

    pub fn total_assigned(&self) -> u64 {
        self.per_drone_count.iter().map(|&c| u64::from(c)).sum()
    }
}

#[inline]
fn closer(d2: f64, id: u32, best: Option<(f64, u32)>) -> bool {
    match best {
        None => true,
        Some((b2, bid)) => d2 < b2 || (d2 == b2 && id < bid),
    }
}

/// Exhaustive `O(n_G * n_D)` association.
pub fn associate(nodes: &[GroundNode], drones: &[DroneState], radius_r: f64) -> Assignment {
    let r2 = radius_r * radius_r;
    let map = nodes
        .iter()
        .map(|node| {
            let mut best: Option<(f64, u32)> = None;
            for (i, drone) in drones.iter().enumerate() {
                let d2 = node.pos.distance_sq(drone.pos);
                if closer(d2, i as u32, best) {
                    best = Some((d2, i as u32));
                }
            }
            best.filter(|&(d2, _)| d2 <= r2).map(|(_, i)| i)
        })
        .collect();
    Assignment::from_map(map, nodes, drones.len())
}

/// Cell budget for the node grid: at most this many cells per node, with a
/// floor for tiny inputs.
const CELLS_PER_NODE: usize = 4;
const MIN_CELL_BUDGET: usize = 4096;

/// Uniform bucket grid over a box, stored in CSR form.
struct NodeGrid {
    origin: Point2D,
    inv_cell: f64,
    nx: i64,
    ny: i64,
    starts: Vec<u32>,
    /// Node indices grouped by cell.
    members: Vec<u32>,
}

impl NodeGrid {
    /// Buckets the nodes lying inside `[lo, hi]`; nodes outside are dropped.
    fn build(nodes: &[GroundNode], lo: Point2D, hi: Point2D, cell_size: f64) -> Self {
        let budget = (nodes.len() * CELLS_PER_NODE).max(MIN_CELL_BUDGET) as f64;
        let mut cell = cell_size;
        let (nx, ny) = loop {
            let nx = libm::floor((hi.x - lo.x) / cell) + 1.0;
            let ny = libm::floor((hi.y - lo.y) / cell) + 1.0;
            if nx * ny <= budget {
                break (nx as i64, ny as i64);
            }
            cell *= 2.0;
        };
        let mut grid = NodeGrid {
            origin: lo,
            inv_cell: 1.0 / cell,
            nx,
            ny,
            starts: vec![0; (nx * ny) as usize + 1],
            members: Vec::new(),
        };
        let keys: Vec<Option<u32>> = nodes
            .iter()
            .map(|n| {
                let p = n.pos;
                if !(lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y) {
                    return None;
                }
                let (cx, cy) = grid.cell_of(p);
                Some((cy.min(ny - 1) * nx + cx.min(nx - 1)) as u32)
            })
            .collect();
        for k in keys.iter().flatten() {
            grid.starts[*k as usize + 1] += 1;
        }
        for k in 1..grid.starts.len() {
            grid.starts[k] += grid.starts[k - 1];
        }
        let mut fill = grid.starts.clone();
        grid.members = vec![0; grid.starts[grid.starts.len() - 1] as usize];
        for (i, k) in keys.iter().enumerate() {
            if let Some(k) = *k {
                let slot = &mut fill[k as usize];
                grid.members[*slot as usize] = i as u32;
                *slot += 1;
            }
        }
        grid
    }

    #[inline]
    fn cell_of(&self, p: Point2D) -> (i64, i64) {
        (
            floor_i64((p.x - self.origin.x) * self.inv_cell),
            floor_i64((p.y - self.origin.y) * self.inv_cell),
        )
    }

    /// Visits every node whose cell intersects the box `[p - reach, p + reach]`.
    #[inline]
    fn for_each_near(&self, p: Point2D, reach: f64, mut f: impl FnMut(u32)) {
        let (x0, y0) = self.cell_of(Point2D::new(p.x - reach, p.y - reach));
        let (x1, y1) = self.cell_of(Point2D::new(p.x + reach, p.y + reach));
        let (x0, x1) = (x0.max(0), x1.min(self.nx - 1));
        let (y0, y1) = (y0.max(0), y1.min(self.ny - 1));
        if x0 > x1 || y0 > y1 {
            return;
        }
        for cy in y0..=y1 {
            let row = cy * self.nx;
            let lo = self.starts[(row + x0) as usize] as usize;
            let hi = self.starts[(row + x1 + 1) as usize] as usize;
            for &i in &self.members[lo..hi] {
                f(i);
            }
        }
    }
}

/// `floor(v)` as an integer, saturating at the `i64` range.
#[inline]
fn floor_i64(v: f64) -> i64 {
    let t = v as i64;
    if (t as f64) > v {
        t - 1
    } else {
        t
    }
}

/// Grid-accelerated association; returns exactly what [`associate`] returns.
///
/// Nodes near any drone are bucketed into square cells of `cell_size`
/// meters (coarsened if that would need too many cells). Each drone, in id
/// order, then scans only the cells overlapping its coverage box and offers
/// itself to every node inside its disc; a node keeps the closest offer,
/// lowest id on ties. This is the same winner the exhaustive scan picks
/// whenever that winner is within range.
///
/// The coverage box is padded slightly beyond `radius_r` so that rounding
/// in the squared-distance gate cannot admit a pair the box excluded.
pub fn associate_grid(
    nodes: &[GroundNode],
    drones: &[DroneState],
    radius_r: f64,
    cell_size: f64,
) -> Assignment {
    let mut best: Vec<Option<(f64, u32)>> = vec![None; nodes.len()];
    if !drones.is_empty() && !nodes.is_empty() {
        let (mut lo, mut hi) = (drones[0].pos, drones[0].pos);
        for d in drones {
            lo = Point2D::new(lo.x.min(d.pos.x), lo.y.min(d.pos.y));
            hi = Point2D::new(hi.x.max(d.pos.x), hi.y.max(d.pos.y));
        }
        let pad = reach(radius_r, lo.x.abs().max(lo.y.abs()).max(hi.x.abs()).max(hi.y.abs()));
        let lo = Point2D::new(lo.x - pad, lo.y - pad);
        let hi = Point2D::new(hi.x + pad, hi.y + pad);
        let grid = NodeGrid::build(nodes, lo, hi, cell_size);
        let r2 = radius_r * radius_r;
        for (id, drone) in drones.iter().enumerate() {
            let id = id as u32;
            let reach = reach(radius_r, drone.pos.x.abs().max(drone.pos.y.abs()));
            grid.for_each_near(drone.pos, reach, |n| {
                let d2 = nodes[n as usize].pos.distance_sq(drone.pos);
                let slot = &mut best[n as usize];
                if d2 <= r2 && closer(d2, id, *slot) {
                    *slot = Some((d2, id));
                }
            });
        }
    }
    let map = best.into_iter().map(|b| b.map(|(_, id)| id)).collect();
    Assignment::from_map(map, nodes, drones.len())
}

/// Half-width of the box that must contain every node a drone at
/// coordinate magnitude `scale` can serve.
#[inline]
fn reach(radius_r: f64, scale: f64) -> f64 {
    radius_r * (1.0 + 1e-9) + 1e-9 * (1.0 + scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(ps: &[(f64, f64)]) -> Vec<GroundNode> {
        ps.iter()
            .enumerate()
            .map(|(i, &(x, y))| GroundNode {
                id: i as u32,
                pos: Point2D::new(x, y),
            })
            .collect()
    }

    fn drones(ps: &[(f64, f64)]) -> Vec<DroneState> {
        ps.iter()
            .enumerate()
            .map(|(i, &(x, y))| DroneState::new(i as u32, Point2D::new(x, y), 0))
            .collect()
    }

    #[test]
    fn nearest_within_radius() {
        let a = associate(&nodes(&[(0.0, 0.0)]), &drones(&[(1.0, 0.0), (5.0, 0.0)]), 2.0);
        assert_eq!(a.node_to_drone, vec![Some(0)]);
        assert_eq!(a.per_drone_count, vec![1, 0]);
        assert_eq!(a.per_drone_members, vec![vec![0], vec![]]);
    }

    #[test]
    fn equidistant_tie_goes_to_lowest_id() {
        let a = associate(&nodes(&[(3.0, 0.0)]), &drones(&[(1.0, 0.0), (5.0, 0.0)]), 2.0);
        assert_eq!(a.node_to_drone, vec![Some(0)]);
        let b = associate(&nodes(&[(3.0, 0.0)]), &drones(&[(5.0, 0.0), (1.0, 0.0)]), 2.0);
        assert_eq!(b.node_to_drone, vec![Some(0)]);
    }

    #[test]
    fn out_of_range_is_unassigned() {
        let a = associate(&nodes(&[(10.0, 10.0)]), &drones(&[(1.0, 0.0), (5.0, 0.0)]), 2.0);
        assert_eq!(a.node_to_drone, vec![None]);
        assert_eq!(a.per_drone_count, vec![0, 0]);
    }

    #[test]
    fn nearest_out_of_range_blocks_farther_drone() {
        // nearest drone is beyond R, so the node stays unassigned even though
        // no in-range drone exists; the grid must agree
        let n = nodes(&[(0.0, 0.0)]);
        let d = drones(&[(3.0, 0.0)]);
        assert_eq!(associate(&n, &d, 2.0).node_to_drone, vec![None]);
        assert_eq!(associate_grid(&n, &d, 2.0, 2.0).node_to_drone, vec![None]);
    }

    #[test]
    fn boundary_distance_is_connected() {
        let a = associate(&nodes(&[(3.0, 4.0)]), &drones(&[(0.0, 0.0)]), 5.0);
        assert_eq!(a.node_to_drone, vec![Some(0)]);
    }

    #[test]
    fn empty_inputs() {
        let a = associate(&[], &[], 1.0);
        assert!(a.node_to_drone.is_empty() && a.per_drone_count.is_empty());
        let b = associate_grid(&nodes(&[(1.0, 1.0)]), &[], 1.0, 1.0);
        assert_eq!(b.node_to_drone, vec![None]);
    }

    #[test]
    fn single_drone_covering_everything() {
        let n = nodes(&[(0.0, 0.0), (100.0, 100.0), (0.0, 100.0), (37.0, 81.0)]);
        let d = drones(&[(50.0, 50.0)]);
        let a = associate_grid(&n, &d, 100.0 * core::f64::consts::SQRT_2, 30.0);
        assert_eq!(a.per_drone_count, vec![4]);
    }

    #[test]
    fn grid_handles_tiny_cells() {
        let n = nodes(&[(0.0, 0.0), (999.0, 999.0), (500.0, 500.0)]);
        let d = drones(&[(0.0, 1.0), (1000.0, 1000.0), (400.0, 500.0)]);
        assert_eq!(associate_grid(&n, &d, 150.0, 1e-6), associate(&n, &d, 150.0));
    }
}
