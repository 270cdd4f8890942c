//! Ground-node random walk.

use crate::geometry::{Point2D, Region};
use crate::model::GroundNode;
use crate::rng::RngStream;

/// One fixed-length step in a uniformly random heading, reflected off the
/// region walls.
pub fn node_step(node: GroundNode, step: f64, region: &Region, rng: &mut RngStream) -> GroundNode {
    let heading = rng.heading();
    GroundNode {
        id: node.id,
        pos: step_in_heading(node.pos, heading, step, region),
    }
}

/// The deterministic part of [`node_step`], with the heading supplied.
pub fn step_in_heading(pos: Point2D, heading: f64, step: f64, region: &Region) -> Point2D {
    region.reflect(pos + Point2D::from_heading(heading) * step)
}

/// Steps every node once, in slice order.
pub fn step_all_nodes(nodes: &mut [GroundNode], step: f64, region: &Region, rng: &mut RngStream) {
    for node in nodes.iter_mut() {
        *node = node_step(*node, step, region, rng);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    const L: f64 = 100.0;

    fn region() -> Region {
        Region::new(L).unwrap()
    }

    #[test]
    fn reflects_off_left_wall() {
        let p = step_in_heading(Point2D::new(0.5, 5.0), PI, 1.0, &region());
        assert!((p.x - 0.5).abs() < 1e-12 && (p.y - 5.0).abs() < 1e-12, "{p:?}");
    }

    #[test]
    fn interior_step() {
        let p = step_in_heading(Point2D::new(5.0, 5.0), 0.0, 1.0, &region());
        assert_eq!(p, Point2D::new(6.0, 5.0));
    }

    #[test]
    fn reflects_off_right_wall() {
        let p = step_in_heading(Point2D::new(L - 0.2, 5.0), 0.0, 1.0, &region());
        // scalar oracle: x' = L + 0.8, reflected to 2L - x'
        let x_raw = (L - 0.2) + 1.0;
        assert_eq!(p.x, 2.0 * L - x_raw);
        assert!((p.x - (L - 0.8)).abs() < 1e-12);
    }

    #[test]
    fn empty_is_noop() {
        let mut rng = RngStream::new(0, 0);
        let before = rng.clone().next_u64();
        step_all_nodes(&mut [], 1.0, &region(), &mut rng);
        assert_eq!(rng.next_u64(), before);
    }

    #[test]
    fn consumes_one_draw_per_node_in_order() {
        let r = region();
        let mut nodes = [
            GroundNode { id: 0, pos: Point2D::new(10.0, 10.0) },
            GroundNode { id: 1, pos: Point2D::new(50.0, 50.0) },
        ];
        let mut oracle = RngStream::new(4, 0);
        let h0 = oracle.heading();
        let h1 = oracle.heading();
        step_all_nodes(&mut nodes, 1.0, &r, &mut RngStream::new(4, 0));
        assert_eq!(nodes[0].pos, step_in_heading(Point2D::new(10.0, 10.0), h0, 1.0, &r));
        assert_eq!(nodes[1].pos, step_in_heading(Point2D::new(50.0, 50.0), h1, 1.0, &r));
    }

    #[test]
    fn stays_inside_after_many_steps() {
        let r = region();
        let mut rng = RngStream::new(1, 0);
        let mut nodes: std::vec::Vec<GroundNode> = (0..50)
            .map(|id| GroundNode { id, pos: Point2D::new(rng.uniform(0.0, L), rng.uniform(0.0, L)) })
            .collect();
        for _ in 0..1000 {
            step_all_nodes(&mut nodes, 3.0, &r, &mut rng);
            assert!(nodes.iter().all(|n| r.contains(n.pos)));
        }
    }

    #[test]
    fn long_walk_mean_is_central() {
        // stationary distribution is uniform: mean L/2, sd of one coordinate
        // L/sqrt(12). 10^5 correlated steps with step 5 leave roughly
        // 10^5 * 25 / L^2 = 250 effective samples, so sigma of the mean is about
        // 28.9 / sqrt(250) = 1.8; allow 3 sigma with slack for correlation.
        let r = region();
        let mut rng = RngStream::new(17, 0);
        let mut node = GroundNode { id: 0, pos: r.center() };
        let (mut sx, mut sy) = (0.0, 0.0);
        let n = 100_000;
        for _ in 0..n {
            node = node_step(node, 5.0, &r, &mut rng);
            sx += node.pos.x;
            sy += node.pos.y;
        }
        let (mx, my) = (sx / n as f64, sy / n as f64);
        assert!((mx - L / 2.0).abs() < 8.0, "{mx}");
        assert!((my - L / 2.0).abs() < 8.0, "{my}");
    }
}
