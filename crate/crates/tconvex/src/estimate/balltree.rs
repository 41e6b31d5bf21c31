//! Best-first nearest-hull search over the simplices of a complex.
//!
//! Every simplex hull sits inside its enclosing ball, so
//! `d(q, Conv σ) >= d(q, center_σ) - r_σ`. A vantage-point tree over the
//! ball centers, augmented with each subtree's largest ball radius, turns
//! that into subtree pruning bounds.

use crate::geom::{dist_point_to_hull, PointCloud};
use crate::linalg;

use super::SimplicialComplex;

struct Item {
    center: Vec<f64>,
    radius: f64,
    vertices: Vec<usize>,
}

enum Node {
    Leaf {
        items: Vec<usize>,
    },
    Split {
        vantage: usize,
        mu: f64,
        max_r: f64,
        inside: usize,
        outside: usize,
    },
}

pub struct SimplexBallTree {
    items: Vec<Item>,
    nodes: Vec<Node>,
    root: Option<usize>,
}

const LEAF_SIZE: usize = 8;

impl SimplexBallTree {
    pub fn build(complex: &SimplicialComplex, _cloud: &PointCloud) -> Self {
        let items: Vec<Item> = complex
            .simplices()
            .filter(|s| s.dim() >= 1)
            .map(|s| Item {
                center: s.meb().center.coords().to_vec(),
                radius: s.meb().radius,
                vertices: s.vertex_indices().to_vec(),
            })
            .collect();
        let mut nodes = Vec::new();
        let root = if items.is_empty() {
            None
        } else {
            let ids: Vec<usize> = (0..items.len()).collect();
            Some(Self::build_rec(&items, ids, &mut nodes))
        };
        SimplexBallTree { items, nodes, root }
    }

    fn build_rec(items: &[Item], mut subset: Vec<usize>, nodes: &mut Vec<Node>) -> usize {
        if subset.len() <= LEAF_SIZE {
            nodes.push(Node::Leaf { items: subset });
            return nodes.len() - 1;
        }
        subset.sort_unstable();
        let vantage = subset[0];
        let vp = &items[vantage].center;
        let mut rest: Vec<(f64, usize)> = subset[1..]
            .iter()
            .map(|&i| (linalg::dist(vp, &items[i].center), i))
            .collect();
        let mid = rest.len() / 2;
        rest.select_nth_unstable_by(mid, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mu = rest[mid].0;
        let mut inside: Vec<usize> = rest[..=mid].iter().map(|&(_, i)| i).collect();
        inside.push(vantage);
        let outside: Vec<usize> = rest[mid + 1..].iter().map(|&(_, i)| i).collect();
        if outside.is_empty() {
            nodes.push(Node::Leaf { items: subset });
            return nodes.len() - 1;
        }
        let max_r = subset
            .iter()
            .map(|&i| items[i].radius)
            .fold(0.0f64, f64::max);
        let inside_id = Self::build_rec(items, inside, nodes);
        let outside_id = Self::build_rec(items, outside, nodes);
        nodes.push(Node::Split {
            vantage,
            mu,
            max_r,
            inside: inside_id,
            outside: outside_id,
        });
        nodes.len() - 1
    }

    /// `min_σ d(q, Conv σ)` clipped from above by `init` (a known upper
    /// bound, e.g. the distance to the nearest vertex). The search abandons
    /// early once the running best drops to `stop_below` or less, returning
    /// that best; callers use this when smaller values cannot matter.
    pub fn min_hull_distance(
        &self,
        q: &[f64],
        cloud: &PointCloud,
        init: f64,
        stop_below: f64,
    ) -> f64 {
        let mut best = init;
        if let Some(root) = self.root {
            self.search(q, cloud, root, stop_below, &mut best);
        }
        best
    }

    fn eval_item(&self, q: &[f64], cloud: &PointCloud, id: usize, best: &mut f64) {
        let item = &self.items[id];
        if linalg::dist(q, &item.center) - item.radius >= *best {
            return;
        }
        let d = match item.vertices[..] {
            [a, b] => segment_distance(q, cloud.point(a), cloud.point(b)),
            _ => {
                let verts: Vec<&[f64]> = item.vertices.iter().map(|&i| cloud.point(i)).collect();
                dist_point_to_hull(q, &verts).expect("consistent dimensions")
            }
        };
        if d < *best {
            *best = d;
        }
    }

    fn search(&self, q: &[f64], cloud: &PointCloud, node: usize, stop_below: f64, best: &mut f64) {
        if *best <= stop_below {
            return;
        }
        match &self.nodes[node] {
            Node::Leaf { items } => {
                for &id in items {
                    self.eval_item(q, cloud, id, best);
                    if *best <= stop_below {
                        return;
                    }
                }
            }
            Node::Split {
                vantage,
                mu,
                max_r,
                inside,
                outside,
            } => {
                let dq = linalg::dist(q, &self.items[*vantage].center);
                self.eval_item(q, cloud, *vantage, best);
                let in_bound = (dq - mu).max(0.0) - max_r;
                let out_bound = (mu - dq).max(0.0) - max_r;
                let mut order = [(in_bound, *inside), (out_bound, *outside)];
                if out_bound < in_bound {
                    order.swap(0, 1);
                }
                for (bound, child) in order {
                    if bound < *best {
                        self.search(q, cloud, child, stop_below, best);
                    }
                    if *best <= stop_below {
                        return;
                    }
                }
            }
        }
    }
}

/// Allocation-free point-to-segment distance for the hot query loop.
fn segment_distance(q: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut len2 = 0.0;
    let mut proj = 0.0;
    for k in 0..q.len() {
        let ab = b[k] - a[k];
        len2 += ab * ab;
        proj += (q[k] - a[k]) * ab;
    }
    let t = if len2 > 0.0 {
        (proj / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut d2 = 0.0;
    for k in 0..q.len() {
        let foot = a[k] + t * (b[k] - a[k]);
        d2 += (q[k] - foot) * (q[k] - foot);
    }
    d2.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::reconstruct;

    #[test]
    fn matches_linear_scan_on_a_small_complex() {
        let rows: Vec<Vec<f64>> = (0..16)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 16.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let complex = reconstruct(&cloud, 0.25, 2).unwrap();
        let tree = SimplexBallTree::build(&complex, &cloud);
        let queries = [[0.5, 0.5], [1.2, 0.0], [0.0, 0.0], [0.9, 0.43]];
        for q in queries {
            let init = (0..cloud.len())
                .map(|i| linalg::dist(&q, cloud.point(i)))
                .fold(f64::INFINITY, f64::min);
            let got = tree.min_hull_distance(&q, &cloud, init, -1.0);
            let want = complex
                .simplices()
                .map(|s| {
                    let verts: Vec<&[f64]> =
                        s.vertex_indices().iter().map(|&i| cloud.point(i)).collect();
                    dist_point_to_hull(&q, &verts).unwrap()
                })
                .fold(f64::INFINITY, f64::min);
            assert!((got - want).abs() < 1e-7, "got {got}, want {want}");
        }
    }
}
