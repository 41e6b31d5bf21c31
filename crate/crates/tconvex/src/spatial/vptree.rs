//! Vantage-point tree for ambient dimension above 3.
//!
//! Construction is deterministic: the vantage point of a subset is its
//! smallest index and the split is the median of `(distance, index)` pairs.

use crate::geom::PointCloud;
use crate::linalg;
use std::collections::BinaryHeap;

const LEAF_SIZE: usize = 8;

enum Node {
    Leaf(Vec<u32>),
    Split {
        vantage: u32,
        mu: f64,
        inside: usize,
        outside: usize,
    },
}

pub struct VpTree {
    nodes: Vec<Node>,
    root: usize,
}

impl VpTree {
    pub fn build(cloud: &PointCloud) -> Self {
        let mut nodes = Vec::new();
        let all: Vec<u32> = (0..cloud.len() as u32).collect();
        let root = Self::build_rec(cloud, all, &mut nodes);
        VpTree { nodes, root }
    }

    fn build_rec(cloud: &PointCloud, mut subset: Vec<u32>, nodes: &mut Vec<Node>) -> usize {
        if subset.len() <= LEAF_SIZE {
            nodes.push(Node::Leaf(subset));
            return nodes.len() - 1;
        }
        subset.sort_unstable();
        let vantage = subset[0];
        let vp = cloud.point(vantage as usize);
        let mut rest: Vec<(f64, u32)> = subset[1..]
            .iter()
            .map(|&i| (linalg::dist(vp, cloud.point(i as usize)), i))
            .collect();
        let mid = rest.len() / 2;
        rest.select_nth_unstable_by(mid, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mu = rest[mid].0;
        // inside: distance <= mu (per the selection, everything left of mid
        // plus the pivot); outside: the remainder.
        let mut inside: Vec<u32> = rest[..=mid].iter().map(|&(_, i)| i).collect();
        inside.push(vantage);
        let outside: Vec<u32> = rest[mid + 1..].iter().map(|&(_, i)| i).collect();
        // All points equidistant: keep as a leaf to guarantee progress.
        if outside.is_empty() {
            nodes.push(Node::Leaf(subset));
            return nodes.len() - 1;
        }
        let inside_id = Self::build_rec(cloud, inside, nodes);
        let outside_id = Self::build_rec(cloud, outside, nodes);
        nodes.push(Node::Split {
            vantage,
            mu,
            inside: inside_id,
            outside: outside_id,
        });
        nodes.len() - 1
    }

    pub fn radius(&self, cloud: &PointCloud, q: &[f64], r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        let r2 = r * r;
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            match &self.nodes[id] {
                Node::Leaf(pts) => {
                    for &i in pts {
                        if linalg::dist2(q, cloud.point(i as usize)) <= r2 {
                            out.push(i as usize);
                        }
                    }
                }
                Node::Split {
                    vantage,
                    mu,
                    inside,
                    outside,
                } => {
                    let dq = linalg::dist(q, cloud.point(*vantage as usize));
                    if dq - mu <= r {
                        stack.push(*inside);
                    }
                    if mu - dq <= r {
                        stack.push(*outside);
                    }
                }
            }
        }
        out
    }

    pub fn knn(
        &self,
        cloud: &PointCloud,
        q: &[f64],
        k: usize,
        exclude: Option<usize>,
    ) -> Vec<(usize, f64)> {
        let mut heap = BoundedHeap::new(k);
        self.knn_rec(cloud, q, exclude, self.root, &mut heap);
        heap.into_vec()
    }

    fn knn_rec(
        &self,
        cloud: &PointCloud,
        q: &[f64],
        exclude: Option<usize>,
        id: usize,
        heap: &mut BoundedHeap,
    ) {
        match &self.nodes[id] {
            Node::Leaf(pts) => {
                for &iu in pts {
                    let i = iu as usize;
                    if Some(i) == exclude {
                        continue;
                    }
                    heap.offer(i, linalg::dist2(q, cloud.point(i)));
                }
            }
            Node::Split {
                vantage,
                mu,
                inside,
                outside,
            } => {
                let dq = linalg::dist(q, cloud.point(*vantage as usize));
                let in_bound = (dq - mu).max(0.0);
                let out_bound = (mu - dq).max(0.0);
                let visit = |bound: f64, child: usize, heap: &mut BoundedHeap, s: &Self| {
                    if !heap.is_full() || bound * bound <= heap.worst() {
                        s.knn_rec(cloud, q, exclude, child, heap);
                    }
                };
                if in_bound <= out_bound {
                    visit(in_bound, *inside, heap, self);
                    visit(out_bound, *outside, heap, self);
                } else {
                    visit(out_bound, *outside, heap, self);
                    visit(in_bound, *inside, heap, self);
                }
            }
        }
    }
}

/// Fixed-capacity worst-out heap on `(d², index)` with the brute-force total
/// order, so tie-breaks match a sorted linear scan exactly.
pub struct BoundedHeap {
    k: usize,
    heap: BinaryHeap<HeapItem>,
}

struct HeapItem {
    d2: f64,
    idx: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.d2.total_cmp(&other.d2).is_eq() && self.idx == other.idx
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.d2.total_cmp(&other.d2).then(self.idx.cmp(&other.idx))
    }
}

impl BoundedHeap {
    pub fn new(k: usize) -> Self {
        BoundedHeap {
            k,
            heap: BinaryHeap::with_capacity(k + 1),
        }
    }

    pub fn is_full(&self) -> bool {
        self.heap.len() == self.k
    }

    /// Squared distance of the current worst kept candidate.
    pub fn worst(&self) -> f64 {
        self.heap.peek().map(|x| x.d2).unwrap_or(f64::INFINITY)
    }

    pub fn offer(&mut self, idx: usize, d2: f64) {
        let item = HeapItem { d2, idx };
        if self.heap.len() < self.k {
            self.heap.push(item);
        } else if let Some(top) = self.heap.peek() {
            if item.cmp(top).is_lt() {
                self.heap.pop();
                self.heap.push(item);
            }
        }
    }

    pub fn into_vec(self) -> Vec<(usize, f64)> {
        self.heap.into_iter().map(|x| (x.idx, x.d2)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PointCloud;
    use crate::spatial::knn_brute_force;

    #[test]
    fn vp_tree_matches_brute_force_with_duplicates() {
        let mut rows = Vec::new();
        let mut state = 12345u64;
        for _ in 0..120 {
            let mut row = Vec::new();
            for _ in 0..6 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                row.push(((state >> 33) % 7) as f64);
            }
            rows.push(row);
        }
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let tree = VpTree::build(&cloud);
        for i in [0usize, 5, 77, 119] {
            let mut got = tree.knn(&cloud, cloud.point(i), 9, Some(i));
            got.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            let got: Vec<usize> = got.into_iter().map(|(j, _)| j).collect();
            assert_eq!(got, knn_brute_force(&cloud, i, 9));
        }
    }

    #[test]
    fn radius_query_is_exact() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i % 8) as f64, (i / 8) as f64, 0.5, 0.5, 0.25])
            .collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let tree = VpTree::build(&cloud);
        let q = cloud.point(0);
        let mut got = tree.radius(&cloud, q, 2.0);
        got.sort_unstable();
        let expect: Vec<usize> = (0..40)
            .filter(|&j| crate::linalg::dist(q, cloud.point(j)) <= 2.0)
            .collect();
        assert_eq!(got, expect);
    }
}
