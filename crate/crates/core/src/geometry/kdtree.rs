//! Exact nearest-neighbour queries under the polydisk metric.
//!
//! Every real coordinate difference is a lower bound for `max(|Δz|, |Δw|)`,
//! so a far subtree is skipped only when its splitting plane is at least the
//! current best distance away. The returned minimum is the same `f64` the
//! brute-force scan produces.

use super::{poly_metric, C2Point};

const LEAF_SIZE: usize = 8;

fn coord(p: &C2Point, axis: usize) -> f64 {
    match axis {
        0 => p.z.re,
        1 => p.z.im,
        2 => p.w.re,
        _ => p.w.im,
    }
}

enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

pub(crate) struct KdTree<'a> {
    points: &'a [C2Point],
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl<'a> KdTree<'a> {
    pub(crate) fn new(points: &'a [C2Point]) -> Self {
        let mut tree = KdTree {
            points,
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        if !points.is_empty() {
            tree.build(0, points.len());
        }
        tree
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let axis = (0..4)
            .map(|a| {
                let (lo, hi) = self.order[start..end]
                    .iter()
                    .map(|&i| coord(&self.points[i], a))
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
                (a, hi - lo)
            })
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0;
        let mid = start + (end - start) / 2;
        let pts = self.points;
        self.order[start..end]
            .select_nth_unstable_by(mid - start, |&i, &j| coord(&pts[i], axis).total_cmp(&coord(&pts[j], axis)));
        let value = coord(&pts[self.order[mid]], axis);
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    /// Distance from `q` to the nearest stored point (`inf` when empty).
    pub(crate) fn nearest_distance(&self, q: &C2Point) -> f64 {
        let mut best = f64::INFINITY;
        if !self.nodes.is_empty() {
            self.visit(0, q, &mut best);
        }
        best
    }

    fn visit(&self, id: usize, q: &C2Point, best: &mut f64) {
        match self.nodes[id] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let d = poly_metric(q, &self.points[i]);
                    if d < *best {
                        *best = d;
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = coord(q, axis) - value;
                let (near, far) = if diff >= 0.0 { (right, left) } else { (left, right) };
                self.visit(near, q, best);
                if diff.abs() < *best {
                    self.visit(far, q, best);
                }
            }
        }
    }
}
