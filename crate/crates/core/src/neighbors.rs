//! Exact Euclidean k-nearest-neighbor search.
//!
//! Brute force is the reference; the kd-tree must return exactly the same
//! neighbors. Candidates are ordered by `(squared distance, point index)` in
//! both strategies, so ties resolve to the smaller index and the two agree
//! bit for bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

const LEAF_SIZE: usize = 8;

pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(squared_distance(a, b).sqrt())
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStrategy {
    Brute,
    #[default]
    KdTree,
}

/// Neighbors of one query, nearest first.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborResult {
    pub indices: Vec<usize>,
    pub distances: Vec<f64>,
}

/// Bounded candidate list kept sorted by `(sq, index)`.
struct Candidates {
    k: usize,
    items: Vec<(f64, usize)>,
}

impl Candidates {
    fn new(k: usize) -> Self {
        Self {
            k,
            items: Vec::with_capacity(k + 1),
        }
    }

    #[inline]
    fn is_full(&self) -> bool {
        self.items.len() == self.k
    }

    #[inline]
    fn worst_sq(&self) -> f64 {
        self.items.last().map_or(f64::INFINITY, |c| c.0)
    }

    #[inline]
    fn offer(&mut self, sq: f64, idx: usize) {
        let key = (sq, idx);
        if self.is_full() {
            let worst = *self.items.last().unwrap();
            if !less(key, worst) {
                return;
            }
            self.items.pop();
        }
        let pos = self.items.partition_point(|&c| less(c, key));
        self.items.insert(pos, key);
    }

    fn into_result(self) -> NeighborResult {
        let (sq, indices): (Vec<f64>, Vec<usize>) = self.items.into_iter().unzip();
        NeighborResult {
            indices,
            distances: sq.into_iter().map(f64::sqrt).collect(),
        }
    }
}

#[inline]
fn less(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        dim: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
struct KdTree {
    nodes: Vec<Node>,
    order: Vec<usize>,
}

impl KdTree {
    fn build(points: &DataMatrix) -> Self {
        let mut tree = KdTree {
            nodes: Vec::new(),
            order: (0..points.rows()).collect(),
        };
        tree.build_node(points, 0, points.rows());
        tree
    }

    fn build_node(&mut self, points: &DataMatrix, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { start, end });
        if end - start <= LEAF_SIZE {
            return id;
        }
        let slice = &self.order[start..end];
        let (dim, spread) = (0..points.cols())
            .map(|d| {
                let (lo, hi) =
                    slice
                        .iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                            let v = points.row(i)[d];
                            (lo.min(v), hi.max(v))
                        });
                (d, hi - lo)
            })
            .fold((0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        if spread <= 0.0 {
            return id;
        }
        self.order[start..end].sort_by(|&a, &b| {
            points.row(a)[dim]
                .total_cmp(&points.row(b)[dim])
                .then(a.cmp(&b))
        });
        let mid = start + (end - start) / 2;
        let value = points.row(self.order[mid])[dim];
        let left = self.build_node(points, start, mid);
        let right = self.build_node(points, mid, end);
        self.nodes[id] = Node::Split {
            dim,
            value,
            left,
            right,
        };
        id
    }

    fn search(
        &self,
        points: &DataMatrix,
        node: usize,
        q: &[f64],
        exclude: Option<usize>,
        cands: &mut Candidates,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if Some(i) != exclude {
                        cands.offer(squared_distance(q, points.row(i)), i);
                    }
                }
            }
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = q[dim] - value;
                let (near, far) = if diff < 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                self.search(points, near, q, exclude, cands);
                // Every point across the plane is at least |diff| away. Equality
                // still has to be visited because a smaller index may tie.
                if !cands.is_full() || diff * diff <= cands.worst_sq() {
                    self.search(points, far, q, exclude, cands);
                }
            }
        }
    }
}

/// Immutable search index over a fixed point set.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    points: DataMatrix,
    strategy: SearchStrategy,
    tree: Option<KdTree>,
}

impl NeighborIndex {
    pub fn new(points: DataMatrix, strategy: SearchStrategy) -> Self {
        let tree = match strategy {
            SearchStrategy::Brute => None,
            SearchStrategy::KdTree => Some(KdTree::build(&points)),
        };
        Self {
            points,
            strategy,
            tree,
        }
    }

    pub fn points(&self) -> &DataMatrix {
        &self.points
    }

    pub fn strategy(&self) -> SearchStrategy {
        self.strategy
    }

    /// The `k` nearest points to `q`, optionally skipping one point index
    /// (used when a train point queries its own index).
    pub fn query(&self, q: &[f64], k: usize, exclude: Option<usize>) -> Result<NeighborResult> {
        self.points.check_cols(q.len())?;
        let available =
            self.points.rows() - usize::from(exclude.is_some_and(|e| e < self.points.rows()));
        if k == 0 || k > available {
            return Err(Error::invalid(format!(
                "k must be in [1, {available}], got {k}"
            )));
        }
        let mut cands = Candidates::new(k);
        match &self.tree {
            Some(tree) => tree.search(&self.points, 0, q, exclude, &mut cands),
            None => {
                for (i, p) in self.points.iter_rows().enumerate() {
                    if Some(i) != exclude {
                        cands.offer(squared_distance(q, p), i);
                    }
                }
            }
        }
        Ok(cands.into_result())
    }

    /// Neighbors of every indexed point among the others (self excluded).
    pub fn query_self(&self, k: usize) -> Result<Vec<NeighborResult>> {
        (0..self.points.rows())
            .into_par_iter()
            .map(|i| self.query(self.points.row(i), k, Some(i)))
            .collect()
    }

    pub fn query_batch(&self, queries: &DataMatrix, k: usize) -> Result<Vec<NeighborResult>> {
        self.points.check_cols(queries.cols())?;
        (0..queries.rows())
            .into_par_iter()
            .map(|i| self.query(queries.row(i), k, None))
            .collect()
    }
}
