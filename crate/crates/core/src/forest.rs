//! Maximum-weight forest construction (Kruskal with union-find).
//!
//! Both builders visit candidate edges in descending weight order, breaking
//! ties by `(i, j)` ascending, and admit an edge only when it joins two
//! different components. [`build_tree_chow_liu`] ranks by mutual information
//! and keeps every loop-free edge, so it returns a spanning tree when all pairs
//! are supplied. [`build_forest_suzuki`] ranks by penalized score and stops at
//! the first negative score, so it may return a disconnected forest.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{Forest, ScoredEdge};

/// Disjoint sets over `0..n` with path compression and union by rank.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    components: usize,
}

impl UnionFind {
    /// `n` singleton sets.
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            components: n,
        }
    }

    /// Representative of the set holding `x`.
    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merge the sets of `a` and `b`. Returns `false` if they were already
    /// the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.components -= 1;
        true
    }

    /// Whether `a` and `b` are in the same set.
    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Number of disjoint sets.
    pub fn components(&self) -> usize {
        self.components
    }
}

/// Why a candidate edge was not admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// Its endpoints were already connected.
    Loop,
    /// Its score was negative.
    Negative,
}

/// The fate of one candidate edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeDecision {
    /// The candidate.
    pub edge: ScoredEdge,
    /// `None` if admitted.
    pub rejection: Option<Rejection>,
}

impl EdgeDecision {
    /// Whether the edge was admitted.
    pub fn accepted(&self) -> bool {
        self.rejection.is_none()
    }
}

/// A built forest together with the decision for every candidate, listed in
/// the order the candidates were visited.
#[derive(Debug, Clone, PartialEq)]
pub struct KruskalTrace {
    /// The result.
    pub forest: Forest,
    /// One entry per candidate edge.
    pub decisions: Vec<EdgeDecision>,
}

#[derive(Clone, Copy)]
enum Rank {
    MutualInformation,
    Score,
}

impl Rank {
    fn key(self, e: &ScoredEdge) -> f64 {
        let k = match self {
            Rank::MutualInformation => e.mi,
            Rank::Score => e.score,
        };
        // fold -0.0 into 0.0 so it does not sort after +0.0
        if k == 0.0 {
            0.0
        } else {
            k
        }
    }
}

/// Candidate order used by both builders (and by the brute-force oracle for
/// tie-breaking): key descending, then `(i, j)` ascending.
fn priority_cmp(rank: Rank, a: &ScoredEdge, b: &ScoredEdge) -> Ordering {
    rank.key(b)
        .total_cmp(&rank.key(a))
        .then_with(|| a.pair().cmp(&b.pair()))
}

/// Sort candidates by descending score with the `(i, j)` tie-break.
pub fn sort_by_score(edges: &mut [ScoredEdge]) {
    edges.sort_by(|a, b| priority_cmp(Rank::Score, a, b));
}

/// Sort candidates by descending mutual information with the `(i, j)`
/// tie-break.
pub fn sort_by_mi(edges: &mut [ScoredEdge]) {
    edges.sort_by(|a, b| priority_cmp(Rank::MutualInformation, a, b));
}

fn check_candidates(n_vertices: usize, edges: &[ScoredEdge]) -> Result<()> {
    if n_vertices >= 2 && edges.is_empty() {
        return Err(Error::EmptyEdgeList);
    }
    let mut seen: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
    for e in edges {
        for v in [e.i, e.j] {
            if v >= n_vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n_vertices,
                });
            }
        }
        if e.i == e.j {
            return Err(Error::SelfLoop(e.i));
        }
        seen.push((e.i.min(e.j), e.i.max(e.j)));
    }
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEdge {
            i: w[0].0,
            j: w[0].1,
        });
    }
    Ok(())
}

fn kruskal(
    n_vertices: usize,
    edges: &[ScoredEdge],
    rank: Rank,
    stop_on_negative: bool,
) -> Result<KruskalTrace> {
    check_candidates(n_vertices, edges)?;
    let mut order: Vec<ScoredEdge> = edges.to_vec();
    order.sort_by(|a, b| priority_cmp(rank, a, b));

    let mut uf = UnionFind::new(n_vertices);
    let mut chosen = Vec::with_capacity(n_vertices.saturating_sub(1));
    let mut decisions = Vec::with_capacity(order.len());
    let mut exhausted = false;
    for edge in order {
        let rejection = if exhausted || (stop_on_negative && edge.score < 0.0) {
            // Every later candidate scores lower, so none can be admitted.
            exhausted = true;
            Some(Rejection::Negative)
        } else if uf.union(edge.i, edge.j) {
            chosen.push(edge.pair());
            None
        } else {
            Some(Rejection::Loop)
        };
        decisions.push(EdgeDecision { edge, rejection });
    }
    let forest = Forest::new(n_vertices, chosen)?;
    Ok(KruskalTrace { forest, decisions })
}

/// Chow-Liu: maximum-weight spanning tree under `mi`, with the per-candidate
/// trace.
pub fn chow_liu_trace(n_vertices: usize, edges: &[ScoredEdge]) -> Result<KruskalTrace> {
    kruskal(n_vertices, edges, Rank::MutualInformation, false)
}

/// Suzuki: maximum-score forest admitting only nonnegative scores, with the
/// per-candidate trace.
pub fn suzuki_trace(n_vertices: usize, edges: &[ScoredEdge]) -> Result<KruskalTrace> {
    kruskal(n_vertices, edges, Rank::Score, true)
}

/// Maximum-weight spanning forest by mutual information.
///
/// With every pair of the `n_vertices` vertices among `edges`, the result is
/// a spanning tree with `n_vertices − 1` edges.
pub fn build_tree_chow_liu(n_vertices: usize, edges: &[ScoredEdge]) -> Result<Forest> {
    chow_liu_trace(n_vertices, edges).map(|t| t.forest)
}

/// Maximum-score forest: admits an edge iff its score is `≥ 0` and it joins
/// two components. Scores exactly zero are admitted.
pub fn build_forest_suzuki(n_vertices: usize, edges: &[ScoredEdge]) -> Result<Forest> {
    suzuki_trace(n_vertices, edges).map(|t| t.forest)
}
