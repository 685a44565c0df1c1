//! Scored candidate edges, undirected forests and their rooted orientation.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forest::UnionFind;
use crate::schema::VariableSchema;

/// A candidate edge `{i, j}` (`i < j`) with its sample-scaled mutual
/// information, penalty and net score, all in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredEdge {
    /// Smaller endpoint.
    pub i: usize,
    /// Larger endpoint.
    pub j: usize,
    /// `I_n(i, j) ≥ 0`; may be `+inf`.
    pub mi: f64,
    /// Penalty `≥ 0`.
    pub penalty: f64,
    /// `mi − penalty`.
    pub score: f64,
}

impl ScoredEdge {
    /// Build an edge from an unordered pair. Tiny negative `mi` from rounding
    /// is clamped to zero.
    pub fn new(a: usize, b: usize, mi: f64, penalty: f64) -> Self {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        let mi = if mi < 0.0 { 0.0 } else { mi };
        ScoredEdge {
            i,
            j,
            mi,
            penalty,
            score: mi - penalty,
        }
    }

    /// `(i, j)` with `i < j`.
    pub fn pair(&self) -> (usize, usize) {
        (self.i, self.j)
    }
}

/// An acyclic undirected graph over `n_vertices` vertices.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Forest {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Forest {
    /// A forest without edges.
    pub fn empty(n_vertices: usize) -> Self {
        Forest {
            n_vertices,
            edges: Vec::new(),
        }
    }

    /// Build a forest, rejecting self-loops, repeated pairs and cycles.
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut uf = UnionFind::new(n_vertices);
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n_vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        n_vertices,
                    });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let pair = if a < b { (a, b) } else { (b, a) };
            if out.contains(&pair) {
                return Err(Error::DuplicateEdge {
                    i: pair.0,
                    j: pair.1,
                });
            }
            if !uf.union(a, b) {
                return Err(Error::CyclicInput {
                    i: pair.0,
                    j: pair.1,
                });
            }
            out.push(pair);
        }
        out.sort_unstable();
        Ok(Forest {
            n_vertices,
            edges: out,
        })
    }

    /// Number of vertices.
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Edges `(i, j)`, `i < j`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Whether `{a, b}` is an edge.
    pub fn contains(&self, a: usize, b: usize) -> bool {
        let pair = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&pair).is_ok()
    }

    /// Whether every vertex is connected (a single spanning tree).
    pub fn is_spanning_tree(&self) -> bool {
        self.edges.len() + 1 == self.n_vertices
    }

    /// Neighbour lists, each ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// The same forest with one more edge, if that keeps it acyclic.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Forest> {
        Forest::new(
            self.n_vertices,
            self.edges.iter().copied().chain(core::iter::once((a, b))),
        )
    }
}

/// A forest oriented away from one root per connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedForest {
    parent: Vec<Option<usize>>,
    order: Vec<usize>,
}

impl RootedForest {
    /// Build from an explicit parent map, checking that following parents
    /// always terminates.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        let mut uf = UnionFind::new(n);
        for (child, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: p,
                        n_vertices: n,
                    });
                }
                if p == child {
                    return Err(Error::SelfLoop(child));
                }
                if !uf.union(child, p) {
                    return Err(Error::CyclicInput {
                        i: child.min(p),
                        j: child.max(p),
                    });
                }
            }
        }
        let mut children = vec![Vec::new(); n];
        for (child, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(child);
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            queue.extend(children[v].iter().copied());
        }
        debug_assert_eq!(order.len(), n);
        Ok(RootedForest { parent, order })
    }

    /// Number of vertices.
    pub fn n_vertices(&self) -> usize {
        self.parent.len()
    }

    /// Parent of `v`, `None` for a root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// The whole parent map.
    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Roots in ascending order.
    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(|&v| self.parent[v].is_none())
    }

    /// Vertices in breadth-first order from the roots; every parent precedes
    /// its children.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// The undirected forest obtained by forgetting orientation.
    pub fn to_forest(&self) -> Forest {
        let mut edges: Vec<(usize, usize)> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (c.min(p), c.max(p))))
            .collect();
        edges.sort_unstable();
        Forest {
            n_vertices: self.parent.len(),
            edges,
        }
    }
}

/// Orient each component of `forest` away from a root.
///
/// The root of a component is the vertex that maximizes the number of edges
/// whose child is Gaussian and whose parent is discrete (the orientation in
/// which a mixed edge is a class-conditional normal). Ties prefer a discrete
/// vertex, then the lowest vertex id. A component with any discrete vertex is
/// therefore always rooted at a discrete vertex.
pub fn orient_forest(forest: &Forest, schema: &VariableSchema) -> Result<RootedForest> {
    let n = forest.n_vertices();
    if schema.len() != n {
        return Err(Error::SchemaMismatch);
    }
    let forest = Forest::new(n, forest.edges().iter().copied())?;
    let adj = forest.adjacency();
    let discrete: Vec<bool> = schema.kinds().iter().map(|k| k.is_discrete()).collect();
    // An edge p -> c counts when the parent is discrete and the child Gaussian.
    let counts = |p: usize, c: usize| usize::from(discrete[p] && !discrete[c]);

    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // Orient the component from `start`, recording BFS order.
        let mut comp = Vec::new();
        let mut tmp_parent = vec![None; n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    tmp_parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        // Rerooting: score(start) by direct count, then move the root across
        // one edge at a time.
        let mut score = vec![0i64; n];
        score[start] = comp
            .iter()
            .filter_map(|&c| tmp_parent[c].map(|p| counts(p, c) as i64))
            .sum();
        for &c in comp.iter().skip(1) {
            let p = tmp_parent[c].expect("non-start vertex has a BFS parent");
            score[c] = score[p] - counts(p, c) as i64 + counts(c, p) as i64;
        }
        let root = comp
            .iter()
            .copied()
            .max_by(|&a, &b| {
                score[a]
                    .cmp(&score[b])
                    .then(discrete[a].cmp(&discrete[b]))
                    .then(b.cmp(&a))
            })
            .expect("component is nonempty");

        // Final orientation from the chosen root.
        let mut queue = VecDeque::from([root]);
        let mut placed = vec![false; n];
        placed[root] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !placed[w] {
                    placed[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
    }
    RootedForest::from_parents(parent)
}
