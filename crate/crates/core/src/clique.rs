//! Maximum cliques of compatibility graphs on codeword supports.
//!
//! The solver is a colouring-bounded branch and bound over bitset adjacency
//! rows. Vertices are relabelled by non-increasing degree (ties by index); the
//! top level is split into one subproblem per vertex — cliques whose earliest
//! vertex in that order is the given one — and subproblems share an atomic
//! incumbent. The size found is exact regardless of scheduling. A separate
//! canonicalisation pass then extracts the lexicographically least clique of
//! that size in the original labelling, so witnesses are reproducible.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::code::SupportSet;
use crate::error::{Error, Result};
use crate::par;

/// Simple undirected graph with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<BitSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![BitSet::new(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    limit: n,
                });
            }
            if i == j {
                return Err(Error::InvalidStructure(format!("self-loop at vertex {i}")));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert_ne!(i, j, "self-loops are not allowed");
        self.adjacency[i].insert(j);
        self.adjacency[j].insert(i);
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BitSet::count).sum::<usize>() / 2
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn neighbours(&self, i: usize) -> &BitSet {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, row) in self.adjacency.iter().enumerate() {
            out.extend(row.iter().filter(|&j| j > i).map(|j| (i, j)));
        }
        out
    }

    /// The subgraph induced on `vertices`, relabelled `0..vertices.len()` in order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.adjacent(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// True iff `vertices` are pairwise adjacent and distinct.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(a, &u)| {
            u < self.n() && vertices[a + 1..].iter().all(|&v| u != v && v < self.n() && self.adjacent(u, v))
        })
    }

    /// Serialises as `n m` followed by sorted `i j` edge lines.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n(), edges.len());
        for (i, j) in edges {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "missing header".into(),
        })?;
        let [n, m] = parse_pair(line, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let [i, j] = parse_pair(line, l)?;
            if i >= j {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: format!("edge {i} {j} must satisfy i < j"),
                });
            }
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            column: 1,
            message: format!("expected two integers, found {}", fields.len()),
        });
    }
    let mut out = [0; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| Error::Parse {
            line,
            column: text.find(f).unwrap_or(0) + 1,
            message: format!("not a non-negative integer: {f:?}"),
        })?;
    }
    Ok(out)
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.edge_count())
    }
}

/// Graph on supports; vertices are adjacent when their intersection size is allowed.
#[derive(Clone, Debug)]
pub struct CompatibilityGraph {
    graph: Graph,
    supports: Vec<SupportSet>,
    allowed: BTreeSet<usize>,
}

/// Intersection sizes compatible with a block set of a quasi-symmetric design
/// with intersection numbers 0 and 3.
pub const DEFAULT_ALLOWED: [usize; 2] = [0, 3];

impl CompatibilityGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn supports(&self) -> &[SupportSet] {
        &self.supports
    }

    pub fn allowed(&self) -> &BTreeSet<usize> {
        &self.allowed
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

pub fn build_compatibility_graph(supports: &[SupportSet], allowed: &BTreeSet<usize>) -> Result<CompatibilityGraph> {
    if let Some(first) = supports.first() {
        if let Some(s) = supports.iter().find(|s| s.length() != first.length()) {
            return Err(Error::DimensionMismatch {
                expected: first.length(),
                found: s.length(),
            });
        }
    }
    let n = supports.len();
    let masks: Vec<BitSet> = supports
        .iter()
        .map(|s| BitSet::from_indices(s.length(), s.coordinates().iter().copied()))
        .collect();
    let rows = par::map_indices(n, |i| {
        let mut row = BitSet::new(n);
        for j in 0..n {
            if j != i && allowed.contains(&masks[i].intersection_count(&masks[j])) {
                row.insert(j);
            }
        }
        row
    });
    Ok(CompatibilityGraph {
        graph: Graph { adjacency: rows },
        supports: supports.to_vec(),
        allowed: allowed.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofMode {
    /// The search was exhaustive; `size` is the clique number.
    ExactMaximum,
    /// The search stopped once a clique of the requested size was found.
    EarlyExitAtBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub size: usize,
    /// Sorted vertex indices, pairwise adjacent.
    pub witness: Vec<usize>,
    pub proof_mode: ProofMode,
}

impl CliqueResult {
    pub fn verify(&self, g: &Graph) -> bool {
        self.witness.len() == self.size && self.witness.windows(2).all(|w| w[0] < w[1]) && g.is_clique(&self.witness)
    }
}

/// Exact clique number with the lexicographically least maximum clique.
pub fn max_clique(g: &Graph) -> CliqueResult {
    let size = Solver::new(g).search(None);
    CliqueResult {
        size,
        witness: lex_least_clique(g, size).expect("a clique of the maximum size exists"),
        proof_mode: ProofMode::ExactMaximum,
    }
}

/// Decides `ω(G) < bound`. When false, the witness is the lexicographically
/// least clique of exactly `bound` vertices.
pub fn clique_below(g: &Graph, bound: usize) -> Result<(bool, CliqueResult)> {
    if bound == 0 {
        return Err(Error::Inadmissible("clique bound must be at least 1".into()));
    }
    let size = Solver::new(g).search(Some(bound));
    if size >= bound {
        let witness = lex_least_clique(g, bound).expect("a clique of the bound size exists");
        return Ok((
            false,
            CliqueResult {
                size: bound,
                witness,
                proof_mode: ProofMode::EarlyExitAtBound,
            },
        ));
    }
    Ok((
        true,
        CliqueResult {
            size,
            witness: lex_least_clique(g, size).expect("a clique of the maximum size exists"),
            proof_mode: ProofMode::ExactMaximum,
        },
    ))
}

/// Greedy sequential colouring of `p` (in position order). Returns the
/// vertices grouped by colour class together with their colour numbers
/// (1-based, non-decreasing). The number of colours bounds ω from above.
fn greedy_colouring(adj: &[BitSet], p: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(p.count());
    let mut colours = Vec::with_capacity(order.capacity());
    let mut uncoloured = p.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(&adj[v]);
            uncoloured.remove(v);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

/// Branch and bound in degree-ordered position space.
struct Solver {
    /// `adj[i]` is the neighbourhood of the vertex at position `i`, in positions.
    adj: Vec<BitSet>,
    best: AtomicUsize,
    stop: AtomicBool,
}

impl Solver {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut position = vec![0; n];
        for (pos, &v) in order.iter().enumerate() {
            position[v] = pos;
        }
        let adj = order
            .iter()
            .map(|&v| BitSet::from_indices(n, g.neighbours(v).iter().map(|u| position[u])))
            .collect();
        Solver {
            adj,
            best: AtomicUsize::new(0),
            stop: AtomicBool::new(false),
        }
    }

    fn search(&self, target: Option<usize>) -> usize {
        let n = self.adj.len();
        if n == 0 {
            return 0;
        }
        self.best.store(1, Ordering::Relaxed);
        if target.is_some_and(|t| t <= 1) {
            return 1;
        }
        par::map_indices(n, |i| {
            if self.stop.load(Ordering::Relaxed) {
                return;
            }
            let mut p = self.adj[i].clone();
            for w in 0..=i {
                p.remove(w);
            }
            if p.count() < self.best.load(Ordering::Relaxed) {
                return;
            }
            let mut clique = vec![i];
            self.expand(&mut clique, p, target);
        });
        self.best.load(Ordering::Relaxed)
    }

    fn offer(&self, size: usize, target: Option<usize>) {
        self.best.fetch_max(size, Ordering::Relaxed);
        if target.is_some_and(|t| size >= t) {
            self.stop.store(true, Ordering::Relaxed);
        }
    }

    fn expand(&self, clique: &mut Vec<usize>, mut p: BitSet, target: Option<usize>) {
        let (order, colours) = greedy_colouring(&self.adj, &p);
        #[cfg(test)]
        if order.len() <= 14 {
            assert!(colours.last().copied().unwrap_or(0) >= brute_force_omega(&self.adj, &order));
        }
        for idx in (0..order.len()).rev() {
            if self.stop.load(Ordering::Relaxed) || clique.len() + colours[idx] <= self.best.load(Ordering::Relaxed) {
                return;
            }
            let v = order[idx];
            clique.push(v);
            let next = p.intersection(&self.adj[v]);
            if next.is_empty() {
                self.offer(clique.len(), target);
            } else {
                self.expand(clique, next, target);
            }
            clique.pop();
            p.remove(v);
        }
    }
}

#[cfg(test)]
fn brute_force_omega(adj: &[BitSet], vertices: &[usize]) -> usize {
    let m = vertices.len();
    (0u32..1 << m)
        .filter(|mask| {
            (0..m).all(|a| {
                mask >> a & 1 == 0 || (a + 1..m).all(|b| mask >> b & 1 == 0 || adj[vertices[a]].contains(vertices[b]))
            })
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Lexicographically least sorted clique of exactly `size` vertices, if any.
fn lex_least_clique(g: &Graph, size: usize) -> Option<Vec<usize>> {
    fn rec(g: &Graph, clique: &mut Vec<usize>, p: &BitSet, size: usize) -> bool {
        if clique.len() == size {
            return true;
        }
        let need = size - clique.len();
        let mut rest = p.clone();
        for v in p.iter() {
            rest.remove(v);
            if rest.count() + 1 < need {
                return false;
            }
            let next = rest.intersection(g.neighbours(v));
            if next.count() + 1 < need {
                continue;
            }
            if need > 2 {
                let (_, colours) = greedy_colouring(&g.adjacency, &next);
                if colours.last().copied().unwrap_or(0) + 1 < need {
                    continue;
                }
            }
            clique.push(v);
            if rec(g, clique, &next, size) {
                return true;
            }
            clique.pop();
        }
        false
    }
    let mut clique = Vec::with_capacity(size);
    rec(g, &mut clique, &BitSet::full(g.n()), size).then_some(clique)
}
