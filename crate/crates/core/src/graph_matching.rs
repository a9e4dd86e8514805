//! Undirected simple graphs, maximum-cardinality matching (Edmonds'
//! blossom algorithm), maximal-matching utilities, and the subdivision and
//! padding constructions used by the reductions.
//!
//! Vertices are zero-based in the API. The text format is 1-based:
//!
//! ```text
//! graph <n> <m>
//! u v        # m edge lines
//! ```

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("edge {0}-{1} given twice")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} is not in the graph")]
    MissingEdge(usize, usize),
    #[error("vertex {0} is covered twice; not a matching")]
    NotAMatching(usize),
    #[error("invalid bipartition: {0}")]
    Bipartition(String),
    #[error("graph has {n} vertices, above the exhaustive-search cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Side of a bipartite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    A,
    B,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::A => Part::B,
            Part::B => Part::A,
        }
    }
}

/// Undirected simple graph with an optional bipartition.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    parts: Option<Vec<Part>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.parts == other.parts
    }
}

impl Eq for Graph {}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
            adj: vec![Vec::new(); n],
            parts: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::OutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if let Some(parts) = &self.parts {
            if parts[u] == parts[v] {
                return Err(GraphError::Bipartition(format!(
                    "edge {u}-{v} does not cross the bipartition"
                )));
            }
        }
        if !self.edges.insert(key(u, v)) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(())
    }

    /// Appends an isolated vertex and returns its index.
    pub fn add_vertex(&mut self, part: Option<Part>) -> usize {
        self.adj.push(Vec::new());
        if let (Some(parts), Some(p)) = (self.parts.as_mut(), part) {
            parts.push(p);
        }
        self.n += 1;
        self.n - 1
    }

    /// Attaches a bipartition; every edge must cross it.
    pub fn with_bipartition(mut self, parts: Vec<Part>) -> Result<Self, GraphError> {
        if parts.len() != self.n {
            return Err(GraphError::Bipartition(format!(
                "{} labels for {} vertices",
                parts.len(),
                self.n
            )));
        }
        if let Some(&(u, v)) = self.edges.iter().find(|&&(u, v)| parts[u] == parts[v]) {
            return Err(GraphError::Bipartition(format!(
                "edge {u}-{v} does not cross the bipartition"
            )));
        }
        self.parts = Some(parts);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&key(u, v))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn bipartition(&self) -> Option<&[Part]> {
        self.parts.as_deref()
    }

    /// Vertices on `part`, in index order.
    pub fn part_members(&self, part: Part) -> Vec<usize> {
        self.parts
            .as_ref()
            .map(|ps| (0..self.n).filter(|&v| ps[v] == part).collect())
            .unwrap_or_default()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph {} {}", self.n, self.edges.len())?;
        for &(u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

/// Parses `graph <n> <m>` followed by `m` lines of 1-based `u v`.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let syntax = |line: usize, message: &str| GraphError::Syntax {
        line,
        message: message.to_owned(),
    };
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 || h[0] != "graph" {
        return Err(syntax(hl, "expected `graph <n> <m>`"));
    }
    let n: usize = h[1].parse().map_err(|_| syntax(hl, "bad vertex count"))?;
    let m: usize = h[2].parse().map_err(|_| syntax(hl, "bad edge count"))?;
    let mut g = Graph::new(n);
    let mut seen = 0;
    for (line, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 2 {
            return Err(syntax(line, "expected `u v`"));
        }
        let mut ends = [0usize; 2];
        for (slot, s) in ends.iter_mut().zip(&f) {
            let id: usize = s.parse().map_err(|_| syntax(line, "bad vertex id"))?;
            if id == 0 || id > n {
                return Err(GraphError::OutOfRange { vertex: id, n });
            }
            *slot = id - 1;
        }
        g.add_edge(ends[0], ends[1])?;
        seen += 1;
    }
    if seen != m {
        return Err(syntax(hl, &format!("header declares {m} edges, found {seen}")));
    }
    Ok(g)
}

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free endpoint.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.n;
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.g.adj[v].len() {
                let to = self.g.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }
}

/// A maximum-cardinality matching as sorted `(u, v)` edges with `u < v`.
/// Runs in O(n³).
pub fn max_matching(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n;
    let mut b = Blossom {
        g,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    // greedy start
    for &(u, v) in &g.edges {
        if b.mate[u] == NONE && b.mate[v] == NONE {
            b.mate[u] = v;
            b.mate[v] = u;
        }
    }
    for root in 0..n {
        if b.mate[root] == NONE {
            if let Some(end) = b.find_path(root) {
                b.augment(end);
            }
        }
    }
    (0..n)
        .filter(|&v| b.mate[v] != NONE && v < b.mate[v])
        .map(|v| (v, b.mate[v]))
        .collect()
}

pub fn has_perfect_matching(g: &Graph) -> bool {
    2 * max_matching(g).len() == g.n
}

fn cover(g: &Graph, m: &[(usize, usize)]) -> Result<Vec<bool>, GraphError> {
    let mut covered = vec![false; g.n];
    for &(u, v) in m {
        if u >= g.n || v >= g.n || !g.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        for w in [u, v] {
            if covered[w] {
                return Err(GraphError::NotAMatching(w));
            }
            covered[w] = true;
        }
    }
    Ok(covered)
}

/// True iff `m` is a matching of `g` to which no edge of `g` can be added.
pub fn is_maximal_matching(g: &Graph, m: &[(usize, usize)]) -> Result<bool, GraphError> {
    let covered = cover(g, m)?;
    Ok(g.edges().all(|(u, v)| covered[u] || covered[v]))
}

/// Scans edges in order and keeps every edge with both endpoints free.
pub fn greedy_maximal_matching(g: &Graph) -> Vec<(usize, usize)> {
    let mut covered = vec![false; g.n];
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        if !covered[u] && !covered[v] {
            covered[u] = true;
            covered[v] = true;
            out.push((u, v));
        }
    }
    out
}

/// Default vertex cap for [`minimum_maximal_matching`].
pub const MMM_VERTEX_CAP: usize = 40;

/// Size of a smallest maximal matching, by exhaustive branching. Exponential
/// in the worst case; intended for small graphs only.
pub fn minimum_maximal_matching(g: &Graph, cap: usize) -> Result<usize, GraphError> {
    if g.n > cap {
        return Err(GraphError::CapExceeded { n: g.n, cap });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut covered = vec![false; g.n];
    let mut best = edges.len().min(g.n / 2);
    // Any edge with both ends free must have one of its ends covered in the
    // final matching, so branch over the free edges touching either end.
    fn search(
        edges: &[(usize, usize)],
        covered: &mut [bool],
        size: usize,
        best: &mut usize,
    ) {
        let Some(&(u, v)) = edges.iter().find(|&&(a, b)| !covered[a] && !covered[b]) else {
            *best = (*best).min(size);
            return;
        };
        if size + 1 >= *best {
            return;
        }
        for &(a, b) in edges {
            if (a == u || a == v || b == u || b == v) && !covered[a] && !covered[b] {
                covered[a] = true;
                covered[b] = true;
                search(edges, covered, size + 1, best);
                covered[a] = false;
                covered[b] = false;
            }
        }
    }
    search(&edges, &mut covered, 0, &mut best);
    Ok(best)
}

/// Replaces every edge `uv` of `g0` by a path `u - e - v` through a new
/// vertex. Original vertices keep their indices and form part A; edge
/// vertices follow in sorted edge order and form part B.
pub fn subdivision_graph(g0: &Graph) -> Graph {
    let n0 = g0.n;
    let mut g = Graph::new(n0 + g0.edge_count());
    for (i, (u, v)) in g0.edges().enumerate() {
        g.add_edge(u, n0 + i).expect("fresh edge");
        g.add_edge(v, n0 + i).expect("fresh edge");
    }
    let parts = (0..g.n)
        .map(|w| if w < n0 { Part::A } else { Part::B })
        .collect();
    g.with_bipartition(parts).expect("subdivision graphs are bipartite")
}

/// Record of the gadgets added by [`pad_bipartition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padding {
    /// Size difference that was closed.
    pub r: usize,
    /// The part that was larger before padding (and received the hubs).
    pub larger: Part,
    /// `(hub, leaf_b, leaf_c)` per gadget: the hub joins the larger part and
    /// is adjacent to both leaves on the other part.
    pub gadgets: Vec<(usize, usize, usize)>,
}

/// Balances the two parts: if one part is larger by `r`, adds `r` hubs to it
/// and `2r` leaves to the other, each hub adjacent to two private leaves.
/// The original graph has a maximal matching of size `k` iff the padded one
/// has one of size `k + r`.
pub fn pad_bipartition(g: &Graph) -> Result<(Graph, Padding), GraphError> {
    let parts = g
        .bipartition()
        .ok_or_else(|| GraphError::Bipartition("graph has no bipartition".into()))?;
    let a = parts.iter().filter(|&&p| p == Part::A).count();
    let b = parts.len() - a;
    let (larger, r) = if a >= b {
        (Part::A, a - b)
    } else {
        (Part::B, b - a)
    };
    let mut out = g.clone();
    let hubs: Vec<usize> = (0..r).map(|_| out.add_vertex(Some(larger))).collect();
    let bs: Vec<usize> = (0..r).map(|_| out.add_vertex(Some(larger.other()))).collect();
    let cs: Vec<usize> = (0..r).map(|_| out.add_vertex(Some(larger.other()))).collect();
    let mut gadgets = Vec::with_capacity(r);
    for i in 0..r {
        out.add_edge(hubs[i], bs[i])?;
        out.add_edge(hubs[i], cs[i])?;
        gadgets.push((hubs[i], bs[i], cs[i]));
    }
    Ok((out, Padding { r, larger, gadgets }))
}
