//! Finite simplicial defining graphs and the graph-theoretic primitives the
//! rest of the crate is built on.
//!
//! Vertices are stored sorted by identifier, so a vertex index doubles as the
//! position of the corresponding generator in the total order used by the
//! word normal forms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a vertex inside a [`DefiningGraph`].
pub type Vertex = usize;

/// A finite simplicial graph: no loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<Vec<Vertex>>,
    matrix: Vec<bool>,
    edges: Vec<(Vertex, Vertex)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl DefiningGraph {
    /// Builds a graph from vertex identifiers and edges given by identifier.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let index: HashMap<String, Vertex> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownVertex(s.to_string()));
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if a == b {
                return Err(Error::Loop(names[a].clone()));
            }
            pairs.push((a.min(b), a.max(b)));
        }
        Self::from_index_edges(names, pairs)
    }

    fn from_index_edges(names: Vec<String>, mut pairs: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let n = names.len();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0] == w[1] {
                return Err(Error::MultiEdge(names[w[0].0].clone(), names[w[0].1].clone()));
            }
        }
        let mut adj = vec![Vec::new(); n];
        let mut matrix = vec![false; n * n];
        for &(a, b) in &pairs {
            adj[a].push(b);
            adj[b].push(a);
            matrix[a * n + b] = true;
            matrix[b * n + a] = true;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { names, index, adj, matrix, edges: pairs })
    }

    /// Parses the `{"vertices": [...], "edges": [[a, b], ...]}` schema.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::new(&raw.vertices, &raw.edges)
    }

    /// Byte-stable JSON: vertices sorted, edges sorted by endpoint indices.
    pub fn to_json(&self) -> String {
        let raw = GraphJson {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("graph serializes")
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{name}\" {{\n");
        for v in &self.names {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", self.names[a], self.names[b]);
        }
        out.push_str("}\n");
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.names.len()
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.matrix[a * self.names.len() + b]
    }

    /// Index of the edge `{a, b}` in [`Self::edges`], if present.
    pub fn edge_index(&self, a: Vertex, b: Vertex) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    /// Connected components of the subgraph induced on the vertices not in
    /// `removed`, each sorted.
    pub fn components_without(&self, removed: &[bool]) -> Vec<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut seen = removed.to_vec();
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&vec![false; self.vertex_count()]).len() <= 1
    }

    /// BFS distances from `s`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, s: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Length of a shortest embedded cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best = usize::MAX;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                if 2 * dist[x] + 1 >= best {
                    break;
                }
                for &y in &self.adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        best = best.min(dist[x] + dist[y] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Vertices whose removal disconnects the graph (low-link DFS).
    pub fn cut_vertices(&self) -> Result<BTreeSet<Vertex>> {
        let n = self.vertex_count();
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut cuts = BTreeSet::new();
        if n == 0 {
            return Ok(cuts);
        }
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut counter = 0;
        // iterative DFS: (vertex, parent, next neighbor position)
        let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(0, usize::MAX, 0)];
        order[0] = 0;
        low[0] = 0;
        counter += 1;
        let mut root_children = 0;
        while let Some(&mut (v, parent, ref mut pos)) = stack.last_mut() {
            if *pos < self.adj[v].len() {
                let w = self.adj[v][*pos];
                *pos += 1;
                if order[w] == usize::MAX {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(order[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if p != 0 && low[v] >= order[p] {
                        cuts.insert(p);
                    }
                }
            }
        }
        if root_children > 1 {
            cuts.insert(0);
        }
        Ok(cuts)
    }

    /// `{w : w adjacent to every v in vs}`.
    pub fn orthogonal_complement(&self, vs: &[Vertex]) -> BTreeSet<Vertex> {
        self.vertices().filter(|&w| vs.iter().all(|&v| self.has_edge(w, v))).collect()
    }

    /// The vertex together with its neighbors.
    pub fn closed_star(&self, v: Vertex) -> Vec<Vertex> {
        let mut s = self.adj[v].clone();
        s.push(v);
        s.sort_unstable();
        s
    }

    /// Number of edges with both endpoints in `vs`.
    pub fn induced_edge_count(&self, vs: &[Vertex]) -> usize {
        let mut mark = vec![false; self.vertex_count()];
        for &v in vs {
            mark[v] = true;
        }
        self.edges.iter().filter(|&&(a, b)| mark[a] && mark[b]).count()
    }

    /// Whether removing the closed star of `v` (with all incident edges)
    /// leaves a nonempty, disconnected remainder.
    pub fn closed_star_separates(&self, v: Vertex) -> bool {
        let mut removed = vec![false; self.vertex_count()];
        for u in self.closed_star(v) {
            removed[u] = true;
        }
        self.components_without(&removed).len() >= 2
    }

    /// Whether removing the closed edge `{a, b}` (both endpoints) disconnects
    /// a nonempty remainder.
    pub fn closed_edge_separates(&self, a: Vertex, b: Vertex) -> bool {
        let mut removed = vec![false; self.vertex_count()];
        removed[a] = true;
        removed[b] = true;
        self.components_without(&removed).len() >= 2
    }

    /// Graph on the same vertex set with identifiers renamed by `rename`.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Result<Self> {
        let names: Vec<String> = self.names.iter().map(|s| rename(s)).collect();
        let edges: Vec<(String, String)> =
            self.edges.iter().map(|&(a, b)| (names[a].clone(), names[b].clone())).collect();
        Self::new(&names, &edges)
    }

    /// First barycentric subdivision: one new vertex `a|b` per edge `{a, b}`.
    pub fn barycentric_subdivision(&self) -> Self {
        let mut names = self.names.clone();
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            let mid = format!("{}|{}", self.names[a], self.names[b]);
            edges.push((self.names[a].clone(), mid.clone()));
            edges.push((self.names[b].clone(), mid.clone()));
            names.push(mid);
        }
        Self::new(&names, &edges).expect("subdivision of a simplicial graph is simplicial")
    }

    /// `k` copies of the graph glued along the subgraph induced on `shared`.
    /// Shared vertices keep their identifiers; every other vertex `x` becomes
    /// `x#1`, ..., `x#k`.
    pub fn glue_copies_along(&self, shared: &[Vertex], k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Precondition(format!("need at least 2 copies, got {k}")));
        }
        let n = self.vertex_count();
        let mut is_shared = vec![false; n];
        for &v in shared {
            is_shared[v] = true;
        }
        let copy_name = |v: Vertex, i: usize| {
            if is_shared[v] {
                self.names[v].clone()
            } else {
                format!("{}#{}", self.names[v], i)
            }
        };
        let mut names: Vec<String> = self.vertices().filter(|&v| is_shared[v]).map(|v| self.names[v].clone()).collect();
        for i in 1..=k {
            names.extend(self.vertices().filter(|&v| !is_shared[v]).map(|v| copy_name(v, i)));
        }
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            if is_shared[a] && is_shared[b] {
                edges.push((self.names[a].clone(), self.names[b].clone()));
            } else {
                for i in 1..=k {
                    edges.push((copy_name(a, i), copy_name(b, i)));
                }
            }
        }
        Self::new(&names, &edges)
    }

    /// Two copies glued along the closed star of `v`.
    pub fn double_along_closed_star(&self, v: Vertex) -> Self {
        self.glue_copies_along(&self.closed_star(v), 2).expect("two copies are allowed")
    }

    /// `k` copies glued along the closed star of `v`.
    pub fn glue_k_copies_along_star(&self, v: Vertex, k: usize) -> Result<Self> {
        self.glue_copies_along(&self.closed_star(v), k)
    }
}

/// One failed atomicity condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AtomicityFailure {
    Disconnected,
    VertexOfValenceLt2 { vertex: String, valence: usize },
    ShortCycle { cycle: Vec<String> },
    SeparatingClosedStar { vertex: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicityReport {
    pub is_atomic: bool,
    pub failures: Vec<AtomicityFailure>,
}

impl DefiningGraph {
    /// Checks connectivity, minimum valence 2, absence of 3- and 4-cycles and
    /// of separating closed vertex stars, listing every failure.
    pub fn check_atomic(&self) -> Result<AtomicityReport> {
        if self.vertex_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut failures = Vec::new();
        if !self.is_connected() {
            failures.push(AtomicityFailure::Disconnected);
        }
        for v in self.vertices() {
            if self.degree(v) < 2 {
                failures.push(AtomicityFailure::VertexOfValenceLt2 {
                    vertex: self.names[v].clone(),
                    valence: self.degree(v),
                });
            }
        }
        for c in crate::cycles::enumerate_cycles(self, 4) {
            failures.push(AtomicityFailure::ShortCycle {
                cycle: c.vertices().iter().map(|&v| self.names[v].clone()).collect(),
            });
        }
        for v in self.vertices() {
            if self.closed_star_separates(v) {
                failures.push(AtomicityFailure::SeparatingClosedStar { vertex: self.names[v].clone() });
            }
        }
        Ok(AtomicityReport { is_atomic: failures.is_empty(), failures })
    }

    pub fn is_atomic(&self) -> bool {
        self.check_atomic().map(|r| r.is_atomic).unwrap_or(false)
    }
}

/// Standard graphs used throughout the tests, examples and CLI.
pub mod named {
    use super::*;

    /// Cycle on `n` vertices named by `names`, in order.
    pub fn cycle_on(names: &[&str]) -> DefiningGraph {
        let n = names.len();
        let edges: Vec<(&str, &str)> = (0..n).map(|i| (names[i], names[(i + 1) % n])).collect();
        DefiningGraph::new(names, &edges).expect("cycle is simplicial")
    }

    /// Cycle `c0 - c1 - ... - c(n-1) - c0` with zero-padded identifiers.
    pub fn cycle(n: usize) -> DefiningGraph {
        let names: Vec<String> = (0..n).map(|i| format!("c{i:02}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        cycle_on(&refs)
    }

    /// The pentagon `a - b - c - d - e - a`.
    pub fn pentagon() -> DefiningGraph {
        cycle_on(&["a", "b", "c", "d", "e"])
    }

    pub fn path(names: &[&str]) -> DefiningGraph {
        let edges: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        DefiningGraph::new(names, &edges).expect("path is simplicial")
    }

    /// Star with the given center and leaves.
    pub fn star(center: &str, leaves: &[&str]) -> DefiningGraph {
        let mut names = vec![center];
        names.extend_from_slice(leaves);
        let edges: Vec<(&str, &str)> = leaves.iter().map(|&l| (center, l)).collect();
        DefiningGraph::new(&names, &edges).expect("star is simplicial")
    }

    /// 1-skeleton of the dodecahedron as the generalized Petersen graph
    /// GP(10, 2): outer ring `d00..d09`, spokes to `d10..d19`, inner
    /// pentagrams `d1i - d1(i+2)`.
    pub fn dodecahedron() -> DefiningGraph {
        let names: Vec<String> = (0..20).map(|i| format!("d{i:02}")).collect();
        let mut edges = Vec::new();
        for i in 0..10 {
            edges.push((names[i].clone(), names[(i + 1) % 10].clone()));
            edges.push((names[i].clone(), names[10 + i].clone()));
            edges.push((names[10 + i].clone(), names[10 + (i + 2) % 10].clone()));
        }
        DefiningGraph::new(&names, &edges).expect("dodecahedron is simplicial")
    }

    /// The face of [`dodecahedron`] along which [`dodecahedron_double`] is glued.
    pub const DOUBLED_FACE: [&str; 5] = ["d10", "d12", "d14", "d16", "d18"];

    /// Two dodecahedra glued along one pentagonal face: 35 vertices, 55 edges.
    pub fn dodecahedron_double() -> DefiningGraph {
        let d = dodecahedron();
        let face: Vec<Vertex> = DOUBLED_FACE.iter().map(|n| d.vertex(n).unwrap()).collect();
        d.glue_copies_along(&face, 2).expect("two copies")
    }

    /// Two pentagons sharing the single vertex `v`.
    pub fn pentagon_wedge() -> DefiningGraph {
        let names = ["v", "a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"];
        let edges = [
            ("v", "a1"), ("a1", "a2"), ("a2", "a3"), ("a3", "a4"), ("a4", "v"),
            ("v", "b1"), ("b1", "b2"), ("b2", "b3"), ("b3", "b4"), ("b4", "v"),
        ];
        DefiningGraph::new(&names, &edges).unwrap()
    }

    /// The Petersen graph (girth 5, atomic).
    pub fn petersen() -> DefiningGraph {
        let names: Vec<String> = (0..10).map(|i| format!("p{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((names[i].clone(), names[(i + 1) % 5].clone()));
            edges.push((names[i].clone(), names[5 + i].clone()));
            edges.push((names[5 + i].clone(), names[5 + (i + 2) % 5].clone()));
        }
        DefiningGraph::new(&names, &edges).unwrap()
    }

    /// The Heawood graph (girth 6, atomic).
    pub fn heawood() -> DefiningGraph {
        let names: Vec<String> = (0..14).map(|i| format!("h{i:02}")).collect();
        let mut edges = Vec::new();
        for i in 0..14 {
            edges.push((names[i].clone(), names[(i + 1) % 14].clone()));
            if i % 2 == 0 {
                edges.push((names[i].clone(), names[(i + 5) % 14].clone()));
            }
        }
        DefiningGraph::new(&names, &edges).unwrap()
    }

    /// Hexagon `h0..h5` with the long diagonal `h0 - h3`.
    pub fn hexagon_with_chord() -> DefiningGraph {
        let names = ["h0", "h1", "h2", "h3", "h4", "h5"];
        let mut edges: Vec<(&str, &str)> = (0..6).map(|i| (names[i], names[(i + 1) % 6])).collect();
        edges.push(("h0", "h3"));
        DefiningGraph::new(&names, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn brute_cut_vertices(g: &DefiningGraph) -> BTreeSet<Vertex> {
        g.vertices()
            .filter(|&v| {
                let mut removed = vec![false; g.vertex_count()];
                removed[v] = true;
                g.components_without(&removed).len() > 1
            })
            .collect()
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert_eq!(DefiningGraph::new(&["a", "a"], &[]).unwrap_err(), Error::DuplicateVertex("a".into()));
        assert_eq!(DefiningGraph::new(&["a"], &[("a", "a")]).unwrap_err(), Error::Loop("a".into()));
        assert_eq!(DefiningGraph::new(&["a"], &[("a", "b")]).unwrap_err(), Error::UnknownVertex("b".into()));
        assert!(matches!(
            DefiningGraph::new(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::MultiEdge(..))
        ));
    }

    #[test]
    fn json_roundtrip_is_byte_stable() {
        let g = pentagon();
        let text = g.to_json();
        let back = DefiningGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_errors_carry_position() {
        let err = DefiningGraph::from_json("{\"vertices\": [\"a\",\n  }").unwrap_err();
        match err {
            Error::Json { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn girth_values() {
        assert_eq!(pentagon().girth(), Some(5));
        assert_eq!(path(&["a", "b", "c", "d"]).girth(), None);
        assert_eq!(star("x", &["a", "b", "c"]).girth(), None);
        assert_eq!(dodecahedron().girth(), Some(5));
        assert_eq!(heawood().girth(), Some(6));
        assert_eq!(hexagon_with_chord().girth(), Some(4));
    }

    #[test]
    fn orthogonal_complements_in_pentagon() {
        let g = pentagon();
        let v = |s: &str| g.vertex(s).unwrap();
        let names = |set: BTreeSet<Vertex>| set.into_iter().map(|x| g.name(x).to_string()).collect::<Vec<_>>();
        assert_eq!(names(g.orthogonal_complement(&[v("a")])), ["b", "e"]);
        assert_eq!(names(g.orthogonal_complement(&[v("a"), v("c")])), ["b"]);
        assert!(g.orthogonal_complement(&[v("a"), v("b")]).is_empty());
    }

    #[test]
    fn cut_vertices_match_removal_test() {
        let g = pentagon();
        assert!(g.cut_vertices().unwrap().is_empty());
        let w = pentagon_wedge();
        assert_eq!(w.cut_vertices().unwrap(), BTreeSet::from([w.vertex("v").unwrap()]));
        let dd = dodecahedron_double();
        assert!(dd.cut_vertices().unwrap().is_empty());
        assert_eq!(brute_cut_vertices(&dd), BTreeSet::new());
        let p = path(&["a", "b", "c", "d"]);
        assert_eq!(p.cut_vertices().unwrap(), brute_cut_vertices(&p));
        let two = DefiningGraph::new(&["a", "b", "c"], &[("a", "b")]).unwrap();
        assert_eq!(two.cut_vertices().unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn atomicity_fixtures() {
        assert!(pentagon().check_atomic().unwrap().is_atomic);
        let p = path(&["a", "b", "c"]).check_atomic().unwrap();
        assert!(!p.is_atomic);
        assert!(p.failures.contains(&AtomicityFailure::VertexOfValenceLt2 { vertex: "a".into(), valence: 1 }));
        let empty = DefiningGraph::new::<&str>(&[], &[]).unwrap();
        assert_eq!(empty.check_atomic().unwrap_err(), Error::EmptyGraph);
        let hex = hexagon_with_chord().check_atomic().unwrap();
        assert!(hex.failures.iter().any(|f| matches!(f, AtomicityFailure::ShortCycle { cycle } if cycle.len() == 4)));
    }

    #[test]
    fn doubled_pentagon_shape() {
        let g = pentagon();
        let a = g.vertex("a").unwrap();
        let d = g.double_along_closed_star(a);
        assert_eq!(d.vertex_count(), 7);
        assert_eq!(d.edge_count(), 8);
        assert!(d.vertex("c#1").is_ok() && d.vertex("c#2").is_ok() && d.vertex("b").is_ok());
        let report = d.check_atomic().unwrap();
        assert!(!report.is_atomic);
        assert!(report.failures.contains(&AtomicityFailure::SeparatingClosedStar { vertex: "a".into() }));
        // Euler characteristic of the kernel graph: 1 - |V| + |E| scales with the index.
        let star = g.closed_star(a);
        let chi = |x: &DefiningGraph| 1 - x.vertex_count() as i64 + x.edge_count() as i64;
        assert_eq!(
            chi(&d) - 1,
            2 * (chi(&g) - 1) - (g.induced_edge_count(&star) as i64 - star.len() as i64)
        );
    }

    #[test]
    fn star_doubled_at_center_is_unchanged() {
        let s = star("x", &["a", "b", "c"]);
        let d = s.double_along_closed_star(s.vertex("x").unwrap());
        assert_eq!(d, s);
    }

    #[test]
    fn glue_three_copies() {
        let g = pentagon();
        let a = g.vertex("a").unwrap();
        let g3 = g.glue_k_copies_along_star(a, 3).unwrap();
        assert_eq!((g3.vertex_count(), g3.edge_count()), (9, 11));
        assert!(!g3.check_atomic().unwrap().is_atomic);
        assert!(g.glue_k_copies_along_star(a, 1).is_err());
        assert_eq!(g.glue_k_copies_along_star(a, 2).unwrap(), g.double_along_closed_star(a));
    }

    #[test]
    fn dodecahedron_double_is_atomic() {
        let d = dodecahedron();
        assert_eq!((d.vertex_count(), d.edge_count()), (20, 30));
        assert!(d.vertices().all(|v| d.degree(v) == 3));
        let dd = dodecahedron_double();
        assert_eq!((dd.vertex_count(), dd.edge_count()), (35, 55));
        assert_eq!(dd.girth(), Some(5));
        assert!(dd.check_atomic().unwrap().is_atomic);
        assert_eq!(dd.vertices().filter(|&v| dd.degree(v) == 4).count(), 5);
    }

    #[test]
    fn atomic_graphs_have_no_cut_vertices_or_separating_edges() {
        for g in [pentagon(), dodecahedron(), dodecahedron_double(), petersen(), heawood()] {
            assert!(g.check_atomic().unwrap().is_atomic);
            assert!(g.cut_vertices().unwrap().is_empty());
            assert!(g.edges().iter().all(|&(a, b)| !g.closed_edge_separates(a, b)));
        }
    }

    #[test]
    fn barycentric_subdivision_counts() {
        let s = pentagon().barycentric_subdivision();
        assert_eq!((s.vertex_count(), s.edge_count()), (10, 10));
        assert_eq!(s.girth(), Some(10));
    }

    #[test]
    fn dot_export_lists_every_edge() {
        let dot = pentagon().to_dot("pentagon");
        assert_eq!(dot.matches(" -- ").count(), 5);
    }
}
