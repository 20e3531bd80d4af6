//! Embedded cycles of a defining graph, shortcuts, tight cycles and
//! Whitehead graphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, Vertex};

/// An embedded cycle stored in canonical form: it starts at its least vertex
/// and runs in the direction whose second vertex is the smaller neighbor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmbeddedCycle {
    vertices: Vec<Vertex>,
}

impl EmbeddedCycle {
    /// Validates and canonicalizes a cyclic vertex sequence.
    pub fn new(g: &DefiningGraph, seq: &[Vertex]) -> Result<Self> {
        let n = seq.len();
        if n < 3 {
            return Err(Error::CycleRequired(format!("{n} vertices is too short")));
        }
        let mut seen = BTreeSet::new();
        for &v in seq {
            if v >= g.vertex_count() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            if !seen.insert(v) {
                return Err(Error::CycleRequired(format!("vertex `{}` repeats", g.name(v))));
            }
        }
        for i in 0..n {
            let (a, b) = (seq[i], seq[(i + 1) % n]);
            if !g.has_edge(a, b) {
                return Err(Error::NotAnEdge(g.name(a).into(), g.name(b).into()));
            }
        }
        Ok(Self::canonical(seq))
    }

    /// Parses a comma-separated list of vertex identifiers.
    pub fn parse(g: &DefiningGraph, text: &str) -> Result<Self> {
        let seq = text
            .split(',')
            .map(|s| g.vertex(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, &seq)
    }

    fn canonical(seq: &[Vertex]) -> Self {
        let n = seq.len();
        let start = (0..n).min_by_key(|&i| seq[i]).unwrap();
        let fwd: Vec<Vertex> = (0..n).map(|k| seq[(start + k) % n]).collect();
        let vertices = if fwd[1] <= fwd[n - 1] {
            fwd
        } else {
            (0..n).map(|k| seq[(start + n - k) % n]).collect()
        };
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// Number of edges on the shorter arc between two positions.
    pub fn cycle_distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        d.min(self.len() - d)
    }

    /// The two cycle neighbors of the vertex at position `i`.
    pub fn neighbors_at(&self, i: usize) -> (Vertex, Vertex) {
        let n = self.len();
        (self.vertices[(i + n - 1) % n], self.vertices[(i + 1) % n])
    }

    pub fn names(&self, g: &DefiningGraph) -> Vec<String> {
        self.vertices.iter().map(|&v| g.name(v).to_string()).collect()
    }

    /// Edge indices (into [`DefiningGraph::edges`]) along the cycle.
    pub fn edge_indices(&self, g: &DefiningGraph) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .map(|i| g.edge_index(self.vertices[i], self.vertices[(i + 1) % n]).expect("cycle edge"))
            .collect()
    }
}

/// Common-neighbor table: `table[a * n + b]` iff some vertex is adjacent to
/// both `a` and `b`.
fn common_neighbor_table(g: &DefiningGraph) -> Vec<bool> {
    let n = g.vertex_count();
    let mut table = vec![false; n * n];
    for y in g.vertices() {
        let nb = g.neighbors(y);
        for &a in nb {
            for &b in nb {
                if a != b {
                    table[a * n + b] = true;
                }
            }
        }
    }
    table
}

struct CycleSearch<'a> {
    g: &'a DefiningGraph,
    max_len: usize,
    /// When set, prune partial paths that already carry a 1- or 2-shortcut.
    tight_only: Option<Vec<bool>>,
    on_path: Vec<bool>,
    path: Vec<Vertex>,
    out: Vec<EmbeddedCycle>,
}

impl CycleSearch<'_> {
    fn run(mut self) -> Vec<EmbeddedCycle> {
        for s in self.g.vertices() {
            self.path.push(s);
            self.on_path[s] = true;
            self.extend(s);
            self.on_path[s] = false;
            self.path.pop();
        }
        self.out.sort_by(|a, b| (a.len(), &a.vertices).cmp(&(b.len(), &b.vertices)));
        self.out
    }

    fn extend(&mut self, start: Vertex) {
        let last = *self.path.last().unwrap();
        let k = self.path.len() - 1;
        let n = self.g.vertex_count();
        for idx in 0..self.g.neighbors(last).len() {
            let x = self.g.neighbors(last)[idx];
            if x == start && self.path.len() >= 3 && self.path[1] < self.path[k] {
                let cyc = EmbeddedCycle { vertices: self.path.clone() };
                if self.tight_only.is_none() || is_tight(self.g, &cyc) {
                    self.out.push(cyc);
                }
                continue;
            }
            if x <= start || self.on_path[x] || self.path.len() >= self.max_len {
                continue;
            }
            if let Some(cn) = &self.tight_only {
                // x would sit at position k + 1; a chord to p_j (1 <= j < k)
                // is a 1-shortcut whatever closes the cycle, a common neighbor
                // with p_j (2 <= j <= k - 2) a 2-shortcut.
                if (1..k).any(|j| self.g.has_edge(x, self.path[j])) {
                    continue;
                }
                if k >= 4 && (2..=k - 2).any(|j| cn[x * n + self.path[j]]) {
                    continue;
                }
                if k >= 1 && self.g.has_edge(x, start) {
                    // must close right after x
                    if self.path.len() < self.max_len && self.path[1] < x {
                        let mut v = self.path.clone();
                        v.push(x);
                        let cyc = EmbeddedCycle { vertices: v };
                        if is_tight(self.g, &cyc) {
                            self.out.push(cyc);
                        }
                    }
                    continue;
                }
            }
            self.on_path[x] = true;
            self.path.push(x);
            self.extend(start);
            self.path.pop();
            self.on_path[x] = false;
        }
    }
}

/// All embedded cycles of length `<= max_len`, each once in canonical form,
/// sorted by length and then vertex sequence.
pub fn enumerate_cycles(g: &DefiningGraph, max_len: usize) -> Vec<EmbeddedCycle> {
    CycleSearch {
        g,
        max_len,
        tight_only: None,
        on_path: vec![false; g.vertex_count()],
        path: Vec::new(),
        out: Vec::new(),
    }
    .run()
}

/// All tight cycles of length `<= max_len`, same ordering as
/// [`enumerate_cycles`].
pub fn enumerate_tight_cycles(g: &DefiningGraph, max_len: usize) -> Vec<EmbeddedCycle> {
    CycleSearch {
        g,
        max_len,
        tight_only: Some(common_neighbor_table(g)),
        on_path: vec![false; g.vertex_count()],
        path: Vec::new(),
        out: Vec::new(),
    }
    .run()
}

/// An `i`-shortcut: a path of length `i` between two cycle vertices whose
/// distance along the cycle exceeds `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shortcut {
    pub path: Vec<Vertex>,
    pub cycle_distance: usize,
}

pub fn find_shortcut(g: &DefiningGraph, c: &EmbeddedCycle, i: usize) -> Option<Shortcut> {
    if i == 0 {
        return None;
    }
    let mut pos = vec![usize::MAX; g.vertex_count()];
    for (p, &v) in c.vertices().iter().enumerate() {
        pos[v] = p;
    }
    let mut path = Vec::with_capacity(i + 1);
    fn walk(
        g: &DefiningGraph,
        c: &EmbeddedCycle,
        pos: &[usize],
        i: usize,
        path: &mut Vec<Vertex>,
    ) -> Option<Shortcut> {
        let last = *path.last().unwrap();
        if path.len() == i + 1 {
            if pos[last] == usize::MAX {
                return None;
            }
            let d = c.cycle_distance(pos[path[0]], pos[last]);
            return (d > i).then(|| Shortcut { path: path.clone(), cycle_distance: d });
        }
        for &y in g.neighbors(last) {
            if path.contains(&y) {
                continue;
            }
            path.push(y);
            let found = walk(g, c, pos, i, path);
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    for &start in c.vertices() {
        path.push(start);
        let found = walk(g, c, &pos, i, &mut path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// No 1-shortcuts and no 2-shortcuts.
pub fn is_tight(g: &DefiningGraph, c: &EmbeddedCycle) -> bool {
    find_shortcut(g, c, 1).is_none() && find_shortcut(g, c, 2).is_none()
}

/// The Whitehead graph at a vertex: its link, with two link vertices joined
/// when some tight cycle passes through the base vertex using both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhiteheadGraph {
    pub vertex: Vertex,
    pub link: Vec<Vertex>,
    pub edges: BTreeSet<(Vertex, Vertex)>,
}

impl WhiteheadGraph {
    pub fn is_connected(&self) -> bool {
        let Some(&first) = self.link.first() else {
            return true;
        };
        let mut seen = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == x { b } else if b == x { a } else { continue };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        seen.len() == self.link.len()
    }

    /// The Whitehead graph as a defining graph over the link's identifiers.
    pub fn to_graph(&self, g: &DefiningGraph) -> DefiningGraph {
        let names: Vec<&str> = self.link.iter().map(|&v| g.name(v)).collect();
        let edges: Vec<(&str, &str)> = self.edges.iter().map(|&(a, b)| (g.name(a), g.name(b))).collect();
        DefiningGraph::new(&names, &edges).expect("link graph is simplicial")
    }

    pub fn to_dot(&self, g: &DefiningGraph) -> String {
        let mut out = format!("graph \"Wh({})\" {{\n", g.name(self.vertex));
        for &v in &self.link {
            let _ = writeln!(out, "  \"{}\";", g.name(v));
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", g.name(a), g.name(b));
        }
        out.push_str("}\n");
        out
    }
}

fn empty_whitehead(g: &DefiningGraph, v: Vertex) -> WhiteheadGraph {
    WhiteheadGraph { vertex: v, link: g.neighbors(v).to_vec(), edges: BTreeSet::new() }
}

fn record_cycle(wh: &mut [WhiteheadGraph], c: &EmbeddedCycle) {
    for (i, &v) in c.vertices().iter().enumerate() {
        let (p, q) = c.neighbors_at(i);
        wh[v].edges.insert((p.min(q), p.max(q)));
    }
}

/// Whitehead graphs at every vertex from tight cycles of length `<= max_len`.
/// `max_len >= |V|` gives the exact graphs.
pub fn whitehead_graphs(g: &DefiningGraph, max_len: usize) -> Vec<WhiteheadGraph> {
    let mut wh: Vec<WhiteheadGraph> = g.vertices().map(|v| empty_whitehead(g, v)).collect();
    for c in enumerate_tight_cycles(g, max_len) {
        record_cycle(&mut wh, &c);
    }
    wh
}

pub fn whitehead_graph(g: &DefiningGraph, v: Vertex, max_len: usize) -> WhiteheadGraph {
    let mut wh: Vec<WhiteheadGraph> = g.vertices().map(|v| empty_whitehead(g, v)).collect();
    for c in enumerate_tight_cycles(g, max_len) {
        if c.position(v).is_some() {
            record_cycle(&mut wh, &c);
        }
    }
    wh.swap_remove(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhiteheadRow {
    pub vertex: String,
    pub whitehead_connected: bool,
    pub cut_vertex: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhiteheadLemmaReport {
    pub rows: Vec<WhiteheadRow>,
    pub pass: bool,
}

/// Checks `Wh(v)` connected ⟺ `v` not a cut vertex at every vertex.
pub fn check_whitehead_lemma(g: &DefiningGraph) -> Result<WhiteheadLemmaReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.girth().is_some_and(|x| x < 5) {
        return Err(Error::Precondition("girth must be at least 5".into()));
    }
    let cuts = g.cut_vertices()?;
    let rows: Vec<WhiteheadRow> = whitehead_graphs(g, g.vertex_count())
        .iter()
        .map(|wh| {
            let connected = wh.is_connected();
            let cut = cuts.contains(&wh.vertex);
            WhiteheadRow {
                vertex: g.name(wh.vertex).to_string(),
                whitehead_connected: connected,
                cut_vertex: cut,
                holds: connected != cut,
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.holds);
    Ok(WhiteheadLemmaReport { rows, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeColor {
    Black,
    White,
    Gray,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColoringCheck {
    pub gray_edges_pairwise_meet: bool,
    pub tight_cycles_monochrome: bool,
    pub valid_hypotheses: bool,
    pub conclusion_holds: bool,
}

/// Evaluates both sides of the three-color lemma for many colorings of one
/// atomic graph, caching its tight cycles.
pub struct ColoringChecker<'a> {
    g: &'a DefiningGraph,
    tight_edges: Vec<Vec<usize>>,
}

fn monochrome_up_to_gray(colors: impl Iterator<Item = EdgeColor> + Clone) -> bool {
    colors.clone().all(|c| c != EdgeColor::White) || colors.into_iter().all(|c| c != EdgeColor::Black)
}

impl<'a> ColoringChecker<'a> {
    pub fn new(g: &'a DefiningGraph) -> Result<Self> {
        if !g.check_atomic()?.is_atomic {
            return Err(Error::Precondition("the coloring lemma requires an atomic graph".into()));
        }
        let tight_edges = enumerate_tight_cycles(g, g.vertex_count())
            .iter()
            .map(|c| c.edge_indices(g))
            .collect();
        Ok(Self { g, tight_edges })
    }

    pub fn tight_cycle_count(&self) -> usize {
        self.tight_edges.len()
    }

    /// `coloring[i]` colors edge `g.edges()[i]`.
    pub fn check(&self, coloring: &[EdgeColor]) -> Result<ColoringCheck> {
        let edges = self.g.edges();
        if coloring.len() != edges.len() {
            return Err(Error::Precondition(format!(
                "coloring has {} entries for {} edges",
                coloring.len(),
                edges.len()
            )));
        }
        let gray: Vec<(Vertex, Vertex)> =
            edges.iter().zip(coloring).filter(|(_, &c)| c == EdgeColor::Gray).map(|(&e, _)| e).collect();
        let gray_edges_pairwise_meet = gray.iter().enumerate().all(|(i, &(a, b))| {
            gray[i + 1..].iter().all(|&(c, d)| a == c || a == d || b == c || b == d)
        });
        let tight_cycles_monochrome = self
            .tight_edges
            .iter()
            .all(|cyc| monochrome_up_to_gray(cyc.iter().map(|&e| coloring[e])));
        Ok(ColoringCheck {
            gray_edges_pairwise_meet,
            tight_cycles_monochrome,
            valid_hypotheses: gray_edges_pairwise_meet && tight_cycles_monochrome,
            conclusion_holds: monochrome_up_to_gray(coloring.iter().copied()),
        })
    }
}

pub fn check_coloring_lemma(g: &DefiningGraph, coloring: &[EdgeColor]) -> Result<ColoringCheck> {
    ColoringChecker::new(g)?.check(coloring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn cyc(g: &DefiningGraph, names: &[&str]) -> EmbeddedCycle {
        let seq: Vec<Vertex> = names.iter().map(|n| g.vertex(n).unwrap()).collect();
        EmbeddedCycle::new(g, &seq).unwrap()
    }

    #[test]
    fn canonical_form_ignores_rotation_and_reflection() {
        let g = pentagon();
        let a = cyc(&g, &["c", "d", "e", "a", "b"]);
        let b = cyc(&g, &["b", "a", "e", "d", "c"]);
        assert_eq!(a, b);
        assert_eq!(a.names(&g), ["a", "b", "c", "d", "e"]);
        assert!(EmbeddedCycle::parse(&g, "a,b,d").is_err());
        assert!(EmbeddedCycle::parse(&g, "a,b").is_err());
    }

    #[test]
    fn pentagon_cycles() {
        let g = pentagon();
        assert_eq!(enumerate_cycles(&g, 5).len(), 1);
        assert!(enumerate_cycles(&g, 4).is_empty());
    }

    #[test]
    fn dodecahedron_has_twelve_pentagons() {
        let d = dodecahedron();
        let faces = enumerate_cycles(&d, 5);
        assert_eq!(faces.len(), 12);
        // every edge lies on exactly two faces
        let mut count = vec![0; d.edge_count()];
        for f in &faces {
            for e in f.edge_indices(&d) {
                count[e] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
    }

    #[test]
    fn shortcuts() {
        let p = pentagon();
        let c = cyc(&p, &["a", "b", "c", "d", "e"]);
        assert!(find_shortcut(&p, &c, 1).is_none());
        assert!(find_shortcut(&p, &c, 2).is_none());
        assert!(is_tight(&p, &c));

        let h = hexagon_with_chord();
        let c6 = cyc(&h, &["h0", "h1", "h2", "h3", "h4", "h5"]);
        let s = find_shortcut(&h, &c6, 1).unwrap();
        assert_eq!(s.cycle_distance, 3);
        let mut ends = [h.name(s.path[0]), h.name(s.path[1])];
        ends.sort();
        assert_eq!(ends, ["h0", "h3"]);
        assert!(!is_tight(&h, &c6));
    }

    #[test]
    fn tight_enumeration_matches_filtered_enumeration() {
        for g in [pentagon(), petersen(), heawood(), dodecahedron(), pentagon_wedge()] {
            let n = g.vertex_count().min(10);
            let filtered: Vec<EmbeddedCycle> =
                enumerate_cycles(&g, n).into_iter().filter(|c| is_tight(&g, c)).collect();
            assert_eq!(enumerate_tight_cycles(&g, n), filtered);
        }
    }

    #[test]
    fn pentagon_whitehead_is_a_single_edge() {
        let g = pentagon();
        for v in g.vertices() {
            let wh = whitehead_graph(&g, v, 5);
            assert_eq!(wh.link.len(), 2);
            assert_eq!(wh.edges.len(), 1);
            assert!(wh.is_connected());
        }
    }

    #[test]
    fn whitehead_monotone_in_length_bound() {
        let g = dodecahedron();
        let mut prev = whitehead_graphs(&g, 3);
        for len in 4..=g.vertex_count() {
            let next = whitehead_graphs(&g, len);
            for (a, b) in prev.iter().zip(&next) {
                assert!(a.edges.is_subset(&b.edges));
            }
            prev = next;
        }
    }

    #[test]
    fn whitehead_lemma_examples() {
        assert!(check_whitehead_lemma(&pentagon()).unwrap().pass);
        let w = pentagon_wedge();
        let report = check_whitehead_lemma(&w).unwrap();
        assert!(report.pass);
        let row = report.rows.iter().find(|r| r.vertex == "v").unwrap();
        assert!(!row.whitehead_connected && row.cut_vertex);
        assert!(check_whitehead_lemma(&hexagon_with_chord()).is_err());
    }

    #[test]
    fn coloring_lemma_fixtures() {
        let g = pentagon();
        let all_black = vec![EdgeColor::Black; 5];
        let r = check_coloring_lemma(&g, &all_black).unwrap();
        assert!(r.valid_hypotheses && r.conclusion_holds);
        let mut mixed = all_black.clone();
        mixed[0] = EdgeColor::White;
        let r = check_coloring_lemma(&g, &mixed).unwrap();
        assert!(!r.tight_cycles_monochrome && !r.conclusion_holds);
        let doubled = g.double_along_closed_star(0);
        assert!(check_coloring_lemma(&doubled, &[EdgeColor::Black; 8]).is_err());
    }

    #[test]
    fn dodecahedron_double_whitehead_graphs() {
        let g = dodecahedron_double();
        let wh = whitehead_graphs(&g, g.vertex_count());
        for w in &wh {
            let k = w.link.len();
            match g.degree(w.vertex) {
                3 => assert_eq!(w.edges.len(), 3, "K3 at {}", g.name(w.vertex)),
                4 => {
                    assert_eq!(k, 4);
                    assert_eq!(w.edges.len(), 5, "K4 minus an edge at {}", g.name(w.vertex));
                }
                d => panic!("unexpected valence {d}"),
            }
        }
        assert!(check_whitehead_lemma(&g).unwrap().pass);
    }

    #[test]
    fn dodecahedron_double_crossing_cycle_has_2_shortcut() {
        let g = dodecahedron_double();
        let copy = |v: Vertex| g.name(v).rsplit_once('#').map(|(_, i)| i.to_string());
        assert!(enumerate_cycles(&g, 5).iter().all(|c| is_tight(&g, c)));
        // Crossing cycles of length <= 10 are 8-cycles around a shared edge.
        for c in enumerate_cycles(&g, 10) {
            let copies: BTreeSet<String> = c.vertices().iter().filter_map(|&v| copy(v)).collect();
            if copies.len() == 2 {
                assert_eq!(c.len(), 8);
                assert!(find_shortcut(&g, &c, 1).is_some());
            }
        }
        let c = cyc(
            &g,
            &[
                "d10", "d00#1", "d01#1", "d02#1", "d03#1", "d04#1", "d14", "d04#2", "d03#2", "d02#2", "d01#2",
                "d00#2",
            ],
        );
        assert!(find_shortcut(&g, &c, 1).is_none());
        let s = find_shortcut(&g, &c, 2).expect("2-shortcut through the shared pentagon");
        assert_eq!(g.name(s.path[1]), "d12");
        assert!(s.cycle_distance > 2);
        assert!(!is_tight(&g, &c));
        for t in enumerate_tight_cycles(&g, g.vertex_count()) {
            let copies: BTreeSet<String> = t.vertices().iter().filter_map(|&v| copy(v)).collect();
            assert!(copies.len() <= 1);
        }
    }

    #[test]
    fn coloring_negative_fixture_on_dodecahedron_double() {
        let g = dodecahedron_double();
        let coloring: Vec<EdgeColor> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let side = |v: Vertex| g.name(v).rsplit_once('#').map(|(_, i)| i.to_string());
                match side(a).or(side(b)).as_deref() {
                    Some("1") => EdgeColor::Black,
                    Some(_) => EdgeColor::White,
                    None => EdgeColor::Gray,
                }
            })
            .collect();
        let r = check_coloring_lemma(&g, &coloring).unwrap();
        assert!(!r.gray_edges_pairwise_meet);
        assert!(!r.valid_hypotheses);
    }
}
