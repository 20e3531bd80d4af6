//! Graph isomorphism by backtracking with degree and distance-profile
//! pruning. Graphs here have at most a few dozen vertices.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::graph::{DefiningGraph, Vertex};

/// A vertex bijection between two defining graphs preserving adjacency.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphIsomorphism {
    map: Vec<Vertex>,
}

impl GraphIsomorphism {
    pub fn from_map(map: Vec<Vertex>) -> Self {
        Self { map }
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (v, &w) in self.map.iter().enumerate() {
            inv[w] = v;
        }
        Self { map: inv }
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self { map: self.map.iter().map(|&w| other.map[w]).collect() }
    }

    /// Whether this is a bijection `source → target` with
    /// `{u,v} ∈ E(source) ⟺ {map u, map v} ∈ E(target)`.
    pub fn is_isomorphism(&self, source: &DefiningGraph, target: &DefiningGraph) -> bool {
        let n = source.vertex_count();
        if n != target.vertex_count() || self.map.len() != n || source.edge_count() != target.edge_count() {
            return false;
        }
        let mut hit = vec![false; n];
        for &w in &self.map {
            if w >= n || std::mem::replace(&mut hit[w], true) {
                return false;
            }
        }
        source.edges().iter().all(|&(a, b)| target.has_edge(self.map[a], self.map[b]))
    }

    /// Pairs `(source name, target name)` in source vertex order.
    pub fn named_pairs(&self, source: &DefiningGraph, target: &DefiningGraph) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(v, &w)| (source.name(v).to_string(), target.name(w).to_string()))
            .collect()
    }
}

impl Serialize for GraphIsomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.map.serialize(s)
    }
}

struct Profile {
    dist: Vec<Vec<usize>>,
    /// Per vertex: degree followed by the count of vertices at each distance.
    invariant: Vec<Vec<usize>>,
}

impl Profile {
    fn new(g: &DefiningGraph) -> Self {
        let n = g.vertex_count();
        let dist: Vec<Vec<usize>> = g.vertices().map(|v| g.distances_from(v)).collect();
        let invariant = (0..n)
            .map(|v| {
                let mut counts = vec![g.degree(v)];
                let finite: Vec<usize> = dist[v].iter().copied().filter(|&d| d != usize::MAX).collect();
                let max = finite.iter().copied().max().unwrap_or(0);
                let mut hist = vec![0; max + 1];
                for d in finite {
                    hist[d] += 1;
                }
                counts.extend(hist);
                counts
            })
            .collect();
        Self { dist, invariant }
    }
}

/// Calls `visit` on every isomorphism `g1 → g2`, in a deterministic order,
/// until it returns `Break`.
pub fn for_each_isomorphism(
    g1: &DefiningGraph,
    g2: &DefiningGraph,
    mut visit: impl FnMut(&GraphIsomorphism) -> ControlFlow<()>,
) {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return;
    }
    let p1 = Profile::new(g1);
    let p2 = Profile::new(g2);
    let mut s1: Vec<&Vec<usize>> = p1.invariant.iter().collect();
    let mut s2: Vec<&Vec<usize>> = p2.invariant.iter().collect();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return;
    }
    let candidates: Vec<Vec<Vertex>> = (0..n)
        .map(|v| (0..n).filter(|&w| p2.invariant[w] == p1.invariant[v]).collect())
        .collect();

    // Match vertices in BFS order from the most constrained vertex so every
    // new vertex usually has an already-mapped neighbor.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let root = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (candidates[v].len(), v))
            .expect("unplaced vertex exists");
        placed[root] = true;
        let start = order.len();
        order.push(root);
        let mut i = start;
        while i < order.len() {
            let x = order[i];
            for &y in g1.neighbors(x) {
                if !placed[y] {
                    placed[y] = true;
                    order.push(y);
                }
            }
            i += 1;
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut current = GraphIsomorphism { map: Vec::new() };
    fn search(
        depth: usize,
        order: &[Vertex],
        candidates: &[Vec<Vertex>],
        p1: &Profile,
        p2: &Profile,
        map: &mut [Vertex],
        used: &mut [bool],
        current: &mut GraphIsomorphism,
        visit: &mut dyn FnMut(&GraphIsomorphism) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if depth == order.len() {
            current.map.clear();
            current.map.extend_from_slice(map);
            return visit(current);
        }
        let v = order[depth];
        'cand: for &w in &candidates[v] {
            if used[w] {
                continue;
            }
            for &u in &order[..depth] {
                if p1.dist[v][u] != p2.dist[w][map[u]] {
                    continue 'cand;
                }
            }
            map[v] = w;
            used[w] = true;
            let flow = search(depth + 1, order, candidates, p1, p2, map, used, current, visit);
            used[w] = false;
            map[v] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }
    let _ = search(0, &order, &candidates, &p1, &p2, &mut map, &mut used, &mut current, &mut visit);
}

/// A witness isomorphism `g1 → g2`, or `None` when the graphs are not
/// isomorphic.
pub fn isomorphism(g1: &DefiningGraph, g2: &DefiningGraph) -> Option<GraphIsomorphism> {
    let mut found = None;
    for_each_isomorphism(g1, g2, |iso| {
        found = Some(iso.clone());
        ControlFlow::Break(())
    });
    found
}

pub fn count_isomorphisms(g1: &DefiningGraph, g2: &DefiningGraph) -> u64 {
    let mut count = 0;
    for_each_isomorphism(g1, g2, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// |Aut(Γ)|, by exhaustive enumeration.
pub fn automorphism_group_order(g: &DefiningGraph) -> u64 {
    count_isomorphisms(g, g)
}

pub fn automorphisms(g: &DefiningGraph) -> Vec<GraphIsomorphism> {
    let mut all = Vec::new();
    for_each_isomorphism(g, g, |iso| {
        all.push(iso.clone());
        ControlFlow::Continue(())
    });
    all
}
