//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use raag_rigidity::flat::{FlatSpace, FullEdgeCycle};
use raag_rigidity::graph::named;
use raag_rigidity::DefiningGraph;

/// Atomic graphs used across the suites.
pub fn atomic_corpus() -> Vec<(&'static str, DefiningGraph)> {
    vec![
        ("pentagon", named::pentagon()),
        ("petersen", named::petersen()),
        ("heawood", named::heawood()),
        ("dodecahedron", named::dodecahedron()),
        ("dodecahedron_double", named::dodecahedron_double()),
    ]
}

struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn dist(&self, s: usize, t: usize) -> usize {
        let mut d = vec![usize::MAX; self.n];
        d[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(a, b) in &self.edges {
                let y = if a == x { b } else if b == x { a } else { continue };
                if d[y] == usize::MAX {
                    d[y] = d[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        d[t]
    }

    /// New path of `len` edges from `x` to `y` (a pendant cycle if equal).
    fn path(&mut self, x: usize, y: usize, len: usize) {
        let mut prev = x;
        for _ in 0..len - 1 {
            self.edges.push((prev, self.n));
            prev = self.n;
            self.n += 1;
        }
        self.edges.push((prev, y));
    }
}

/// A random connected graph with at most `max_n` vertices, girth at least
/// 5 and minimum valence 2, built from a cycle by ears, chords, pendant
/// cycles and bridged cycles, so cut vertices are common.
pub fn random_graph(rng: &mut impl Rng, max_n: usize) -> DefiningGraph {
    let first = rng.gen_range(5..=max_n.min(7));
    let mut b = Builder { n: 1, edges: Vec::new() };
    b.path(0, 0, first);
    for _ in 0..rng.gen_range(0..6) {
        let room = max_n - b.n;
        let (x, y) = (rng.gen_range(0..b.n), rng.gen_range(0..b.n));
        match rng.gen_range(0..4) {
            0 if x != y => {
                let d = b.dist(x, y);
                let min = 5usize.saturating_sub(d).max(1);
                let len = rng.gen_range(min..=min + 2);
                if len >= 2 && len - 1 <= room {
                    b.path(x, y, len);
                }
            }
            1 if x != y && b.dist(x, y) >= 4 => b.edges.push((x.min(y), x.max(y))),
            2 if room >= 4 => {
                let len = rng.gen_range(5..=(room + 1).min(7));
                b.path(x, x, len);
            }
            3 if room >= 5 => {
                // bridge of length 1 to a new 5-cycle
                let start = b.n;
                b.edges.push((x, start));
                b.n += 1;
                b.path(start, start, 5);
            }
            _ => {}
        }
    }
    let names: Vec<String> = (0..b.n).map(|i| format!("v{i:02}")).collect();
    let edges: Vec<(String, String)> = b.edges.iter().map(|&(a, c)| (names[a].clone(), names[c].clone())).collect();
    let g = DefiningGraph::new(&names, &edges).expect("simple graph");
    assert!(g.is_connected() && g.girth().is_some_and(|x| x >= 5));
    assert!(g.vertices().all(|v| g.degree(v) >= 2));
    g
}

/// A copy of `g` with identifiers shuffled, so the vertex order changes.
pub fn scrambled(rng: &mut impl Rng, g: &DefiningGraph) -> DefiningGraph {
    let mut labels: Vec<String> = (0..g.vertex_count()).map(|i| format!("x{i:02}")).collect();
    labels.shuffle(rng);
    let names = g.names().to_vec();
    g.relabel(|s| labels[names.iter().position(|n| n == s).unwrap()].clone()).unwrap()
}

pub fn fixture(space: &FlatSpace, text: &str) -> FullEdgeCycle {
    let keys = text.lines().filter(|l| !l.trim().is_empty()).map(|l| space.parse_key(l.trim()).unwrap()).collect();
    FullEdgeCycle::new(space, keys).unwrap()
}

pub fn eight_cycle(space: &FlatSpace) -> FullEdgeCycle {
    let keys = [
        "1<a,b>", "1<b>", "1<b,c>", "1<c>", "1<c,d>", "1<d>", "1<d,e>", "1<e>", "1<a,e>", "a<e>", "a<d,e>", "a<d>",
        "a<c,d>", "a<c>", "a<b,c>", "a<b>",
    ];
    FullEdgeCycle::new(space, keys.iter().map(|k| space.parse_key(k).unwrap()).collect()).unwrap()
}

/// Pentagon a-b-c-d-e with generators 0..5; letter code 2g + inverse.
pub fn pent_commute(x: u8, y: u8) -> bool {
    let (a, b) = ((x / 2) as i32, (y / 2) as i32);
    let d = (a - b).rem_euclid(5);
    d == 1 || d == 4
}

/// Shortlex-least word among the minimal-length words reachable from each
/// word by commuting swaps and free cancellations, memoized per swap class.
#[derive(Default)]
pub struct Rewriting {
    best: HashMap<Vec<u8>, Vec<u8>>,
}

impl Rewriting {
    pub fn best_of(&mut self, w: &[u8]) -> Vec<u8> {
        if let Some(b) = self.best.get(w) {
            return b.clone();
        }
        let mut class = vec![w.to_vec()];
        let mut seen: BTreeSet<Vec<u8>> = class.iter().cloned().collect();
        let mut queue: VecDeque<Vec<u8>> = class.iter().cloned().collect();
        while let Some(u) = queue.pop_front() {
            for i in 0..u.len().saturating_sub(1) {
                if pent_commute(u[i], u[i + 1]) {
                    let mut v = u.clone();
                    v.swap(i, i + 1);
                    if seen.insert(v.clone()) {
                        class.push(v.clone());
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut best = class.iter().min_by(|a, b| (a.len(), *a).cmp(&(b.len(), *b))).unwrap().clone();
        for u in &class {
            for i in 0..u.len().saturating_sub(1) {
                if u[i] ^ 1 == u[i + 1] {
                    let mut v = u.clone();
                    v.drain(i..i + 2);
                    let b = self.best_of(&v);
                    if (b.len(), &b) < (best.len(), &best) {
                        best = b;
                    }
                }
            }
        }
        for u in class {
            self.best.insert(u, best.clone());
        }
        best
    }
}

