//! The flat space `F(Γ)`: cone vertices `g`, singular vertices `g⟨u⟩` and
//! flat vertices `g⟨u,w⟩`, with squares `(g, g⟨u⟩, g⟨u,w⟩, g⟨w⟩)`.
//!
//! Incidence, stabilizers, parallel sets and hyperplanes are decided
//! algebraically from coset keys. [`FlatBall`] materializes a finite piece
//! for structural checks and turn-cost searches.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::cycles::EmbeddedCycle;
use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, Vertex};
use crate::word::{CosetKey, CosetKind, GroupElement, Raag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexType {
    Cone,
    Singular,
    Flat,
}

pub fn vertex_type(k: &CosetKey) -> VertexType {
    match k.kind {
        CosetKind::Cone => VertexType::Cone,
        CosetKind::Singular(_) => VertexType::Singular,
        CosetKind::Flat(..) => VertexType::Flat,
    }
}

/// The conjugate `g⟨u⟩g⁻¹`, keyed by `(u, g⟨St u⟩)` since the normalizer of
/// `⟨u⟩` is `⟨St u⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StabilizerKey {
    pub generator: Vertex,
    pub coset: GroupElement,
}

/// A hyperplane of `F`, keyed by its type `v` and the coset `g⟨Lk v⟩` of
/// cones it is dual to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HyperplaneKey {
    pub generator: Vertex,
    pub coset: GroupElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Turn {
    Legal,
    Illegal,
}

/// `F(Γ)` for a triangle-free defining graph.
#[derive(Debug, Clone)]
pub struct FlatSpace {
    raag: Raag,
    stars: Vec<Vec<Vertex>>,
}

impl FlatSpace {
    pub fn new(graph: DefiningGraph) -> Result<Self> {
        Self::from_raag(Raag::new(graph))
    }

    pub fn from_raag(raag: Raag) -> Result<Self> {
        let g = raag.graph();
        if g.vertex_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        if g.girth().is_some_and(|x| x < 4) {
            return Err(Error::Precondition("the flat space needs a triangle-free graph".into()));
        }
        let stars = g.vertices().map(|v| g.closed_star(v)).collect();
        Ok(Self { raag, stars })
    }

    pub fn raag(&self) -> &Raag {
        &self.raag
    }

    pub fn graph(&self) -> &DefiningGraph {
        self.raag.graph()
    }

    pub fn identity(&self) -> GroupElement {
        self.raag.identity()
    }

    fn key(&self, g: &GroupElement, kind: CosetKind) -> CosetKey {
        CosetKey::new(g, kind).expect("kind validated by caller")
    }

    pub fn cone(&self, g: &GroupElement) -> CosetKey {
        self.key(g, CosetKind::Cone)
    }

    pub fn singular(&self, g: &GroupElement, u: Vertex) -> CosetKey {
        self.key(g, CosetKind::Singular(u))
    }

    pub fn flat(&self, g: &GroupElement, u: Vertex, w: Vertex) -> Result<CosetKey> {
        CosetKey::new(g, CosetKind::Flat(u, w))
    }

    /// Parses `rep`, `rep<u>` or `rep<u,w>` where `rep` is a word.
    pub fn parse_key(&self, text: &str) -> Result<CosetKey> {
        let text = text.trim();
        let Some((word, rest)) = text.split_once('<') else {
            return Ok(self.cone(&self.raag.parse(text)?));
        };
        let gens = rest.strip_suffix('>').ok_or_else(|| Error::BadToken(text.to_string()))?;
        let g = self.raag.parse(word)?;
        let vs = gens
            .split(',')
            .map(|s| self.graph().vertex(s.trim()).map_err(|_| Error::UnknownGenerator(s.trim().to_string())))
            .collect::<Result<Vec<_>>>()?;
        match vs[..] {
            [u] => Ok(self.singular(&g, u)),
            [u, w] => self.flat(&g, u, w),
            _ => Err(Error::BadToken(text.to_string())),
        }
    }

    pub fn stabilizer_key(&self, s: &CosetKey) -> Result<StabilizerKey> {
        match s.kind {
            CosetKind::Singular(u) => Ok(StabilizerKey {
                generator: u,
                coset: s.representative.coset_rep(&self.stars[u]),
            }),
            _ => Err(Error::Precondition(format!("{s} is not a singular vertex"))),
        }
    }

    /// The two parallel-set classes through a flat vertex.
    pub fn flat_classes(&self, f: &CosetKey) -> Result<[StabilizerKey; 2]> {
        match f.kind {
            CosetKind::Flat(u, w) => Ok([
                self.stabilizer_key(&self.singular(&f.representative, u))?,
                self.stabilizer_key(&self.singular(&f.representative, w))?,
            ]),
            _ => Err(Error::Precondition(format!("{f} is not a flat vertex"))),
        }
    }

    /// Whether two vertices span an edge of `F`.
    pub fn adjacent(&self, a: &CosetKey, b: &CosetKey) -> bool {
        let (lo, hi) = if a.kind <= b.kind { (a, b) } else { (b, a) };
        match (lo.kind, hi.kind) {
            (CosetKind::Cone, CosetKind::Singular(u)) => self.singular(&lo.representative, u) == *hi,
            (CosetKind::Singular(u), CosetKind::Flat(x, y)) => {
                (u == x || u == y) && self.key(&lo.representative, hi.kind) == *hi
            }
            _ => false,
        }
    }

    /// The hyperplane dual to an edge of `F`.
    pub fn hyperplane_of_edge(&self, a: &CosetKey, b: &CosetKey) -> Result<HyperplaneKey> {
        if !self.adjacent(a, b) {
            return Err(Error::Precondition(format!("{a} and {b} are not adjacent")));
        }
        let (lo, hi) = if a.kind <= b.kind { (a, b) } else { (b, a) };
        let g = self.graph();
        let (v, k) = match (lo.kind, hi.kind) {
            // cone k, singular k⟨v⟩
            (CosetKind::Cone, CosetKind::Singular(v)) => (v, &lo.representative),
            // singular k⟨w⟩ inside flat k⟨v,w⟩
            (CosetKind::Singular(w), CosetKind::Flat(x, y)) => (if x == w { y } else { x }, &lo.representative),
            _ => unreachable!("adjacency checked"),
        };
        Ok(HyperplaneKey { generator: v, coset: k.coset_rep(g.neighbors(v)) })
    }

    /// Hyperplanes cross iff their types are adjacent and their cone cosets
    /// meet: `g₁⁻¹g₂ ∈ ⟨Lk v₁⟩⟨Lk v₂⟩`.
    pub fn hyperplanes_cross(&self, h1: &HyperplaneKey, h2: &HyperplaneKey) -> bool {
        let g = self.graph();
        g.has_edge(h1.generator, h2.generator)
            && h1
                .coset
                .left_divide(&h2.coset)
                .in_double_coset(g.neighbors(h1.generator), g.neighbors(h2.generator))
    }

    /// Across a hyperplane, the vertex paired with `k` (they span an edge
    /// dual to `h`).
    pub fn across(&self, h: &HyperplaneKey, k: &CosetKey) -> Result<CosetKey> {
        let x = h.generator;
        let g = self.graph();
        // exponent i with g⁻¹k ∈ x^i ⟨Lk x⟩
        let solve = |rep: &GroupElement| -> Result<i64> {
            let m = h.coset.left_divide(rep);
            if !m.in_special_subgroup(&self.stars[x]) {
                return Err(Error::Invariant(format!("{k} is not adjacent to the hyperplane")));
            }
            Ok(m.letters().iter().filter(|l| l.generator() == x).map(|l| if l.is_inverse() { -1 } else { 1 }).sum())
        };
        let rep = &k.representative;
        match k.kind {
            CosetKind::Cone => {
                if solve(rep)? != 0 {
                    return Err(Error::Invariant(format!("cone {k} is not dual to the hyperplane")));
                }
                Ok(self.singular(rep, x))
            }
            CosetKind::Singular(u) if u == x => {
                let i = solve(rep)?;
                Ok(self.cone(&rep.times_generator(x, -i)))
            }
            CosetKind::Singular(w) => {
                if !g.has_edge(w, x) || solve(rep)? != 0 {
                    return Err(Error::Invariant(format!("singular {k} is not dual to the hyperplane")));
                }
                self.flat(rep, x, w)
            }
            CosetKind::Flat(a, b) => {
                let w = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    return Err(Error::Invariant(format!("flat {k} does not contain the type")));
                };
                let i = solve(rep)?;
                Ok(self.singular(&rep.times_generator(x, -i), w))
            }
        }
    }

    pub fn classify_turn(&self, e1: &FullEdge, e2: &FullEdge) -> Result<Turn> {
        let shared = [&e1.from, &e1.to].into_iter().any(|f| *f == e2.from || *f == e2.to);
        if !shared {
            return Err(Error::Precondition("full edges do not share a flat vertex".into()));
        }
        if e1 == e2 || e1.reversed() == *e2 {
            return Err(Error::Precondition("a turn needs two distinct full edges".into()));
        }
        self.turn_between(&e1.via, &e2.via)
    }

    /// Turn at a flat vertex between the full edges through `s1` and `s2`.
    pub fn turn_between(&self, s1: &CosetKey, s2: &CosetKey) -> Result<Turn> {
        Ok(if self.stabilizer_key(s1)? == self.stabilizer_key(s2)? { Turn::Illegal } else { Turn::Legal })
    }

    fn flat_parts<'a>(&self, f: &'a CosetKey) -> Result<(Vertex, Vertex, &'a GroupElement)> {
        match f.kind {
            CosetKind::Flat(u, w) => Ok((u, w, &f.representative)),
            _ => Err(Error::Precondition(format!("{f} is not a flat vertex"))),
        }
    }

    /// A generator `u` of both flats with `h₁⟨St u⟩ = h₂⟨St u⟩`.
    fn shared_class(&self, f1: &CosetKey, f2: &CosetKey) -> Result<Option<Vertex>> {
        let (a1, b1, h1) = self.flat_parts(f1)?;
        let (a2, b2, h2) = self.flat_parts(f2)?;
        for u in [a1, b1] {
            if (u == a2 || u == b2) && h1.left_divide(h2).in_special_subgroup(&self.stars[u]) {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }

    /// Same parallel set: `D∞(f₁, f₂) ≤ 1` and `f₁ ≠ f₂`.
    pub fn same_parallel_set(&self, f1: &CosetKey, f2: &CosetKey) -> Result<bool> {
        Ok(f1 != f2 && self.shared_class(f1, f2)?.is_some())
    }

    /// `D∞` when it is at most 2, decided exactly; `None` means `D∞ ≥ 3`.
    pub fn coarse_distance_at_most_2(&self, f1: &CosetKey, f2: &CosetKey) -> Result<Option<u32>> {
        if f1 == f2 {
            self.flat_parts(f1)?;
            return Ok(Some(0));
        }
        if self.shared_class(f1, f2)?.is_some() {
            return Ok(Some(1));
        }
        Ok(self.two_step_split(f1, f2)?.map(|_| 2))
    }

    fn two_step_split(&self, f1: &CosetKey, f2: &CosetKey) -> Result<Option<(Vertex, Vertex, GroupElement)>> {
        let (a1, b1, h1) = self.flat_parts(f1)?;
        let (a2, b2, h2) = self.flat_parts(f2)?;
        let m = h1.left_divide(h2);
        for u in [a1, b1] {
            for w in [a2, b2] {
                if self.graph().has_edge(u, w) {
                    if let Some((alpha, _)) = m.split_double_coset(&self.stars[u], &self.stars[w]) {
                        return Ok(Some((u, w, h1.mul(&alpha))));
                    }
                }
            }
        }
        Ok(None)
    }

    /// A stalling path from `f1` to `f2` inside the parallel set of type
    /// `u`; both flats must contain `u` and lie in the same class.
    fn stalling_path(&self, f1: &CosetKey, f2: &CosetKey, u: Vertex) -> Result<Vec<CosetKey>> {
        let h1 = &f1.representative;
        let m = h1.left_divide(&f2.representative);
        if !m.in_special_subgroup(&self.stars[u]) {
            return Err(Error::Invariant("flats are not in a common parallel set".into()));
        }
        let mut path = vec![f1.clone(), self.singular(h1, u)];
        let mut cur = h1.clone();
        let letters: Vec<_> = m.letters().iter().filter(|l| l.generator() != u).copied().collect();
        let mut i = 0;
        while i < letters.len() {
            let x = letters[i].generator();
            let mut e = 0i64;
            while i < letters.len() && letters[i].generator() == x {
                e += if letters[i].is_inverse() { -1 } else { 1 };
                i += 1;
            }
            path.push(self.flat(&cur, u, x)?);
            cur = cur.times_generator(x, e);
            path.push(self.singular(&cur, u));
        }
        path.push(f2.clone());
        Ok(simplify_path(path))
    }

    /// A full-edge path realizing `D∞(f1, f2)` when it is 1 or 2.
    pub fn short_witness_path(&self, f1: &CosetKey, f2: &CosetKey) -> Result<Option<FullEdgePath>> {
        if f1 == f2 {
            return Ok(None);
        }
        if let Some(u) = self.shared_class(f1, f2)? {
            return FullEdgePath::new(self, self.stalling_path(f1, f2, u)?).map(Some);
        }
        let Some((u, w, k)) = self.two_step_split(f1, f2)? else {
            return Ok(None);
        };
        let mid = self.flat(&k, u, w)?;
        let mut path = self.stalling_path(f1, &mid, u)?;
        path.pop();
        path.extend(self.stalling_path(&mid, f2, w)?);
        FullEdgePath::new(self, simplify_path(path)).map(Some)
    }

    /// The lift of an embedded cycle `v₁…vₙ` of Γ to the full-edge cycle
    /// through `⟨vᵢ,vᵢ₊₁⟩` and `⟨vᵢ₊₁⟩`.
    pub fn lift_cycle(&self, c: &EmbeddedCycle) -> Result<FullEdgeCycle> {
        let id = self.identity();
        let v = c.vertices();
        let n = v.len();
        let mut keys = Vec::with_capacity(2 * n);
        for i in 0..n {
            keys.push(self.flat(&id, v[i], v[(i + 1) % n])?);
            keys.push(self.singular(&id, v[(i + 1) % n]));
        }
        FullEdgeCycle::new(self, keys)
    }
}

/// Drops `F S F` detours that return to the same flat.
fn simplify_path(mut path: Vec<CosetKey>) -> Vec<CosetKey> {
    let mut i = 0;
    while i + 2 < path.len() {
        if path[i] == path[i + 2] {
            path.drain(i + 1..i + 3);
            i = i.saturating_sub(2);
        } else {
            i += 1;
        }
    }
    path
}

/// Flat, singular, flat.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FullEdge {
    pub from: CosetKey,
    pub via: CosetKey,
    pub to: CosetKey,
}

impl FullEdge {
    pub fn new(space: &FlatSpace, from: CosetKey, via: CosetKey, to: CosetKey) -> Result<Self> {
        if vertex_type(&from) != VertexType::Flat
            || vertex_type(&to) != VertexType::Flat
            || vertex_type(&via) != VertexType::Singular
        {
            return Err(Error::Precondition("a full edge runs flat, singular, flat".into()));
        }
        if from == to || !space.adjacent(&from, &via) || !space.adjacent(&via, &to) {
            return Err(Error::Precondition(format!("{from} - {via} - {to} is not a full edge")));
        }
        Ok(Self { from, via, to })
    }

    pub fn reversed(&self) -> Self {
        Self { from: self.to.clone(), via: self.via.clone(), to: self.from.clone() }
    }
}

fn check_alternating(space: &FlatSpace, keys: &[CosetKey], closed: bool) -> Result<()> {
    for (i, k) in keys.iter().enumerate() {
        let want = if i % 2 == 0 { VertexType::Flat } else { VertexType::Singular };
        if vertex_type(k) != want {
            return Err(Error::CycleRequired(format!("position {i} should be a {want:?} vertex, found {k}")));
        }
    }
    let n = keys.len();
    let pairs = if closed { n } else { n.saturating_sub(1) };
    for i in 0..pairs {
        let (a, b) = (&keys[i], &keys[(i + 1) % n]);
        if !space.adjacent(a, b) {
            return Err(Error::CycleRequired(format!("{a} and {b} are not adjacent")));
        }
    }
    Ok(())
}

/// `f₀, s₁, f₁, …, sₙ, fₙ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullEdgePath {
    vertices: Vec<CosetKey>,
}

impl FullEdgePath {
    pub fn new(space: &FlatSpace, vertices: Vec<CosetKey>) -> Result<Self> {
        if vertices.len().is_multiple_of(2) {
            return Err(Error::Precondition("a full-edge path starts and ends at flats".into()));
        }
        check_alternating(space, &vertices, false)?;
        for i in (0..vertices.len().saturating_sub(2)).step_by(2) {
            if vertices[i] == vertices[i + 2] {
                return Err(Error::Precondition(format!("full edge at {} returns to its start", vertices[i])));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[CosetKey] {
        &self.vertices
    }

    pub fn full_edge_count(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn turns(&self, space: &FlatSpace) -> Vec<Turn> {
        (1..self.full_edge_count())
            .map(|i| space.turn_between(&self.vertices[2 * i - 1], &self.vertices[2 * i + 1]).expect("singulars"))
            .collect()
    }

    /// Legal turns plus one; a single flat vertex has length 0.
    pub fn coarse_length(&self, space: &FlatSpace) -> u32 {
        if self.full_edge_count() == 0 {
            return 0;
        }
        self.turns(space).iter().filter(|t| **t == Turn::Legal).count() as u32 + 1
    }

    pub fn is_stalling(&self, space: &FlatSpace) -> bool {
        self.turns(space).iter().all(|t| *t == Turn::Illegal)
    }
}

/// An embedded closed full-edge path `f₀ s₁ f₁ … sₙ` (closing at `f₀`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullEdgeCycle {
    vertices: Vec<CosetKey>,
}

impl FullEdgeCycle {
    pub fn new(space: &FlatSpace, vertices: Vec<CosetKey>) -> Result<Self> {
        if vertices.len() < 4 || vertices.len() % 2 == 1 {
            return Err(Error::CycleRequired("a full-edge cycle alternates flats and singulars".into()));
        }
        check_alternating(space, &vertices, true)?;
        let distinct: BTreeSet<&CosetKey> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::CycleRequired("the full-edge loop is not embedded".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[CosetKey] {
        &self.vertices
    }

    /// Number of full edges.
    pub fn len(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn flat(&self, i: usize) -> &CosetKey {
        &self.vertices[2 * (i % self.len())]
    }

    /// Turn at the `i`-th flat.
    pub fn turn_at(&self, space: &FlatSpace, i: usize) -> Turn {
        let n = self.vertices.len();
        let at = 2 * (i % self.len());
        space.turn_between(&self.vertices[(at + n - 1) % n], &self.vertices[at + 1]).expect("singulars")
    }

    /// Coarse length of the arc running forward from flat `p` to flat `q`.
    pub fn arc_coarse_length(&self, space: &FlatSpace, p: usize, q: usize) -> u32 {
        let n = self.len();
        let steps = (q + n - p) % n;
        (1..steps).filter(|&k| self.turn_at(space, p + k) == Turn::Legal).count() as u32 + 1
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.vertices.iter().map(|k| k.to_string()).collect()
    }
}

/// Sizes of an [`FlatBall`] and the outcome of its link checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallStats {
    pub radius: u32,
    pub exponent_bound: u32,
    pub chamber_depth: u32,
    pub complete_radius: u32,
    pub chambers: usize,
    pub cone_vertices: usize,
    pub singular_vertices: usize,
    pub flat_vertices: usize,
    pub edges: usize,
    pub squares: usize,
    pub links: LinkReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct LinkReport {
    pub interior_vertices: usize,
    pub cone_links_are_graph: bool,
    pub cone_links_triangulated_are_subdivision: bool,
    pub singular_links_are_joins: bool,
    pub flat_links_bipartite_with_complete_window: bool,
    pub link_girth_at_least_4: bool,
    pub squares_typed: bool,
    pub violations: Vec<String>,
}

impl LinkReport {
    pub fn pass(&self) -> bool {
        self.cone_links_are_graph
            && self.cone_links_triangulated_are_subdivision
            && self.singular_links_are_joins
            && self.flat_links_bipartite_with_complete_window
            && self.link_girth_at_least_4
            && self.squares_typed
    }
}

/// A finite piece of `F`: all chambers `gC` within `chamber_depth` gallery
/// steps `g ↦ g·x^k` (`1 ≤ |k| ≤ exponent_bound`) of the base chamber.
///
/// A vertex lying in a chamber at depth `d` has depth `2d`, `2d + 1` or
/// `2d + 2` for cone, singular and flat vertices. The radius bounds vertex
/// depth; `complete_radius = radius - 4`.
#[derive(Debug, Clone)]
pub struct FlatBall {
    space: FlatSpace,
    radius: u32,
    exponent_bound: u32,
    chamber_depth: u32,
    complete_radius: u32,
    chambers: Vec<GroupElement>,
    keys: Vec<CosetKey>,
    index: HashMap<CosetKey, u32>,
    depth: Vec<u32>,
    /// Shallowest chamber containing each vertex.
    home: Vec<u32>,
    adj: Vec<Vec<u32>>,
    squares: Vec<[u32; 4]>,
    squares_at: Vec<Vec<u32>>,
}

impl FlatBall {
    pub fn build(space: &FlatSpace, radius: u32, exponent_bound: u32) -> Result<Self> {
        if radius < 2 {
            return Err(Error::Precondition("ball radius must be at least 2".into()));
        }
        if exponent_bound == 0 {
            return Err(Error::Precondition("exponent bound must be positive".into()));
        }
        let g = space.graph();
        let chamber_depth = (radius - 2) / 2;
        let mut chamber_index: HashMap<GroupElement, u32> = HashMap::new();
        let mut chambers = vec![space.identity()];
        let mut chamber_depths = vec![0u32];
        chamber_index.insert(space.identity(), 0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(c) = queue.pop_front() {
            let d = chamber_depths[c as usize];
            if d == chamber_depth {
                continue;
            }
            let here = chambers[c as usize].clone();
            for x in g.vertices() {
                for k in 1..=exponent_bound as i64 {
                    for e in [k, -k] {
                        let next = here.times_generator(x, e);
                        if !chamber_index.contains_key(&next) {
                            let id = chambers.len() as u32;
                            chamber_index.insert(next.clone(), id);
                            chambers.push(next);
                            chamber_depths.push(d + 1);
                            queue.push_back(id);
                        }
                    }
                }
            }
        }

        let mut raw: HashMap<CosetKey, (u32, u32)> = HashMap::new();
        let mut raw_squares = Vec::new();
        let note = |k: CosetKey, depth: u32, chamber: u32, raw: &mut HashMap<CosetKey, (u32, u32)>| {
            let e = raw.entry(k.clone()).or_insert((depth, chamber));
            if depth < e.0 {
                *e = (depth, chamber);
            }
            k
        };
        for (ci, c) in chambers.iter().enumerate() {
            let d = chamber_depths[ci];
            let cone = note(space.cone(c), 2 * d, ci as u32, &mut raw);
            let sing: Vec<CosetKey> =
                g.vertices().map(|u| note(space.singular(c, u), 2 * d + 1, ci as u32, &mut raw)).collect();
            for &(u, w) in g.edges() {
                let f = note(space.flat(c, u, w)?, 2 * d + 2, ci as u32, &mut raw);
                raw_squares.push([cone.clone(), sing[u].clone(), f, sing[w].clone()]);
            }
        }

        let mut keys: Vec<CosetKey> = raw.keys().cloned().collect();
        keys.sort();
        let index: HashMap<CosetKey, u32> = keys.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect();
        let depth = keys.iter().map(|k| raw[k].0).collect();
        let home = keys.iter().map(|k| raw[k].1).collect();
        let mut squares: Vec<[u32; 4]> = raw_squares.iter().map(|sq| sq.clone().map(|k| index[&k])).collect();
        squares.sort_unstable();
        squares.dedup();
        let mut adj = vec![Vec::new(); keys.len()];
        let mut squares_at = vec![Vec::new(); keys.len()];
        for (si, sq) in squares.iter().enumerate() {
            for i in 0..4 {
                let (a, b) = (sq[i], sq[(i + 1) % 4]);
                adj[a as usize].push(b);
                adj[b as usize].push(a);
                squares_at[sq[i] as usize].push(si as u32);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self {
            space: space.clone(),
            radius,
            exponent_bound,
            chamber_depth,
            complete_radius: radius.saturating_sub(4),
            chambers,
            keys,
            index,
            depth,
            home,
            adj,
            squares,
            squares_at,
        })
    }

    pub fn space(&self) -> &FlatSpace {
        &self.space
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn complete_radius(&self) -> u32 {
        self.complete_radius
    }

    pub fn vertex_count(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[CosetKey] {
        &self.keys
    }

    pub fn key(&self, v: u32) -> &CosetKey {
        &self.keys[v as usize]
    }

    pub fn id_of(&self, k: &CosetKey) -> Option<u32> {
        self.index.get(k).copied()
    }

    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn squares(&self) -> &[[u32; 4]] {
        &self.squares
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertex_type(&self, v: u32) -> VertexType {
        vertex_type(&self.keys[v as usize])
    }

    pub fn is_interior(&self, v: u32) -> bool {
        self.depth[v as usize] <= self.complete_radius
    }

    pub fn flats(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.keys.len() as u32).filter(move |&v| self.vertex_type(v) == VertexType::Flat)
    }

    /// Link of `v` in the square complex: neighbors, with one link edge per
    /// square at `v` (multi-edges kept).
    pub fn link(&self, v: u32) -> (Vec<u32>, Vec<(u32, u32)>) {
        let mut edges = Vec::new();
        for &si in &self.squares_at[v as usize] {
            let sq = self.squares[si as usize];
            let i = sq.iter().position(|&x| x == v).unwrap();
            let (a, b) = (sq[(i + 1) % 4], sq[(i + 3) % 4]);
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        (self.adj[v as usize].clone(), edges)
    }

    pub fn check_links(&self) -> LinkReport {
        let g = self.space.graph();
        let sub = g.barycentric_subdivision();
        let mut r = LinkReport {
            cone_links_are_graph: true,
            cone_links_triangulated_are_subdivision: true,
            singular_links_are_joins: true,
            flat_links_bipartite_with_complete_window: true,
            link_girth_at_least_4: true,
            squares_typed: true,
            ..Default::default()
        };
        let fail = |flag: &mut bool, msg: String, violations: &mut Vec<String>| {
            *flag = false;
            if violations.len() < 20 {
                violations.push(msg);
            }
        };

        for sq in &self.squares {
            let [c, s1, f, s2] = sq.map(|v| &self.keys[v as usize]);
            let ok = match (c.kind, s1.kind, f.kind, s2.kind) {
                (CosetKind::Cone, CosetKind::Singular(u), CosetKind::Flat(..), CosetKind::Singular(w)) => {
                    let h = &c.representative;
                    u != w
                        && self.space.singular(h, u) == *s1
                        && self.space.singular(h, w) == *s2
                        && self.space.flat(h, u, w).ok().as_ref() == Some(f)
                }
                _ => false,
            };
            if !ok {
                fail(&mut r.squares_typed, format!("square ({c}, {s1}, {f}, {s2}) is mistyped"), &mut r.violations);
            }
        }

        for v in 0..self.keys.len() as u32 {
            let (nbrs, ledges) = self.link(v);
            let key = &self.keys[v as usize];
            let mut distinct = ledges.clone();
            distinct.dedup();
            let nset: BTreeSet<u32> = nbrs.iter().copied().collect();
            let triangle = distinct.iter().any(|&(a, b)| {
                distinct.iter().any(|&(c, d)| {
                    let (x, y) = if c == a { (b, d) } else if d == a { (b, c) } else { return false };
                    x != y && distinct.binary_search(&(x.min(y), x.max(y))).is_ok()
                })
            });
            if distinct.len() != ledges.len() || triangle {
                fail(&mut r.link_girth_at_least_4, format!("link of {key} has a cycle shorter than 4"), &mut r.violations);
            }
            if !self.is_interior(v) {
                continue;
            }
            r.interior_vertices += 1;
            match key.kind {
                CosetKind::Cone => {
                    // link vertex g⟨u⟩ ↦ u must be an isomorphism onto Γ
                    let types: Vec<Vertex> = nbrs
                        .iter()
                        .map(|&s| match self.keys[s as usize].kind {
                            CosetKind::Singular(u) => u,
                            _ => usize::MAX,
                        })
                        .collect();
                    let image: BTreeSet<(Vertex, Vertex)> = distinct
                        .iter()
                        .map(|&(a, b)| {
                            let (x, y) = (types[nset.iter().position(|&n| n == a).unwrap()], types[nset.iter().position(|&n| n == b).unwrap()]);
                            (x.min(y), x.max(y))
                        })
                        .collect();
                    let expected: BTreeSet<(Vertex, Vertex)> = g.edges().iter().copied().collect();
                    let mut sorted_types = types.clone();
                    sorted_types.sort_unstable();
                    if sorted_types != g.vertices().collect::<Vec<_>>() || image != expected || distinct.len() != g.edge_count() {
                        fail(&mut r.cone_links_are_graph, format!("link of cone {key} is not the defining graph"), &mut r.violations);
                    }
                    // triangulated link: singulars and diagonal flats
                    let mut tri: BTreeSet<(String, String)> = BTreeSet::new();
                    for &si in &self.squares_at[v as usize] {
                        let sq = self.squares[si as usize];
                        let f = &self.keys[sq[2] as usize];
                        let CosetKind::Flat(a, b) = f.kind else { continue };
                        let mid = format!("{}|{}", g.name(a), g.name(b));
                        for s in [sq[1], sq[3]] {
                            if let CosetKind::Singular(u) = self.keys[s as usize].kind {
                                tri.insert((g.name(u).to_string(), mid.clone()));
                            }
                        }
                    }
                    let expected_tri: BTreeSet<(String, String)> = sub
                        .edges()
                        .iter()
                        .map(|&(a, b)| {
                            let (x, y) = (sub.name(a), sub.name(b));
                            if x.contains('|') { (y.to_string(), x.to_string()) } else { (x.to_string(), y.to_string()) }
                        })
                        .collect();
                    if tri != expected_tri {
                        fail(
                            &mut r.cone_links_triangulated_are_subdivision,
                            format!("triangulated link of cone {key} is not the barycentric subdivision"),
                            &mut r.violations,
                        );
                    }
                }
                CosetKind::Singular(u) => {
                    let cones: Vec<u32> = nbrs.iter().copied().filter(|&x| self.vertex_type(x) == VertexType::Cone).collect();
                    let flats: Vec<u32> = nbrs.iter().copied().filter(|&x| self.vertex_type(x) == VertexType::Flat).collect();
                    let join = flats.len() == g.degree(u)
                        && distinct.len() == cones.len() * flats.len()
                        && distinct.iter().all(|&(a, b)| self.vertex_type(a) != self.vertex_type(b));
                    if !join {
                        fail(&mut r.singular_links_are_joins, format!("link of {key} is not a join"), &mut r.violations);
                    }
                }
                CosetKind::Flat(a, b) => {
                    let side = |x: u32| match self.keys[x as usize].kind {
                        CosetKind::Singular(t) => Some(t),
                        _ => None,
                    };
                    let bipartite = nbrs.iter().all(|&x| matches!(side(x), Some(t) if t == a || t == b))
                        && distinct.iter().all(|&(x, y)| side(x) != side(y));
                    // window around the shallowest chamber in this flat
                    let c = &self.chambers[self.home[v as usize] as usize];
                    let e = self.exponent_bound as i64;
                    let mut window_ok = true;
                    'win: for i in -e..=e {
                        for j in -e..=e {
                            let s1 = self.space.singular(&c.times_generator(b, j), a);
                            let s2 = self.space.singular(&c.times_generator(a, i), b);
                            match (self.id_of(&s1), self.id_of(&s2)) {
                                (Some(x), Some(y)) if distinct.binary_search(&(x.min(y), x.max(y))).is_ok() => {}
                                _ => {
                                    window_ok = false;
                                    break 'win;
                                }
                            }
                        }
                    }
                    if !bipartite || !window_ok {
                        fail(
                            &mut r.flat_links_bipartite_with_complete_window,
                            format!("link of {key} is not complete bipartite on its window"),
                            &mut r.violations,
                        );
                    }
                }
            }
        }
        r
    }

    pub fn stats(&self) -> BallStats {
        let count = |t| (0..self.keys.len() as u32).filter(|&v| self.vertex_type(v) == t).count();
        BallStats {
            radius: self.radius,
            exponent_bound: self.exponent_bound,
            chamber_depth: self.chamber_depth,
            complete_radius: self.complete_radius,
            chambers: self.chambers.len(),
            cone_vertices: count(VertexType::Cone),
            singular_vertices: count(VertexType::Singular),
            flat_vertices: count(VertexType::Flat),
            edges: self.edge_count(),
            squares: self.squares.len(),
            links: self.check_links(),
        }
    }

    /// Minimal coarse length of a full-edge path inside the ball, by 0-1 BFS
    /// over (flat, stabilizer class of the last singular).
    pub fn coarse_distance_in_ball(&self, f1: u32, f2: u32) -> Option<u32> {
        if f1 == f2 {
            return Some(0);
        }
        self.coarse_path_in_ball(f1, f2).map(|p| p.coarse_length(&self.space))
    }

    /// A full-edge path of minimal coarse length inside the ball, by 0-1
    /// BFS over (flat, stabilizer class of the last singular).
    pub fn coarse_path_in_ball(&self, f1: u32, f2: u32) -> Option<FullEdgePath> {
        let mut class_id: HashMap<StabilizerKey, u32> = HashMap::new();
        let mut class_of = |s: u32| {
            let k = self.space.stabilizer_key(&self.keys[s as usize]).expect("singular");
            let n = class_id.len() as u32;
            *class_id.entry(k).or_insert(n)
        };
        type State = (u32, u32);
        let mut best: HashMap<State, u32> = HashMap::new();
        let mut pred: HashMap<State, (Option<State>, u32)> = HashMap::new();
        let mut dq: VecDeque<(State, u32)> = VecDeque::new();
        let flats_at = |s: u32| self.neighbors(s).iter().copied().filter(|&x| self.vertex_type(x) == VertexType::Flat);
        for &s in self.neighbors(f1) {
            let c = class_of(s);
            for f in flats_at(s) {
                if f != f1 && !best.contains_key(&(f, c)) {
                    best.insert((f, c), 0);
                    pred.insert((f, c), (None, s));
                    dq.push_back(((f, c), 0));
                }
            }
        }
        while let Some((st, d)) = dq.pop_front() {
            if best[&st] < d {
                continue;
            }
            let (f, c) = st;
            if f == f2 {
                let mut rev = vec![f2];
                let mut cur = st;
                loop {
                    let (prev, s) = pred[&cur];
                    rev.push(s);
                    match prev {
                        Some(p) => {
                            rev.push(p.0);
                            cur = p;
                        }
                        None => break,
                    }
                }
                rev.push(f1);
                rev.reverse();
                let keys = rev.iter().map(|&x| self.keys[x as usize].clone()).collect();
                return FullEdgePath::new(&self.space, keys).ok();
            }
            for &s in self.neighbors(f) {
                let cs = class_of(s);
                let nd = d + u32::from(cs != c);
                for g in flats_at(s) {
                    if g == f {
                        continue;
                    }
                    if best.get(&(g, cs)).is_none_or(|&old| old > nd) {
                        best.insert((g, cs), nd);
                        pred.insert((g, cs), (Some(st), s));
                        if nd == d {
                            dq.push_front(((g, cs), nd));
                        } else {
                            dq.push_back(((g, cs), nd));
                        }
                    }
                }
            }
        }
        None
    }

    /// Flats reachable from `f` by stalling paths inside the ball.
    pub fn stalling_reach(&self, f: u32) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        let Ok(classes) = self.space.flat_classes(&self.keys[f as usize]) else {
            return out;
        };
        for class in classes {
            let mut seen = BTreeSet::from([f]);
            let mut stack = vec![f];
            while let Some(x) = stack.pop() {
                for &s in self.neighbors(x) {
                    if self.space.stabilizer_key(&self.keys[s as usize]).ok().as_ref() != Some(&class) {
                        continue;
                    }
                    for &y in self.neighbors(s) {
                        if self.vertex_type(y) == VertexType::Flat && seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
            }
            out.extend(seen);
        }
        out.remove(&f);
        out
    }

    pub fn parallel_set_slice(&self, s: &CosetKey) -> Result<ParallelSetSlice> {
        let class = self.space.stabilizer_key(s)?;
        if self.id_of(s).is_none() {
            return Err(Error::Precondition(format!("{s} is not in the ball")));
        }
        let flats = self
            .flats()
            .filter(|&f| {
                self.space.flat_classes(&self.keys[f as usize]).map(|c| c.contains(&class)).unwrap_or(false)
            })
            .map(|f| self.keys[f as usize].clone())
            .collect();
        Ok(ParallelSetSlice { singular: s.clone(), flats })
    }

    /// Removes the closed stars of the slice's flats and counts the cone
    /// vertices left in each component of the remaining 1-skeleton.
    pub fn slice_separation(&self, slice: &ParallelSetSlice) -> Vec<usize> {
        let mut removed = vec![false; self.keys.len()];
        for f in &slice.flats {
            if let Some(v) = self.id_of(f) {
                removed[v as usize] = true;
                for &si in &self.squares_at[v as usize] {
                    for &x in &self.squares[si as usize] {
                        removed[x as usize] = true;
                    }
                }
            }
        }
        let mut comp_cones = Vec::new();
        let mut seen = removed.clone();
        for start in 0..self.keys.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start as u32];
            let mut cones = 0;
            while let Some(x) = stack.pop() {
                if self.vertex_type(x) == VertexType::Cone {
                    cones += 1;
                }
                for &y in self.neighbors(x) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
            if cones > 0 {
                comp_cones.push(cones);
            }
        }
        comp_cones.sort_unstable_by(|a, b| b.cmp(a));
        comp_cones
    }

    /// Embedded full-edge cycles through the flat `start` with at most
    /// `max_len` full edges, each listed once up to direction.
    pub fn full_edge_cycles_through(&self, start: u32, max_len: usize, limit: usize) -> Vec<FullEdgeCycle> {
        let mut out = Vec::new();
        let mut seen_cycles: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut path = vec![start];
        let mut on = vec![false; self.keys.len()];
        on[start as usize] = true;
        fn dfs(
            b: &FlatBall,
            start: u32,
            max_len: usize,
            limit: usize,
            path: &mut Vec<u32>,
            on: &mut [bool],
            seen: &mut BTreeSet<Vec<u32>>,
            out: &mut Vec<FullEdgeCycle>,
        ) {
            if out.len() >= limit {
                return;
            }
            let f = *path.last().unwrap();
            for &s in b.neighbors(f) {
                if on[s as usize] {
                    continue;
                }
                for &g in b.neighbors(s) {
                    if g == f || b.vertex_type(g) != VertexType::Flat {
                        continue;
                    }
                    if g == start && path.len() >= 5 {
                        let mut cyc = path.clone();
                        cyc.push(s);
                        let mut rev: Vec<u32> = cyc[1..].iter().rev().copied().collect();
                        rev.insert(0, start);
                        let canon = cyc.clone().min(rev);
                        if seen.insert(canon) {
                            let keys = cyc.iter().map(|&x| b.keys[x as usize].clone()).collect();
                            if let Ok(c) = FullEdgeCycle::new(&b.space, keys) {
                                out.push(c);
                            }
                        }
                        continue;
                    }
                    if on[g as usize] || path.len() / 2 + 1 >= max_len {
                        continue;
                    }
                    on[s as usize] = true;
                    on[g as usize] = true;
                    path.push(s);
                    path.push(g);
                    dfs(b, start, max_len, limit, path, on, seen, out);
                    path.pop();
                    path.pop();
                    on[s as usize] = false;
                    on[g as usize] = false;
                }
            }
        }
        dfs(self, start, max_len, limit, &mut path, &mut on, &mut seen_cycles, &mut out);
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph flat_ball {\n");
        for (i, k) in self.keys.iter().enumerate() {
            let shape = match vertex_type(k) {
                VertexType::Cone => "point",
                VertexType::Singular => "circle",
                VertexType::Flat => "box",
            };
            let _ = writeln!(out, "  v{i} [label=\"{k}\", shape={shape}];");
        }
        for (a, list) in self.adj.iter().enumerate() {
            for &b in list {
                if (a as u32) < b {
                    let _ = writeln!(out, "  v{a} -- v{b};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Flats of a ball lying in the parallel set of a singular vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParallelSetSlice {
    pub singular: CosetKey,
    pub flats: Vec<CosetKey>,
}

/// Result of a coarse-distance query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoarseDistance {
    Exact { value: u32 },
    Unknown { at_least: u32, ball_upper_bound: Option<u32> },
}

impl fmt::Display for CoarseDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoarseDistance::Exact { value } => write!(f, "{value}"),
            CoarseDistance::Unknown { at_least, .. } => write!(f, "unknown(>= {at_least})"),
        }
    }
}

/// Exact below 3 by the algebraic criteria; 3 is certified when the ball
/// has a path of coarse length 3; anything else is reported as unknown.
pub fn coarse_distance(b: &FlatBall, f1: &CosetKey, f2: &CosetKey) -> Result<CoarseDistance> {
    if let Some(d) = b.space().coarse_distance_at_most_2(f1, f2)? {
        return Ok(CoarseDistance::Exact { value: d });
    }
    let in_ball = match (b.id_of(f1), b.id_of(f2)) {
        (Some(x), Some(y)) => b.coarse_distance_in_ball(x, y),
        _ => None,
    };
    Ok(match in_ball {
        Some(3) => CoarseDistance::Exact { value: 3 },
        other => CoarseDistance::Unknown { at_least: 3, ball_upper_bound: other },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParallelIntersection {
    Equal,
    StandardFlat,
    Small,
}

/// How the parallel sets of standard lines of types `u` and `v` through a
/// common point meet.
pub fn classify_parallel_intersection(g: &DefiningGraph, u: Vertex, v: Vertex) -> ParallelIntersection {
    if u == v {
        ParallelIntersection::Equal
    } else if g.has_edge(u, v) {
        ParallelIntersection::StandardFlat
    } else {
        ParallelIntersection::Small
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuarterPlaneCase {
    Case1,
    Case2,
    Case3,
}

/// Trichotomy for a quarter-plane whose labels span a join.
pub fn quarter_plane_case(g: &DefiningGraph, alpha: &[Vertex], beta: &[Vertex]) -> Result<QuarterPlaneCase> {
    if alpha.is_empty() || beta.is_empty() {
        return Err(Error::Precondition("quarter-plane labels must be nonempty".into()));
    }
    for &a in alpha {
        for &b in beta {
            if !g.has_edge(a, b) {
                return Err(Error::Precondition(format!(
                    "labels do not span a join: {} and {} are not adjacent",
                    g.name(a),
                    g.name(b)
                )));
            }
        }
    }
    let ca = g.orthogonal_complement(alpha).len();
    let cb = g.orthogonal_complement(beta).len();
    Ok(match (ca == 1, cb == 1) {
        (true, true) => QuarterPlaneCase::Case1,
        (false, false) => QuarterPlaneCase::Case3,
        _ => QuarterPlaneCase::Case2,
    })
}

/// Vertex and square counts of a ball, by type.
pub fn type_counts(b: &FlatBall) -> BTreeMap<VertexType, usize> {
    let mut m = BTreeMap::new();
    for v in 0..b.vertex_count() as u32 {
        *m.entry(b.vertex_type(v)).or_insert(0) += 1;
    }
    m
}
