//! Elements of the right-angled Artin group `G(Γ)` in shortlex normal form,
//! and canonical representatives of cosets of special subgroups.
//!
//! Letters are ordered by generator index, the positive letter before its
//! inverse. Generator indices follow the sorted vertex identifiers of Γ.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, Vertex};

/// A generator or its inverse, packed as `2 * generator + (inverse as u32)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: Vertex, inverse: bool) -> Self {
        Letter(2 * generator as u32 + inverse as u32)
    }

    pub fn generator(self) -> Vertex {
        (self.0 / 2) as Vertex
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

/// Two letters must keep their relative order in every equivalent word.
fn dependent(g: &DefiningGraph, x: Letter, y: Letter) -> bool {
    x.generator() == y.generator() || !g.has_edge(x.generator(), y.generator())
}

/// Appends `x` to a freely reduced word, cancelling it against an inverse
/// letter that commutations can bring next to it.
fn push_reduced(g: &DefiningGraph, word: &mut Vec<Letter>, x: Letter) {
    for j in (0..word.len()).rev() {
        let y = word[j];
        if y == x.inverse() {
            word.remove(j);
            return;
        }
        if dependent(g, x, y) {
            break;
        }
    }
    word.push(x);
}

/// Lexicographically least rearrangement of `word` by commutations.
fn lex_least(g: &DefiningGraph, word: &[Letter]) -> Vec<Letter> {
    let mut rest: Vec<Letter> = word.to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best = 0;
        for i in 1..rest.len() {
            if rest[i] < rest[best] && !rest[..i].iter().any(|&y| dependent(g, rest[i], y)) {
                best = i;
            }
        }
        out.push(rest.remove(best));
    }
    out
}

/// Normal form of an arbitrary letter sequence.
pub fn normalize(g: &DefiningGraph, letters: &[Letter]) -> Vec<Letter> {
    let mut word = Vec::with_capacity(letters.len());
    for &x in letters {
        push_reduced(g, &mut word, x);
    }
    lex_least(g, &word)
}

/// Normal form of the product of two normal forms.
pub fn multiply_words(g: &DefiningGraph, a: &[Letter], b: &[Letter]) -> Vec<Letter> {
    let mut word = a.to_vec();
    for &x in b {
        push_reduced(g, &mut word, x);
    }
    lex_least(g, &word)
}

pub fn invert_word(g: &DefiningGraph, a: &[Letter]) -> Vec<Letter> {
    let rev: Vec<Letter> = a.iter().rev().map(|x| x.inverse()).collect();
    lex_least(g, &rev)
}

/// Shortest representative of the coset `a⟨S⟩`: strip trailing `S`-letters
/// until none can be commuted to the end.
pub fn right_coset_rep(g: &DefiningGraph, a: &[Letter], in_s: impl Fn(Vertex) -> bool) -> Vec<Letter> {
    let mut word = a.to_vec();
    'strip: loop {
        for i in (0..word.len()).rev() {
            let x = word[i];
            if in_s(x.generator()) && word[i + 1..].iter().all(|&y| !dependent(g, x, y)) {
                word.remove(i);
                continue 'strip;
            }
        }
        break;
    }
    lex_least(g, &word)
}

/// Decides `a ∈ ⟨A⟩⟨B⟩`, returning a factorization `a = α β` when it holds.
///
/// `α` is the largest prefix (in the commutation order) made of `A`-letters;
/// membership holds iff every remaining letter lies in `B`.
pub fn split_double_coset(
    g: &DefiningGraph,
    a: &[Letter],
    in_a: impl Fn(Vertex) -> bool,
    in_b: impl Fn(Vertex) -> bool,
) -> Option<(Vec<Letter>, Vec<Letter>)> {
    let mut prefix = Vec::new();
    let mut rest: Vec<Letter> = Vec::new();
    for &x in a {
        if in_a(x.generator()) && !rest.iter().any(|&y| dependent(g, x, y)) {
            prefix.push(x);
        } else {
            rest.push(x);
        }
    }
    if rest.iter().all(|x| in_b(x.generator())) {
        Some((lex_least(g, &prefix), lex_least(g, &rest)))
    } else {
        None
    }
}

/// An element of `G(Γ)`, stored as its normal form.
#[derive(Clone)]
pub struct GroupElement {
    graph: Arc<DefiningGraph>,
    word: Vec<Letter>,
}

impl GroupElement {
    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<DefiningGraph> {
        &self.graph
    }

    pub fn letters(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    fn same_group(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph
    }

    fn with_word(&self, word: Vec<Letter>) -> Self {
        Self { graph: Arc::clone(&self.graph), word }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if !self.same_group(other) {
            return Err(Error::GroupMismatch);
        }
        Ok(self.with_word(multiply_words(&self.graph, &self.word, &other.word)))
    }

    /// `self · other` for elements already known to share a group.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.same_group(other));
        self.with_word(multiply_words(&self.graph, &self.word, &other.word))
    }

    pub fn inverse(&self) -> Self {
        self.with_word(invert_word(&self.graph, &self.word))
    }

    /// `self⁻¹ · other`.
    pub fn left_divide(&self, other: &Self) -> Self {
        self.inverse().mul(other)
    }

    /// Generators occurring in the normal form.
    pub fn support(&self) -> BTreeSet<Vertex> {
        self.word.iter().map(|x| x.generator()).collect()
    }

    pub fn in_special_subgroup(&self, s: &[Vertex]) -> bool {
        self.word.iter().all(|x| s.contains(&x.generator()))
    }

    /// Shortest representative of `self⟨S⟩`.
    pub fn coset_rep(&self, s: &[Vertex]) -> Self {
        self.with_word(right_coset_rep(&self.graph, &self.word, |v| s.contains(&v)))
    }

    /// `Some((α, β))` with `self = α β`, `α ∈ ⟨A⟩`, `β ∈ ⟨B⟩`, when possible.
    pub fn split_double_coset(&self, a: &[Vertex], b: &[Vertex]) -> Option<(Self, Self)> {
        split_double_coset(&self.graph, &self.word, |v| a.contains(&v), |v| b.contains(&v))
            .map(|(x, y)| (self.with_word(x), self.with_word(y)))
    }

    pub fn in_double_coset(&self, a: &[Vertex], b: &[Vertex]) -> bool {
        self.split_double_coset(a, b).is_some()
    }

    /// Power of a single generator.
    pub fn generator_power(&self, v: Vertex, k: i64) -> Self {
        let x = Letter::new(v, k < 0);
        self.with_word(vec![x; k.unsigned_abs() as usize])
    }

    /// `self · v^k`.
    pub fn times_generator(&self, v: Vertex, k: i64) -> Self {
        let mut word = self.word.clone();
        let x = Letter::new(v, k < 0);
        for _ in 0..k.unsigned_abs() {
            push_reduced(&self.graph, &mut word, x);
        }
        self.with_word(lex_least(&self.graph, &word))
    }

    pub fn identity_like(&self) -> Self {
        self.with_word(Vec::new())
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word && self.same_group(other)
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.word.hash(state);
    }
}

/// Shortlex order.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.word.len(), &self.word).cmp(&(other.word.len(), &other.word))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, x) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.graph.name(x.generator()))?;
            if x.is_inverse() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({self})")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `G(Γ)` for a fixed defining graph.
#[derive(Debug, Clone)]
pub struct Raag {
    graph: Arc<DefiningGraph>,
}

impl Raag {
    pub fn new(graph: DefiningGraph) -> Self {
        Self { graph: Arc::new(graph) }
    }

    pub fn from_arc(graph: Arc<DefiningGraph>) -> Self {
        Self { graph }
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<DefiningGraph> {
        &self.graph
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { graph: Arc::clone(&self.graph), word: Vec::new() }
    }

    pub fn generator(&self, v: Vertex) -> GroupElement {
        self.identity().generator_power(v, 1)
    }

    /// Normal form of a raw letter sequence.
    pub fn normal_form(&self, letters: &[Letter]) -> Result<GroupElement> {
        if let Some(x) = letters.iter().find(|x| x.generator() >= self.graph.vertex_count()) {
            return Err(Error::UnknownGenerator(format!("#{}", x.generator())));
        }
        Ok(GroupElement { graph: Arc::clone(&self.graph), word: normalize(&self.graph, letters) })
    }

    /// Parses whitespace-separated tokens `name`, `name^-1` or `name^k`.
    /// The empty string and `1` (when not a vertex name) denote the identity.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<Letter>> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if let Ok(v) = self.graph.vertex(token) {
                letters.push(Letter::new(v, false));
                continue;
            }
            if token == "1" {
                continue;
            }
            let Some((name, exp)) = token.rsplit_once('^') else {
                return Err(Error::UnknownGenerator(token.to_string()));
            };
            let v = self.graph.vertex(name).map_err(|_| Error::UnknownGenerator(name.to_string()))?;
            let k: i64 = exp.parse().map_err(|_| Error::BadToken(token.to_string()))?;
            if k == 0 {
                return Err(Error::BadToken(token.to_string()));
            }
            letters.extend(std::iter::repeat_n(Letter::new(v, k < 0), k.unsigned_abs() as usize));
        }
        Ok(letters)
    }

    pub fn parse(&self, text: &str) -> Result<GroupElement> {
        let letters = self.parse_letters(text)?;
        self.normal_form(&letters)
    }

    pub fn coset_key(&self, x: &GroupElement, kind: CosetKind) -> Result<CosetKey> {
        CosetKey::new(x, kind)
    }
}

/// Which special subgroup a coset is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CosetKind {
    Cone,
    Singular(Vertex),
    /// An edge `{u, w}` with `u < w`.
    Flat(Vertex, Vertex),
}

impl CosetKind {
    pub fn generators(self) -> Vec<Vertex> {
        match self {
            CosetKind::Cone => Vec::new(),
            CosetKind::Singular(u) => vec![u],
            CosetKind::Flat(u, w) => vec![u, w],
        }
    }
}

/// A coset `g⟨S⟩` for `S = ∅, {u}` or an edge `{u, w}`, keyed by its
/// shortest representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetKey {
    pub kind: CosetKind,
    pub representative: GroupElement,
}

impl CosetKey {
    pub fn new(x: &GroupElement, kind: CosetKind) -> Result<Self> {
        let g = x.graph();
        let kind = match kind {
            CosetKind::Cone => kind,
            CosetKind::Singular(u) => {
                if u >= g.vertex_count() {
                    return Err(Error::UnknownGenerator(format!("#{u}")));
                }
                kind
            }
            CosetKind::Flat(u, w) => {
                if u >= g.vertex_count() || w >= g.vertex_count() {
                    return Err(Error::UnknownGenerator(format!("#{}", u.max(w))));
                }
                if !g.has_edge(u, w) {
                    return Err(Error::NotAnEdge(g.name(u).into(), g.name(w).into()));
                }
                CosetKind::Flat(u.min(w), u.max(w))
            }
        };
        Ok(Self { kind, representative: x.coset_rep(&kind.generators()) })
    }
}

impl fmt::Display for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.representative.graph();
        match self.kind {
            CosetKind::Cone => write!(f, "{}", self.representative),
            CosetKind::Singular(u) => write!(f, "{}<{}>", self.representative, g.name(u)),
            CosetKind::Flat(u, w) => write!(f, "{}<{},{}>", self.representative, g.name(u), g.name(w)),
        }
    }
}

impl Serialize for CosetKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
