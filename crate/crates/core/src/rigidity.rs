//! Rigidity consequences as decision procedures: quasi-isometry
//! classification of atomic groups, the order of `Out(G)`, recovering a
//! graph isomorphism from an edge bijection, and the combined report.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::cycles::{check_whitehead_lemma, enumerate_cycles, enumerate_tight_cycles, is_tight, whitehead_graphs};
use crate::diagram::{build_diagram, is_taut, shell_report};
use crate::error::{Error, Result};
use crate::flat::{BallStats, FlatBall, FlatSpace};
use crate::graph::{AtomicityReport, DefiningGraph, Vertex};
use crate::iso::{automorphism_group_order, isomorphism, GraphIsomorphism};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum QiVerdict {
    /// Both atomic and isomorphic. `witness` lists `(source, target)` names.
    QuasiIsometricWithIsomorphism { witness: Vec<(String, String)> },
    NotQuasiIsometric,
    OutOfScope { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QiClassification {
    #[serde(flatten)]
    pub verdict: QiVerdict,
    pub first: AtomicityReport,
    pub second: AtomicityReport,
}

/// Atomic RAAGs are quasi-isometric exactly when their defining graphs are
/// isomorphic. Outside the atomic class nothing is claimed: a non-atomic
/// pair can be commensurable without being isomorphic.
pub fn classify_qi(g1: &DefiningGraph, g2: &DefiningGraph) -> Result<QiClassification> {
    let first = g1.check_atomic()?;
    let second = g2.check_atomic()?;
    let verdict = match (first.is_atomic, second.is_atomic) {
        (true, true) => match isomorphism(g1, g2) {
            Some(iso) => QiVerdict::QuasiIsometricWithIsomorphism { witness: iso.named_pairs(g1, g2) },
            None => QiVerdict::NotQuasiIsometric,
        },
        (a, b) => {
            let which: Vec<&str> = [(a, "first"), (b, "second")]
                .into_iter()
                .filter(|&(ok, _)| !ok)
                .map(|(_, w)| w)
                .collect();
            QiVerdict::OutOfScope {
                reason: format!("{} input not atomic; no quasi-isometry claim is made", which.join(" and ")),
            }
        }
    };
    Ok(QiClassification { verdict, first, second })
}

fn decimal<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutGroupReport {
    pub vertices: usize,
    /// Order of the kernel `H ≅ Z₂^V` (vertex inversions).
    #[serde(serialize_with = "decimal")]
    pub h_order: BigUint,
    pub aut_order: u64,
    #[serde(serialize_with = "decimal")]
    pub out_order: BigUint,
    pub extension: String,
}

/// For atomic `Γ`, `Out(G)` is an extension of `Aut(Γ)` by `Z₂^V`.
pub fn out_group(g: &DefiningGraph) -> Result<OutGroupReport> {
    if !g.check_atomic()?.is_atomic {
        return Err(Error::Precondition("out-group requires an atomic defining graph".into()));
    }
    let n = g.vertex_count();
    let h_order = BigUint::from(1u8) << n;
    let aut_order = automorphism_group_order(g);
    let out_order = &h_order * BigUint::from(aut_order);
    Ok(OutGroupReport {
        vertices: n,
        h_order,
        aut_order,
        out_order,
        extension: format!("1 -> Z_2^{n} -> Out(G) -> Aut(Gamma) -> 1, |Aut(Gamma)| = {aut_order}"),
    })
}

/// The edge bijection induced by a vertex isomorphism: entry `i` is the
/// index in `g2.edges()` of the image of `g1.edges()[i]`.
pub fn edge_map_of(iso: &GraphIsomorphism, g1: &DefiningGraph, g2: &DefiningGraph) -> Result<Vec<usize>> {
    g1.edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (iso.apply(a), iso.apply(b));
            g2.edge_index(x, y)
                .ok_or_else(|| Error::NotAnEdge(g2.name(x).to_string(), g2.name(y).to_string()))
        })
        .collect()
}

fn require_lemma_hypotheses(g: &DefiningGraph, which: &str) -> Result<()> {
    if let Some(v) = g.vertices().find(|&v| g.degree(v) < 2) {
        return Err(Error::Precondition(format!("{which} graph has vertex `{}` of valence < 2", g.name(v))));
    }
    if let Some(n) = g.girth().filter(|&n| n < 4) {
        return Err(Error::Precondition(format!("{which} graph has a cycle of length {n} < 4")));
    }
    Ok(())
}

fn share_vertex(a: (Vertex, Vertex), b: (Vertex, Vertex)) -> bool {
    a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
}

/// Recovers the vertex isomorphism behind an adjacency-preserving edge
/// bijection. Each vertex `v` goes to the common endpoint of the images of
/// the edges at `v`.
pub fn edges_to_isomorphism(g1: &DefiningGraph, g2: &DefiningGraph, f: &[usize]) -> Result<GraphIsomorphism> {
    require_lemma_hypotheses(g1, "source")?;
    require_lemma_hypotheses(g2, "target")?;
    let (e1, e2) = (g1.edges(), g2.edges());
    if f.len() != e1.len() || e1.len() != e2.len() {
        return Err(Error::Precondition(format!(
            "edge map has {} entries for {} source and {} target edges",
            f.len(),
            e1.len(),
            e2.len()
        )));
    }
    let mut hit = vec![false; e2.len()];
    for &j in f {
        if j >= e2.len() || std::mem::replace(&mut hit[j], true) {
            return Err(Error::Precondition("edge map is not a bijection".into()));
        }
    }
    let show = |g: &DefiningGraph, (a, b): (Vertex, Vertex)| format!("{{{}, {}}}", g.name(a), g.name(b));
    for i in 0..e1.len() {
        for j in i + 1..e1.len() {
            if share_vertex(e1[i], e1[j]) && !share_vertex(e2[f[i]], e2[f[j]]) {
                return Err(Error::Precondition(format!(
                    "edge map does not preserve adjacency: {} and {} meet but {} and {} do not",
                    show(g1, e1[i]),
                    show(g1, e1[j]),
                    show(g2, e2[f[i]]),
                    show(g2, e2[f[j]])
                )));
            }
        }
    }
    let mut map = Vec::with_capacity(g1.vertex_count());
    for v in g1.vertices() {
        let mut common: Option<BTreeSet<Vertex>> = None;
        for &w in g1.neighbors(v) {
            let (x, y) = e2[f[g1.edge_index(v, w).expect("neighbor edge")]];
            let ends = BTreeSet::from([x, y]);
            common = Some(match common {
                None => ends,
                Some(c) => c.intersection(&ends).copied().collect(),
            });
        }
        match common.map(|c| c.into_iter().collect::<Vec<_>>()).as_deref() {
            Some(&[w]) => map.push(w),
            _ => return Err(Error::NotInduced(format!("edges at `{}` have no single common image vertex", g1.name(v)))),
        }
    }
    let iso = GraphIsomorphism::from_map(map);
    if !iso.is_isomorphism(g1, g2) || edge_map_of(&iso, g1, g2)? != f {
        return Err(Error::NotInduced("the vertex map does not induce the edge map".into()));
    }
    Ok(iso)
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    /// Longest embedded cycle sampled for the taut check.
    pub max_sample_len: usize,
    /// Number of sampled cycles for the taut check.
    pub taut_samples: usize,
    pub ball_radius: u32,
    pub exponent_bound: u32,
    /// Tight cycles listed by name; the count is always exact.
    pub list_limit: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { max_sample_len: 9, taut_samples: 24, ball_radius: 4, exponent_bound: 1, list_limit: 50 }
    }
}

/// One report section. Failures stay inside their section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section<T> {
    Ok { value: T },
    Skipped { reason: String },
    Error { message: String },
}

impl<T> Section<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(value) => Section::Ok { value },
            Err(e) => Section::Error { message: e.to_string() },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Section::Ok { value } => Some(value),
            _ => None,
        }
    }

    fn label(&self) -> String {
        match self {
            Section::Ok { .. } => "ok".into(),
            Section::Skipped { reason } => format!("skipped ({reason})"),
            Section::Error { message } => format!("error ({message})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub girth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightCycleSection {
    pub max_len: usize,
    pub count: usize,
    pub cycles: Vec<Vec<String>>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhiteheadEntry {
    pub vertex: String,
    pub edges: Vec<(String, String)>,
    pub connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhiteheadSection {
    pub graphs: Vec<WhiteheadEntry>,
    pub lemma_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TautSample {
    pub cycle: Vec<String>,
    pub tight: bool,
    pub taut: bool,
    pub core_size: usize,
    pub shell_score: i64,
    pub checks_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TautSection {
    pub samples: Vec<TautSample>,
    /// Every taut sample has a single-cell core and every diagram passes
    /// its structural checks.
    pub pass: bool,
    /// Samples where tightness in the graph and tautness of the lift differ.
    pub tight_taut_mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportBundle {
    pub graph: GraphSummary,
    pub atomicity: Section<AtomicityReport>,
    pub tight_cycles: Section<TightCycleSection>,
    pub whitehead: Section<WhiteheadSection>,
    pub flat_ball: Section<BallStats>,
    pub taut: Section<TautSection>,
    pub out_group: Section<OutGroupReport>,
}

impl ReportBundle {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "graph: {} vertices, {} edges, girth {}\n",
            self.graph.vertices.len(),
            self.graph.edges.len(),
            self.graph.girth.map_or("none".to_string(), |g| g.to_string())
        );
        match self.atomicity.value() {
            Some(a) => out += &format!("atomic: {}\n", a.is_atomic),
            None => out += &format!("atomicity: {}\n", self.atomicity.label()),
        }
        match self.tight_cycles.value() {
            Some(t) => out += &format!("tight cycles (length <= {}): {}\n", t.max_len, t.count),
            None => out += &format!("tight cycles: {}\n", self.tight_cycles.label()),
        }
        match self.whitehead.value() {
            Some(w) => {
                let connected = w.graphs.iter().filter(|e| e.connected).count();
                out += &format!(
                    "whitehead graphs: {connected}/{} connected, lemma holds: {}\n",
                    w.graphs.len(),
                    w.lemma_holds
                );
            }
            None => out += &format!("whitehead: {}\n", self.whitehead.label()),
        }
        match self.flat_ball.value() {
            Some(b) => {
                out += &format!(
                    "flat ball radius {}: {} cone, {} singular, {} flat, {} squares, links pass: {}\n",
                    b.radius,
                    b.cone_vertices,
                    b.singular_vertices,
                    b.flat_vertices,
                    b.squares,
                    b.links.pass()
                )
            }
            None => out += &format!("flat ball: {}\n", self.flat_ball.label()),
        }
        match self.taut.value() {
            Some(t) => {
                out += &format!(
                    "taut samples: {}, pass: {}, tight/taut mismatches: {}\n",
                    t.samples.len(),
                    t.pass,
                    t.tight_taut_mismatches
                )
            }
            None => out += &format!("taut: {}\n", self.taut.label()),
        }
        match self.out_group.value() {
            Some(o) => out += &format!("|Out(G)| = 2^{} * {} = {}\n", o.vertices, o.aut_order, o.out_order),
            None => out += &format!("out group: {}\n", self.out_group.label()),
        }
        out
    }
}

fn names(g: &DefiningGraph, vs: &[Vertex]) -> Vec<String> {
    vs.iter().map(|&v| g.name(v).to_string()).collect()
}

fn edge_names(g: &DefiningGraph, es: impl IntoIterator<Item = (Vertex, Vertex)>) -> Vec<(String, String)> {
    es.into_iter().map(|(a, b)| (g.name(a).to_string(), g.name(b).to_string())).collect()
}

fn taut_section(g: &DefiningGraph, opts: &ReportOptions) -> Result<TautSection> {
    let space = FlatSpace::new(g.clone())?;
    let mut samples = Vec::new();
    for c in enumerate_cycles(g, opts.max_sample_len).into_iter().take(opts.taut_samples) {
        let lift = space.lift_cycle(&c)?;
        let taut = is_taut(&space, &lift)?;
        let d = build_diagram(&space, &lift)?;
        let shells = shell_report(&d)?;
        samples.push(TautSample {
            cycle: c.names(g),
            tight: is_tight(g, &c),
            taut,
            core_size: d.core_size(),
            shell_score: shells.total_score,
            checks_pass: d.checks.pass() && shells.consistent(),
        });
    }
    let pass = samples.iter().all(|s| s.checks_pass && (!s.taut || s.core_size == 1));
    let tight_taut_mismatches = samples.iter().filter(|s| s.tight != s.taut).count();
    Ok(TautSection { samples, pass, tight_taut_mismatches })
}

/// Runs every analysis on `g`. Sections that need an atomic graph are
/// skipped for non-atomic input; errors are recorded per section.
pub fn run_report(g: &DefiningGraph, opts: &ReportOptions) -> ReportBundle {
    let graph = GraphSummary {
        vertices: g.names().to_vec(),
        edges: edge_names(g, g.edges().iter().copied()),
        girth: g.girth(),
    };
    let atomicity = Section::from_result(g.check_atomic());
    let atomic = atomicity.value().is_some_and(|a| a.is_atomic);
    let gate = |what: &str| -> Option<String> {
        (!atomic).then(|| format!("{what} requires an atomic graph"))
    };

    let max_len = g.vertex_count();
    let tight_cycles = Section::from_result(if g.vertex_count() == 0 {
        Err(Error::EmptyGraph)
    } else {
        let all = enumerate_tight_cycles(g, max_len);
        Ok(TightCycleSection {
            max_len,
            count: all.len(),
            cycles: all.iter().take(opts.list_limit).map(|c| names(g, c.vertices())).collect(),
            truncated: all.len() > opts.list_limit,
        })
    });

    let whitehead = match gate("whitehead") {
        Some(reason) => Section::Skipped { reason },
        None => Section::from_result(check_whitehead_lemma(g).map(|lemma| WhiteheadSection {
            graphs: whitehead_graphs(g, max_len)
                .iter()
                .map(|wh| WhiteheadEntry {
                    vertex: g.name(wh.vertex).to_string(),
                    edges: edge_names(g, wh.edges.iter().copied()),
                    connected: wh.is_connected(),
                })
                .collect(),
            lemma_holds: lemma.pass,
        })),
    };

    let flat_ball = Section::from_result(
        FlatSpace::new(g.clone())
            .and_then(|s| FlatBall::build(&s, opts.ball_radius, opts.exponent_bound))
            .map(|b| b.stats()),
    );

    let taut = match gate("taut verification") {
        Some(reason) => Section::Skipped { reason },
        None => Section::from_result(taut_section(g, opts)),
    };

    let out_group = match gate("out-group") {
        Some(reason) => Section::Skipped { reason },
        None => Section::from_result(out_group(g)),
    };

    ReportBundle { graph, atomicity, tight_cycles, whitehead, flat_ball, taut, out_group }
}
