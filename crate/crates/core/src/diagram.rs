//! Dual disk diagrams of full-edge cycles in `F`.
//!
//! The boundary cycle has `2n` edges, each dual to a hyperplane. A diagram
//! pairs the crossings of each hyperplane by chords of the disk; chords of
//! the same hyperplane never meet, and chords of different hyperplanes may
//! cross only if their hyperplanes cross. Regions of the chord arrangement
//! carry vertices of `F`, propagated inward from the boundary.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat::{
    vertex_type, FlatSpace, FullEdgeCycle, FullEdgePath, HyperplaneKey, StabilizerKey, VertexType,
};
use crate::word::{CosetKey, CosetKind};

/// Upper bound on candidate matchings examined for one boundary.
pub const MATCHING_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chord {
    /// Boundary edges joined by the chord, `ends.0 < ends.1`.
    pub ends: (usize, usize),
    pub hyperplane: HyperplaneKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Side {
    pub chord: usize,
    pub neighbor: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub vertex: CosetKey,
    pub kind: VertexType,
    /// Boundary vertex positions lying in the region.
    pub boundary: Vec<usize>,
    /// Chord segments around the region, in cyclic order.
    pub sides: Vec<Side>,
}

impl Region {
    pub fn is_internal(&self) -> bool {
        self.boundary.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct DiagramChecks {
    pub crossing_types: bool,
    pub arc_sides: bool,
    pub no_separating_cells: bool,
    pub cone_regions_interior: bool,
    pub core_nonempty: bool,
    pub violations: Vec<String>,
}

impl DiagramChecks {
    pub fn pass(&self) -> bool {
        self.crossing_types && self.arc_sides && self.no_separating_cells && self.cone_regions_interior && self.core_nonempty
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskDiagram {
    pub boundary: FullEdgeCycle,
    pub chords: Vec<Chord>,
    pub crossings: Vec<(usize, usize)>,
    pub regions: Vec<Region>,
    pub core: Vec<usize>,
    /// Whether no other admissible pairing has as few crossings.
    pub unique: bool,
    /// Pairings giving a consistent diagram, of any area.
    pub admissible_pairings: usize,
    pub candidates_examined: usize,
    pub checks: DiagramChecks,
    #[serde(skip)]
    layout: Layout,
}

#[derive(Debug, Clone, Default)]
struct Layout {
    positions: Vec<(f64, f64)>,
    edges: Vec<(usize, usize)>,
    node_count_boundary: usize,
}

/// A pairing of boundary edges, as partner indices.
type Matching = Vec<usize>;

struct Boundary<'a> {
    space: &'a FlatSpace,
    cycle: &'a FullEdgeCycle,
    hyperplanes: Vec<HyperplaneKey>,
    /// Boundary edges grouped by hyperplane, in boundary order.
    groups: Vec<Vec<usize>>,
    cross: HashMap<(usize, usize), bool>,
    group_of: Vec<usize>,
}

impl<'a> Boundary<'a> {
    fn new(space: &'a FlatSpace, cycle: &'a FullEdgeCycle) -> Result<Self> {
        let v = cycle.vertices();
        let n = v.len();
        let hyperplanes = (0..n)
            .map(|k| space.hyperplane_of_edge(&v[k], &v[(k + 1) % n]))
            .collect::<Result<Vec<_>>>()?;
        let mut by_key: BTreeMap<&HyperplaneKey, Vec<usize>> = BTreeMap::new();
        for (k, h) in hyperplanes.iter().enumerate() {
            by_key.entry(h).or_default().push(k);
        }
        let groups: Vec<Vec<usize>> = by_key.into_values().collect();
        let mut group_of = vec![0; n];
        for (gi, grp) in groups.iter().enumerate() {
            if grp.len() % 2 == 1 {
                return Err(Error::Invariant(format!(
                    "boundary crosses hyperplane {} an odd number of times",
                    hyperplanes[grp[0]].coset
                )));
            }
            for &k in grp {
                group_of[k] = gi;
            }
        }
        let mut cross = HashMap::new();
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let c = space.hyperplanes_cross(&hyperplanes[groups[a][0]], &hyperplanes[groups[b][0]]);
                cross.insert((a, b), c);
            }
        }
        Ok(Self { space, cycle, hyperplanes, groups, cross, group_of })
    }

    fn groups_cross(&self, a: usize, b: usize) -> bool {
        a != b && self.cross[&(a.min(b), a.max(b))]
    }
}

/// Non-crossing perfect matchings of points in linear order.
fn noncrossing_matchings(points: &[usize], out: &mut Vec<Vec<(usize, usize)>>, limit: usize) {
    fn rec(points: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if points.is_empty() {
            out.push(acc.clone());
            return;
        }
        for j in (1..points.len()).step_by(2) {
            let inner = &points[1..j];
            let outer = &points[j + 1..];
            let mut inner_all = Vec::new();
            rec(inner, &mut Vec::new(), &mut inner_all, limit);
            for m in inner_all {
                let base = acc.len();
                acc.push((points[0], points[j]));
                acc.extend(m);
                rec(outer, acc, out, limit);
                acc.truncate(base);
                if out.len() >= limit {
                    return;
                }
            }
        }
    }
    rec(points, &mut Vec::new(), out, limit);
}

fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0 < x && x < a.1;
    inside(b.0) != inside(b.1)
}

fn chords_of(m: &Matching) -> Vec<(usize, usize)> {
    (0..m.len()).filter(|&k| k < m[k]).map(|k| (k, m[k])).collect()
}

/// Interleaving pairs of chords whose hyperplanes do not cross, and the
/// total number of interleaving pairs.
fn matching_cost(b: &Boundary, m: &Matching) -> (usize, usize) {
    let chords = chords_of(m);
    let mut bad = 0;
    let mut inter = 0;
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if interleave(chords[i], chords[j]) {
                inter += 1;
                if !b.groups_cross(b.group_of[chords[i].0], b.group_of[chords[j].0]) {
                    bad += 1;
                }
            }
        }
    }
    (bad, inter)
}

struct Arrangement {
    /// Rotation (counterclockwise) at each node.
    rot: Vec<Vec<usize>>,
    /// Chord owning each undirected segment.
    segment: HashMap<(usize, usize), usize>,
    /// Node sequence of each chord from its lower end.
    chord_nodes: Vec<Vec<usize>>,
    crossings: Vec<(usize, usize)>,
    positions: Vec<(f64, f64)>,
}

/// Nodes: boundary vertices `0..N`, chord ends `N..2N`, then crossings.
fn arrange(n: usize, chords: &[(usize, usize)]) -> Arrangement {
    let angle = |x: f64| {
        let t = std::f64::consts::TAU * x / n as f64;
        (t.cos(), t.sin())
    };
    let mut positions: Vec<(f64, f64)> = (0..n).map(|k| angle(k as f64)).collect();
    positions.extend((0..n).map(|k| angle(k as f64 + 0.5)));
    let mut crossings = Vec::new();
    let mut cross_node: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if interleave(chords[i], chords[j]) {
                let id = 2 * n + crossings.len();
                crossings.push((i, j));
                cross_node.insert((i, j), id);
                cross_node.insert((j, i), id);
                positions.push(intersect(
                    positions[n + chords[i].0],
                    positions[n + chords[i].1],
                    positions[n + chords[j].0],
                    positions[n + chords[j].1],
                ));
            }
        }
    }
    let total = 2 * n + crossings.len();
    let mut chord_nodes = Vec::with_capacity(chords.len());
    for (i, &(a, b)) in chords.iter().enumerate() {
        let mut inner: Vec<(usize, usize)> = (0..chords.len())
            .filter(|&j| j != i && interleave(chords[i], chords[j]))
            .map(|j| {
                let (p0, p1) = chords[j];
                let p = if a < p0 && p0 < b { p0 } else { p1 };
                (p, cross_node[&(i, j)])
            })
            .collect();
        inner.sort_unstable();
        let mut seq = vec![n + a];
        seq.extend(inner.into_iter().map(|(_, x)| x));
        seq.push(n + b);
        chord_nodes.push(seq);
    }
    let mut rot = vec![Vec::new(); total];
    for k in 0..n {
        rot[k] = vec![n + k, n + (k + n - 1) % n];
    }
    let mut segment = HashMap::new();
    let mut along: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (ci, seq) in chord_nodes.iter().enumerate() {
        for w in seq.windows(2) {
            segment.insert((w[0].min(w[1]), w[0].max(w[1])), ci);
        }
        for (idx, &x) in seq.iter().enumerate() {
            let prev = if idx > 0 { seq[idx - 1] } else { usize::MAX };
            let next = if idx + 1 < seq.len() { seq[idx + 1] } else { usize::MAX };
            along.insert((ci, x), (prev, next));
        }
    }
    for (ci, &(a, b)) in chords.iter().enumerate() {
        let (_, first) = along[&(ci, n + a)];
        rot[n + a] = vec![(a + 1) % n, first, a];
        let (last, _) = along[&(ci, n + b)];
        rot[n + b] = vec![(b + 1) % n, last, b];
    }
    for &(i, j) in &crossings {
        let x = cross_node[&(i, j)];
        let (a, b) = chords[i];
        let (p0, _) = chords[j];
        let (toward_a, toward_b) = along[&(i, x)];
        let (toward_lo, toward_hi) = along[&(j, x)];
        let (toward_p, toward_q) = if a < p0 && p0 < b { (toward_lo, toward_hi) } else { (toward_hi, toward_lo) };
        rot[x] = vec![toward_b, toward_q, toward_a, toward_p];
    }
    Arrangement { rot, segment, chord_nodes, crossings, positions }
}

fn intersect(p1: (f64, f64), p2: (f64, f64), p3: (f64, f64), p4: (f64, f64)) -> (f64, f64) {
    let d = (p1.0 - p2.0) * (p3.1 - p4.1) - (p1.1 - p2.1) * (p3.0 - p4.0);
    if d.abs() < 1e-12 {
        return ((p1.0 + p2.0) / 2.0, (p1.1 + p2.1) / 2.0);
    }
    let a = p1.0 * p2.1 - p1.1 * p2.0;
    let b = p3.0 * p4.1 - p3.1 * p4.0;
    ((a * (p3.0 - p4.0) - (p1.0 - p2.0) * b) / d, (a * (p3.1 - p4.1) - (p1.1 - p2.1) * b) / d)
}

struct Faces {
    /// Face of each directed half-edge.
    face_of: HashMap<(usize, usize), usize>,
    cycles: Vec<Vec<(usize, usize)>>,
    outer: usize,
}

fn trace_faces(rot: &[Vec<usize>], n: usize) -> Faces {
    let mut face_of = HashMap::new();
    let mut cycles = Vec::new();
    for u in 0..rot.len() {
        for &v in &rot[u] {
            if face_of.contains_key(&(u, v)) {
                continue;
            }
            let id = cycles.len();
            let mut cyc = Vec::new();
            let (mut a, mut b) = (u, v);
            while !face_of.contains_key(&(a, b)) {
                face_of.insert((a, b), id);
                cyc.push((a, b));
                let r = &rot[b];
                let i = r.iter().position(|&x| x == a).expect("rotation is symmetric");
                let c = r[(i + r.len() - 1) % r.len()];
                (a, b) = (b, c);
            }
            cycles.push(cyc);
        }
    }
    let outer = face_of[&(n, 0)];
    Faces { face_of, cycles, outer }
}

struct Labeled {
    arrangement: Arrangement,
    faces: Faces,
    labels: Vec<Option<CosetKey>>,
}

impl Labeled {
    /// Regions sharing their `F`-vertex with another region.
    fn repeated_vertices(&self) -> usize {
        let mut seen = BTreeSet::new();
        (0..self.labels.len())
            .filter(|&f| f != self.faces.outer)
            .filter(|&f| !seen.insert(self.labels[f].as_ref().expect("labeled")))
            .count()
    }
}

/// Labels every region; `Err` describes the first inconsistency.
fn label_regions(b: &Boundary, chords: &[(usize, usize)]) -> std::result::Result<Labeled, String> {
    let v = b.cycle.vertices();
    let n = v.len();
    let arrangement = arrange(n, chords);
    let faces = trace_faces(&arrangement.rot, n);
    let mut labels: Vec<Option<CosetKey>> = vec![None; faces.cycles.len()];
    let mut queue = VecDeque::new();
    for k in 0..n {
        let f = faces.face_of[&(k, n + k)];
        match &labels[f] {
            Some(existing) if existing != &v[k] => {
                return Err(format!("region holds boundary vertices {existing} and {}", v[k]));
            }
            Some(_) => {}
            None => {
                labels[f] = Some(v[k].clone());
                queue.push_back(f);
            }
        }
    }
    while let Some(f) = queue.pop_front() {
        let here = labels[f].clone().expect("queued regions are labeled");
        for &(x, y) in &faces.cycles[f] {
            let Some(&ci) = arrangement.segment.get(&(x.min(y), x.max(y))) else { continue };
            let g = faces.face_of[&(y, x)];
            let h = &b.hyperplanes[chords[ci].0];
            let there = b.space.across(h, &here).map_err(|e| e.to_string())?;
            match &labels[g] {
                Some(existing) if *existing != there => {
                    return Err(format!("region across {here} is both {existing} and {there}"));
                }
                Some(_) => {}
                None => {
                    labels[g] = Some(there);
                    queue.push_back(g);
                }
            }
        }
    }
    let l = Labeled { arrangement, faces, labels };
    if let Some(msg) = cancelable_pair(&l, n) {
        return Err(msg);
    }
    Ok(l)
}

/// Two crossings joined by a chord segment whose squares coincide in `F`.
fn cancelable_pair(l: &Labeled, n: usize) -> Option<String> {
    let square = |x: usize| -> BTreeSet<&CosetKey> {
        l.arrangement.rot[x]
            .iter()
            .map(|&y| l.labels[l.faces.face_of[&(x, y)]].as_ref().expect("labeled"))
            .collect()
    };
    for seq in &l.arrangement.chord_nodes {
        for w in seq.windows(2) {
            if w[0] >= 2 * n && w[1] >= 2 * n && square(w[0]) == square(w[1]) {
                return Some("adjacent squares fold onto one square".into());
            }
        }
    }
    None
}

/// Builds the dual disk diagram of an embedded full-edge cycle.
pub fn build_diagram(space: &FlatSpace, cycle: &FullEdgeCycle) -> Result<DiskDiagram> {
    let b = Boundary::new(space, cycle)?;
    let mut per_group: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    let mut total: usize = 1;
    for grp in &b.groups {
        let mut ms = Vec::new();
        noncrossing_matchings(grp, &mut ms, MATCHING_LIMIT + 1);
        total = total.saturating_mul(ms.len());
        per_group.push(ms);
    }
    if total > MATCHING_LIMIT {
        return Err(Error::Precondition(format!("{total} candidate pairings exceed the search limit")));
    }
    let n = cycle.vertices().len();
    let mut best: Option<(((usize, usize), Vec<(usize, usize)>), Labeled)> = None;
    let mut valid = 0usize;
    let mut tied = 0usize;
    let mut choice = vec![0usize; per_group.len()];
    let mut examined = 0usize;
    loop {
        examined += 1;
        let mut m: Matching = vec![usize::MAX; n];
        for (gi, &c) in choice.iter().enumerate() {
            for &(x, y) in &per_group[gi][c] {
                m[x] = y;
                m[y] = x;
            }
        }
        let (bad, inter) = matching_cost(&b, &m);
        if bad == 0 {
            let chords = chords_of(&m);
            if let Ok(l) = label_regions(&b, &chords) {
                valid += 1;
                let area = (inter, l.repeated_vertices());
                match &best {
                    Some((r, _)) if r.0 == area => tied += 1,
                    _ => {}
                }
                let rank = (area, chords);
                if best.as_ref().is_none_or(|(r, _)| rank < *r) {
                    if best.as_ref().is_none_or(|(r, _)| area < r.0) {
                        tied = 1;
                    }
                    best = Some((rank, l));
                }
            }
        }
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < per_group[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    let Some(((_, chords), labeled)) = best else {
        return Err(Error::Invariant("no chord pairing gives a consistent diagram".into()));
    };
    Ok(assemble(&b, chords, labeled, tied == 1, valid, examined))
}

fn assemble(
    b: &Boundary,
    pairs: Vec<(usize, usize)>,
    l: Labeled,
    unique: bool,
    admissible: usize,
    examined: usize,
) -> DiskDiagram {
    let n = b.cycle.vertices().len();
    let Labeled { arrangement, faces, labels } = l;
    let mut checks = DiagramChecks {
        crossing_types: true,
        arc_sides: true,
        no_separating_cells: true,
        cone_regions_interior: true,
        core_nonempty: true,
        violations: Vec::new(),
    };
    let mut fail = |flag: &mut bool, msg: String| {
        *flag = false;
        checks.violations.push(msg);
    };

    // region ids skip the outer face
    let mut region_id = vec![usize::MAX; faces.cycles.len()];
    let mut next = 0;
    for f in 0..faces.cycles.len() {
        if f != faces.outer {
            region_id[f] = next;
            next += 1;
        }
    }
    let mut regions = Vec::with_capacity(next);
    for f in 0..faces.cycles.len() {
        if f == faces.outer {
            continue;
        }
        let vertex = labels[f].clone().expect("every region is reached from the boundary");
        let boundary: Vec<usize> = faces.cycles[f].iter().filter(|&&(x, _)| x < n).map(|&(x, _)| x).collect();
        let sides = faces.cycles[f]
            .iter()
            .filter_map(|&(x, y)| {
                arrangement.segment.get(&(x.min(y), x.max(y))).map(|&chord| Side {
                    chord,
                    neighbor: region_id[faces.face_of[&(y, x)]],
                })
            })
            .collect();
        if boundary.len() > 1 {
            fail(&mut checks.no_separating_cells, format!("region {vertex} meets the boundary {} times", boundary.len()));
        }
        if vertex_type(&vertex) == VertexType::Cone && !boundary.is_empty() {
            fail(&mut checks.cone_regions_interior, format!("cone region {vertex} touches the boundary"));
        }
        regions.push(Region { kind: vertex_type(&vertex), vertex, boundary, sides });
    }
    let region_of = |a: usize, c: usize| region_id[faces.face_of[&(a, c)]];

    for (ci, &(i, j)) in arrangement.crossings.iter().enumerate() {
        let x = 2 * n + ci;
        let around: Vec<usize> = arrangement.rot[x].iter().map(|&y| region_of(x, y)).collect();
        let t: Vec<VertexType> = around.iter().map(|&r| regions[r].kind).collect();
        let ok = (0..2).any(|s| {
            t[s] == VertexType::Singular
                && t[s + 2] == VertexType::Singular
                && BTreeSet::from([t[s + 1], t[(s + 3) % 4]]) == BTreeSet::from([VertexType::Cone, VertexType::Flat])
        });
        let square = ok && {
            let keys: Vec<&CosetKey> = around.iter().map(|&r| &regions[r].vertex).collect();
            (0..4).all(|s| b.space.adjacent(keys[s], keys[(s + 1) % 4]))
        };
        if !square {
            fail(&mut checks.crossing_types, format!("crossing of chords {i} and {j} is not a typed square"));
        }
    }

    for (ci, seq) in arrangement.chord_nodes.iter().enumerate() {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for w in seq.windows(2) {
            left.push(region_of(w[0], w[1]));
            right.push(region_of(w[1], w[0]));
        }
        left.dedup();
        right.dedup();
        let kinds = |rs: &[usize]| rs.iter().map(|&r| regions[r].kind).collect::<BTreeSet<_>>();
        let (kl, kr) = (kinds(&left), kinds(&right));
        let cone_side = BTreeSet::from([VertexType::Cone, VertexType::Singular]);
        let flat_side = BTreeSet::from([VertexType::Singular, VertexType::Flat]);
        let flat_regions = if kl.is_subset(&cone_side) && kr.is_subset(&flat_side) && !kr.is_subset(&cone_side) {
            Some(&right)
        } else if kr.is_subset(&cone_side) && kl.is_subset(&flat_side) && !kl.is_subset(&cone_side) {
            Some(&left)
        } else if kl.is_subset(&cone_side) && kr.is_subset(&cone_side) {
            // only singulars on one side: single-segment chord between singulars cannot happen
            None
        } else {
            None
        };
        let stalling = flat_regions.is_some_and(|rs| side_is_stalling(b.space, &regions, rs, &b.hyperplanes[pairs[ci].0]));
        if !stalling {
            fail(&mut checks.arc_sides, format!("sides of chord {ci} do not split into cone and stalling sides"));
        }
    }

    let core: Vec<usize> = (0..regions.len()).filter(|&r| regions[r].is_internal()).collect();
    if core.is_empty() {
        fail(&mut checks.core_nonempty, "the core is empty".into());
    }
    let chords = pairs.iter().map(|&(a, c)| Chord { ends: (a, c), hyperplane: b.hyperplanes[a].clone() }).collect();
    let crossings = arrangement.crossings.clone();
    let layout = Layout {
        positions: arrangement.positions.clone(),
        edges: arrangement.chord_nodes.iter().flat_map(|s| s.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>()).collect(),
        node_count_boundary: n,
    };
    DiskDiagram {
        boundary: b.cycle.clone(),
        chords,
        crossings,
        regions,
        core,
        unique,
        admissible_pairings: admissible,
        candidates_examined: examined,
        checks,
        layout,
    }
}

/// The flat side of a chord of hyperplane `(x, g⟨Lk x⟩)`: singular regions
/// of type `x` with one stabilizer, and flats in that parallel set.
fn side_is_stalling(space: &FlatSpace, regions: &[Region], side: &[usize], h: &HyperplaneKey) -> bool {
    let mut class: Option<StabilizerKey> = None;
    for &r in side {
        if regions[r].kind == VertexType::Singular {
            let Ok(k) = space.stabilizer_key(&regions[r].vertex) else { return false };
            if k.generator != h.generator || class.as_ref().is_some_and(|c| *c != k) {
                return false;
            }
            class = Some(k);
        }
    }
    side.iter().filter(|&&r| regions[r].kind == VertexType::Flat).all(|&r| {
        space.flat_classes(&regions[r].vertex).is_ok_and(|cs| {
            cs.iter().any(|c| c.generator == h.generator && class.as_ref().is_none_or(|k| k == c))
        })
    })
}

impl DiskDiagram {
    pub fn core_size(&self) -> usize {
        self.core.len()
    }

    /// Planar layout in DOT: boundary points on a circle, chords straight.
    pub fn to_dot(&self) -> String {
        let n = self.layout.node_count_boundary;
        let v = self.boundary.vertices();
        let mut out = String::from("graph disk_diagram {\n  node [shape=point];\n");
        for (i, &(x, y)) in self.layout.positions.iter().enumerate() {
            let label = if i < n { format!(", xlabel=\"{}\"", v[i]) } else { String::new() };
            let _ = writeln!(out, "  n{i} [pos=\"{:.3},{:.3}!\"{label}];", 4.0 * x, 4.0 * y);
        }
        for k in 0..n {
            let _ = writeln!(out, "  n{k} -- n{} [color=gray];", n + k);
            let _ = writeln!(out, "  n{} -- n{} [color=gray];", n + k, (k + 1) % n);
        }
        for &(a, b) in &self.layout.edges {
            let _ = writeln!(out, "  n{a} -- n{b};");
        }
        for (r, region) in self.regions.iter().enumerate() {
            let _ = writeln!(out, "  // region {r}: {} ({:?})", region.vertex, region.kind);
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellClass {
    #[serde(rename = "0-shell")]
    Shell0,
    #[serde(rename = "1-shell")]
    Shell1,
    #[serde(rename = "2-shell")]
    Shell2,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellCase {
    SingleCell,
    Two1shells,
    One1shellTwo2shells,
    Four2shells,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreRegionRecord {
    pub region: usize,
    pub vertex: String,
    pub sides: usize,
    pub boundary_corners: usize,
    pub internal_edges: usize,
    pub score: i64,
    pub class: ShellClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreComponent {
    pub regions: Vec<usize>,
    pub total_score: i64,
    pub case: ShellCase,
    pub ladder: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShellReport {
    pub records: Vec<CoreRegionRecord>,
    pub components: Vec<CoreComponent>,
    pub total_score: i64,
    pub case: ShellCase,
    pub ladder: bool,
}

impl ShellReport {
    /// Every component scores at least 4, and a component with exactly two
    /// 1-shells and no 2-shells is a ladder.
    pub fn consistent(&self) -> bool {
        self.components.iter().all(|c| {
            let shells = |k| c.regions.iter().filter(|&&r| self.record(r).is_some_and(|x| x.class == k)).count();
            let ladder_ok = !(shells(ShellClass::Shell1) == 2 && shells(ShellClass::Shell2) == 0) || c.ladder;
            c.total_score >= 4 && c.case != ShellCase::Other && ladder_ok
        })
    }

    fn record(&self, region: usize) -> Option<&CoreRegionRecord> {
        self.records.iter().find(|r| r.region == region)
    }
}

fn shell_case(regions: usize, classes: &[ShellClass]) -> ShellCase {
    let count = |k| classes.iter().filter(|&&c| c == k).count();
    if regions == 1 {
        ShellCase::SingleCell
    } else if count(ShellClass::Shell1) >= 2 {
        ShellCase::Two1shells
    } else if count(ShellClass::Shell1) >= 1 && count(ShellClass::Shell2) >= 2 {
        ShellCase::One1shellTwo2shells
    } else if count(ShellClass::Shell2) >= 4 {
        ShellCase::Four2shells
    } else {
        ShellCase::Other
    }
}

pub fn shell_report(d: &DiskDiagram) -> Result<ShellReport> {
    if d.core.is_empty() {
        return Err(Error::Precondition("the diagram has an empty core".into()));
    }
    let in_core: BTreeSet<usize> = d.core.iter().copied().collect();
    let mut records = Vec::new();
    for &r in &d.core {
        let sides = &d.regions[r].sides;
        let n = sides.len();
        let external: Vec<bool> = sides.iter().map(|s| !in_core.contains(&s.neighbor)).collect();
        let corners = (0..n).filter(|&i| external[i] && external[(i + 1) % n]).count();
        let internal = external.iter().filter(|e| !**e).count();
        let score = corners as i64 - n as i64 + 4;
        let class = match score {
            4 => ShellClass::Shell0,
            2 => ShellClass::Shell1,
            1 => ShellClass::Shell2,
            _ => ShellClass::None,
        };
        records.push(CoreRegionRecord {
            region: r,
            vertex: d.regions[r].vertex.to_string(),
            sides: n,
            boundary_corners: corners,
            internal_edges: internal,
            score,
            class,
        });
    }
    let class_of: HashMap<usize, ShellClass> = records.iter().map(|x| (x.region, x.class)).collect();
    let score_of: HashMap<usize, i64> = records.iter().map(|x| (x.region, x.score)).collect();
    let nbrs = |r: usize| -> BTreeSet<usize> {
        d.regions[r].sides.iter().map(|s| s.neighbor).filter(|x| in_core.contains(x)).collect()
    };
    let mut components = Vec::new();
    let mut seen = BTreeSet::new();
    for &r in &d.core {
        if !seen.insert(r) {
            continue;
        }
        let mut comp = vec![r];
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            for y in nbrs(x) {
                if seen.insert(y) {
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        let classes: Vec<ShellClass> = comp.iter().map(|x| class_of[x]).collect();
        let degrees: Vec<usize> = comp.iter().map(|&x| nbrs(x).len()).collect();
        let ladder = comp.len() >= 2
            && degrees.iter().filter(|&&k| k == 1).count() == 2
            && degrees.iter().all(|&k| k == 1 || k == 2);
        components.push(CoreComponent {
            total_score: comp.iter().map(|x| score_of[x]).sum(),
            case: shell_case(comp.len(), &classes),
            ladder,
            regions: comp,
        });
    }
    let all: Vec<ShellClass> = records.iter().map(|x| x.class).collect();
    let case = if components.len() == 1 { components[0].case } else { shell_case(d.core.len(), &all) };
    let ladder = components.len() == 1 && components[0].ladder;
    Ok(ShellReport { total_score: records.iter().map(|x| x.score).sum(), records, components, case, ladder })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutWitness {
    pub i: u32,
    pub p: usize,
    pub q: usize,
    pub p_flat: CosetKey,
    pub q_flat: CosetKey,
    pub distance: u32,
    pub arc_lengths: (u32, u32),
    pub path: FullEdgePath,
}

/// First pair of cycle flats at coarse distance at most `i` whose arcs
/// both have coarse length greater than `i`.
pub fn find_icut(space: &FlatSpace, c: &FullEdgeCycle, i: u32) -> Result<Option<CutWitness>> {
    if !(1..=2).contains(&i) {
        return Err(Error::Precondition(format!("cuts are defined for i in 1..=2, not {i}")));
    }
    let n = c.len();
    for p in 0..n {
        for q in p + 1..n {
            let arcs = (c.arc_coarse_length(space, p, q), c.arc_coarse_length(space, q, p));
            if arcs.0 <= i || arcs.1 <= i {
                continue;
            }
            let Some(d) = space.coarse_distance_at_most_2(c.flat(p), c.flat(q))? else { continue };
            if d == 0 || d > i {
                continue;
            }
            let path = space
                .short_witness_path(c.flat(p), c.flat(q))?
                .ok_or_else(|| Error::Invariant("no witness for a short coarse distance".into()))?;
            return Ok(Some(CutWitness {
                i,
                p,
                q,
                p_flat: c.flat(p).clone(),
                q_flat: c.flat(q).clone(),
                distance: d,
                arc_lengths: arcs,
                path,
            }));
        }
    }
    Ok(None)
}

pub fn is_taut(space: &FlatSpace, c: &FullEdgeCycle) -> Result<bool> {
    Ok(find_icut(space, c, 1)?.is_none() && find_icut(space, c, 2)?.is_none())
}

/// A taut cycle's diagram has a one-cell core.
pub fn verify_taut_diagram_lemma(space: &FlatSpace, c: &FullEdgeCycle) -> Result<bool> {
    if !is_taut(space, c)? {
        return Err(Error::Precondition("the cycle is not taut".into()));
    }
    Ok(build_diagram(space, c)?.core_size() == 1)
}

/// Re-pairs two chords of one hyperplane, as a local move on a matching.
fn repair(m: &mut Matching, x: usize, y: usize) {
    let (px, py) = (m[x], m[y]);
    m[x] = y;
    m[y] = x;
    m[px] = py;
    m[py] = px;
}

/// The diagram for a prescribed chord pairing, if it is admissible.
pub fn diagram_from_pairing(space: &FlatSpace, c: &FullEdgeCycle, chords: &[(usize, usize)]) -> Result<DiskDiagram> {
    let b = Boundary::new(space, c)?;
    let n = c.vertices().len();
    let mut m: Matching = vec![usize::MAX; n];
    for &(x, y) in chords {
        if x >= n || y >= n || b.group_of[x] != b.group_of[y] {
            return Err(Error::Precondition(format!("edges {x} and {y} are not dual to one hyperplane")));
        }
        m[x] = y;
        m[y] = x;
    }
    if m.contains(&usize::MAX) {
        return Err(Error::Precondition("pairing is not perfect".into()));
    }
    let (bad, _) = matching_cost(&b, &m);
    if bad > 0 {
        return Err(Error::Precondition(format!("{bad} chord crossings have disjoint hyperplanes")));
    }
    let l = label_regions(&b, &chords_of(&m)).map_err(Error::Precondition)?;
    Ok(assemble(&b, chords_of(&m), l, false, 1, 1))
}

/// Descends from a start matching by local re-pairings that keep each
/// hyperplane's chords disjoint and lower (invalid crossings, label
/// conflicts, crossings). `pick` chooses among improving moves.
pub fn reduce_by_local_moves(
    space: &FlatSpace,
    c: &FullEdgeCycle,
    start: &[(usize, usize)],
    mut pick: impl FnMut(usize) -> usize,
) -> Result<Vec<(usize, usize)>> {
    let b = Boundary::new(space, c)?;
    let n = c.vertices().len();
    let mut m: Matching = vec![usize::MAX; n];
    for &(x, y) in start {
        m[x] = y;
        m[y] = x;
    }
    if m.contains(&usize::MAX) {
        return Err(Error::Precondition("start pairing is not perfect".into()));
    }
    let cost = |m: &Matching| {
        let (bad, inter) = matching_cost(&b, m);
        if bad > 0 {
            return (bad, inter, 0);
        }
        match label_regions(&b, &chords_of(m)) {
            Ok(l) => (0, inter, l.repeated_vertices()),
            Err(_) => (1, inter, 0),
        }
    };
    let disjoint_within = |m: &Matching| {
        let chords = chords_of(m);
        chords.iter().enumerate().all(|(i, &a)| {
            chords[i + 1..].iter().all(|&d| b.group_of[a.0] != b.group_of[d.0] || !interleave(a, d))
        })
    };
    loop {
        let here = cost(&m);
        let mut moves = Vec::new();
        for grp in &b.groups {
            for (ix, &x) in grp.iter().enumerate() {
                for &y in &grp[ix + 1..] {
                    if m[x] == y {
                        continue;
                    }
                    let mut t = m.clone();
                    repair(&mut t, x, y);
                    if disjoint_within(&t) && cost(&t) < here {
                        moves.push(t);
                    }
                }
            }
        }
        if moves.is_empty() {
            return Ok(chords_of(&m));
        }
        let k = pick(moves.len()) % moves.len();
        m = moves.swap_remove(k);
    }
}

/// Chords of a diagram as boundary index pairs.
pub fn pairs(d: &DiskDiagram) -> Vec<(usize, usize)> {
    d.chords.iter().map(|c| c.ends).collect()
}

/// All non-crossing pairings of the boundary, one per hyperplane choice;
/// used to seed reduction from arbitrary starts.
pub fn candidate_pairings(space: &FlatSpace, c: &FullEdgeCycle, limit: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    let b = Boundary::new(space, c)?;
    let mut acc: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for grp in &b.groups {
        let mut ms = Vec::new();
        noncrossing_matchings(grp, &mut ms, limit);
        let mut next = Vec::new();
        for a in &acc {
            for m in &ms {
                let mut x = a.clone();
                x.extend(m.iter().copied());
                next.push(x);
                if next.len() >= limit {
                    break;
                }
            }
        }
        acc = next;
    }
    for a in &mut acc {
        a.sort_unstable();
    }
    Ok(acc)
}

/// Types of the cells of an `F` square, used by callers building fixtures.
pub fn is_flat_kind(k: &CosetKey) -> bool {
    matches!(k.kind, CosetKind::Flat(..))
}
