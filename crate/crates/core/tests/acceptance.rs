//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raag_rigidity::cycles::{
    check_whitehead_lemma, enumerate_cycles, is_tight, whitehead_graphs, ColoringChecker, EdgeColor,
};
use raag_rigidity::diagram::{build_diagram, is_taut, shell_report, DiskDiagram};
use raag_rigidity::flat::{FlatBall, FlatSpace, FullEdgeCycle};
use raag_rigidity::graph::named;
use raag_rigidity::iso::isomorphism;
use raag_rigidity::rigidity::{classify_qi, out_group, run_report, QiVerdict, ReportOptions};
use raag_rigidity::word::{CosetKey, CosetKind, GroupElement, Letter, Raag};
use raag_rigidity::DefiningGraph;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed > limit {
        outcome(false, format!("{} (took {elapsed:.1?}, limit {limit:?})", o.detail))
    } else {
        o
    }
}

fn timed(limit_secs: u64, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let o = f();
    within(o, t.elapsed(), Duration::from_secs(limit_secs))
}

fn atomicity_fixtures() -> Outcome {
    let mut bad = Vec::new();
    let p = named::pentagon();
    if !p.is_atomic() {
        bad.push("pentagon".to_string());
    }
    if !named::dodecahedron_double().is_atomic() {
        bad.push("dodecahedron double".to_string());
    }
    if p.double_along_closed_star(p.vertex("a").unwrap()).is_atomic() {
        bad.push("doubled pentagon".to_string());
    }
    let mut glued = 0;
    for g in [named::pentagon(), named::petersen(), named::dodecahedron()] {
        for v in g.vertices() {
            for k in 2..=4 {
                let out = g.glue_k_copies_along_star(v, k).unwrap();
                glued += 1;
                if out.is_atomic() {
                    bad.push(format!("glue_{k} at {}", g.name(v)));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("4 named fixtures, {glued} glue_k outputs; wrong: {bad:?}"))
}

fn k4_minus_edge() -> DefiningGraph {
    DefiningGraph::new(&["p", "q", "r", "s"], &[("p", "q"), ("q", "r"), ("r", "s"), ("s", "p"), ("p", "r")]).unwrap()
}

fn whitehead_fixtures() -> Outcome {
    let g = named::dodecahedron_double();
    let k3 = named::cycle(3);
    let k4e = k4_minus_edge();
    let mut bad = Vec::new();
    let (mut three, mut four) = (0, 0);
    for wh in whitehead_graphs(&g, g.vertex_count()) {
        let h = wh.to_graph(&g);
        let target = match g.degree(wh.vertex) {
            3 => {
                three += 1;
                &k3
            }
            4 => {
                four += 1;
                &k4e
            }
            d => {
                bad.push(format!("{} has valence {d}", g.name(wh.vertex)));
                continue;
            }
        };
        if isomorphism(&h, target).is_none() {
            bad.push(g.name(wh.vertex).to_string());
        }
    }
    outcome(bad.is_empty(), format!("{three} valence-3 and {four} valence-4 vertices; mismatches: {bad:?}"))
}

fn whitehead_lemma_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut violations, mut vertices, mut cuts) = (0, 0, 0);
    for _ in 0..250 {
        let g = common::random_graph(&mut rng, 12);
        let r = check_whitehead_lemma(&g).unwrap();
        violations += r.rows.iter().filter(|x| !x.holds).count();
        vertices += r.rows.len();
        cuts += r.rows.iter().filter(|x| x.cut_vertex).count();
    }
    outcome(violations == 0, format!("250 graphs, {vertices} vertices ({cuts} cut vertices), {violations} violations"))
}

/// Colorings biased towards near-counterexamples: gray on part of a star,
/// black on a ball around a random vertex and white elsewhere, with a few
/// random flips.
fn propose(rng: &mut impl Rng, g: &DefiningGraph) -> Vec<EdgeColor> {
    let center = rng.gen_range(0..g.vertex_count());
    let radius = rng.gen_range(0..=3);
    let dist = g.distances_from(rng.gen_range(0..g.vertex_count()));
    let mut colors: Vec<EdgeColor> = g
        .edges()
        .iter()
        .map(|&(a, b)| if dist[a].max(dist[b]) <= radius { EdgeColor::Black } else { EdgeColor::White })
        .collect();
    if rng.gen_bool(0.5) {
        let uniform = if rng.gen_bool(0.5) { EdgeColor::Black } else { EdgeColor::White };
        colors.iter_mut().for_each(|c| *c = uniform);
    }
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        if (a == center || b == center) && rng.gen_bool(0.6) {
            colors[i] = EdgeColor::Gray;
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        let i = rng.gen_range(0..colors.len());
        colors[i] = [EdgeColor::Black, EdgeColor::White, EdgeColor::Gray][rng.gen_range(0..3)];
    }
    colors
}

fn coloring_lemma_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, g) in common::atomic_corpus() {
        let checker = ColoringChecker::new(&g).unwrap();
        let (mut valid, mut violations, mut proposed, mut with_gray) = (0, 0, 0, 0);
        while valid < 500 && proposed < 2_000_000 {
            proposed += 1;
            let coloring = propose(&mut rng, &g);
            let r = checker.check(&coloring).unwrap();
            if r.valid_hypotheses {
                valid += 1;
                violations += (!r.conclusion_holds) as usize;
                with_gray += coloring.contains(&EdgeColor::Gray) as usize;
            }
        }
        pass &= valid >= 500 && violations == 0;
        lines.push(format!("{name}: {valid} valid of {proposed} ({with_gray} with gray edges), {violations} violations"));
    }
    outcome(pass, lines.join("; "))
}

fn diagram_ok(d: &DiskDiagram) -> Result<(), String> {
    let s = shell_report(d).map_err(|e| e.to_string())?;
    if !d.checks.pass() {
        return Err(format!("checks: {:?}", d.checks.violations));
    }
    if s.total_score < 4 || !s.consistent() {
        return Err(format!("shells: score {} case {:?}", s.total_score, s.case));
    }
    Ok(())
}

fn shell_suite() -> Outcome {
    let mut built = 0;
    let mut bad = Vec::new();
    let mut check = |name: String, space: &FlatSpace, c: &FullEdgeCycle| {
        built += 1;
        match build_diagram(space, c).map_err(|e| e.to_string()).and_then(|d| diagram_ok(&d)) {
            Ok(()) => {}
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    };
    for (name, g) in [("pentagon", named::pentagon()), ("petersen", named::petersen()), ("dodecahedron_double", named::dodecahedron_double())] {
        let space = FlatSpace::new(g.clone()).unwrap();
        for c in enumerate_cycles(&g, 9) {
            check(format!("{name} lift {}", c.names(&g).join(",")), &space, &space.lift_cycle(&c).unwrap());
        }
    }
    let space = FlatSpace::new(named::pentagon()).unwrap();
    check("eight-cycle".into(), &space, &common::eight_cycle(&space));
    check("folded_17".into(), &space, &common::fixture(&space, include_str!("fixtures/folded_17.txt")));
    check("pinched_27".into(), &space, &common::fixture(&space, include_str!("fixtures/pinched_27.txt")));
    let ball = FlatBall::build(&space, 8, 1).unwrap();
    let start = ball.id_of(&space.parse_key("<a,b>").unwrap()).unwrap();
    for (i, c) in ball.full_edge_cycles_through(start, 12, 300).iter().enumerate() {
        check(format!("ball cycle {i}"), &space, c);
    }
    outcome(bad.is_empty(), format!("{built} diagrams, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn tight_taut_transfer() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, g) in [("pentagon", named::pentagon()), ("dodecahedron_double", named::dodecahedron_double())] {
        let space = FlatSpace::new(g.clone()).unwrap();
        let cycles = enumerate_cycles(&g, 9);
        let (mut mismatches, mut multi_cell, mut example) = (0, 0, None);
        for c in &cycles {
            let lift = space.lift_cycle(c).unwrap();
            let taut = is_taut(&space, &lift).unwrap();
            if taut != is_tight(&g, c) {
                mismatches += 1;
                example.get_or_insert_with(|| c.names(&g).join(","));
            }
            if taut && build_diagram(&space, &lift).unwrap().core_size() != 1 {
                multi_cell += 1;
            }
        }
        pass &= mismatches == 0 && multi_cell == 0;
        lines.push(format!(
            "{name}: {} cycles, {mismatches} tight/taut mismatches{}, {multi_cell} taut lifts with multi-cell core",
            cycles.len(),
            example.map_or(String::new(), |e| format!(" (e.g. {e})"))
        ));
    }
    outcome(pass, lines.join("; "))
}

fn letters(w: &[u8]) -> Vec<Letter> {
    w.iter().map(|&c| Letter::new((c / 2) as usize, c & 1 == 1)).collect()
}

fn codes(x: &GroupElement) -> Vec<u8> {
    x.letters().iter().map(|l| (2 * l.generator() + l.is_inverse() as usize) as u8).collect()
}

fn word_oracle() -> Outcome {
    let r = Raag::new(named::pentagon());
    let mut oracle = common::Rewriting::default();
    let mut word = Vec::new();
    let (mut words, mut mismatches) = (0usize, 0usize);
    fn rec(r: &Raag, o: &mut common::Rewriting, w: &mut Vec<u8>, words: &mut usize, bad: &mut usize) {
        *words += 1;
        if codes(&r.normal_form(&letters(w)).unwrap()) != o.best_of(w) {
            *bad += 1;
        }
        if w.len() < 6 {
            for c in 0..10u8 {
                w.push(c);
                rec(r, o, w, words, bad);
                w.pop();
            }
        }
    }
    rec(&r, &mut oracle, &mut word, &mut words, &mut mismatches);

    // every element of word length <= 3
    let mut elems = BTreeSet::from([r.identity()]);
    let mut frontier = vec![r.identity()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for x in &frontier {
            for v in 0..5 {
                for k in [1, -1] {
                    let y = x.times_generator(v, k);
                    if elems.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
        }
        frontier = next;
    }
    let elems: Vec<GroupElement> = elems.into_iter().collect();
    let g = r.graph();
    let mut kinds = vec![CosetKind::Cone];
    kinds.extend(g.vertices().map(CosetKind::Singular));
    kinds.extend(g.edges().iter().map(|&(u, w)| CosetKind::Flat(u, w)));
    let (mut pairs, mut coset_bad) = (0usize, 0usize);
    for kind in kinds {
        let s = kind.generators();
        let keys: Vec<CosetKey> = elems.iter().map(|x| CosetKey::new(x, kind).unwrap()).collect();
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                pairs += 1;
                // reduced words of subgroup elements only use subgroup letters
                let member = x.inverse().mul(y).letters().iter().all(|l| s.contains(&l.generator()));
                coset_bad += ((keys[i] == keys[j]) != member) as usize;
            }
        }
    }
    outcome(
        mismatches == 0 && coset_bad == 0,
        format!("{words} words, {mismatches} normal-form mismatches; {pairs} coset pairs, {coset_bad} mismatches"),
    )
}

fn flat_ball_checks() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, g) in [("pentagon", named::pentagon()), ("dodecahedron_double", named::dodecahedron_double())] {
        let space = FlatSpace::new(g).unwrap();
        let ball = FlatBall::build(&space, 6, 1).unwrap();
        let l = ball.check_links();
        let ok = l.pass() && l.cone_links_triangulated_are_subdivision && l.squares_typed && l.link_girth_at_least_4;
        pass &= ok;
        lines.push(format!(
            "{name}: {} vertices, {} interior, {} violations",
            ball.vertex_count(),
            l.interior_vertices,
            l.violations.len()
        ));
    }
    outcome(pass, lines.join("; "))
}

fn rigidity_numbers() -> Outcome {
    let p = named::pentagon();
    let relabeled = p.relabel(|s| format!("{s}'")).unwrap();
    let doubled = p.double_along_closed_star(p.vertex("a").unwrap());
    let qi = matches!(classify_qi(&p, &relabeled).unwrap().verdict, QiVerdict::QuasiIsometricWithIsomorphism { .. });
    let not_qi = classify_qi(&p, &named::dodecahedron_double()).unwrap().verdict == QiVerdict::NotQuasiIsometric;
    let scope = matches!(classify_qi(&p, &doubled).unwrap().verdict, QiVerdict::OutOfScope { .. });
    let out = out_group(&p).unwrap();
    let order = out.out_order == num_bigint::BigUint::from(320u32) && out.aut_order == 10;
    outcome(
        qi && not_qi && scope && order,
        format!("qi {qi}, not-qi {not_qi}, out-of-scope {scope}, |Out| = {}", out.out_order),
    )
}

fn determinism() -> Outcome {
    let mut same = true;
    let opts = ReportOptions::default();
    for g in [named::pentagon(), named::dodecahedron_double()] {
        same &= run_report(&g, &opts).to_json() == run_report(&g, &opts).to_json();
    }
    let bin = env!("CARGO_BIN_EXE_raag");
    let mut runs = Vec::new();
    for _ in 0..3 {
        let out = Command::new(bin).args(["report", "@dodeca-double", "--json"]).output().expect("run raag");
        same &= out.status.success();
        runs.push(out.stdout);
    }
    same &= runs.windows(2).all(|w| w[0] == w[1]) && !runs[0].is_empty();
    outcome(same, format!("library and 3 CLI runs, {} bytes each", runs[0].len()))
}

fn main() {
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome>)> = vec![
        ("atomicity fixtures", Box::new(|| timed(1, atomicity_fixtures))),
        ("whitehead fixtures", Box::new(|| timed(30, whitehead_fixtures))),
        ("whitehead lemma suite", Box::new(|| timed(120, whitehead_lemma_suite))),
        ("no-cuts coloring suite", Box::new(coloring_lemma_suite)),
        ("shell inequality", Box::new(shell_suite)),
        ("tight <=> taut transfer", Box::new(|| timed(300, tight_taut_transfer))),
        ("word-algebra oracles", Box::new(word_oracle)),
        ("flat-ball structure", Box::new(|| timed(60, flat_ball_checks))),
        ("rigidity numbers", Box::new(rigidity_numbers)),
        ("report determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += (!o.pass) as usize;
        println!(
            "{} {:>2} {name} [{:.2?}]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed(),
            o.detail
        );
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
