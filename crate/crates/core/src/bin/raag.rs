//! Command-line front end. Graph arguments are JSON files, `-` for stdin,
//! or `@name` for a built-in graph (`@pentagon`, `@dodeca-double`, ...).

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use raag_rigidity::cycles::{enumerate_tight_cycles, find_shortcut, is_tight, whitehead_graph, whitehead_graphs, EmbeddedCycle};
use raag_rigidity::diagram::{build_diagram, find_icut, is_taut, shell_report, verify_taut_diagram_lemma};
use raag_rigidity::flat::{coarse_distance, CoarseDistance, FlatBall, FlatSpace};
use raag_rigidity::graph::named;
use raag_rigidity::rigidity::{classify_qi, out_group, run_report, QiVerdict, ReportOptions};
use raag_rigidity::word::{CosetKey, CosetKind, Raag};
use raag_rigidity::{DefiningGraph, Error};

#[derive(Parser)]
#[command(name = "raag", version, about = "Combinatorics of atomic right-angled Artin groups")]
struct Cli {
    #[command(flatten)]
    out: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long, global = true, conflicts_with = "dot")]
    json: bool,
    /// Emit Graphviz DOT instead of text.
    #[arg(long, global = true)]
    dot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the atomicity conditions.
    CheckAtomic { graph: String },
    /// Embedded cycles without 1- or 2-shortcuts.
    TightCycles {
        graph: String,
        /// Defaults to the vertex count, which finds every tight cycle.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Whitehead graphs from tight cycles.
    Whitehead {
        graph: String,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Build a ball in the flat space and check its links.
    FlatBall {
        graph: String,
        #[arg(long, default_value_t = 4)]
        radius: u32,
        #[arg(long, default_value_t = 1)]
        exponent_bound: u32,
        /// Only print statistics (the default for text and JSON output).
        #[arg(long)]
        stats: bool,
    },
    /// Dual disk diagram of the lift of a cycle of the graph.
    Diagram {
        graph: String,
        #[arg(long)]
        cycle: String,
        /// Also cross-check coarse distances of the boundary in a ball.
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Cuts of the lift of a cycle, and the taut diagram lemma.
    Taut {
        graph: String,
        #[arg(long)]
        cycle: String,
    },
    /// Quasi-isometry classification of two atomic groups.
    ClassifyQi { first: String, second: String },
    /// Order of the outer automorphism group.
    OutGroup { graph: String },
    /// Graph constructions.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Normal form of a word, optionally with its coset key.
    NormalForm {
        graph: String,
        /// Tokens like `a b^-1 c^2`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// `cone`, `u` or `u,w`.
        #[arg(long)]
        coset: Option<String>,
    },
    /// Full analysis bundle.
    Report {
        graph: String,
        #[arg(long, default_value_t = 24)]
        samples: usize,
        #[arg(long, default_value_t = 9)]
        max_sample_len: usize,
        #[arg(long, default_value_t = 4)]
        radius: u32,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Double along the closed star of a vertex.
    Double {
        graph: String,
        #[arg(long)]
        vertex: String,
    },
    /// Glue k copies along the closed star of a vertex.
    GlueK {
        graph: String,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        k: usize,
    },
    /// Two dodecahedra glued along a pentagonal face.
    DodecaDouble,
}

enum Failure {
    Input(String),
    Scope(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Invariant(_) => Failure::Invariant(msg),
            Error::Precondition(_) | Error::Disconnected | Error::NotInduced(_) | Error::GroupMismatch => {
                Failure::Scope(msg)
            }
            _ => Failure::Input(msg),
        }
    }
}

type Run = Result<Status, Failure>;

/// Exit status for a computed result.
enum Status {
    Computed,
    OutOfScope,
    Violation,
}

fn load(arg: &str) -> Result<DefiningGraph, Failure> {
    if let Some(name) = arg.strip_prefix('@') {
        return match name {
            "pentagon" => Ok(named::pentagon()),
            "dodecahedron" => Ok(named::dodecahedron()),
            "dodeca-double" => Ok(named::dodecahedron_double()),
            "pentagon-wedge" => Ok(named::pentagon_wedge()),
            "petersen" => Ok(named::petersen()),
            "heawood" => Ok(named::heawood()),
            _ => Err(Failure::Input(format!("unknown built-in graph `{name}`"))),
        };
    }
    let mut text = String::new();
    let read = if arg == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(arg).map(|t| text = t)
    };
    read.map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    Ok(DefiningGraph::from_json(&text)?)
}

fn emit<T: Serialize>(out: Output, value: &T, text: impl FnOnce() -> String, dot: impl FnOnce() -> String) {
    if out.json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
    } else if out.dot {
        print!("{}", dot());
    } else {
        print!("{}", text());
    }
}

fn lift(g: &DefiningGraph, cycle: &str) -> Result<(FlatSpace, EmbeddedCycle, raag_rigidity::flat::FullEdgeCycle), Failure> {
    let c = EmbeddedCycle::parse(g, cycle)?;
    let space = FlatSpace::new(g.clone())?;
    let l = space.lift_cycle(&c)?;
    Ok((space, c, l))
}

fn run(cli: Cli) -> Run {
    let out = cli.out;
    match cli.command {
        Command::CheckAtomic { graph } => {
            let g = load(&graph)?;
            let r = g.check_atomic()?;
            emit(out, &r, || format!("atomic: {}\n{}", r.is_atomic, failures_text(&r)), || g.to_dot("graph"));
            Ok(Status::Computed)
        }
        Command::TightCycles { graph, max_len } => {
            let g = load(&graph)?;
            let max = max_len.unwrap_or(g.vertex_count());
            let cycles: Vec<Vec<String>> = enumerate_tight_cycles(&g, max).iter().map(|c| c.names(&g)).collect();
            emit(
                out,
                &json!({ "max_len": max, "count": cycles.len(), "cycles": cycles }),
                || {
                    let mut s = format!("{} tight cycles of length <= {max}\n", cycles.len());
                    for c in &cycles {
                        s += &format!("  {}\n", c.join(","));
                    }
                    s
                },
                || g.to_dot("graph"),
            );
            Ok(Status::Computed)
        }
        Command::Whitehead { graph, vertex, max_len } => {
            let g = load(&graph)?;
            let max = max_len.unwrap_or(g.vertex_count());
            let whs = match vertex {
                Some(v) => vec![whitehead_graph(&g, g.vertex(&v)?, max)],
                None => whitehead_graphs(&g, max),
            };
            let rows: Vec<_> = whs
                .iter()
                .map(|wh| {
                    let edges: Vec<(String, String)> = wh
                        .edges
                        .iter()
                        .map(|&(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
                        .collect();
                    json!({ "vertex": g.name(wh.vertex), "link": wh.link.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                            "edges": edges, "connected": wh.is_connected() })
                })
                .collect();
            emit(
                out,
                &rows,
                || {
                    whs.iter()
                        .map(|wh| {
                            let edges: Vec<String> =
                                wh.edges.iter().map(|&(a, b)| format!("{}-{}", g.name(a), g.name(b))).collect();
                            format!("Wh({}): connected={} edges {}\n", g.name(wh.vertex), wh.is_connected(), edges.join(" "))
                        })
                        .collect()
                },
                || whs.iter().map(|wh| wh.to_dot(&g)).collect(),
            );
            Ok(Status::Computed)
        }
        Command::FlatBall { graph, radius, exponent_bound, stats: _ } => {
            let g = load(&graph)?;
            let space = FlatSpace::new(g)?;
            let ball = FlatBall::build(&space, radius, exponent_bound)?;
            let s = ball.stats();
            emit(
                out,
                &s,
                || {
                    format!(
                        "radius {} (complete to {}): {} cone, {} singular, {} flat, {} edges, {} squares\nlinks pass: {}\n{}",
                        s.radius,
                        s.complete_radius,
                        s.cone_vertices,
                        s.singular_vertices,
                        s.flat_vertices,
                        s.edges,
                        s.squares,
                        s.links.pass(),
                        s.links.violations.iter().map(|v| format!("  {v}\n")).collect::<String>()
                    )
                },
                || ball.to_dot(),
            );
            Ok(if s.links.pass() { Status::Computed } else { Status::Violation })
        }
        Command::Diagram { graph, cycle, radius } => {
            let g = load(&graph)?;
            let (space, _, l) = lift(&g, &cycle)?;
            let d = build_diagram(&space, &l)?;
            let shells = shell_report(&d)?;
            let cross_check = match radius {
                Some(r) => Some(ball_cross_check(&space, &l, r)?),
                None => None,
            };
            let ok = d.checks.pass() && shells.consistent() && cross_check.as_ref().is_none_or(|c| c.is_empty());
            emit(
                out,
                &json!({ "diagram": d, "shells": shells, "ball_mismatches": cross_check }),
                || {
                    let mut s = format!(
                        "{} chords, {} crossings, {} regions, core size {}, unique: {}\nshell score {}, case {:?}, ladder {}\nchecks pass: {}\n",
                        d.chords.len(),
                        d.crossings.len(),
                        d.regions.len(),
                        d.core_size(),
                        d.unique,
                        shells.total_score,
                        shells.case,
                        shells.ladder,
                        d.checks.pass()
                    );
                    for v in &d.checks.violations {
                        s += &format!("  {v}\n");
                    }
                    if let Some(c) = &cross_check {
                        s += &format!("ball cross-check mismatches: {}\n", c.len());
                    }
                    s
                },
                || d.to_dot(),
            );
            Ok(if ok { Status::Computed } else { Status::Violation })
        }
        Command::Taut { graph, cycle } => {
            let g = load(&graph)?;
            let (space, c, l) = lift(&g, &cycle)?;
            let cut1 = find_icut(&space, &l, 1)?;
            let cut2 = find_icut(&space, &l, 2)?;
            let taut = is_taut(&space, &l)?;
            let lemma = if taut { Some(verify_taut_diagram_lemma(&space, &l)?) } else { None };
            let tight = is_tight(&g, &c);
            let shortcuts: Vec<_> = [1, 2]
                .into_iter()
                .filter_map(|i| find_shortcut(&g, &c, i))
                .map(|s| s.path.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>())
                .collect();
            emit(
                out,
                &json!({ "tight": tight, "shortcuts": shortcuts, "taut": taut, "cut1": cut1, "cut2": cut2,
                         "single_cell_core": lemma, "lift": l.to_strings() }),
                || {
                    let mut s = format!("tight in graph: {tight}\ntaut lift: {taut}\n");
                    for w in cut1.iter().chain(&cut2) {
                        s += &format!(
                            "  {}-cut between {} and {} (coarse distance {}, arcs {:?})\n",
                            w.i, w.p_flat, w.q_flat, w.distance, w.arc_lengths
                        );
                    }
                    if let Some(ok) = lemma {
                        s += &format!("single-cell core: {ok}\n");
                    }
                    s
                },
                || build_diagram(&space, &l).map(|d| d.to_dot()).unwrap_or_default(),
            );
            Ok(if lemma == Some(false) { Status::Violation } else { Status::Computed })
        }
        Command::ClassifyQi { first, second } => {
            let (g1, g2) = (load(&first)?, load(&second)?);
            let r = classify_qi(&g1, &g2)?;
            emit(
                out,
                &r,
                || match &r.verdict {
                    QiVerdict::QuasiIsometricWithIsomorphism { witness } => format!(
                        "quasi-isometric: isomorphism {}\n",
                        witness.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(" ")
                    ),
                    QiVerdict::NotQuasiIsometric => "not quasi-isometric\n".into(),
                    QiVerdict::OutOfScope { reason } => format!("out of scope: {reason}\n"),
                },
                || g1.to_dot("first") + &g2.to_dot("second"),
            );
            Ok(match r.verdict {
                QiVerdict::OutOfScope { .. } => Status::OutOfScope,
                _ => Status::Computed,
            })
        }
        Command::OutGroup { graph } => {
            let g = load(&graph)?;
            let r = out_group(&g)?;
            emit(
                out,
                &r,
                || format!("|H| = {}, |Aut| = {}, |Out(G)| = {}\n{}\n", r.h_order, r.aut_order, r.out_order, r.extension),
                || g.to_dot("graph"),
            );
            Ok(Status::Computed)
        }
        Command::Construct { what } => {
            let g = match what {
                Construct::Double { graph, vertex } => {
                    let g = load(&graph)?;
                    g.double_along_closed_star(g.vertex(&vertex)?)
                }
                Construct::GlueK { graph, vertex, k } => {
                    let g = load(&graph)?;
                    g.glue_k_copies_along_star(g.vertex(&vertex)?, k)?
                }
                Construct::DodecaDouble => named::dodecahedron_double(),
            };
            if out.dot {
                print!("{}", g.to_dot("graph"));
            } else {
                println!("{}", g.to_json());
            }
            Ok(Status::Computed)
        }
        Command::NormalForm { graph, word, coset } => {
            let g = load(&graph)?;
            let raag = Raag::new(g.clone());
            let x = raag.parse(&word)?;
            let key = match coset.as_deref() {
                None => None,
                Some(spec) => Some(CosetKey::new(&x, coset_kind(&g, spec)?)?),
            };
            emit(
                out,
                &json!({ "normal_form": x.to_string(), "length": x.len(), "coset_key": key }),
                || match &key {
                    Some(k) => format!("{x}\n{k}\n"),
                    None => format!("{x}\n"),
                },
                || g.to_dot("graph"),
            );
            Ok(Status::Computed)
        }
        Command::Report { graph, samples, max_sample_len, radius } => {
            let g = load(&graph)?;
            let opts = ReportOptions { taut_samples: samples, max_sample_len, ball_radius: radius, ..Default::default() };
            let r = run_report(&g, &opts);
            if out.json {
                println!("{}", r.to_json());
            } else if out.dot {
                print!("{}", g.to_dot("graph"));
            } else {
                print!("{}", r.summary());
            }
            Ok(Status::Computed)
        }
    }
}

fn failures_text(r: &raag_rigidity::graph::AtomicityReport) -> String {
    r.failures.iter().map(|f| format!("  {}\n", serde_json::to_string(f).expect("serializable"))).collect()
}

fn coset_kind(g: &DefiningGraph, spec: &str) -> Result<CosetKind, Failure> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    match parts.as_slice() {
        ["cone"] => Ok(CosetKind::Cone),
        [u] => Ok(CosetKind::Singular(g.vertex(u)?)),
        [u, w] => {
            let (a, b) = (g.vertex(u)?, g.vertex(w)?);
            if !g.has_edge(a, b) {
                return Err(Error::NotAnEdge(u.to_string(), w.to_string()).into());
            }
            Ok(CosetKind::Flat(a.min(b), a.max(b)))
        }
        _ => Err(Failure::Input(format!("bad coset `{spec}`: expected `cone`, `u` or `u,w`"))),
    }
}

/// Pairs of boundary flats where the algebraic coarse distance disagrees
/// with the ball's.
fn ball_cross_check(
    space: &FlatSpace,
    l: &raag_rigidity::flat::FullEdgeCycle,
    radius: u32,
) -> Result<Vec<String>, Failure> {
    let ball = FlatBall::build(space, radius, 1)?;
    let mut bad = Vec::new();
    for p in 0..l.len() {
        for q in p + 1..l.len() {
            let (f1, f2) = (l.flat(p), l.flat(q));
            let (Some(a), Some(b)) = (ball.id_of(f1), ball.id_of(f2)) else { continue };
            let exact = coarse_distance(&ball, f1, f2)?;
            let seen = ball.coarse_distance_in_ball(a, b);
            if let (CoarseDistance::Exact { value }, Some(s)) = (&exact, seen) {
                if s < *value {
                    bad.push(format!("{f1} {f2}: algebra {value}, ball {s}"));
                }
            }
        }
    }
    Ok(bad)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Computed) => ExitCode::SUCCESS,
        Ok(Status::OutOfScope) => ExitCode::from(2),
        Ok(Status::Violation) => ExitCode::from(3),
        Err(f) => {
            let (code, msg) = match f {
                Failure::Input(m) => (1, m),
                Failure::Scope(m) => (2, m),
                Failure::Invariant(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
