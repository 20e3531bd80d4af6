mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use raag_rigidity::cycles::{check_whitehead_lemma, enumerate_cycles};
use raag_rigidity::diagram::{build_diagram, find_icut, is_taut, shell_report};
use raag_rigidity::flat::{coarse_distance, CoarseDistance, FlatBall, FlatSpace, FullEdgeCycle};
use raag_rigidity::graph::named;
use raag_rigidity::iso::{automorphisms, isomorphism};
use raag_rigidity::rigidity::{classify_qi, edge_map_of, edges_to_isomorphism, out_group, run_report, QiVerdict, ReportOptions};
use raag_rigidity::word::{CosetKind, GroupElement, Letter};
use raag_rigidity::GraphIsomorphism;

struct PentagonBall {
    space: FlatSpace,
    ball: FlatBall,
    cycles: Vec<FullEdgeCycle>,
}

fn pentagon_ball() -> &'static PentagonBall {
    static BALL: OnceLock<PentagonBall> = OnceLock::new();
    BALL.get_or_init(|| {
        let space = FlatSpace::new(named::pentagon()).unwrap();
        let ball = FlatBall::build(&space, 8, 1).unwrap();
        let start = ball.id_of(&space.parse_key("<a,b>").unwrap()).unwrap();
        let cycles = ball.full_edge_cycles_through(start, 12, 300);
        PentagonBall { space, ball, cycles }
    })
}

fn element(space: &FlatSpace, word: &[(usize, bool)]) -> GroupElement {
    let letters: Vec<Letter> = word.iter().map(|&(g, i)| Letter::new(g % 5, i)).collect();
    space.raag().normal_form(&letters).unwrap()
}

fn flat_at(space: &FlatSpace, g: &GroupElement, edge: usize) -> raag_rigidity::word::CosetKey {
    let (u, w) = space.graph().edges()[edge % space.graph().edge_count()];
    raag_rigidity::word::CosetKey::new(g, CosetKind::Flat(u, w)).unwrap()
}

#[test]
fn ball_cycles_cover_several_lengths() {
    let b = pentagon_ball();
    let lengths: std::collections::BTreeSet<usize> = b.cycles.iter().map(|c| c.len()).collect();
    assert!(lengths.len() >= 3, "{lengths:?}");
}

#[test]
fn whitehead_lemma_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cut_vertices = 0;
    for _ in 0..60 {
        let g = common::random_graph(&mut rng, 12);
        let r = check_whitehead_lemma(&g).unwrap();
        assert!(r.pass, "{}", g.to_json());
        cut_vertices += r.rows.iter().filter(|x| x.cut_vertex).count();
    }
    assert!(cut_vertices > 0, "corpus should exercise cut vertices");
}

#[test]
fn edge_maps_of_automorphisms_round_trip() {
    for (name, g) in common::atomic_corpus() {
        for phi in automorphisms(&g) {
            let f = edge_map_of(&phi, &g, &g).unwrap();
            assert_eq!(edges_to_isomorphism(&g, &g, &f).unwrap(), phi, "{name}");
        }
    }
}

#[test]
fn edge_maps_between_scrambled_dodecahedron_doubles() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g1 = named::dodecahedron_double();
    let auts = automorphisms(&g1);
    for _ in 0..20 {
        let g2 = common::scrambled(&mut rng, &g1);
        let base = isomorphism(&g1, &g2).unwrap();
        let phi = auts[rand::Rng::gen_range(&mut rng, 0..auts.len())].then(&base);
        let f = edge_map_of(&phi, &g1, &g2).unwrap();
        let there = edges_to_isomorphism(&g1, &g2, &f).unwrap();
        let g = edge_map_of(&phi.inverse(), &g2, &g1).unwrap();
        let back = edges_to_isomorphism(&g2, &g1, &g).unwrap();
        assert_eq!(there.then(&back), GraphIsomorphism::identity(g1.vertex_count()));
        assert_eq!(back.then(&there), GraphIsomorphism::identity(g1.vertex_count()));
    }
}

#[test]
fn qi_classification_is_symmetric() {
    let p = named::pentagon();
    let graphs = vec![
        p.clone(),
        p.relabel(|s| format!("{s}2")).unwrap(),
        p.double_along_closed_star(0),
        named::petersen(),
        named::dodecahedron(),
    ];
    for g1 in &graphs {
        for g2 in &graphs {
            let (a, b) = (classify_qi(g1, g2).unwrap(), classify_qi(g2, g1).unwrap());
            match (&a.verdict, &b.verdict) {
                (QiVerdict::QuasiIsometricWithIsomorphism { witness: w1 }, QiVerdict::QuasiIsometricWithIsomorphism { witness: w2 }) => {
                    // the inverse of either witness is a valid witness for the swapped pair
                    for (w, src, dst) in [(w1, g2, g1), (w2, g1, g2)] {
                        let mut map = vec![0; src.vertex_count()];
                        for (x, y) in w {
                            map[src.vertex(y).unwrap()] = dst.vertex(x).unwrap();
                        }
                        assert!(GraphIsomorphism::from_map(map).is_isomorphism(src, dst));
                    }
                }
                (QiVerdict::NotQuasiIsometric, QiVerdict::NotQuasiIsometric) => {}
                (QiVerdict::OutOfScope { .. }, QiVerdict::OutOfScope { .. }) => {}
                other => panic!("asymmetric verdicts {other:?}"),
            }
            assert_eq!((a.first.clone(), a.second.clone()), (b.second.clone(), b.first.clone()));
        }
    }
}

#[test]
fn out_order_is_power_of_two_times_aut() {
    for (name, g) in common::atomic_corpus() {
        let r = out_group(&g).unwrap();
        let expected = (num_bigint::BigUint::from(1u8) << g.vertex_count()) * r.aut_order;
        assert_eq!(r.out_order, expected, "{name}");
    }
    let expected = [("pentagon", 10), ("petersen", 120), ("heawood", 336), ("dodecahedron", 120), ("dodecahedron_double", 20)];
    for ((name, g), (_, aut)) in common::atomic_corpus().into_iter().zip(expected) {
        assert_eq!(out_group(&g).unwrap().aut_order, aut, "{name}");
    }
}

#[test]
fn reports_are_deterministic_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = ReportOptions { taut_samples: 4, ..Default::default() };
    for _ in 0..10 {
        let g = common::random_graph(&mut rng, 10);
        assert_eq!(run_report(&g, &opts).to_json(), run_report(&g, &opts).to_json());
    }
}

#[test]
fn lifts_in_petersen_and_heawood_have_single_cell_cores() {
    for g in [named::petersen(), named::heawood()] {
        let space = FlatSpace::new(g.clone()).unwrap();
        for c in enumerate_cycles(&g, 8) {
            let d = build_diagram(&space, &space.lift_cycle(&c).unwrap()).unwrap();
            assert_eq!(d.core_size(), 1);
            assert!(d.checks.pass() && shell_report(&d).unwrap().consistent());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coarse_distance_is_symmetric(
        w1 in prop::collection::vec((0usize..5, any::<bool>()), 0..5),
        w2 in prop::collection::vec((0usize..5, any::<bool>()), 0..5),
        e1 in 0usize..5, e2 in 0usize..5,
    ) {
        let b = pentagon_ball();
        let f1 = flat_at(&b.space, &element(&b.space, &w1), e1);
        let f2 = flat_at(&b.space, &element(&b.space, &w2), e2);
        prop_assert_eq!(
            b.space.coarse_distance_at_most_2(&f1, &f2).unwrap(),
            b.space.coarse_distance_at_most_2(&f2, &f1).unwrap()
        );
        let (d12, d21) = (coarse_distance(&b.ball, &f1, &f2).unwrap(), coarse_distance(&b.ball, &f2, &f1).unwrap());
        if let (CoarseDistance::Exact { value: x }, CoarseDistance::Exact { value: y }) = (d12, d21) {
            prop_assert_eq!(x, y);
        }
        // the ball can only confirm what the algebra decides
        if let (Some(a), Some(c)) = (b.ball.id_of(&f1), b.ball.id_of(&f2)) {
            if let Some(exact) = b.space.coarse_distance_at_most_2(&f1, &f2).unwrap() {
                prop_assert!(b.ball.coarse_distance_in_ball(a, c).is_none_or(|s| s >= exact));
            }
        }
    }

    #[test]
    fn diagrams_of_ball_cycles_satisfy_shells(i in 0usize..300) {
        let b = pentagon_ball();
        let c = &b.cycles[i % b.cycles.len()];
        let d = build_diagram(&b.space, c).unwrap();
        prop_assert!(d.checks.pass(), "{:?}", d.checks.violations);
        let s = shell_report(&d).unwrap();
        prop_assert!(s.total_score >= 4 && s.consistent(), "{:?}", s);
        // more than one core cell forces a cut
        if d.core_size() > 1 {
            prop_assert!(!is_taut(&b.space, c).unwrap());
        }
        if is_taut(&b.space, c).unwrap() {
            prop_assert_eq!(d.core_size(), 1);
        }
        for k in 1..=2 {
            if let Some(w) = find_icut(&b.space, c, k).unwrap() {
                prop_assert!(w.distance <= k && w.arc_lengths.0 > k && w.arc_lengths.1 > k);
                prop_assert_eq!(w.path.coarse_length(&b.space), w.distance);
            }
        }
    }
}
