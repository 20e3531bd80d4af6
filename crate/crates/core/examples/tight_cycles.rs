//! Tight cycles and Whitehead graphs of the dodecahedron doubled along a
//! face, then the three-color lemma on random colorings of the pentagon.
//!
//!     cargo run --release --example tight_cycles

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raag_rigidity::cycles::{
    check_whitehead_lemma, enumerate_cycles, enumerate_tight_cycles, is_tight, find_shortcut, whitehead_graphs, ColoringChecker, EdgeColor,
    EmbeddedCycle,
};
use raag_rigidity::graph::named;

fn main() -> raag_rigidity::Result<()> {
    let g = named::dodecahedron_double();
    let tight = enumerate_tight_cycles(&g, g.vertex_count());
    println!("{} tight cycles, lengths {:?}", tight.len(), tight.iter().map(|c| c.len()).collect::<std::collections::BTreeSet<_>>());

    for wh in whitehead_graphs(&g, g.vertex_count()).iter().filter(|wh| g.degree(wh.vertex) == 4).take(2) {
        let edges: Vec<String> = wh.edges.iter().map(|&(x, y)| format!("{}-{}", g.name(x), g.name(y))).collect();
        println!("Wh({}) on {} link vertices: {}", g.name(wh.vertex), wh.link.len(), edges.join(" "));
    }
    println!("Wh connected <=> not a cut vertex: {}", check_whitehead_lemma(&g)?.pass);

    // the shared face is tight, a 9-cycle around a vertex is not
    let face = EmbeddedCycle::parse(&g, "d10,d12,d14,d16,d18")?;
    println!("shared face tight: {}", is_tight(&g, &face));
    if let Some(c) = enumerate_cycles(&g, 9).into_iter().find(|c| c.len() == 9 && !is_tight(&g, c)) {
        let s = find_shortcut(&g, &c, 2).expect("non-tight 9-cycle has a 2-shortcut");
        let names: Vec<&str> = s.path.iter().map(|&v| g.name(v)).collect();
        println!("{} has 2-shortcut {}", c.names(&g).join(","), names.join("-"));
    }

    let p = named::pentagon();
    let checker = ColoringChecker::new(&p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let colors = [EdgeColor::Black, EdgeColor::White, EdgeColor::Gray];
    let (mut valid, mut holds) = (0, 0);
    for _ in 0..2000 {
        let coloring: Vec<EdgeColor> = (0..p.edge_count()).map(|_| colors[rng.gen_range(0..3)]).collect();
        let r = checker.check(&coloring)?;
        if r.valid_hypotheses {
            valid += 1;
            holds += r.conclusion_holds as usize;
        }
    }
    println!("coloring lemma: {holds}/{valid} colorings satisfying the hypotheses are monochrome up to gray");
    Ok(())
}
