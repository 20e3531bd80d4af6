//! Dual disk diagrams of full-edge cycles in the flat space: the lift of
//! the pentagon, a non-taut 8-cycle with a ladder core, and DOT output.
//!
//!     cargo run --release --example disk_diagrams > diagram.dot

use raag_rigidity::cycles::EmbeddedCycle;
use raag_rigidity::diagram::{build_diagram, find_icut, is_taut, shell_report};
use raag_rigidity::flat::{FlatSpace, FullEdgeCycle};
use raag_rigidity::graph::named;

fn describe(space: &FlatSpace, name: &str, c: &FullEdgeCycle) -> raag_rigidity::Result<()> {
    let d = build_diagram(space, c)?;
    let shells = shell_report(&d)?;
    eprintln!("{name}: {} full edges, {} chords, {} crossings", c.len(), d.chords.len(), d.crossings.len());
    eprintln!("  core size {}, shells {:?}, score {}, ladder {}", d.core_size(), shells.case, shells.total_score, shells.ladder);
    eprintln!("  checks pass {}, unique {}", d.checks.pass(), d.unique);
    eprintln!("  taut {}", is_taut(space, c)?);
    for i in 1..=2 {
        if let Some(w) = find_icut(space, c, i)? {
            eprintln!("  {i}-cut: {} and {} at coarse distance {}, arcs {:?}", w.p_flat, w.q_flat, w.distance, w.arc_lengths);
        }
    }
    Ok(())
}

fn main() -> raag_rigidity::Result<()> {
    let g = named::pentagon();
    let space = FlatSpace::new(g.clone())?;

    let lift = space.lift_cycle(&EmbeddedCycle::parse(&g, "a,b,c,d,e")?)?;
    describe(&space, "pentagon lift", &lift)?;

    // two chambers 1 and a, glued along <a>
    let keys = [
        "<a,b>", "<b>", "<b,c>", "<c>", "<c,d>", "<d>", "<d,e>", "<e>", "<a,e>", "a<e>", "a<d,e>", "a<d>",
        "a<c,d>", "a<c>", "a<b,c>", "a<b>",
    ];
    let keys = keys.iter().map(|k| space.parse_key(k)).collect::<Result<Vec<_>, _>>()?;
    let eight = FullEdgeCycle::new(&space, keys)?;
    describe(&space, "eight-cycle", &eight)?;

    print!("{}", build_diagram(&space, &eight)?.to_dot());
    Ok(())
}
