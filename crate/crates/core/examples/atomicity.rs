//! Atomicity of the standard graphs and of the commensurability
//! constructions (doubling and k-fold gluing along a closed star).
//!
//!     cargo run --example atomicity

use raag_rigidity::graph::named;
use raag_rigidity::DefiningGraph;

fn show(name: &str, g: &DefiningGraph) -> raag_rigidity::Result<()> {
    let r = g.check_atomic()?;
    println!(
        "{name:<22} |V|={:<3} |E|={:<3} girth={:<4} atomic={}",
        g.vertex_count(),
        g.edge_count(),
        g.girth().map_or("-".into(), |x| x.to_string()),
        r.is_atomic
    );
    for f in &r.failures {
        println!("    {}", serde_json::to_string(f).unwrap());
    }
    Ok(())
}

fn main() -> raag_rigidity::Result<()> {
    let p = named::pentagon();
    let a = p.vertex("a")?;
    show("pentagon", &p)?;
    show("pentagon doubled at a", &p.double_along_closed_star(a))?;
    show("pentagon glued x3 at a", &p.glue_k_copies_along_star(a, 3)?)?;
    show("petersen", &named::petersen())?;
    show("heawood", &named::heawood())?;
    show("dodecahedron", &named::dodecahedron())?;
    show("dodecahedron double", &named::dodecahedron_double())?;

    // the JSON schema round-trips
    let d = p.double_along_closed_star(a);
    println!("\n{}", d.to_json());
    assert_eq!(DefiningGraph::from_json(&d.to_json())?, d);
    Ok(())
}
