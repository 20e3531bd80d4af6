//! Rigidity consequences: quasi-isometry classification, the order of
//! Out(G), recovering isomorphisms from edge maps, and the JSON report.
//!
//!     cargo run --release --example rigidity

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use raag_rigidity::graph::named;
use raag_rigidity::iso::automorphisms;
use raag_rigidity::rigidity::{classify_qi, edge_map_of, edges_to_isomorphism, out_group, run_report, ReportOptions};

fn main() -> raag_rigidity::Result<()> {
    let p = named::pentagon();
    let relabeled = p.relabel(|s| s.to_uppercase())?;
    let doubled = p.double_along_closed_star(p.vertex("a")?);
    let dd = named::dodecahedron_double();

    for (name, other) in [("relabeled pentagon", &relabeled), ("dodecahedron double", &dd), ("doubled pentagon", &doubled)] {
        let r = classify_qi(&p, other)?;
        println!("pentagon vs {name}: {}", serde_json::to_string(&r.verdict).unwrap());
    }

    for (name, g) in [("pentagon", &p), ("dodecahedron double", &dd)] {
        let r = out_group(g)?;
        println!("{name}: |Out(G)| = 2^{} * {} = {}", r.vertices, r.aut_order, r.out_order);
    }
    println!("doubled pentagon: {}", out_group(&doubled).unwrap_err());

    // an automorphism of the dodecahedron double, seen only through edges
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let auts = automorphisms(&dd);
    let phi = auts.choose(&mut rng).unwrap();
    let f = edge_map_of(phi, &dd, &dd)?;
    let back = edges_to_isomorphism(&dd, &dd, &f)?;
    println!("recovered automorphism from its edge map: {}", &back == phi);

    let report = run_report(&p, &ReportOptions::default());
    print!("{}", report.summary());
    Ok(())
}
