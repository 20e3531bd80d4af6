//! A ball in the flat space of the pentagon group: vertex types, link
//! checks, coarse distances and a parallel set slice.
//!
//!     cargo run --release --example flat_ball [radius]

use raag_rigidity::flat::{
    classify_parallel_intersection, coarse_distance, quarter_plane_case, FlatBall, FlatSpace,
};
use raag_rigidity::graph::named;

fn main() -> raag_rigidity::Result<()> {
    let radius = std::env::args().nth(1).and_then(|r| r.parse().ok()).unwrap_or(6);
    let g = named::pentagon();
    let space = FlatSpace::new(g.clone())?;
    let ball = FlatBall::build(&space, radius, 1)?;
    let s = ball.stats();
    println!(
        "radius {radius}: {} cone, {} singular, {} flat vertices, {} squares",
        s.cone_vertices, s.singular_vertices, s.flat_vertices, s.squares
    );
    println!("links complete to radius {}: pass = {}", s.complete_radius, s.links.pass());

    for (x, y) in [("<a,b>", "<a,e>"), ("<a,b>", "<c,d>"), ("<a,b>", "c e<c,d>"), ("<a,b>", "a^3<a,e>")] {
        let d = coarse_distance(&ball, &space.parse_key(x)?, &space.parse_key(y)?)?;
        println!("D({x}, {y}) = {d}");
    }

    let slice = ball.parallel_set_slice(&space.parse_key("<a>")?)?;
    let parts = ball.slice_separation(&slice);
    println!("parallel set of <a>: {} flats in the ball, complement has {} parts with cones", slice.flats.len(), parts.len());

    let (a, b, c) = (g.vertex("a")?, g.vertex("b")?, g.vertex("c")?);
    println!("parallel sets of a and b meet: {:?}", classify_parallel_intersection(&g, a, b));
    println!("parallel sets of a and c meet: {:?}", classify_parallel_intersection(&g, a, c));
    println!("quarter plane labelled a | b: {:?}", quarter_plane_case(&g, &[a], &[b])?);
    Ok(())
}
