//! Words in the pentagon group: normal forms, inverses and coset keys for
//! the special subgroups that index vertices of the flat space.
//!
//!     cargo run --example normal_forms

use raag_rigidity::graph::named;
use raag_rigidity::word::{CosetKey, CosetKind, Raag};

fn main() -> raag_rigidity::Result<()> {
    let g = named::pentagon();
    let raag = Raag::new(g.clone());
    let (a, b) = (g.vertex("a")?, g.vertex("b")?);

    for w in ["b a", "a b a^-1", "c a b a^-1 c^-1", "d b d^-1 b^-1", "e c^2 e^-1 a"] {
        let x = raag.parse(w)?;
        println!("{w:<18} -> {x:<12} inverse {}", x.inverse());
    }

    // a and b commute, c and a do not
    let x = raag.parse("c a b^-1")?;
    for kind in [CosetKind::Cone, CosetKind::Singular(a), CosetKind::Flat(a, b)] {
        println!("{x} in coset {}", CosetKey::new(&x, kind)?);
    }

    let y = raag.parse("c b^3 a^-2")?;
    println!("same <a,b>-coset as {y}: {}", x.left_divide(&y).in_special_subgroup(&[a, b]));
    Ok(())
}
