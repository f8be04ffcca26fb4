//! The fixed point of the spiral contraction and its non-returning orbit.

use std::time::Instant;

use octagon_billiard::renorm::{aperiodic_point, nested_quadrilaterals};
use octagon_billiard::{build_induced_atlas, build_renormalization, build_table_atlas, orbit, Location, Result};

fn main() -> Result<()> {
    let atlas = build_table_atlas();
    let rd = build_renormalization(&build_induced_atlas(&atlas));
    let c = aperiodic_point(&rd)?;
    println!("c = ({}, {})", c.x, c.y);
    println!("g(c) = c: {}", rd.g_map.apply(&c) == c);
    for (i, g) in nested_quadrilaterals(&rd, 7).iter().enumerate() {
        println!("c in G{i}: {}", g.locate(&c) == Location::Interior);
    }
    let t = Instant::now();
    let out = orbit(&c, &atlas, 100_000)?;
    println!("orbit: {out:?} in {:.2?}", t.elapsed());
    Ok(())
}
