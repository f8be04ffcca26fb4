//! The table, its eight reflected copies, and `T` advancing the necklace by three.

use octagon_billiard::billiard::{step_polygon, trajectory};
use octagon_billiard::{build_table_atlas, orbit, Result};

fn main() -> Result<()> {
    let atlas = build_table_atlas();
    for (i, c) in atlas.corner_points.iter().enumerate() {
        let img = step_polygon(&atlas.necklace[i], &atlas)?.expect("necklace octagons sit in one cone");
        let to = (0..8).find(|&j| img.same_vertex_set(&atlas.necklace[j])).expect("lands on the necklace");
        println!("C{i} = ({}, {})   T(γ^{i}) = γ^{to}", c.x, c.y);
    }

    let center = atlas.necklace_center(2);
    println!("\norbit of the center of γ²: {:?}", orbit(&center, &atlas, 100)?);
    for p in trajectory(&center, &atlas, 9)? {
        let (x, y) = p.to_f64();
        println!("  ({x:>8.4}, {y:>8.4})");
    }
    Ok(())
}
