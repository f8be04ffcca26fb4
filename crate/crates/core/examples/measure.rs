//! Area left in `OKLM` after removing census octagons shrinks by `3λ²` per level.

use octagon_billiard::renorm::residual_measure;
use octagon_billiard::{build_induced_atlas, build_renormalization, build_table_atlas, QSqrt2, Result, Sign};

fn main() -> Result<()> {
    let rd = build_renormalization(&build_induced_atlas(&build_table_atlas()));
    let ratio = rd.residual_ratio();
    println!("3λ² = {ratio} ≈ {:.6}, below one: {}", ratio.to_f64(), (QSqrt2::one() - ratio.clone()).sign() == Sign::Positive);
    let mut prev = residual_measure(0, &rd)?;
    for k in 0..5 {
        let next = residual_measure(k + 1, &rd)?;
        println!("residual({k}) = {prev} ≈ {:.6}   next/prev = 3λ²: {}", prev.to_f64(), next == &ratio * &prev);
        prev = next;
    }
    Ok(())
}
