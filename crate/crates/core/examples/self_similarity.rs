//! `Γ` conjugates `T′` to its first return on the shrunken quadrilateral, and
//! `H` conjugates it to the first return on the translated sector.

use octagon_billiard::induced::{canonical, conjugacy_check_gamma, conjugacy_check_h};
use octagon_billiard::sampling::{seed_from_env, Sampler};
use octagon_billiard::{build_renormalization, Result};

fn main() -> Result<()> {
    let ia = canonical();
    let rd = build_renormalization(&ia);
    println!("λ = {}   ratio of Γ = {:?}", rd.lambda, rd.gamma_map.similarity_ratio());

    let pts = Sampler::new(seed_from_env()).in_polygon(&ia.quad, 300);
    let g = conjugacy_check_gamma(&pts, &ia, &rd.gamma_map, 10_000)?;
    println!("Γ: {} samples, {} failures, longest return {}", g.samples, g.failures.len(), g.max_return_steps);
    let h = conjugacy_check_h(&pts, &ia, 10_000)?;
    println!("H: {} samples, {} failures, longest return {}", h.samples, h.failures.len(), h.max_return_steps);
    Ok(())
}
