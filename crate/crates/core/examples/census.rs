//! Periodic octagons of the census tree, level by level.

use octagon_billiard::renorm::{enumerate_components, octagons_disjoint, t_prime_polygon_period};
use octagon_billiard::{build_induced_atlas, build_renormalization, build_table_atlas, Result};

fn main() -> Result<()> {
    let depth = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let atlas = build_table_atlas();
    let ia = build_induced_atlas(&atlas);
    let rd = build_renormalization(&ia);
    let comps = enumerate_components(depth, &rd)?;

    for level in 0..=depth as i64 {
        let here: Vec<_> = comps.iter().filter(|c| c.level == level).collect();
        let mut periods: Vec<u64> = here
            .iter()
            .map(|c| t_prime_polygon_period(&c.polygon, &ia, 10_000).map(|r| r.period))
            .collect::<Result<_>>()?;
        periods.sort_unstable();
        periods.dedup();
        println!("level {level}: {} octagons of side {}, T′-periods {periods:?}", here.len(), rd.h(level));
    }
    let overlaps = comps
        .iter()
        .enumerate()
        .flat_map(|(i, a)| comps[i + 1..].iter().map(move |b| (a, b)))
        .filter(|(a, b)| !octagons_disjoint(&a.polygon, &b.polygon))
        .count();
    println!("overlapping pairs: {overlaps}");
    Ok(())
}
