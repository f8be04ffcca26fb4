//! Measured `T`-periods of census components against the closed-form families.

use std::collections::BTreeSet;

use octagon_billiard::billiard::DEFAULT_BUDGET;
use octagon_billiard::renorm::{enumerate_components, measure_component_period, period_family_members};
use octagon_billiard::{build_induced_atlas, build_renormalization, build_table_atlas, Result};

fn main() -> Result<()> {
    let atlas = build_table_atlas();
    let rd = build_renormalization(&build_induced_atlas(&atlas));
    let members = period_family_members(4, 64)?;

    let mut comps = vec![rd.necklace_component()];
    comps.extend(enumerate_components(3, &rd)?);
    let mut seen = BTreeSet::new();
    for c in &comps {
        let p = measure_component_period(c, &atlas, DEFAULT_BUDGET)?;
        if !seen.insert((c.level, p)) {
            continue;
        }
        match members.iter().find(|m| m.value == p) {
            Some(m) => println!("level {:>2}  period {p:>4}  family {} (n = {:?}, k = {:?})", c.level, m.set, m.n, m.k),
            None => println!("level {:>2}  period {p:>4}  NOT IN ANY FAMILY", c.level),
        }
    }
    Ok(())
}
