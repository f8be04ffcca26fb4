//! Grid sweep of the sector `∠KOM`; every periodic component is explained as a
//! lift of a component of `Y`. Run with `--release`.

use octagon_billiard::lifting::{sweep, SweepConfig};
use octagon_billiard::{build_induced_atlas, build_renormalization, build_table_atlas, Result};

fn main() -> Result<()> {
    let ia = build_induced_atlas(&build_table_atlas());
    let rd = build_renormalization(&ia);
    let cfg = SweepConfig::acceptance(&ia, &rd);
    let rep = sweep(&ia, &rd, &cfg)?;
    println!(
        "{} grid points, {} components, {} over budget, {} singular",
        rep.grid_points,
        rep.components.len(),
        rep.over_budget_points,
        rep.singular_points
    );
    for c in rep.components.iter().take(12) {
        let (x, y) = c.center.to_f64();
        let how = c.literal.as_ref().map(|l| format!("T′^{} H^{} of level {} {:?}", l.ms[0], l.n, l.level, l.address));
        println!("  ({x:7.3}, {y:7.3}) period {:>5}  {}", c.period, how.unwrap_or_else(|| "unmatched".into()));
    }
    println!("unmatched: {}", rep.literal_unmatched().len());
    Ok(())
}
