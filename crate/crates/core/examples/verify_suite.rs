//! The full property suite with a small sample count, one line per check.

use octagon_billiard::verify::{run, VerifyConfig};
use octagon_billiard::Result;

fn main() -> Result<()> {
    let cfg = VerifyConfig { samples: 200, ..Default::default() };
    let rep = run(&cfg)?;
    for c in &rep.checks {
        println!("{:<20} {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
    std::process::exit(if rep.passed { 0 } else { 1 });
}
