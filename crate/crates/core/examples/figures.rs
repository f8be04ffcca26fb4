//! Writes the four SVG figures to a directory (default `figures/`).

use octagon_billiard::cli::figures;
use octagon_billiard::verify::Context;
use octagon_billiard::Result;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    std::fs::create_dir_all(&dir)?;
    for (name, svg) in figures(&Context::canonical(), 3)? {
        let path = std::path::Path::new(&dir).join(name);
        std::fs::write(&path, svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
