//! The induced map on `OKLM`: three rotations, checked against folding `T`.

use octagon_billiard::induced::canonical;
use octagon_billiard::sampling::{seed_from_env, Sampler};
use octagon_billiard::Result;

fn main() -> Result<()> {
    let ia = canonical();
    let np = &ia.points;
    for (name, p) in [("O", &np.o), ("K", &np.k), ("L", &np.l), ("M", &np.m)] {
        println!("{name} = ({}, {})", p.x, p.y);
    }
    for pc in &ia.pieces {
        println!("{}: rotation by {}·π/4 about ({}, {})", pc.name, pc.octants, pc.center.x, pc.center.y);
    }

    let pts = Sampler::new(seed_from_env()).in_polygon(&ia.quad, 200);
    let mut agree = 0;
    for x in &pts {
        if ia.t_prime(x)? == ia.t_prime_oracle(x)? {
            agree += 1;
        }
    }
    println!("piecewise form agrees with folded T on {agree}/{} random points", pts.len());
    Ok(())
}
