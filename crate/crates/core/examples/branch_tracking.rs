//! Complex volume polynomial `γ(t)`, its real zeros on `[0, 1]` and the lifted
//! angle `Θ(t)`; writes the branch of the counterexample class as CSV.
//!
//! Usage: cargo run --example branch_tracking [out.csv]

use std::f64::consts::PI;

use dhym::cohomology::{find_roots_on_interval, lift_branch, principal_arg, IntersectionProfile};
use dhym::Error;

fn main() -> dhym::Result<()> {
    for (label, profile) in [
        (
            "torus n=3, A=-1",
            IntersectionProfile::homogeneous(3, -1.0, 1.0)?,
        ),
        (
            "torus n=3, A=1",
            IntersectionProfile::homogeneous(3, 1.0, 1.0)?,
        ),
        (
            "torus n=5, A=10",
            IntersectionProfile::homogeneous(5, 10.0, 1.0)?,
        ),
        (
            "I = (3,1,1,3)",
            IntersectionProfile::new(3, vec![3.0, 1.0, 1.0, 3.0])?,
        ),
        (
            "I = (0.75,0.25,1,3)",
            IntersectionProfile::new(3, vec![0.75, 0.25, 1.0, 3.0])?,
        ),
    ] {
        let roots = find_roots_on_interval(&profile);
        let arg = principal_arg(&profile).map_or("undefined".to_string(), |a| format!("{a:.6}"));
        match lift_branch(&profile, 64) {
            Ok(b) => println!(
                "{label:22} Arg {arg:>10}  Θ(1) = {:.6} = {:.4}π  min|γ| {:.3e}  ({} samples)",
                b.theta_end,
                b.theta_end / PI,
                b.min_modulus,
                b.t_samples.len()
            ),
            Err(Error::RootOnPath(t)) => {
                println!("{label:22} Arg {arg:>10}  γ vanishes at t = {t:.10} (roots {roots:?})")
            }
            Err(e) => return Err(e),
        }
    }

    if let Some(path) = std::env::args().nth(1) {
        let branch = lift_branch(&IntersectionProfile::homogeneous(3, -1.0, 1.0)?, 200)?;
        let file = std::fs::File::create(&path).expect("create csv");
        branch
            .write_csv(std::io::BufWriter::new(file))
            .expect("write csv");
        println!("branch written to {path}");
    }
    Ok(())
}
