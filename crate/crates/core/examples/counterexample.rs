//! The homogeneous torus family `ω = Aχ`: where numerical positivity and
//! solvability of the supercritical equation part ways.
//!
//! Usage: cargo run --example counterexample

use dhym::positivity::{torus_family_classify, Decision};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn main() -> dhym::Result<()> {
    let v = torus_family_classify(3, -1.0)?;
    println!("n = 3, A = -1");
    println!(
        "  constant n*arccot(A) = {:.15}  (9π/4 = {:.15})",
        v.constant_angle.unwrap(),
        2.25 * std::f64::consts::PI
    );
    println!("  Arg of the class     = {:.15}  (π/4)", v.arg);
    println!(
        "  in P: {}   in K: {:?}   in K1: {:?}",
        yes_no(v.in_p),
        v.in_k.decision,
        v.in_k1.decision
    );
    println!("  {}", v.in_k.reason);
    println!();

    println!(
        "{:>3} {:>7} {:>10} {:>10} {:>5} {:>12}",
        "n", "A", "constant", "Arg", "in P", "in K"
    );
    for n in 1..=5 {
        for a in [-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0] {
            let v = torus_family_classify(n, a)?;
            let flag = if v.in_p && v.in_k.decision == Decision::No {
                "  <- P but not K"
            } else {
                ""
            };
            println!(
                "{n:>3} {a:>7.2} {:>10.5} {:>10.5} {:>5} {:>12}{flag}",
                v.constant_angle.unwrap(),
                v.arg,
                yes_no(v.in_p),
                format!("{:?}", v.in_k.decision).to_lowercase(),
            );
        }
    }
    Ok(())
}
