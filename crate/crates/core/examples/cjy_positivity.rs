//! Numerical positivity of a class against a list of subvarieties, the
//! monotonicity of `t ↦ ∫_V Vol^p(ω + tχ)` and the dimension-3 Chern-number
//! inequality.
//!
//! Usage: cargo run --example cjy_positivity

use dhym::cohomology::{chern_inequality_3d, im_monotone_check_3d, IntersectionProfile};
use dhym::positivity::{family_monotone_check, p_membership, SubvarietyData};

fn main() -> dhym::Result<()> {
    let profile = IntersectionProfile::homogeneous(3, 1.0, 1.0)?;
    let subs = vec![
        SubvarietyData::new("curve", 1, vec![1.0, 1.0])?,
        SubvarietyData::new("surface", 2, vec![1.0, 1.0, 1.0])?,
        SubvarietyData::new("negative curve", 1, vec![1.0, -3.0])?,
    ];
    let v = p_membership(&profile, &subs)?;
    println!("Arg = {:.6}; in P: {} ({})", v.arg, v.in_p, v.in_p_reason);
    for m in &v.margins {
        println!("  {:16} p = {}  integral = {:+.6}", m.name, m.p, m.value);
    }
    for s in &subs[..2] {
        println!(
            "  {:16} monotone on [0, 10]: {}",
            s.name(),
            family_monotone_check(s, v.arg, 10.0)?
        );
    }

    println!("\nChern inequality I3·I0 < 9·I2·I1");
    for (label, p) in [
        (
            "torus A = 1",
            IntersectionProfile::homogeneous(3, 1.0, 1.0)?,
        ),
        (
            "torus A = 0.6",
            IntersectionProfile::homogeneous(3, 0.6, 1.0)?,
        ),
        (
            "I = (1, 0.1, 0.1, 1)",
            IntersectionProfile::new(3, vec![1.0, 0.1, 0.1, 1.0])?,
        ),
    ] {
        let im = im_monotone_check_3d(&p)?;
        println!(
            "  {label:22} {}   Im γ: {:+.3} -> {:+.3} ({:?})",
            chern_inequality_3d(&p)?,
            im.im_at_0,
            im.im_at_1,
            im.trend
        );
    }
    Ok(())
}
