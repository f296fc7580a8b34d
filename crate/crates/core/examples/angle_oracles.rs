//! Lagrangian angle of random Hermitian pencils computed two ways, and the
//! restricted volume density in both of its closed forms.
//!
//! Usage: cargo run --example angle_oracles [trials]

use dhym::hermitian::{
    angle_via_argdet, lagrangian_angle, relative_spectrum, volume_density, volume_density_cot_sin,
    CMatrix, HermitianPencil,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
    });
    (&m + m.adjoint()).map(|z| z * 0.5)
}

fn random_metric(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    &g * g.adjoint() + CMatrix::identity(n, n) * Complex64::new(0.5, 0.0)
}

fn main() -> dhym::Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .map_or(2000, |s| s.parse().expect("trials"));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_angle: f64 = 0.0;
    let mut worst_density: f64 = 0.0;
    for _ in 0..trials {
        let n = rng.gen_range(1..=6);
        let pencil = HermitianPencil::new(
            random_metric(&mut rng, n),
            random_hermitian(&mut rng, n, 5.0),
        )?;
        let spec = relative_spectrum(&pencil);
        let direct = lagrangian_angle(&spec);
        let argdet = angle_via_argdet(&spec);
        worst_angle = worst_angle.max((direct.theta - argdet.theta).abs());

        let theta = dhym::hermitian::AngleValue::new(rng.gen_range(0.1..3.0));
        let d1 = volume_density(&spec, theta)?;
        let d2 = volume_density_cot_sin(&spec, theta)?;
        worst_density = worst_density.max((d1 - d2).abs() / (1.0 + d1.abs()));
    }
    println!("{trials} random pencils (n <= 6)");
    println!("  max |arccot sum - lifted arg det| = {worst_angle:.3e}");
    println!("  max relative density mismatch     = {worst_density:.3e}");

    let p = HermitianPencil::standard(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(2.0, 0.0),
        Complex64::new(3.0, 0.0),
    ])))?;
    let q = lagrangian_angle(&relative_spectrum(&p));
    println!(
        "arccot(2) + arccot(3) = {} (π/4 = {})",
        q.theta,
        std::f64::consts::FRAC_PI_4
    );
    Ok(())
}
