//! Cauchy interlacing between a pencil and its principal restrictions, and
//! the positivity of the restricted volume density it implies.
//!
//! Usage: cargo run --example interlacing

use dhym::hermitian::{
    interlace_check, lagrangian_angle, principal_restriction, relative_spectrum, volume_density,
    CMatrix, HermitianPencil,
};
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> dhym::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 5;
    let m = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
    });
    let omega = (&m + m.adjoint()).map(|z| z * 0.5);
    let pencil = HermitianPencil::standard(omega)?;
    let full = relative_spectrum(&pencil);
    println!("full spectrum: {:.4?}", full.values());

    for p in 1..n {
        let mut idx = sample(&mut rng, n, p).into_vec();
        idx.sort_unstable();
        let sub = relative_spectrum(&principal_restriction(&pencil, &idx)?);
        println!(
            "rows {idx:?}: {:.4?} interlaces: {}",
            sub.values(),
            interlace_check(&full, &sub)?
        );
    }

    // supercritical data: every restriction has positive density at the full angle
    let omega = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
        [3.0, 2.0, 1.0, 0.2]
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect(),
    ));
    let pencil = HermitianPencil::standard(omega)?;
    let theta = lagrangian_angle(&relative_spectrum(&pencil));
    println!(
        "\nsupercritical pencil, angle {:.6} (supercritical: {})",
        theta.theta, theta.supercritical
    );
    for idx in [vec![0], vec![3], vec![0, 3], vec![1, 2, 3]] {
        let sub = relative_spectrum(&principal_restriction(&pencil, &idx)?);
        println!(
            "  rows {idx:?}: density {:.6}",
            volume_density(&sub, theta)?
        );
    }
    Ok(())
}
