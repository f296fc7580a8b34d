//! Finite-difference validation of the linearized operator `-η^{jk̄} ∂_j ∂_k̄`
//! on flat and deformed tori.
//!
//! Usage: cargo run --release --example linearization_check

use dhym::hermitian::CMatrix;
use dhym::torus::{PotentialField, PsiMode, TorusModel, TorusSolver};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dhym::Result<()> {
    let a = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(2.0, 0.0),
            Complex64::new(0.3, 0.4),
            Complex64::new(0.3, -0.4),
            Complex64::new(0.5, 0.0),
        ],
    );
    let flat = TorusSolver::new(TorusModel::flat(2, 16, a.clone())?)?;
    let zero = PotentialField::zeros(flat.grid().len());
    println!(
        "flat, φ = 0:        {:.3e}",
        flat.linearization_fd_check(&zero, 5, 1)?
    );

    let psi = vec![
        PsiMode {
            k: vec![1, 0, 0, 1],
            amplitude: 1.0,
        },
        PsiMode {
            k: vec![0, 1, 1, 0],
            amplitude: 0.5,
        },
    ];
    let deformed = TorusSolver::new(TorusModel::new(2, 16, a, psi, 0.3)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let phi = PotentialField::from_values(
        deformed
            .random_direction(&mut rng)
            .iter()
            .map(|v| 0.05 * v)
            .collect(),
    );
    println!(
        "deformed, random φ: {:.3e}",
        deformed.linearization_fd_check(&phi, 5, 3)?
    );
    let constant = vec![1.0; phi.len()];
    println!(
        "constant direction: {:.3e}",
        deformed.linearization_fd_error(&phi, &constant)?
    );
    Ok(())
}
