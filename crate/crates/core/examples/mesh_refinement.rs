//! Grid independence of the converged potential for a band-limited
//! deformation with a non-scalar background form.
//!
//! Usage: cargo run --release --example mesh_refinement

use dhym::hermitian::CMatrix;
use dhym::torus::{continuation, PotentialField, PsiMode, SolverConfig, TorusModel};
use num_complex::Complex64;

/// Values of a fine-grid field at the points of a grid half as fine.
fn restrict(fine: &PotentialField, fine_grid: usize, dims: u32) -> Vec<f64> {
    let coarse = fine_grid / 2;
    (0..coarse.pow(dims))
        .map(|c| {
            let mut f = 0;
            for axis in 0..dims {
                let i = (c / coarse.pow(dims - 1 - axis)) % coarse;
                f = f * fine_grid + 2 * i;
            }
            fine.values()[f]
        })
        .collect()
}

fn main() -> dhym::Result<()> {
    let a = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(2.0, 0.0),
            Complex64::new(0.5, 0.25),
            Complex64::new(0.5, -0.25),
            Complex64::new(0.5, 0.0),
        ],
    );
    let psi = vec![PsiMode {
        k: vec![1, 0, 0, 1],
        amplitude: 1.0,
    }];
    let config = SolverConfig::default();
    let mut previous: Option<(usize, PotentialField)> = None;
    for grid in [8, 16, 32] {
        let model = TorusModel::new(2, grid, a.clone(), psi.clone(), 0.1)?;
        let run = continuation(&model, model.constant_angle(), 2, &config)?;
        let report = run.reports.last().unwrap();
        print!(
            "grid {grid:>2}: residual {:.2e}, |φ| = {:.12}",
            report.residual_sup,
            run.phi.sup_norm()
        );
        if let Some((g, coarse)) = &previous {
            let sampled = restrict(&run.phi, grid, 4);
            let diff = coarse
                .values()
                .iter()
                .zip(&sampled)
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
            print!(", change from grid {g}: {diff:.3e}");
        }
        println!();
        previous = Some((grid, run.phi));
    }
    Ok(())
}
