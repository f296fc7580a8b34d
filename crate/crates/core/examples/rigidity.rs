//! Only the cohomological constant is attainable: Newton converges for
//! `θ̂ = Σ arccot(eig A)` and fails for `θ̂ ± 0.1`.
//!
//! Usage: cargo run --release --example rigidity [grid]

use dhym::hermitian::CMatrix;
use dhym::torus::{continuation, PsiMode, SolverConfig, TorusModel, TorusSolver};
use dhym::Error;
use num_complex::Complex64;

fn main() -> dhym::Result<()> {
    let grid: usize = std::env::args()
        .nth(1)
        .map_or(16, |s| s.parse().expect("grid"));
    let a = CMatrix::from_diagonal_element(2, 2, Complex64::new(2.0, 0.0));
    let psi = vec![PsiMode {
        k: vec![1, 0, 0, 1],
        amplitude: 1.0,
    }];
    let model = TorusModel::new(2, grid, a, psi, 0.1)?;
    let theta = model.constant_angle();
    let config = SolverConfig::default();

    let run = continuation(&model, theta, 4, &config)?;
    println!(
        "θ̂ = {theta:.12}: converged, residual {:.3e}",
        run.reports.last().unwrap().residual_sup
    );

    let solver = TorusSolver::new(model)?;
    for offset in [-0.1, 0.1] {
        match solver.newton_solve(theta + offset, run.phi.clone(), &config) {
            Err(Error::NotConverged(r)) => println!(
                "θ̂ = {:.12}: not converged after {} iterations, residual stuck at {:.6}",
                theta + offset,
                r.iterations,
                r.residual_sup
            ),
            Ok(_) => println!("θ̂ = {:.12}: unexpectedly converged", theta + offset),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
