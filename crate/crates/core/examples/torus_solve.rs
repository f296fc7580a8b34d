//! Continuation solve on a deformed flat torus of complex dimension 2.
//!
//! Usage: cargo run --release --example torus_solve [grid] [steps]

use std::time::Instant;

use dhym::hermitian::CMatrix;
use dhym::torus::{continuation, PsiMode, SolverConfig, TorusModel};
use num_complex::Complex64;

fn main() -> dhym::Result<()> {
    let mut args = std::env::args().skip(1);
    let grid: usize = args.next().map_or(16, |s| s.parse().expect("grid"));
    let steps: usize = args.next().map_or(4, |s| s.parse().expect("steps"));

    let a = CMatrix::from_diagonal_element(2, 2, Complex64::new(2.0, 0.0));
    let psi = vec![PsiMode {
        k: vec![1, 0, 0, 1],
        amplitude: 1.0,
    }];
    let model = TorusModel::new(2, grid, a, psi, 0.1)?;
    let theta = model.constant_angle();
    println!("grid {grid}^4, target angle {theta}");

    let start = Instant::now();
    let run = continuation(&model, theta, steps, &SolverConfig::default())?;
    for r in &run.reports {
        println!(
            "s = {:.4}  newton {:2}  krylov {:4}  first residual {:.3e}  final {:.3e}  width {:.3e}",
            r.psi_amplitude,
            r.iterations,
            r.linear_iterations,
            r.initial_residual,
            r.residual_sup,
            r.angle_width()
        );
    }
    println!("|phi|_sup = {:.6e}", run.phi.sup_norm());
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
