//! Restarted GMRES for real grid vectors.

#[derive(Clone, Copy, Debug)]
pub(crate) struct GmresOutcome {
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Solves `op(x) = b` from `x = 0`, stopping when `|b - op(x)| <= rel_tol |b|`
/// or after `max_iterations` operator applications. Returns the best iterate.
pub(crate) fn gmres<F>(
    mut op: F,
    b: &[f64],
    rel_tol: f64,
    restart: usize,
    max_iterations: usize,
) -> (Vec<f64>, GmresOutcome)
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let len = b.len();
    let mut x = vec![0.0; len];
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return (x, GmresOutcome { iterations: 0 });
    }
    let restart = restart.max(1);
    let mut total = 0;
    let mut r = b.to_vec();
    let mut r_norm = b_norm;

    while total < max_iterations && r_norm > rel_tol * b_norm {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(restart + 1);
        basis.push(r.iter().map(|v| v / r_norm).collect());
        // Hessenberg columns after Givens rotations
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(restart);
        let mut cs: Vec<f64> = Vec::with_capacity(restart);
        let mut sn: Vec<f64> = Vec::with_capacity(restart);
        let mut g = vec![r_norm];
        let mut k = 0;
        while k < restart && total < max_iterations {
            let mut w = op(&basis[k]);
            total += 1;
            let mut col = vec![0.0; k + 2];
            // modified Gram-Schmidt, twice for stability
            for _ in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let c = dot(&w, v);
                    col[i] += c;
                    axpy(-c, v, &mut w);
                }
            }
            let w_norm = norm(&w);
            col[k + 1] = w_norm;
            for i in 0..k {
                let (a, b) = (col[i], col[i + 1]);
                col[i] = cs[i] * a + sn[i] * b;
                col[i + 1] = -sn[i] * a + cs[i] * b;
            }
            let (a, b) = (col[k], col[k + 1]);
            let rho = a.hypot(b);
            let (c, s) = if rho == 0.0 {
                (1.0, 0.0)
            } else {
                (a / rho, b / rho)
            };
            col[k] = rho;
            col[k + 1] = 0.0;
            cs.push(c);
            sn.push(s);
            let gk = g[k];
            g[k] = c * gk;
            g.push(-s * gk);
            h.push(col);
            k += 1;
            let breakdown = w_norm <= 1e-300;
            if !breakdown {
                basis.push(w.iter().map(|v| v / w_norm).collect());
            }
            if g[k].abs() <= rel_tol * b_norm || breakdown {
                break;
            }
        }
        // back substitution on the k x k triangle
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for (j, yj) in y.iter().enumerate().skip(i + 1) {
                s -= h[j][i] * yj;
            }
            y[i] = if h[i][i] != 0.0 { s / h[i][i] } else { 0.0 };
        }
        for (yi, v) in y.iter().zip(&basis) {
            axpy(*yi, v, &mut x);
        }
        let ax = op(&x);
        r = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let new_norm = norm(&r);
        if new_norm >= r_norm && k < restart {
            break;
        }
        r_norm = new_norm;
    }
    (x, GmresOutcome { iterations: total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_nonsymmetric_system() {
        let a = [[4.0, 1.0, 0.0], [2.0, 5.0, 1.0], [0.0, -1.0, 3.0]];
        let op = |x: &[f64]| {
            (0..3)
                .map(|i| (0..3).map(|j| a[i][j] * x[j]).sum())
                .collect()
        };
        let b = [1.0, 2.0, 3.0];
        let (x, out) = gmres(op, &b, 1e-14, 10, 50);
        assert!(out.iterations <= 4);
        let ax: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|j| a[i][j] * x[j]).sum())
            .collect();
        for (u, v) in ax.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn restarts_converge() {
        let n = 40;
        let op = |x: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let l = if i > 0 { x[i - 1] } else { 0.0 };
                    let r = if i + 1 < n { x[i + 1] } else { 0.0 };
                    3.0 * x[i] - l - 0.5 * r
                })
                .collect()
        };
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let (x, out) = gmres(op, &b, 1e-12, 5, 500);
        assert!(out.iterations < 500);
        let r: f64 = op(&x)
            .iter()
            .zip(&b)
            .map(|(u, v)| (u - v).powi(2))
            .sum::<f64>()
            .sqrt();
        let b_norm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(r <= 1e-12 * b_norm);
    }

    #[test]
    fn zero_rhs() {
        let (x, out) = gmres(|v: &[f64]| v.to_vec(), &[0.0; 4], 1e-12, 4, 4);
        assert_eq!(x, vec![0.0; 4]);
        assert_eq!(out.iterations, 0);
    }
}
