//! LARS path for L1-regularized least squares, with the lasso
//! modification (coefficients crossing zero leave the active set) and an
//! active-set cardinality stop.

use crate::error::{Error, Result};
use crate::linalg::solve_linear;

/// One breakpoint of the regularization path. `lambda` is the maximum
/// absolute correlation of the residual at this point, which is also the
/// L1 penalty level whose lasso solution equals `coefficients`.
#[derive(Debug, Clone)]
pub struct LarsBreakpoint {
    pub coefficients: Vec<f64>,
    pub lambda: f64,
    pub active: Vec<usize>,
}

const CORR_TOL: f64 = 1e-10;

fn correlations(columns: &[Vec<f64>], residual: &[f64]) -> Vec<f64> {
    columns
        .iter()
        .map(|col| col.iter().zip(residual).map(|(a, b)| a * b).sum())
        .collect()
}

/// Trace the LARS-lasso path of `target` regressed on `columns`, stopping
/// once the active set would exceed `max_active` or the least-squares
/// solution is reached. Zero-norm columns never enter.
pub fn lars_path(
    columns: &[Vec<f64>],
    target: &[f64],
    max_active: usize,
) -> Result<Vec<LarsBreakpoint>> {
    let p = columns.len();
    let n = target.len();
    if p == 0 || max_active == 0 {
        return Err(Error::Ranking("lars: empty problem".into()));
    }
    for col in columns {
        if col.len() != n {
            return Err(Error::Ranking("lars: column length mismatch".into()));
        }
    }
    let usable: Vec<bool> = columns
        .iter()
        .map(|col| col.iter().map(|v| v * v).sum::<f64>().sqrt() > 1e-12)
        .collect();

    let mut beta = vec![0.0; p];
    let mut active: Vec<usize> = Vec::new();
    let mut is_active = vec![false; p];
    let mut just_dropped: Option<usize> = None;
    let mut path = Vec::new();

    let mut residual = target.to_vec();
    let mut c = correlations(columns, &residual);
    let max_abs = |c: &[f64]| -> (usize, f64) {
        let mut best = (0usize, -1.0f64);
        for j in 0..p {
            if usable[j] && c[j].abs() > best.1 {
                best = (j, c[j].abs());
            }
        }
        best
    };
    let (j0, mut big_c) = max_abs(&c);
    path.push(LarsBreakpoint {
        coefficients: beta.clone(),
        lambda: big_c,
        active: active.clone(),
    });
    if big_c < CORR_TOL {
        return Ok(path);
    }
    active.push(j0);
    is_active[j0] = true;

    // Each iteration takes one step to the next path event.
    for _ in 0..(4 * p * max_active + 16) {
        // Equiangular direction: (X_A^T X_A) w = sign(c_A). Along the step
        // every active |correlation| decreases at unit rate.
        let gram: Vec<Vec<f64>> = active
            .iter()
            .map(|&i| {
                active
                    .iter()
                    .map(|&j| {
                        columns[i]
                            .iter()
                            .zip(&columns[j])
                            .map(|(a, b)| a * b)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let signs: Vec<f64> = active.iter().map(|&j| c[j].signum()).collect();
        let w = solve_linear(gram, signs)?;

        // u = X_A w; a_j = x_j^T u gives each inactive correlation's rate.
        let mut u = vec![0.0; n];
        for (idx, &j) in active.iter().enumerate() {
            for (ui, &xi) in u.iter_mut().zip(&columns[j]) {
                *ui += w[idx] * xi;
            }
        }

        let mut gamma_entry: Option<(f64, usize)> = None;
        for j in 0..p {
            if !usable[j] || is_active[j] {
                continue;
            }
            let a_j: f64 = columns[j].iter().zip(&u).map(|(x, uu)| x * uu).sum();
            // A feature dropped on the previous event sits exactly on the
            // boundary (|c_j| = big_c); only a strictly positive step may
            // bring it back, otherwise the path would cycle in place.
            let floor = if just_dropped == Some(j) { 1e-12 } else { -1e-15 };
            for (num, den) in [(big_c - c[j], 1.0 - a_j), (big_c + c[j], 1.0 + a_j)] {
                if den > 1e-12 {
                    let g = num / den;
                    if g >= floor {
                        let g = g.max(0.0);
                        if gamma_entry.map_or(true, |(best, _)| g < best) {
                            gamma_entry = Some((g, j));
                        }
                    }
                }
            }
        }
        let mut gamma_drop: Option<(f64, usize)> = None;
        for (idx, &j) in active.iter().enumerate() {
            if w[idx] != 0.0 {
                let g = -beta[j] / w[idx];
                if g > 1e-15 && gamma_drop.map_or(true, |(best, _)| g < best) {
                    gamma_drop = Some((g, j));
                }
            }
        }

        let mut gamma = big_c; // full step reaches the active-set LS solution
        if let Some((g, _)) = gamma_entry {
            gamma = gamma.min(g);
        }
        if let Some((g, _)) = gamma_drop {
            gamma = gamma.min(g);
        }

        for (idx, &j) in active.iter().enumerate() {
            beta[j] += gamma * w[idx];
        }
        residual = target.to_vec();
        for j in 0..p {
            if beta[j] != 0.0 {
                for (ri, &xi) in residual.iter_mut().zip(&columns[j]) {
                    *ri -= beta[j] * xi;
                }
            }
        }
        c = correlations(columns, &residual);
        big_c = max_abs(&c).1;
        just_dropped = None;

        let dropping = matches!(gamma_drop, Some((g, _)) if (g - gamma).abs() <= 1e-15);
        if dropping {
            let (_, j) = gamma_drop.unwrap();
            beta[j] = 0.0;
            is_active[j] = false;
            active.retain(|&a| a != j);
            just_dropped = Some(j);
            path.push(LarsBreakpoint {
                coefficients: beta.clone(),
                lambda: big_c,
                active: active.clone(),
            });
            continue;
        }

        path.push(LarsBreakpoint {
            coefficients: beta.clone(),
            lambda: big_c,
            active: active.clone(),
        });

        if big_c < CORR_TOL {
            break; // unconstrained least squares reached
        }
        match gamma_entry {
            Some((g, j)) if (g - gamma).abs() <= 1e-15 => {
                if active.len() == max_active {
                    break; // next entry would exceed the cardinality
                }
                active.push(j);
                is_active[j] = true;
            }
            _ => break,
        }
    }
    Ok(path)
}

/// Final coefficients of the cardinality-stopped path.
pub fn lars_coefficients(
    columns: &[Vec<f64>],
    target: &[f64],
    max_active: usize,
) -> Result<Vec<f64>> {
    let path = lars_path(columns, target, max_active)?;
    Ok(path.last().unwrap().coefficients.clone())
}
