use serde::{Deserialize, Serialize};

use super::assembly::{spmv, ConstrainedSystem};
use super::DisplacementField;
use crate::error::{Error, Result};

/// Jacobi-preconditioned conjugate gradient settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CgSettings {
    /// Relative residual `‖K u − b‖ / ‖b‖`.
    pub tol: f64,
    /// Defaults to ten times the number of dofs.
    pub max_iter: Option<usize>,
}

impl Default for CgSettings {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgReport {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Starts from the Dirichlet values (zero elsewhere), so a zero right-hand side
/// returns the prescribed extension immediately.
pub fn solve_cg(sys: &ConstrainedSystem, settings: &CgSettings) -> Result<(DisplacementField, CgReport)> {
    let n = sys.rhs.len();
    let max_iter = settings.max_iter.unwrap_or(10 * n);
    let mut x = vec![0.0; n];
    for (d, v) in sys.dirichlet.iter() {
        x[d] = v;
    }
    let b_norm = dot(&sys.rhs, &sys.rhs).sqrt();
    if b_norm == 0.0 {
        return Ok((
            DisplacementField::from_values(x)?,
            CgReport {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }

    let mut inv_diag = vec![1.0; n];
    for (i, row) in sys.matrix.row_iter().enumerate() {
        if let Some(k) = row.col_indices().iter().position(|&j| j == i) {
            let d = row.values()[k];
            if d > 0.0 {
                inv_diag[i] = 1.0 / d;
            }
        }
    }

    let mut ax = vec![0.0; n];
    spmv(&sys.matrix, &x, &mut ax);
    let mut r: Vec<f64> = sys.rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut residual = dot(&r, &r).sqrt() / b_norm;
    let mut iterations = 0;
    while residual > settings.tol {
        if iterations == max_iter {
            return Err(Error::NonConvergence { iterations, residual });
        }
        spmv(&sys.matrix, &p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NonConvergence { iterations, residual });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        iterations += 1;
        residual = dot(&r, &r).sqrt() / b_norm;
    }
    Ok((
        DisplacementField::from_values(x)?,
        CgReport {
            iterations,
            relative_residual: residual,
        },
    ))
}
