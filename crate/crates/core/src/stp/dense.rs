//! Partial-pivoting Gaussian elimination for the small complex systems of the
//! transfer assembly.

use nalgebra::Complex;

use crate::error::{Error, Result};

pub(crate) type C64 = Complex<f64>;

/// Pivots below this fraction of the largest matrix entry are treated as zero.
pub(crate) const SINGULAR_PIVOT_RATIO: f64 = 1e-12;

/// Solves `A X = B` for `N×N` `A` and `N×M` right-hand sides.
pub(crate) fn solve<const N: usize, const M: usize>(
    mut a: [[C64; N]; N],
    mut b: [[C64; M]; N],
    what: &'static str,
) -> Result<[[C64; M]; N]> {
    let scale = a.iter().flatten().fold(0.0_f64, |m, z| m.max(z.norm()));
    if !(scale > 0.0) {
        return Err(Error::SingularSystem { what, pivot_ratio: 0.0 });
    }
    for col in 0..N {
        let (p, pivot) = (col..N)
            .map(|r| (r, a[r][col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot <= SINGULAR_PIVOT_RATIO * scale {
            return Err(Error::SingularSystem {
                what,
                pivot_ratio: pivot / scale,
            });
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..N {
            let f = a[r][col] / a[col][col];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for c in col..N {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            for c in 0..M {
                let v = b[col][c];
                b[r][c] -= f * v;
            }
        }
    }
    let mut x = [[C64::new(0.0, 0.0); M]; N];
    for r in (0..N).rev() {
        for c in 0..M {
            let mut s = b[r][c];
            for k in r + 1..N {
                s -= a[r][k] * x[k][c];
            }
            x[r][c] = s / a[r][r];
        }
    }
    Ok(x)
}

pub(crate) fn matmul<const N: usize, const K: usize, const M: usize>(
    a: &[[C64; K]; N],
    b: &[[C64; M]; K],
) -> [[C64; M]; N] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..K).map(|k| a[i][k] * b[k][j]).sum())
    })
}

pub(crate) fn transpose<const N: usize, const M: usize>(a: &[[C64; M]; N]) -> [[C64; N]; M] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub(crate) fn real<const N: usize, const M: usize>(a: [[f64; M]; N]) -> [[C64; M]; N] {
    a.map(|row| row.map(|v| C64::new(v, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_with_pivoting() {
        // zero leading entry forces a row swap
        let a = real([[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]]);
        let xs = real([[1.0], [-2.0], [0.5]]);
        let b = matmul(&a, &xs);
        let x = solve(a, b, "test").unwrap();
        for r in 0..3 {
            assert!((x[r][0] - xs[r][0]).norm() < 1e-14);
        }
    }

    #[test]
    fn complex_system() {
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        let a = [[one, i], [i, one * 2.0]];
        let xs = [[one + i], [one * 3.0 - i]];
        let x = solve(a, matmul(&a, &xs), "test").unwrap();
        assert!((x[0][0] - xs[0][0]).norm() < 1e-14);
        assert!((x[1][0] - xs[1][0]).norm() < 1e-14);
    }

    #[test]
    fn reports_singularity() {
        let a = real([[1.0, 2.0], [2.0, 4.0]]);
        let err = solve(a, real([[1.0], [1.0]]), "L").unwrap_err();
        assert!(matches!(err, Error::SingularSystem { what: "L", .. }));
    }
}
