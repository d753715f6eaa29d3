//! Symmetric rank-2 and rank-4 elasticity tensors.
//!
//! The canonical storage is always the full tensor (3×3 for [`SymTensor2`], 3×3×3×3 for
//! [`Tensor4`]). Voigt and Mandel vectors/matrices only exist at I/O and solver
//! boundaries. Voigt order is (11, 22, 33, 23, 13, 12) throughout.

mod material;
mod rotation;

pub use material::MaterialSpec;
pub use rotation::RotationMatrix;

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Matrix6, SymmetricEigen, Vector3};

use crate::error::{Error, Result};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Index pairs in Voigt order.
pub const VOIGT_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

/// Mandel eigenvalues below this fraction of the largest one count as non-positive.
pub const PD_RELATIVE_THRESHOLD: f64 = 1e-8;

/// Voigt position of the symmetric index pair (i, j).
pub fn voigt_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) => 3,
        (0, 2) => 4,
        (0, 1) => 5,
        _ => panic!("tensor index out of range: ({i}, {j})"),
    }
}

#[inline]
fn mandel_weight(k: usize) -> f64 {
    if k < 3 {
        1.0
    } else {
        SQRT_2
    }
}

#[inline]
fn voigt_strain_weight(k: usize) -> f64 {
    if k < 3 {
        1.0
    } else {
        2.0
    }
}

/// Symmetric second order tensor (strain or stress).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor2 {
    m: [[f64; 3]; 3],
}

impl SymTensor2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0)
    }

    /// Builds the tensor from its six independent components in Voigt order
    /// (no factors on the shear entries).
    pub fn new(xx: f64, yy: f64, zz: f64, yz: f64, xz: f64, xy: f64) -> Self {
        Self {
            m: [[xx, xy, xz], [xy, yy, yz], [xz, yz, zz]],
        }
    }

    pub fn from_components(c: [f64; 6]) -> Self {
        Self::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }

    /// Symmetric part of an arbitrary 3×3 matrix.
    pub fn from_matrix(a: &Matrix3<f64>) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = 0.5 * (a[(i, j)] + a[(j, i)]);
            }
        }
        Self { m }
    }

    /// `v vᵀ`; the fiber-direction projector when `v` is a unit vector.
    pub fn outer(v: &Vector3<f64>) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = v[i] * v[j];
            }
        }
        Self { m }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    /// Tensor components in Voigt order without shear factors.
    pub fn components(&self) -> [f64; 6] {
        VOIGT_PAIRS.map(|(i, j)| self.m[i][j])
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.m[i][j])
    }

    /// Double contraction `A : B`.
    pub fn ddot(&self, other: &SymTensor2) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.m[i][j] * other.m[i][j];
            }
        }
        s
    }

    pub fn to_voigt_strain(&self) -> VoigtStrain6 {
        let c = self.components();
        VoigtStrain6(std::array::from_fn(|k| voigt_strain_weight(k) * c[k]))
    }

    pub fn from_voigt_strain(v: &VoigtStrain6) -> Self {
        Self::from_components(std::array::from_fn(|k| v.0[k] / voigt_strain_weight(k)))
    }

    pub fn to_voigt_stress(&self) -> VoigtStress6 {
        VoigtStress6(self.components())
    }

    pub fn from_voigt_stress(v: &VoigtStress6) -> Self {
        Self::from_components(v.0)
    }

    pub fn to_mandel(&self) -> MandelVector6 {
        let c = self.components();
        MandelVector6(std::array::from_fn(|k| mandel_weight(k) * c[k]))
    }

    pub fn from_mandel(v: &MandelVector6) -> Self {
        Self::from_components(std::array::from_fn(|k| v.0[k] / mandel_weight(k)))
    }

    pub fn max_abs(&self) -> f64 {
        self.components().iter().fold(0.0, |a, &b| a.max(b.abs()))
    }
}

impl Add for SymTensor2 {
    type Output = SymTensor2;
    fn add(self, rhs: SymTensor2) -> SymTensor2 {
        let mut m = self.m;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v += rhs.m[i][j];
            }
        }
        SymTensor2 { m }
    }
}

impl Sub for SymTensor2 {
    type Output = SymTensor2;
    fn sub(self, rhs: SymTensor2) -> SymTensor2 {
        self + (-rhs)
    }
}

impl Neg for SymTensor2 {
    type Output = SymTensor2;
    fn neg(self) -> SymTensor2 {
        self * -1.0
    }
}

impl Mul<f64> for SymTensor2 {
    type Output = SymTensor2;
    fn mul(self, s: f64) -> SymTensor2 {
        SymTensor2 {
            m: self.m.map(|row| row.map(|v| v * s)),
        }
    }
}

/// Voigt strain vector: shear entries are engineering strains `2ε_23, 2ε_13, 2ε_12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoigtStrain6(pub [f64; 6]);

/// Voigt stress vector: no factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoigtStress6(pub [f64; 6]);

/// Mandel vector: `√2` on all shear entries, for strain and stress alike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelVector6(pub [f64; 6]);

impl VoigtStress6 {
    /// Work-conjugate product, equal to `σ : ε`.
    pub fn dot(&self, strain: &VoigtStrain6) -> f64 {
        self.0.iter().zip(strain.0.iter()).map(|(a, b)| a * b).sum()
    }
}

impl MandelVector6 {
    pub fn dot(&self, other: &MandelVector6) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }
}

type Full4 = [[[[f64; 3]; 3]; 3]; 3];

/// Rank-4 tensor with minor symmetries. Major symmetry is flagged: stiffness and
/// compliance tensors carry it, strain transfer operators do not.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    c: Full4,
    major_symmetric: bool,
}

impl Tensor4 {
    /// Builds a tensor from an index function, symmetrizing over the minor (and, when
    /// `major_symmetric`, the major) index swaps.
    pub fn from_fn(major_symmetric: bool, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut raw = [[[[0.0; 3]; 3]; 3]; 3];
        for (i, a) in raw.iter_mut().enumerate() {
            for (j, b) in a.iter_mut().enumerate() {
                for (k, c) in b.iter_mut().enumerate() {
                    for (l, v) in c.iter_mut().enumerate() {
                        *v = f(i, j, k, l);
                    }
                }
            }
        }
        let mut c = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let minor = 0.25
                            * (raw[i][j][k][l] + raw[j][i][k][l] + raw[i][j][l][k] + raw[j][i][l][k]);
                        c[i][j][k][l] = minor;
                    }
                }
            }
        }
        if major_symmetric {
            let snapshot = c;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            c[i][j][k][l] = 0.5 * (snapshot[i][j][k][l] + snapshot[k][l][i][j]);
                        }
                    }
                }
            }
        }
        Self { c, major_symmetric }
    }

    /// Symmetric fourth order identity, `I : X = X` for symmetric `X`.
    pub fn identity() -> Self {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        Self::from_fn(true, |i, j, k, l| 0.5 * (d(i, k) * d(j, l) + d(i, l) * d(j, k)))
    }

    /// `A ⊗ B` with `(A ⊗ B)_ijkl = A_ij B_kl`.
    pub fn outer(a: &SymTensor2, b: &SymTensor2) -> Self {
        let major = a == b;
        Self::from_fn(major, |i, j, k, l| a.get(i, j) * b.get(k, l))
    }

    /// From a 6×6 Mandel matrix, `M_IJ = w_I w_J A_ijkl` with `w = √2` on shear.
    /// The same layout serves stiffness, compliance and strain-to-strain maps.
    pub fn from_mandel(m: &Matrix6<f64>, major_symmetric: bool) -> Result<Self> {
        if major_symmetric {
            check_matrix_symmetry(m)?;
        }
        Ok(Self::from_fn(major_symmetric, |i, j, k, l| {
            let (a, b) = (voigt_index(i, j), voigt_index(k, l));
            m[(a, b)] / (mandel_weight(a) * mandel_weight(b))
        }))
    }

    pub fn to_mandel(&self) -> Matrix6<f64> {
        Matrix6::from_fn(|a, b| {
            let (i, j) = VOIGT_PAIRS[a];
            let (k, l) = VOIGT_PAIRS[b];
            mandel_weight(a) * mandel_weight(b) * self.c[i][j][k][l]
        })
    }

    /// From a Voigt stiffness matrix (`σ_V = C_V ε_V`, engineering shear strains).
    pub fn from_voigt_stiffness(m: &[[f64; 6]; 6]) -> Result<Self> {
        let mat = Matrix6::from_fn(|a, b| m[a][b]);
        check_matrix_symmetry(&mat)?;
        Ok(Self::from_fn(true, |i, j, k, l| mat[(voigt_index(i, j), voigt_index(k, l))]))
    }

    pub fn to_voigt_stiffness(&self) -> [[f64; 6]; 6] {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let (i, j) = VOIGT_PAIRS[a];
                let (k, l) = VOIGT_PAIRS[b];
                self.c[i][j][k][l]
            })
        })
    }

    /// From a Voigt compliance matrix (`ε_V = S_V σ_V`).
    pub fn from_voigt_compliance(m: &[[f64; 6]; 6]) -> Result<Self> {
        let mat = Matrix6::from_fn(|a, b| m[a][b]);
        check_matrix_symmetry(&mat)?;
        Ok(Self::from_fn(true, |i, j, k, l| {
            let (a, b) = (voigt_index(i, j), voigt_index(k, l));
            mat[(a, b)] / (voigt_strain_weight(a) * voigt_strain_weight(b))
        }))
    }

    pub fn to_voigt_compliance(&self) -> [[f64; 6]; 6] {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let (i, j) = VOIGT_PAIRS[a];
                let (k, l) = VOIGT_PAIRS[b];
                voigt_strain_weight(a) * voigt_strain_weight(b) * self.c[i][j][k][l]
            })
        })
    }

    /// From a Voigt strain-to-strain matrix (`ε_V,out = T_V ε_V,in`). Shear rows
    /// carry the factor 2 of the output engineering strain.
    pub fn from_voigt_strain_map(m: &[[f64; 6]; 6]) -> Self {
        Self::from_fn(false, |i, j, k, l| {
            let (a, b) = (voigt_index(i, j), voigt_index(k, l));
            m[a][b] / voigt_strain_weight(a)
        })
    }

    pub fn to_voigt_strain_map(&self) -> [[f64; 6]; 6] {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let (i, j) = VOIGT_PAIRS[a];
                let (k, l) = VOIGT_PAIRS[b];
                voigt_strain_weight(a) * self.c[i][j][k][l]
            })
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.c[i][j][k][l]
    }

    pub fn is_major_symmetric(&self) -> bool {
        self.major_symmetric
    }

    /// `A : X`.
    pub fn ddot(&self, x: &SymTensor2) -> SymTensor2 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += self.c[i][j][k][l] * x.get(k, l);
                    }
                }
                *v = s;
            }
        }
        SymTensor2 { m: out }
    }

    /// `A : B` as composition of linear maps on symmetric tensors.
    pub fn compose(&self, other: &Tensor4) -> Tensor4 {
        let major = self.major_symmetric && other.major_symmetric && self == other;
        Tensor4::from_fn(major, |i, j, k, l| {
            let mut s = 0.0;
            for m in 0..3 {
                for n in 0..3 {
                    s += self.c[i][j][m][n] * other.c[m][n][k][l];
                }
            }
            s
        })
    }

    pub fn scaled(&self, s: f64) -> Tensor4 {
        Tensor4 {
            c: self.c.map(|a| a.map(|b| b.map(|c| c.map(|v| v * s)))),
            major_symmetric: self.major_symmetric,
        }
    }

    /// Entry-wise linear combination `self + s·other`.
    pub fn add_scaled(&self, other: &Tensor4, s: f64) -> Tensor4 {
        let mut c = self.c;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        c[i][j][k][l] += s * other.c[i][j][k][l];
                    }
                }
            }
        }
        Tensor4 {
            c,
            major_symmetric: self.major_symmetric && other.major_symmetric,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.c
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0, |a, &b| a.max(b.abs()))
    }

    pub fn max_abs_diff(&self, other: &Tensor4) -> f64 {
        self.add_scaled(other, -1.0).max_abs()
    }

    /// Eigenvalues of the Mandel matrix in ascending order (symmetrized first).
    pub fn mandel_eigenvalues(&self) -> [f64; 6] {
        let m = self.to_mandel();
        let sym = 0.5 * (m + m.transpose());
        let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        std::array::from_fn(|k| ev[k])
    }

    pub fn check_positive_definite(&self) -> Result<()> {
        let ev = self.mandel_eigenvalues();
        let (min, max) = (ev[0], ev[5]);
        if !(max > 0.0) || min <= PD_RELATIVE_THRESHOLD * max || !min.is_finite() {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
                max_eigenvalue: max,
            });
        }
        Ok(())
    }

    /// Whether normal/shear and shear/shear couplings vanish in the current frame,
    /// relative to the largest Voigt entry.
    pub fn is_orthotropic_in_frame(&self, rel_tol: f64) -> bool {
        let v = self.to_voigt_stiffness();
        let scale = v.iter().flatten().fold(0.0_f64, |a, &b| a.max(b.abs()));
        (0..6).all(|a| {
            (0..6).all(|b| {
                let decoupled = (a < 3 && b < 3) || a == b;
                decoupled || v[a][b].abs() <= rel_tol * scale
            })
        })
    }

    fn rotated(&self, r: &Matrix3<f64>) -> Tensor4 {
        // one index at a time: 4 · 81 · 3 multiply-adds
        let mut a = self.c;
        for slot in 0..4 {
            let mut b = [[[[0.0; 3]; 3]; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            let idx = [i, j, k, l];
                            let mut s = 0.0;
                            for m in 0..3 {
                                let mut src = idx;
                                src[slot] = m;
                                s += r[(idx[slot], m)] * a[src[0]][src[1]][src[2]][src[3]];
                            }
                            b[i][j][k][l] = s;
                        }
                    }
                }
            }
            a = b;
        }
        Tensor4::from_fn(self.major_symmetric, |i, j, k, l| a[i][j][k][l])
    }
}

fn check_matrix_symmetry(m: &Matrix6<f64>) -> Result<()> {
    let scale = m.amax();
    let asym = (m - m.transpose()).amax();
    if asym > 1e-10 * scale {
        return Err(Error::InvalidMaterial(format!(
            "6x6 matrix is not symmetric (max |M_ij - M_ji| = {asym:e})"
        )));
    }
    Ok(())
}

/// Isotropic stiffness in Lamé form.
pub fn isotropic_stiffness(e: f64, nu: f64) -> Result<Tensor4> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::InvalidMaterial(format!("Young's modulus must be positive, got {e}")));
    }
    if !(nu > -1.0 && nu < 0.5) {
        return Err(Error::InvalidMaterial(format!(
            "Poisson ratio must lie in (-1, 0.5), got {nu}"
        )));
    }
    let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    let mu = e / (2.0 * (1.0 + nu));
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    Ok(Tensor4::from_fn(true, |i, j, k, l| {
        lambda * d(i, j) * d(k, l) + mu * (d(i, k) * d(j, l) + d(i, l) * d(j, k))
    }))
}

/// Compliance `S = C⁻¹`, computed through the Mandel 6×6 representation.
pub fn invert_stiffness(c: &Tensor4) -> Result<Tensor4> {
    c.check_positive_definite()?;
    let m = c.to_mandel();
    let inv = m.try_inverse().ok_or(Error::NotPositiveDefinite {
        min_eigenvalue: 0.0,
        max_eigenvalue: m.amax(),
    })?;
    Tensor4::from_mandel(&(0.5 * (inv + inv.transpose())), true)
}

/// `A^R_ijkl = R_im R_jn R_kp R_lq A_mnpq`.
pub fn rotate_tensor4(a: &Tensor4, r: &RotationMatrix) -> Tensor4 {
    a.rotated(r.matrix())
}

/// Exchanges the x and z axes via the proper rotation by π about (1, 0, 1)/√2.
pub fn axis_swap_xz(a: &Tensor4) -> Tensor4 {
    rotate_tensor4(a, &RotationMatrix::xz_swap())
}
