use std::collections::BTreeMap;

use nalgebra::{Matrix6, SMatrix, Vector3};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use super::{DisplacementField, FiberModel, MaterialMap};
use crate::error::{Error, Result};
use crate::mesh::{BoundaryCondition, TetMesh};

type Matrix12 = SMatrix<f64, 12, 12>;
type Matrix6x12 = SMatrix<f64, 6, 12>;

/// Stiffness matrix and load vector before boundary conditions.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub matrix: CsrMatrix<f64>,
    pub rhs: Vec<f64>,
}

/// System after symmetric elimination of the prescribed dofs: their rows and columns
/// are identity, and their right-hand side entries hold the prescribed values.
#[derive(Debug, Clone)]
pub struct ConstrainedSystem {
    pub matrix: CsrMatrix<f64>,
    pub rhs: Vec<f64>,
    pub dirichlet: DirichletSet,
}

/// Prescribed dof values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DirichletSet {
    values: BTreeMap<usize, f64>,
}

impl DirichletSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Identical repeated prescriptions are accepted; differing ones are an error.
    pub fn insert(&mut self, dof: usize, value: f64) -> Result<()> {
        match self.values.insert(dof, value) {
            Some(old) if old != value => Err(Error::DirichletConflict {
                dof,
                first: old,
                second: value,
            }),
            _ => Ok(()),
        }
    }

    pub fn from_conditions(mesh: &TetMesh, bcs: &[BoundaryCondition]) -> Result<Self> {
        let mut set = Self::new();
        for bc in bcs {
            for (dof, value) in bc.prescribed_dofs(mesh)? {
                set.insert(dof, value)?;
            }
        }
        Ok(set)
    }

    pub fn get(&self, dof: usize) -> Option<f64> {
        self.values.get(&dof).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().map(|(&d, &v)| (d, v))
    }
}

/// Gradients of the four barycentric shape functions of tet `t`.
pub fn shape_gradients(mesh: &TetMesh, t: usize) -> Result<[Vector3<f64>; 4]> {
    let jinv = mesh.tet_jacobian(t).try_inverse().ok_or(Error::DegenerateTet {
        tet: t,
        six_volume: 6.0 * mesh.tet_volume(t),
    })?;
    let g1 = jinv.row(0).transpose();
    let g2 = jinv.row(1).transpose();
    let g3 = jinv.row(2).transpose();
    Ok([-(g1 + g2 + g3), g1, g2, g3])
}

/// Maps the 12 element dofs to the Mandel strain vector.
fn strain_matrix(grads: &[Vector3<f64>; 4]) -> Matrix6x12 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut b = Matrix6x12::zeros();
    for (a, g) in grads.iter().enumerate() {
        let c = 3 * a;
        b[(0, c)] = g.x;
        b[(1, c + 1)] = g.y;
        b[(2, c + 2)] = g.z;
        b[(3, c + 1)] = h * g.z;
        b[(3, c + 2)] = h * g.y;
        b[(4, c)] = h * g.z;
        b[(4, c + 2)] = h * g.x;
        b[(5, c)] = h * g.y;
        b[(5, c + 1)] = h * g.x;
    }
    b
}

/// `|t| Bᵀ C B` with `C` in Mandel form.
pub fn element_stiffness(mesh: &TetMesh, t: usize, c_mandel: &Matrix6<f64>) -> Result<Matrix12> {
    let b = strain_matrix(&shape_gradients(mesh, t)?);
    Ok(b.transpose() * c_mandel * b * mesh.tet_volume(t))
}

fn push_bulk(coo: &mut CooMatrix<f64>, mesh: &TetMesh, mats: &MaterialMap) -> Result<()> {
    let by_region = mats.mandel_by_region(mesh)?;
    for (t, tet) in mesh.tets().iter().enumerate() {
        let ke = element_stiffness(mesh, t, &by_region[&mesh.regions()[t]])?;
        for (a, &va) in tet.iter().enumerate() {
            for (b, &vb) in tet.iter().enumerate() {
                for i in 0..3 {
                    for j in 0..3 {
                        coo.push(3 * va + i, 3 * vb + j, ke[(3 * a + i, 3 * b + j)]);
                    }
                }
            }
        }
    }
    Ok(())
}

fn push_fiber(coo: &mut CooMatrix<f64>, mesh: &TetMesh, fiber: &FiberModel) {
    for ((p, q), &e) in fiber.path().edges().zip(fiber.moduli()) {
        if e == 0.0 {
            continue;
        }
        let delta = mesh.vertex(q) - mesh.vertex(p);
        let len = delta.norm();
        let d = delta / len;
        let k = e * fiber.area() / len;
        for i in 0..3 {
            for j in 0..3 {
                let v = k * d[i] * d[j];
                coo.push(3 * p + i, 3 * p + j, v);
                coo.push(3 * q + i, 3 * q + j, v);
                coo.push(3 * p + i, 3 * q + j, -v);
                coo.push(3 * q + i, 3 * p + j, -v);
            }
        }
    }
}

pub fn assemble_bulk(mesh: &TetMesh, mats: &MaterialMap) -> Result<CsrMatrix<f64>> {
    let n = mesh.n_dofs();
    let mut coo = CooMatrix::new(n, n);
    push_bulk(&mut coo, mesh, mats)?;
    Ok(CsrMatrix::from(&coo))
}

/// Truss stiffness `E A / L · [[d dᵀ, −d dᵀ], [−d dᵀ, d dᵀ]]` per fiber edge.
pub fn assemble_fiber(mesh: &TetMesh, fiber: &FiberModel) -> CsrMatrix<f64> {
    let n = mesh.n_dofs();
    let mut coo = CooMatrix::new(n, n);
    push_fiber(&mut coo, mesh, fiber);
    CsrMatrix::from(&coo)
}

/// Consistent load for a body force density that is constant per region.
pub fn assemble_rhs(mesh: &TetMesh, force: impl Fn(i32) -> Vector3<f64>) -> Vec<f64> {
    let mut rhs = vec![0.0; mesh.n_dofs()];
    for (t, tet) in mesh.tets().iter().enumerate() {
        let f = force(mesh.regions()[t]) * (mesh.tet_volume(t) / 4.0);
        for &v in tet {
            for c in 0..3 {
                rhs[3 * v + c] += f[c];
            }
        }
    }
    rhs
}

pub fn assemble_system(
    mesh: &TetMesh,
    mats: &MaterialMap,
    fiber: Option<&FiberModel>,
    force: impl Fn(i32) -> Vector3<f64>,
) -> Result<SparseSystem> {
    let n = mesh.n_dofs();
    let mut coo = CooMatrix::new(n, n);
    push_bulk(&mut coo, mesh, mats)?;
    if let Some(f) = fiber {
        push_fiber(&mut coo, mesh, f);
    }
    Ok(SparseSystem {
        matrix: CsrMatrix::from(&coo),
        rhs: assemble_rhs(mesh, force),
    })
}

pub fn apply_dirichlet(sys: &SparseSystem, dirichlet: &DirichletSet) -> Result<ConstrainedSystem> {
    let n = sys.rhs.len();
    if let Some((dof, _)) = dirichlet.iter().find(|&(d, _)| d >= n) {
        return Err(Error::InvalidBoundaryCondition(format!("dof {dof} out of range")));
    }
    let mut fixed = vec![None; n];
    for (d, v) in dirichlet.iter() {
        fixed[d] = Some(v);
    }
    let mut matrix = sys.matrix.clone();
    let mut rhs = sys.rhs.clone();
    for (i, row_fixed) in fixed.iter().enumerate() {
        let mut row = matrix.row_mut(i);
        let (cols, vals) = row.cols_and_values_mut();
        if let Some(value) = row_fixed {
            let mut has_diagonal = false;
            for (c, v) in cols.iter().zip(vals.iter_mut()) {
                *v = if *c == i { 1.0 } else { 0.0 };
                has_diagonal |= *c == i;
            }
            if !has_diagonal {
                return Err(Error::InvalidBoundaryCondition(format!(
                    "dof {i} has no diagonal entry"
                )));
            }
            rhs[i] = *value;
        } else {
            for (c, v) in cols.iter().zip(vals.iter_mut()) {
                if let Some(u) = fixed[*c] {
                    rhs[i] -= *v * u;
                    *v = 0.0;
                }
            }
        }
    }
    Ok(ConstrainedSystem {
        matrix,
        rhs,
        dirichlet: dirichlet.clone(),
    })
}

pub(crate) fn spmv(a: &CsrMatrix<f64>, x: &[f64], y: &mut [f64]) {
    for (i, row) in a.row_iter().enumerate() {
        y[i] = row
            .col_indices()
            .iter()
            .zip(row.values())
            .map(|(&j, &v)| v * x[j])
            .sum();
    }
}

/// `Σ (K u − b)` over the dofs of `vertices`, using the system before elimination.
pub fn reaction_force(sys: &SparseSystem, u: &DisplacementField, vertices: &[usize]) -> Vector3<f64> {
    let mut out = Vector3::zeros();
    for &v in vertices {
        for c in 0..3 {
            let i = 3 * v + c;
            let row = sys.matrix.row(i);
            let ku: f64 = row
                .col_indices()
                .iter()
                .zip(row.values())
                .map(|(&j, &k)| k * u.values()[j])
                .sum();
            out[c] += ku - sys.rhs[i];
        }
    }
    out
}

/// `½ uᵀ K u`.
pub fn elastic_energy(matrix: &CsrMatrix<f64>, u: &DisplacementField) -> f64 {
    let mut ku = vec![0.0; u.values().len()];
    spmv(matrix, u.values(), &mut ku);
    0.5 * ku.iter().zip(u.values()).map(|(a, b)| a * b).sum::<f64>()
}
