//! P1 linear elasticity on tetrahedra with an embedded one-dimensional fiber that
//! only resists stretching.
//!
//! Degrees of freedom are ordered `3·vertex + component`.

mod assembly;
mod solver;
mod strain;

pub use assembly::{
    apply_dirichlet, assemble_bulk, assemble_fiber, assemble_rhs, assemble_system, elastic_energy,
    element_stiffness, reaction_force, shape_gradients, ConstrainedSystem, DirichletSet,
    SparseSystem,
};
pub use solver::{solve_cg, CgReport, CgSettings};
pub use strain::{edge_fiber_strain, strain_per_tet, vertex_average_strain, StrainField};

use std::collections::BTreeMap;

use nalgebra::{Matrix6, Vector3};

use crate::error::{Error, Result};
use crate::mesh::{FiberPath, TetMesh};
use crate::stp::effective_fiber_modulus;
use crate::tensor::Tensor4;

/// Stiffness per region tag, with an optional fallback for untagged regions.
#[derive(Debug, Clone, Default)]
pub struct MaterialMap {
    default: Option<Tensor4>,
    regions: BTreeMap<i32, Tensor4>,
}

impl MaterialMap {
    pub fn uniform(c: Tensor4) -> Self {
        Self {
            default: Some(c),
            regions: BTreeMap::new(),
        }
    }

    pub fn with_region(mut self, tag: i32, c: Tensor4) -> Self {
        self.regions.insert(tag, c);
        self
    }

    pub fn stiffness(&self, region: i32) -> Result<&Tensor4> {
        self.regions
            .get(&region)
            .or(self.default.as_ref())
            .ok_or(Error::MissingMaterial(region))
    }

    /// Checks that every tet has a positive definite material.
    pub fn validate(&self, mesh: &TetMesh) -> Result<()> {
        for c in self.default.iter().chain(self.regions.values()) {
            c.check_positive_definite()?;
        }
        for &r in mesh.regions() {
            self.stiffness(r)?;
        }
        Ok(())
    }

    pub(crate) fn mandel_by_region(&self, mesh: &TetMesh) -> Result<BTreeMap<i32, Matrix6<f64>>> {
        let mut out = BTreeMap::new();
        for &r in mesh.regions() {
            if !out.contains_key(&r) {
                out.insert(r, self.stiffness(r)?.to_mandel());
            }
        }
        Ok(out)
    }
}

/// Stretching-only fiber along a path: per-edge modulus `E ≥ 0` and section area `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberModel {
    path: FiberPath,
    moduli: Vec<f64>,
    area: f64,
}

impl FiberModel {
    pub fn new(path: FiberPath, moduli: Vec<f64>, area: f64) -> Result<Self> {
        if moduli.len() != path.n_edges() {
            return Err(Error::InvalidFiberPath(format!(
                "{} moduli for {} edges",
                moduli.len(),
                path.n_edges()
            )));
        }
        if let Some(e) = moduli.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
            return Err(Error::InvalidFiberPath(format!("fiber modulus must be >= 0, got {e}")));
        }
        if !(area > 0.0) || !area.is_finite() {
            return Err(Error::InvalidFiberPath(format!("fiber area must be > 0, got {area}")));
        }
        Ok(Self { path, moduli, area })
    }

    pub fn uniform(path: FiberPath, modulus: f64, area: f64) -> Result<Self> {
        let n = path.n_edges();
        Self::new(path, vec![modulus; n], area)
    }

    /// Per edge `E = max(0, E_f − E_m(d))`, where `E_m(d)` is the directional modulus
    /// of the matrix along the edge direction `d`.
    pub fn with_effective_moduli(
        mesh: &TetMesh,
        path: FiberPath,
        c_matrix: &Tensor4,
        fiber_modulus: f64,
        area: f64,
    ) -> Result<Self> {
        let moduli = path
            .edges()
            .map(|(a, b)| {
                effective_fiber_modulus(c_matrix, fiber_modulus, &(mesh.vertex(b) - mesh.vertex(a)))
                    .map(|m| m.effective)
            })
            .collect::<Result<_>>()?;
        Self::new(path, moduli, area)
    }

    pub fn path(&self) -> &FiberPath {
        &self.path
    }

    pub fn moduli(&self) -> &[f64] {
        &self.moduli
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// True when no edge adds stiffness.
    pub fn is_inactive(&self) -> bool {
        self.moduli.iter().all(|&e| e == 0.0)
    }
}

/// Nodal displacements, flat in dof order.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementField {
    values: Vec<f64>,
}

impl DisplacementField {
    pub fn zeros(n_vertices: usize) -> Self {
        Self {
            values: vec![0.0; 3 * n_vertices],
        }
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() % 3 != 0 {
            return Err(Error::InvalidMesh(format!(
                "displacement length {} is not a multiple of 3",
                values.len()
            )));
        }
        Ok(Self { values })
    }

    /// Samples `f` at every vertex.
    pub fn from_fn(mesh: &TetMesh, f: impl Fn(&Vector3<f64>) -> Vector3<f64>) -> Self {
        let values = mesh.vertices().iter().flat_map(|p| {
            let u = f(p);
            [u.x, u.y, u.z]
        });
        Self {
            values: values.collect(),
        }
    }

    pub fn at(&self, v: usize) -> Vector3<f64> {
        Vector3::new(self.values[3 * v], self.values[3 * v + 1], self.values[3 * v + 2])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_vertices(&self) -> usize {
        self.values.len() / 3
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }
}
