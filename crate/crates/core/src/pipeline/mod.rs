//! End-to-end case runner: the solution without fiber, the solution with the fiber
//! stretching term, an optional resolved reference, and the strain traces along the
//! fiber.

mod config;
mod trace;

pub use config::{
    CaseConfig, FiberSource, MaterialSource, Materials, MeshSource, StpSettings, UnitScale,
};
pub use trace::{format_float, read_csv, write_csv, SensorTrace, TraceRow, CSV_HEADER};

use std::collections::HashMap;
use std::path::Path;

use nalgebra::Vector3;

use crate::error::Result;
use crate::fem::{
    apply_dirichlet, assemble_system, edge_fiber_strain, elastic_energy, solve_cg, strain_per_tet,
    vertex_average_strain, CgReport, CgSettings, DirichletSet, DisplacementField, FiberModel,
    MaterialMap, SparseSystem,
};
use crate::mesh::{BoundaryCondition, FiberPath, TetMesh};
use crate::stp::{
    directional_modulus, replace_fiber_strain, rotate_stp, FiberSection, StrainTransferOperator,
};
use crate::tensor::{rotate_tensor4, RotationMatrix, SymTensor2, Tensor4};

/// A fully resolved case in SI units.
#[derive(Debug, Clone)]
pub struct Case {
    pub mesh: TetMesh,
    pub path: FiberPath,
    /// Matrix stiffness in the global frame.
    pub matrix: Tensor4,
    /// Fiber stiffness with the fiber along the first axis.
    pub fiber: Tensor4,
    /// Per-region materials of the resolved reference, if any.
    pub reference: Option<MaterialMap>,
    pub section: FiberSection,
    pub boundary_conditions: Vec<BoundaryCondition>,
    pub body_force: Vector3<f64>,
    pub alpha: f64,
    pub solver: CgSettings,
}

/// One solved displacement field with its system before elimination.
#[derive(Debug, Clone)]
pub struct Solution {
    pub displacement: DisplacementField,
    pub system: SparseSystem,
    pub report: CgReport,
}

impl Solution {
    /// `½ uᵀ K u` with the solution's own stiffness.
    pub fn energy(&self) -> f64 {
        elastic_energy(&self.system.matrix, &self.displacement)
    }
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub no_fiber: Solution,
    pub with_fiber: Solution,
    pub reference: Option<Solution>,
    pub fiber_model: FiberModel,
    /// True when no edge is stiffer than the matrix, so the fiber solve was skipped
    /// and `with_fiber` is a copy of `no_fiber`.
    pub fiber_solve_skipped: bool,
    /// Unit fiber tangent per path vertex.
    pub tangents: Vec<Vector3<f64>>,
    pub trace: SensorTrace,
}

impl Case {
    fn solve(&self, mats: &MaterialMap, fiber: Option<&FiberModel>, dirichlet: &DirichletSet) -> Result<Solution> {
        mats.validate(&self.mesh)?;
        let f = self.body_force;
        let system = assemble_system(&self.mesh, mats, fiber, |_| f)?;
        let constrained = apply_dirichlet(&system, dirichlet)?;
        let (displacement, report) = solve_cg(&constrained, &self.solver)?;
        Ok(Solution {
            displacement,
            system,
            report,
        })
    }

    pub fn run(&self, skip_reference: bool) -> Result<CaseResult> {
        let dirichlet = DirichletSet::from_conditions(&self.mesh, &self.boundary_conditions)?;
        let no_fiber = self.solve(&MaterialMap::uniform(self.matrix.clone()), None, &dirichlet)?;

        let fiber_modulus = directional_modulus(&self.fiber, &Vector3::x())?;
        let fiber_model = FiberModel::with_effective_moduli(
            &self.mesh,
            self.path.clone(),
            &self.matrix,
            fiber_modulus,
            self.section.area,
        )?;
        let fiber_solve_skipped = fiber_model.is_inactive();
        let with_fiber = if fiber_solve_skipped {
            no_fiber.clone()
        } else {
            self.solve(&MaterialMap::uniform(self.matrix.clone()), Some(&fiber_model), &dirichlet)?
        };
        let reference = match (&self.reference, skip_reference) {
            (Some(mats), false) => Some(self.solve(mats, None, &dirichlet)?),
            _ => None,
        };

        let tangents = path_tangents(&self.mesh, &self.path);
        let trace = self.trace(&no_fiber, &with_fiber, reference.as_ref(), &tangents)?;
        Ok(CaseResult {
            no_fiber,
            with_fiber,
            reference,
            fiber_model,
            fiber_solve_skipped,
            tangents,
            trace,
        })
    }

    /// Transfer operator for a fiber tangent `v`.
    pub fn operator(&self, v: &Vector3<f64>) -> Result<StrainTransferOperator> {
        let r = RotationMatrix::fiber_frame(v)?;
        let fiber_global = rotate_tensor4(&self.fiber, &r);
        let op = StrainTransferOperator::for_direction(&self.matrix, &fiber_global, &self.section, v)?;
        if self.alpha == 0.0 {
            Ok(op)
        } else {
            rotate_stp(&op, self.alpha, 0.0)
        }
    }

    fn trace(
        &self,
        no_fiber: &Solution,
        with_fiber: &Solution,
        reference: Option<&Solution>,
        tangents: &[Vector3<f64>],
    ) -> Result<SensorTrace> {
        let eps_nf = strain_per_tet(&self.mesh, &no_fiber.displacement)?;
        let eps_r = reference
            .map(|r| strain_per_tet(&self.mesh, &r.displacement))
            .transpose()?;
        let edge_strain: Vec<f64> = self
            .path
            .edges()
            .map(|(p, q)| edge_fiber_strain(&self.mesh, &with_fiber.displacement, p, q))
            .collect::<Result<_>>()?;
        let gamma = vertex_edge_average(&self.path, &edge_strain);

        let mut operators: HashMap<[u64; 3], StrainTransferOperator> = HashMap::new();
        let mut rows = Vec::with_capacity(self.path.vertices().len());
        for (k, &v) in self.path.vertices().iter().enumerate() {
            let t = tangents[k];
            let key = [t.x.to_bits(), t.y.to_bits(), t.z.to_bits()];
            if !operators.contains_key(&key) {
                operators.insert(key, self.operator(&t)?);
            }
            let op = &operators[&key];
            let nf = vertex_average_strain(&self.mesh, &eps_nf, v);
            let transferred = op.transfer().ddot(&nf);
            let extended = replace_fiber_strain(&transferred, gamma[k], &t)?;
            rows.push(TraceRow {
                s: self.path.arc_length()[k],
                er: eps_r.as_ref().map(|e| vertex_average_strain(&self.mesh, e, v).components()),
                enf: nf.components(),
                etnf: transferred.components(),
                ef: extended.components(),
            });
        }
        Ok(SensorTrace { rows })
    }
}

/// Unit tangent per path vertex: the arc-length weighted mean of the adjacent edge
/// directions, falling back to the outgoing edge when they cancel.
pub fn path_tangents(mesh: &TetMesh, path: &FiberPath) -> Vec<Vector3<f64>> {
    let dirs: Vec<Vector3<f64>> = path
        .edges()
        .map(|(p, q)| (mesh.vertex(q) - mesh.vertex(p)).normalize())
        .collect();
    let lens = path.edge_lengths();
    let n = path.vertices().len();
    (0..n)
        .map(|k| {
            let before = (k > 0).then(|| dirs[k - 1] * lens[k - 1]);
            let after = (k + 1 < n).then(|| dirs[k] * lens[k]);
            let sum = before.unwrap_or_default() + after.unwrap_or_default();
            let norm = sum.norm();
            if norm > 1e-12 * (lens[k.saturating_sub(1)] + lens[k.min(n - 2)]) {
                sum / norm
            } else {
                dirs[k.min(n - 2)]
            }
        })
        .collect()
}

/// Arc-length weighted mean of the values on the edges adjacent to each vertex.
pub fn vertex_edge_average(path: &FiberPath, edge_values: &[f64]) -> Vec<f64> {
    let lens = path.edge_lengths();
    let n = path.vertices().len();
    (0..n)
        .map(|k| match (k.checked_sub(1), (k + 1 < n).then_some(k)) {
            (Some(a), Some(b)) => (edge_values[a] * lens[a] + edge_values[b] * lens[b]) / (lens[a] + lens[b]),
            (Some(a), None) => edge_values[a],
            (None, Some(b)) => edge_values[b],
            (None, None) => unreachable!("paths have at least one edge"),
        })
        .collect()
}

/// Loads, runs and writes the configured trace. Returns the result and the CSV path
/// that was written, if any.
pub fn run_case(config: &Path, skip_reference: bool) -> Result<(CaseResult, Option<std::path::PathBuf>)> {
    let (cfg, base) = CaseConfig::load(config)?;
    let result = cfg.resolve(&base)?.run(skip_reference)?;
    let out = cfg.output.as_ref().map(|p| base.join(p));
    if let Some(p) = &out {
        write_csv(&result.trace, p)?;
    }
    Ok((result, out))
}

/// `P : ε` for the unit tangent `v`.
pub fn fiber_normal_strain(eps: &SymTensor2, v: &Vector3<f64>) -> f64 {
    SymTensor2::outer(v).ddot(eps)
}
