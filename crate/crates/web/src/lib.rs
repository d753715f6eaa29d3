//! Browser bindings for the demo page in `www/`. The plain functions do the work and
//! are tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use nalgebra::Vector3;
use wasm_bindgen::prelude::*;

use fiberstp::fem::CgSettings;
use fiberstp::mesh::{build_box_mesh, validate_fiber_path, BoundaryCondition};
use fiberstp::pipeline::{fiber_normal_strain, Case};
use fiberstp::stp::{directional_modulus, rotate_stp, FiberSection, Notation, StrainTransferOperator};
use fiberstp::tensor::{axis_swap_xz, isotropic_stiffness, MaterialSpec, SymTensor2, Tensor4};
use fiberstp::{Error, Result};

const GLASS: (f64, f64) = (73.0, 0.18);

/// Matrix presets, stiffness in GPa with the reinforcement along z.
pub fn matrix_preset(name: &str) -> Result<Tensor4> {
    match name {
        "composite" => MaterialSpec::glass_pp_composite_fiber_z().stiffness(),
        "pp" => MaterialSpec::polypropylene().stiffness(),
        other => Err(Error::Config(format!("unknown preset {other:?}"))),
    }
}

/// Mandel transfer matrix, row major, for a glass fiber in the preset matrix.
pub fn transfer_matrix(preset: &str, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    let cm = matrix_preset(preset)?;
    let cf = MaterialSpec::glass().stiffness()?;
    let base = StrainTransferOperator::from_fiber_z_frame(&cm, &cf, &FiberSection::circular(1.0)?)?;
    let op = rotate_stp(&base, alpha, beta)?;
    Ok(op.matrix(Notation::Mandel).iter().flatten().copied().collect())
}

/// Directional Young's modulus of the preset matrix for `samples` in-plane angles
/// `2πk / samples` measured from the reinforcement.
pub fn modulus_curve(preset: &str, samples: usize) -> Result<Vec<f64>> {
    let c = axis_swap_xz(&matrix_preset(preset)?);
    (0..samples)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / samples as f64;
            directional_modulus(&c, &Vector3::new(t.cos(), t.sin(), 0.0))
        })
        .collect()
}

/// Strain along the fiber tangent for an L-shaped fiber in a pulled plate.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct PlateTrace {
    s: Vec<f64>,
    no_fiber: Vec<f64>,
    transferred: Vec<f64>,
    recovered: Vec<f64>,
    skipped: bool,
}

#[wasm_bindgen]
impl PlateTrace {
    /// Arc length along the fiber, mm.
    pub fn s(&self) -> Vec<f64> {
        self.s.clone()
    }

    /// `P : ε_nf`.
    pub fn no_fiber(&self) -> Vec<f64> {
        self.no_fiber.clone()
    }

    /// `P : (T : ε_nf)`; equal to `no_fiber` since the fiber row of T is the identity.
    pub fn transferred(&self) -> Vec<f64> {
        self.transferred.clone()
    }

    /// `P : ε_f` from the solve with the fiber stretching term.
    pub fn recovered(&self) -> Vec<f64> {
        self.recovered.clone()
    }

    /// True when the fiber is not stiffer than the matrix and no fiber solve ran.
    pub fn skipped(&self) -> bool {
        self.skipped
    }
}

/// 80 × 80 × 10 mm polypropylene plate, clamped at x = 0 and pulled by `pull` mm
/// at x = 80. The fiber runs along x from the clamped edge to `bend_cell` × 10 mm,
/// then along y to the far edge.
pub fn plate_trace(fiber_modulus: f64, pull: f64, bend_cell: usize) -> Result<PlateTrace> {
    if !(1..=7).contains(&bend_cell) {
        return Err(Error::Config(format!("bend cell must be in 1..=7, got {bend_cell}")));
    }
    let grid = build_box_mesh(8, 8, 2, 80.0, 80.0, 10.0)?;
    let mut chain: Vec<usize> = (0..=bend_cell).map(|i| grid.vertex_index(i, 2, 1)).collect();
    chain.extend((3..=8).map(|j| grid.vertex_index(bend_cell, j, 1)));
    let path = validate_fiber_path(&grid.mesh, &chain)?;
    let case = Case {
        mesh: grid.mesh,
        path,
        matrix: MaterialSpec::polypropylene().stiffness()?,
        fiber: isotropic_stiffness(fiber_modulus, GLASS.1)?,
        reference: None,
        section: FiberSection::circular(2.0)?,
        boundary_conditions: vec![
            BoundaryCondition::on_set("xmin", [true; 3], [0.0; 3]),
            BoundaryCondition::on_set("xmax", [true, false, false], [pull, 0.0, 0.0]),
        ],
        body_force: Vector3::zeros(),
        alpha: 0.0,
        solver: CgSettings::default(),
    };
    let r = case.run(true)?;
    let along = |c: [f64; 6], k: usize| fiber_normal_strain(&SymTensor2::from_components(c), &r.tangents[k]);
    let rows = &r.trace.rows;
    Ok(PlateTrace {
        s: rows.iter().map(|row| row.s).collect(),
        no_fiber: rows.iter().enumerate().map(|(k, row)| along(row.enf, k)).collect(),
        transferred: rows.iter().enumerate().map(|(k, row)| along(row.etnf, k)).collect(),
        recovered: rows.iter().enumerate().map(|(k, row)| along(row.ef, k)).collect(),
        skipped: r.fiber_solve_skipped,
    })
}

fn js(e: Error) -> JsError {
    JsError::new(&format!("{}: {e}", e.category()))
}

/// 36 Mandel entries, row major. Angles in radians.
#[wasm_bindgen(js_name = transferMatrix)]
pub fn transfer_matrix_js(preset: &str, alpha: f64, beta: f64) -> std::result::Result<Vec<f64>, JsError> {
    transfer_matrix(preset, alpha, beta).map_err(js)
}

#[wasm_bindgen(js_name = modulusCurve)]
pub fn modulus_curve_js(preset: &str, samples: usize) -> std::result::Result<Vec<f64>, JsError> {
    modulus_curve(preset, samples).map_err(js)
}

#[wasm_bindgen(js_name = fiberModulus)]
pub fn fiber_modulus() -> f64 {
    GLASS.0
}

#[wasm_bindgen(js_name = plateTrace)]
pub fn plate_trace_js(fiber_modulus: f64, pull: f64, bend_cell: usize) -> std::result::Result<PlateTrace, JsError> {
    plate_trace(fiber_modulus, pull, bend_cell).map_err(js)
}
