//! Shared case builders for the integration and acceptance tests.
#![allow(dead_code)]

use fiberstp::fem::CgSettings;
use fiberstp::mesh::{build_box_mesh, validate_fiber_path, BoundaryCondition, BoxMesh};
use fiberstp::pipeline::Case;
use fiberstp::stp::FiberSection;
use fiberstp::tensor::{isotropic_stiffness, MaterialSpec, Tensor4};
use nalgebra::Vector3;

pub const PP_E: f64 = 1.665;
pub const PP_NU: f64 = 0.36;
pub const GLASS_E: f64 = 73.0;
pub const GLASS_NU: f64 = 0.18;

/// Printed transfer matrices (Mandel) for the glass fiber in the homogenized plate:
/// sensor parallel to the reinforcement, and sensor perpendicular to it in the plane.
pub const REFERENCE_T_PARALLEL: [[f64; 6]; 6] = [
    [1.00, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-0.15, 0.10, 0.02, 0.0, 0.0, 0.0],
    [-0.15, 0.02, 0.10, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.08, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.11, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.11],
];

pub const REFERENCE_T_PERPENDICULAR: [[f64; 6]; 6] = [
    [0.55, -0.14, 0.02, 0.0, 0.0, 0.0],
    [0.0, 1.00, 0.0, 0.0, 0.0, 0.0],
    [-0.08, -0.14, 0.11, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.10, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.11, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.11],
];

pub fn pp() -> Tensor4 {
    isotropic_stiffness(PP_E, PP_NU).unwrap()
}

pub fn glass() -> Tensor4 {
    isotropic_stiffness(GLASS_E, GLASS_NU).unwrap()
}

/// Homogenized plate stiffness with the reinforcement along z.
pub fn composite_fiber_z() -> Tensor4 {
    MaterialSpec::glass_pp_composite_fiber_z().stiffness().unwrap()
}

pub struct Bar {
    pub grid: BoxMesh,
    pub case: Case,
    pub length: f64,
    pub cross_section: f64,
    pub stretch: f64,
}

/// 100 × 10 × 10 bar, 10 × 2 × 2 cells, fiber on the central x grid line. The end
/// faces only constrain u_x; the centre of the x = 0 face is pinned laterally and
/// one more vertex of that face in y, which removes the rigid modes while leaving
/// the lateral contraction free.
pub fn composite_bar(fiber_e: f64) -> Bar {
    let grid = build_box_mesh(10, 2, 2, 100.0, 10.0, 10.0).unwrap();
    let line = grid.grid_line(0, 1, 1).unwrap();
    let path = validate_fiber_path(&grid.mesh, &line).unwrap();
    let stretch = 1.0;
    let x = [true, false, false];
    let centre = grid.vertex_index(0, 1, 1);
    let bottom = grid.vertex_index(0, 1, 0);
    let case = Case {
        mesh: grid.mesh.clone(),
        path,
        matrix: pp(),
        fiber: isotropic_stiffness(fiber_e, GLASS_NU).unwrap(),
        reference: None,
        section: FiberSection::circular(2.0).unwrap(),
        boundary_conditions: vec![
            BoundaryCondition::on_set("xmin", x, [0.0; 3]),
            BoundaryCondition::on_set("xmax", x, [stretch, 0.0, 0.0]),
            BoundaryCondition::on_vertices(vec![centre], [false, true, true], [0.0; 3]),
            BoundaryCondition::on_vertices(vec![bottom], [false, true, false], [0.0; 3]),
        ],
        body_force: Vector3::zeros(),
        alpha: 0.0,
        solver: CgSettings::default(),
    };
    Bar {
        grid,
        case,
        length: 100.0,
        cross_section: 100.0,
        stretch,
    }
}

/// 80 × 80 × 10 plate, 8 × 8 × 2 cells, with an L-shaped fiber in the mid plane:
/// along x from the clamped face to x = 60, then along y to the far edge. The
/// x = 80 face is pulled by 0.8 in x.
pub fn bent_fiber_plate() -> (BoxMesh, Case) {
    let grid = build_box_mesh(8, 8, 2, 80.0, 80.0, 10.0).unwrap();
    let mut chain: Vec<usize> = (0..=6).map(|i| grid.vertex_index(i, 2, 1)).collect();
    chain.extend((3..=8).map(|j| grid.vertex_index(6, j, 1)));
    let path = validate_fiber_path(&grid.mesh, &chain).unwrap();
    let case = Case {
        mesh: grid.mesh.clone(),
        path,
        matrix: pp(),
        fiber: glass(),
        reference: None,
        section: FiberSection::circular(2.0).unwrap(),
        boundary_conditions: vec![
            BoundaryCondition::on_set("xmin", [true; 3], [0.0; 3]),
            BoundaryCondition::on_set("xmax", [true, false, false], [0.8, 0.0, 0.0]),
        ],
        body_force: Vector3::zeros(),
        alpha: 0.0,
        solver: CgSettings::default(),
    };
    (grid, case)
}
