use nalgebra::Matrix3;

use super::assembly::shape_gradients;
use super::DisplacementField;
use crate::error::{Error, Result};
use crate::mesh::TetMesh;
use crate::tensor::SymTensor2;

/// Constant strain per tet.
#[derive(Debug, Clone, PartialEq)]
pub struct StrainField(pub Vec<SymTensor2>);

impl StrainField {
    pub fn get(&self, t: usize) -> &SymTensor2 {
        &self.0[t]
    }
}

pub fn strain_per_tet(mesh: &TetMesh, u: &DisplacementField) -> Result<StrainField> {
    let mut out = Vec::with_capacity(mesh.n_tets());
    for (t, tet) in mesh.tets().iter().enumerate() {
        let grads = shape_gradients(mesh, t)?;
        let mut h = Matrix3::zeros();
        for (a, &v) in tet.iter().enumerate() {
            h += u.at(v) * grads[a].transpose();
        }
        out.push(SymTensor2::from_matrix(&h));
    }
    Ok(StrainField(out))
}

/// Volume-weighted mean of the strains of the tets around vertex `v`.
pub fn vertex_average_strain(mesh: &TetMesh, strain: &StrainField, v: usize) -> SymTensor2 {
    let mut sum = SymTensor2::zero();
    let mut vol = 0.0;
    for &t in mesh.vertex_tets(v) {
        let w = mesh.tet_volume(t);
        sum = sum + *strain.get(t) * w;
        vol += w;
    }
    sum * (1.0 / vol)
}

/// `(u(q) − u(p)) · (q − p) / |q − p|²`.
pub fn edge_fiber_strain(mesh: &TetMesh, u: &DisplacementField, p: usize, q: usize) -> Result<f64> {
    if !mesh.is_edge(p, q) {
        return Err(Error::NotAnEdge(p, q));
    }
    let d = mesh.vertex(q) - mesh.vertex(p);
    let l2 = d.norm_squared();
    if !(l2 > 0.0) {
        return Err(Error::InvalidFiberPath(format!("vertices {p} and {q} coincide")));
    }
    Ok((u.at(q) - u.at(p)).dot(&d) / l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;
    use nalgebra::Vector3;

    #[test]
    fn strain_of_simple_fields() {
        let b = build_box_mesh(2, 2, 2, 1.0, 1.0, 1.0).unwrap();
        let g = Matrix3::new(0.01, 0.002, -0.003, 0.004, -0.02, 0.001, 0.0, 0.005, 0.007);
        let u = DisplacementField::from_fn(&b.mesh, |x| g * x + Vector3::new(1.0, 2.0, 3.0));
        let expected = SymTensor2::from_matrix(&g);
        for e in &strain_per_tet(&b.mesh, &u).unwrap().0 {
            assert!((*e - expected).max_abs() < 1e-13);
        }
        let w = Matrix3::new(0.0, 0.3, -0.2, -0.3, 0.0, 0.1, 0.2, -0.1, 0.0);
        let rot = DisplacementField::from_fn(&b.mesh, |x| w * x);
        for e in &strain_per_tet(&b.mesh, &rot).unwrap().0 {
            assert!(e.max_abs() < 1e-15);
        }
    }

    #[test]
    fn edge_strain_examples() {
        let b = build_box_mesh(1, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let (p, q) = (b.vertex_index(0, 0, 0), b.vertex_index(1, 1, 1));
        let stretch = DisplacementField::from_fn(&b.mesh, |x| x * 0.01);
        assert!((edge_fiber_strain(&b.mesh, &stretch, p, q).unwrap() - 0.01).abs() < 1e-16);
        let q = b.vertex_index(1, 0, 0);
        let lateral = DisplacementField::from_fn(&b.mesh, |x| Vector3::new(0.0, x.x, 0.0));
        assert_eq!(edge_fiber_strain(&b.mesh, &lateral, p, q).unwrap(), 0.0);
        assert!(edge_fiber_strain(&b.mesh, &lateral, p, p).is_err());
    }
}
