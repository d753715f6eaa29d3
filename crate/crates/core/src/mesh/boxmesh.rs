use nalgebra::Vector3;

use super::TetMesh;
use crate::error::{Error, Result};

/// Names of the face vertex sets created by [`build_box_mesh`].
pub const FACE_SETS: [&str; 6] = ["xmin", "xmax", "ymin", "ymax", "zmin", "zmax"];

/// Structured box mesh on `[0, lx] × [0, ly] × [0, lz]`.
#[derive(Debug, Clone)]
pub struct BoxMesh {
    pub mesh: TetMesh,
    pub counts: [usize; 3],
    pub lengths: [f64; 3],
}

impl BoxMesh {
    pub fn vertex_index(&self, i: usize, j: usize, k: usize) -> usize {
        let [nx, ny, _] = self.counts;
        i + (nx + 1) * (j + (ny + 1) * k)
    }

    /// Vertices of the grid line parallel to `axis`, at grid indices `(p, q)` in the
    /// remaining two axes taken in increasing order (y, z for axis 0; x, z for axis 1;
    /// x, y for axis 2).
    pub fn grid_line(&self, axis: usize, p: usize, q: usize) -> Result<Vec<usize>> {
        let [a, b] = match axis {
            0 => [1, 2],
            1 => [0, 2],
            2 => [0, 1],
            _ => return Err(Error::InvalidMesh(format!("axis {axis} out of range"))),
        };
        if p > self.counts[a] || q > self.counts[b] {
            return Err(Error::InvalidMesh(format!(
                "grid line ({p}, {q}) outside a {:?} grid",
                self.counts
            )));
        }
        Ok((0..=self.counts[axis])
            .map(|t| {
                let mut ijk = [0; 3];
                ijk[axis] = t;
                ijk[a] = p;
                ijk[b] = q;
                self.vertex_index(ijk[0], ijk[1], ijk[2])
            })
            .collect())
    }
}

/// Each cell is split into six tets around its main diagonal, all with the same
/// diagonal direction, so the triangulation is conforming and every grid segment is
/// a mesh edge. Region tag 0 everywhere.
pub fn build_box_mesh(nx: usize, ny: usize, nz: usize, lx: f64, ly: f64, lz: f64) -> Result<BoxMesh> {
    let counts = [nx, ny, nz];
    let lengths = [lx, ly, lz];
    if counts.contains(&0) {
        return Err(Error::InvalidMesh(format!("cell counts must be positive, got {counts:?}")));
    }
    if !lengths.iter().all(|&l| l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidMesh(format!("lengths must be positive, got {lengths:?}")));
    }
    let index = |i: usize, j: usize, k: usize| i + (nx + 1) * (j + (ny + 1) * k);
    // exact end coordinates so face sets can be selected by index
    let coord = |t: usize, n: usize, l: f64| if t == n { l } else { l * t as f64 / n as f64 };

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push(Vector3::new(coord(i, nx, lx), coord(j, ny, ly), coord(k, nz, lz)));
            }
        }
    }

    const PERMUTATIONS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = Vec::with_capacity(6 * nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                for perm in PERMUTATIONS {
                    let mut c = [i, j, k];
                    let mut tet = [index(c[0], c[1], c[2]); 4];
                    for (step, &axis) in perm.iter().enumerate() {
                        c[axis] += 1;
                        tet[step + 1] = index(c[0], c[1], c[2]);
                    }
                    tets.push(tet);
                }
            }
        }
    }
    let regions = vec![0; tets.len()];
    let mut mesh = TetMesh::new(vertices, tets, regions)?;

    for (axis, n) in counts.iter().enumerate() {
        for (side, target) in [0, *n].into_iter().enumerate() {
            let mut set = Vec::new();
            for k in 0..=nz {
                for j in 0..=ny {
                    for i in 0..=nx {
                        if [i, j, k][axis] == target {
                            set.push(index(i, j, k));
                        }
                    }
                }
            }
            mesh = mesh.with_vertex_set(FACE_SETS[2 * axis + side], set)?;
        }
    }
    Ok(BoxMesh { mesh, counts, lengths })
}
