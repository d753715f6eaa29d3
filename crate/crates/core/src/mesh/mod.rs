//! Tetrahedral meshes, fiber paths along mesh edges and Dirichlet boundary data.

mod boxmesh;
mod msh;

pub use boxmesh::{build_box_mesh, BoxMesh, FACE_SETS};
pub use msh::{load_msh, write_msh, MshFile};

use std::collections::{BTreeMap, HashMap, HashSet};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tets with `|6·volume|` below this fraction of the cubed bounding-box diagonal are
/// rejected as degenerate.
pub const DEGENERATE_VOLUME_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TetMesh {
    vertices: Vec<Vector3<f64>>,
    tets: Vec<[usize; 4]>,
    regions: Vec<i32>,
    vertex_sets: BTreeMap<String, Vec<usize>>,
    vertex_tets: Vec<Vec<usize>>,
    edge_tets: HashMap<(usize, usize), Vec<usize>>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl TetMesh {
    /// Builds a mesh, flipping negatively oriented tets (swap of their last two
    /// vertices). Every vertex must belong to at least one tet.
    pub fn new(vertices: Vec<Vector3<f64>>, tets: Vec<[usize; 4]>, regions: Vec<i32>) -> Result<Self> {
        if tets.is_empty() {
            return Err(Error::InvalidMesh("mesh has no tetrahedra".into()));
        }
        if regions.len() != tets.len() {
            return Err(Error::InvalidMesh(format!(
                "{} region tags for {} tetrahedra",
                regions.len(),
                tets.len()
            )));
        }
        if let Some(v) = vertices.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidMesh(format!("vertex {v} has non-finite coordinates")));
        }
        let n = vertices.len();
        let diag = bounding_diagonal(&vertices);
        let threshold = DEGENERATE_VOLUME_RATIO * diag.powi(3);
        let mut seen = HashSet::with_capacity(tets.len());
        let mut vertex_tets = vec![Vec::new(); n];
        let mut edge_tets: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut oriented = Vec::with_capacity(tets.len());
        for (t, tet) in tets.into_iter().enumerate() {
            if let Some(&v) = tet.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidMesh(format!("tet {t} references vertex {v} of {n}")));
            }
            let six = six_volume(&vertices, &tet);
            if !(six.abs() > threshold) {
                return Err(Error::DegenerateTet { tet: t, six_volume: six });
            }
            let tet = if six < 0.0 { [tet[0], tet[1], tet[3], tet[2]] } else { tet };
            let mut key = tet;
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(Error::InvalidMesh(format!("tet {t} duplicates an earlier tet")));
            }
            for &v in &tet {
                vertex_tets[v].push(t);
            }
            for (i, j) in TET_EDGES {
                edge_tets.entry(edge_key(tet[i], tet[j])).or_default().push(t);
            }
            oriented.push(tet);
        }
        if let Some(v) = vertex_tets.iter().position(Vec::is_empty) {
            return Err(Error::InvalidMesh(format!("vertex {v} belongs to no tetrahedron")));
        }
        Ok(Self {
            vertices,
            tets: oriented,
            regions,
            vertex_sets: BTreeMap::new(),
            vertex_tets,
            edge_tets,
        })
    }

    /// Same mesh with all coordinates multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidMesh(format!("scale factor must be positive, got {factor}")));
        }
        let mut out = self.clone();
        for p in &mut out.vertices {
            *p *= factor;
        }
        Ok(out)
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Vector3<f64> {
        self.vertices[v]
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn regions(&self) -> &[i32] {
        &self.regions
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn n_dofs(&self) -> usize {
        3 * self.vertices.len()
    }

    /// Positive after canonical orientation.
    pub fn tet_volume(&self, t: usize) -> f64 {
        six_volume(&self.vertices, &self.tets[t]) / 6.0
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.n_tets()).map(|t| self.tet_volume(t)).sum()
    }

    /// Edge vectors `p1 − p0`, `p2 − p0`, `p3 − p0` as columns.
    pub fn tet_jacobian(&self, t: usize) -> Matrix3<f64> {
        let [a, b, c, d] = self.tets[t].map(|v| self.vertices[v]);
        Matrix3::from_columns(&[b - a, c - a, d - a])
    }

    pub fn bounding_diagonal(&self) -> f64 {
        bounding_diagonal(&self.vertices)
    }

    pub fn vertex_tets(&self, v: usize) -> &[usize] {
        &self.vertex_tets[v]
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edge_tets.contains_key(&edge_key(a, b))
    }

    /// Number of distinct edges.
    pub fn n_edges(&self) -> usize {
        self.edge_tets.len()
    }

    pub fn with_vertex_set(mut self, name: impl Into<String>, mut vertices: Vec<usize>) -> Result<Self> {
        let name = name.into();
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.n_vertices()) {
            return Err(Error::InvalidMesh(format!("vertex set {name:?} references vertex {v}")));
        }
        vertices.sort_unstable();
        vertices.dedup();
        self.vertex_sets.insert(name, vertices);
        Ok(self)
    }

    pub fn vertex_set(&self, name: &str) -> Result<&[usize]> {
        self.vertex_sets
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownVertexSet(name.to_string()))
    }

    pub fn vertex_sets(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.vertex_sets
    }

    /// Vertices on faces that belong to exactly one tet, sorted.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        let mut faces: HashMap<[usize; 3], usize> = HashMap::new();
        for tet in &self.tets {
            for skip in 0..4 {
                let mut f = [0; 3];
                let mut k = 0;
                for (i, &v) in tet.iter().enumerate() {
                    if i != skip {
                        f[k] = v;
                        k += 1;
                    }
                }
                f.sort_unstable();
                *faces.entry(f).or_default() += 1;
            }
        }
        let mut out: Vec<usize> = faces
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .flat_map(|(f, _)| f)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn six_volume(vertices: &[Vector3<f64>], tet: &[usize; 4]) -> f64 {
    let [a, b, c, d] = tet.map(|v| vertices[v]);
    (b - a).dot(&(c - a).cross(&(d - a)))
}

fn bounding_diagonal(vertices: &[Vector3<f64>]) -> f64 {
    let mut lo = Vector3::repeat(f64::INFINITY);
    let mut hi = Vector3::repeat(f64::NEG_INFINITY);
    for p in vertices {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    if vertices.is_empty() {
        0.0
    } else {
        (hi - lo).norm()
    }
}

/// All tets containing both `a` and `b`.
pub fn edge_incident_tets(mesh: &TetMesh, a: usize, b: usize) -> Result<&[usize]> {
    if a == b {
        return Err(Error::NotAnEdge(a, b));
    }
    mesh.edge_tets
        .get(&edge_key(a, b))
        .map(Vec::as_slice)
        .ok_or(Error::NotAnEdge(a, b))
}

/// Ordered chain of mesh vertices with arc-length bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberPath {
    vertices: Vec<usize>,
    edge_lengths: Vec<f64>,
    arc_length: Vec<f64>,
}

impl FiberPath {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }

    /// Cumulative arc length per vertex, starting at zero.
    pub fn arc_length(&self) -> &[f64] {
        &self.arc_length
    }

    pub fn total_length(&self) -> f64 {
        self.edge_lengths.iter().sum()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_lengths.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

pub fn validate_fiber_path(mesh: &TetMesh, chain: &[usize]) -> Result<FiberPath> {
    if chain.len() < 2 {
        return Err(Error::InvalidFiberPath(format!(
            "a fiber needs at least one edge, got {} vertices",
            chain.len()
        )));
    }
    let mut seen = HashSet::new();
    for &v in chain {
        if v >= mesh.n_vertices() {
            return Err(Error::InvalidFiberPath(format!("vertex {v} out of range")));
        }
        if !seen.insert(v) {
            return Err(Error::InvalidFiberPath(format!("vertex {v} repeats")));
        }
    }
    let mut edge_lengths = Vec::with_capacity(chain.len() - 1);
    let mut arc_length = Vec::with_capacity(chain.len());
    arc_length.push(0.0);
    for w in chain.windows(2) {
        if !mesh.is_edge(w[0], w[1]) {
            return Err(Error::NotAnEdge(w[0], w[1]));
        }
        let l = (mesh.vertex(w[1]) - mesh.vertex(w[0])).norm();
        edge_lengths.push(l);
        arc_length.push(arc_length.last().unwrap() + l);
    }
    Ok(FiberPath {
        vertices: chain.to_vec(),
        edge_lengths,
        arc_length,
    })
}

/// Which vertices a boundary condition acts on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexSelection {
    Set(String),
    Vertices(Vec<usize>),
}

/// Prescribed displacement: a constant vector or the affine field `offset + G x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prescribed {
    Value([f64; 3]),
    Affine {
        offset: [f64; 3],
        gradient: [[f64; 3]; 3],
    },
}

impl Prescribed {
    pub fn at(&self, x: &Vector3<f64>) -> Vector3<f64> {
        match self {
            Prescribed::Value(v) => Vector3::from(*v),
            Prescribed::Affine { offset, gradient } => {
                let g = Matrix3::from_fn(|i, j| gradient[i][j]);
                Vector3::from(*offset) + g * x
            }
        }
    }

    fn scaled(&self, length: f64) -> Self {
        match self {
            Prescribed::Value(v) => Prescribed::Value(v.map(|c| c * length)),
            // the gradient is dimensionless
            Prescribed::Affine { offset, gradient } => Prescribed::Affine {
                offset: offset.map(|c| c * length),
                gradient: *gradient,
            },
        }
    }
}

fn all_components() -> [bool; 3] {
    [true; 3]
}

/// Dirichlet data `u_c = u0_c(x)` on the selected vertices for every masked component c.
///
/// JSON form: `{"set": "xmin", "components": [true, false, false], "value": [0, 0, 0]}`;
/// `"vertices": [..]` may replace `"set"` and `"affine": {"offset", "gradient"}` may
/// replace `"value"`. `components` defaults to all three.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    #[serde(flatten)]
    pub selection: VertexSelection,
    #[serde(default = "all_components")]
    pub components: [bool; 3],
    #[serde(flatten)]
    pub prescribed: Prescribed,
}

impl BoundaryCondition {
    pub fn on_set(name: &str, components: [bool; 3], value: [f64; 3]) -> Self {
        Self {
            selection: VertexSelection::Set(name.to_string()),
            components,
            prescribed: Prescribed::Value(value),
        }
    }

    pub fn on_vertices(vertices: Vec<usize>, components: [bool; 3], value: [f64; 3]) -> Self {
        Self {
            selection: VertexSelection::Vertices(vertices),
            components,
            prescribed: Prescribed::Value(value),
        }
    }

    /// Same condition with displacements multiplied by `length`.
    pub fn scaled(&self, length: f64) -> Self {
        Self {
            prescribed: self.prescribed.scaled(length),
            ..self.clone()
        }
    }

    pub fn vertices<'a>(&'a self, mesh: &'a TetMesh) -> Result<&'a [usize]> {
        match &self.selection {
            VertexSelection::Set(name) => mesh.vertex_set(name),
            VertexSelection::Vertices(v) => {
                if let Some(&bad) = v.iter().find(|&&x| x >= mesh.n_vertices()) {
                    return Err(Error::InvalidBoundaryCondition(format!(
                        "vertex {bad} out of range"
                    )));
                }
                Ok(v)
            }
        }
    }

    /// `(dof, value)` pairs with dof `3·vertex + component`.
    pub fn prescribed_dofs(&self, mesh: &TetMesh) -> Result<Vec<(usize, f64)>> {
        if !self.components.iter().any(|&c| c) {
            return Err(Error::InvalidBoundaryCondition("empty component mask".into()));
        }
        let mut out = Vec::new();
        for &v in self.vertices(mesh)? {
            let u = self.prescribed.at(&mesh.vertex(v));
            for c in (0..3).filter(|&c| self.components[c]) {
                out.push((3 * v + c, u[c]));
            }
        }
        Ok(out)
    }
}
