use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::Case;
use crate::error::{Error, Result};
use crate::fem::{CgSettings, MaterialMap};
use crate::mesh::{build_box_mesh, load_msh, validate_fiber_path, BoundaryCondition};
use crate::stp::FiberSection;
use crate::tensor::MaterialSpec;

/// A JSON case description. Relative paths are resolved against the directory of
/// the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub mesh: MeshSource,
    pub fiber: FiberSource,
    pub materials: Materials,
    pub fiber_radius: f64,
    pub boundary_conditions: Vec<BoundaryCondition>,
    #[serde(default)]
    pub body_force: [f64; 3],
    #[serde(default)]
    pub stp: StpSettings,
    #[serde(default)]
    pub solver: CgSettings,
    /// CSV trace destination.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub unit_scale: UnitScale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeshSource {
    /// Gmsh MSH 2.2 ASCII file.
    Path(PathBuf),
    Box {
        counts: [usize; 3],
        lengths: [f64; 3],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FiberSource {
    /// Line physical group of an MSH mesh.
    Group(String),
    Vertices(Vec<usize>),
    /// Grid line of a box mesh, see [`crate::mesh::BoxMesh::grid_line`].
    GridLine { axis: usize, p: usize, q: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialSource {
    File { path: PathBuf },
    Inline(MaterialSpec),
}

impl MaterialSource {
    fn load(&self, base: &Path) -> Result<MaterialSpec> {
        match self {
            MaterialSource::File { path } => MaterialSpec::load(&base.join(path)),
            MaterialSource::Inline(m) => Ok(m.clone()),
        }
    }
}

/// The matrix material is given in the global frame; the fiber material in its own
/// frame with the fiber along the first axis. `reference_regions` maps region tags
/// (or volume physical group names) to materials for the resolved reference solve;
/// other regions use the matrix material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Materials {
    pub matrix: MaterialSource,
    pub fiber: MaterialSource,
    #[serde(default)]
    pub reference_regions: Option<BTreeMap<String, MaterialSource>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StpSettings {
    /// Rotation of the matrix material about the local axis 3; the rotation about z
    /// follows the fiber tangent at each vertex.
    pub alpha: f64,
}

/// Input units relative to Pa and m, e.g. `{"stress": 1e9, "length": 1e-3}` for GPa
/// and mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnitScale {
    pub stress: f64,
    pub length: f64,
}

impl Default for UnitScale {
    fn default() -> Self {
        Self {
            stress: 1.0,
            length: 1.0,
        }
    }
}

impl CaseConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a config and returns it with the directory its paths are relative to.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let cfg = Self::from_json(&std::fs::read_to_string(path)?)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    /// Loads the mesh and materials and converts everything to SI units.
    pub fn resolve(&self, base: &Path) -> Result<Case> {
        let UnitScale { stress, length } = self.unit_scale;
        if !(stress > 0.0 && length > 0.0) {
            return Err(Error::Config(format!("unit scales must be positive, got {stress}, {length}")));
        }
        if !(self.fiber_radius > 0.0) {
            return Err(Error::Config(format!("fiber_radius must be positive, got {}", self.fiber_radius)));
        }

        let (mesh, chains, region_names, grid) = match &self.mesh {
            MeshSource::Path(p) => {
                let f = load_msh(&std::fs::read_to_string(base.join(p))?)?;
                (f.mesh, f.chains, f.region_names, None)
            }
            MeshSource::Box { counts, lengths } => {
                let b = build_box_mesh(counts[0], counts[1], counts[2], lengths[0], lengths[1], lengths[2])?;
                (b.mesh.clone(), BTreeMap::new(), BTreeMap::new(), Some(b))
            }
        };
        let chain = match &self.fiber {
            FiberSource::Group(g) => chains
                .get(g)
                .cloned()
                .ok_or_else(|| Error::Config(format!("no fiber group {g:?} in the mesh")))?,
            FiberSource::Vertices(v) => v.clone(),
            FiberSource::GridLine { axis, p, q } => grid
                .as_ref()
                .ok_or_else(|| Error::Config("grid_line fibers need a box mesh".into()))?
                .grid_line(*axis, *p, *q)?,
        };
        let mesh = if length == 1.0 { mesh } else { mesh.scaled(length)? };
        let path = validate_fiber_path(&mesh, &chain)?;

        let matrix = self.materials.matrix.load(base)?.scaled(stress).stiffness()?;
        let fiber = self.materials.fiber.load(base)?.scaled(stress).stiffness()?;
        let reference = match &self.materials.reference_regions {
            None => None,
            Some(map) => {
                let mut mats = MaterialMap::uniform(matrix.clone());
                for (key, src) in map {
                    let tag = match key.parse::<i32>() {
                        Ok(t) => t,
                        Err(_) => *region_names
                            .get(key)
                            .ok_or_else(|| Error::Config(format!("unknown region {key:?}")))?,
                    };
                    mats = mats.with_region(tag, src.load(base)?.scaled(stress).stiffness()?);
                }
                Some(mats)
            }
        };

        let bcs: Vec<BoundaryCondition> = self.boundary_conditions.iter().map(|bc| bc.scaled(length)).collect();
        let [fx, fy, fz] = self.body_force;
        Ok(Case {
            mesh,
            path,
            matrix,
            fiber,
            reference,
            section: FiberSection::circular(self.fiber_radius * length)?,
            boundary_conditions: bcs,
            body_force: Vector3::new(fx, fy, fz) * (stress / length),
            alpha: self.stp.alpha,
            solver: self.solver,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BAR: &str = r#"{
        "mesh": {"box": {"counts": [4, 1, 1], "lengths": [4, 1, 1]}},
        "fiber": {"grid_line": {"axis": 0, "p": 0, "q": 0}},
        "materials": {
            "matrix": {"isotropic": {"E": 1.665, "nu": 0.36}},
            "fiber": {"isotropic": {"E": 73, "nu": 0.18}}
        },
        "fiber_radius": 0.1,
        "boundary_conditions": [
            {"set": "xmin", "value": [0, 0, 0]},
            {"set": "xmax", "components": [true, false, false], "value": [0.01, 0, 0]}
        ],
        "unit_scale": {"stress": 1e9, "length": 1e-3}
    }"#;

    #[test]
    fn parses_and_scales() {
        let cfg = CaseConfig::from_json(BAR).unwrap();
        assert_eq!(cfg.stp.alpha, 0.0);
        assert_eq!(cfg.solver, CgSettings::default());
        let case = cfg.resolve(Path::new(".")).unwrap();
        assert!((case.path.total_length() - 4e-3).abs() < 1e-18);
        assert!((case.section.radius - 1e-4).abs() < 1e-20);
        let si = crate::tensor::isotropic_stiffness(1.665e9, 0.36).unwrap();
        assert!(case.matrix.max_abs_diff(&si) < 1e-6 * si.max_abs());
        assert_eq!(case.boundary_conditions[1].scaled(1.0), case.boundary_conditions[1]);
        assert!(case.reference.is_none());
    }

    #[test]
    fn rejects_unknown_fields_and_groups() {
        let bad = BAR.replace("\"fiber_radius\"", "\"fibre_radius\"");
        assert!(CaseConfig::from_json(&bad).is_err());
        let group = BAR.replace(r#"{"grid_line": {"axis": 0, "p": 0, "q": 0}}"#, r#"{"group": "fiber"}"#);
        let err = CaseConfig::from_json(&group).unwrap().resolve(Path::new(".")).unwrap_err();
        assert_eq!(err.category(), "config");
    }
}
