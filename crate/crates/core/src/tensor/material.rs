use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{isotropic_stiffness, Tensor4};
use crate::error::Result;

/// Material file content: `{"isotropic": {"E": .., "nu": ..}}` or `{"voigt": [[..6..]; 6]}`.
///
/// Units are whatever consistent system the caller uses; the documented convention
/// is Pa and meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MaterialSpec {
    Isotropic {
        #[serde(rename = "E")]
        e: f64,
        nu: f64,
    },
    Voigt([[f64; 6]; 6]),
}

impl MaterialSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Stiffness tensor, checked for positive definiteness.
    pub fn stiffness(&self) -> Result<Tensor4> {
        let c = match self {
            MaterialSpec::Isotropic { e, nu } => isotropic_stiffness(*e, *nu)?,
            MaterialSpec::Voigt(m) => Tensor4::from_voigt_stiffness(m)?,
        };
        c.check_positive_definite()?;
        Ok(c)
    }

    /// Same material with all moduli multiplied by `factor` (unit conversion).
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            MaterialSpec::Isotropic { e, nu } => MaterialSpec::Isotropic { e: e * factor, nu: *nu },
            MaterialSpec::Voigt(m) => MaterialSpec::Voigt(m.map(|row| row.map(|v| v * factor))),
        }
    }

    /// Homogenized glass/polypropylene composite (50 % fiber volume fraction) with the
    /// reinforcement along z, in GPa.
    pub fn glass_pp_composite_fiber_z() -> Self {
        MaterialSpec::Voigt([
            [6.34, 3.03, 2.43, 0.0, 0.0, 0.0],
            [3.03, 6.34, 2.43, 0.0, 0.0, 0.0],
            [2.43, 2.43, 38.61, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.75, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.75, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.65],
        ])
    }

    /// Glass, `E = 73 GPa`, `ν = 0.18`.
    pub fn glass() -> Self {
        MaterialSpec::Isotropic { e: 73.0, nu: 0.18 }
    }

    /// Polypropylene, `E = 1.665 GPa`, `ν = 0.36`.
    pub fn polypropylene() -> Self {
        MaterialSpec::Isotropic { e: 1.665, nu: 0.36 }
    }
}
