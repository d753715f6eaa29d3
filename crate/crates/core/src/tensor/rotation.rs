use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Sine and cosine with quarter turns snapped to exact 0 and ±1.
fn sin_cos(angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    if s.abs() < 1e-15 {
        (0.0, c.signum())
    } else if c.abs() < 1e-15 {
        (s.signum(), 0.0)
    } else {
        (s, c)
    }
}

/// Proper orthogonal 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    /// Accepts `m` when `mᵀm = I` and `det m = 1` to within `1e-12`.
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let defect = (m.transpose() * m - Matrix3::identity()).amax();
        if !(defect <= 1e-12) {
            return Err(Error::InvalidRotation(format!("|RᵀR - I| = {defect:e}")));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidRotation(format!("det R = {det}")));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn about_x(angle: f64) -> Self {
        let (s, c) = sin_cos(angle);
        Self(Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c))
    }

    pub fn about_z(angle: f64) -> Self {
        let (s, c) = sin_cos(angle);
        Self(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    /// Rotation by π about (1, 0, 1)/√2: x ↦ z, z ↦ x, y ↦ −y. Its own inverse.
    pub fn xz_swap() -> Self {
        Self(Matrix3::new(0.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0))
    }

    /// Local-to-global rotation whose first column is the unit fiber direction `v`.
    ///
    /// The third column is the global z-axis made orthogonal to `v`, so for fibers in
    /// the x-y plane this is exactly `R_z(β)` with `β = atan2(v_y, v_x)`. Fibers
    /// parallel to z use the global x-axis as reference instead.
    pub fn fiber_frame(v: &Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidRotation(format!("fiber direction {v:?} has no length")));
        }
        let d = v / n;
        if d.z == 0.0 {
            return Ok(Self::about_z(d.y.atan2(d.x)));
        }
        let reference = if d.z.abs() < 0.9 { Vector3::z() } else { Vector3::x() };
        let e3 = (reference - d * d.dot(&reference)).normalize();
        let e2 = e3.cross(&d);
        Ok(Self(Matrix3::from_columns(&[d, e2, e3])))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &RotationMatrix) -> Self {
        Self(self.0 * other.0)
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        let q = RotationMatrix::about_z(std::f64::consts::FRAC_PI_2);
        assert_eq!(q.apply(&Vector3::x()), Vector3::y());
        let h = RotationMatrix::about_x(std::f64::consts::PI);
        assert_eq!(h.apply(&Vector3::y()), -Vector3::y());
    }

    #[test]
    fn elementary_rotations_are_orthogonal() {
        for a in [0.0, 0.3, 1.2, std::f64::consts::PI, -2.0] {
            for r in [RotationMatrix::about_x(a), RotationMatrix::about_z(a)] {
                let m = r.matrix();
                assert!((m.transpose() * m - Matrix3::identity()).amax() < 1e-14);
                assert!((m.determinant() - 1.0).abs() < 1e-14);
            }
        }
        let s = RotationMatrix::xz_swap();
        assert_eq!(s.compose(&s), RotationMatrix::identity());
        assert!(RotationMatrix::new(*s.matrix()).is_ok());
    }

    #[test]
    fn rejects_reflection() {
        let m = Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(RotationMatrix::new(m).is_err());
        assert!(RotationMatrix::new(Matrix3::identity() * 2.0).is_err());
    }

    #[test]
    fn fiber_frame_maps_x_to_direction() {
        for v in [
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(1.0, 1.0, 0.0),
            Vector3::new(0.2, -0.4, 0.9),
            Vector3::new(0.0, 0.0, -3.0),
        ] {
            let r = RotationMatrix::fiber_frame(&v).unwrap();
            let d = v.normalize();
            assert!((r.apply(&Vector3::x()) - d).amax() < 1e-14);
            assert!(RotationMatrix::new(*r.matrix()).is_ok());
        }
        let r = RotationMatrix::fiber_frame(&Vector3::new(0.0, 2.0, 0.0)).unwrap();
        assert_eq!(r, RotationMatrix::about_z(std::f64::consts::FRAC_PI_2));
        assert!(RotationMatrix::fiber_frame(&Vector3::zeros()).is_err());
    }
}
