use nalgebra::Complex;

use super::dense::C64;
use crate::error::{Error, Result};
use crate::tensor::Tensor4;

/// Below this fraction of `sqrt(β33 / 4β22)` the complex roots count as repeated.
pub(crate) const DEGENERATE_RATIO: f64 = 1e-6;

/// Reduced compliances and complex-root parameters of the fiber cross-section plane
/// (fiber on local axis 1).
///
/// `mu_r` is real when `mu_r_squared ≥ 0` and purely imaginary otherwise; every
/// quantity built from it is even in `mu_r`, so both cases give real transfer
/// operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LekhnitskiiParams {
    pub beta22: f64,
    pub beta23: f64,
    pub beta33: f64,
    pub beta44: f64,
    pub mu_r_squared: f64,
    pub mu_r: C64,
    pub mu_i: f64,
    /// δ1..δ4.
    pub delta: [C64; 4],
}

impl LekhnitskiiParams {
    pub fn from_reduced_compliances(beta22: f64, beta23: f64, beta33: f64, beta44: f64) -> Result<Self> {
        let ratio = beta33 / (4.0 * beta22);
        if !(ratio >= 0.0) || !ratio.is_finite() {
            return Err(Error::StpValidity {
                reason: "beta33 / (4 beta22) must be non-negative".into(),
                value: ratio,
            });
        }
        let outer = ratio.sqrt();
        let inner = (2.0 * beta23 + beta44) / (4.0 * beta22);
        Self::with_roots(beta22, beta23, beta33, beta44, outer - inner, outer)
    }

    fn with_roots(
        beta22: f64,
        beta23: f64,
        beta33: f64,
        beta44: f64,
        mu_r_squared: f64,
        outer: f64,
    ) -> Result<Self> {
        // mu_r^2 + mu_i^2 = 2 sqrt(beta33 / 4 beta22)
        let mu_i_squared = 2.0 * outer - mu_r_squared;
        if !(mu_i_squared > 0.0) {
            return Err(Error::StpValidity {
                reason: "mu_I radicand must be positive".into(),
                value: mu_i_squared,
            });
        }
        let mu_i = mu_i_squared.sqrt();
        let mu_r = Complex::new(mu_r_squared, 0.0).sqrt();
        let sum_sq = mu_r_squared + mu_i_squared;
        let delta = [
            Complex::new(2.0 * beta23 + 2.0 * beta22 * (mu_r_squared - mu_i_squared), 0.0),
            mu_r * (4.0 * beta22 * mu_i),
            mu_r * 2.0 * (beta23 + beta33 / sum_sq),
            Complex::new(2.0 * mu_i * (beta23 - beta33 / sum_sq), 0.0),
        ];
        Ok(Self {
            beta22,
            beta23,
            beta33,
            beta44,
            mu_r_squared,
            mu_r,
            mu_i,
            delta,
        })
    }

    fn root_scale(&self) -> f64 {
        (self.beta33 / (4.0 * self.beta22)).sqrt()
    }

    /// Repeated-root case (isotropic or transversely isotropic section), where the
    /// interface matrices lose rank.
    pub fn is_degenerate(&self) -> bool {
        self.mu_r_squared.abs() < DEGENERATE_RATIO * self.root_scale()
    }

    pub(crate) fn degenerate_offset(&self) -> f64 {
        DEGENERATE_RATIO * self.root_scale()
    }

    /// Same reduced compliances with `mu_r²` moved to `mu_r_squared`, keeping
    /// `mu_r² + mu_i²` fixed.
    pub(crate) fn with_mu_r_squared(&self, mu_r_squared: f64) -> Result<Self> {
        Self::with_roots(
            self.beta22,
            self.beta23,
            self.beta33,
            self.beta44,
            mu_r_squared,
            self.root_scale(),
        )
    }
}

/// Parameters from a compliance tensor whose local axis 1 is the fiber direction.
/// Uses the Voigt compliance with engineering shear strains.
pub fn lekhnitskii_params(compliance: &Tensor4) -> Result<LekhnitskiiParams> {
    let s = compliance.to_voigt_compliance();
    let beta = |i: usize, j: usize| s[i - 1][j - 1] - s[i - 1][0] * s[j - 1][0] / s[0][0];
    LekhnitskiiParams::from_reduced_compliances(beta(2, 2), beta(2, 3), beta(3, 3), beta(4, 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{invert_stiffness, isotropic_stiffness};
    use approx::assert_relative_eq;

    #[test]
    fn isotropic_reduced_compliances() {
        let (e, nu) = (1.665, 0.36);
        let s = invert_stiffness(&isotropic_stiffness(e, nu).unwrap()).unwrap();
        let p = lekhnitskii_params(&s).unwrap();
        assert_relative_eq!(p.beta23, -nu * (1.0 + nu) / e, max_relative = 1e-12);
        assert_relative_eq!(p.beta22, (1.0 - nu * nu) / e, max_relative = 1e-12);
        assert_relative_eq!(p.beta33, (1.0 - nu * nu) / e, max_relative = 1e-12);
        assert!(p.mu_r.norm() < 1e-6);
        assert_relative_eq!(p.mu_i, 1.0, max_relative = 1e-12);
        assert!(p.is_degenerate());
    }

    #[test]
    fn negative_mu_r_radicand_gives_imaginary_root() {
        // beta44 larger than the transversely isotropic value
        let p = LekhnitskiiParams::from_reduced_compliances(1.0, -0.3, 1.0, 3.0).unwrap();
        assert!(p.mu_r_squared < 0.0);
        assert_eq!(p.mu_r.re, 0.0);
        assert_relative_eq!(p.mu_r.im * p.mu_r.im, -p.mu_r_squared, max_relative = 1e-14);
        assert!(p.delta[0].im == 0.0 && p.delta[3].im == 0.0);
    }

    #[test]
    fn invalid_radicands() {
        assert!(matches!(
            LekhnitskiiParams::from_reduced_compliances(1.0, 0.0, -1.0, 1.0),
            Err(Error::StpValidity { .. })
        ));
        // mu_i^2 = 2·0.5 - (0.5 - inner) <= 0 when inner <= -0.5
        assert!(matches!(
            LekhnitskiiParams::from_reduced_compliances(1.0, -2.0, 1.0, 1.0),
            Err(Error::StpValidity { .. })
        ));
    }
}
