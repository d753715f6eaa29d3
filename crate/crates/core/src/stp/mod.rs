//! Analytical strain transfer operator for an orthotropic fiber with circular
//! cross-section in an orthotropic matrix, the effective stretching modulus of the
//! fiber, and the extended strain recovery along the fiber.
//!
//! Assembly works in a local frame whose first axis is the fiber direction and whose
//! orthotropy axes coincide with the coordinate axes. The fiber-direction normal strain
//! is transferred verbatim; the transverse normal strains and the transverse shear come
//! from a 4×4 interface system (the fourth unknown is the angular displacement of the
//! sensor, kept for inspection only); the two longitudinal shears are closed-form ratios.

mod dense;
mod lekhnitskii;

pub use lekhnitskii::{lekhnitskii_params, LekhnitskiiParams};

use nalgebra::{Matrix6, Vector3};
use serde::{Deserialize, Serialize};

use self::dense::{matmul, real, solve, transpose, C64};
use crate::error::{Error, Result};
use crate::tensor::{
    axis_swap_xz, invert_stiffness, rotate_tensor4, RotationMatrix, SymTensor2, Tensor4,
};

/// Relative tolerance for the "orthotropic in the fiber frame" check.
pub const ORTHOTROPY_TOLERANCE: f64 = 1e-8;

/// Circular fiber cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberSection {
    pub radius: f64,
    /// Semi-axes; equal to `radius`.
    pub a: f64,
    pub b: f64,
    pub area: f64,
}

impl FiberSection {
    pub fn circular(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidSection(format!("radius must be positive, got {radius}")));
        }
        Ok(Self {
            radius,
            a: radius,
            b: radius,
            area: std::f64::consts::PI * radius * radius,
        })
    }

    /// Elliptic sections are representable but only `a = b` is accepted.
    pub fn elliptic(a: f64, b: f64) -> Result<Self> {
        if a != b {
            return Err(Error::InvalidSection(format!(
                "only circular sections are supported (a = {a}, b = {b})"
            )));
        }
        Self::circular(a)
    }
}

/// Vector notation for 6×6 operator output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Notation {
    Voigt,
    Mandel,
}

/// Orientation of an operator: `rotation` maps local coordinates (fiber on axis 1)
/// to global ones. `alpha` is the in-section rotation of the matrix material about
/// local axis 3, `beta` the accumulated rotation about global z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StpFrame {
    pub alpha: f64,
    pub beta: f64,
    pub rotation: RotationMatrix,
}

impl StpFrame {
    pub fn direction(&self) -> Vector3<f64> {
        self.rotation.apply(&Vector3::x())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrainTransferOperator {
    transfer: Tensor4,
    local_transfer: Tensor4,
    frame: StpFrame,
    theta: [f64; 6],
    params: LekhnitskiiParams,
    base_matrix: Tensor4,
    fiber: Tensor4,
    section: FiberSection,
}

impl StrainTransferOperator {
    /// Transfer tensor in the global frame.
    pub fn transfer(&self) -> &Tensor4 {
        &self.transfer
    }

    /// Transfer tensor in the local frame (fiber on axis 1).
    pub fn local_transfer(&self) -> &Tensor4 {
        &self.local_transfer
    }

    pub fn frame(&self) -> &StpFrame {
        &self.frame
    }

    pub fn direction(&self) -> Vector3<f64> {
        self.frame.direction()
    }

    /// Coefficients of the sensor's angular displacement with respect to the local
    /// Voigt matrix strain. Not part of the transfer tensor.
    pub fn theta_row(&self) -> [f64; 6] {
        self.theta
    }

    pub fn params(&self) -> &LekhnitskiiParams {
        &self.params
    }

    pub fn section(&self) -> &FiberSection {
        &self.section
    }

    /// Global operator as a 6×6 matrix acting on strain vectors.
    pub fn matrix(&self, notation: Notation) -> [[f64; 6]; 6] {
        match notation {
            Notation::Voigt => self.transfer.to_voigt_strain_map(),
            Notation::Mandel => {
                let m: Matrix6<f64> = self.transfer.to_mandel();
                std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
            }
        }
    }

    pub fn record(&self, notation: Notation) -> OperatorRecord {
        let d = self.direction();
        OperatorRecord {
            notation,
            alpha: self.frame.alpha,
            beta: self.frame.beta,
            direction: [d.x, d.y, d.z],
            radius: self.section.radius,
            matrix: self.matrix(notation),
            theta: self.theta,
        }
    }

    /// Operator for materials given with the fiber along z (as homogenization tools
    /// usually report them). Both stiffnesses are moved to the x-fiber frame by the
    /// x↔z axis swap before assembly.
    pub fn from_fiber_z_frame(
        c_matrix: &Tensor4,
        c_fiber: &Tensor4,
        section: &FiberSection,
    ) -> Result<Self> {
        assemble_stp(&axis_swap_xz(c_matrix), &axis_swap_xz(c_fiber), section)
    }

    /// Operator for a fiber along `direction`, with both stiffnesses given in the
    /// global frame. The local frame is [`RotationMatrix::fiber_frame`].
    pub fn for_direction(
        c_matrix: &Tensor4,
        c_fiber: &Tensor4,
        section: &FiberSection,
        direction: &Vector3<f64>,
    ) -> Result<Self> {
        let r = RotationMatrix::fiber_frame(direction)?;
        let to_local = r.transpose();
        let mut op = assemble_stp(
            &rotate_tensor4(c_matrix, &to_local),
            &rotate_tensor4(c_fiber, &to_local),
            section,
        )?;
        op.transfer = rotate_tensor4(&op.local_transfer, &r);
        let d = r.apply(&Vector3::x());
        op.frame = StpFrame {
            alpha: 0.0,
            beta: d.y.atan2(d.x),
            rotation: r,
        };
        Ok(op)
    }
}

/// Serialized operator, e.g. for `stp-matrix --json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub notation: Notation,
    pub alpha: f64,
    pub beta: f64,
    pub direction: [f64; 3],
    pub radius: f64,
    pub matrix: [[f64; 6]; 6],
    /// Angular displacement row in the local frame, Voigt strain input.
    pub theta: [f64; 6],
}

/// Assembles the transfer operator from local-frame stiffnesses (fiber along axis 1).
/// The returned operator has the identity frame.
pub fn assemble_stp(
    c_matrix: &Tensor4,
    c_fiber: &Tensor4,
    section: &FiberSection,
) -> Result<StrainTransferOperator> {
    c_matrix.check_positive_definite()?;
    c_fiber.check_positive_definite()?;
    ensure_orthotropic(c_matrix, "matrix")?;
    ensure_orthotropic(c_fiber, "fiber")?;
    let params = lekhnitskii_params(&invert_stiffness(c_matrix)?)?;
    let (voigt, theta) = local_transfer_matrix(
        &c_matrix.to_voigt_stiffness(),
        &c_fiber.to_voigt_stiffness(),
        &params,
        section,
    )?;
    let local_transfer = Tensor4::from_voigt_strain_map(&voigt);
    Ok(StrainTransferOperator {
        transfer: local_transfer.clone(),
        local_transfer,
        frame: StpFrame {
            alpha: 0.0,
            beta: 0.0,
            rotation: RotationMatrix::identity(),
        },
        theta,
        params,
        base_matrix: c_matrix.clone(),
        fiber: c_fiber.clone(),
        section: *section,
    })
}

/// Rotates an operator by `alpha` (matrix material about the local axis 3, requiring
/// re-assembly) and then by `beta` about the global z-axis (tensor rotation of T).
/// Angles accumulate on top of the operator's current frame.
pub fn rotate_stp(op: &StrainTransferOperator, alpha: f64, beta: f64) -> Result<StrainTransferOperator> {
    let total_alpha = op.frame.alpha + alpha;
    let mut out = if alpha == 0.0 {
        op.clone()
    } else {
        let rotated = rotate_tensor4(&op.base_matrix, &RotationMatrix::about_z(total_alpha));
        let mut fresh = assemble_stp(&rotated, &op.fiber, &op.section)?;
        fresh.base_matrix = op.base_matrix.clone();
        fresh.frame = op.frame;
        fresh
    };
    out.frame.alpha = total_alpha;
    out.frame.beta = op.frame.beta + beta;
    out.frame.rotation = RotationMatrix::about_z(beta).compose(&op.frame.rotation);
    out.transfer = rotate_tensor4(&out.local_transfer, &out.frame.rotation);
    Ok(out)
}

/// Stretching moduli along a fiber direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveFiberModulus {
    /// Directional modulus of the matrix, `(P : S : P)⁻¹`.
    pub matrix_modulus: f64,
    pub fiber_modulus: f64,
    /// `max(0, E_f − E_m)`.
    pub effective: f64,
    pub direction: [f64; 3],
}

/// Young's modulus of `stiffness` along `direction`: `(P : C⁻¹ : P)⁻¹` with `P = v vᵀ`.
pub fn directional_modulus(stiffness: &Tensor4, direction: &Vector3<f64>) -> Result<f64> {
    let v = unit(direction)?;
    let p = SymTensor2::outer(&v);
    let s = invert_stiffness(stiffness)?;
    Ok(1.0 / p.ddot(&s.ddot(&p)))
}

pub fn effective_fiber_modulus(
    c_matrix: &Tensor4,
    fiber_modulus: f64,
    direction: &Vector3<f64>,
) -> Result<EffectiveFiberModulus> {
    let v = unit(direction)?;
    let matrix_modulus = directional_modulus(c_matrix, &v)?;
    Ok(EffectiveFiberModulus {
        matrix_modulus,
        fiber_modulus,
        effective: (fiber_modulus - matrix_modulus).max(0.0),
        direction: [v.x, v.y, v.z],
    })
}

/// `T : ε_nf`.
pub fn apply_stp(op: &StrainTransferOperator, eps_nf: &SymTensor2) -> SymTensor2 {
    op.transfer.ddot(eps_nf)
}

/// Extended recovery `(I − P⊗P) : (T : ε_nf) + P ε_γ` with `P = v vᵀ`.
pub fn extended_recovery(
    op: &StrainTransferOperator,
    eps_nf: &SymTensor2,
    eps_gamma_f: f64,
    direction: &Vector3<f64>,
) -> Result<SymTensor2> {
    replace_fiber_strain(&apply_stp(op, eps_nf), eps_gamma_f, direction)
}

/// Replaces the normal strain along `direction` of an already transferred strain by
/// `eps_gamma_f`, leaving every component orthogonal to `P` untouched.
pub fn replace_fiber_strain(
    transferred: &SymTensor2,
    eps_gamma_f: f64,
    direction: &Vector3<f64>,
) -> Result<SymTensor2> {
    let v = unit(direction)?;
    let p = SymTensor2::outer(&v);
    Ok(*transferred + p * (eps_gamma_f - p.ddot(transferred)))
}

fn unit(v: &Vector3<f64>) -> Result<Vector3<f64>> {
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Config(format!("direction {v:?} is not a usable unit vector")));
    }
    Ok(v / n)
}

fn ensure_orthotropic(c: &Tensor4, which: &str) -> Result<()> {
    if c.is_orthotropic_in_frame(ORTHOTROPY_TOLERANCE) {
        return Ok(());
    }
    let v = c.to_voigt_stiffness();
    let scale = v.iter().flatten().fold(0.0_f64, |a, &b| a.max(b.abs()));
    let worst = (0..6)
        .flat_map(|a| (0..6).map(move |b| (a, b)))
        .filter(|&(a, b)| !((a < 3 && b < 3) || a == b))
        .fold(0.0_f64, |m, (a, b)| m.max(v[a][b].abs()));
    Err(Error::StpValidity {
        reason: format!("{which} stiffness is not orthotropic in the fiber frame"),
        value: worst / scale,
    })
}

/// Local Voigt strain map and angular-displacement row.
fn local_transfer_matrix(
    cm: &[[f64; 6]; 6],
    cf: &[[f64; 6]; 6],
    params: &LekhnitskiiParams,
    section: &FiberSection,
) -> Result<([[f64; 6]; 6], [f64; 6])> {
    let block = if params.is_degenerate() {
        // repeated roots: the interface matrices lose rank, but the operator is
        // analytic in mu_r^2, so take the symmetric mean across the degeneracy
        let h = params.degenerate_offset();
        let plus = interface_block(cm, cf, &params.with_mu_r_squared(h)?, section)?;
        let minus = interface_block(cm, cf, &params.with_mu_r_squared(-h)?, section)?;
        std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (plus[i][j] + minus[i][j])))
    } else {
        interface_block(cm, cf, params, section)?
    };

    let (a, b) = (section.a, section.b);
    let mut t = [[0.0; 6]; 6];
    t[0][0] = 1.0;
    for r in 0..3 {
        t[r + 1][..4].copy_from_slice(&block[r]);
    }
    let (c55, c66) = (cm[4][4], cm[5][5]);
    let shear = (c55 * c66).sqrt();
    t[4][4] = (b + (c55 / c66).sqrt() * a) / (b + cf[4][4] / shear * a);
    t[5][5] = (a + (c66 / c55).sqrt() * b) / (a + cf[5][5] / shear * b);

    let mut theta = [0.0; 6];
    theta[..4].copy_from_slice(&block[3]);
    Ok((t, theta))
}

/// Rows (ε2, ε3, ε4, Θ) of the fiber strain, columns (ε1, ε2, ε3, ε4) of the matrix
/// strain, Voigt notation.
fn interface_block(
    cm: &[[f64; 6]; 6],
    cf: &[[f64; 6]; 6],
    p: &LekhnitskiiParams,
    section: &FiberSection,
) -> Result<[[f64; 4]; 4]> {
    let (a, b) = (section.a, section.b);
    let k = real([
        [a, 0.0, 0.0],
        [0.0, 0.0, b / 2.0],
        [0.0, 0.0, a / 2.0],
        [0.0, b, 0.0],
    ]);
    let h = real([[0.0], [b], [-a], [0.0]]);
    let w = real([
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0],
    ]);
    let q = |c: &[[f64; 6]; 6]| {
        real([
            [c[1][1], c[1][2], 0.0],
            [c[2][1], c[2][2], 0.0],
            [0.0, 0.0, c[3][3]],
        ])
    };
    let [d1, d2, d3, d4] = p.delta;
    let u = [
        [d1, -d2, d1, d2],
        [d2, d1, -d2, d1],
        [d3, -d4, -d3, -d4],
        [d4, d3, d4, -d3],
    ];
    let (mr, mi) = (p.mu_r, C64::new(p.mu_i, 0.0));
    let two = C64::new(2.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (ca, cb) = (C64::new(a, 0.0), C64::new(b, 0.0));
    let l = [
        [two * mi / cb, two * mr / cb, two * mi / cb, -two * mr / cb],
        [two / ca, zero, two / ca, zero],
        [zero, -two / cb, zero, -two / cb],
        [-two * mr / ca, two * mi / ca, two * mr / ca, two * mi / ca],
    ];

    // X = U L⁻¹ from Lᵀ Xᵀ = Uᵀ
    let x = transpose(&solve(transpose(&l), transpose(&u), "L")?);
    let xw = matmul(&x, &w);
    let wqf = matmul(&w, &q(cf));
    let xwq = matmul(&xw, &q(cm));

    // O − X N with O = [K H], N = [W Q_f 0]
    let xn = matmul(&x, &wqf);
    let lhs: [[C64; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| if j < 3 { k[i][j] - xn[i][j] } else { h[i][0] })
    });
    let dc = [
        C64::new(cf[1][0] - cm[1][0], 0.0),
        C64::new(cf[2][0] - cm[2][0], 0.0),
        zero,
    ];
    let rhs: [[C64; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if j == 0 {
                (0..3).map(|m| xw[i][m] * dc[m]).sum()
            } else {
                k[i][j - 1] - xwq[i][j - 1]
            }
        })
    });
    let y = solve(lhs, rhs, "O - U L^-1 N")?;

    let scale = y.iter().flatten().fold(1.0_f64, |m, z| m.max(z.re.abs()));
    let imag = y.iter().flatten().fold(0.0_f64, |m, z| m.max(z.im.abs()));
    if imag > 1e-9 * scale {
        return Err(Error::StpValidity {
            reason: "transfer block has a non-vanishing imaginary part".into(),
            value: imag,
        });
    }
    Ok(y.map(|row| row.map(|z| z.re)))
}
