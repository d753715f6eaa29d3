mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::{Matrix6, Vector3};

use fiberstp::stp::{
    assemble_stp, directional_modulus, effective_fiber_modulus, lekhnitskii_params, rotate_stp,
    FiberSection, Notation, OperatorRecord, StrainTransferOperator,
};
use fiberstp::tensor::{axis_swap_xz, invert_stiffness, isotropic_stiffness, Tensor4};
use fiberstp::Error;

use common::*;

fn section() -> FiberSection {
    FiberSection::circular(2.0).unwrap()
}

/// Eshelby tensor of a circular cylinder along axis 1 in an isotropic matrix.
fn cylinder_eshelby(nu: f64) -> Tensor4 {
    let d = 8.0 * (1.0 - nu);
    Tensor4::from_fn(false, |i, j, k, l| {
        let transverse = |a: usize| a > 0;
        let same = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        if i == j && k == l {
            if !transverse(i) {
                0.0
            } else if !transverse(k) {
                nu / (2.0 * (1.0 - nu))
            } else if i == k {
                (5.0 - 4.0 * nu) / d
            } else {
                (4.0 * nu - 1.0) / d
            }
        } else if i != j && k != l && same(i.min(j), k.min(l)) * same(i.max(j), k.max(l)) == 1.0 {
            if transverse(i) && transverse(j) {
                (3.0 - 4.0 * nu) / d
            } else {
                0.25
            }
        } else {
            0.0
        }
    })
}

/// Dilute strain concentration `(I + S : C_m⁻¹ : (C_f − C_m))⁻¹` in Mandel form.
fn eshelby_concentration(cm: &Tensor4, cf: &Tensor4, nu: f64) -> Matrix6<f64> {
    let s = cylinder_eshelby(nu).to_mandel();
    let sm = invert_stiffness(cm).unwrap().to_mandel();
    let dc = cf.to_mandel() - cm.to_mandel();
    (Matrix6::identity() + s * sm * dc).try_inverse().unwrap()
}

#[test]
fn isotropic_phases_match_eshelby_concentration() {
    for (em, num, ef, nuf) in [
        (PP_E, PP_NU, GLASS_E, GLASS_NU),
        (3.0, 0.3, 1.0, 0.2),
        (1.0, 0.25, 400.0, 0.35),
    ] {
        let cm = isotropic_stiffness(em, num).unwrap();
        let cf = isotropic_stiffness(ef, nuf).unwrap();
        let t = assemble_stp(&cm, &cf, &section()).unwrap().transfer().to_mandel();
        let oracle = eshelby_concentration(&cm, &cf, num);
        let err = (t - oracle).amax();
        assert!(err < 1e-8, "E_m {em}, E_f {ef}: deviation {err:e}\n{t}\n{oracle}");
    }
}

#[test]
fn isotropic_lekhnitskii_parameters() {
    let (e, nu) = (PP_E, PP_NU);
    let p = lekhnitskii_params(&invert_stiffness(&pp()).unwrap()).unwrap();
    assert!((p.beta22 - (1.0 - nu * nu) / e).abs() < 1e-14);
    assert!((p.beta33 - (1.0 - nu * nu) / e).abs() < 1e-14);
    assert!((p.beta23 + nu * (1.0 + nu) / e).abs() < 1e-14);
    assert!(p.mu_r_squared.abs() < 1e-14);
    assert!((p.mu_i - 1.0).abs() < 1e-12);
    assert!(p.is_degenerate());
}

#[test]
fn reference_composite_has_imaginary_mu_r() {
    let cm = axis_swap_xz(&composite_fiber_z());
    let p = lekhnitskii_params(&invert_stiffness(&cm).unwrap()).unwrap();
    assert!(p.mu_r_squared < 0.0);
    assert_eq!(p.mu_r.re, 0.0);
    assert!((p.mu_r.im.powi(2) + p.mu_r_squared).abs() < 1e-15);
}

#[test]
fn shear_coupled_matrix_is_rejected() {
    // normal/transverse-shear coupling leaves the orthotropic class
    let mut v = pp().to_voigt_stiffness();
    v[1][3] = 0.2;
    v[3][1] = 0.2;
    let cm = Tensor4::from_voigt_stiffness(&v).unwrap();
    match assemble_stp(&cm, &glass(), &section()) {
        Err(e @ Error::StpValidity { .. }) => assert_eq!(e.category(), "stp-validity"),
        other => panic!("expected a validity error, got {other:?}"),
    }
}

#[test]
fn sparsity_of_unrotated_operator() {
    let cm = axis_swap_xz(&composite_fiber_z());
    let t = assemble_stp(&cm, &glass(), &section()).unwrap().matrix(Notation::Mandel);
    for (r, row) in t.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let allowed = (r < 4 && c < 4) || r == c;
            if !allowed {
                assert_eq!(*v, 0.0, "({r}, {c})");
            }
        }
    }
    assert_eq!(t[0], [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    // no coupling between normal strains and transverse shear for orthotropic phases
    for k in 0..3 {
        assert_eq!(t[3][k], 0.0);
        assert_eq!(t[k][3], 0.0);
    }
}

#[test]
fn small_fiber_perturbation_gives_small_change() {
    let cm = axis_swap_xz(&composite_fiber_z());
    let base = assemble_stp(&cm, &glass(), &section()).unwrap();
    let mut v = glass().to_voigt_stiffness();
    for (k, row) in v.iter_mut().enumerate() {
        for (l, x) in row.iter_mut().enumerate() {
            if *x != 0.0 {
                *x *= 1.0 + 1e-6 * if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
            }
        }
    }
    let perturbed = assemble_stp(&cm, &Tensor4::from_voigt_stiffness(&v).unwrap(), &section()).unwrap();
    assert!(perturbed.transfer().max_abs_diff(base.transfer()) < 1e-3);
}

#[test]
fn operator_is_continuous_across_repeated_roots() {
    // transversely isotropic section sits on the degenerate branch; a slightly
    // anisotropic one does not
    let iso = assemble_stp(&pp(), &glass(), &section()).unwrap();
    let mut v = pp().to_voigt_stiffness();
    v[1][1] *= 1.0 + 1e-4;
    let near = assemble_stp(&Tensor4::from_voigt_stiffness(&v).unwrap(), &glass(), &section()).unwrap();
    assert!(!near.params().is_degenerate());
    assert!(near.transfer().max_abs_diff(iso.transfer()) < 1e-4);
}

#[test]
fn section_scale_does_not_matter_for_circles() {
    let cm = axis_swap_xz(&composite_fiber_z());
    let a = assemble_stp(&cm, &glass(), &FiberSection::circular(0.01).unwrap()).unwrap();
    let b = assemble_stp(&cm, &glass(), &FiberSection::circular(250.0).unwrap()).unwrap();
    assert!(a.transfer().max_abs_diff(b.transfer()) < 1e-12);
}

#[test]
fn beta_rotations_compose() {
    let base = StrainTransferOperator::from_fiber_z_frame(&composite_fiber_z(), &glass(), &section()).unwrap();
    let perpendicular = rotate_stp(&base, FRAC_PI_2, 0.0).unwrap();
    for (b1, b2) in [(0.3, 0.9), (-1.1, 2.0), (FRAC_PI_4, FRAC_PI_4)] {
        let stepwise = rotate_stp(&rotate_stp(&perpendicular, 0.0, b1).unwrap(), 0.0, b2).unwrap();
        let direct = rotate_stp(&perpendicular, 0.0, b1 + b2).unwrap();
        assert!(stepwise.transfer().max_abs_diff(direct.transfer()) < 1e-12);
    }
}

#[test]
fn alpha_quarter_turn_is_reassembly_with_rotated_matrix() {
    let cm = axis_swap_xz(&composite_fiber_z());
    let base = assemble_stp(&cm, &glass(), &section()).unwrap();
    let rotated = rotate_stp(&base, FRAC_PI_2, 0.0).unwrap();
    // reinforcement along local axis 2 after the turn
    let by_hand = assemble_stp(
        &fiberstp::tensor::rotate_tensor4(&cm, &fiberstp::tensor::RotationMatrix::about_z(FRAC_PI_2)),
        &glass(),
        &section(),
    )
    .unwrap();
    assert!(rotated.transfer().max_abs_diff(by_hand.transfer()) < 1e-15);
    assert_eq!(rotated.frame().alpha, FRAC_PI_2);
    // the fiber-direction row is still the identity
    assert_eq!(rotated.matrix(Notation::Mandel)[0], [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn directional_modulus_oracle() {
    // uniaxial stress along v: E(v) = 1 / (v⊗v : S : v⊗v), evaluated from the Voigt
    // compliance with engineering shear
    let cm = axis_swap_xz(&composite_fiber_z());
    let s = invert_stiffness(&cm).unwrap().to_voigt_compliance();
    for v in [Vector3::x(), Vector3::y(), Vector3::new(1.0, 1.0, 0.0), Vector3::new(0.2, -0.5, 0.8)] {
        let n = v.normalize();
        let sigma = [n.x * n.x, n.y * n.y, n.z * n.z, n.y * n.z, n.x * n.z, n.x * n.y];
        let strain: Vec<f64> = (0..6).map(|i| (0..6).map(|j| s[i][j] * sigma[j]).sum()).collect();
        let oracle = 1.0 / (0..6).map(|i| sigma[i] * strain[i]).sum::<f64>();
        let got = directional_modulus(&cm, &v).unwrap();
        assert!((got - oracle).abs() < 1e-12 * oracle, "{v:?}: {got} vs {oracle}");
    }
    let along = directional_modulus(&cm, &Vector3::x()).unwrap();
    assert!(along > 30.0);
    let m = effective_fiber_modulus(&cm, GLASS_E, &Vector3::x()).unwrap();
    assert!((m.effective - (GLASS_E - along)).abs() < 1e-12);
}

#[test]
fn record_serializes_notation() {
    let op = StrainTransferOperator::from_fiber_z_frame(&composite_fiber_z(), &glass(), &section()).unwrap();
    let rec = op.record(Notation::Mandel);
    let json = serde_json::to_string(&rec).unwrap();
    assert!(json.contains("\"notation\":\"mandel\""));
    let back: OperatorRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rec);
    let voigt = op.matrix(Notation::Voigt);
    // transverse shear column carries the engineering factor in Voigt form
    assert!((voigt[3][3] - rec.matrix[3][3]).abs() < 1e-15);
    assert_eq!(rec.theta[4..], [0.0, 0.0]);
}
