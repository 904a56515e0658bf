//! Exercises the C ABI exactly as a foreign caller would: raw pointers,
//! status codes, and the last-error channel.

use std::ptr;

use cpuc_ffi::*;

fn interleave(entries: &[(f64, f64)]) -> Vec<f64> {
    entries.iter().flat_map(|&(re, im)| [re, im]).collect()
}

fn last_error() -> String {
    let mut buf = vec![0i8; 256];
    let n = unsafe { cpuc_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8_lossy(&bytes).into_owned()
}

#[test]
fn gaussian_cpuc_thermal_and_lossy() {
    let mut value = 0.0;
    let mut infinite = false;
    let status =
        unsafe { cpuc_gaussian_cpuc(0.9, 1.0, 1.0, &mut value, &mut infinite) };
    assert_eq!(status, CpucStatus::Ok);
    assert!(!infinite);
    assert!((value - 0.9 * 11.0_f64.ln()).abs() < 1e-12);

    let status = unsafe { cpuc_gaussian_cpuc(0.5, 0.0, 1.0, &mut value, &mut infinite) };
    assert_eq!(status, CpucStatus::Ok);
    assert!(infinite);

    let mut class = CpucChannelClass::Squeezing;
    unsafe {
        assert_eq!(
            cpuc_gaussian_classification(0.5, 0.0, 1.0, &mut class),
            CpucStatus::Ok
        );
    }
    assert_eq!(class, CpucChannelClass::Lossy);
}

#[test]
fn gaussian_invalid_parameters_report() {
    let mut value = 0.0;
    let mut infinite = false;
    let status = unsafe { cpuc_gaussian_cpuc(0.9, -1.0, 1.0, &mut value, &mut infinite) };
    assert_eq!(status, CpucStatus::InvalidInput);
    assert!(last_error().contains("environment photons"));
}

#[test]
fn vacuum_output_and_pie_point() {
    let (mut n0, mut w0) = (0.0, 0.0);
    unsafe {
        assert_eq!(
            cpuc_gaussian_vacuum_output(0.9, 1.0, 2.0, &mut n0, &mut w0),
            CpucStatus::Ok
        );
    }
    assert!((w0 - 0.7_f64.sqrt()).abs() < 1e-12);
    assert!((n0 - (0.39375_f64.sqrt() - 0.5)).abs() < 1e-12);

    let (mut pie, mut capacity) = (0.0, 0.0);
    unsafe {
        assert_eq!(
            cpuc_pie_point(0.9, 1.0, 1.0, 1e-6, &mut pie, &mut capacity),
            CpucStatus::Ok
        );
    }
    assert!((pie - 0.9 * 11.0_f64.ln()).abs() < 1e-4);
    assert!((capacity - 1e-6 * pie).abs() < 1e-18);

    // squeezing channels are outside the PIE precondition
    unsafe {
        assert_eq!(
            cpuc_pie_point(0.9, 1.0, 2.0, 1e-6, &mut pie, &mut capacity),
            CpucStatus::InvalidInput
        );
    }
}

#[test]
fn density_matrix_lifecycle_and_entropies() {
    // maximally mixed qubit
    let mixed = interleave(&[(0.5, 0.0), (0.0, 0.0), (0.0, 0.0), (0.5, 0.0)]);
    let mut state = ptr::null_mut();
    unsafe {
        assert_eq!(
            cpuc_density_new(2, mixed.as_ptr(), &mut state),
            CpucStatus::Ok
        );
    }
    let mut entropy = 0.0;
    unsafe {
        assert_eq!(
            cpuc_von_neumann_entropy(state, &mut entropy),
            CpucStatus::Ok
        );
    }
    assert!((entropy - std::f64::consts::LN_2).abs() < 1e-12);

    // |0><0| against the mixed state: D = ln 2
    let pure = interleave(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
    let mut ground = ptr::null_mut();
    unsafe {
        assert_eq!(
            cpuc_density_new(2, pure.as_ptr(), &mut ground),
            CpucStatus::Ok
        );
    }
    let (mut d, mut infinite) = (0.0, true);
    unsafe {
        assert_eq!(
            cpuc_relative_entropy(ground, state, &mut d, &mut infinite),
            CpucStatus::Ok
        );
    }
    assert!(!infinite);
    assert!((d - std::f64::consts::LN_2).abs() < 1e-12);

    // reversed order hits the support mismatch
    unsafe {
        assert_eq!(
            cpuc_relative_entropy(state, ground, &mut d, &mut infinite),
            CpucStatus::Ok
        );
    }
    assert!(infinite);

    unsafe {
        cpuc_density_free(state);
        cpuc_density_free(ground);
        cpuc_density_free(ptr::null_mut()); // explicit no-op
    }
}

#[test]
fn density_validation_failures() {
    // trace 2
    let bad = interleave(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    let mut state = ptr::null_mut();
    let status = unsafe { cpuc_density_new(2, bad.as_ptr(), &mut state) };
    assert_eq!(status, CpucStatus::InvalidInput);
    assert!(last_error().contains("trace"));

    let status = unsafe { cpuc_density_new(2, ptr::null(), &mut state) };
    assert_eq!(status, CpucStatus::NullPointer);
}

#[test]
fn channel_apply_amplitude_damping() {
    // K0 = diag(1, sqrt(0.7)), K1 = sqrt(0.3)|0><1|
    let k0 = [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.7_f64.sqrt(), 0.0)];
    let k1 = [(0.0, 0.0), (0.3_f64.sqrt(), 0.0), (0.0, 0.0), (0.0, 0.0)];
    let ops: Vec<f64> = interleave(&k0).into_iter().chain(interleave(&k1)).collect();
    let mut channel = ptr::null_mut();
    unsafe {
        assert_eq!(
            cpuc_channel_new(2, 2, 2, ops.as_ptr(), &mut channel),
            CpucStatus::Ok
        );
    }

    let excited = interleave(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    let mut state = ptr::null_mut();
    unsafe {
        assert_eq!(
            cpuc_density_new(2, excited.as_ptr(), &mut state),
            CpucStatus::Ok
        );
    }
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            cpuc_channel_apply(channel, state, &mut out),
            CpucStatus::Ok
        );
    }
    let mut entropy = 0.0;
    unsafe {
        assert_eq!(cpuc_von_neumann_entropy(out, &mut entropy), CpucStatus::Ok);
    }
    // diag(0.3, 0.7): binary entropy
    let expected = -(0.3_f64 * 0.3_f64.ln() + 0.7 * 0.7_f64.ln());
    assert!((entropy - expected).abs() < 1e-12);

    unsafe {
        cpuc_density_free(state);
        cpuc_density_free(out);
        cpuc_channel_free(channel);
    }
}

#[test]
fn incomplete_kraus_rejected() {
    let half = interleave(&[(0.5, 0.0), (0.0, 0.0), (0.0, 0.0), (0.5, 0.0)]);
    let mut channel = ptr::null_mut();
    let status = unsafe { cpuc_channel_new(2, 2, 1, half.as_ptr(), &mut channel) };
    assert_eq!(status, CpucStatus::InvalidInput);
    assert!(last_error().contains("Kraus"));
}

#[test]
fn ensemble_holevo_chi() {
    let ground = interleave(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
    let excited = interleave(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    let mut s0 = ptr::null_mut();
    let mut s1 = ptr::null_mut();
    let mut ensemble = ptr::null_mut();
    unsafe {
        assert_eq!(cpuc_density_new(2, ground.as_ptr(), &mut s0), CpucStatus::Ok);
        assert_eq!(cpuc_density_new(2, excited.as_ptr(), &mut s1), CpucStatus::Ok);
        assert_eq!(cpuc_ensemble_new(2, &mut ensemble), CpucStatus::Ok);
        assert_eq!(
            cpuc_ensemble_push(ensemble, 0.5, 0.0, s0),
            CpucStatus::Ok
        );
        assert_eq!(
            cpuc_ensemble_push(ensemble, 0.5, 1.0, s1),
            CpucStatus::Ok
        );
    }
    let mut chi = 0.0;
    unsafe {
        assert_eq!(
            cpuc_holevo_chi(ensemble, ptr::null(), &mut chi),
            CpucStatus::Ok
        );
    }
    assert!((chi - std::f64::consts::LN_2).abs() < 1e-12);

    // bad priors surface as invalid input at evaluation time
    unsafe {
        assert_eq!(
            cpuc_ensemble_push(ensemble, 0.5, 1.0, s1),
            CpucStatus::Ok
        );
        assert_eq!(
            cpuc_holevo_chi(ensemble, ptr::null(), &mut chi),
            CpucStatus::InvalidInput
        );
    }
    assert!(last_error().contains("priors"));

    unsafe {
        cpuc_ensemble_free(ensemble);
        cpuc_density_free(s0);
        cpuc_density_free(s1);
    }
}

#[test]
fn null_handles_are_reported() {
    let mut value = 0.0;
    let status = unsafe { cpuc_von_neumann_entropy(ptr::null(), &mut value) };
    assert_eq!(status, CpucStatus::NullPointer);
    let status = unsafe { cpuc_gaussian_cpuc(0.9, 1.0, 1.0, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(status, CpucStatus::NullPointer);
}
