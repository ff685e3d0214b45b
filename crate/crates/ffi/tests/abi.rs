use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use sd2_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    unsafe {
        sd2_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn build_and_read_matrix() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(sd2_generators_build(2, 0.0, 0.0, Sd2Basis::Cartesian as i32, &mut h), Sd2Status::Ok);
        assert_eq!(sd2_generators_dim(h), 3);
        let (mut re, mut im) = (vec![0.0; 9], vec![0.0; 9]);
        assert_eq!(sd2_generators_matrix(h, Sd2Generator::J3 as i32, re.as_mut_ptr(), im.as_mut_ptr(), 9), Sd2Status::Ok);
        assert_eq!(re, vec![-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(im.iter().all(|x| *x == 0.0));
        assert_eq!(
            sd2_generators_matrix(h, Sd2Generator::J3 as i32, re.as_mut_ptr(), im.as_mut_ptr(), 4),
            Sd2Status::BufferTooSmall
        );
        assert_eq!(
            sd2_generators_matrix(h, 42, re.as_mut_ptr(), im.as_mut_ptr(), 9),
            Sd2Status::InvalidParams
        );
        sd2_generators_free(h);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(sd2_generators_build(3, -0.6, 0.0, 0, &mut h), Sd2Status::InvalidParams);
        assert!(last_error().contains("mu_x"));
        assert!(h.is_null());
        assert_eq!(sd2_generators_build(3, 0.3, 0.3, Sd2Basis::J2Eigen as i32, ptr::null_mut()), Sd2Status::NullPointer);
        let gauge = [0.0];
        assert_eq!(sd2_generators_build_gauged(3, 0.3, 0.7, gauge.as_ptr(), 1, &mut h), Sd2Status::ZeroGauge);
        assert_eq!(sd2_generators_build_gauged(5, 0.3, 0.7, ptr::null(), 0, &mut h), Sd2Status::InvalidParams);
        let gauge = [1.0];
        assert_eq!(sd2_generators_build_gauged(3, 0.3, 0.3, gauge.as_ptr(), 1, &mut h), Sd2Status::Isotropic);
        assert_eq!(sd2_generators_dim(ptr::null()), 0);
        sd2_generators_free(ptr::null_mut());
    }
}

#[test]
fn eigvec_table() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(sd2_eigvecs_build(3, 0.3, 0.7, 1, &mut t), Sd2Status::Ok);
        assert_eq!(sd2_eigvecs_count(t), 4);
        let (mut k, mut sign, mut ev) = (0usize, 0i32, 0.0);
        let (mut re, mut im) = (vec![0.0; 4], vec![0.0; 4]);
        assert_eq!(
            sd2_eigvecs_get(t, 1, &mut k, &mut sign, &mut ev, re.as_mut_ptr(), im.as_mut_ptr(), 4),
            Sd2Status::Ok
        );
        assert_eq!((k, sign), (0, -1));
        assert!((ev + 1.5).abs() < 1e-15);
        assert_eq!((re[0], im[0], re[1], im[1]), (0.0, -1.0, 1.0, 0.0));
        assert_eq!(
            sd2_eigvecs_get(t, 9, &mut k, &mut sign, &mut ev, re.as_mut_ptr(), im.as_mut_ptr(), 4),
            Sd2Status::OutOfRange
        );
        sd2_eigvecs_free(t);
    }
}

#[test]
fn transition_and_verify() {
    unsafe {
        let mut t = vec![0.0; 4];
        assert_eq!(sd2_transition_matrix(1, t.as_mut_ptr(), 4), Sd2Status::Ok);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((t[0] - h).abs() < 1e-15 && (t[2] + h).abs() < 1e-15);
        let (xs, ys) = ([0.3], [0.7]);
        let (mut passed, mut n, mut failed) = (0, 0usize, 0usize);
        assert_eq!(sd2_verify(3, xs.as_ptr(), ys.as_ptr(), 1, &mut passed, &mut n, &mut failed), Sd2Status::Ok);
        assert_eq!((passed, failed), (1, 0));
        assert!(n > 0);
        assert!(!CStr::from_ptr(sd2_version()).to_bytes().is_empty());
    }
}

/// Compile a C program against the generated header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libsd2_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("sd2_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
