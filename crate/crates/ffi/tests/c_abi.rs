use std::ffi::CStr;
use std::ptr;

use threshold_lab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tl_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn endpoint_and_chain() {
    let mut e = 0.0;
    assert_eq!(unsafe { tl_band_endpoint(4, 1, 1e-12, &mut e) }, TlStatus::TlOk);
    assert!((e - 1.6).abs() < 1e-11);
    assert_eq!(last_error(), "");

    let mut chain = ptr::null_mut();
    assert_eq!(unsafe { tl_chain_new(4, 1, 1e-12, &mut chain) }, TlStatus::TlOk);
    let len = unsafe { tl_chain_len(chain) };
    assert_eq!(len, 3);
    let mut buf = vec![0.0; len];
    assert_eq!(unsafe { tl_chain_points(chain, buf.as_mut_ptr(), 2) }, TlStatus::TlBufferTooSmall);
    assert!(last_error().contains("need 3"));
    assert_eq!(unsafe { tl_chain_points(chain, buf.as_mut_ptr(), len) }, TlStatus::TlOk);
    for (x, want) in buf.iter().zip([0.6, 0.8, 1.0]) {
        assert!((x - want).abs() < 1e-11);
    }
    let mut ce = 0.0;
    assert_eq!(unsafe { tl_chain_energy(chain, &mut ce) }, TlStatus::TlOk);
    assert_eq!(ce, e);
    unsafe { tl_chain_free(chain) };
    unsafe { tl_chain_free(ptr::null_mut()) };
}

#[test]
fn error_codes() {
    let mut e = 0.0;
    assert_eq!(unsafe { tl_band_endpoint(1, 1, 1e-12, &mut e) }, TlStatus::TlInvalidArgument);
    assert!(last_error().contains("kappa"));
    assert_eq!(unsafe { tl_band_endpoint(4, 1, 1e-12, ptr::null_mut()) }, TlStatus::TlNullPointer);

    let mut sigma = ptr::null_mut();
    let bad = [4u32, 6];
    assert_eq!(
        unsafe { tl_sigma_new(4, 1, bad.as_ptr(), bad.len(), &mut sigma) },
        TlStatus::TlInvalidArgument
    );
    assert!(sigma.is_null());

    let many: Vec<u32> = (1..=9).map(|j| 4 * j).collect();
    assert_eq!(
        unsafe { tl_sigma_new(4, 1, many.as_ptr(), many.len(), &mut sigma) },
        TlStatus::TlOk
    );
    let mut rho = vec![0.0; many.len()];
    assert_eq!(
        unsafe { tl_sigma_solve(sigma, rho.as_mut_ptr(), rho.len()) },
        TlStatus::TlAmbiguousNullspace
    );
    unsafe { tl_sigma_free(sigma) };
}

#[test]
fn sigma_solve_and_validate() {
    let idx = [4u32, 8, 12, 24];
    let mut sigma = ptr::null_mut();
    assert_eq!(unsafe { tl_sigma_new(4, 2, idx.as_ptr(), idx.len(), &mut sigma) }, TlStatus::TlOk);
    let mut rho = [0.0; 4];
    assert_eq!(unsafe { tl_sigma_solve(sigma, rho.as_mut_ptr(), 4) }, TlStatus::TlOk);
    for (r, want) in rho.iter().zip([1.0, 0.81070, 0.21647, -0.06593]) {
        assert!((r - want).abs() < 5e-5, "{r} vs {want}");
    }
    let (mut valid, mut min) = (0, 0.0);
    assert_eq!(
        unsafe { tl_sigma_validate(sigma, 21, 401, 0.0, &mut valid, &mut min) },
        TlStatus::TlOk
    );
    assert_eq!(valid, 1);
    assert!(min > 0.0);
    unsafe { tl_sigma_free(sigma) };
}

#[test]
fn rate_and_minpoly() {
    let ns = [10u32, 20, 40, 80];
    let mut slope = 0.0;
    assert_eq!(unsafe { tl_rate_slope(2, ns.as_ptr(), ns.len(), &mut slope) }, TlStatus::TlOk);
    assert!((slope + 1.0).abs() < 0.05);

    let mut coeffs = [0i64; 16];
    let mut degree = 0;
    assert_eq!(
        unsafe { tl_minpoly(4, 3, 512, 8, coeffs.as_mut_ptr(), coeffs.len(), &mut degree) },
        TlStatus::TlOk
    );
    assert_eq!(degree, 4);
    assert_eq!(&coeffs[..5], &[16, -64, 56, -112, 65]);
}

#[test]
fn header_declares_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/threshold_lab.h")).unwrap();
    for name in [
        "typedef struct TlChain TlChain",
        "typedef struct TlSigma TlSigma",
        "TL_OK = 0",
        "TL_BUFFER_TOO_SMALL",
        "tl_last_error_message",
        "tl_chain_new",
        "tl_sigma_validate",
        "tl_minpoly",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
    assert!(!unsafe { CStr::from_ptr(tl_version()) }.to_bytes().is_empty());
}

/// Compiles `tests/c/smoke.c` against the generated header and the static library.
#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if std::process::Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libthreshold_lab_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("tl_smoke");
    let status = std::process::Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), "0.545328925426 0.592979127135");
}
