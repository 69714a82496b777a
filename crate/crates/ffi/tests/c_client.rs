//! Compiles a C program against the generated header and links it to the
//! shared library, so the header and the exported symbols stay in sync.

use std::path::PathBuf;
use std::process::Command;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<this test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "whmc.h"

int main(void) {
    WhmcModel *model = NULL;
    if (whmc_model_new_brownian(0.0, 1.0, &model) != WHMC_STATUS_OK) return 1;
    WhmcEstimate est;
    WhmcStatus s = whmc_mc_estimate(model, WHMC_FUNCTIONAL_KIND_INDICATOR_CDF, 1.0, 0.0,
                                    1.0, 2.0, 64, 4000, 0, 5, 2, &est);
    if (s != WHMC_STATUS_OK) return 2;
    if (!(est.value > 0.2 && est.value < 0.45)) return 3;
    if (whmc_model_new_brownian(0.0, 0.0, &model) != WHMC_STATUS_INVALID_PARAMETER) return 4;
    if (whmc_last_error() == NULL) return 5;
    whmc_model_free(model);
    printf("%.6f\n", est.value);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_header() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler available; skipping");
        return;
    }
    let lib_dir = target_dir();
    let so = lib_dir.join("libwhmc_ffi.so");
    if !so.exists() {
        eprintln!("{} not built on this platform; skipping", so.display());
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let exe = dir.path().join("client");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lwhmc_ffi")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "client exited with {:?}",
        out.status.code()
    );
    let value: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!(value > 0.2 && value < 0.45);
}
