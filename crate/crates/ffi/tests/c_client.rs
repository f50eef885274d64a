//! Compile and run a small C program against the generated header and the
//! shared library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "dlexplain.h"

int main(void) {
    char *out = NULL;
    if (dlx_translate("A => R some (S some B)", &out) != DLX_STATUS_OK) return 10;
    puts(out);
    dlx_string_free(out);

    if (dlx_translate("A =>", &out) != DLX_STATUS_PARSE) return 11;
    if (dlx_last_error_message() == NULL) return 12;

    DlxKb *kb = NULL;
    const char *text = "class p\nclass q\nind a\nind b\ntype a p\ntype a q\ntype b q\n";
    if (dlx_kb_parse(text, &kb) != DLX_STATUS_OK) return 13;
    DlxConfig cfg = dlx_config_default();
    cfg.top_k = 1;
    if (dlx_learn(kb, "+ a\n- b\n", &cfg, &out) != DLX_STATUS_OK) return 14;
    if (strstr(out, "\"expression\":\"p\"") == NULL) return 15;
    dlx_string_free(out);
    dlx_kb_free(kb);
    return 0;
}
"#;

fn lib_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = std::env::var("CC").or_else(|_| which("cc").ok_or(())) else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    let deps = lib_dir();
    if !deps.join("libdlexplain_ffi.so").exists() && !deps.join("libdlexplain_ffi.dylib").exists() {
        eprintln!("shared library not built in {}; skipping", deps.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let bin = dir.path().join("client");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg("-L")
        .arg(&deps)
        .arg("-ldlexplain_ffi")
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).env("LD_LIBRARY_PATH", &deps).env("DYLD_LIBRARY_PATH", &deps).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "client exited with {:?}", out.status);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "forall x0.(A(x0) -> exists x1.(R(x0,x1) & exists x2.(S(x1,x2) & B(x2))))\n"
    );
}

fn which(name: &str) -> Option<String> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|d| d.join(name)).find(|p| p.is_file()).map(|p| p.display().to_string())
}
