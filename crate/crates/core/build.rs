fn main() {
    // embed `git describe` for the run-metadata sidecar; absent outside a
    // checkout
    let out = std::process::Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .output();
    if let Ok(o) = out {
        if o.status.success() {
            let s = String::from_utf8_lossy(&o.stdout).trim().to_string();
            if !s.is_empty() {
                println!("cargo:rustc-env=CLUSTER_FLOQUET_GIT={s}");
            }
        }
    }
    println!("cargo:rerun-if-changed=build.rs");
}
