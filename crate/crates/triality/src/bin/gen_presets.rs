//! Development helper: (re)writes the JSON preset files shipped under
//! `presets/` from the canonical in-crate definitions.
//!
//! Usage: `cargo run --bin gen_presets [DIR]` (default `presets`).

use std::path::PathBuf;

use triality::presets::shipped_presets;

fn main() -> std::io::Result<()> {
    let dir: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("presets"));
    std::fs::create_dir_all(&dir)?;
    for (name, text) in shipped_presets() {
        let path = dir.join(name);
        std::fs::write(&path, text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
