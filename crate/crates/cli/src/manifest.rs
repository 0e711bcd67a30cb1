//! Run manifests: config hash, code version, seeds and a hashed file
//! inventory, enough to verify byte-identical reproduction.

use scns_core::Result;
use std::path::Path;

/// FNV-1a over arbitrary bytes.
pub fn fnv64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub struct Manifest {
    pub config_hash: u64,
    pub code_version: &'static str,
    pub seed: u64,
    pub members: usize,
    pub wall_clock_s: f64,
    pub files: Vec<(String, u64, u64)>,
}

impl Manifest {
    pub fn new(config_text: &str, seed: u64, members: usize) -> Self {
        Self {
            config_hash: fnv64(config_text.as_bytes()),
            code_version: env!("CARGO_PKG_VERSION"),
            seed,
            members,
            wall_clock_s: 0.0,
            files: Vec::new(),
        }
    }

    /// Records a produced file (relative name, byte length, content hash).
    pub fn add_file(&mut self, dir: &Path, name: &str) -> Result<()> {
        let bytes = std::fs::read(dir.join(name))?;
        self.files.push((name.to_string(), bytes.len() as u64, fnv64(&bytes)));
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut text = String::new();
        text.push_str("format = scns-manifest-v1\n");
        text.push_str(&format!("config_hash = {:016x}\n", self.config_hash));
        text.push_str(&format!("code_version = {}\n", self.code_version));
        text.push_str(&format!("seed = {}\n", self.seed));
        text.push_str(&format!("members = {}\n", self.members));
        text.push_str(&format!("wall_clock_s = {:.3}\n", self.wall_clock_s));
        for (name, len, hash) in &self.files {
            text.push_str(&format!("file {name} {len} {hash:016x}\n"));
        }
        std::fs::write(dir.join("manifest.txt"), text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_is_stable() {
        assert_eq!(fnv64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv64(b"a"), 0xaf63dc4c8601ec8c);
        assert_ne!(fnv64(b"ab"), fnv64(b"ba"));
    }
}
