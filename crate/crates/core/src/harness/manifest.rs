use std::io::Write;

use sha2::{Digest, Sha256};

use crate::error::Result;

/// Provenance of one output directory. Holds no timestamps, so reruns
/// reproduce it byte for byte.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub scenario: String,
    pub config_sha256: String,
    pub master_seed: u64,
    pub n_trials: u64,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(scenario: &str, config_text: &str, master_seed: u64, n_trials: u64) -> Self {
        let digest = Sha256::digest(config_text.as_bytes());
        Self {
            scenario: scenario.to_string(),
            config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            master_seed,
            n_trials,
            outputs: Vec::new(),
        }
    }
}

pub fn write_manifest<W: Write>(m: &Manifest, mut out: W) -> Result<()> {
    writeln!(out, "crate = \"{}\"", env!("CARGO_PKG_NAME"))?;
    writeln!(out, "version = \"{}\"", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "scenario = \"{}\"", m.scenario)?;
    writeln!(out, "config_sha256 = \"{}\"", m.config_sha256)?;
    writeln!(out, "master_seed = {}", m.master_seed)?;
    writeln!(out, "n_trials = {}", m.n_trials)?;
    let outputs: Vec<String> = m.outputs.iter().map(|o| format!("\"{o}\"")).collect();
    writeln!(out, "outputs = [{}]", outputs.join(", "))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_and_layout() {
        let mut m = Manifest::new("demo", "abc", 7, 10);
        assert_eq!(
            m.config_sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        m.outputs.push("demo.csv".into());
        let mut buf = Vec::new();
        write_manifest(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("master_seed = 7\n"));
        assert!(text.ends_with("outputs = [\"demo.csv\"]\n"));
    }
}
