#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use seqlogic::proof::{parse_proof, ProofObject};
use seqlogic::testgen::{random_proof, rng};

pub fn golden_dir(kind: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(kind)
}

pub fn blessing() -> bool {
    std::env::var("BLESS").is_ok_and(|v| v == "1")
}

pub const PROOF_SEED: u64 = 2718;
pub const GENERATED_PROOFS: usize = 38;

/// File name and text of each generated golden proof.
pub fn generated_proofs() -> Vec<(String, String)> {
    let mut r = rng(PROOF_SEED);
    (1..=GENERATED_PROOFS)
        .map(|i| {
            let p = random_proof(&mut r, 4);
            (format!("gen_{i:02}.prf"), format!("# generated, seed {PROOF_SEED}, proof {i}\n{p}"))
        })
        .collect()
}

/// Every proof file in the golden corpus, sorted by name.
pub fn proof_corpus() -> Vec<(String, ProofObject)> {
    let mut files: Vec<PathBuf> = fs::read_dir(golden_dir("proofs"))
        .expect("golden proof directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "prf"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).expect("readable proof file");
            let name = path.file_name().expect("file name").to_string_lossy().into_owned();
            let proof = parse_proof(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, proof)
        })
        .collect()
}
