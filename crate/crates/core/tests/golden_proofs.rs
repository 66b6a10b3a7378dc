mod common;

use std::fs;

use common::{blessing, generated_proofs, golden_dir, proof_corpus};

/// Regenerates the generated part of the corpus with `BLESS=1`; otherwise
/// the files must match what the generator produces now.
#[test]
fn generated_proofs_match_files() {
    let dir = golden_dir("proofs");
    for (name, text) in generated_proofs() {
        let path = dir.join(&name);
        if blessing() {
            fs::write(&path, &text).expect("write golden proof");
        } else {
            let on_disk = fs::read_to_string(&path).unwrap_or_else(|_| panic!("{name} missing; rerun with BLESS=1"));
            assert_eq!(on_disk, text, "{name} is stale; rerun with BLESS=1");
        }
    }
}

#[test]
fn every_golden_proof_checks() {
    let corpus = proof_corpus();
    assert_eq!(corpus.len(), 50);
    for (name, proof) in &corpus {
        let stats = proof.stats().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(stats.step_count, proof.steps.len());
        assert!(stats.max_rho0 <= proof.level, "{name}");
        assert!(proof.theorem.is_some(), "{name} states no theorem");
    }
}

#[test]
fn accepted_proofs_stay_accepted_at_higher_levels() {
    for (name, proof) in proof_corpus() {
        for extra in 1..=3 {
            let mut higher = proof.clone();
            higher.level += extra;
            assert_eq!(higher.check(), Ok(()), "{name} at level {}", higher.level);
        }
        let mut lower = proof.clone();
        let needed = proof.stats().unwrap().max_rho0;
        if needed > 0 {
            lower.level = needed - 1;
            assert!(lower.check().is_err(), "{name} passes below its rho0");
        }
    }
}
