use std::fs;

use semitorsion::search::{render_jsonl, resume_path, run_search, SearchConfig};

/// Symmetric hits of genus <= 6 as (semigroup, M, N), in emission order:
/// semigroup order, then lexicographic pairs with M <= N.
const GENUS_6_HITS: [(&[i64], &[i64], &[i64]); 17] = [
    (&[4, 5, 6], &[0, 1], &[0, 2]),
    (&[5, 6, 7, 8], &[0, 1], &[0, 2]),
    (&[5, 6, 7, 8], &[0, 1], &[0, 3]),
    (&[4, 6, 7], &[0, 1], &[0, 2]),
    (&[4, 6, 7], &[0, 2], &[0, 3]),
    (&[6, 7, 8, 9, 10], &[0, 1], &[0, 2]),
    (&[6, 7, 8, 9, 10], &[0, 1], &[0, 2, 4]),
    (&[6, 7, 8, 9, 10], &[0, 1], &[0, 3]),
    (&[6, 7, 8, 9, 10], &[0, 1], &[0, 4]),
    (&[6, 7, 8, 9, 10], &[0, 1, 2], &[0, 3]),
    (&[6, 7, 8, 9, 10], &[0, 2], &[0, 3]),
    (&[5, 7, 8, 9], &[0, 1], &[0, 2]),
    (&[5, 7, 8, 9], &[0, 1], &[0, 3]),
    (&[5, 7, 8, 9], &[0, 2], &[0, 4]),
    (&[4, 6, 9], &[0, 1], &[0, 2]),
    (&[4, 6, 9], &[0, 2], &[0, 3]),
    (&[4, 6, 9], &[0, 2], &[0, 5]),
];

fn config(max_genus: usize) -> SearchConfig {
    SearchConfig {
        max_genus,
        ..SearchConfig::default()
    }
}

#[test]
fn genus_6_hits_are_frozen() {
    let outcome = run_search(&config(6)).unwrap();
    let found: Vec<(&[i64], &[i64], &[i64])> = outcome
        .hits
        .iter()
        .map(|h| (h.semigroup.as_slice(), h.m_gens.as_slice(), h.n_gens.as_slice()))
        .collect();
    assert_eq!(found, GENUS_6_HITS.to_vec());
    for h in &outcome.hits {
        assert!(h.oracle_confirmed);
        assert!(h.theorem_consistent);
        assert_eq!(h.torsion_length, 0);
        assert_eq!(h.lemma22_equal, Some(true));
    }
}

#[test]
fn worker_count_does_not_change_hits() {
    let one = run_search(&config(6)).unwrap();
    let many = run_search(&SearchConfig {
        worker_count: 4,
        ..config(6)
    })
    .unwrap();
    assert_eq!(render_jsonl(&one.hits), render_jsonl(&many.hits));
    assert_eq!(one.summary.pairs, many.summary.pairs);
}

#[test]
fn resume_after_partial_run_reproduces_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hits.jsonl");
    let cfg = SearchConfig {
        output_path: Some(out.clone()),
        ..config(7)
    };
    let full = run_search(&cfg).unwrap();
    let full_bytes = fs::read(&out).unwrap();
    assert_eq!(full_bytes, render_jsonl(&full.hits).into_bytes());

    // Keep only the first checkpoint, as if the run died right after it,
    // leaving a torn line in the output.
    let side = resume_path(&out);
    let log = fs::read_to_string(&side).unwrap();
    let checkpoints: Vec<&str> = log.lines().collect();
    assert!(checkpoints.len() > 1, "need several checkpoints, got {}", checkpoints.len());
    fs::write(&side, format!("{}\n", checkpoints[0])).unwrap();
    let first: serde_json::Value = serde_json::from_str(checkpoints[0]).unwrap();
    let kept = first["output_bytes"].as_u64().unwrap() as usize;
    let mut torn = full_bytes[..kept].to_vec();
    torn.extend_from_slice(b"{\"semigroup\":[9");
    fs::write(&out, torn).unwrap();

    let resumed = run_search(&SearchConfig {
        resume: true,
        worker_count: 3,
        ..cfg.clone()
    })
    .unwrap();
    assert_eq!(resumed.summary.resumed_after, first["semigroup_index"].as_u64().map(|i| i as usize));
    assert_eq!(fs::read(&out).unwrap(), full_bytes);
    assert_eq!(resumed.hits, full.hits);
    assert_eq!(resumed.summary.pairs, full.summary.pairs);
    assert_eq!(resumed.summary.config_hash, full.summary.config_hash);
}

#[test]
fn resume_without_side_file_starts_over() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hits.jsonl");
    let outcome = run_search(&SearchConfig {
        output_path: Some(out.clone()),
        resume: true,
        ..config(5)
    })
    .unwrap();
    assert_eq!(outcome.summary.resumed_after, None);
    assert_eq!(fs::read_to_string(&out).unwrap(), render_jsonl(&outcome.hits));
}

#[test]
fn hash_ignores_paths_and_workers() {
    let a = config(6);
    let b = SearchConfig {
        worker_count: 8,
        output_path: Some("elsewhere.jsonl".into()),
        resume: true,
        ..config(6)
    };
    assert_eq!(a.config_hash(), b.config_hash());
    assert_ne!(a.config_hash(), config(5).config_hash());
    assert_ne!(
        a.config_hash(),
        SearchConfig {
            symmetric_only: false,
            ..config(6)
        }
        .config_hash()
    );
}
