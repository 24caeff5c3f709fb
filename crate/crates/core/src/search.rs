//! Exhaustive search for non-free monomial ideal pairs with torsion-free
//! tensor product.
//!
//! Work is split by semigroup and run on a fixed-size rayon pool; results are
//! merged in enumeration order, so the JSONL output depends only on the
//! config. A `<output>.resume` side file records progress after every chunk
//! of semigroups together with a hash of the config.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ideal::{end_ring, enumerate_ideals, SIdeal};
use crate::oracle::{torsion_length_oracle, DEFAULT_MODULUS};
use crate::semigroup::{enumerate_semigroups, Semigroup};
use crate::tensor::{lemma22_compare, torsion_profile, Base};

/// Semigroups per checkpoint.
const CHUNK: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_genus: usize,
    pub symmetric_only: bool,
    pub oracle_check: bool,
    pub output_path: Option<PathBuf>,
    pub worker_count: usize,
    /// Keep only semigroups with this many minimal generators.
    pub embedding_dim: Option<usize>,
    /// Keep only semigroups of this multiplicity.
    pub multiplicity: Option<i64>,
    pub resume: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_genus: 4,
            symmetric_only: true,
            oracle_check: true,
            output_path: None,
            worker_count: 1,
            embedding_dim: None,
            multiplicity: None,
            resume: false,
        }
    }
}

impl SearchConfig {
    /// Hash of the fields that determine the output (not paths or workers).
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::json!({
            "max_genus": self.max_genus,
            "symmetric_only": self.symmetric_only,
            "oracle_check": self.oracle_check,
            "embedding_dim": self.embedding_dim,
            "multiplicity": self.multiplicity,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    fn keeps(&self, s: &Semigroup) -> bool {
        self.embedding_dim.is_none_or(|d| s.embedding_dimension() == d)
            && self.multiplicity.is_none_or(|m| s.multiplicity() == m)
    }
}

/// A torsion-free pair of non-principal ideals with its confirmations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub semigroup: Vec<i64>,
    pub frobenius: i64,
    pub m_gens: Vec<i64>,
    pub n_gens: Vec<i64>,
    pub torsion_length: usize,
    pub oracle_confirmed: bool,
    pub e_ring_gens: Vec<i64>,
    pub e_extra_elements: Vec<i64>,
    /// `None` when one of the ideals is not an `E`-module.
    pub lemma22_equal: Option<bool>,
    pub theorem_consistent: bool,
}

impl SearchHit {
    /// One key-sorted JSON object, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_value(self)
            .expect("hit serializes")
            .to_string()
    }
}

/// A pair the union-find engine reports as torsion-free.
#[derive(Clone, Debug)]
pub struct HitCandidate {
    pub m: SIdeal,
    pub n: SIdeal,
    pub torsion_length: usize,
}

/// Unordered pairs `(M, N)`, `M ≤ N`, of non-principal ideals of `S`.
pub fn enumerate_pairs(semigroup: &Arc<Semigroup>) -> Vec<(SIdeal, SIdeal)> {
    let ideals: Vec<SIdeal> = enumerate_ideals(semigroup)
        .into_iter()
        .filter(|i| !i.is_principal())
        .collect();
    let mut pairs = Vec::new();
    for (i, m) in ideals.iter().enumerate() {
        for n in &ideals[i..] {
            pairs.push((m.clone(), n.clone()));
        }
    }
    pairs
}

/// Re-checks a candidate and fills in the `E`-ring evidence.
pub fn verify_hit(candidate: &HitCandidate, oracle_check: bool) -> Result<SearchHit> {
    let (m, n) = (&candidate.m, &candidate.n);
    let s = m.semigroup();
    let oracle_confirmed = if oracle_check {
        let forward = torsion_length_oracle(m, n, &Base::R, DEFAULT_MODULUS)?;
        let backward = torsion_length_oracle(n, m, &Base::R, DEFAULT_MODULUS)?;
        if forward != candidate.torsion_length || backward != candidate.torsion_length {
            return Err(Error::OracleDisagreement(format!(
                "<{s}> M={m} N={n}: engine {} vs oracle {forward} (swapped {backward})",
                candidate.torsion_length
            )));
        }
        true
    } else {
        false
    };

    let e = end_ring(s)?;
    let lemma22_equal = if m.is_module_over(&e)? && n.is_module_over(&e)? {
        Some(lemma22_compare(m, n, &e)?.equal_dims)
    } else {
        None
    };
    // In the monomial world E is again a numerical semigroup ring containing
    // R: local, with the same residue field.
    let ring = e.as_semigroup();
    let theorem_consistent = s.min_gens().iter().all(|&g| ring.contains(g))
        && e.underlying().shift() == 0
        && ring.frobenius() <= s.frobenius();

    Ok(SearchHit {
        semigroup: s.min_gens().to_vec(),
        frobenius: s.frobenius(),
        m_gens: m.gens().to_vec(),
        n_gens: n.gens().to_vec(),
        torsion_length: candidate.torsion_length,
        oracle_confirmed,
        e_ring_gens: e.ring_gens().to_vec(),
        e_extra_elements: e.extra_elements().to_vec(),
        lemma22_equal,
        theorem_consistent,
    })
}

#[derive(Clone, Debug, Default)]
pub struct SemigroupOutcome {
    pub pairs: usize,
    pub hits: Vec<SearchHit>,
}

/// All torsion-free pairs over one semigroup.
pub fn search_semigroup(semigroup: &Semigroup, oracle_check: bool) -> Result<SemigroupOutcome> {
    let s = Arc::new(semigroup.clone());
    let pairs = enumerate_pairs(&s);
    let mut hits = Vec::new();
    for (m, n) in &pairs {
        let profile = torsion_profile(m, n, &Base::R)?;
        if profile.torsion_length == 0 {
            let candidate = HitCandidate {
                m: m.clone(),
                n: n.clone(),
                torsion_length: 0,
            };
            hits.push(verify_hit(&candidate, oracle_check)?);
        }
    }
    Ok(SemigroupOutcome {
        pairs: pairs.len(),
        hits,
    })
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))
}

/// Searches an explicit list of semigroups in parallel, merged in list order.
pub fn search_semigroups(
    semigroups: &[Semigroup],
    oracle_check: bool,
    workers: usize,
) -> Result<SemigroupOutcome> {
    let outcomes = pool(workers)?.install(|| {
        semigroups
            .par_iter()
            .map(|s| search_semigroup(s, oracle_check))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(outcomes
        .into_iter()
        .fold(SemigroupOutcome::default(), |mut acc, o| {
            acc.pairs += o.pairs;
            acc.hits.extend(o.hits);
            acc
        }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub config_hash: String,
    pub max_genus: usize,
    pub symmetric_only: bool,
    pub semigroups: usize,
    pub pairs: usize,
    pub hits: usize,
    pub resumed_after: Option<usize>,
    pub runtime_ms: u128,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub hits: Vec<SearchHit>,
    pub summary: SearchSummary,
}

/// Progress record appended to the resume side file after every chunk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    config_hash: String,
    /// Index of the last fully processed semigroup.
    semigroup_index: usize,
    /// Cumulative pairs examined.
    pair_index: usize,
    hits: usize,
    output_bytes: u64,
}

pub fn resume_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".resume");
    PathBuf::from(name)
}

fn unwritable(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::OutputUnwritable {
        path: path.display().to_string(),
        source,
    }
}

fn last_checkpoint(path: &Path) -> Result<Option<Checkpoint>> {
    let Ok(file) = File::open(path) else {
        return Ok(None);
    };
    let mut last = None;
    for line in BufReader::new(file).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            last = Some(serde_json::from_str(&line)?);
        }
    }
    Ok(last)
}

fn read_hits(path: &Path) -> Result<Vec<SearchHit>> {
    let file = File::open(path)?;
    BufReader::new(file)
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| Ok(serde_json::from_str(&l?)?))
        .collect()
}

struct Sink {
    output: File,
    output_path: PathBuf,
    resume: File,
    resume_path: PathBuf,
    bytes: u64,
}

impl Sink {
    fn open(output_path: &Path, cfg_hash: &str, resume: bool) -> Result<(Self, Option<Checkpoint>)> {
        let side = resume_path(output_path);
        let checkpoint = if resume { last_checkpoint(&side)? } else { None };
        if let Some(cp) = &checkpoint {
            if cp.config_hash != cfg_hash {
                return Err(Error::ResumeMismatch {
                    expected: cfg_hash.to_string(),
                    found: cp.config_hash.clone(),
                });
            }
        }
        let output = match &checkpoint {
            Some(cp) => {
                let f = OpenOptions::new()
                    .write(true)
                    .open(output_path)
                    .map_err(unwritable(output_path))?;
                let len = f.metadata().map_err(unwritable(output_path))?.len();
                if len < cp.output_bytes {
                    return Err(Error::CorruptResume(format!(
                        "{} has {len} bytes, checkpoint expects at least {}",
                        output_path.display(),
                        cp.output_bytes
                    )));
                }
                // Drop anything written after the last checkpoint.
                f.set_len(cp.output_bytes).map_err(unwritable(output_path))?;
                drop(f);
                OpenOptions::new()
                    .append(true)
                    .open(output_path)
                    .map_err(unwritable(output_path))?
            }
            None => File::create(output_path).map_err(unwritable(output_path))?,
        };
        let resume_file = if checkpoint.is_some() {
            OpenOptions::new().append(true).open(&side)
        } else {
            File::create(&side)
        }
        .map_err(unwritable(&side))?;
        Ok((
            Sink {
                output,
                output_path: output_path.to_path_buf(),
                resume: resume_file,
                resume_path: side,
                bytes: checkpoint.as_ref().map_or(0, |c| c.output_bytes),
            },
            checkpoint,
        ))
    }

    fn write_hits(&mut self, hits: &[SearchHit]) -> Result<()> {
        for hit in hits {
            let line = hit.to_json_line() + "\n";
            self.output
                .write_all(line.as_bytes())
                .map_err(unwritable(&self.output_path))?;
            self.bytes += line.len() as u64;
        }
        Ok(())
    }

    fn checkpoint(&mut self, cp: &Checkpoint) -> Result<()> {
        self.output.flush().map_err(unwritable(&self.output_path))?;
        self.output.sync_data().map_err(unwritable(&self.output_path))?;
        let line = serde_json::to_string(cp)? + "\n";
        self.resume
            .write_all(line.as_bytes())
            .map_err(unwritable(&self.resume_path))?;
        self.resume.flush().map_err(unwritable(&self.resume_path))
    }
}

/// Runs the configured sweep, writing JSONL when an output path is set.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let start = Instant::now();
    if cfg.worker_count == 0 {
        return Err(Error::Parse {
            input: "worker_count = 0".into(),
            reason: "at least one worker is required".into(),
        });
    }
    let semigroups: Vec<Semigroup> = enumerate_semigroups(cfg.max_genus, cfg.symmetric_only)?
        .filter(|s| cfg.keeps(s))
        .collect();
    let cfg_hash = cfg.config_hash();

    let (mut sink, checkpoint) = match &cfg.output_path {
        Some(p) => {
            let (sink, cp) = Sink::open(p, &cfg_hash, cfg.resume)?;
            (Some(sink), cp)
        }
        None => (None, None),
    };
    let mut hits = match (&checkpoint, &cfg.output_path) {
        (Some(_), Some(p)) => read_hits(p)?,
        _ => Vec::new(),
    };
    let resumed_after = checkpoint.as_ref().map(|c| c.semigroup_index);
    let first = resumed_after.map_or(0, |i| i + 1);
    let mut pairs = checkpoint.as_ref().map_or(0, |c| c.pair_index);

    let workers = pool(cfg.worker_count)?;
    let mut index = first;
    while index < semigroups.len() {
        let end = (index + CHUNK).min(semigroups.len());
        let outcomes = workers.install(|| {
            semigroups[index..end]
                .par_iter()
                .map(|s| search_semigroup(s, cfg.oracle_check))
                .collect::<Result<Vec<_>>>()
        })?;
        for outcome in outcomes {
            pairs += outcome.pairs;
            if let Some(sink) = sink.as_mut() {
                sink.write_hits(&outcome.hits)?;
            }
            hits.extend(outcome.hits);
        }
        if let Some(sink) = sink.as_mut() {
            sink.checkpoint(&Checkpoint {
                config_hash: cfg_hash.clone(),
                semigroup_index: end - 1,
                pair_index: pairs,
                hits: hits.len(),
                output_bytes: sink.bytes,
            })?;
        }
        index = end;
    }

    let summary = SearchSummary {
        config_hash: cfg_hash,
        max_genus: cfg.max_genus,
        symmetric_only: cfg.symmetric_only,
        semigroups: semigroups.len(),
        pairs,
        hits: hits.len(),
        resumed_after,
        runtime_ms: start.elapsed().as_millis(),
    };
    Ok(SearchOutcome { hits, summary })
}

/// The hits as JSON Lines, exactly as [`run_search`] writes them.
pub fn render_jsonl(hits: &[SearchHit]) -> String {
    hits.iter().map(|h| h.to_json_line() + "\n").collect()
}
