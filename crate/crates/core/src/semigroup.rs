//! Numerical semigroups: construction, Apéry sets, Frobenius numbers, gaps,
//! symmetry, and enumeration by genus.
//!
//! A numerical semigroup `S` stands for the one-dimensional local domain
//! `R = k[[t^S]]`. Nothing computed here depends on the base field `k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest genus [`enumerate_semigroups`] accepts unless a cap is passed explicitly.
pub const DEFAULT_GENUS_CAP: usize = 12;

/// An immutable numerical semigroup with its cached invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Semigroup {
    min_gens: Vec<i64>,
    multiplicity: i64,
    apery: Vec<i64>,
    frobenius: i64,
    gaps: Vec<i64>,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Apéry set with respect to `m` by round-robin relaxation over residues.
/// Terminates because the generators have gcd 1.
fn apery_set(m: i64, gens: &[i64]) -> Vec<i64> {
    let m_us = m as usize;
    let mut dist = vec![i64::MAX; m_us];
    dist[0] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for r in 0..m_us {
            if dist[r] == i64::MAX {
                continue;
            }
            for &g in gens {
                let t = ((r as i64 + g) % m) as usize;
                let cand = dist[r] + g;
                if cand < dist[t] {
                    dist[t] = cand;
                    changed = true;
                }
            }
        }
    }
    dist
}

impl Semigroup {
    /// Builds the semigroup generated by `gens`, minimalizing the generator list.
    pub fn new(gens: &[i64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if let Some(&bad) = gens.iter().find(|&&g| g < 1) {
            return Err(Error::InvalidGenerator(bad));
        }
        let mut gens = gens.to_vec();
        gens.sort_unstable();
        gens.dedup();
        let g = gens.iter().fold(0, |acc, &x| gcd(acc, x));
        if g != 1 {
            return Err(Error::NotCoprime { gcd: g });
        }

        let multiplicity = gens[0];
        let apery = apery_set(multiplicity, &gens);
        let frobenius = apery.iter().copied().max().unwrap_or(0) - multiplicity;
        let mut sg = Semigroup {
            min_gens: Vec::new(),
            multiplicity,
            apery,
            frobenius,
            gaps: Vec::new(),
        };
        sg.gaps = (1..=frobenius.max(0)).filter(|&n| !sg.contains(n)).collect();
        // A nonzero element is a minimal generator iff it is not a sum of two
        // nonzero elements.
        sg.min_gens = gens
            .iter()
            .copied()
            .filter(|&g| !(1..g).any(|s| sg.contains(s) && sg.contains(g - s)))
            .collect();
        Ok(sg)
    }

    /// The natural numbers, `S = ℕ` (the DVR case).
    pub fn naturals() -> Self {
        Self::new(&[1]).expect("<1> is a valid semigroup")
    }

    /// Builds the semigroup whose members in `1..=bound` satisfy `member`.
    ///
    /// `bound` must be at least the largest minimal generator; every member
    /// above `bound` is assumed to be present.
    pub(crate) fn from_membership(bound: i64, member: impl Fn(i64) -> bool) -> Result<Self> {
        let gens: Vec<i64> = (1..=bound)
            .filter(|&s| member(s) && !(1..s).any(|a| member(a) && member(s - a)))
            .collect();
        Self::new(&gens)
    }

    pub fn min_gens(&self) -> &[i64] {
        &self.min_gens
    }

    pub fn multiplicity(&self) -> i64 {
        self.multiplicity
    }

    pub fn apery(&self) -> &[i64] {
        &self.apery
    }

    /// Largest integer not in `S`; `-1` for `ℕ`.
    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    pub fn embedding_dimension(&self) -> usize {
        self.min_gens.len()
    }

    pub fn is_naturals(&self) -> bool {
        self.multiplicity == 1
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= 0 && n >= self.apery[n.rem_euclid(self.multiplicity) as usize]
    }

    /// Symmetric (Gorenstein) test: `z ∈ S ⇔ F − z ∉ S`, via the genus formula.
    pub fn is_symmetric(&self) -> bool {
        2 * self.genus() as i64 == self.frobenius + 1
    }

    /// Symmetry read off the Apéry set: every element `w` pairs with
    /// `max(apery) − w`, which must also be an Apéry element.
    pub fn apery_is_symmetric(&self) -> bool {
        let top = self.apery.iter().copied().max().unwrap_or(0);
        self.apery.iter().all(|&w| self.apery.contains(&(top - w)))
    }

    /// Children in the semigroup tree: remove a minimal generator above the
    /// Frobenius number.
    pub fn children(&self) -> Vec<Semigroup> {
        self.min_gens
            .iter()
            .copied()
            .filter(|&g| g > self.frobenius)
            .map(|g| {
                Semigroup::from_membership(2 * g + 1, |n| n != g && self.contains(n))
                    .expect("removing a generator above F keeps gcd 1")
            })
            .collect()
    }
}

impl fmt::Display for Semigroup {
    /// Comma-separated minimal generators, e.g. `4,5,6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.min_gens.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses a comma-separated integer list such as `4,5,6` or `-1, 0, 3`.
pub fn parse_int_list(input: &str) -> Result<Vec<i64>> {
    input
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i64>().map_err(|e| Error::Parse {
                input: input.to_string(),
                reason: e.to_string(),
            })
        })
        .collect()
}

impl FromStr for Semigroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Semigroup::new(&parse_int_list(s)?)
    }
}

impl Serialize for Semigroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.min_gens.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Semigroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let gens = Vec::<i64>::deserialize(deserializer)?;
        Semigroup::new(&gens).map_err(serde::de::Error::custom)
    }
}

/// Deterministic stream of numerical semigroups in (genus, gap set) order.
///
/// Walks the semigroup tree one genus level at a time; each level is sorted
/// by gap set before it is yielded.
pub struct SemigroupTree {
    max_genus: usize,
    symmetric_only: bool,
    genus: usize,
    level: std::vec::IntoIter<Semigroup>,
    next_level: Vec<Semigroup>,
}

impl Iterator for SemigroupTree {
    type Item = Semigroup;

    fn next(&mut self) -> Option<Semigroup> {
        loop {
            if let Some(s) = self.level.next() {
                if self.genus < self.max_genus {
                    self.next_level.extend(s.children());
                }
                if !self.symmetric_only || s.is_symmetric() {
                    return Some(s);
                }
                continue;
            }
            if self.next_level.is_empty() || self.genus >= self.max_genus {
                return None;
            }
            let mut level = std::mem::take(&mut self.next_level);
            level.sort_by(|a, b| a.gaps.cmp(&b.gaps));
            self.genus += 1;
            self.level = level.into_iter();
        }
    }
}

/// Every numerical semigroup of genus at most `max_genus`, exactly once.
pub fn enumerate_semigroups(max_genus: usize, symmetric_only: bool) -> Result<SemigroupTree> {
    enumerate_semigroups_capped(max_genus, symmetric_only, DEFAULT_GENUS_CAP)
}

pub fn enumerate_semigroups_capped(
    max_genus: usize,
    symmetric_only: bool,
    cap: usize,
) -> Result<SemigroupTree> {
    if max_genus > cap {
        return Err(Error::GenusCapExceeded {
            requested: max_genus,
            cap,
        });
    }
    Ok(SemigroupTree {
        max_genus,
        symmetric_only,
        genus: 0,
        level: vec![Semigroup::naturals()].into_iter(),
        next_level: Vec::new(),
    })
}
