//! Brute-force fiber dimensions by exact linear algebra.
//!
//! Each fiber becomes a signed incidence matrix: one row per relation, `+1` at
//! the source node and `−1` at the target. The number of classes is
//! `nodes − rank`. This is computed without any graph search so it can be
//! checked against [`crate::fiber::UnionFindCounter`].
//!
//! Characteristic 2 is rejected: signed and unsigned incidence coincide there
//! and the rank formula picks up a bipartiteness correction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fiber::FiberCounter;
use crate::ideal::SIdeal;
use crate::tensor::{torsion_profile_with, Base};

/// Largest prime below 2^16.
pub const DEFAULT_MODULUS: u64 = 65521;
pub const DEFAULT_NODE_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberMatrix {
    pub degree: i64,
    pub nodes: Vec<(i64, i64)>,
    /// `(source, target)` node indices; the row is `e_source − e_target`.
    pub relation_rows: Vec<(usize, usize)>,
    /// Odd prime, or 0 for the rationals.
    pub field_modulus: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberRank {
    pub nodes: usize,
    pub rank: usize,
    pub classes: usize,
}

fn is_odd_prime(p: u64) -> bool {
    p > 2 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn check_modulus(p: u64) -> Result<()> {
    if p == 0 || is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidModulus(p))
    }
}

impl FiberMatrix {
    pub fn build(
        m: &SIdeal,
        n: &SIdeal,
        degree: i64,
        ring_gens: &[i64],
        field_modulus: u64,
        node_cap: usize,
    ) -> Result<Self> {
        check_modulus(field_modulus)?;
        let lo = m.min_element();
        let hi = degree - n.min_element();
        let nodes: Vec<(i64, i64)> = (lo..=hi)
            .filter(|&x| m.contains(x) && n.contains(degree - x))
            .map(|x| (x, degree - x))
            .collect();
        if nodes.len() > node_cap {
            return Err(Error::FiberTooLarge {
                degree,
                nodes: nodes.len(),
                cap: node_cap,
            });
        }
        let mut relation_rows = Vec::new();
        for (src, &(x, y)) in nodes.iter().enumerate() {
            for &g in ring_gens {
                let target = (x - g, y + g);
                if let Ok(dst) = nodes.binary_search(&target) {
                    relation_rows.push((src, dst));
                }
            }
        }
        Ok(FiberMatrix {
            degree,
            nodes,
            relation_rows,
            field_modulus,
        })
    }

    fn dense_rows(&self) -> Vec<Vec<i64>> {
        self.relation_rows
            .iter()
            .map(|&(src, dst)| {
                let mut row = vec![0i64; self.nodes.len()];
                row[src] += 1;
                row[dst] -= 1;
                row
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let rows = self.dense_rows();
        if self.field_modulus == 0 {
            rank_rational(rows)
        } else {
            rank_mod_p(rows, self.field_modulus)
        }
    }
}

/// Rank over GF(p) by row reduction.
pub fn rank_mod_p(rows: Vec<Vec<i64>>, p: u64) -> usize {
    let mut mat: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.rem_euclid(p as i64) as u64).collect())
        .collect();
    let cols = mat.first().map_or(0, Vec::len);
    let mul = |a: u64, b: u64| -> u64 { (a as u128 * b as u128 % p as u128) as u64 };
    let inv = |a: u64| -> u64 {
        // Fermat: a^(p−2).
        let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..mat.len()).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(rank, pivot);
        let scale = inv(mat[rank][col]);
        for v in mat[rank].iter_mut() {
            *v = mul(*v, scale);
        }
        let pivot_row = mat[rank].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = (*v + p - mul(f, pv)) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over ℚ by fraction-exact row reduction.
pub fn rank_rational(rows: Vec<Vec<i64>>) -> usize {
    let mut mat: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let cols = mat.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot);
        let scale = BigRational::one() / mat[rank][col].clone();
        for v in mat[rank].iter_mut() {
            *v = &*v * &scale;
        }
        let pivot_row = mat[rank].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = &*v - &f * pv;
            }
        }
        rank += 1;
    }
    rank
}

/// Classes in one fiber as `nodes − rank` of its relation matrix.
pub fn fiber_rank_oracle(
    m: &SIdeal,
    n: &SIdeal,
    degree: i64,
    ring_gens: &[i64],
    field_modulus: u64,
) -> Result<FiberRank> {
    let fm = FiberMatrix::build(m, n, degree, ring_gens, field_modulus, DEFAULT_NODE_CAP)?;
    let rank = fm.rank();
    Ok(FiberRank {
        nodes: fm.nodes.len(),
        rank,
        classes: fm.nodes.len() - rank,
    })
}

/// Fiber engine backed by [`fiber_rank_oracle`].
#[derive(Clone, Debug)]
pub struct RankCounter {
    modulus: u64,
    node_cap: usize,
    name: &'static str,
}

impl RankCounter {
    pub fn new(modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(RankCounter {
            modulus,
            node_cap: DEFAULT_NODE_CAP,
            name: if modulus == 0 { "rank-rational" } else { "rank-modp" },
        })
    }

    pub fn default_prime() -> Self {
        Self::new(DEFAULT_MODULUS).expect("65521 is prime")
    }

    pub fn rational() -> Self {
        Self::new(0).expect("0 selects the rationals")
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap;
        self
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl FiberCounter for RankCounter {
    fn name(&self) -> &str {
        self.name
    }

    fn classes(&self, m: &SIdeal, n: &SIdeal, degree: i64, ring_gens: &[i64]) -> Result<usize> {
        let fm = FiberMatrix::build(m, n, degree, ring_gens, self.modulus, self.node_cap)?;
        Ok(fm.nodes.len() - fm.rank())
    }
}

/// Torsion length with every fiber counted by the linear-algebra oracle.
pub fn torsion_length_oracle(m: &SIdeal, n: &SIdeal, base: &Base<'_>, field_modulus: u64) -> Result<usize> {
    let counter = RankCounter::new(field_modulus)?;
    Ok(torsion_profile_with(m, n, base, &counter)?.torsion_length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Semigroup;
    use std::sync::Arc;

    fn sg(g: &[i64]) -> Arc<Semigroup> {
        Arc::new(Semigroup::new(g).unwrap())
    }

    #[test]
    fn primes() {
        assert!(is_odd_prime(65521));
        assert!(is_odd_prime(3));
        assert!(!is_odd_prime(2));
        assert!(!is_odd_prime(65535));
        assert!(matches!(RankCounter::new(2), Err(Error::InvalidModulus(2))));
        assert!(matches!(RankCounter::new(9), Err(Error::InvalidModulus(9))));
    }

    #[test]
    fn fiber_examples() {
        let s = sg(&[2, 3]);
        let m = SIdeal::new(&s, &[0, 1]).unwrap();
        let r = fiber_rank_oracle(&m, &m, 2, &[2, 3], DEFAULT_MODULUS).unwrap();
        assert_eq!(r, FiberRank { nodes: 3, rank: 1, classes: 2 });
        let fm = FiberMatrix::build(&m, &m, 2, &[2, 3], DEFAULT_MODULUS, 10).unwrap();
        assert_eq!(fm.relation_rows, vec![(2, 0)]);
        assert_eq!(fm.nodes[2], (2, 0));

        let empty = fiber_rank_oracle(&m, &m, -1, &[2, 3], 0).unwrap();
        assert_eq!(empty, FiberRank { nodes: 0, rank: 0, classes: 0 });

        let t = sg(&[4, 5, 6]);
        let a = SIdeal::new(&t, &[0, 1]).unwrap();
        let b = SIdeal::new(&t, &[0, 2]).unwrap();
        let r = fiber_rank_oracle(&a, &b, 7, &[4, 5, 6], DEFAULT_MODULUS).unwrap();
        assert_eq!(r, FiberRank { nodes: 4, rank: 3, classes: 1 });
    }

    #[test]
    fn node_cap() {
        let s = sg(&[2, 3]);
        let m = SIdeal::new(&s, &[0, 1]).unwrap();
        let err = FiberMatrix::build(&m, &m, 50, &[2, 3], 0, 10).unwrap_err();
        assert!(matches!(err, Error::FiberTooLarge { nodes: 51, cap: 10, .. }));
    }

    #[test]
    fn rank_routines_agree_on_small_matrices() {
        let rows = vec![vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]];
        assert_eq!(rank_mod_p(rows.clone(), 65521), 2);
        assert_eq!(rank_rational(rows), 2);
        // An odd cycle is full rank in odd characteristic.
        let tri = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(rank_mod_p(tri.clone(), 3), 3);
        assert_eq!(rank_rational(tri), 3);
        assert_eq!(rank_rational(vec![]), 0);
    }

    #[test]
    fn oracle_torsion_lengths() {
        let t = sg(&[4, 5, 6]);
        let a = SIdeal::new(&t, &[0, 1]).unwrap();
        let b = SIdeal::new(&t, &[0, 2]).unwrap();
        assert_eq!(torsion_length_oracle(&a, &b, &Base::R, DEFAULT_MODULUS).unwrap(), 0);
        let s = sg(&[2, 3]);
        let m = SIdeal::new(&s, &[0, 1]).unwrap();
        assert_eq!(torsion_length_oracle(&m, &m, &Base::R, DEFAULT_MODULUS).unwrap(), 2);
        assert_eq!(torsion_length_oracle(&m, &m, &Base::R, 0).unwrap(), 2);
        let r = SIdeal::unit(&s);
        assert_eq!(torsion_length_oracle(&r, &m, &Base::R, DEFAULT_MODULUS).unwrap(), 0);
    }
}
