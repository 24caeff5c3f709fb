//! Graded pieces of `M ⊗ N` for monomial ideals, torsion length, and the
//! comparison of tensor products over `R` and over `E = End(𝔪)`.
//!
//! `M ⊗ N` has rank one and its torsion-free image is the product `MN`, so
//! `length(⊤(M ⊗ N)) = Σ_d (dim_d(M ⊗ N) − dim_d(MN))` with
//! `dim_d(MN) = 1` exactly when `d ∈ E_M + E_N`.
//!
//! The base-change lemma is stated for `M ⊗_R N` torsion over `R` while its
//! proof relies on `M ⊗_R N` being torsion-free (injectivity of
//! `M ⊗_R N → K ⊗_R (M ⊗_R N)`). The torsion-free reading is the one checked
//! here; for pairs with torsion the comparison is only reported.

use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fiber::{FiberCounter, UnionFindCounter};
use crate::ideal::{ERing, SIdeal};

/// Ring whose generators supply the tensor relations.
#[derive(Clone, Copy, Debug)]
pub enum Base<'a> {
    /// The semigroup ring itself.
    R,
    /// The endomorphism ring of the maximal ideal.
    E(&'a ERing),
}

impl Base<'_> {
    fn ring_gens(&self, m: &SIdeal) -> Vec<i64> {
        match self {
            Base::R => m.semigroup().min_gens().to_vec(),
            Base::E(e) => e.ring_gens().to_vec(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Base::R => "R",
            Base::E(_) => "E",
        }
    }
}

/// One degree of a profile. Serializes as `[degree, class_count, in_product]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub degree: i64,
    pub class_count: usize,
    pub in_product: bool,
}

impl Serialize for ProfileRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(3)?;
        t.serialize_element(&self.degree)?;
        t.serialize_element(&self.class_count)?;
        t.serialize_element(&self.in_product)?;
        t.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionProfile {
    pub degree_min: i64,
    /// Degree from which every fiber is a single class.
    pub degree_stable: i64,
    pub rows: Vec<ProfileRow>,
    pub torsion_length: usize,
    pub base_ring_gens: Vec<i64>,
}

impl TorsionProfile {
    /// Class count at `degree`, using 0 below the range and 1 above it.
    pub fn classes_at(&self, degree: i64) -> usize {
        if degree < self.degree_min {
            return 0;
        }
        self.rows
            .get((degree - self.degree_min) as usize)
            .map_or(1, |r| r.class_count)
    }

    pub fn degree_max(&self) -> i64 {
        self.degree_min + self.rows.len() as i64 - 1
    }

    /// Degrees that carry torsion, with their torsion dimension.
    pub fn torsion_degrees(&self) -> Vec<(i64, usize)> {
        self.rows
            .iter()
            .filter_map(|r| {
                let t = r.class_count - usize::from(r.in_product);
                (t > 0).then_some((r.degree, t))
            })
            .collect()
    }
}

fn check_closed(ideal: &SIdeal, ring_gens: &[i64]) -> Result<()> {
    match ideal.first_unclosed(ring_gens) {
        None => Ok(()),
        Some(g) => Err(Error::NotClosedUnderRing {
            ideal: ideal.to_string(),
            ring_gen: g,
        }),
    }
}

fn check_pair(m: &SIdeal, n: &SIdeal) -> Result<()> {
    if m.semigroup() == n.semigroup() {
        Ok(())
    } else {
        Err(Error::SemigroupMismatch {
            left: m.semigroup().to_string(),
            right: n.semigroup().to_string(),
        })
    }
}

/// Dimension of the degree-`degree` piece of `m ⊗ n` (union-find engine).
pub fn graded_fiber_classes(m: &SIdeal, n: &SIdeal, degree: i64, ring_gens: &[i64]) -> Result<usize> {
    check_pair(m, n)?;
    check_closed(m, ring_gens)?;
    check_closed(n, ring_gens)?;
    UnionFindCounter.classes(m, n, degree, ring_gens)
}

pub fn torsion_profile(m: &SIdeal, n: &SIdeal, base: &Base<'_>) -> Result<TorsionProfile> {
    torsion_profile_with(m, n, base, &UnionFindCounter)
}

/// Profile of `m ⊗ n` over `base` with fibers counted by `engine`.
///
/// Rows run from `min(E_M) + min(E_N)` to `D* + multiplicity`, where
/// `D* = shifts + conductor(M) + conductor(N) + 2·max(ring_gens)`; every
/// row in `[D*, D* + multiplicity]` must be a single class inside the product.
pub fn torsion_profile_with(
    m: &SIdeal,
    n: &SIdeal,
    base: &Base<'_>,
    engine: &dyn FiberCounter,
) -> Result<TorsionProfile> {
    check_pair(m, n)?;
    if let Base::E(e) = base {
        if e.semigroup() != m.semigroup() {
            return Err(Error::SemigroupMismatch {
                left: m.semigroup().to_string(),
                right: e.semigroup().to_string(),
            });
        }
    }
    let ring_gens = base.ring_gens(m);
    check_closed(m, &ring_gens)?;
    check_closed(n, &ring_gens)?;

    let product = m.product(n)?;
    let degree_min = m.min_element() + n.min_element();
    let max_gen = ring_gens.iter().copied().max().unwrap_or(1);
    let degree_stable = degree_min + m.conductor() + n.conductor() + 2 * max_gen;
    let top = degree_stable + m.semigroup().multiplicity();

    let mut rows = Vec::with_capacity((top - degree_min + 1) as usize);
    let mut torsion_length = 0;
    for degree in degree_min..=top {
        let class_count = engine.classes(m, n, degree, &ring_gens)?;
        let in_product = product.contains(degree);
        if class_count < usize::from(in_product) || (class_count > 0 && !in_product) {
            return Err(Error::ProductMismatch {
                degree,
                classes: class_count,
                in_product,
            });
        }
        if degree >= degree_stable && (class_count != 1 || !in_product) {
            return Err(Error::StabilizationFailure {
                degree,
                classes: class_count,
                in_product,
            });
        }
        torsion_length += class_count - usize::from(in_product);
        rows.push(ProfileRow {
            degree,
            class_count,
            in_product,
        });
    }

    Ok(TorsionProfile {
        degree_min,
        degree_stable,
        rows,
        torsion_length,
        base_ring_gens: ring_gens,
    })
}

pub fn is_torsion_free(m: &SIdeal, n: &SIdeal, base: &Base<'_>) -> Result<bool> {
    Ok(torsion_profile(m, n, base)?.torsion_length == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeDiscrepancy {
    pub degree: i64,
    pub over_r: usize,
    pub over_e: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma22Report {
    pub equal_dims: bool,
    pub first_discrepancy: Option<i64>,
    pub discrepancies: Vec<DegreeDiscrepancy>,
    pub torsion_over_r: usize,
    pub torsion_over_e: usize,
}

/// Per-degree dimensions of `m ⊗_R n` versus `m ⊗_E n`.
pub fn lemma22_compare(m: &SIdeal, n: &SIdeal, e: &ERing) -> Result<Lemma22Report> {
    lemma22_compare_with(m, n, e, &UnionFindCounter)
}

pub fn lemma22_compare_with(
    m: &SIdeal,
    n: &SIdeal,
    e: &ERing,
    engine: &dyn FiberCounter,
) -> Result<Lemma22Report> {
    let over_e = torsion_profile_with(m, n, &Base::E(e), engine)?;
    let over_r = torsion_profile_with(m, n, &Base::R, engine)?;
    let lo = over_r.degree_min.min(over_e.degree_min);
    let hi = over_r.degree_max().max(over_e.degree_max());
    let discrepancies: Vec<DegreeDiscrepancy> = (lo..=hi)
        .filter_map(|d| {
            let (r, e) = (over_r.classes_at(d), over_e.classes_at(d));
            (r != e).then_some(DegreeDiscrepancy {
                degree: d,
                over_r: r,
                over_e: e,
            })
        })
        .collect();
    Ok(Lemma22Report {
        equal_dims: discrepancies.is_empty(),
        first_discrepancy: discrepancies.first().map(|d| d.degree),
        discrepancies,
        torsion_over_r: over_r.torsion_length,
        torsion_over_e: over_e.torsion_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::end_ring;
    use crate::semigroup::Semigroup;
    use std::sync::Arc;

    fn sg(g: &[i64]) -> Arc<Semigroup> {
        Arc::new(Semigroup::new(g).unwrap())
    }

    fn id(s: &Arc<Semigroup>, g: &[i64]) -> SIdeal {
        SIdeal::new(s, g).unwrap()
    }

    #[test]
    fn fiber_counts() {
        let s = sg(&[2, 3]);
        let m = id(&s, &[0, 1]);
        assert_eq!(graded_fiber_classes(&m, &m, 2, &[2, 3]).unwrap(), 2);
        assert_eq!(graded_fiber_classes(&m, &m, 3, &[2, 3]).unwrap(), 1);
        assert_eq!(graded_fiber_classes(&m, &m, -1, &[2, 3]).unwrap(), 0);
        let t = sg(&[4, 5, 6]);
        assert_eq!(
            graded_fiber_classes(&id(&t, &[0, 1]), &id(&t, &[0, 2]), 7, &[4, 5, 6]).unwrap(),
            1
        );
    }

    #[test]
    fn closure_is_enforced() {
        let t = sg(&[4, 5, 6]);
        let r = SIdeal::unit(&t);
        let err = graded_fiber_classes(&r, &r, 7, &[4, 5, 6, 7]).unwrap_err();
        assert!(matches!(err, Error::NotClosedUnderRing { ring_gen: 7, .. }));
        let e = end_ring(&t).unwrap();
        assert!(torsion_profile(&r, &id(&t, &[0, 1]), &Base::E(&e)).is_err());
    }

    #[test]
    fn example_pair_is_torsion_free() {
        let t = sg(&[4, 5, 6]);
        let m = id(&t, &[4, 5]);
        let n = id(&t, &[4, 6]);
        let p = torsion_profile(&m, &n, &Base::R).unwrap();
        assert_eq!(p.torsion_length, 0);
        assert_eq!(p.degree_min, 8);
        assert!(is_torsion_free(&m, &n, &Base::R).unwrap());
    }

    #[test]
    fn maximal_ideal_of_cusp_has_torsion_two() {
        let s = sg(&[2, 3]);
        let m = id(&s, &[0, 1]);
        let p = torsion_profile(&m, &m, &Base::R).unwrap();
        assert_eq!(p.torsion_length, 2);
        assert_eq!(p.torsion_degrees(), vec![(1, 1), (2, 1)]);
        assert!(!is_torsion_free(&m, &m, &Base::R).unwrap());
    }

    #[test]
    fn principal_factor() {
        let s = sg(&[2, 3]);
        let r = SIdeal::unit(&s);
        let m = id(&s, &[0, 1]);
        assert_eq!(torsion_profile(&r, &m, &Base::R).unwrap().torsion_length, 0);
    }

    #[test]
    fn lemma22_examples() {
        let t = sg(&[4, 5, 6]);
        let e = end_ring(&t).unwrap();
        let rep = lemma22_compare(&id(&t, &[0, 1]), &id(&t, &[0, 2]), &e).unwrap();
        assert!(rep.equal_dims);
        assert_eq!(rep.first_discrepancy, None);

        let s = sg(&[2, 3]);
        let e = end_ring(&s).unwrap();
        let m = id(&s, &[0, 1]);
        let rep = lemma22_compare(&m, &m, &e).unwrap();
        assert!(!rep.equal_dims);
        assert_eq!(rep.first_discrepancy, Some(1));
        assert_eq!(
            rep.discrepancies[0],
            DegreeDiscrepancy {
                degree: 1,
                over_r: 2,
                over_e: 1
            }
        );

        let r = SIdeal::unit(&t);
        let e = end_ring(&t).unwrap();
        assert!(matches!(
            lemma22_compare(&r, &r, &e),
            Err(Error::NotClosedUnderRing { .. })
        ));
    }

    #[test]
    fn json_rows_are_triples() {
        let s = sg(&[2, 3]);
        let m = id(&s, &[0, 1]);
        let p = torsion_profile(&m, &m, &Base::R).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["rows"][1], serde_json::json!([1, 2, true]));
        assert_eq!(v["torsion_length"], 2);
    }
}
