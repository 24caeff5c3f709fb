//! Fractional monomial ideals (S-ideals) of a numerical semigroup ring.
//!
//! An S-ideal is a set `E ⊂ ℤ`, bounded below, with `E + S ⊆ E`. It is kept
//! shift-normalized: the stored generators start at 0 and the original offset
//! lives in `shift`. Equality and ordering look at the normalized generators
//! only, so isomorphic ideals compare equal.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::semigroup::Semigroup;

#[derive(Clone, Debug)]
pub struct SIdeal {
    semigroup: Arc<Semigroup>,
    gens: Vec<i64>,
    shift: i64,
    conductor: i64,
    /// Membership of the normalized set on `[0, conductor)`.
    members: Vec<bool>,
}

impl SIdeal {
    /// Normalizes `gens`: shifts the least one to 0 and drops non-minimal ones.
    pub fn new(semigroup: &Arc<Semigroup>, gens: &[i64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let mut sorted = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let shift = sorted[0];
        let mut minimal: Vec<i64> = Vec::with_capacity(sorted.len());
        for g in sorted.into_iter().map(|g| g - shift) {
            if !minimal.iter().any(|&h| semigroup.contains(g - h)) {
                minimal.push(g);
            }
        }

        let bound = minimal.last().copied().unwrap_or(0) + semigroup.frobenius() + 1;
        let window: Vec<bool> = (0..bound.max(0))
            .map(|z| minimal.iter().any(|&g| semigroup.contains(z - g)))
            .collect();
        let conductor = window
            .iter()
            .rposition(|&m| !m)
            .map_or(0, |last_gap| last_gap as i64 + 1);
        let mut members = window;
        members.truncate(conductor as usize);

        Ok(SIdeal {
            semigroup: Arc::clone(semigroup),
            gens: minimal,
            shift,
            conductor,
            members,
        })
    }

    /// The ring itself, `R = S`.
    pub fn unit(semigroup: &Arc<Semigroup>) -> Self {
        Self::new(semigroup, &[0]).expect("nonempty")
    }

    /// The maximal ideal, generated by the minimal generators of `S`.
    pub fn maximal(semigroup: &Arc<Semigroup>) -> Self {
        Self::new(semigroup, semigroup.min_gens()).expect("nonempty")
    }

    pub fn semigroup(&self) -> &Arc<Semigroup> {
        &self.semigroup
    }

    /// Shift-normalized minimal generators (ascending, first one is 0).
    pub fn gens(&self) -> &[i64] {
        &self.gens
    }

    /// Generators in original coordinates.
    pub fn shifted_gens(&self) -> Vec<i64> {
        self.gens.iter().map(|g| g + self.shift).collect()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Conductor of the normalized set: least `c` with `[c, ∞)` inside it.
    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    /// Membership in the normalized set.
    pub fn contains_normalized(&self, z: i64) -> bool {
        if z < 0 {
            false
        } else if z >= self.conductor {
            true
        } else {
            self.members[z as usize]
        }
    }

    /// Membership in the original (shifted) set.
    pub fn contains(&self, z: i64) -> bool {
        self.contains_normalized(z - self.shift)
    }

    /// Least element of the original set.
    pub fn min_element(&self) -> i64 {
        self.shift
    }

    /// A copy translated by `by`.
    pub fn shifted(&self, by: i64) -> Self {
        let mut out = self.clone();
        out.shift += by;
        out
    }

    /// Equality as subsets of ℤ (generators and shift).
    pub fn same_set(&self, other: &SIdeal) -> bool {
        self == other && self.shift == other.shift
    }

    /// One minimal generator, i.e. isomorphic to `R` (free of rank one).
    pub fn is_principal(&self) -> bool {
        self.gens.len() == 1
    }

    fn check_same_semigroup(&self, other: &Semigroup) -> Result<()> {
        if *self.semigroup == *other {
            Ok(())
        } else {
            Err(Error::SemigroupMismatch {
                left: self.semigroup.to_string(),
                right: other.to_string(),
            })
        }
    }

    /// The ideal generated by all pairwise sums; its set is `E_I + E_J`.
    pub fn product(&self, other: &SIdeal) -> Result<SIdeal> {
        self.check_same_semigroup(&other.semigroup)?;
        let sums: Vec<i64> = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a + b))
            .collect();
        let mut out = SIdeal::new(&self.semigroup, &sums)?;
        out.shift += self.shift + other.shift;
        Ok(out)
    }

    /// `(self : source) = {z : z + E_source ⊆ E_self}`, which is `Hom(source, self)`.
    pub fn colon(&self, source: &SIdeal) -> Result<SIdeal> {
        self.check_same_semigroup(&source.semigroup)?;
        // Normalized, every candidate z must satisfy z + 0 ≥ 0, and every
        // z ≥ conductor(self) works; checking generators of `source` suffices
        // because E_self is S-closed.
        let tail = self.conductor;
        let top = tail + self.semigroup.multiplicity();
        let witnesses: Vec<i64> = (0..top)
            .filter(|&z| z >= tail || source.gens.iter().all(|&g| self.contains_normalized(z + g)))
            .collect();
        let mut out = SIdeal::new(&self.semigroup, &witnesses)?;
        out.shift += self.shift - source.shift;
        Ok(out)
    }

    /// `I* = Hom(I, R)`.
    pub fn dual(&self) -> SIdeal {
        SIdeal::unit(&self.semigroup)
            .colon(self)
            .expect("same semigroup")
    }

    /// `I**`.
    pub fn bidual(&self) -> SIdeal {
        self.dual().dual()
    }

    /// Whether `E_I` is closed under the ring generators of `ring`.
    pub fn is_module_over(&self, ring: &ERing) -> Result<bool> {
        self.check_same_semigroup(ring.semigroup())?;
        Ok(self.first_unclosed(ring.ring_gens()).is_none())
    }

    /// First ring generator `e` with `a + e ∉ E_I` for some generator `a`.
    pub(crate) fn first_unclosed(&self, ring_gens: &[i64]) -> Option<i64> {
        ring_gens.iter().copied().find(|&e| {
            self.gens
                .iter()
                .any(|&a| !self.contains_normalized(a + e))
        })
    }
}

impl PartialEq for SIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.semigroup.min_gens() == other.semigroup.min_gens()
    }
}

impl Eq for SIdeal {}

impl PartialOrd for SIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.semigroup
            .min_gens()
            .cmp(other.semigroup.min_gens())
            .then_with(|| self.gens.cmp(&other.gens))
    }
}

impl std::hash::Hash for SIdeal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.semigroup.min_gens().hash(state);
        self.gens.hash(state);
    }
}

impl fmt::Display for SIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))?;
        if self.shift != 0 {
            write!(f, "{:+}", self.shift)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct IdealRepr {
    semigroup: Vec<i64>,
    gens: Vec<i64>,
    shift: i64,
}

impl Serialize for SIdeal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IdealRepr {
            semigroup: self.semigroup.min_gens().to_vec(),
            gens: self.gens.clone(),
            shift: self.shift,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SIdeal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = IdealRepr::deserialize(deserializer)?;
        let s = Arc::new(Semigroup::new(&repr.semigroup).map_err(serde::de::Error::custom)?);
        let gens: Vec<i64> = repr.gens.iter().map(|g| g + repr.shift).collect();
        SIdeal::new(&s, &gens).map_err(serde::de::Error::custom)
    }
}

/// `E = End(𝔪) = (𝔪 : 𝔪)`, a numerical semigroup between `S` and `ℕ`.
#[derive(Clone, Debug)]
pub struct ERing {
    underlying: SIdeal,
    ring: Semigroup,
    extra_elements: Vec<i64>,
}

impl ERing {
    /// The set `E` as an S-ideal (shift 0).
    pub fn underlying(&self) -> &SIdeal {
        &self.underlying
    }

    /// `E` viewed as a numerical semigroup in its own right.
    pub fn as_semigroup(&self) -> &Semigroup {
        &self.ring
    }

    pub fn ring_gens(&self) -> &[i64] {
        self.ring.min_gens()
    }

    /// `E ∖ S`.
    pub fn extra_elements(&self) -> &[i64] {
        &self.extra_elements
    }

    pub fn semigroup(&self) -> &Arc<Semigroup> {
        &self.underlying.semigroup
    }

    pub fn contains(&self, z: i64) -> bool {
        self.underlying.contains(z)
    }

    /// `E = R`.
    pub fn is_trivial(&self) -> bool {
        self.extra_elements.is_empty()
    }
}

/// Computes `E = (𝔪 : 𝔪)` and checks that it is a ring.
pub fn end_ring(semigroup: &Arc<Semigroup>) -> Result<ERing> {
    let m = SIdeal::maximal(semigroup);
    let underlying = m.colon(&m)?;
    let cond = underlying.conductor() + underlying.shift();
    if underlying.shift() != 0 {
        return Err(Error::NotARing { a: 0, b: 0 });
    }
    for a in 0..cond {
        if !underlying.contains(a) {
            continue;
        }
        for b in a..cond {
            if underlying.contains(b) && !underlying.contains(a + b) {
                return Err(Error::NotARing { a, b });
            }
        }
    }
    let bound = cond + semigroup.multiplicity();
    let ring = Semigroup::from_membership(bound, |z| underlying.contains(z))?;
    let extra_elements = (0..=semigroup.frobenius())
        .filter(|&z| underlying.contains(z) && !semigroup.contains(z))
        .collect();
    Ok(ERing {
        underlying,
        ring,
        extra_elements,
    })
}

/// Outcome of the Bass simplicity check on `E/R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma21Report {
    /// `E/R` is one-dimensional, i.e. a simple `R`-module.
    pub simple: bool,
    /// The unique element of `E ∖ S` when `simple`.
    pub y: Option<i64>,
    /// `{0, y}` generate `E` as an S-ideal.
    pub generator_pair_ok: bool,
}

pub fn lemma21_report(semigroup: &Arc<Semigroup>) -> Result<Lemma21Report> {
    if semigroup.multiplicity() == 1 {
        return Err(Error::PrincipalMaximalIdeal);
    }
    let e = end_ring(semigroup)?;
    let simple = e.extra_elements.len() == 1;
    let y = simple.then(|| e.extra_elements[0]);
    let generator_pair_ok = match y {
        Some(y) => SIdeal::new(semigroup, &[0, y])?.same_set(e.underlying()),
        None => false,
    };
    Ok(Lemma21Report {
        simple,
        y,
        generator_pair_ok,
    })
}

/// All S-ideals up to shift: antichains in `{0} ∪ gaps` that contain 0,
/// in lexicographic order of generator lists.
pub fn enumerate_ideals(semigroup: &Arc<Semigroup>) -> Vec<SIdeal> {
    fn walk(
        s: &Arc<Semigroup>,
        gaps: &[i64],
        start: usize,
        chosen: &mut Vec<i64>,
        out: &mut Vec<SIdeal>,
    ) {
        out.push(SIdeal::new(s, chosen).expect("nonempty"));
        for i in start..gaps.len() {
            let g = gaps[i];
            if chosen.iter().all(|&h| !s.contains(g - h)) {
                chosen.push(g);
                walk(s, gaps, i + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(semigroup, semigroup.gaps(), 0, &mut vec![0], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(gens: &[i64]) -> Arc<Semigroup> {
        Arc::new(Semigroup::new(gens).unwrap())
    }

    fn ideal(s: &Arc<Semigroup>, gens: &[i64]) -> SIdeal {
        SIdeal::new(s, gens).unwrap()
    }

    fn set_below(i: &SIdeal, lo: i64, hi: i64) -> Vec<i64> {
        (lo..hi).filter(|&z| i.contains(z)).collect()
    }

    #[test]
    fn normalization() {
        let s = sg(&[4, 5, 6]);
        let m = ideal(&s, &[4, 5]);
        assert_eq!(m.gens(), &[0, 1]);
        assert_eq!(m.shift(), 4);
        let r = ideal(&s, &[0, 4]);
        assert_eq!(r.gens(), &[0]);
        assert_eq!(r.shift(), 0);
        let t = sg(&[3, 4]);
        let mt = ideal(&t, &[3, 4]);
        assert_eq!((mt.gens(), mt.shift()), (&[0, 1][..], 3));
        assert!(matches!(SIdeal::new(&s, &[]), Err(Error::EmptyGenerators)));
    }

    #[test]
    fn conductor_and_membership() {
        let s = sg(&[4, 5, 6]);
        let i = ideal(&s, &[0, 1]);
        assert_eq!(set_below(&i, -2, 9), vec![0, 1, 4, 5, 6, 7, 8]);
        assert_eq!(i.conductor(), 4);
        let r = SIdeal::unit(&s);
        assert_eq!(r.conductor(), 8);
        assert!(i.conductor() <= i.gens().last().unwrap() + s.frobenius() + 1);
    }

    #[test]
    fn principal_test() {
        let s = sg(&[4, 5, 6]);
        assert!(ideal(&s, &[0]).is_principal());
        assert!(!ideal(&sg(&[3, 4]), &[0, 1]).is_principal());
        assert!(!ideal(&s, &[0, 2]).is_principal());
    }

    #[test]
    fn products() {
        let s = sg(&[4, 5, 6]);
        let p = ideal(&s, &[0, 1]).product(&ideal(&s, &[0, 2])).unwrap();
        assert_eq!(p.gens(), &[0, 1, 2, 3]);
        let j = ideal(&s, &[0, 2]);
        assert_eq!(SIdeal::unit(&s).product(&j).unwrap(), j);
        let t = sg(&[2, 3]);
        let m = ideal(&t, &[0, 1]);
        assert_eq!(m.product(&m).unwrap().gens(), &[0, 1]);
        let mismatch = m.product(&j);
        assert!(matches!(mismatch, Err(Error::SemigroupMismatch { .. })));
    }

    #[test]
    fn colon_examples() {
        let s = sg(&[3, 4]);
        let m = SIdeal::maximal(&s);
        let r = SIdeal::unit(&s);
        let mm = m.colon(&m).unwrap();
        assert_eq!((mm.gens(), mm.shift()), (&[0, 5][..], 0));
        assert_eq!(set_below(&mm, -3, 8), vec![0, 3, 4, 5, 6, 7]);
        let rm = r.colon(&m).unwrap();
        assert!(rm.same_set(&mm));
        assert!(r.colon(&r).unwrap().same_set(&r));
    }

    #[test]
    fn colon_of_shifted_ideals_is_fractional() {
        let s = sg(&[3, 4]);
        let r = SIdeal::unit(&s);
        let far = ideal(&s, &[10]);
        let c = r.colon(&far).unwrap();
        assert_eq!(c.shift(), -10);
        assert!(c.contains(-10));
        assert!(!c.contains(-11));
    }

    #[test]
    fn end_rings() {
        let e = end_ring(&sg(&[4, 5, 6])).unwrap();
        assert_eq!(e.ring_gens(), &[4, 5, 6, 7]);
        assert_eq!(e.extra_elements(), &[7]);
        let e = end_ring(&sg(&[2, 3])).unwrap();
        assert_eq!(e.ring_gens(), &[1]);
        assert_eq!(e.extra_elements(), &[1]);
        let e = end_ring(&sg(&[3, 5, 7])).unwrap();
        assert_eq!(e.extra_elements(), &[2, 4]);
        let e = end_ring(&sg(&[1])).unwrap();
        assert!(e.is_trivial());
        assert_eq!(e.ring_gens(), &[1]);
    }

    #[test]
    fn lemma21() {
        let rep = lemma21_report(&sg(&[3, 4])).unwrap();
        assert_eq!(
            rep,
            Lemma21Report {
                simple: true,
                y: Some(5),
                generator_pair_ok: true
            }
        );
        assert_eq!(lemma21_report(&sg(&[4, 5, 6])).unwrap().y, Some(7));
        let rep = lemma21_report(&sg(&[3, 5, 7])).unwrap();
        assert!(!rep.simple);
        assert_eq!(rep.y, None);
        assert!(matches!(
            lemma21_report(&sg(&[1])),
            Err(Error::PrincipalMaximalIdeal)
        ));
    }

    #[test]
    fn duals() {
        let s = sg(&[3, 4]);
        let m = SIdeal::maximal(&s);
        let d = m.dual();
        assert_eq!(set_below(&d, -5, 8), vec![0, 3, 4, 5, 6, 7]);
        assert_eq!((d.gens(), d.shift()), (&[0, 5][..], 0));
        assert!(d.same_set(end_ring(&s).unwrap().underlying()));
        assert!(m.bidual().same_set(&m));
        let r = SIdeal::unit(&s);
        assert!(r.dual().same_set(&r));
    }

    #[test]
    fn ideal_enumeration() {
        let lists = |gens: &[i64]| -> Vec<Vec<i64>> {
            enumerate_ideals(&sg(gens))
                .iter()
                .map(|i| i.gens().to_vec())
                .collect()
        };
        assert_eq!(lists(&[2, 3]), vec![vec![0], vec![0, 1]]);
        assert_eq!(
            lists(&[3, 4]),
            vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2], vec![0, 5]]
        );
        let l = lists(&[4, 5, 6]);
        assert_eq!(l.len(), 9);
        assert!(l.contains(&vec![0, 7]));
        assert!(l.contains(&vec![0, 1, 2, 3]));
        assert_eq!(lists(&[1]), vec![vec![0]]);
    }

    #[test]
    fn module_structure() {
        let s = sg(&[4, 5, 6]);
        let e = end_ring(&s).unwrap();
        assert!(ideal(&s, &[0, 1]).is_module_over(&e).unwrap());
        assert!(!SIdeal::unit(&s).is_module_over(&e).unwrap());
        let n = sg(&[1]);
        let en = end_ring(&n).unwrap();
        assert!(SIdeal::unit(&n).is_module_over(&en).unwrap());
        assert!(ideal(&s, &[0, 1]).is_module_over(&en).is_err());
    }

    #[test]
    fn json_form() {
        let s = sg(&[4, 5, 6]);
        let i = ideal(&s, &[4, 5]);
        let text = serde_json::to_string(&i).unwrap();
        assert_eq!(text, r#"{"semigroup":[4,5,6],"gens":[0,1],"shift":4}"#);
        let back: SIdeal = serde_json::from_str(&text).unwrap();
        assert!(back.same_set(&i));
    }
}
