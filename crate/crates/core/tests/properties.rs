use std::sync::Arc;

use proptest::prelude::*;
use semitorsion::fiber::FiberCounter;
use semitorsion::oracle::DEFAULT_MODULUS;
use semitorsion::{
    end_ring, fiber_rank_oracle, graded_fiber_classes, torsion_profile, Base, SIdeal, Semigroup,
    UnionFindCounter,
};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Generator lists with gcd 1, small enough that genus stays modest.
fn semigroup_gens() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(2i64..11, 2..5).prop_filter("gcd 1", |g| g.iter().fold(0, |a, &b| gcd(a, b)) == 1)
}

fn ideal_gens() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..9, 1..4)
}

/// Membership by explicit sums of generators.
fn reachable(gens: &[i64], bound: i64) -> Vec<bool> {
    let mut hit = vec![false; (bound + 1) as usize];
    hit[0] = true;
    for z in 1..=bound {
        hit[z as usize] = gens.iter().any(|&g| z >= g && hit[(z - g) as usize]);
    }
    hit
}

fn setup(gens: &[i64]) -> Arc<Semigroup> {
    Arc::new(Semigroup::new(gens).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn membership_matches_sums(gens in semigroup_gens()) {
        let s = Semigroup::new(&gens).unwrap();
        let f = s.frobenius();
        let sums = reachable(&gens, f + 2 * s.multiplicity());
        for (z, &member) in sums.iter().enumerate() {
            prop_assert_eq!(s.contains(z as i64), member, "z = {}", z);
        }
        prop_assert!(!s.contains(f));
        prop_assert!((f + 1..f + 40).all(|z| s.contains(z)));
        prop_assert_eq!(s.genus(), s.gaps().len());
        prop_assert_eq!(s.apery_is_symmetric(), s.is_symmetric());
        prop_assert_eq!(s.is_symmetric(), 2 * s.genus() as i64 == f + 1);
    }

    #[test]
    fn ideal_normalization(gens in semigroup_gens(), i in ideal_gens(), k in -5i64..6) {
        let s = setup(&gens);
        let a = SIdeal::new(&s, &i).unwrap();
        let moved: Vec<i64> = i.iter().map(|g| g + k).collect();
        let b = SIdeal::new(&s, &moved).unwrap();
        prop_assert_eq!(a.gens(), b.gens());
        prop_assert_eq!(b.shift(), a.shift() + k);
        prop_assert!(b.same_set(&a.shifted(k)));
        let again = SIdeal::new(&s, &a.shifted_gens()).unwrap();
        prop_assert!(again.same_set(&a));
        prop_assert_eq!(a.gens()[0], 0);
        for z in -3..40 {
            let direct = i.iter().any(|&g| s.contains(z - g));
            prop_assert_eq!(a.contains(z), direct, "z = {}", z);
        }
    }

    #[test]
    fn colon_is_the_largest_multiplier(gens in semigroup_gens(), i in ideal_gens(), j in ideal_gens()) {
        let s = setup(&gens);
        let a = SIdeal::new(&s, &i).unwrap();
        let b = SIdeal::new(&s, &j).unwrap();
        let c = a.colon(&b).unwrap();
        let window = -20..40;
        let b_elems: Vec<i64> = window.clone().filter(|&z| b.contains(z)).collect();
        for z in window {
            let multiplies = b_elems.iter().all(|&y| a.contains(z + y));
            prop_assert_eq!(c.contains(z), multiplies, "z = {}", z);
        }
        // (a : b)·b ⊆ a.
        let p = c.product(&b).unwrap();
        prop_assert!((-20..60).all(|z| !p.contains(z) || a.contains(z)));
        prop_assert!(a.bidual().dual().same_set(&a.dual()));
    }

    #[test]
    fn product_is_the_sumset(gens in semigroup_gens(), i in ideal_gens(), j in ideal_gens()) {
        let s = setup(&gens);
        let a = SIdeal::new(&s, &i).unwrap();
        let b = SIdeal::new(&s, &j).unwrap();
        let p = a.product(&b).unwrap();
        for z in 0..50 {
            let sum = (0..=z).any(|x| a.contains(x) && b.contains(z - x));
            prop_assert_eq!(p.contains(z), sum, "z = {}", z);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn profiles_are_shift_invariant_and_symmetric(
        gens in semigroup_gens(), i in ideal_gens(), j in ideal_gens(), k in -4i64..5,
    ) {
        let s = setup(&gens);
        let m = SIdeal::new(&s, &i).unwrap();
        let n = SIdeal::new(&s, &j).unwrap();
        let base = torsion_profile(&m, &n, &Base::R).unwrap();
        let moved = torsion_profile(&m.shifted(k), &n, &Base::R).unwrap();
        let swapped = torsion_profile(&n, &m, &Base::R).unwrap();
        prop_assert_eq!(moved.torsion_length, base.torsion_length);
        prop_assert_eq!(swapped.torsion_length, base.torsion_length);
        for d in base.degree_min - 2..base.degree_max() + 3 {
            prop_assert_eq!(moved.classes_at(d + k), base.classes_at(d));
            prop_assert_eq!(swapped.classes_at(d), base.classes_at(d));
        }
    }

    #[test]
    fn principal_factor_is_torsion_free(gens in semigroup_gens(), i in ideal_gens(), a in -3i64..4) {
        let s = setup(&gens);
        let m = SIdeal::new(&s, &[a]).unwrap();
        let n = SIdeal::new(&s, &i).unwrap();
        prop_assert_eq!(torsion_profile(&m, &n, &Base::R).unwrap().torsion_length, 0);
    }

    #[test]
    fn base_change_to_e_only_merges(gens in semigroup_gens(), i in ideal_gens(), j in ideal_gens()) {
        let s = setup(&gens);
        let e = end_ring(&s).unwrap();
        let m = SIdeal::new(&s, &i).unwrap();
        let n = SIdeal::new(&s, &j).unwrap();
        prop_assume!(m.is_module_over(&e).unwrap() && n.is_module_over(&e).unwrap());
        let over_r = torsion_profile(&m, &n, &Base::R).unwrap();
        let over_e = torsion_profile(&m, &n, &Base::E(&e)).unwrap();
        for d in over_r.degree_min..over_r.degree_max() + 1 {
            prop_assert!(over_e.classes_at(d) <= over_r.classes_at(d), "d = {}", d);
            prop_assert!(over_e.classes_at(d) >= usize::from(over_r.classes_at(d) > 0));
        }
        prop_assert!(over_e.torsion_length <= over_r.torsion_length);
    }

    #[test]
    fn redundant_ring_generators_change_nothing(
        gens in semigroup_gens(), i in ideal_gens(), j in ideal_gens(), d in 0i64..30,
    ) {
        let s = setup(&gens);
        let m = SIdeal::new(&s, &i).unwrap();
        let n = SIdeal::new(&s, &j).unwrap();
        let minimal = s.min_gens().to_vec();
        let mut padded = minimal.clone();
        padded.extend(minimal.iter().flat_map(|a| minimal.iter().map(move |b| a + b)));
        prop_assert_eq!(
            graded_fiber_classes(&m, &n, d, &minimal).unwrap(),
            graded_fiber_classes(&m, &n, d, &padded).unwrap()
        );
    }

    #[test]
    fn union_find_matches_rank(gens in semigroup_gens(), i in ideal_gens(), j in ideal_gens(), d in -2i64..25) {
        let s = setup(&gens);
        let m = SIdeal::new(&s, &i).unwrap();
        let n = SIdeal::new(&s, &j).unwrap();
        let uf = UnionFindCounter.classes(&m, &n, d, s.min_gens()).unwrap();
        let modp = fiber_rank_oracle(&m, &n, d, s.min_gens(), DEFAULT_MODULUS).unwrap();
        let rational = fiber_rank_oracle(&m, &n, d, s.min_gens(), 0).unwrap();
        prop_assert_eq!(uf, modp.classes);
        prop_assert_eq!(modp.rank, rational.rank);
    }
}
