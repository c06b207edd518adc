//! Invariants over generated inputs: submonoids of corpus products stand in
//! for random commutative monoids, products of small M-sets for random
//! M-sets.

use monoid_recon::bitset::ElemSet;
use monoid_recon::corpus;
use monoid_recon::harness::parse::{load, write_monoid, write_mset};
use monoid_recon::ideals::{
    check_prime_tests_agree, enumerate_ideals, enumerate_ideals_exhaustive, generated_ideal, ideal_quotient, is_ideal, verify_ideal_laws,
    verify_z_equals_order,
};
use monoid_recon::localization::{omega_localization_iso, LocalizedMonoid};
use monoid_recon::monoid::FiniteCommMonoid;
use monoid_recon::mset::{enumerate_msets_up_to, MSet};
use monoid_recon::omega::{verify_classifier, Omega};
use monoid_recon::topology::{verify_bijection, Site};
use proptest::prelude::*;

fn small_products() -> Vec<FiniteCommMonoid> {
    let base = [corpus::b(), corpus::e(), corpus::c2(), corpus::f3(), corpus::n2()];
    let mut out = Vec::new();
    for (i, a) in base.iter().enumerate() {
        for b in &base[i..] {
            out.push(a.product(b));
        }
    }
    out
}

/// The submonoid generated by `seed`, as a monoid in its own right.
fn submonoid(parent: &FiniteCommMonoid, seed: u64) -> FiniteCommMonoid {
    let seed = ElemSet::from_bits(seed).intersection(parent.all());
    let members: Vec<usize> = parent.submonoid_generated(seed).iter().collect();
    let pos = |x: usize| members.iter().position(|&y| y == x).expect("closed");
    let rows: Vec<Vec<usize>> = members.iter().map(|&x| members.iter().map(|&y| pos(parent.mul(x, y))).collect()).collect();
    let names: Vec<String> = members.iter().map(|&x| parent.element_name(x).to_string()).collect();
    FiniteCommMonoid::new("S", &rows, pos(parent.identity())).unwrap().with_names(names).unwrap()
}

fn monoid_strategy() -> impl Strategy<Value = FiniteCommMonoid> {
    let products = small_products();
    (0..products.len(), any::<u64>()).prop_map(move |(i, seed)| submonoid(&products[i], seed))
}

/// Fraction equality straight from the definition, as an independent count.
fn fraction_classes(m: &FiniteCommMonoid, s: &[usize]) -> usize {
    let pairs: Vec<(usize, usize)> = m.elements().flat_map(|x| s.iter().map(move |&t| (x, t))).collect();
    let equal = |(a, s1): (usize, usize), (b, s2): (usize, usize)| s.iter().any(|&u| m.mul(m.mul(a, u), s2) == m.mul(m.mul(b, u), s1));
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for &p in &pairs {
        if !reps.iter().any(|&r| equal(r, p)) {
            reps.push(p);
        }
    }
    reps.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideal_laws_hold(m in monoid_strategy()) {
        prop_assert!(verify_ideal_laws(&m).is_ok());
        prop_assert!(check_prime_tests_agree(&m).is_ok());
        prop_assert!(verify_z_equals_order(&m).is_ok());
        if m.size() <= 12 {
            prop_assert_eq!(enumerate_ideals(&m), enumerate_ideals_exhaustive(&m));
        }
    }

    #[test]
    fn generated_ideals_and_quotients(m in monoid_strategy(), seed in any::<u64>(), x in 0usize..64) {
        let a = generated_ideal(&m, ElemSet::from_bits(seed).intersection(m.all()));
        prop_assert!(is_ideal(&m, a));
        let x = x % m.size();
        let q = ideal_quotient(&m, a, x);
        prop_assert!(is_ideal(&m, q));
        prop_assert!(a.is_subset(q));
        prop_assert_eq!(q == m.all(), a.contains(x));
    }

    #[test]
    fn topologies_match_opens(m in monoid_strategy()) {
        let site = Site::new(&m);
        prop_assume!(site.ideal_count() <= 16);
        let c = verify_bijection(&site).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(c.topologies.len(), c.order_opens.len());
        prop_assert_eq!(site.enumerate_topologies(), site.enumerate_topologies_brute_force());
    }

    #[test]
    fn localization_counts_fractions(m in monoid_strategy(), seed in any::<u64>()) {
        let s = m.submonoid_generated(ElemSet::from_bits(seed).intersection(m.all()));
        let loc = LocalizedMonoid::new(&m, &s);
        prop_assert!(loc.verify().is_ok());
        let members: Vec<usize> = s.iter().collect();
        prop_assert_eq!(loc.result().size(), fraction_classes(&m, &members));
        prop_assert!(omega_localization_iso(&loc).is_ok());
    }

    #[test]
    fn monoid_files_round_trip(m in monoid_strategy()) {
        let text = write_monoid(&m);
        let back = load(&text, &[]).unwrap();
        prop_assert!(back.invalid.is_empty());
        prop_assert_eq!(&back.monoids[0], &m);
    }
}

fn mset_pool() -> Vec<MSet> {
    [corpus::b(), corpus::e(), corpus::c2()].iter().flat_map(|m| enumerate_msets_up_to(m, 3)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classifier_on_products(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let pool = mset_pool();
        let a = &pool[i.index(pool.len())];
        let same: Vec<&MSet> = pool.iter().filter(|b| b.monoid() == a.monoid()).collect();
        let b = same[j.index(same.len())];
        let ab = a.product(b);
        prop_assert!(ab.check_laws().is_ok());
        let om = Omega::new(ab.monoid());
        for sub in ab.sub_msets() {
            prop_assert!(verify_classifier(&om, &ab, sub).is_ok());
        }
    }

    #[test]
    fn mset_files_round_trip(i in any::<prop::sample::Index>()) {
        let pool = mset_pool();
        let a = &pool[i.index(pool.len())];
        let text = write_mset(a);
        let back = load(&text, &corpus::monoids()).unwrap();
        prop_assert!(back.invalid.is_empty());
        prop_assert_eq!(back.msets[0].rows(), a.rows());
    }
}
