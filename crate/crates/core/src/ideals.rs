//! Ideals, ideal quotients, prime spectra and the two topologies on them.
//!
//! An ideal is any subset `a` with `aM ⊆ a`; the empty set counts, and it is
//! prime, so every spectrum has a generic point. Ideals are stored as
//! [`ElemSet`] membership vectors and families of ideals are always listed in
//! canonical order (cardinality, then lexicographic membership vector).

use crate::bitset::ElemSet;
use crate::check::{ensure, CheckResult};
use crate::monoid::{Elem, FiniteCommMonoid};
use crate::poset::FinitePoset;

/// A subset of monoid elements closed under multiplication by `M`.
pub type Ideal = ElemSet;

/// Above this size [`enumerate_ideals`] switches from a subset scan to
/// union-closure of principal ideals.
pub const EXHAUSTIVE_IDEAL_LIMIT: usize = 16;

pub fn is_ideal(m: &FiniteCommMonoid, set: ElemSet) -> bool {
    set.iter().all(|a| m.elements().all(|x| set.contains(m.mul(a, x))))
}

/// `(a : x) = {y : xy ∈ a}`.
pub fn ideal_quotient(m: &FiniteCommMonoid, a: Ideal, x: Elem) -> Ideal {
    m.elements().filter(|&y| a.contains(m.mul(x, y))).collect()
}

/// `xM`.
pub fn principal_ideal(m: &FiniteCommMonoid, x: Elem) -> Ideal {
    m.elements().map(|y| m.mul(x, y)).collect()
}

/// `SM`, the smallest ideal containing `set`.
pub fn generated_ideal(m: &FiniteCommMonoid, set: ElemSet) -> Ideal {
    set.iter().fold(ElemSet::EMPTY, |acc, x| acc.union(principal_ideal(m, x)))
}

/// `ab = {xy : x ∈ a, y ∈ b}`, which is again an ideal.
pub fn ideal_product(m: &FiniteCommMonoid, a: Ideal, b: Ideal) -> Ideal {
    a.iter().flat_map(|x| b.iter().map(move |y| m.mul(x, y))).collect()
}

/// All ideals in canonical order.
pub fn enumerate_ideals(m: &FiniteCommMonoid) -> Vec<Ideal> {
    if m.size() <= EXHAUSTIVE_IDEAL_LIMIT {
        enumerate_ideals_exhaustive(m)
    } else {
        enumerate_ideals_by_unions(m)
    }
}

pub fn enumerate_ideals_exhaustive(m: &FiniteCommMonoid) -> Vec<Ideal> {
    let mut out: Vec<Ideal> = ElemSet::all_subsets(m.size()).filter(|&s| is_ideal(m, s)).collect();
    out.sort_by(ElemSet::canonical_cmp);
    out
}

/// Every ideal is the union of the principal ideals of its members, so the
/// family is the closure of `{∅} ∪ {xM}` under binary union.
pub fn enumerate_ideals_by_unions(m: &FiniteCommMonoid) -> Vec<Ideal> {
    let principals: Vec<Ideal> = m.elements().map(|x| principal_ideal(m, x)).collect();
    let mut seen = std::collections::HashSet::from([ElemSet::EMPTY]);
    let mut frontier = vec![ElemSet::EMPTY];
    while let Some(a) = frontier.pop() {
        for &p in &principals {
            let u = a.union(p);
            if seen.insert(u) {
                frontier.push(u);
            }
        }
    }
    let mut out: Vec<Ideal> = seen.into_iter().collect();
    out.sort_by(ElemSet::canonical_cmp);
    out
}

/// Position of `a` in `ideals`, which must be canonically ordered.
pub fn ideal_index(ideals: &[Ideal], a: Ideal) -> Option<usize> {
    ideals.binary_search_by(|b| b.canonical_cmp(&a)).ok()
}

/// Prime by definition: proper, and `xy ∈ a` forces `x ∈ a` or `y ∈ a`.
pub fn is_prime_by_definition(m: &FiniteCommMonoid, a: Ideal) -> bool {
    a != m.all() && m.elements().all(|x| m.elements().all(|y| !a.contains(m.mul(x, y)) || a.contains(x) || a.contains(y)))
}

/// Prime via the complement: `M \ a` is a submonoid.
pub fn is_prime_by_complement(m: &FiniteCommMonoid, a: Ideal) -> bool {
    m.is_submonoid(a.complement(m.size()))
}

/// Runs both prime tests; they agree on every ideal.
pub fn is_prime(m: &FiniteCommMonoid, a: Ideal) -> bool {
    let by_def = is_prime_by_definition(m, a);
    debug_assert_eq!(by_def, is_prime_by_complement(m, a), "prime tests disagree on {a:?}");
    by_def
}

pub fn check_prime_tests_agree(m: &FiniteCommMonoid) -> CheckResult {
    for a in enumerate_ideals(m) {
        ensure(is_prime_by_definition(m, a) == is_prime_by_complement(m, a), "prime-tests-agree", || {
            format!("{} ideal {}", m.name(), format_set(m, a))
        })?;
    }
    Ok(())
}

/// The prime spectrum ordered by inclusion. Points are indices into
/// `primes`, which is canonically ordered, so point 0 is always `∅`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    primes: Vec<Ideal>,
    order: FinitePoset,
}

impl Spectrum {
    pub fn of(m: &FiniteCommMonoid) -> Self {
        let primes: Vec<Ideal> = enumerate_ideals(m).into_iter().filter(|&a| is_prime(m, a)).collect();
        assert!(primes.len() <= crate::bitset::MAX_UNIVERSE, "spectrum too large");
        let order = FinitePoset::of_sets(&primes).expect("inclusion is a partial order");
        Spectrum { primes, order }
    }

    pub fn primes(&self) -> &[Ideal] {
        &self.primes
    }

    pub fn size(&self) -> usize {
        self.primes.len()
    }

    pub fn prime(&self, i: usize) -> Ideal {
        self.primes[i]
    }

    pub fn index_of(&self, p: Ideal) -> Option<usize> {
        ideal_index(&self.primes, p)
    }

    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn all_points(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    /// `V(a)`: primes containing `a`.
    pub fn vanishing(&self, a: Ideal) -> ElemSet {
        (0..self.size()).filter(|&i| a.is_subset(self.primes[i])).collect()
    }

    /// `D(f)`: primes not containing `f`.
    pub fn basic_open(&self, f: Elem) -> ElemSet {
        (0..self.size()).filter(|&i| !self.primes[i].contains(f)).collect()
    }
}

pub fn spec(m: &FiniteCommMonoid) -> Spectrum {
    Spectrum::of(m)
}

/// A finite topological space given by its open sets, canonically ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologySpace {
    points: usize,
    opens: Vec<ElemSet>,
}

impl TopologySpace {
    /// Sorts and deduplicates `opens`; does not check the axioms.
    pub fn new(points: usize, mut opens: Vec<ElemSet>) -> Self {
        opens.sort_by(ElemSet::canonical_cmp);
        opens.dedup();
        TopologySpace { points, opens }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn opens(&self) -> &[ElemSet] {
        &self.opens
    }

    pub fn is_open(&self, s: ElemSet) -> bool {
        self.opens.binary_search_by(|o| o.canonical_cmp(&s)).is_ok()
    }

    /// Contains `∅` and everything; closed under binary union and intersection.
    pub fn check_axioms(&self) -> CheckResult {
        let full = ElemSet::full(self.points);
        ensure(self.is_open(ElemSet::EMPTY), "topology-empty-open", || "∅ missing".into())?;
        ensure(self.is_open(full), "topology-full-open", || "whole space missing".into())?;
        for &u in &self.opens {
            for &v in &self.opens {
                ensure(self.is_open(u.union(v)), "topology-union", || format!("{u:?} ∪ {v:?}"))?;
                ensure(self.is_open(u.intersection(v)), "topology-intersection", || format!("{u:?} ∩ {v:?}"))?;
            }
        }
        Ok(())
    }
}

/// Opens are the complements of `V(a)` over all ideals `a`.
pub fn zariski_topology(m: &FiniteCommMonoid, sp: &Spectrum) -> TopologySpace {
    let all = sp.all_points();
    let opens = enumerate_ideals(m).into_iter().map(|a| all.difference(sp.vanishing(a))).collect();
    TopologySpace::new(sp.size(), opens)
}

/// Opens are the down-closed sets of primes: `q ∈ U` and `p ⊆ q` give `p ∈ U`.
pub fn order_topology(sp: &Spectrum) -> TopologySpace {
    TopologySpace::new(sp.size(), sp.order().down_sets())
}

/// The Zariski and order topologies on `Spec(M)` have the same opens, and
/// every order-open is a union of basic opens `D(f)`.
pub fn verify_z_equals_order(m: &FiniteCommMonoid) -> CheckResult {
    let sp = spec(m);
    let z = zariski_topology(m, &sp);
    let o = order_topology(&sp);
    z.check_axioms()?;
    o.check_axioms()?;
    for &u in z.opens() {
        ensure(o.is_open(u), "zariski-equals-order", || {
            format!("{}: Zariski open {} is not down-closed", m.name(), format_points(&sp, m, u))
        })?;
    }
    for &u in o.opens() {
        ensure(z.is_open(u), "zariski-equals-order", || {
            format!("{}: down-set {} is not Zariski open", m.name(), format_points(&sp, m, u))
        })?;
        let cover = m.elements().map(|f| sp.basic_open(f)).filter(|d| d.is_subset(u)).fold(ElemSet::EMPTY, ElemSet::union);
        ensure(cover == u, "order-open-is-union-of-basic-opens", || format!("{}: {}", m.name(), format_points(&sp, m, u)))?;
    }
    for f in m.elements() {
        ensure(o.is_open(sp.basic_open(f)), "basic-open-is-order-open", || format!("{}: D({})", m.name(), m.element_name(f)))?;
    }
    Ok(())
}

/// `{x, y}` using element names.
pub fn format_set(m: &FiniteCommMonoid, s: ElemSet) -> String {
    let names: Vec<&str> = s.iter().map(|x| m.element_name(x)).collect();
    format!("{{{}}}", names.join(","))
}

/// A set of spectrum points, each printed as its prime.
pub fn format_points(sp: &Spectrum, m: &FiniteCommMonoid, pts: ElemSet) -> String {
    let names: Vec<String> = pts.iter().map(|i| format_set(m, sp.prime(i))).collect();
    format!("{{{}}}", names.join(","))
}

/// Checks the quotient laws and closure properties of the ideal family.
pub fn verify_ideal_laws(m: &FiniteCommMonoid) -> CheckResult {
    let ideals = enumerate_ideals(m);
    let one = m.identity();
    ensure(ideals == enumerate_ideals_by_unions(m), "ideal-enumerators-agree", || m.name().to_string())?;
    for &a in &ideals {
        ensure(ideal_quotient(m, a, one) == a, "quotient-by-identity", || format_set(m, a))?;
        for x in m.elements() {
            let q = ideal_quotient(m, a, x);
            ensure(is_ideal(m, q), "quotient-is-ideal", || format!("({} : {})", format_set(m, a), m.element_name(x)))?;
            ensure(a.is_subset(q), "ideal-inside-quotient", || format!("({} : {})", format_set(m, a), m.element_name(x)))?;
            ensure(ideal_quotient(m, m.all(), x) == m.all(), "quotient-of-whole", || m.element_name(x).to_string())?;
            for y in m.elements() {
                ensure(ideal_quotient(m, q, y) == ideal_quotient(m, a, m.mul(x, y)), "iterated-quotient", || {
                    format!("(({} : {}) : {})", format_set(m, a), m.element_name(x), m.element_name(y))
                })?;
            }
        }
        for &b in &ideals {
            ensure(is_ideal(m, a.union(b)), "union-is-ideal", || format!("{} ∪ {}", format_set(m, a), format_set(m, b)))?;
            ensure(is_ideal(m, a.intersection(b)), "intersection-is-ideal", || format!("{} ∩ {}", format_set(m, a), format_set(m, b)))?;
        }
    }
    let big_union = ideals.iter().fold(ElemSet::EMPTY, |acc, &a| acc.union(a));
    let big_meet = ideals.iter().fold(m.all(), |acc, &a| acc.intersection(a));
    ensure(is_ideal(m, big_union) && is_ideal(m, big_meet), "family-union-meet", || m.name().to_string())?;
    check_prime_tests_agree(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn set(xs: &[usize]) -> ElemSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn ideal_lists() {
        let b = corpus::b();
        assert_eq!(enumerate_ideals(&b), vec![ElemSet::EMPTY, set(&[1]), set(&[0, 1])]);
        let f3 = corpus::f3();
        let ideals = enumerate_ideals(&f3);
        assert_eq!(ideals, vec![ElemSet::EMPTY, set(&[3]), set(&[2, 3]), set(&[1, 2, 3]), set(&[0, 1, 2, 3])]);
        assert_eq!(enumerate_ideals(&corpus::t()).len(), 2);
    }

    #[test]
    fn quotient_and_principal_examples() {
        let f3 = corpus::f3();
        assert_eq!(ideal_quotient(&f3, set(&[3]), 2), set(&[1, 2, 3]));
        assert_eq!(principal_ideal(&f3, 1), set(&[1, 2, 3]));
        assert_eq!(principal_ideal(&corpus::b(), 1), set(&[1]));
        for m in corpus::monoids() {
            assert_eq!(principal_ideal(&m, m.identity()), m.all());
        }
    }

    #[test]
    fn prime_examples() {
        let f3 = corpus::f3();
        assert!(!is_prime(&f3, set(&[2, 3])));
        assert!(is_prime(&corpus::b(), set(&[1])));
        for m in corpus::monoids() {
            assert!(is_prime(&m, ElemSet::EMPTY));
            assert!(!is_prime(&m, m.all()));
        }
    }

    #[test]
    fn spectra_and_opens() {
        let e = corpus::e();
        let sp = spec(&e);
        assert_eq!(sp.primes(), &[ElemSet::EMPTY, set(&[2]), set(&[1, 2])]);
        assert!(sp.order().is_isomorphic(&FinitePoset::chain(3)));
        assert_eq!(sp.basic_open(1), set(&[0, 1]));
        assert_eq!(spec(&corpus::c2()).size(), 1);
        let f3 = corpus::f3();
        let sf = spec(&f3);
        assert_eq!(sf.primes(), &[ElemSet::EMPTY, set(&[1, 2, 3])]);
        assert_eq!(sf.vanishing(set(&[2, 3])), set(&[1]));
        assert_eq!(sf.vanishing(ElemSet::EMPTY), sf.all_points());
        assert_eq!(sf.vanishing(f3.all()), ElemSet::EMPTY);
        let b = corpus::b();
        let sb = spec(&b);
        assert_eq!(sb.basic_open(1), set(&[0]));
        assert_eq!(zariski_topology(&b, &sb).opens().len(), 3);
        assert_eq!(zariski_topology(&e, &sp).opens().len(), 4);
        let t = corpus::t();
        assert_eq!(zariski_topology(&t, &spec(&t)).opens().len(), 2);
    }

    #[test]
    fn corpus_laws_hold() {
        for m in corpus::monoids() {
            verify_ideal_laws(&m).unwrap();
            verify_z_equals_order(&m).unwrap();
        }
    }
}
