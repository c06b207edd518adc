//! Grothendieck topologies on a commutative monoid and the Galois
//! connection `(ϒ, Ξ)` with subsets of the spectrum.
//!
//! A topology is a family of ideals, stored as a [`BitSet`] over the
//! canonical ideal list of the monoid.

use crate::bitset::{BitSet, ElemSet};
use crate::check::{ensure, CheckFailure, CheckResult};
use crate::ideals::{format_points, format_set, ideal_product, is_prime, spec, Ideal, Spectrum};
use crate::monoid::{Elem, FiniteCommMonoid};
use crate::omega::Omega;
use crate::poset::FinitePoset;

/// The data every topology computation needs: ideals with their quotient
/// action, and the spectrum.
#[derive(Clone, Debug)]
pub struct Site {
    monoid: FiniteCommMonoid,
    omega: Omega,
    spec: Spectrum,
    /// `prime_index[i]` is the ideal index of spectrum point `i`.
    prime_index: Vec<usize>,
}

/// A family of ideals, indexed by the canonical ideal list.
pub type Family = BitSet;

impl Site {
    pub fn new(m: &FiniteCommMonoid) -> Self {
        let omega = Omega::new(m);
        let spec = spec(m);
        let prime_index = spec.primes().iter().map(|&p| omega.index_of(p).expect("prime is an ideal")).collect();
        Site { monoid: m.clone(), omega, spec, prime_index }
    }

    pub fn monoid(&self) -> &FiniteCommMonoid {
        &self.monoid
    }

    pub fn omega(&self) -> &Omega {
        &self.omega
    }

    pub fn spec(&self) -> &Spectrum {
        &self.spec
    }

    pub fn ideal_count(&self) -> usize {
        self.omega.size()
    }

    pub fn ideal(&self, i: usize) -> Ideal {
        self.omega.ideal(i)
    }

    /// Index of `(a : m)`.
    #[inline]
    pub fn quotient(&self, i: usize, m: Elem) -> usize {
        self.omega.mset().act(i, m)
    }

    pub fn prime_ideal_index(&self, point: usize) -> usize {
        self.prime_index[point]
    }

    pub fn family(&self, members: impl IntoIterator<Item = usize>) -> Family {
        BitSet::from_indices(self.ideal_count(), members)
    }

    pub fn family_where(&self, pred: impl Fn(Ideal) -> bool) -> Family {
        self.family((0..self.ideal_count()).filter(|&i| pred(self.ideal(i))))
    }

    pub fn format_family(&self, f: &Family) -> String {
        let parts: Vec<String> = f.iter().map(|i| format_set(&self.monoid, self.ideal(i))).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn format_points(&self, pts: ElemSet) -> String {
        format_points(&self.spec, &self.monoid, pts)
    }

    /// Which of T1, T2, T3 fails, with a witness.
    pub fn check_gtopology(&self, f: &Family) -> CheckResult {
        let m = &self.monoid;
        let top = self.omega.top();
        ensure(f.contains(top), "T1", || format!("{} lacks M", self.format_family(f)))?;
        for a in f.iter() {
            for x in m.elements() {
                ensure(f.contains(self.quotient(a, x)), "T2", || {
                    format!("({} : {}) missing", format_set(m, self.ideal(a)), m.element_name(x))
                })?;
            }
        }
        for a in (0..self.ideal_count()).filter(|&a| !f.contains(a)) {
            for b in f.iter() {
                let forced = self.ideal(b).iter().all(|x| f.contains(self.quotient(a, x)));
                ensure(!forced, "T3", || format!("{} forced by {}", format_set(m, self.ideal(a)), format_set(m, self.ideal(b))))?;
            }
        }
        Ok(())
    }

    pub fn is_gtopology(&self, f: &Family) -> bool {
        self.check_gtopology(f).is_ok()
    }

    /// All topologies in canonical order. Topologies are up-closed, so the
    /// scan runs over up-sets of the ideal lattice containing `M` and keeps
    /// those satisfying T2 and T3.
    pub fn enumerate_topologies(&self) -> Vec<Family> {
        let n = self.ideal_count();
        let ideals: Vec<Ideal> = self.omega.ideals().to_vec();
        let order = FinitePoset::of_sets(&ideals).expect("inclusion order");
        let full = ElemSet::full(n);
        let mut out: Vec<Family> = order
            .down_sets()
            .into_iter()
            .map(|d| full.difference(d))
            .filter(|up| up.contains(self.omega.top()))
            .map(|up| self.family(up.iter()))
            .filter(|f| self.is_gtopology(f))
            .collect();
        out.sort_by(BitSet::canonical_cmp);
        out
    }

    /// Every subset of the ideal list tested against T1 to T3.
    pub fn enumerate_topologies_brute_force(&self) -> Vec<Family> {
        let n = self.ideal_count();
        assert!(n <= 20, "brute-force topology scan over {n} ideals");
        let mut out: Vec<Family> =
            (0..1u64 << n).map(|bits| self.family(ElemSet::from_bits(bits).iter())).filter(|f| self.is_gtopology(f)).collect();
        out.sort_by(BitSet::canonical_cmp);
        out
    }

    /// `F_p = {a : a ⊄ p}`.
    pub fn point_topology(&self, point: usize) -> Family {
        let p = self.spec.prime(point);
        self.family_where(|a| !a.is_subset(p))
    }

    /// `ϒ(P) = {a : V(a) ∩ P = ∅}`.
    pub fn upsilon(&self, pts: ElemSet) -> Family {
        self.family_where(|a| self.spec.vanishing(a).is_disjoint(pts))
    }

    /// `ϒ(P)` as the intersection of point topologies, `{all ideals}` for `P = ∅`.
    pub fn upsilon_by_intersection(&self, pts: ElemSet) -> Family {
        pts.iter().map(|p| self.point_topology(p)).fold(BitSet::full(self.ideal_count()), |acc, f| acc.intersection(&f))
    }

    /// `Ξ(F)`: primes not in `F`.
    pub fn xi(&self, f: &Family) -> ElemSet {
        (0..self.spec.size()).filter(|&i| !f.contains(self.prime_index[i])).collect()
    }

    pub fn stable_closure(&self, f: &Family) -> Family {
        self.upsilon(self.xi(f))
    }

    /// Stability two ways: `F = ϒΞ(F)`, and every ideal outside `F` lies in
    /// a prime outside `F`. Disagreement is a failure.
    pub fn is_stable(&self, f: &Family) -> Result<bool, CheckFailure> {
        let by_closure = self.stable_closure(f) == *f;
        let by_primes = (0..self.ideal_count())
            .filter(|&a| !f.contains(a))
            .all(|a| self.spec.vanishing(self.ideal(a)).iter().any(|p| !f.contains(self.prime_index[p])));
        ensure(by_closure == by_primes, "stability-criteria-agree", || {
            format!("{}: closure {by_closure}, primes {by_primes}", self.format_family(f))
        })?;
        Ok(by_closure)
    }

    /// `ϒ(D(f))`: the ideals containing some power of `f`. When `f` is not
    /// nilpotent-free this is strictly larger than `{a : f ∈ a}`; in `F3`,
    /// `{0}` contains `t^3` but not `t`.
    pub fn localizing_topology(&self, f: Elem) -> Family {
        self.upsilon(self.spec.basic_open(f))
    }
}

/// Each topology paired with the order-open set of primes it corresponds to.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub topologies: Vec<Family>,
    pub order_opens: Vec<ElemSet>,
    pub zariski_opens: Vec<ElemSet>,
    /// `pairs[i]` is `Ξ(topologies[i])`.
    pub pairs: Vec<ElemSet>,
}

/// Topologies, order-opens and Zariski opens are equinumerous, and
/// `Ξ`/`ϒ` are mutually inverse order-reversing bijections between them.
pub fn verify_bijection(site: &Site) -> Result<Correspondence, CheckFailure> {
    let m = site.monoid();
    let topologies = site.enumerate_topologies();
    let order_opens = crate::ideals::order_topology(site.spec()).opens().to_vec();
    let zariski_opens = crate::ideals::zariski_topology(m, site.spec()).opens().to_vec();
    ensure(topologies.len() == order_opens.len() && order_opens.len() == zariski_opens.len(), "topology-open-counts", || {
        format!("{}: {} topologies, {} order opens, {} Zariski opens", m.name(), topologies.len(), order_opens.len(), zariski_opens.len())
    })?;
    let mut pairs = Vec::with_capacity(topologies.len());
    for f in &topologies {
        let u = site.xi(f);
        ensure(order_opens.contains(&u), "xi-lands-in-opens", || {
            format!("{}: Ξ{} = {}", m.name(), site.format_family(f), site.format_points(u))
        })?;
        ensure(site.upsilon(u) == *f, "upsilon-inverts-xi", || format!("{}: {}", m.name(), site.format_family(f)))?;
        pairs.push(u);
    }
    for &u in &order_opens {
        let f = site.upsilon(u);
        ensure(site.xi(&f) == u, "xi-inverts-upsilon", || format!("{}: {}", m.name(), site.format_points(u)))?;
    }
    let mut sorted = pairs.clone();
    sorted.sort_by(ElemSet::canonical_cmp);
    sorted.dedup();
    ensure(sorted.len() == pairs.len(), "xi-injective", || m.name().to_string())?;
    for (i, f) in topologies.iter().enumerate() {
        for (j, g) in topologies.iter().enumerate() {
            ensure(f.is_subset(g) == pairs[j].is_subset(pairs[i]), "correspondence-order-reversing", || {
                format!("{}: {} vs {}", m.name(), site.format_family(f), site.format_family(g))
            })?;
        }
    }
    Ok(Correspondence { topologies, order_opens, zariski_opens, pairs })
}

/// Closure laws of topologies, prime-ness of maximal non-members,
/// point-topology facts, Galois-connection laws and stability, checked
/// exhaustively over every topology and every subset of the spectrum.
pub fn verify_topology_lemmas(site: &Site) -> CheckResult {
    let m = site.monoid();
    let n = site.ideal_count();
    let sp = site.spec();
    let tops = site.enumerate_topologies();
    let name = m.name();

    // every topology is up-closed, ∩-closed and closed under ideal products
    for f in &tops {
        for a in f.iter() {
            for b in 0..n {
                if site.ideal(a).is_subset(site.ideal(b)) {
                    ensure(f.contains(b), "topology-up-closed", || format!("{name}: {}", site.format_family(f)))?;
                }
            }
            for b in f.iter() {
                let meet = site.omega().index_of(site.ideal(a).intersection(site.ideal(b))).unwrap();
                ensure(f.contains(meet), "topology-meet-closed", || format!("{name}: {}", site.format_family(f)))?;
                let prod = site.omega().index_of(ideal_product(m, site.ideal(a), site.ideal(b))).unwrap();
                ensure(f.contains(prod), "topology-product-closed", || format!("{name}: {}", site.format_family(f)))?;
            }
        }
        // maximal ideals among {a ⊇ c : a ∉ F} are prime
        for c in (0..n).filter(|&c| !f.contains(c)) {
            let cand: Vec<usize> = (0..n).filter(|&a| !f.contains(a) && site.ideal(c).is_subset(site.ideal(a))).collect();
            for &a in &cand {
                let maximal = cand.iter().all(|&b| b == a || !site.ideal(a).is_subset(site.ideal(b)));
                if maximal {
                    ensure(is_prime(m, site.ideal(a)), "maximal-non-member-is-prime", || {
                        format!(
                            "{name}: {} over {} in {}",
                            format_set(m, site.ideal(a)),
                            format_set(m, site.ideal(c)),
                            site.format_family(f)
                        )
                    })?;
                }
            }
        }
        ensure(site.is_stable(f)?, "every-topology-stable", || format!("{name}: {}", site.format_family(f)))?;
    }

    // point topologies
    for p in 0..sp.size() {
        let fp = site.point_topology(p);
        site.check_gtopology(&fp).map_err(|e| CheckFailure::new("point-topology-is-topology", format!("{name}: {e}")))?;
        for a in 0..n {
            ensure(fp.contains(a) == !sp.vanishing(site.ideal(a)).contains(p), "point-topology-avoids-vanishing", || {
                format!("{name}: {} at {}", format_set(m, site.ideal(a)), format_set(m, sp.prime(p)))
            })?;
        }
        for q in 0..sp.size() {
            ensure(sp.prime(p).is_subset(sp.prime(q)) == site.point_topology(q).is_subset(&fp), "point-topology-order-reversing", || {
                format!("{name}: {} vs {}", format_set(m, sp.prime(p)), format_set(m, sp.prime(q)))
            })?;
        }
    }

    // Galois connection over every subset of the spectrum
    let subsets: Vec<ElemSet> = ElemSet::all_subsets(sp.size()).collect();
    for &pts in &subsets {
        let up = site.upsilon(pts);
        ensure(up == site.upsilon_by_intersection(pts), "upsilon-two-ways", || format!("{name}: {}", site.format_points(pts)))?;
        site.check_gtopology(&up).map_err(|e| CheckFailure::new("upsilon-is-topology", format!("{name}: {e}")))?;
        let back = site.xi(&up);
        ensure(pts.is_subset(back), "subset-inside-closure", || site.format_points(pts))?;
        ensure(back == sp.order().down_closure(pts), "closure-is-down-closure", || format!("{name}: {}", site.format_points(pts)))?;
        ensure(site.upsilon(back) == up, "upsilon-xi-upsilon", || site.format_points(pts))?;
        for &qts in &subsets {
            if pts.is_subset(qts) {
                ensure(site.upsilon(qts).is_subset(&up), "upsilon-antitone", || {
                    format!("{name}: {} ⊆ {}", site.format_points(pts), site.format_points(qts))
                })?;
            }
        }
        for f in &tops {
            ensure(f.is_subset(&up) == pts.is_subset(site.xi(f)), "galois-adjunction", || {
                format!("{name}: {} / {}", site.format_family(f), site.format_points(pts))
            })?;
        }
    }
    for f in &tops {
        let closure = site.stable_closure(f);
        ensure(f.is_subset(&closure), "topology-inside-closure", || site.format_family(f))?;
        let by_vanishing = site.family_where(|a| sp.vanishing(a).iter().all(|p| f.contains(site.prime_ideal_index(p))));
        ensure(closure == by_vanishing, "closure-by-vanishing", || site.format_family(f))?;
        ensure(site.xi(&closure) == site.xi(f), "xi-upsilon-xi", || site.format_family(f))?;
        for g in &tops {
            if f.is_subset(g) {
                ensure(site.xi(g).is_subset(site.xi(f)), "xi-antitone", || {
                    format!("{} ⊆ {}", site.format_family(f), site.format_family(g))
                })?;
            }
        }
    }

    // examples pinned by the text
    ensure(site.upsilon(ElemSet::EMPTY) == BitSet::full(n), "upsilon-empty", || name.to_string())?;
    ensure(site.upsilon(sp.all_points()) == site.family([site.omega().top()]), "upsilon-everything", || name.to_string())?;
    let generic = site.upsilon(ElemSet::singleton(0));
    ensure(generic == site.family_where(|a| !a.is_empty()), "upsilon-generic-point", || name.to_string())?;
    for f in m.elements() {
        let powers = m.submonoid_generated(ElemSet::singleton(f)).members();
        ensure(site.localizing_topology(f) == site.family_where(|a| !a.is_disjoint(powers)), "upsilon-basic-open", || {
            format!("{name}: D({})", m.element_name(f))
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn topology_counts() {
        let expect = [("B", 3), ("E", 4), ("F3", 3), ("C2", 2), ("T", 2)];
        for (name, count) in expect {
            let m = corpus::monoid_by_name(name).unwrap();
            let site = Site::new(&m);
            let tops = site.enumerate_topologies();
            assert_eq!(tops.len(), count, "{name}");
            assert_eq!(tops, site.enumerate_topologies_brute_force(), "{name}");
        }
    }

    #[test]
    fn pruned_enumeration_matches_brute_force_on_corpus() {
        for m in corpus::monoids() {
            let site = Site::new(&m);
            if site.ideal_count() <= 16 {
                assert_eq!(site.enumerate_topologies(), site.enumerate_topologies_brute_force(), "{}", m.name());
            }
        }
    }

    #[test]
    fn axiom_examples() {
        let b = corpus::b();
        let site = Site::new(&b);
        assert!(site.is_gtopology(&site.family([2])));
        assert!(site.is_gtopology(&BitSet::full(3)));
        // {∅, B}: T3 with b = ∅ forces {0}
        let err = site.check_gtopology(&site.family([0, 2])).unwrap_err();
        assert_eq!(err.check, "T3");
    }

    #[test]
    fn point_topology_examples() {
        let b = corpus::b();
        let sb = Site::new(&b);
        assert_eq!(sb.point_topology(1), sb.family([2]));
        let e = corpus::e();
        let se = Site::new(&e);
        // E: ideals ∅, {0}, {e,0}, E; point 1 is the prime {0}
        assert_eq!(se.point_topology(1), se.family([2, 3]));
        assert_eq!(se.xi(&se.point_topology(1)), [0, 1].into_iter().collect());
        assert_eq!(se.xi(&se.family([3])), se.spec().all_points());
        assert_eq!(se.xi(&BitSet::full(4)), ElemSet::EMPTY);
    }

    #[test]
    fn basic_open_topology_needs_powers() {
        let f3 = corpus::f3();
        let site = Site::new(&f3);
        let literal = site.family_where(|a| a.contains(1));
        assert_ne!(site.localizing_topology(1), literal);
        assert!(!site.is_gtopology(&literal));
        assert!(site.localizing_topology(1).contains(1));
        let e = corpus::e();
        let se = Site::new(&e);
        assert_eq!(se.localizing_topology(1), se.family_where(|a| a.contains(1)));
    }

    #[test]
    fn lemmas_hold_on_corpus() {
        for m in corpus::monoids() {
            let site = Site::new(&m);
            verify_topology_lemmas(&site).unwrap();
            verify_bijection(&site).unwrap();
        }
    }
}
