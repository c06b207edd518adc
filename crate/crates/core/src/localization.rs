//! Localization of monoids and M-sets at a submonoid, transport of ideals
//! along homomorphisms, and the comparison between localized and
//! unlocalized classifiers.
//!
//! A fraction `a/s` is a pair with `s ∈ S`; `a1/s1 = a2/s2` iff
//! `a1·s·s2 = a2·s·s1` for some `s ∈ S`. Classes are computed as an explicit
//! quotient of the finite pair set and numbered by their least pair, pairs
//! ordered by numerator index and then denominator index.

use crate::bitset::ElemSet;
use crate::check::{ensure, CheckFailure, CheckResult};
use crate::ideals::{enumerate_ideals, format_set, generated_ideal, ideal_quotient, Ideal};
use crate::monoid::{Elem, FiniteCommMonoid, MonoidHom, Submonoid};
use crate::mset::MSet;
use crate::omega::Omega;

/// Equivalence classes of fractions over an M-set.
#[derive(Clone, Debug)]
pub struct Fractions {
    denominators: Vec<Elem>,
    slot: Vec<usize>,
    class: Vec<usize>,
    reps: Vec<(usize, Elem)>,
}

impl Fractions {
    /// Quotient of `A × S` by the fraction relation.
    pub fn new(a: &MSet, s: &Submonoid) -> Self {
        let m = a.monoid();
        let denominators: Vec<Elem> = s.iter().collect();
        let mut slot = vec![usize::MAX; m.size()];
        for (i, &d) in denominators.iter().enumerate() {
            slot[d] = i;
        }
        let ns = denominators.len();
        let pairs = a.size() * ns;
        let mut parent: Vec<usize> = (0..pairs).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        // (a1,s1) ~ (a2,s2) iff a1·(s s2) = a2·(s s1) for some s
        for p in 0..pairs {
            let (a1, s1) = (p / ns, denominators[p % ns]);
            for q in p + 1..pairs {
                let (a2, s2) = (q / ns, denominators[q % ns]);
                let related = denominators.iter().any(|&u| a.act(a1, m.mul(u, s2)) == a.act(a2, m.mul(u, s1)));
                if related {
                    let (rp, rq) = (find(&mut parent, p), find(&mut parent, q));
                    if rp != rq {
                        parent[rp.max(rq)] = rp.min(rq);
                    }
                }
            }
        }
        let mut class = vec![usize::MAX; pairs];
        let mut reps = Vec::new();
        for p in 0..pairs {
            let r = find(&mut parent, p);
            if class[r] == usize::MAX {
                class[r] = reps.len();
                reps.push((p / ns, denominators[p % ns]));
            }
            class[p] = class[r];
        }
        Fractions { denominators, slot, class, reps }
    }

    /// Class of `a/s`; `s` must lie in the submonoid.
    #[inline]
    pub fn class(&self, a: usize, s: Elem) -> usize {
        let i = self.slot[s];
        debug_assert!(i != usize::MAX, "denominator outside the submonoid");
        self.class[a * self.denominators.len() + i]
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Least pair in each class.
    pub fn rep(&self, c: usize) -> (usize, Elem) {
        self.reps[c]
    }

    pub fn denominators(&self) -> &[Elem] {
        &self.denominators
    }

    /// The computed classes coincide with the fraction relation itself, so
    /// the relation is already an equivalence.
    pub fn verify(&self, a: &MSet) -> CheckResult {
        let m = a.monoid();
        for a1 in 0..a.size() {
            for &s1 in &self.denominators {
                for a2 in 0..a.size() {
                    for &s2 in &self.denominators {
                        let related = self.denominators.iter().any(|&u| a.act(a1, m.mul(u, s2)) == a.act(a2, m.mul(u, s1)));
                        let same = self.class(a1, s1) == self.class(a2, s2);
                        ensure(related == same, "fraction-relation-is-equivalence", || {
                            format!(
                                "{}: {a1}/{} vs {a2}/{}: related {related}, same class {same}",
                                a.name(),
                                m.element_name(s1),
                                m.element_name(s2)
                            )
                        })?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `S⁻¹M` with its localization map.
#[derive(Clone, Debug)]
pub struct LocalizedMonoid {
    base: FiniteCommMonoid,
    denominators: Submonoid,
    result: FiniteCommMonoid,
    loc_map: MonoidHom,
    fractions: Fractions,
}

impl LocalizedMonoid {
    pub fn new(m: &FiniteCommMonoid, s: &Submonoid) -> Self {
        let reg = MSet::regular(m);
        let fr = Fractions::new(&reg, s);
        let rows: Vec<Vec<usize>> = (0..fr.count())
            .map(|c| {
                let (m1, s1) = fr.rep(c);
                (0..fr.count())
                    .map(|d| {
                        let (m2, s2) = fr.rep(d);
                        fr.class(m.mul(m1, m2), m.mul(s1, s2))
                    })
                    .collect()
            })
            .collect();
        let names: Vec<String> = (0..fr.count())
            .map(|c| {
                let (x, d) = fr.rep(c);
                if d == m.identity() {
                    m.element_name(x).to_string()
                } else {
                    format!("{}/{}", m.element_name(x), m.element_name(d))
                }
            })
            .collect();
        let one = fr.class(m.identity(), m.identity());
        let label: Vec<&str> = s.iter().map(|x| m.element_name(x)).collect();
        let result = FiniteCommMonoid::new(format!("{}[{}]", m.name(), label.join(",")), &rows, one)
            .and_then(|r| r.with_names(names))
            .expect("localization is a commutative monoid");
        let map = m.elements().map(|x| fr.class(x, m.identity())).collect();
        let loc_map = MonoidHom::new(m.clone(), result.clone(), map).expect("localization map");
        LocalizedMonoid { base: m.clone(), denominators: *s, result, loc_map, fractions: fr }
    }

    /// Localization at the submonoid generated by one element.
    pub fn at_element(m: &FiniteCommMonoid, f: Elem) -> Self {
        LocalizedMonoid::new(m, &m.submonoid_generated(ElemSet::singleton(f)))
    }

    /// Localization at the complement of a prime.
    pub fn at_prime(m: &FiniteCommMonoid, p: Ideal) -> Self {
        let s = Submonoid::complement_of(m, p).expect("complement of a prime is a submonoid");
        LocalizedMonoid::new(m, &s)
    }

    pub fn base(&self) -> &FiniteCommMonoid {
        &self.base
    }

    pub fn denominators(&self) -> &Submonoid {
        &self.denominators
    }

    pub fn result(&self) -> &FiniteCommMonoid {
        &self.result
    }

    pub fn loc_map(&self) -> &MonoidHom {
        &self.loc_map
    }

    pub fn fractions(&self) -> &Fractions {
        &self.fractions
    }

    /// The element `m/s`.
    pub fn fraction(&self, m: Elem, s: Elem) -> Elem {
        self.fractions.class(m, s)
    }

    /// `1/s`.
    pub fn inverse_of(&self, s: Elem) -> Elem {
        self.fractions.class(self.base.identity(), s)
    }

    /// Fraction law, well-defined multiplication and invertibility of `S`.
    pub fn verify(&self) -> CheckResult {
        let m = &self.base;
        let reg = MSet::regular(m);
        self.fractions.verify(&reg)?;
        let ds = self.fractions.denominators();
        for x1 in m.elements() {
            for &s1 in ds {
                for x2 in m.elements() {
                    for &s2 in ds {
                        let lhs = self.result.mul(self.fraction(x1, s1), self.fraction(x2, s2));
                        ensure(lhs == self.fraction(m.mul(x1, x2), m.mul(s1, s2)), "fraction-product", || {
                            format!("{}: {x1}/{s1} * {x2}/{s2}", m.name())
                        })?;
                    }
                }
            }
        }
        for &s in ds {
            let image = self.loc_map.apply(s);
            ensure(self.result.mul(image, self.inverse_of(s)) == self.result.identity(), "denominators-invertible", || {
                format!("{}: {}", m.name(), m.element_name(s))
            })?;
        }
        Ok(())
    }

    /// Every hom `g: M -> N` inverting `S` factors uniquely through the
    /// localization map.
    pub fn verify_universal_property(&self, n: &FiniteCommMonoid) -> CheckResult {
        let units = n.units();
        let from_result = MonoidHom::enumerate(&self.result, n);
        for g in MonoidHom::enumerate(&self.base, n) {
            if !self.denominators.iter().all(|s| units.contains(g.apply(s))) {
                continue;
            }
            let count = from_result.iter().filter(|h| self.base.elements().all(|x| h.apply(self.loc_map.apply(x)) == g.apply(x))).count();
            ensure(count == 1, "localization-universal-property", || {
                format!("{} -> {}: {:?} has {count} factorizations", self.base.name(), n.name(), g.map())
            })?;
        }
        Ok(())
    }
}

pub fn localize_monoid(m: &FiniteCommMonoid, s: &Submonoid) -> LocalizedMonoid {
    LocalizedMonoid::new(m, s)
}

/// `S⁻¹A` as an `S⁻¹M`-set, with `β(a) = a/1`.
#[derive(Clone, Debug)]
pub struct LocalizedMSet {
    base: MSet,
    result: MSet,
    beta: Vec<usize>,
    fractions: Fractions,
}

impl LocalizedMSet {
    pub fn new(a: &MSet, loc: &LocalizedMonoid) -> Self {
        assert_eq!(a.monoid(), loc.base());
        let m = loc.base();
        let fr = Fractions::new(a, loc.denominators());
        let rows: Vec<Vec<usize>> = (0..fr.count())
            .map(|c| {
                let (x, s) = fr.rep(c);
                loc.result()
                    .elements()
                    .map(|q| {
                        let (y, t) = loc.fractions().rep(q);
                        fr.class(a.act(x, y), m.mul(s, t))
                    })
                    .collect()
            })
            .collect();
        let result = MSet::new(format!("{}[S^-1]", a.name()), loc.result(), &rows).expect("localized action satisfies the action laws");
        let beta = (0..a.size()).map(|x| fr.class(x, m.identity())).collect();
        LocalizedMSet { base: a.clone(), result, beta, fractions: fr }
    }

    pub fn base(&self) -> &MSet {
        &self.base
    }

    pub fn result(&self) -> &MSet {
        &self.result
    }

    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    pub fn fraction(&self, a: usize, s: Elem) -> usize {
        self.fractions.class(a, s)
    }

    pub fn fractions(&self) -> &Fractions {
        &self.fractions
    }

    /// Fraction law, well-defined action and equivariance of `β`.
    pub fn verify(&self, loc: &LocalizedMonoid) -> CheckResult {
        let a = &self.base;
        let m = a.monoid();
        self.fractions.verify(a)?;
        let ds = self.fractions.denominators();
        for x in 0..a.size() {
            for &s in ds {
                for y in m.elements() {
                    for &t in ds {
                        let lhs = self.result.act(self.fraction(x, s), loc.fraction(y, t));
                        ensure(lhs == self.fraction(a.act(x, y), m.mul(s, t)), "localized-action", || {
                            format!("{}: ({x}/{s})·({y}/{t})", a.name())
                        })?;
                    }
                }
            }
        }
        let as_m = self.result.restrict_scalars(loc.loc_map());
        a.check_equivariant(&as_m, &self.beta).map_err(|e| CheckFailure::new("beta-equivariant", e.to_string()))
    }
}

pub fn localize_mset(a: &MSet, s: &Submonoid) -> LocalizedMSet {
    LocalizedMSet::new(a, &LocalizedMonoid::new(a.monoid(), s))
}

/// `f_*(m)`: the ideal generated by `f(m)`.
pub fn pushforward_ideal(f: &MonoidHom, m: Ideal) -> Ideal {
    generated_ideal(f.target(), f.image(m))
}

/// `f^*(n) = f⁻¹(n)`.
pub fn pullback_ideal(f: &MonoidHom, n: Ideal) -> Ideal {
    f.preimage(n)
}

fn ideal_pair(f: &MonoidHom, m: Ideal) -> String {
    format!("{} -> {}: {}", f.source().name(), f.target().name(), format_set(f.source(), m))
}

/// Transport laws valid for every homomorphism `f: M -> N`:
/// `m ⊆ f^*f_*m`, `f_*f^*n ⊆ n`, the two idempotence identities,
/// `f_*(m:a) ⊆ (f_*m : f(a))` and `(f^*n : a) = f^*(n : f(a))`.
pub fn verify_ideal_transport(f: &MonoidHom) -> CheckResult {
    let (src, tgt) = (f.source(), f.target());
    let src_ideals = enumerate_ideals(src);
    let tgt_ideals = enumerate_ideals(tgt);
    for &m in &src_ideals {
        let push = pushforward_ideal(f, m);
        ensure(m.is_subset(pullback_ideal(f, push)), "unit-of-transport", || ideal_pair(f, m))?;
        ensure(pushforward_ideal(f, pullback_ideal(f, push)) == push, "push-pull-push", || ideal_pair(f, m))?;
        for a in src.elements() {
            ensure(
                pushforward_ideal(f, ideal_quotient(src, m, a)).is_subset(ideal_quotient(tgt, push, f.apply(a))),
                "pushforward-of-quotient",
                || format!("{} at {}", ideal_pair(f, m), src.element_name(a)),
            )?;
        }
    }
    for &n in &tgt_ideals {
        let pull = pullback_ideal(f, n);
        ensure(pushforward_ideal(f, pull).is_subset(n), "counit-of-transport", || {
            format!("{} -> {}: {}", src.name(), tgt.name(), format_set(tgt, n))
        })?;
        ensure(pullback_ideal(f, pushforward_ideal(f, pull)) == pull, "pull-push-pull", || {
            format!("{} -> {}: {}", src.name(), tgt.name(), format_set(tgt, n))
        })?;
        for a in src.elements() {
            ensure(ideal_quotient(src, pull, a) == pullback_ideal(f, ideal_quotient(tgt, n, f.apply(a))), "pullback-of-quotient", || {
                format!("{} at {}", format_set(tgt, n), src.element_name(a))
            })?;
        }
    }
    Ok(())
}

/// The sharper laws for a localization map `f: M -> S⁻¹M`:
/// `f_*f^*n = n`, `f_*(m:a) = (f_*m : f(a))`, `f^*f_*m = ⋃_{s∈S} (m:s)`
/// and `(f^*f_*m : t) = f^*f_*m` for `t ∈ S`.
pub fn verify_localization_transport(loc: &LocalizedMonoid) -> CheckResult {
    let f = loc.loc_map();
    verify_ideal_transport(f)?;
    let (m, s) = (loc.base(), loc.denominators());
    for n in enumerate_ideals(loc.result()) {
        ensure(pushforward_ideal(f, pullback_ideal(f, n)) == n, "localized-ideal-recovered", || {
            format!("{}: {}", loc.result().name(), format_set(loc.result(), n))
        })?;
    }
    for a in enumerate_ideals(m) {
        let push = pushforward_ideal(f, a);
        let saturated = pullback_ideal(f, push);
        for x in m.elements() {
            ensure(
                pushforward_ideal(f, ideal_quotient(m, a, x)) == ideal_quotient(loc.result(), push, f.apply(x)),
                "localized-quotient-commutes",
                || format!("{} at {}", ideal_pair(f, a), m.element_name(x)),
            )?;
        }
        let union = s.iter().fold(ElemSet::EMPTY, |acc, u| acc.union(ideal_quotient(m, a, u)));
        ensure(saturated == union, "saturation-is-union-of-quotients", || ideal_pair(f, a))?;
        for t in s.iter() {
            ensure(ideal_quotient(m, saturated, t) == saturated, "saturation-is-s-stable", || {
                format!("{} at {}", ideal_pair(f, a), m.element_name(t))
            })?;
        }
    }
    Ok(())
}

/// `f_{*S}: S⁻¹Ω^M -> Ω^{S⁻¹M}` with its inverse and the witnesses `s_m`.
#[derive(Clone, Debug)]
pub struct OmegaLocalization {
    pub localized_omega: LocalizedMSet,
    pub target: Omega,
    /// `map[c]` is the image of fraction class `c`.
    pub map: Vec<usize>,
    pub inverse: Vec<usize>,
    /// For each ideal of `M` (canonical order), an `s ∈ S` with
    /// `f^*f_*(m) = (m : s)`.
    pub saturation_witness: Vec<Elem>,
}

/// Builds `m/s ↦ (f_*(m) : 1/s)` and checks it is a well-defined equivariant
/// bijection whose inverse is `n ↦ f^*(n)/1`.
pub fn omega_localization_iso(loc: &LocalizedMonoid) -> Result<OmegaLocalization, CheckFailure> {
    let m = loc.base();
    let f = loc.loc_map();
    let om = Omega::new(m);
    let target = Omega::new(loc.result());
    let lo = LocalizedMSet::new(om.mset(), loc);
    let name = || format!("{} at {:?}", m.name(), loc.denominators().members());
    let image = |i: usize, s: Elem| {
        let push = pushforward_ideal(f, om.ideal(i));
        let q = ideal_quotient(loc.result(), push, loc.inverse_of(s));
        target.index_of(q).expect("quotient is an ideal")
    };
    let mut map = vec![usize::MAX; lo.fractions().count()];
    for i in 0..om.size() {
        for &s in lo.fractions().denominators() {
            let c = lo.fraction(i, s);
            let v = image(i, s);
            if map[c] == usize::MAX {
                map[c] = v;
            }
            ensure(map[c] == v, "omega-localization-well-defined", || {
                format!("{}: {}/{}", name(), format_set(m, om.ideal(i)), m.element_name(s))
            })?;
        }
    }
    ensure(crate::mset::is_bijection(&map, target.size()), "omega-localization-bijective", || {
        format!("{}: {} classes onto {} ideals via {:?}", name(), map.len(), target.size(), map)
    })?;
    lo.result()
        .check_equivariant(target.mset(), &map)
        .map_err(|e| CheckFailure::new("omega-localization-equivariant", format!("{}: {e}", name())))?;
    let inverse: Vec<usize> = (0..target.size())
        .map(|j| {
            let pulled = pullback_ideal(f, target.ideal(j));
            lo.fraction(om.index_of(pulled).expect("preimage is an ideal"), m.identity())
        })
        .collect();
    for (c, &v) in map.iter().enumerate() {
        ensure(inverse[v] == c, "omega-localization-inverse", || format!("{}: class {c}", name()))?;
    }
    let mut saturation_witness = Vec::with_capacity(om.size());
    for i in 0..om.size() {
        let a = om.ideal(i);
        let sat = pullback_ideal(f, pushforward_ideal(f, a));
        let w = loc.denominators().iter().find(|&s| ideal_quotient(m, a, s) == sat);
        let w = w.ok_or_else(|| CheckFailure::new("saturation-witness", format!("{}: {}", name(), format_set(m, a))))?;
        ensure(
            lo.fraction(i, m.identity()) == lo.fraction(om.index_of(sat).unwrap(), m.identity()),
            "ideal-equals-saturation-as-fraction",
            || format!("{}: {}", name(), format_set(m, a)),
        )?;
        saturation_witness.push(w);
    }
    Ok(OmegaLocalization { localized_omega: lo, target, map, inverse, saturation_witness })
}

/// For `α: A -> B` with `B` an `S⁻¹M`-set, decides whether
/// `τ(a/s) = α(a)·(1/s)` is injective, and independently whether
/// `α(a1) = α(a2)` forces `a1·s = a2·s` for some `s ∈ S`. The two answers
/// must agree.
pub fn mono_criterion(loc: &LocalizedMonoid, a: &MSet, b: &MSet, alpha: &[usize]) -> Result<bool, CheckFailure> {
    let m = loc.base();
    let b_over_m = b.restrict_scalars(loc.loc_map());
    a.check_equivariant(&b_over_m, alpha).map_err(|e| CheckFailure::new("mono-criterion-input", e.to_string()))?;
    let la = LocalizedMSet::new(a, loc);
    let mut tau = vec![usize::MAX; la.fractions().count()];
    for (x, &ax) in alpha.iter().enumerate() {
        for &s in la.fractions().denominators() {
            let c = la.fraction(x, s);
            let v = b.act(ax, loc.inverse_of(s));
            if tau[c] == usize::MAX {
                tau[c] = v;
            }
            ensure(tau[c] == v, "tau-well-defined", || format!("{}: {x}/{s}", a.name()))?;
        }
    }
    let injective = tau.iter().copied().collect::<std::collections::BTreeSet<_>>().len() == tau.len();
    let condition = (0..a.size())
        .all(|x1| (0..a.size()).all(|x2| alpha[x1] != alpha[x2] || loc.denominators().iter().any(|s| a.act(x1, s) == a.act(x2, s))));
    ensure(injective == condition, "mono-criterion-equivalence", || {
        format!("{} over {}: injective {injective}, condition {condition}", a.name(), m.name())
    })?;
    Ok(injective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::mset::enumerate_msets_up_to;

    #[test]
    fn localization_examples() {
        for m in corpus::monoids() {
            let loc = LocalizedMonoid::new(&m, &Submonoid::trivial(&m));
            assert!(loc.result().is_isomorphic(&m));
            assert!(loc.loc_map().is_bijective());
        }
        let e = corpus::e();
        let loc = LocalizedMonoid::at_element(&e, 1);
        assert!(loc.result().is_isomorphic(&corpus::b()));
        assert_eq!(loc.loc_map().map(), &[0, 0, 1]);
        let b = corpus::b();
        assert_eq!(LocalizedMonoid::at_element(&b, 1).result().size(), 1);
    }

    #[test]
    fn localizations_verify_on_corpus() {
        for m in corpus::monoids() {
            for s in m.all_submonoids() {
                let loc = LocalizedMonoid::new(&m, &s);
                loc.verify().unwrap();
                verify_localization_transport(&loc).unwrap();
                omega_localization_iso(&loc).unwrap();
            }
        }
    }

    #[test]
    fn universal_property_small() {
        let targets = [corpus::t(), corpus::b(), corpus::c2(), corpus::e()];
        for m in [corpus::b(), corpus::e(), corpus::f3(), corpus::c2xb()] {
            for s in m.all_submonoids() {
                let loc = LocalizedMonoid::new(&m, &s);
                for n in &targets {
                    loc.verify_universal_property(n).unwrap();
                }
            }
        }
    }

    #[test]
    fn transport_examples() {
        let e = corpus::e();
        let b = corpus::b();
        let proj = MonoidHom::new(e.clone(), b.clone(), vec![0, 0, 1]).unwrap();
        let m: Ideal = [1, 2].into_iter().collect();
        assert_eq!(pushforward_ideal(&proj, m), b.all());
        assert_eq!(pullback_ideal(&proj, ElemSet::singleton(1)), ElemSet::singleton(2));
        assert_eq!(pushforward_ideal(&proj, ElemSet::EMPTY), ElemSet::EMPTY);
        verify_ideal_transport(&proj).unwrap();
        verify_ideal_transport(&MonoidHom::identity(&e)).unwrap();
    }

    #[test]
    fn localized_regular_is_localized_monoid() {
        for m in corpus::monoids() {
            for s in m.all_submonoids() {
                let loc = LocalizedMonoid::new(&m, &s);
                let la = LocalizedMSet::new(&MSet::regular(&m), &loc);
                la.verify(&loc).unwrap();
                assert_eq!(la.result(), &MSet::regular(loc.result()).renamed(la.result().name()));
            }
        }
    }

    #[test]
    fn omega_localization_sizes() {
        let e = corpus::e();
        let iso = omega_localization_iso(&LocalizedMonoid::at_element(&e, 1)).unwrap();
        assert_eq!(iso.map.len(), 3);
        assert_eq!(iso.target.size(), 3);
    }

    #[test]
    fn mono_criterion_examples() {
        let b = corpus::b();
        let loc = LocalizedMonoid::at_element(&b, 1);
        let reg = MSet::regular(&b);
        let point = MSet::terminal(loc.result());
        assert!(mono_criterion(&loc, &reg, &point, &[0, 0]).unwrap());
        for m in [corpus::e(), corpus::f3(), corpus::c2xb()] {
            for s in m.all_submonoids() {
                let loc = LocalizedMonoid::new(&m, &s);
                let targets = enumerate_msets_up_to(loc.result(), 2);
                for a in enumerate_msets_up_to(&m, 3) {
                    for t in &targets {
                        let tm = t.restrict_scalars(loc.loc_map());
                        for alpha in a.hom_maps(&tm) {
                            mono_criterion(&loc, &a, t, &alpha).unwrap();
                        }
                    }
                }
            }
        }
    }
}
