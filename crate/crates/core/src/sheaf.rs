//! Sheaves on the one-object site of a monoid, and sheafification by the
//! double plus construction.

use crate::check::{ensure, CheckFailure, CheckResult};
use crate::lawvere::{is_dense, LtOperator};
use crate::monoid::FiniteCommMonoid;
use crate::mset::{enumerate_msets_up_to, MSet};
use crate::topology::{Family, Site};

/// Equivariant maps `a -> A` for an ideal `a`, each as a vector over the
/// members of `a` in increasing order.
fn ideal_homs(site: &Site, a: usize, target: &MSet) -> Vec<Vec<usize>> {
    let (ideal, _) = MSet::from_ideal(site.monoid(), site.ideal(a));
    ideal.hom_maps(target)
}

/// `A` is a sheaf for `F` when `x ↦ (m ↦ x·m)` restricted to every `a ∈ F`
/// is a bijection `A -> Hom(a, A)`.
pub fn is_sheaf(site: &Site, a: &MSet, f: &Family) -> bool {
    f.iter().all(|i| {
        let members: Vec<usize> = site.ideal(i).iter().collect();
        let homs = ideal_homs(site, i, a);
        if homs.len() != a.size() {
            return false;
        }
        let mut images: Vec<Vec<usize>> = (0..a.size()).map(|x| members.iter().map(|&m| a.act(x, m)).collect()).collect();
        images.sort();
        images.dedup();
        images.len() == a.size()
    })
}

/// The M-sets a j-sheaf is tested against: every M-set on at most
/// `max_k` points up to isomorphism, plus the regular M-set.
pub fn sheaf_test_objects(m: &FiniteCommMonoid, max_k: usize) -> Vec<MSet> {
    let mut out = enumerate_msets_up_to(m, max_k);
    out.push(MSet::regular(m));
    out
}

/// `A` is a j-sheaf relative to `objects` when for every dense `B ⊆ C`
/// with `C` among `objects`, restriction `Hom(C, A) -> Hom(B, A)` is a
/// bijection.
pub fn is_j_sheaf(site: &Site, j: &LtOperator, a: &MSet, objects: &[MSet]) -> bool {
    objects.iter().all(|c| {
        let homs = c.hom_maps(a);
        c.sub_msets().into_iter().all(|sub| {
            if !is_dense(site, j, c, sub).expect("sub-M-set") {
                return true;
            }
            let (b, incl) = c.restrict_to(sub).expect("sub-M-set");
            let mut restricted: Vec<Vec<usize>> = homs.iter().map(|h| incl.iter().map(|&x| h[x]).collect()).collect();
            restricted.sort();
            let n = restricted.len();
            restricted.dedup();
            restricted.len() == n && n == b.hom_maps(a).len()
        })
    })
}

/// The plus construction with its unit `A -> A⁺`.
#[derive(Clone, Debug)]
pub struct PlusConstruction {
    pub result: MSet,
    pub unit: Vec<usize>,
    /// `(ideal index, map on its members)` for each class of the colimit.
    pub representatives: Vec<(usize, Vec<usize>)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.0[hi] = lo;
        }
    }
}

/// `A⁺ = colim_{a ∈ F} Hom(a, A)`. Pairs `(a, φ)` are identified with their
/// restrictions to smaller members of `F`; classes are numbered by first
/// pair in (ideal index, map) order.
pub fn plus_construction(site: &Site, a: &MSet, f: &Family) -> PlusConstruction {
    let m = site.monoid();
    let members_of: Vec<Vec<usize>> = (0..site.ideal_count()).map(|i| site.ideal(i).iter().collect()).collect();
    let mut pairs: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut start = vec![0; site.ideal_count()];
    for i in f.iter() {
        start[i] = pairs.len();
        pairs.extend(ideal_homs(site, i, a).into_iter().map(|h| (i, h)));
    }
    let lookup = |pairs: &[(usize, Vec<usize>)], i: usize, h: &[usize]| -> usize {
        pairs[start[i]..]
            .iter()
            .position(|(k, g)| *k == i && g.as_slice() == h)
            .map(|p| start[i] + p)
            .expect("restriction of a hom is a hom")
    };
    let restrict = |from: usize, to: usize, h: &[usize]| -> Vec<usize> {
        members_of[to].iter().map(|x| h[members_of[from].iter().position(|y| y == x).expect("subset")]).collect()
    };
    let mut uf = UnionFind((0..pairs.len()).collect());
    for p in 0..pairs.len() {
        let (i, ref h) = pairs[p];
        for c in f.iter().filter(|&c| c != i && site.ideal(c).is_subset(site.ideal(i))) {
            let q = lookup(&pairs, c, &restrict(i, c, h));
            uf.union(p, q);
        }
    }
    let mut class_of_root = vec![usize::MAX; pairs.len()];
    let mut class = vec![0; pairs.len()];
    let mut representatives = Vec::new();
    for p in 0..pairs.len() {
        let r = uf.find(p);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = representatives.len();
            representatives.push(pairs[p].clone());
        }
        class[p] = class_of_root[r];
    }
    let rows: Vec<Vec<usize>> = representatives
        .iter()
        .map(|(i, h)| {
            m.elements()
                .map(|x| {
                    let q = site.quotient(*i, x);
                    let moved: Vec<usize> = members_of[q]
                        .iter()
                        .map(|&y| h[members_of[*i].iter().position(|&z| z == m.mul(x, y)).expect("(a:x)x ⊆ a")])
                        .collect();
                    class[lookup(&pairs, q, &moved)]
                })
                .collect()
        })
        .collect();
    let result = MSet::new(format!("{}+", a.name()), m, &rows).expect("plus construction is an M-set");
    let top = site.omega().top();
    let unit = (0..a.size())
        .map(|x| {
            let h: Vec<usize> = m.elements().map(|y| a.act(x, y)).collect();
            class[lookup(&pairs, top, &h)]
        })
        .collect();
    PlusConstruction { result, unit, representatives }
}

#[derive(Clone, Debug)]
pub struct Sheafification {
    pub sheaf: MSet,
    /// The unit `A -> A⁺⁺`.
    pub unit: Vec<usize>,
}

/// `(A⁺)⁺` with the composite unit.
pub fn sheafify(site: &Site, a: &MSet, f: &Family) -> Sheafification {
    let first = plus_construction(site, a, f);
    let second = plus_construction(site, &first.result, f);
    let unit = first.unit.iter().map(|&x| second.unit[x]).collect();
    Sheafification { sheaf: second.result.renamed(format!("a({})", a.name())), unit }
}

/// The result is a sheaf, the unit is equivariant, and every map from `A`
/// to a sheaf among `targets` factors uniquely through the unit.
pub fn verify_sheafification(site: &Site, a: &MSet, f: &Family, targets: &[MSet]) -> CheckResult {
    let m = site.monoid();
    let s = sheafify(site, a, f);
    let label = || format!("{} over {} for {}", a.name(), m.name(), site.format_family(f));
    ensure(is_sheaf(site, &s.sheaf, f), "sheafify-is-sheaf", label)?;
    a.check_equivariant(&s.sheaf, &s.unit).map_err(|e| CheckFailure::new("sheafify-unit", e.to_string()))?;
    for t in targets.iter().filter(|t| is_sheaf(site, t, f)) {
        let mut composed: Vec<Vec<usize>> = s.sheaf.hom_maps(t).iter().map(|h| s.unit.iter().map(|&x| h[x]).collect()).collect();
        composed.sort();
        let expected = a.hom_maps(t);
        ensure(composed == expected, "sheafify-universal", || format!("{} into {}", label(), t.name()))?;
    }
    if is_sheaf(site, a, f) {
        ensure(crate::mset::is_bijection(&s.unit, s.sheaf.size()), "sheafify-unit-iso", label)?;
    }
    Ok(())
}

/// The two sheaf conditions agree on `objects` for every topology.
pub fn verify_sheaf_conditions_agree(site: &Site, max_k: usize) -> CheckResult {
    let m = site.monoid();
    let objects = sheaf_test_objects(m, max_k);
    for f in site.enumerate_topologies() {
        let j = crate::lawvere::lt_operator(site, &f)?;
        for a in &objects {
            let by_ideals = is_sheaf(site, a, &f);
            let by_density = is_j_sheaf(site, &j, a, &objects);
            ensure(by_ideals == by_density, "sheaf-conditions-agree", || {
                format!("{} over {} for {}: {} vs {}", a.name(), m.name(), site.format_family(&f), by_ideals, by_density)
            })?;
        }
    }
    Ok(())
}

/// Sheaves for `ϒ(D(f))` are exactly the M-sets on which `f` acts
/// bijectively.
pub fn verify_localizing_sheaves(site: &Site, max_k: usize) -> CheckResult {
    let m = site.monoid();
    let objects = enumerate_msets_up_to(m, max_k);
    for f in m.elements() {
        let fam = site.localizing_topology(f);
        for a in &objects {
            ensure(is_sheaf(site, a, &fam) == a.acts_bijectively(f), "localizing-sheaves", || {
                format!("{} over {}, f = {}", a.name(), m.name(), m.element_name(f))
            })?;
        }
    }
    Ok(())
}

/// `sheafify(A, ϒ(D(f))) ≅ A_f` over `M`, for every `f` and every M-set
/// on at most `max_k` points.
pub fn verify_sheafify_is_localization(site: &Site, max_k: usize) -> CheckResult {
    let m = site.monoid();
    let objects = enumerate_msets_up_to(m, max_k);
    for f in m.elements() {
        let fam = site.localizing_topology(f);
        let loc = crate::localization::LocalizedMonoid::at_element(m, f);
        for a in &objects {
            let s = sheafify(site, a, &fam);
            let expected = crate::localization::LocalizedMSet::new(a, &loc).result().restrict_scalars(loc.loc_map());
            ensure(s.sheaf.is_isomorphic(&expected), "sheafify-is-localization", || {
                format!("{} over {}, f = {}", a.name(), m.name(), m.element_name(f))
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::localization::localize_mset;

    #[test]
    fn sheaf_examples() {
        let b = corpus::b();
        let site = Site::new(&b);
        let top = site.omega().top();
        let minimal = site.family([top]);
        let all = site.family(0..site.ideal_count());
        let d0 = site.localizing_topology(1);
        assert_eq!(d0, site.family([1, top]));
        for a in enumerate_msets_up_to(&b, 4) {
            assert!(is_sheaf(&site, &a, &minimal));
            assert_eq!(is_sheaf(&site, &a, &all), a.size() == 1, "{a}");
            assert_eq!(is_sheaf(&site, &a, &d0), a.acts_bijectively(1), "{a}");
        }
    }

    #[test]
    fn sheafify_examples() {
        let b = corpus::b();
        let site = Site::new(&b);
        let reg = MSet::regular(&b);
        let d0 = site.localizing_topology(1);
        let s = sheafify(&site, &reg, &d0);
        assert_eq!(s.sheaf.size(), 1);
        let all = site.family(0..site.ideal_count());
        for a in [reg.clone(), MSet::empty(&b), MSet::trivial_action(&b, 3)] {
            assert_eq!(sheafify(&site, &a, &all).sheaf.size(), 1);
        }
        let minimal = site.family([site.omega().top()]);
        let s = sheafify(&site, &reg, &minimal);
        assert_eq!(s.unit, vec![0, 1]);
    }

    #[test]
    fn sheafify_matches_localization() {
        for m in corpus::monoids().into_iter().filter(|m| m.size() <= 4) {
            let site = Site::new(&m);
            for a in enumerate_msets_up_to(&m, 3) {
                for f in m.elements() {
                    let s = sheafify(&site, &a, &site.localizing_topology(f));
                    let loc = crate::localization::LocalizedMonoid::at_element(&m, f);
                    let la = localize_mset(&a, loc.denominators());
                    let expected = la.result().restrict_scalars(loc.loc_map());
                    assert!(s.sheaf.is_isomorphic(&expected), "{} over {} at {}", a, m.name(), f);
                }
            }
        }
    }

    #[test]
    fn sheafification_universal() {
        for m in [corpus::t(), corpus::b(), corpus::e(), corpus::c2(), corpus::n2()] {
            let site = Site::new(&m);
            let targets = sheaf_test_objects(&m, 3);
            for f in site.enumerate_topologies() {
                for a in &targets {
                    verify_sheafification(&site, a, &f, &targets).unwrap();
                }
            }
        }
    }

    #[test]
    fn conditions_agree() {
        for m in [corpus::t(), corpus::b(), corpus::e(), corpus::c2(), corpus::n2(), corpus::f3()] {
            verify_sheaf_conditions_agree(&Site::new(&m), 3).unwrap();
        }
    }

    #[test]
    fn localizing_sheaves() {
        for m in corpus::monoids().into_iter().filter(|m| m.size() <= 4) {
            verify_localizing_sheaves(&Site::new(&m), 3).unwrap();
        }
    }
}
