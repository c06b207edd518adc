//! Lawvere–Tierney operators on `Ω` and density of subobjects.
//!
//! An operator is an endomap `j` of the ideal list. The meet on `Ω` is
//! ideal intersection; [`meet_by_classifier`] recomputes it as the
//! characteristic map of `(t, t)` in `Ω × Ω`.

use crate::bitset::ElemSet;
use crate::check::{ensure, CheckFailure, CheckResult};
use crate::ideals::format_set;
use crate::mset::{MSet, MSetError};
use crate::omega::characteristic_map;
use crate::topology::{Family, Site};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LtOperator {
    j: Vec<usize>,
}

impl LtOperator {
    /// Wraps a raw map after checking the axioms.
    pub fn new(site: &Site, j: Vec<usize>) -> Result<Self, CheckFailure> {
        check_lt_axioms(site, &j)?;
        Ok(LtOperator { j })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.j[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.j
    }

    /// `{a : j(a) = M}`.
    pub fn topology(&self, site: &Site) -> Family {
        let top = site.omega().top();
        site.family((0..self.j.len()).filter(|&i| self.j[i] == top))
    }
}

/// `j = χ_F`: `j(a) = {m : (a:m) ∈ F}`, checked against the axioms and the
/// round trip `F = {a : j(a) = M}`.
pub fn lt_operator(site: &Site, f: &Family) -> Result<LtOperator, CheckFailure> {
    site.check_gtopology(f)?;
    let m = site.monoid();
    let j = (0..site.ideal_count())
        .map(|a| {
            let chi: ElemSet = m.elements().filter(|&x| f.contains(site.quotient(a, x))).collect();
            site.omega().index_of(chi).expect("χ_F(a) is an ideal")
        })
        .collect();
    let op = LtOperator::new(site, j)?;
    ensure(op.topology(site) == *f, "lt-round-trip", || site.format_family(f))?;
    Ok(op)
}

/// Equivariance, `j(t) = t`, `j∘j = j` and `j(a ∧ b) = j(a) ∧ j(b)`.
pub fn check_lt_axioms(site: &Site, j: &[usize]) -> CheckResult {
    let omega = site.omega();
    let m = site.monoid();
    let n = site.ideal_count();
    let show = |i: usize| format_set(m, site.ideal(i));
    ensure(j.len() == n && j.iter().all(|&v| v < n), "lt-shape", || format!("{j:?}"))?;
    omega.mset().check_equivariant(omega.mset(), j).map_err(|e| CheckFailure::new("lt-equivariant", e.to_string()))?;
    ensure(j[omega.top()] == omega.top(), "lt-top", || show(j[omega.top()]))?;
    for a in 0..n {
        ensure(j[j[a]] == j[a], "lt-idempotent", || show(a))?;
        for b in 0..n {
            ensure(j[omega.meet(a, b)] == omega.meet(j[a], j[b]), "lt-meet", || format!("{} and {}", show(a), show(b)))?;
        }
    }
    Ok(())
}

/// `∧ : Ω × Ω -> Ω` as the characteristic map of the subobject
/// `{(t, t)}`: `χ(a, b) = {m : (a, b)·m = (t, t)}`, indexed `[a][b]`.
/// Evaluated pointwise since `Ω × Ω` can exceed the subset width.
pub fn meet_by_classifier(site: &Site) -> Vec<Vec<usize>> {
    let omega = site.omega();
    let m = site.monoid();
    let top = omega.top();
    let n = omega.size();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let chi: ElemSet = m.elements().filter(|&x| site.quotient(a, x) == top && site.quotient(b, x) == top).collect();
                    omega.index_of(chi).expect("χ values are ideals")
                })
                .collect()
        })
        .collect()
}

pub fn verify_meet(site: &Site) -> CheckResult {
    let omega = site.omega();
    for (a, row) in meet_by_classifier(site).iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            ensure(v == omega.meet(a, b), "meet-is-intersection", || {
                let m = site.monoid();
                format!("{} ∧ {}", format_set(m, site.ideal(a)), format_set(m, site.ideal(b)))
            })?;
        }
    }
    Ok(())
}

/// Every equivariant endomap of `Ω` satisfying the axioms, in lexicographic
/// order.
pub fn lt_operators_by_scan(site: &Site) -> Vec<LtOperator> {
    let top = site.omega().top();
    let om = site.omega().mset();
    om.hom_maps_filtered(om, |a, v| a != top || v == top)
        .into_iter()
        .filter(|j| check_lt_axioms(site, j).is_ok())
        .map(|j| LtOperator { j })
        .collect()
}

/// `F ↦ χ_F` is a bijection from topologies onto operators found by the scan.
pub fn verify_lt_correspondence(site: &Site) -> CheckResult {
    let name = site.monoid().name().to_string();
    let mut from_topologies = Vec::new();
    for f in site.enumerate_topologies() {
        from_topologies.push(lt_operator(site, &f)?);
    }
    let count = from_topologies.len();
    from_topologies.sort();
    from_topologies.dedup();
    ensure(from_topologies.len() == count, "lt-injective", || name.clone())?;
    let scanned = lt_operators_by_scan(site);
    ensure(scanned == from_topologies, "lt-surjective", || format!("{name}: {} operators, {} topologies", scanned.len(), count))
}

/// `B ⊆ A` is dense for `j` when `j(χ_B(a)) = M` for every `a`.
pub fn is_dense(site: &Site, j: &LtOperator, a: &MSet, sub: ElemSet) -> Result<bool, MSetError> {
    let chi = characteristic_map(site.omega(), a, sub)?;
    let top = site.omega().top();
    Ok(chi.iter().all(|&c| j.apply(c) == top))
}
