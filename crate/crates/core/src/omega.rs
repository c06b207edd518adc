//! The subobject classifier `Ω` of M-sets: the set of ideals acted on by
//! ideal quotients, with the point `t = M`.

use crate::bitset::ElemSet;
use crate::check::{ensure, CheckFailure, CheckResult};
use crate::ideals::{enumerate_ideals, format_set, ideal_index, ideal_quotient, Ideal};
use crate::monoid::FiniteCommMonoid;
use crate::mset::{MSet, MSetError};

#[derive(Clone, Debug)]
pub struct Omega {
    ideals: Vec<Ideal>,
    mset: MSet,
    top: usize,
}

impl Omega {
    pub fn new(m: &FiniteCommMonoid) -> Self {
        let ideals = enumerate_ideals(m);
        let rows: Vec<Vec<usize>> = ideals
            .iter()
            .map(|&a| m.elements().map(|x| ideal_index(&ideals, ideal_quotient(m, a, x)).expect("quotient is an ideal")).collect())
            .collect();
        let mset = MSet::new(format!("Omega({})", m.name()), m, &rows).expect("ideal quotients form an action");
        let top = ideals.len() - 1;
        debug_assert_eq!(ideals[top], m.all());
        Omega { ideals, mset, top }
    }

    pub fn monoid(&self) -> &FiniteCommMonoid {
        self.mset.monoid()
    }

    pub fn mset(&self) -> &MSet {
        &self.mset
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn size(&self) -> usize {
        self.ideals.len()
    }

    pub fn ideal(&self, i: usize) -> Ideal {
        self.ideals[i]
    }

    pub fn index_of(&self, a: Ideal) -> Option<usize> {
        ideal_index(&self.ideals, a)
    }

    /// Index of `t = M`, the last ideal in canonical order.
    pub fn top(&self) -> usize {
        self.top
    }

    /// Index of `∅`.
    pub fn bottom(&self) -> usize {
        0
    }

    /// `∧`: intersection of ideals, as a table over index pairs.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.index_of(self.ideals[i].intersection(self.ideals[j])).expect("intersection is an ideal")
    }
}

pub fn omega(m: &FiniteCommMonoid) -> Omega {
    Omega::new(m)
}

/// `χ_B(a) = {m : a·m ∈ B}` as indices into `Ω`.
pub fn characteristic_map(omega: &Omega, a: &MSet, sub: ElemSet) -> Result<Vec<usize>, MSetError> {
    let m = a.monoid();
    if let Some((x, y)) = sub.iter().flat_map(|x| m.elements().map(move |y| (x, y))).find(|&(x, y)| !sub.contains(a.act(x, y))) {
        return Err(MSetError::NotSubMSet { a: x, m: y });
    }
    Ok((0..a.size())
        .map(|x| {
            let chi: ElemSet = m.elements().filter(|&y| sub.contains(a.act(x, y))).collect();
            omega.index_of(chi).expect("χ values are ideals")
        })
        .collect())
}

/// The pullback of `t` along `χ_B` is `B`, and `χ_B` is the only map
/// `A -> Ω` with that pullback.
pub fn verify_classifier(omega: &Omega, a: &MSet, sub: ElemSet) -> CheckResult {
    let m = a.monoid();
    let chi = characteristic_map(omega, a, sub).map_err(|e| CheckFailure::new("classifier-input", e.to_string()))?;
    a.check_equivariant(omega.mset(), &chi).map_err(|e| CheckFailure::new("characteristic-map-equivariant", e.to_string()))?;
    let pulled: ElemSet = (0..a.size()).filter(|&x| chi[x] == omega.top()).collect();
    ensure(pulled == sub, "classifier-pullback", || format!("{} in {}: pullback {:?} != {:?}", a.name(), m.name(), pulled, sub))?;
    let top = omega.top();
    let homs = a.hom_maps_filtered(omega.mset(), |x, w| (w == top) == sub.contains(x));
    ensure(homs == vec![chi.clone()], "classifier-uniqueness", || {
        format!(
            "{} over {}, sub {:?}: {} maps with this pullback ({:?})",
            a.name(),
            m.name(),
            sub,
            homs.len(),
            homs.iter().map(|h| h.iter().map(|&i| format_set(m, omega.ideal(i))).collect::<Vec<_>>()).collect::<Vec<_>>()
        )
    })
}

/// Checks the action laws of `Ω`, that `t` is fixed, and `χ_B` restricted to `B` is `t`.
pub fn verify_omega(omega: &Omega) -> CheckResult {
    let m = omega.monoid();
    omega.mset().check_laws().map_err(|e| CheckFailure::new("omega-action", e.to_string()))?;
    for x in m.elements() {
        ensure(omega.mset().act(omega.top(), x) == omega.top(), "omega-top-fixed", || m.element_name(x).to_string())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::mset::enumerate_msets_up_to;

    #[test]
    fn omega_examples() {
        let t = omega(&corpus::t());
        assert_eq!(t.size(), 2);
        let b = corpus::b();
        let ob = omega(&b);
        assert_eq!(ob.size(), 3);
        let zero = ob.index_of(ElemSet::singleton(1)).unwrap();
        assert_eq!(ob.mset().act(zero, 1), ob.top());
        let f3 = corpus::f3();
        let of = omega(&f3);
        let a = of.index_of([2, 3].into_iter().collect()).unwrap();
        assert_eq!(of.ideal(of.mset().act(a, 1)), [1, 2, 3].into_iter().collect());
    }

    #[test]
    fn characteristic_examples() {
        let b = corpus::b();
        let ob = omega(&b);
        let reg = MSet::regular(&b);
        let chi = characteristic_map(&ob, &reg, ElemSet::singleton(1)).unwrap();
        assert_eq!(ob.ideal(chi[0]), ElemSet::singleton(1));
        assert_eq!(chi[1], ob.top());
        assert_eq!(characteristic_map(&ob, &reg, ElemSet::EMPTY).unwrap(), vec![0, 0]);
        assert_eq!(characteristic_map(&ob, &reg, reg.all()).unwrap(), vec![ob.top(); 2]);
        assert_eq!(characteristic_map(&ob, &reg, ElemSet::singleton(0)), Err(MSetError::NotSubMSet { a: 0, m: 1 }));
    }

    #[test]
    fn classifier_on_small_msets() {
        for m in [corpus::t(), corpus::b(), corpus::e(), corpus::c2()] {
            let om = omega(&m);
            verify_omega(&om).unwrap();
            for a in enumerate_msets_up_to(&m, 3) {
                for sub in a.sub_msets() {
                    verify_classifier(&om, &a, sub).unwrap();
                }
            }
            let top = ElemSet::singleton(om.top());
            verify_classifier(&om, om.mset(), top).unwrap();
        }
    }
}
