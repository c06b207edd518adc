//! Finite posets, finite lattices and Birkhoff's recovery of a poset from
//! its lattice of down-sets.

use thiserror::Error;

use crate::bitset::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive at ({0}, {1}, {2})")]
    NotTransitive(usize, usize, usize),
    #[error("elements {0} and {1} have no {2}")]
    NotLattice(usize, usize, &'static str),
    #[error("distributivity fails at ({0}, {1}, {2})")]
    NotDistributive(usize, usize, usize),
}

/// A finite partial order on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    n: usize,
    leq: Vec<bool>,
}

impl FinitePoset {
    pub fn new(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, PosetError> {
        let table: Vec<bool> = (0..n * n).map(|i| leq(i / n.max(1), i % n.max(1))).collect();
        let p = FinitePoset { n, leq: table };
        for x in 0..n {
            if !p.leq(x, x) {
                return Err(PosetError::NotReflexive(x));
            }
            for y in 0..n {
                if x != y && p.leq(x, y) && p.leq(y, x) {
                    return Err(PosetError::NotAntisymmetric(x, y));
                }
                for z in 0..n {
                    if p.leq(x, y) && p.leq(y, z) && !p.leq(x, z) {
                        return Err(PosetError::NotTransitive(x, y, z));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Inclusion order on a list of sets.
    pub fn of_sets(sets: &[ElemSet]) -> Result<Self, PosetError> {
        FinitePoset::new(sets.len(), |x, y| sets[x].is_subset(sets[y]))
    }

    pub fn antichain(n: usize) -> Self {
        FinitePoset::new(n, |x, y| x == y).expect("discrete order")
    }

    pub fn chain(n: usize) -> Self {
        FinitePoset::new(n, |x, y| x <= y).expect("linear order")
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.n + y]
    }

    pub fn is_down_set(&self, s: ElemSet) -> bool {
        s.iter().all(|y| (0..self.n).all(|x| !self.leq(x, y) || s.contains(x)))
    }

    pub fn is_up_set(&self, s: ElemSet) -> bool {
        s.iter().all(|x| (0..self.n).all(|y| !self.leq(x, y) || s.contains(y)))
    }

    pub fn down_closure(&self, s: ElemSet) -> ElemSet {
        (0..self.n).filter(|&x| s.iter().any(|y| self.leq(x, y))).collect()
    }

    pub fn up_closure(&self, s: ElemSet) -> ElemSet {
        (0..self.n).filter(|&y| s.iter().any(|x| self.leq(x, y))).collect()
    }

    /// All down-closed subsets in canonical order, grown element by element
    /// along a linear extension so no non-down-set is visited.
    pub fn down_sets(&self) -> Vec<ElemSet> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        self.grow_down_sets(&order, 0, ElemSet::EMPTY, &mut out);
        out.sort_by(ElemSet::canonical_cmp);
        out
    }

    fn grow_down_sets(&self, order: &[usize], i: usize, acc: ElemSet, out: &mut Vec<ElemSet>) {
        if i == order.len() {
            out.push(acc);
            return;
        }
        let x = order[i];
        // skip x: then nothing above x may be added later, enforced below
        self.grow_down_sets(order, i + 1, acc, out);
        let below_in = (0..self.n).all(|y| y == x || !self.leq(y, x) || acc.contains(y));
        if below_in {
            self.grow_down_sets(order, i + 1, acc.with(x), out);
        }
    }

    /// Elements sorted so that `x <= y` implies `x` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (0..self.n).filter(|&y| self.leq(y, x)).count());
        order
    }

    /// An order isomorphism `self -> other`, if one exists.
    pub fn isomorphism_to(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        let sig = |p: &FinitePoset, x: usize| {
            let below = (0..p.n).filter(|&y| p.leq(y, x)).count();
            let above = (0..p.n).filter(|&y| p.leq(x, y)).count();
            (below, above)
        };
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];

        fn go(
            a: &FinitePoset,
            b: &FinitePoset,
            x: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            sig: &dyn Fn(&FinitePoset, usize) -> (usize, usize),
        ) -> bool {
            if x == a.n {
                return true;
            }
            for y in 0..b.n {
                if used[y] || sig(a, x) != sig(b, y) {
                    continue;
                }
                let ok = (0..x).all(|z| a.leq(z, x) == b.leq(map[z], y) && a.leq(x, z) == b.leq(y, map[z]));
                if !ok {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if go(a, b, x + 1, map, used, sig) {
                    return true;
                }
                used[y] = false;
            }
            false
        }

        go(self, other, 0, &mut map, &mut used, &sig).then_some(map)
    }

    pub fn is_isomorphic(&self, other: &FinitePoset) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

/// A finite lattice with explicit meet and join tables.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    order: FinitePoset,
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl FiniteLattice {
    pub fn from_poset(order: FinitePoset) -> Result<Self, PosetError> {
        let n = order.size();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&z| order.leq(z, x) && order.leq(z, y)).collect();
                let glb =
                    lower.iter().copied().find(|&z| lower.iter().all(|&w| order.leq(w, z))).ok_or(PosetError::NotLattice(x, y, "meet"))?;
                let upper: Vec<usize> = (0..n).filter(|&z| order.leq(x, z) && order.leq(y, z)).collect();
                let lub =
                    upper.iter().copied().find(|&z| upper.iter().all(|&w| order.leq(z, w))).ok_or(PosetError::NotLattice(x, y, "join"))?;
                meet[x * n + y] = glb;
                join[x * n + y] = lub;
            }
        }
        Ok(FiniteLattice { order, meet, join })
    }

    /// A family of sets ordered by inclusion.
    pub fn of_sets(sets: &[ElemSet]) -> Result<Self, PosetError> {
        FiniteLattice::from_poset(FinitePoset::of_sets(sets)?)
    }

    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn size(&self) -> usize {
        self.order.size()
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size() + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size() + y]
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.size()).find(|&x| (0..self.size()).all(|y| self.order.leq(x, y)))
    }

    /// Exhaustive check of `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`.
    pub fn check_distributive(&self) -> Result<(), PosetError> {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                        return Err(PosetError::NotDistributive(x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    /// Join-irreducible elements other than the bottom, in index order.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let n = self.size();
        let bottom = self.bottom();
        (0..n)
            .filter(|&x| Some(x) != bottom)
            .filter(|&x| (0..n).all(|y| (0..n).all(|z| self.join(y, z) != x || y == x || z == x)))
            .collect()
    }
}

/// The poset of join-irreducibles of a finite distributive lattice.
pub fn birkhoff_points(lattice: &FiniteLattice) -> Result<(Vec<usize>, FinitePoset), PosetError> {
    lattice.check_distributive()?;
    let irr = lattice.join_irreducibles();
    let poset = FinitePoset::new(irr.len(), |x, y| lattice.order().leq(irr[x], irr[y]))?;
    Ok((irr, poset))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn down_sets_match_subset_scan() {
        // the "N" poset: 0 < 2, 1 < 2, 1 < 3
        let p = FinitePoset::new(4, |x, y| x == y || matches!((x, y), (0, 2) | (1, 2) | (1, 3))).unwrap();
        let mut brute: Vec<ElemSet> = ElemSet::all_subsets(4).filter(|&s| p.is_down_set(s)).collect();
        brute.sort_by(ElemSet::canonical_cmp);
        assert_eq!(p.down_sets(), brute);
        assert_eq!(FinitePoset::chain(3).down_sets().len(), 4);
        assert_eq!(FinitePoset::antichain(3).down_sets().len(), 8);
    }

    #[test]
    fn invalid_relations_are_rejected() {
        assert_eq!(FinitePoset::new(2, |_, _| true), Err(PosetError::NotAntisymmetric(0, 1)));
        assert_eq!(FinitePoset::new(1, |_, _| false), Err(PosetError::NotReflexive(0)));
        let r = FinitePoset::new(3, |x, y| x == y || (x, y) == (0, 1) || (x, y) == (1, 2));
        assert_eq!(r, Err(PosetError::NotTransitive(0, 1, 2)));
    }

    #[test]
    fn birkhoff_small_cases() {
        let two = FiniteLattice::from_poset(FinitePoset::chain(2)).unwrap();
        assert_eq!(birkhoff_points(&two).unwrap().1.size(), 1);
        let sets: Vec<ElemSet> = ElemSet::all_subsets(2).collect();
        let pow = FiniteLattice::of_sets(&sets).unwrap();
        let (_, pts) = birkhoff_points(&pow).unwrap();
        assert!(pts.is_isomorphic(&FinitePoset::antichain(2)));
    }

    #[test]
    fn diamond_is_not_distributive() {
        // M3: bottom 0, atoms 1 2 3, top 4
        let m3 = FinitePoset::new(5, |x, y| x == y || x == 0 || y == 4).unwrap();
        let l = FiniteLattice::from_poset(m3).unwrap();
        assert!(matches!(birkhoff_points(&l), Err(PosetError::NotDistributive(..))));
    }

    #[test]
    fn birkhoff_round_trip_on_n_poset() {
        let p = FinitePoset::new(4, |x, y| x == y || matches!((x, y), (0, 2) | (1, 2) | (1, 3))).unwrap();
        let l = FiniteLattice::of_sets(&p.down_sets()).unwrap();
        let (_, q) = birkhoff_points(&l).unwrap();
        assert!(q.is_isomorphic(&p));
    }
}
