//! Finite M-sets with a right action, equivariant maps, sub-M-sets and
//! enumeration of all M-sets of a given size up to isomorphism.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::ideals::Ideal;
use crate::monoid::{Elem, FiniteCommMonoid, MonoidHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MSetError {
    #[error("row {row} has {len} entries, the monoid has {expected} elements")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("{a}·{m} = {value} is out of range")]
    OutOfRange { a: usize, m: Elem, value: usize },
    #[error("{a}·1 != {a}")]
    IdentityLaw { a: usize },
    #[error("({a}·{m})·{n} != {a}·({m}{n})")]
    Compatibility { a: usize, m: Elem, n: Elem },
    #[error("subset is not closed: {a}·{m} leaves it")]
    NotSubMSet { a: usize, m: Elem },
    #[error("map is not equivariant at {a}·{m}")]
    NotEquivariant { a: usize, m: Elem },
    #[error("M-sets are over different monoids")]
    MonoidMismatch,
    #[error("map has {got} entries, expected {expected}")]
    Length { expected: usize, got: usize },
}

/// A finite set with a right action of a finite commutative monoid.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MSet {
    name: String,
    monoid: FiniteCommMonoid,
    k: usize,
    act: Vec<usize>,
}

impl MSet {
    /// `rows[a][m] = a·m`; checks both action laws exhaustively.
    pub fn new(name: impl Into<String>, monoid: &FiniteCommMonoid, rows: &[Vec<usize>]) -> Result<Self, MSetError> {
        let n = monoid.size();
        let k = rows.len();
        let mut act = Vec::with_capacity(k * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MSetError::RaggedRow { row: a, len: row.len(), expected: n });
            }
            if let Some((m, &value)) = row.iter().enumerate().find(|(_, &v)| v >= k) {
                return Err(MSetError::OutOfRange { a, m, value });
            }
            act.extend_from_slice(row);
        }
        let s = MSet { name: name.into(), monoid: monoid.clone(), k, act };
        s.check_laws()?;
        Ok(s)
    }

    fn from_raw(name: impl Into<String>, monoid: &FiniteCommMonoid, k: usize, act: Vec<usize>) -> Self {
        let s = MSet { name: name.into(), monoid: monoid.clone(), k, act };
        debug_assert_eq!(s.check_laws(), Ok(()));
        s
    }

    pub fn check_laws(&self) -> Result<(), MSetError> {
        let m = &self.monoid;
        for a in 0..self.k {
            if self.act(a, m.identity()) != a {
                return Err(MSetError::IdentityLaw { a });
            }
            for x in m.elements() {
                for y in m.elements() {
                    if self.act(self.act(a, x), y) != self.act(a, m.mul(x, y)) {
                        return Err(MSetError::Compatibility { a, m: x, n: y });
                    }
                }
            }
        }
        Ok(())
    }

    /// `M` acting on itself.
    pub fn regular(m: &FiniteCommMonoid) -> Self {
        let act = m.elements().flat_map(|x| m.elements().map(move |y| m.mul(x, y))).collect();
        MSet::from_raw(format!("{}-regular", m.name()), m, m.size(), act)
    }

    /// The one-point M-set.
    pub fn terminal(m: &FiniteCommMonoid) -> Self {
        MSet::from_raw("1", m, 1, vec![0; m.size()])
    }

    pub fn empty(m: &FiniteCommMonoid) -> Self {
        MSet::from_raw("0", m, 0, Vec::new())
    }

    /// `k` points, every element acting as the identity.
    pub fn trivial_action(m: &FiniteCommMonoid, k: usize) -> Self {
        let act = (0..k).flat_map(|a| std::iter::repeat_n(a, m.size())).collect();
        MSet::from_raw(format!("triv{k}"), m, k, act)
    }

    /// An ideal as an M-set, with its inclusion into `M`. Carrier index `i`
    /// is the `i`-th smallest member.
    pub fn from_ideal(m: &FiniteCommMonoid, ideal: Ideal) -> (Self, Vec<Elem>) {
        let members: Vec<Elem> = ideal.iter().collect();
        let pos = |x: Elem| members.iter().position(|&y| y == x).expect("ideal is closed");
        let act = members.iter().flat_map(|&x| m.elements().map(move |y| (x, y))).map(|(x, y)| pos(m.mul(x, y))).collect();
        (MSet::from_raw("ideal", m, members.len(), act), members)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn monoid(&self) -> &FiniteCommMonoid {
        &self.monoid
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn act(&self, a: usize, m: Elem) -> usize {
        self.act[a * self.monoid.size() + m]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.k).map(|a| self.monoid.elements().map(|m| self.act(a, m)).collect()).collect()
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.k)
    }

    /// `aM`.
    pub fn orbit(&self, a: usize) -> ElemSet {
        self.monoid.elements().map(|m| self.act(a, m)).collect()
    }

    /// Elements fixed by `m`.
    pub fn fixed_points(&self, m: Elem) -> ElemSet {
        (0..self.k).filter(|&a| self.act(a, m) == a).collect()
    }

    /// Whether `a ↦ a·f` is a bijection of the carrier.
    pub fn acts_bijectively(&self, f: Elem) -> bool {
        let mut hit = vec![false; self.k];
        (0..self.k).all(|a| !std::mem::replace(&mut hit[self.act(a, f)], true))
    }

    /// A generating set: each element not yet reached starts a new orbit.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered = vec![false; self.k];
        for a in 0..self.k {
            if !covered[a] {
                gens.push(a);
                for m in self.monoid.elements() {
                    covered[self.act(a, m)] = true;
                }
            }
        }
        gens
    }

    pub fn is_sub_mset(&self, set: ElemSet) -> bool {
        set.iter().all(|a| self.monoid.elements().all(|m| set.contains(self.act(a, m))))
    }

    /// Every action-closed subset, including `∅` and the carrier, in
    /// canonical order.
    pub fn sub_msets(&self) -> Vec<ElemSet> {
        let mut out: Vec<ElemSet> = ElemSet::all_subsets(self.k).filter(|&s| self.is_sub_mset(s)).collect();
        out.sort_by(ElemSet::canonical_cmp);
        out
    }

    /// The sub-M-set on `set` with its inclusion map.
    pub fn restrict_to(&self, set: ElemSet) -> Result<(MSet, Vec<usize>), MSetError> {
        if let Some((a, m)) =
            set.iter().flat_map(|a| self.monoid.elements().map(move |m| (a, m))).find(|&(a, m)| !set.contains(self.act(a, m)))
        {
            return Err(MSetError::NotSubMSet { a, m });
        }
        let members: Vec<usize> = set.iter().collect();
        let pos = |b: usize| members.iter().position(|&c| c == b).expect("closed");
        let act = members.iter().flat_map(|&a| self.monoid.elements().map(move |m| (a, m))).map(|(a, m)| pos(self.act(a, m))).collect();
        Ok((MSet::from_raw(format!("{}|sub", self.name), &self.monoid, members.len(), act), members))
    }

    /// Carrier `a * |other| + b` for the pair `(a, b)`.
    pub fn product(&self, other: &MSet) -> MSet {
        assert_eq!(self.monoid, other.monoid);
        let (n, l) = (self.monoid.size(), other.k);
        let act =
            (0..self.k * l).flat_map(|p| (0..n).map(move |m| (p, m))).map(|(p, m)| self.act(p / l, m) * l + other.act(p % l, m)).collect();
        MSet::from_raw(format!("{}x{}", self.name, other.name), &self.monoid, self.k * l, act)
    }

    /// This set viewed over `f.source()` through `f`.
    pub fn restrict_scalars(&self, f: &MonoidHom) -> MSet {
        assert_eq!(f.target(), &self.monoid);
        let src = f.source();
        let act = (0..self.k).flat_map(|a| src.elements().map(move |m| (a, m))).map(|(a, m)| self.act(a, f.apply(m))).collect();
        MSet::from_raw(self.name.clone(), src, self.k, act)
    }

    /// The same action with carrier relabelled by `perm` (old index to new).
    pub fn relabel(&self, perm: &[usize]) -> MSet {
        let n = self.monoid.size();
        let mut act = vec![0; self.k * n];
        for a in 0..self.k {
            for m in 0..n {
                act[perm[a] * n + m] = perm[self.act(a, m)];
            }
        }
        MSet::from_raw(self.name.clone(), &self.monoid, self.k, act)
    }

    /// Checks `map(a·m) = map(a)·m`.
    pub fn check_equivariant(&self, target: &MSet, map: &[usize]) -> Result<(), MSetError> {
        if self.monoid != target.monoid {
            return Err(MSetError::MonoidMismatch);
        }
        if map.len() != self.k {
            return Err(MSetError::Length { expected: self.k, got: map.len() });
        }
        for a in 0..self.k {
            if map[a] >= target.k {
                return Err(MSetError::OutOfRange { a, m: self.monoid.identity(), value: map[a] });
            }
            for m in self.monoid.elements() {
                if map[self.act(a, m)] != target.act(map[a], m) {
                    return Err(MSetError::NotEquivariant { a, m });
                }
            }
        }
        Ok(())
    }

    /// Every equivariant map `self -> target`, as raw maps in lexicographic
    /// order.
    pub fn hom_maps(&self, target: &MSet) -> Vec<Vec<usize>> {
        self.hom_maps_filtered(target, |_, _| true)
    }

    /// Equivariant maps whose values satisfy `allowed(a, map[a])` everywhere.
    /// The filter prunes the search, so it is cheaper than filtering after.
    pub fn hom_maps_filtered(&self, target: &MSet, allowed: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
        assert_eq!(self.monoid, target.monoid, "hom between M-sets over different monoids");
        let gens = self.generators();
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; self.k];
        self.hom_search(target, &gens, &allowed, &mut map, &mut out);
        out.sort();
        out
    }

    fn hom_search(
        &self,
        target: &MSet,
        gens: &[usize],
        allowed: &dyn Fn(usize, usize) -> bool,
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some((&g, rest)) = gens.split_first() else {
            out.push(map.clone());
            return;
        };
        'image: for b in 0..target.k {
            let mut assigned = Vec::new();
            for m in self.monoid.elements() {
                let a = self.act(g, m);
                let v = target.act(b, m);
                if map[a] == usize::MAX {
                    if !allowed(a, v) {
                        for &x in &assigned {
                            map[x] = usize::MAX;
                        }
                        continue 'image;
                    }
                    map[a] = v;
                    assigned.push(a);
                } else if map[a] != v {
                    for &x in &assigned {
                        map[x] = usize::MAX;
                    }
                    continue 'image;
                }
            }
            self.hom_search(target, rest, allowed, map, out);
            for &x in &assigned {
                map[x] = usize::MAX;
            }
        }
    }

    pub fn hom_set(&self, target: &MSet) -> Vec<MSetHom> {
        self.hom_maps(target).into_iter().map(|map| MSetHom { source: self.clone(), target: target.clone(), map }).collect()
    }

    /// An equivariant bijection `self -> other`, if any.
    pub fn isomorphism_to(&self, other: &MSet) -> Option<Vec<usize>> {
        if self.k != other.k || self.monoid != other.monoid {
            return None;
        }
        self.hom_maps(other).into_iter().find(|map| is_bijection(map, other.k))
    }

    pub fn is_isomorphic(&self, other: &MSet) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Lexicographically least action table over all relabellings; equal
    /// exactly for isomorphic M-sets.
    pub fn canonical_form(&self) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        for perm in permutations(self.k) {
            let t = self.relabel(&perm).act;
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
        best.unwrap_or_default()
    }
}

impl fmt::Debug for MSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}: {:?}", self.name, self.monoid.name(), self.rows())
    }
}

impl fmt::Display for MSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mset {} over {} ({} elements)", self.name, self.monoid.name(), self.k)?;
        for a in 0..self.k {
            let row: Vec<String> = self.monoid.elements().map(|m| self.act(a, m).to_string()).collect();
            writeln!(f, "{a} | {}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn is_bijection(map: &[usize], target_size: usize) -> bool {
    map.len() == target_size && map.iter().copied().collect::<BTreeSet<_>>().len() == target_size
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// An equivariant map between M-sets over the same monoid.
#[derive(Clone, PartialEq, Eq)]
pub struct MSetHom {
    source: MSet,
    target: MSet,
    map: Vec<usize>,
}

impl MSetHom {
    pub fn new(source: &MSet, target: &MSet, map: Vec<usize>) -> Result<Self, MSetError> {
        source.check_equivariant(target, &map)?;
        Ok(MSetHom { source: source.clone(), target: target.clone(), map })
    }

    pub fn source(&self) -> &MSet {
        &self.source
    }

    pub fn target(&self) -> &MSet {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().copied().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    pub fn is_bijective(&self) -> bool {
        is_bijection(&self.map, self.target.size())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MSetHom) -> MSetHom {
        MSetHom { source: self.source.clone(), target: other.target.clone(), map: self.map.iter().map(|&a| other.map[a]).collect() }
    }
}

impl fmt::Debug for MSetHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {:?}", self.source.name, self.target.name, self.map)
    }
}

/// Every M-set with exactly `k` elements, one per isomorphism class, ordered
/// by canonical action table.
///
/// Actions are built from the images of a generating set of `M`: generator
/// maps are chosen one at a time and each prefix is checked for consistency
/// on the submonoid it generates before the next is chosen.
pub fn enumerate_msets(m: &FiniteCommMonoid, k: usize) -> Vec<MSet> {
    let gens = m.generators();
    let maps = all_functions(k);
    let mut chosen: Vec<usize> = Vec::new();
    let mut found = BTreeSet::new();
    search_actions(m, k, &gens, &maps, &mut chosen, &mut found);
    found.into_iter().enumerate().map(|(i, act)| MSet::from_raw(format!("{}#{k}.{i}", m.name()), m, k, act)).collect()
}

/// Every M-set with at most `max_k` elements, up to isomorphism.
pub fn enumerate_msets_up_to(m: &FiniteCommMonoid, max_k: usize) -> Vec<MSet> {
    (0..=max_k).flat_map(|k| enumerate_msets(m, k)).collect()
}

fn all_functions(k: usize) -> Vec<Vec<usize>> {
    let total = k.pow(k as u32);
    (0..total).map(|code| (0..k).map(|i| code / k.pow(i as u32) % k).collect()).collect()
}

/// Action table of every element, given maps for a prefix of the
/// generators; `None` if two words for the same element disagree. Elements
/// outside the generated submonoid get `None` entries.
fn action_from_prefix(m: &FiniteCommMonoid, k: usize, gens: &[Elem], images: &[&Vec<usize>]) -> Option<Vec<Option<Vec<usize>>>> {
    let mut value: Vec<Option<Vec<usize>>> = vec![None; m.size()];
    value[m.identity()] = Some((0..k).collect());
    let mut queue = std::collections::VecDeque::from([m.identity()]);
    while let Some(x) = queue.pop_front() {
        let vx = value[x].clone().expect("queued");
        for (&g, img) in gens.iter().zip(images) {
            let y = m.mul(x, g);
            let vy: Vec<usize> = vx.iter().map(|&a| img[a]).collect();
            match &value[y] {
                None => {
                    value[y] = Some(vy);
                    queue.push_back(y);
                }
                Some(v) if *v != vy => return None,
                Some(_) => {}
            }
        }
    }
    Some(value)
}

fn search_actions(
    m: &FiniteCommMonoid,
    k: usize,
    gens: &[Elem],
    maps: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<usize>>,
) {
    let images: Vec<&Vec<usize>> = chosen.iter().map(|&i| &maps[i]).collect();
    let Some(table) = action_from_prefix(m, k, &gens[..chosen.len()], &images) else {
        return;
    };
    if chosen.len() == gens.len() {
        let mut act = vec![0; k * m.size()];
        for (x, v) in table.iter().enumerate() {
            let v = v.as_ref().expect("generators reach every element");
            for a in 0..k {
                act[a * m.size() + x] = v[a];
            }
        }
        let s = MSet { name: String::new(), monoid: m.clone(), k, act };
        debug_assert_eq!(s.check_laws(), Ok(()));
        found.insert(s.canonical_form());
        return;
    }
    for i in 0..maps.len() {
        chosen.push(i);
        search_actions(m, k, gens, maps, chosen, found);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn regular_and_terminal() {
        for m in corpus::monoids() {
            let r = MSet::regular(&m);
            assert_eq!(r.check_laws(), Ok(()));
            // Hom(M, A) ≅ A
            for a in enumerate_msets_up_to(&m, 2) {
                assert_eq!(r.hom_maps(&a).len(), a.size());
            }
            assert_eq!(MSet::terminal(&m).size(), 1);
        }
    }

    #[test]
    fn broken_actions_are_rejected() {
        let b = corpus::b();
        assert_eq!(MSet::new("x", &b, &[vec![1, 1], vec![1, 1]]), Err(MSetError::IdentityLaw { a: 0 }));
        let f3 = corpus::f3();
        // t acts as a transposition of two points but t^3 = 0 must act as t^3
        let rows = vec![vec![0, 1, 0, 0], vec![1, 0, 1, 0]];
        assert!(matches!(MSet::new("x", &f3, &rows), Err(MSetError::Compatibility { .. })));
    }

    #[test]
    fn hom_set_examples() {
        let b = corpus::b();
        let reg = MSet::regular(&b);
        let (zero, _) = MSet::from_ideal(&b, ElemSet::singleton(1));
        assert_eq!(zero.hom_maps(&reg), vec![vec![1]]);
        let t = corpus::t();
        let a = MSet::trivial_action(&t, 2);
        let c = MSet::trivial_action(&t, 3);
        assert_eq!(a.hom_maps(&c).len(), 9);
    }

    #[test]
    fn hom_maps_match_brute_force() {
        for m in [corpus::b(), corpus::e(), corpus::f3(), corpus::c2()] {
            let sets = enumerate_msets_up_to(&m, 3);
            for a in &sets {
                for b in &sets {
                    let mut brute = Vec::new();
                    if b.size() > 0 || a.size() == 0 {
                        let total = b.size().pow(a.size() as u32);
                        for code in 0..total {
                            let f: Vec<usize> = (0..a.size()).map(|i| code / b.size().pow(i as u32) % b.size()).collect();
                            if a.check_equivariant(b, &f).is_ok() {
                                brute.push(f);
                            }
                        }
                    }
                    brute.sort();
                    assert_eq!(a.hom_maps(b), brute, "{a:?} -> {b:?}");
                }
            }
        }
    }

    #[test]
    fn sub_msets_examples() {
        let b = corpus::b();
        let reg = MSet::regular(&b);
        assert_eq!(reg.sub_msets(), vec![ElemSet::EMPTY, ElemSet::singleton(1), reg.all()]);
        assert_eq!(MSet::trivial_action(&b, 3).sub_msets().len(), 8);
    }

    #[test]
    fn mset_counts_over_small_monoids() {
        // over the trivial monoid every M-set is a bare set
        let t = corpus::t();
        for k in 0..5 {
            assert_eq!(enumerate_msets(&t, k).len(), 1);
        }
        // B-sets are sets with an idempotent self-map, classified by fibre sizes
        let b = corpus::b();
        let counts: Vec<usize> = (0..6).map(|k| enumerate_msets(&b, k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7]);
        // C2-sets are sets with an involution: partitions into fixed points and 2-cycles
        let c2 = corpus::c2();
        let counts: Vec<usize> = (0..5).map(|k| enumerate_msets(&c2, k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 2, 3]);
    }

    #[test]
    fn enumerated_msets_are_pairwise_non_isomorphic() {
        for m in [corpus::e(), corpus::bxb()] {
            let sets = enumerate_msets(&m, 3);
            for (i, a) in sets.iter().enumerate() {
                for b in &sets[i + 1..] {
                    assert!(!a.is_isomorphic(b));
                }
            }
        }
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
