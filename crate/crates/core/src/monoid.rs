//! Finite commutative monoids given by multiplication tables.
//!
//! Elements are dense indices `0..n`. The identity is an explicit index and
//! need not be `0`, so externally produced tables can be ingested as is.
//! Because every monoid here is commutative, "right ideal" and "ideal"
//! coincide and only one-sided data is stored.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::bitset::{ElemSet, MAX_UNIVERSE};

/// Index of a monoid element.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("a monoid needs at least one element")]
    Empty,
    #[error("{0} elements exceed the supported maximum of {MAX_UNIVERSE}")]
    TooLarge(usize),
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("identity index {0} is out of range")]
    IdentityOutOfRange(usize),
    #[error("entry mul[{x}][{y}] = {value} is out of range")]
    EntryOutOfRange { x: Elem, y: Elem, value: usize },
    #[error("not commutative: {x}*{y} != {y}*{x}")]
    NotCommutative { x: Elem, y: Elem },
    #[error("identity law fails at element {x}")]
    IdentityLaw { x: Elem },
    #[error("not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: Elem, y: Elem, z: Elem },
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
}

/// A validated finite commutative monoid.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteCommMonoid {
    name: String,
    n: usize,
    identity: Elem,
    table: Vec<Elem>,
    names: Vec<String>,
}

impl FiniteCommMonoid {
    /// Validates a raw table. Commutativity is checked first, then the
    /// identity law, then associativity; each failure carries a witness.
    pub fn new(name: impl Into<String>, rows: &[Vec<usize>], identity: Elem) -> Result<Self, MonoidError> {
        let n = rows.len();
        if n == 0 {
            return Err(MonoidError::Empty);
        }
        if n > MAX_UNIVERSE {
            return Err(MonoidError::TooLarge(n));
        }
        if identity >= n {
            return Err(MonoidError::IdentityOutOfRange(identity));
        }
        let mut table = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MonoidError::RaggedRow { row: x, len: row.len(), expected: n });
            }
            for (y, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(MonoidError::EntryOutOfRange { x, y, value });
                }
            }
            table.extend_from_slice(row);
        }
        let mul = |x: usize, y: usize| table[x * n + y];
        for x in 0..n {
            for y in 0..x {
                if mul(x, y) != mul(y, x) {
                    return Err(MonoidError::NotCommutative { x, y });
                }
            }
        }
        for x in 0..n {
            if mul(identity, x) != x {
                return Err(MonoidError::IdentityLaw { x });
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = mul(x, y);
                for z in 0..n {
                    if mul(xy, z) != mul(x, mul(y, z)) {
                        return Err(MonoidError::NotAssociative { x, y, z });
                    }
                }
            }
        }
        Ok(FiniteCommMonoid { name: name.into(), n, identity, table, names: (0..n).map(|i| i.to_string()).collect() })
    }

    pub fn with_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Result<Self, MonoidError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != self.n {
            return Err(MonoidError::NameCount { expected: self.n, got: names.len() });
        }
        self.names = names;
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The one-element monoid.
    pub fn trivial() -> Self {
        FiniteCommMonoid::new("T", &[vec![0]], 0).and_then(|m| m.with_names(["1"])).expect("trivial monoid")
    }

    #[inline]
    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.table[x * self.n + y]
    }

    pub fn element_name(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn pow(&self, x: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    /// Product of a set of elements; the identity for the empty set.
    pub fn product_of(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        self.elements().find(|&y| self.mul(x, y) == self.identity)
    }

    /// `x` divides `y` when `y = x m` for some `m`.
    pub fn divides(&self, x: Elem, y: Elem) -> bool {
        self.elements().any(|m| self.mul(x, m) == y)
    }

    /// The group of invertible elements.
    pub fn units(&self) -> Submonoid {
        Submonoid { members: self.elements().filter(|&x| self.inverse(x).is_some()).collect() }
    }

    /// Smallest submonoid containing `seed`, by closure to a fixpoint.
    pub fn submonoid_generated(&self, seed: ElemSet) -> Submonoid {
        let mut members = seed.with(self.identity);
        loop {
            let mut next = members;
            for x in members.iter() {
                for y in members.iter() {
                    next.insert(self.mul(x, y));
                }
            }
            if next == members {
                return Submonoid { members };
            }
            members = next;
        }
    }

    pub fn is_submonoid(&self, set: ElemSet) -> bool {
        set.contains(self.identity) && set.iter().all(|x| set.iter().all(|y| set.contains(self.mul(x, y))))
    }

    /// Every submonoid, in canonical subset order.
    pub fn all_submonoids(&self) -> Vec<Submonoid> {
        let mut out: Vec<Submonoid> =
            ElemSet::all_subsets(self.n).filter(|&s| self.is_submonoid(s)).map(|members| Submonoid { members }).collect();
        out.sort_by(|a, b| a.members.canonical_cmp(&b.members));
        out
    }

    /// A generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut covered = ElemSet::singleton(self.identity);
        for x in self.elements() {
            if !covered.contains(x) {
                gens.push(x);
                covered = self.submonoid_generated(gens.iter().copied().collect()).members;
            }
        }
        gens
    }

    /// Quotient by the unit congruence `x ~ ux`, with its projection.
    /// Classes are numbered by their least member.
    pub fn reduced(&self) -> (FiniteCommMonoid, MonoidHom) {
        let units = self.units();
        let mut class = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for x in self.elements() {
            if class[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for u in units.iter() {
                class[self.mul(u, x)] = c;
            }
        }
        let rows: Vec<Vec<usize>> = reps.iter().map(|&x| reps.iter().map(|&y| class[self.mul(x, y)]).collect()).collect();
        let names: Vec<String> = reps.iter().map(|&x| self.names[x].clone()).collect();
        let red = FiniteCommMonoid::new(format!("{}_red", self.name), &rows, class[self.identity])
            .and_then(|m| m.with_names(names))
            .expect("quotient by units is a monoid");
        let proj = MonoidHom::new(self.clone(), red.clone(), class).expect("projection is a homomorphism");
        (red, proj)
    }

    /// Direct product; element `(x, y)` has index `x * |other| + y`.
    pub fn product(&self, other: &FiniteCommMonoid) -> FiniteCommMonoid {
        let (n, m) = (self.n, other.n);
        let rows: Vec<Vec<usize>> =
            (0..n * m).map(|a| (0..n * m).map(|b| self.mul(a / m, b / m) * m + other.mul(a % m, b % m)).collect()).collect();
        let names: Vec<String> = (0..n * m).map(|a| format!("({},{})", self.names[a / m], other.names[a % m])).collect();
        FiniteCommMonoid::new(format!("{}x{}", self.name, other.name), &rows, self.identity * m + other.identity)
            .and_then(|p| p.with_names(names))
            .expect("product of monoids is a monoid")
    }

    /// An isomorphism `self -> other` if one exists, by backtracking over
    /// identity-preserving bijections.
    pub fn isomorphism_to(&self, other: &FiniteCommMonoid) -> Option<Vec<Elem>> {
        if self.n != other.n {
            return None;
        }
        let profile = |m: &FiniteCommMonoid, x: Elem| {
            let idem = m.mul(x, x) == x;
            let unit = m.inverse(x).is_some();
            let divs = m.elements().filter(|&y| m.divides(y, x)).count();
            let sq = m.elements().filter(|&y| m.mul(y, y) == x).count();
            (idem, unit, divs, sq)
        };
        let ps: Vec<_> = self.elements().map(|x| profile(self, x)).collect();
        let qs: Vec<_> = other.elements().map(|x| profile(other, x)).collect();
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        map[self.identity] = other.identity;
        used[other.identity] = true;
        let order: Vec<Elem> = self.elements().filter(|&x| x != self.identity).collect();

        fn consistent(a: &FiniteCommMonoid, b: &FiniteCommMonoid, map: &[usize], x: Elem) -> bool {
            a.elements().all(|y| {
                if map[y] == usize::MAX {
                    return true;
                }
                let xy = a.mul(x, y);
                map[xy] == usize::MAX || map[xy] == b.mul(map[x], map[y])
            }) && a.elements().all(|y| {
                // x may appear as a product of already mapped elements
                a.elements().all(|z| {
                    if map[y] == usize::MAX || map[z] == usize::MAX || a.mul(y, z) != x {
                        return true;
                    }
                    map[x] == b.mul(map[y], map[z])
                })
            })
        }

        fn go(
            a: &FiniteCommMonoid,
            b: &FiniteCommMonoid,
            order: &[Elem],
            ps: &[(bool, bool, usize, usize)],
            qs: &[(bool, bool, usize, usize)],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let Some((&x, rest)) = order.split_first() else {
                return true;
            };
            for y in b.elements() {
                if used[y] || ps[x] != qs[y] {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if consistent(a, b, map, x) && go(a, b, rest, ps, qs, map, used) {
                    return true;
                }
                map[x] = usize::MAX;
                used[y] = false;
            }
            false
        }

        if ps[self.identity] != qs[other.identity] {
            return None;
        }
        go(self, other, &order, &ps, &qs, &mut map, &mut used).then_some(map)
    }

    pub fn is_isomorphic(&self, other: &FiniteCommMonoid) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

impl fmt::Debug for FiniteCommMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, self.names)
    }
}

impl fmt::Display for FiniteCommMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.names.iter().map(String::len).max().unwrap_or(1);
        writeln!(f, "monoid {} ({} elements, identity {})", self.name, self.n, self.names[self.identity])?;
        write!(f, "{:>w$} |", "*")?;
        for y in self.elements() {
            write!(f, " {:>w$}", self.names[y])?;
        }
        writeln!(f)?;
        for x in self.elements() {
            write!(f, "{:>w$} |", self.names[x])?;
            for y in self.elements() {
                write!(f, " {:>w$}", self.names[self.mul(x, y)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A submonoid, stored as its member set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Submonoid {
    members: ElemSet,
}

impl Submonoid {
    pub fn new(parent: &FiniteCommMonoid, members: ElemSet) -> Option<Self> {
        parent.is_submonoid(members).then_some(Submonoid { members })
    }

    /// The trivial submonoid `{1}`.
    pub fn trivial(parent: &FiniteCommMonoid) -> Self {
        Submonoid { members: ElemSet::singleton(parent.identity()) }
    }

    /// `M \ p` for a prime `p`, or any complement that happens to be closed.
    pub fn complement_of(parent: &FiniteCommMonoid, set: ElemSet) -> Option<Self> {
        Submonoid::new(parent, set.complement(parent.size()))
    }

    #[inline]
    pub fn members(&self) -> ElemSet {
        self.members
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every member has an inverse inside the submonoid.
    pub fn is_group(&self, parent: &FiniteCommMonoid) -> bool {
        self.iter().all(|x| self.iter().any(|y| parent.mul(x, y) == parent.identity()))
    }
}

/// A homomorphism between finite commutative monoids.
#[derive(Clone, PartialEq, Eq)]
pub struct MonoidHom {
    source: FiniteCommMonoid,
    target: FiniteCommMonoid,
    map: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("map has {got} entries, source has {expected} elements")]
    Length { expected: usize, got: usize },
    #[error("image {image} of element {x} is out of range")]
    OutOfRange { x: Elem, image: usize },
    #[error("identity is not preserved")]
    Identity,
    #[error("f({x}*{y}) != f({x})*f({y})")]
    NotMultiplicative { x: Elem, y: Elem },
}

impl MonoidHom {
    pub fn new(source: FiniteCommMonoid, target: FiniteCommMonoid, map: Vec<Elem>) -> Result<Self, HomError> {
        if map.len() != source.size() {
            return Err(HomError::Length { expected: source.size(), got: map.len() });
        }
        if let Some((x, &image)) = map.iter().enumerate().find(|(_, &v)| v >= target.size()) {
            return Err(HomError::OutOfRange { x, image });
        }
        if map[source.identity()] != target.identity() {
            return Err(HomError::Identity);
        }
        for x in source.elements() {
            for y in source.elements() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(HomError::NotMultiplicative { x, y });
                }
            }
        }
        Ok(MonoidHom { source, target, map })
    }

    pub fn identity(m: &FiniteCommMonoid) -> Self {
        MonoidHom { source: m.clone(), target: m.clone(), map: m.elements().collect() }
    }

    /// Exhaustive check of both homomorphism laws.
    pub fn check(source: &FiniteCommMonoid, target: &FiniteCommMonoid, map: &[Elem]) -> bool {
        map.len() == source.size()
            && map.iter().all(|&v| v < target.size())
            && map[source.identity()] == target.identity()
            && source.elements().all(|x| source.elements().all(|y| map[source.mul(x, y)] == target.mul(map[x], map[y])))
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn source(&self) -> &FiniteCommMonoid {
        &self.source
    }

    pub fn target(&self) -> &FiniteCommMonoid {
        &self.target
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn image(&self, set: ElemSet) -> ElemSet {
        set.iter().map(|x| self.map[x]).collect()
    }

    pub fn preimage(&self, set: ElemSet) -> ElemSet {
        self.source.elements().filter(|&x| set.contains(self.map[x])).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonoidHom) -> MonoidHom {
        assert_eq!(self.target.size(), other.source.size());
        MonoidHom { source: self.source.clone(), target: other.target.clone(), map: self.map.iter().map(|&x| other.map[x]).collect() }
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.image(self.source.all()) == self.target.all()
    }

    /// The inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<MonoidHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(MonoidHom { source: self.target.clone(), target: self.source.clone(), map: inv })
    }

    /// Every homomorphism `source -> target`.
    pub fn enumerate(source: &FiniteCommMonoid, target: &FiniteCommMonoid) -> Vec<MonoidHom> {
        let gens = source.generators();
        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        loop {
            if let Some(map) = extend_from_generators(source, &gens, &images, target.identity(), |&a, &b| target.mul(a, b)) {
                out.push(MonoidHom { source: source.clone(), target: target.clone(), map });
            }
            // odometer over generator images
            let mut i = 0;
            loop {
                if i == images.len() {
                    out.sort_by(|a, b| a.map.cmp(&b.map));
                    return out;
                }
                images[i] += 1;
                if images[i] < target.size() {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Debug for MonoidHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {:?}", self.source.name, self.target.name, self.map)
    }
}

/// Extends generator images to every element along the Cayley graph, where
/// `op(value(x), image(g))` is the value at `x g`. Returns `None` when two
/// paths to the same element disagree. Agreement on every edge makes the
/// result multiplicative by induction on word length.
pub(crate) fn extend_from_generators<V: Clone + PartialEq>(
    m: &FiniteCommMonoid,
    gens: &[Elem],
    images: &[V],
    unit: V,
    op: impl Fn(&V, &V) -> V,
) -> Option<Vec<V>> {
    let mut value: Vec<Option<V>> = vec![None; m.size()];
    value[m.identity()] = Some(unit);
    let mut queue = VecDeque::from([m.identity()]);
    while let Some(x) = queue.pop_front() {
        let vx = value[x].clone().expect("queued elements have values");
        for (g, img) in gens.iter().zip(images) {
            let y = m.mul(x, *g);
            let vy = op(&vx, img);
            match &value[y] {
                None => {
                    value[y] = Some(vy);
                    queue.push_back(y);
                }
                Some(existing) if *existing != vy => return None,
                Some(_) => {}
            }
        }
    }
    value.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn trivial_monoid_validates() {
        let t = FiniteCommMonoid::new("T", &[vec![0]], 0).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(t.units().members(), ElemSet::singleton(0));
    }

    #[test]
    fn noncommutative_table_is_rejected_with_witness() {
        // {1, a}: a*a = 1, a*1 = a, 1*a = 1
        let err = FiniteCommMonoid::new("bad", &[vec![0, 0], vec![1, 0]], 0).unwrap_err();
        assert_eq!(err, MonoidError::NotCommutative { x: 1, y: 0 });
    }

    #[test]
    fn identity_and_associativity_failures() {
        // commutative, but 1 is not an identity
        let err = FiniteCommMonoid::new("bad", &[vec![1, 1], vec![1, 1]], 0).unwrap_err();
        assert_eq!(err, MonoidError::IdentityLaw { x: 0 });
        // (1*1)*2 = 2*2 = 0 but 1*(1*2) = 1*0 = 1
        let rows = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 0]];
        let err = FiniteCommMonoid::new("bad", &rows, 0).unwrap_err();
        assert!(matches!(err, MonoidError::NotAssociative { .. }));
        let out = FiniteCommMonoid::new("bad", &[vec![0, 5], vec![1, 0]], 0).unwrap_err();
        assert!(matches!(out, MonoidError::EntryOutOfRange { x: 0, y: 1, value: 5 }));
    }

    #[test]
    fn units_of_corpus_monoids() {
        assert_eq!(corpus::c2().units().len(), 2);
        let f3 = corpus::f3();
        assert_eq!(f3.units().members(), ElemSet::singleton(f3.identity()));
        for m in corpus::monoids() {
            assert!(m.units().is_group(&m), "{}", m.name());
        }
    }

    #[test]
    fn submonoid_generation_examples() {
        let f3 = corpus::f3();
        assert_eq!(f3.submonoid_generated(ElemSet::singleton(1)).members(), f3.all());
        for m in corpus::monoids() {
            assert_eq!(m.submonoid_generated(ElemSet::EMPTY).members(), ElemSet::singleton(m.identity()));
        }
        let e = corpus::e();
        assert_eq!(e.submonoid_generated(ElemSet::singleton(1)).members(), ElemSet::from_bits(0b011));
    }

    #[test]
    fn reduced_examples() {
        let (red, proj) = corpus::c2().reduced();
        assert_eq!(red.size(), 1);
        assert!(!proj.is_bijective());
        let f3 = corpus::f3();
        assert!(f3.reduced().0.is_isomorphic(&f3));
        let c2b = corpus::c2().product(&corpus::b());
        assert!(c2b.reduced().0.is_isomorphic(&corpus::b()));
    }

    #[test]
    fn reduction_is_idempotent_on_corpus() {
        for m in corpus::monoids() {
            let (red, proj) = m.reduced();
            assert_eq!(proj.image(m.all()), red.all(), "projection onto for {}", m.name());
            assert!(red.reduced().0.is_isomorphic(&red));
        }
    }

    #[test]
    fn check_hom_examples() {
        let b = corpus::b();
        let e = corpus::e();
        assert!(MonoidHom::check(&b, &b, &[0, 1]));
        // E -> B: 1 -> 1, e -> 1, 0 -> 0
        assert!(MonoidHom::check(&e, &b, &[0, 0, 1]));
        // constant map to the identity is a homomorphism
        assert!(MonoidHom::check(&b, &b, &[0, 0]));
        assert!(!MonoidHom::check(&b, &b, &[1, 1]));
    }

    #[test]
    fn hom_enumeration_matches_brute_force() {
        let ms = corpus::monoids();
        for a in ms.iter().filter(|m| m.size() <= 4) {
            for b in ms.iter().filter(|m| m.size() <= 4) {
                let fast = MonoidHom::enumerate(a, b);
                let mut brute = Vec::new();
                let total = b.size().pow(a.size() as u32);
                for code in 0..total {
                    let map: Vec<usize> = (0..a.size()).map(|i| code / b.size().pow(i as u32) % b.size()).collect();
                    if MonoidHom::check(a, b, &map) {
                        brute.push(map);
                    }
                }
                brute.sort();
                let fast: Vec<_> = fast.iter().map(|h| h.map().to_vec()).collect();
                assert_eq!(fast, brute, "{} -> {}", a.name(), b.name());
            }
        }
    }

    #[test]
    fn isomorphism_search_respects_relabelling() {
        let e = corpus::e();
        // relabel E as {0, 1, e} with identity at index 1
        let perm = [1, 2, 0];
        let mut rows = vec![vec![0; 3]; 3];
        for x in 0..3 {
            for y in 0..3 {
                rows[perm[x]][perm[y]] = perm[e.mul(x, y)];
            }
        }
        let e2 = FiniteCommMonoid::new("E'", &rows, perm[e.identity()]).unwrap();
        let iso = e.isomorphism_to(&e2).unwrap();
        assert_eq!(iso, perm.to_vec());
        assert!(!e.is_isomorphic(&corpus::c3()));
        assert!(!corpus::b().product(&corpus::b()).is_isomorphic(&corpus::c2().product(&corpus::b())));
    }
}
