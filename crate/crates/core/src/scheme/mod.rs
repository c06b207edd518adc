//! Monoid schemes glued from finitely many affine charts along principal
//! opens.
//!
//! Chart `i` is `Spec(M_i)`. A gluing of charts `i` and `j` names
//! `f_ij ∈ M_i`, `f_ji ∈ M_j` and an isomorphism
//! `φ_ij: (M_i)_{f_ij} -> (M_j)_{f_ji}` given on element indices of the
//! localized monoids. Charts with no gluing entry are disjoint. Since the
//! generic point lies in every principal open, glued charts always share
//! it, so gluing must be transitive: if `i~j` and `j~k` then `i~k`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::ideals::{format_set, Ideal, Spectrum};
use crate::localization::{pullback_ideal, pushforward_ideal, LocalizedMonoid};
use crate::monoid::{Elem, FiniteCommMonoid, HomError, MonoidHom, Submonoid};
use crate::poset::FinitePoset;

pub mod incidence;
pub mod qc;
pub mod sections;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("a scheme needs at least one chart")]
    NoCharts,
    #[error("chart {0} does not exist")]
    ChartOutOfRange(usize),
    #[error("chart {0} is glued to itself")]
    SelfGlue(usize),
    #[error("charts {0} and {1} are glued twice")]
    DuplicateGlue(usize, usize),
    #[error("element {elem} is out of range in chart {chart}")]
    ElementOutOfRange { chart: usize, elem: Elem },
    #[error("gluing map {i}->{j} is not a homomorphism: {source}")]
    NotHom { i: usize, j: usize, source: HomError },
    #[error("gluing map {i}->{j} is not bijective")]
    NotIso { i: usize, j: usize },
    #[error("charts {i} and {k} meet through {j} but are not glued")]
    MissingOverlap { i: usize, j: usize, k: usize },
    #[error("cocycle fails on ({i}, {j}, {k}): {witness}")]
    Cocycle { i: usize, j: usize, k: usize, witness: String },
    #[error("gluing {i}->{j} does not match primes: {witness}")]
    PrimeMismatch { i: usize, j: usize, witness: String },
    #[error("{0} points exceed the supported 64")]
    TooManyPoints(usize),
    #[error("sheaf data: {0}")]
    Sheaf(String),
}

/// One gluing entry as supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Glue {
    pub i: usize,
    pub j: usize,
    pub f_i: Elem,
    pub f_j: Elem,
    /// Indices of `(M_i)_{f_i}` to indices of `(M_j)_{f_j}`.
    pub phi: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    pub name: String,
    pub charts: Vec<FiniteCommMonoid>,
    pub glues: Vec<Glue>,
}

impl GluingData {
    pub fn new(name: impl Into<String>, charts: Vec<FiniteCommMonoid>) -> Self {
        GluingData { name: name.into(), charts, glues: Vec::new() }
    }

    pub fn affine(m: &FiniteCommMonoid) -> Self {
        GluingData::new(format!("Spec({})", m.name()), vec![m.clone()])
    }

    pub fn glue(mut self, i: usize, j: usize, f_i: Elem, f_j: Elem, phi: Vec<Elem>) -> Self {
        self.glues.push(Glue { i, j, f_i, f_j, phi });
        self
    }
}

/// The overlap of chart `here` with chart `there`, seen from `here`.
#[derive(Clone, Debug)]
pub struct Overlap {
    pub f_here: Elem,
    pub f_there: Elem,
    pub loc_here: LocalizedMonoid,
    pub loc_there: LocalizedMonoid,
    pub phi: MonoidHom,
}

impl Overlap {
    /// `x ∈ M_here ↦ φ(x/1)`, as a least fraction `(a, t)` of `M_there`.
    pub fn transport(&self, x: Elem) -> (Elem, Elem) {
        let y = self.phi.apply(self.loc_here.loc_map().apply(x));
        self.loc_there.fractions().rep(y)
    }
}

#[derive(Clone, Debug)]
pub struct MonoidScheme {
    name: String,
    charts: Vec<FiniteCommMonoid>,
    specs: Vec<Spectrum>,
    overlaps: BTreeMap<(usize, usize), Overlap>,
    point_of: Vec<Vec<usize>>,
    reps: Vec<Vec<(usize, usize)>>,
    order: FinitePoset,
    opens: Vec<ElemSet>,
}

impl MonoidScheme {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn charts(&self) -> &[FiniteCommMonoid] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> &FiniteCommMonoid {
        &self.charts[i]
    }

    pub fn chart_count(&self) -> usize {
        self.charts.len()
    }

    pub fn spec(&self, i: usize) -> &Spectrum {
        &self.specs[i]
    }

    pub fn is_affine(&self) -> bool {
        self.charts.len() == 1
    }

    pub fn overlap(&self, i: usize, j: usize) -> Option<&Overlap> {
        self.overlaps.get(&(i, j))
    }

    /// Ordered pairs `(i, j)`, `i != j`, of glued charts.
    pub fn overlap_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.overlaps.keys().copied()
    }

    pub fn point_count(&self) -> usize {
        self.reps.len()
    }

    pub fn all_points(&self) -> ElemSet {
        ElemSet::full(self.point_count())
    }

    /// Global index of local prime `p` of chart `i`.
    pub fn point_of(&self, i: usize, p: usize) -> usize {
        self.point_of[i][p]
    }

    /// `(chart, local prime)` for every chart containing `x`, by chart.
    pub fn representatives(&self, x: usize) -> &[(usize, usize)] {
        &self.reps[x]
    }

    /// The first chart containing `x`, used for stalks and sections.
    pub fn home(&self, x: usize) -> (usize, usize) {
        self.reps[x][0]
    }

    /// The local prime of `x` in chart `i`, if `x` lies there.
    pub fn local_prime(&self, x: usize, i: usize) -> Option<usize> {
        self.reps[x].iter().find(|&&(c, _)| c == i).map(|&(_, p)| p)
    }

    pub fn prime_of(&self, x: usize, i: usize) -> Option<Ideal> {
        self.local_prime(x, i).map(|p| self.specs[i].prime(p))
    }

    pub fn chart_points(&self, i: usize) -> ElemSet {
        self.point_of[i].iter().copied().collect()
    }

    /// `U ∩ Spec(M_i)` as local prime indices.
    pub fn restrict_open(&self, i: usize, u: ElemSet) -> ElemSet {
        (0..self.specs[i].size()).filter(|&p| u.contains(self.point_of[i][p])).collect()
    }

    /// `x <= y` when `x` is a generization of `y`: both lie in some chart with
    /// `p_x ⊆ p_y`.
    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    /// `Open(X)`, in canonical order.
    pub fn opens(&self) -> &[ElemSet] {
        &self.opens
    }

    /// Opens by the chartwise definition: `U ∩ Spec(M_i)` is open in every
    /// chart. Independent of [`MonoidScheme::opens`].
    pub fn opens_by_charts(&self) -> Vec<ElemSet> {
        let mut out: Vec<ElemSet> = ElemSet::all_subsets(self.point_count())
            .filter(|&u| {
                (0..self.chart_count()).all(|i| {
                    let local = self.restrict_open(i, u);
                    self.specs[i].order().is_down_set(local)
                })
            })
            .collect();
        out.sort_by(ElemSet::canonical_cmp);
        out
    }

    pub fn format_point(&self, x: usize) -> String {
        let (i, p) = self.home(x);
        let prime = format_set(&self.charts[i], self.specs[i].prime(p));
        if self.charts.len() == 1 {
            prime
        } else {
            let charts: Vec<String> = self.reps[x].iter().map(|(c, _)| c.to_string()).collect();
            format!("{prime}@{}", charts.join(","))
        }
    }

    pub fn format_points(&self, s: ElemSet) -> String {
        let parts: Vec<String> = s.iter().map(|x| self.format_point(x)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// The image in chart `j` of a prime of chart `i` inside the overlap:
    /// `p ↦ loc_j^*(φ(loc_i{}_*(p)))`.
    fn transport_prime(&self, i: usize, j: usize, p: Ideal) -> Ideal {
        let ov = &self.overlaps[&(i, j)];
        let pushed = pushforward_ideal(ov.loc_here.loc_map(), p);
        pullback_ideal(ov.loc_there.loc_map(), ov.phi.image(pushed))
    }
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
        let (a, b) = (self.find(x), self.find(y));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Validates the gluing data and computes points and opens.
pub fn build_scheme(g: &GluingData) -> Result<MonoidScheme, SchemeError> {
    let n = g.charts.len();
    if n == 0 {
        return Err(SchemeError::NoCharts);
    }
    let mut overlaps = BTreeMap::new();
    for gl in &g.glues {
        let (i, j) = (gl.i, gl.j);
        for c in [i, j] {
            if c >= n {
                return Err(SchemeError::ChartOutOfRange(c));
            }
        }
        if i == j {
            return Err(SchemeError::SelfGlue(i));
        }
        if overlaps.contains_key(&(i, j)) {
            return Err(SchemeError::DuplicateGlue(i.min(j), i.max(j)));
        }
        for (c, f) in [(i, gl.f_i), (j, gl.f_j)] {
            if f >= g.charts[c].size() {
                return Err(SchemeError::ElementOutOfRange { chart: c, elem: f });
            }
        }
        let loc_i = LocalizedMonoid::at_element(&g.charts[i], gl.f_i);
        let loc_j = LocalizedMonoid::at_element(&g.charts[j], gl.f_j);
        let phi = MonoidHom::new(loc_i.result().clone(), loc_j.result().clone(), gl.phi.clone()).map_err(|source| SchemeError::NotHom {
            i,
            j,
            source,
        })?;
        let inverse = phi.inverse().ok_or(SchemeError::NotIso { i, j })?;
        overlaps
            .insert((j, i), Overlap { f_here: gl.f_j, f_there: gl.f_i, loc_here: loc_j.clone(), loc_there: loc_i.clone(), phi: inverse });
        overlaps.insert((i, j), Overlap { f_here: gl.f_i, f_there: gl.f_j, loc_here: loc_i, loc_there: loc_j, phi });
    }
    for &(i, j) in overlaps.keys() {
        for k in (0..n).filter(|&k| k != i && k != j) {
            if overlaps.contains_key(&(j, k)) && !overlaps.contains_key(&(i, k)) {
                return Err(SchemeError::MissingOverlap { i, j, k });
            }
        }
    }
    check_cocycles(&g.charts, &overlaps)?;

    let specs: Vec<Spectrum> = g.charts.iter().map(Spectrum::of).collect();
    let offsets: Vec<usize> = specs
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.size();
            Some(o)
        })
        .collect();
    let total: usize = specs.iter().map(Spectrum::size).sum();
    let mut scheme = MonoidScheme {
        name: g.name.clone(),
        charts: g.charts.clone(),
        specs,
        overlaps,
        point_of: Vec::new(),
        reps: Vec::new(),
        order: FinitePoset::antichain(0),
        opens: Vec::new(),
    };
    let mut uf = UnionFind((0..total).collect());
    for (&(i, j), ov) in &scheme.overlaps {
        let inside = scheme.specs[i].basic_open(ov.f_here);
        let target = scheme.specs[j].basic_open(ov.f_there);
        let mut hit = ElemSet::EMPTY;
        for p in inside.iter() {
            let q = scheme.transport_prime(i, j, scheme.specs[i].prime(p));
            let witness = || format!("{} goes to {}", format_set(&g.charts[i], scheme.specs[i].prime(p)), format_set(&g.charts[j], q));
            let Some(qi) = scheme.specs[j].index_of(q).filter(|&qi| target.contains(qi)) else {
                return Err(SchemeError::PrimeMismatch { i, j, witness: witness() });
            };
            hit.insert(qi);
            uf.union(offsets[i] + p, offsets[j] + qi);
        }
        if hit != target {
            return Err(SchemeError::PrimeMismatch { i, j, witness: "not onto the overlap".into() });
        }
    }
    let mut index_of_root = vec![usize::MAX; total];
    let mut point_of = Vec::with_capacity(n);
    let mut reps: Vec<Vec<(usize, usize)>> = Vec::new();
    for (i, &offset) in offsets.iter().enumerate().take(n) {
        let mut row = Vec::with_capacity(scheme.specs[i].size());
        for p in 0..scheme.specs[i].size() {
            let r = uf.find(offset + p);
            if index_of_root[r] == usize::MAX {
                index_of_root[r] = reps.len();
                reps.push(Vec::new());
            }
            let x = index_of_root[r];
            reps[x].push((i, p));
            row.push(x);
        }
        point_of.push(row);
    }
    if reps.len() > 64 {
        return Err(SchemeError::TooManyPoints(reps.len()));
    }
    scheme.point_of = point_of;
    scheme.reps = reps;
    let leq = |x: usize, y: usize| {
        scheme.reps[x]
            .iter()
            .any(|&(i, p)| scheme.local_prime(y, i).is_some_and(|q| scheme.specs[i].prime(p).is_subset(scheme.specs[i].prime(q))))
    };
    let order = FinitePoset::new(scheme.reps.len(), leq).map_err(|e| SchemeError::PrimeMismatch { i: 0, j: 0, witness: e.to_string() })?;
    scheme.opens = order.down_sets();
    scheme.order = order;
    Ok(scheme)
}

/// On every triple overlap, `φ_jk ∘ φ_ij = φ_ik` as maps into `M_k`
/// localized at `f_ki` and `f_kj`. Both sides are homomorphisms out of a
/// localization of `M_i`, so agreement on `M_i` itself suffices, provided
/// the denominators stay invertible.
fn check_cocycles(charts: &[FiniteCommMonoid], overlaps: &BTreeMap<(usize, usize), Overlap>) -> Result<(), SchemeError> {
    for (&(i, j), ij) in overlaps {
        for (&(j2, k), jk) in overlaps.range((j, 0)..(j + 1, 0)) {
            debug_assert_eq!(j2, j);
            if k == i {
                continue;
            }
            let ik = &overlaps[&(i, k)];
            let mk = &charts[k];
            let triple = LocalizedMonoid::new(mk, &mk.submonoid_generated([ik.f_there, jk.f_there].into_iter().collect()));
            let t = triple.result();
            let fail = |witness: String| SchemeError::Cocycle { i, j, k, witness };
            let direct = |x: Elem| {
                let (c, v) = ik.transport(x);
                triple.fraction(c, v)
            };
            let through_j = |x: Elem| -> Option<Elem> {
                let (a, s) = ij.transport(x);
                let (c, v) = jk.transport(a);
                let (b, u) = jk.transport(s);
                let denom = t.inverse(triple.fraction(b, u))?;
                Some(t.mul(triple.fraction(c, v), denom))
            };
            for x in charts[i].elements() {
                let name = charts[i].element_name(x);
                let via = through_j(x).ok_or_else(|| fail(format!("{name}: denominator not invertible")))?;
                if via != direct(x) {
                    return Err(fail(format!("{name} goes to {} and {}", t.element_name(via), t.element_name(direct(x)))));
                }
            }
            for f in [ij.f_here, ik.f_here] {
                if t.inverse(direct(f)).is_none() {
                    return Err(fail(format!("{} is not invertible on the overlap", charts[i].element_name(f))));
                }
            }
        }
    }
    Ok(())
}

/// `S = M ∖ p` for a prime `p`.
pub(crate) fn prime_complement(m: &FiniteCommMonoid, p: Ideal) -> Submonoid {
    Submonoid::complement_of(m, p).expect("complement of a prime is a submonoid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn affine_matches_spectrum() {
        for m in corpus::monoids() {
            let x = build_scheme(&GluingData::affine(&m)).unwrap();
            assert_eq!(x.point_count(), Spectrum::of(&m).size());
            let z = crate::ideals::zariski_topology(&m, x.spec(0));
            assert_eq!(x.opens(), z.opens());
            assert_eq!(x.opens_by_charts(), x.opens());
        }
    }

    #[test]
    fn corpus_scheme_shapes() {
        let expect = [("X2", 4, 6), ("X3", 5, 10), ("Y2", 3, 5), ("T+T", 2, 4), ("B+E", 5, 12), ("W", 1, 2)];
        for (name, points, opens) in expect {
            let x = build_scheme(&corpus::scheme_by_name(name).unwrap()).unwrap();
            assert_eq!((x.point_count(), x.opens().len()), (points, opens), "{name}");
            assert_eq!(x.opens_by_charts(), x.opens(), "{name}");
        }
        let e = build_scheme(&GluingData::affine(&corpus::e())).unwrap();
        assert_eq!((e.point_count(), e.opens().len()), (3, 4));
    }

    #[test]
    fn rejects_bad_gluings() {
        let e = corpus::e();
        let two = || GluingData::new("bad", vec![e.clone(), e.clone()]);
        assert!(matches!(build_scheme(&two().glue(0, 1, 1, 1, vec![1, 1])), Err(SchemeError::NotHom { .. })));
        assert_eq!(build_scheme(&two().glue(0, 1, 1, 1, vec![0, 0])).unwrap_err(), SchemeError::NotIso { i: 0, j: 1 });
        assert_eq!(build_scheme(&two().glue(0, 0, 1, 1, vec![0, 1])).unwrap_err(), SchemeError::SelfGlue(0));
        assert_eq!(
            build_scheme(&two().glue(0, 1, 1, 1, vec![0, 1]).glue(1, 0, 1, 1, vec![0, 1])).unwrap_err(),
            SchemeError::DuplicateGlue(0, 1)
        );
        let three =
            GluingData::new("open chain", vec![e.clone(), e.clone(), e.clone()]).glue(0, 1, 1, 1, vec![0, 1]).glue(1, 2, 1, 1, vec![0, 1]);
        assert!(matches!(build_scheme(&three), Err(SchemeError::MissingOverlap { .. })));
        // the overlap D(e) of E has two points, D(t) of F3 one
        let mixed = GluingData::new("mismatch", vec![e.clone(), corpus::f3()]).glue(0, 1, 1, 1, vec![0, 0]);
        assert!(build_scheme(&mixed).is_err());
    }

    #[test]
    fn twisted_cocycle_is_detected() {
        let c3 = corpus::c3();
        // inversion g ↦ g² on two overlaps, the identity on the third
        let bad = GluingData::new("twist", vec![c3.clone(), c3.clone(), c3.clone()])
            .glue(0, 1, 1, 1, vec![0, 2, 1])
            .glue(1, 2, 1, 1, vec![0, 2, 1])
            .glue(0, 2, 1, 1, vec![0, 2, 1]);
        assert!(matches!(build_scheme(&bad), Err(SchemeError::Cocycle { .. })));
        let good = GluingData::new("twist", vec![c3.clone(), c3.clone(), c3])
            .glue(0, 1, 1, 1, vec![0, 2, 1])
            .glue(1, 2, 1, 1, vec![0, 2, 1])
            .glue(0, 2, 1, 1, vec![0, 1, 2]);
        assert!(build_scheme(&good).is_ok());
    }
}
