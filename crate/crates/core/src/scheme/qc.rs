//! Quasi-coherent sheaves on a glued scheme: an `M_i`-set per chart with
//! isomorphisms `ψ_ij: (A_i)_{f_ij} -> (A_j)_{f_ji}` over `φ_ij`.

use std::collections::BTreeMap;

use crate::bitset::ElemSet;
use crate::check::{ensure, CheckFailure, CheckResult};
use crate::localization::{omega_localization_iso, LocalizedMSet, LocalizedMonoid};
use crate::monoid::Elem;
use crate::mset::{enumerate_msets_up_to, is_bijection, MSet};
use crate::omega::{characteristic_map, Omega};

use super::{prime_complement, MonoidScheme, SchemeError};

#[derive(Clone, Debug)]
pub struct QcSheaf {
    name: String,
    charts: Vec<MSet>,
    /// Chart `i` localized at `f_ij`, keyed `(i, j)`.
    localized: BTreeMap<(usize, usize), LocalizedMSet>,
    psi: BTreeMap<(usize, usize), Vec<usize>>,
}

fn sheaf_err(msg: String) -> SchemeError {
    SchemeError::Sheaf(msg)
}

impl QcSheaf {
    /// `psi` holds `ψ_ij` for each glued pair with `i < j`; the reverse
    /// maps are the inverses.
    pub fn new(
        x: &MonoidScheme,
        name: impl Into<String>,
        charts: Vec<MSet>,
        psi: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self, SchemeError> {
        let name = name.into();
        if charts.len() != x.chart_count() {
            return Err(sheaf_err(format!("{name}: {} charts for {} chart monoids", charts.len(), x.chart_count())));
        }
        for (i, a) in charts.iter().enumerate() {
            if a.monoid() != x.chart(i) {
                return Err(sheaf_err(format!("{name}: chart {i} is over {}", a.monoid().name())));
            }
        }
        if let Some(&(i, j)) = psi.keys().find(|&&(i, j)| i >= j || x.overlap(i, j).is_none()) {
            return Err(sheaf_err(format!("{name}: gluing given for ({i}, {j}) which is not an overlap with i < j")));
        }
        let mut localized = BTreeMap::new();
        for (i, j) in x.overlap_pairs() {
            localized.insert((i, j), LocalizedMSet::new(&charts[i], &x.overlap(i, j).unwrap().loc_here));
        }
        let mut all_psi = BTreeMap::new();
        for (i, j) in x.overlap_pairs().filter(|&(i, j)| i < j) {
            let map = psi.get(&(i, j)).ok_or_else(|| sheaf_err(format!("{name}: no gluing for ({i}, {j})")))?;
            let (li, lj) = (localized[&(i, j)].result(), localized[&(j, i)].result());
            let ov = x.overlap(i, j).unwrap();
            if map.len() != li.size() || !is_bijection(map, lj.size()) {
                return Err(sheaf_err(format!("{name}: ψ_{i}{j} is not a bijection")));
            }
            for c in 0..li.size() {
                for m in li.monoid().elements() {
                    if map[li.act(c, m)] != lj.act(map[c], ov.phi.apply(m)) {
                        return Err(sheaf_err(format!("{name}: ψ_{i}{j} is not compatible with φ at {c}·{m}")));
                    }
                }
            }
            let mut inv = vec![0; map.len()];
            for (c, &v) in map.iter().enumerate() {
                inv[v] = c;
            }
            all_psi.insert((i, j), map.clone());
            all_psi.insert((j, i), inv);
        }
        let sheaf = QcSheaf { name, charts, localized, psi: all_psi };
        sheaf.check_cocycle(x)?;
        Ok(sheaf)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn chart(&self, i: usize) -> &MSet {
        &self.charts[i]
    }

    pub fn charts(&self) -> &[MSet] {
        &self.charts
    }

    pub fn localized(&self, i: usize, j: usize) -> &LocalizedMSet {
        &self.localized[&(i, j)]
    }

    pub fn psi(&self, i: usize, j: usize) -> &[usize] {
        &self.psi[&(i, j)]
    }

    /// `a ∈ A_i ↦ ψ_ij(a/1)` as a least fraction `(b, t)` of `A_j`.
    pub fn transport(&self, i: usize, j: usize, a: usize) -> (usize, Elem) {
        let c = self.psi[&(i, j)][self.localized[&(i, j)].beta()[a]];
        self.localized[&(j, i)].fractions().rep(c)
    }

    /// Carrier sizes per chart.
    pub fn sizes(&self) -> Vec<usize> {
        self.charts.iter().map(MSet::size).collect()
    }

    /// `ψ_jk ∘ ψ_ij = ψ_ik` on triple overlaps, compared in `A_k` localized
    /// at `f_ki` and `f_kj`.
    fn check_cocycle(&self, x: &MonoidScheme) -> Result<(), SchemeError> {
        for (i, j) in x.overlap_pairs() {
            for k in (0..x.chart_count()).filter(|&k| k != i && k != j && x.overlap(j, k).is_some()) {
                let (ik, jk) = (x.overlap(i, k).unwrap(), x.overlap(j, k).unwrap());
                let mk = x.chart(k);
                let t = LocalizedMonoid::new(mk, &mk.submonoid_generated([ik.f_there, jk.f_there].into_iter().collect()));
                let tset = LocalizedMSet::new(&self.charts[k], &t);
                for a in 0..self.charts[i].size() {
                    let (c, v) = self.transport(i, k, a);
                    let direct = tset.fraction(c, v);
                    let (b, s) = self.transport(i, j, a);
                    let (c, v) = self.transport(j, k, b);
                    let (d, u) = jk.transport(s);
                    let denom = t
                        .result()
                        .inverse(t.fraction(d, u))
                        .ok_or_else(|| sheaf_err(format!("{}: denominator of {a} not invertible on ({i}, {j}, {k})", self.name)))?;
                    let via = tset.result().act(tset.fraction(c, v), denom);
                    if via != direct {
                        return Err(SchemeError::Cocycle { i, j, k, witness: format!("{}: element {a}", self.name) });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `O_X`: the regular chart sets glued by `φ`.
pub fn structure_sheaf(x: &MonoidScheme) -> QcSheaf {
    let charts = x.charts().iter().map(MSet::regular).collect();
    let psi = x.overlap_pairs().filter(|&(i, j)| i < j).map(|(i, j)| ((i, j), x.overlap(i, j).unwrap().phi.map().to_vec())).collect();
    QcSheaf::new(x, "O", charts, psi).expect("structure sheaf glues")
}

/// The terminal sheaf: one point per chart.
pub fn terminal_sheaf(x: &MonoidScheme) -> QcSheaf {
    let charts = x.charts().iter().map(MSet::terminal).collect();
    let psi = x.overlap_pairs().filter(|&(i, j)| i < j).map(|p| (p, vec![0])).collect();
    QcSheaf::new(x, "1", charts, psi).expect("terminal sheaf glues")
}

/// `Ω_X`: `Ω^{M_i}` on each chart, glued through the isomorphisms
/// `(Ω^{M_i})_f ≅ Ω^{(M_i)_f}`, the ideal image under `φ_ij`, and back.
pub fn omega_sheaf(x: &MonoidScheme) -> Result<QcSheaf, CheckFailure> {
    let omegas: Vec<Omega> = x.charts().iter().map(Omega::new).collect();
    let mut psi = BTreeMap::new();
    for (i, j) in x.overlap_pairs().filter(|&(i, j)| i < j) {
        let (ij, ji) = (x.overlap(i, j).unwrap(), x.overlap(j, i).unwrap());
        let here = omega_localization_iso(&ij.loc_here)?;
        let there = omega_localization_iso(&ji.loc_here)?;
        let map = here
            .map
            .iter()
            .map(|&v| {
                let image = ij.phi.image(here.target.ideal(v));
                there.inverse[there.target.index_of(image).expect("φ maps ideals to ideals")]
            })
            .collect();
        psi.insert((i, j), map);
    }
    let charts = omegas.iter().map(|o| o.mset().clone()).collect();
    QcSheaf::new(x, "Omega", charts, psi).map_err(|e| CheckFailure::new("omega-sheaf-glues", e.to_string()))
}

/// `h_f: A_f -> B_f`, `a/s ↦ h(a)/s`.
pub fn localize_map(la: &LocalizedMSet, lb: &LocalizedMSet, h: &[usize]) -> Vec<usize> {
    (0..la.fractions().count())
        .map(|c| {
            let (a, s) = la.fractions().rep(c);
            lb.fraction(h[a], s)
        })
        .collect()
}

/// Chartwise equivariant maps commuting with the gluings.
pub fn is_morphism(x: &MonoidScheme, a: &QcSheaf, b: &QcSheaf, h: &[Vec<usize>]) -> bool {
    (0..x.chart_count()).all(|i| a.chart(i).check_equivariant(b.chart(i), &h[i]).is_ok())
        && x.overlap_pairs().all(|(i, j)| {
            let hi = localize_map(a.localized(i, j), b.localized(i, j), &h[i]);
            let hj = localize_map(a.localized(j, i), b.localized(j, i), &h[j]);
            let (pa, pb) = (a.psi(i, j), b.psi(i, j));
            (0..hi.len()).all(|c| pb[hi[c]] == hj[pa[c]])
        })
}

/// Every morphism `a -> b`, chartwise maps in lexicographic order.
pub fn qc_homs(x: &MonoidScheme, a: &QcSheaf, b: &QcSheaf) -> Vec<Vec<Vec<usize>>> {
    qc_homs_filtered(x, a, b, |_, _, _| true)
}

/// Morphisms whose chart maps satisfy `allowed(chart, a, h(a))`, found
/// chart by chart with each overlap checked as soon as both ends are set.
pub fn qc_homs_filtered(x: &MonoidScheme, a: &QcSheaf, b: &QcSheaf, allowed: impl Fn(usize, usize, usize) -> bool) -> Vec<Vec<Vec<usize>>> {
    let n = x.chart_count();
    let per_chart: Vec<Vec<Vec<usize>>> = (0..n).map(|i| a.chart(i).hom_maps_filtered(b.chart(i), |p, v| allowed(i, p, v))).collect();
    // localized[(i, j)][k]: candidate k of chart i on the overlap with j
    let mut localized: BTreeMap<(usize, usize), Vec<Vec<usize>>> = BTreeMap::new();
    for (i, j) in x.overlap_pairs() {
        let maps = per_chart[i].iter().map(|h| localize_map(a.localized(i, j), b.localized(i, j), h)).collect();
        localized.insert((i, j), maps);
    }
    let agrees = |i: usize, j: usize, ki: usize, kj: usize| {
        let (hi, hj) = (&localized[&(i, j)][ki], &localized[&(j, i)][kj]);
        let (pa, pb) = (a.psi(i, j), b.psi(i, j));
        (0..hi.len()).all(|c| pb[hi[c]] == hj[pa[c]])
    };
    let counts: Vec<usize> = per_chart.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    let mut choice = Vec::with_capacity(n);
    search_charts(
        &mut choice,
        &counts,
        &|i, k, choice: &[usize]| (0..i).all(|j| x.overlap(j, i).is_none() || agrees(j, i, choice[j], k)),
        &mut out,
    );
    let homs: Vec<Vec<Vec<usize>>> =
        out.into_iter().map(|c| c.iter().enumerate().map(|(i, &k)| per_chart[i][k].clone()).collect()).collect();
    debug_assert!(homs.iter().all(|h| is_morphism(x, a, b, h)));
    homs
}

fn search_charts(choice: &mut Vec<usize>, counts: &[usize], fits: &dyn Fn(usize, usize, &[usize]) -> bool, out: &mut Vec<Vec<usize>>) {
    let i = choice.len();
    if i == counts.len() {
        out.push(choice.clone());
        return;
    }
    for k in 0..counts[i] {
        if fits(i, k, choice) {
            choice.push(k);
            search_charts(choice, counts, fits, out);
            choice.pop();
        }
    }
}

pub(crate) fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for options in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Every sheaf whose chart carriers have at most `max_k` points: each chart
/// up to isomorphism, with every compatible choice of gluing.
pub fn enumerate_qc_sheaves(x: &MonoidScheme, max_k: usize) -> Vec<QcSheaf> {
    let per_chart: Vec<Vec<MSet>> = x.charts().iter().map(|m| enumerate_msets_up_to(m, max_k)).collect();
    let pairs: Vec<(usize, usize)> = x.overlap_pairs().filter(|&(i, j)| i < j).collect();
    let mut out = Vec::new();
    for charts in cartesian(&per_chart) {
        let options: Vec<Vec<Vec<usize>>> = pairs
            .iter()
            .map(|&(i, j)| {
                let ov = x.overlap(i, j).unwrap();
                let li = LocalizedMSet::new(&charts[i], &ov.loc_here);
                let lj = LocalizedMSet::new(&charts[j], &ov.loc_there);
                let target = lj.result().restrict_scalars(&ov.phi);
                li.result().hom_maps(&target).into_iter().filter(|h| is_bijection(h, target.size())).collect()
            })
            .collect();
        for choice in cartesian(&options) {
            let psi = pairs.iter().copied().zip(choice).collect();
            let label: Vec<String> = charts.iter().map(|c| c.size().to_string()).collect();
            let name = format!("F{}[{}]", out.len(), label.join(","));
            if let Ok(s) = QcSheaf::new(x, name, charts.clone(), psi) {
                out.push(s);
            }
        }
    }
    out
}

/// The stalk at a point computed in one chart containing it.
#[derive(Clone, Debug)]
pub struct Stalk {
    pub chart: usize,
    pub prime: usize,
    pub monoid: LocalizedMonoid,
    pub set: LocalizedMSet,
}

pub fn stalk_in_chart(x: &MonoidScheme, f: &QcSheaf, chart: usize, prime: usize) -> Stalk {
    let m = x.chart(chart);
    let monoid = LocalizedMonoid::new(m, &prime_complement(m, x.spec(chart).prime(prime)));
    let set = LocalizedMSet::new(f.chart(chart), &monoid);
    Stalk { chart, prime, monoid, set }
}

/// The stalk at `point`, computed in its first chart.
pub fn stalk(x: &MonoidScheme, f: &QcSheaf, point: usize) -> Stalk {
    let (i, p) = x.home(point);
    stalk_in_chart(x, f, i, p)
}

/// The canonical map between stalks of the same point computed in charts
/// `from.chart` and `to.chart`: `a/s ↦ ψ(a/1)·φ(s/1)⁻¹`.
pub fn transport_stalk(x: &MonoidScheme, f: &QcSheaf, from: &Stalk, to: &Stalk) -> Vec<usize> {
    let (i, j) = (from.chart, to.chart);
    if i == j {
        return (0..from.set.fractions().count()).collect();
    }
    let ov = x.overlap(i, j).expect("point lies in both charts");
    let mj = x.chart(j);
    (0..from.set.fractions().count())
        .map(|c| {
            let (a, s) = from.set.fractions().rep(c);
            let (b, t) = f.transport(i, j, a);
            let (d, v) = ov.transport(s);
            to.set.fraction(f.chart(j).act(b, v), mj.mul(t, d))
        })
        .collect()
}

/// Stalks computed in different charts agree through the canonical maps,
/// which are bijective and equivariant over the monoid transport.
pub fn verify_stalk_independence(x: &MonoidScheme, f: &QcSheaf) -> CheckResult {
    let o = structure_sheaf(x);
    for point in 0..x.point_count() {
        let reps = x.representatives(point);
        for &(i, p) in reps {
            for &(j, q) in reps.iter().filter(|&&(j, _)| j != i) {
                let (si, sj) = (stalk_in_chart(x, f, i, p), stalk_in_chart(x, f, j, q));
                let (oi, oj) = (stalk_in_chart(x, &o, i, p), stalk_in_chart(x, &o, j, q));
                let map = transport_stalk(x, f, &si, &sj);
                let mono = transport_stalk(x, &o, &oi, &oj);
                let label = || format!("{} at {} from chart {i} to {j}", f.name(), x.format_point(point));
                ensure(is_bijection(&map, sj.set.result().size()), "stalk-chart-independent", label)?;
                ensure(is_bijection(&mono, oj.set.result().size()), "stalk-chart-independent", label)?;
                let (ai, aj) = (si.set.result(), sj.set.result());
                for c in 0..ai.size() {
                    for m in ai.monoid().elements() {
                        ensure(map[ai.act(c, m)] == aj.act(map[c], mono[m]), "stalk-transport-equivariant", label)?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// The classes of `A_f` represented by numerators in `sub`.
fn localized_subset(la: &LocalizedMSet, sub: ElemSet) -> ElemSet {
    sub.iter().flat_map(|a| la.fractions().denominators().iter().map(move |&s| la.fraction(a, s))).collect()
}

/// Chartwise sub-M-sets matched by every gluing.
pub fn is_subsheaf(x: &MonoidScheme, a: &QcSheaf, sub: &[ElemSet]) -> bool {
    (0..x.chart_count()).all(|i| a.chart(i).is_sub_mset(sub[i]))
        && x.overlap_pairs().all(|(i, j)| {
            let here = localized_subset(a.localized(i, j), sub[i]);
            let there = localized_subset(a.localized(j, i), sub[j]);
            here.iter().map(|c| a.psi(i, j)[c]).collect::<ElemSet>() == there
        })
}

pub fn subsheaves(x: &MonoidScheme, a: &QcSheaf) -> Vec<Vec<ElemSet>> {
    let per_chart: Vec<Vec<ElemSet>> = a.charts().iter().map(MSet::sub_msets).collect();
    cartesian(&per_chart).into_iter().filter(|s| is_subsheaf(x, a, s)).collect()
}

/// The chartwise characteristic maps form the unique morphism `A -> Ω_X`
/// whose pullback of `t` is `sub`.
pub fn verify_qc_classifier(x: &MonoidScheme, omega_x: &QcSheaf, a: &QcSheaf, sub: &[ElemSet]) -> CheckResult {
    let omegas: Vec<Omega> = x.charts().iter().map(Omega::new).collect();
    let label = || format!("{} on {}, sub {:?}", a.name(), x.name(), sub);
    let chi: Vec<Vec<usize>> = (0..x.chart_count())
        .map(|i| characteristic_map(&omegas[i], a.chart(i), sub[i]))
        .collect::<Result<_, _>>()
        .map_err(|e| CheckFailure::new("qc-classifier-input", e.to_string()))?;
    ensure(is_morphism(x, a, omega_x, &chi), "qc-characteristic-glues", label)?;
    let homs = qc_homs_filtered(x, a, omega_x, |i, p, v| (v == omegas[i].top()) == sub[i].contains(p));
    ensure(homs == vec![chi], "qc-classifier-unique", || format!("{}: {} maps", label(), homs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scheme::build_scheme;

    #[test]
    fn structure_and_omega_sheaves_glue() {
        for g in corpus::schemes() {
            let x = build_scheme(&g).unwrap();
            let o = structure_sheaf(&x);
            verify_stalk_independence(&x, &o).unwrap();
            let om = omega_sheaf(&x).unwrap();
            verify_stalk_independence(&x, &om).unwrap();
        }
    }

    #[test]
    fn x2_omega_charts() {
        let x = build_scheme(&corpus::x2()).unwrap();
        let om = omega_sheaf(&x).unwrap();
        assert_eq!(om.sizes(), vec![4, 4]);
        assert_eq!(om.localized(0, 1).result().size(), 3);
    }

    #[test]
    fn stalk_examples() {
        let b = build_scheme(&crate::scheme::GluingData::affine(&corpus::b())).unwrap();
        let o = structure_sheaf(&b);
        assert_eq!(stalk(&b, &o, 0).set.result().size(), 1);
        assert_eq!(stalk(&b, &o, 1).set.result().size(), 2);
    }

    #[test]
    fn enumerated_sheaves_are_valid() {
        let x = build_scheme(&corpus::x2()).unwrap();
        let all = enumerate_qc_sheaves(&x, 2);
        assert!(!all.is_empty());
        for f in &all {
            verify_stalk_independence(&x, f).unwrap();
        }
        let w = build_scheme(&corpus::w()).unwrap();
        for f in enumerate_qc_sheaves(&w, 3) {
            verify_stalk_independence(&w, &f).unwrap();
        }
    }

    #[test]
    fn classifier_on_schemes() {
        for g in [corpus::x2(), corpus::y2(), corpus::b_plus_e(), corpus::w()] {
            let x = build_scheme(&g).unwrap();
            let om = omega_sheaf(&x).unwrap();
            for a in enumerate_qc_sheaves(&x, 2) {
                for sub in subsheaves(&x, &a) {
                    verify_qc_classifier(&x, &om, &a, &sub).unwrap();
                }
            }
        }
    }
}
