//! Sections over opens. Opens are down-sets of the specialization order,
//! the smallest open around `x` is `↓x`, and its sections are the stalk, so
//! `Γ(U, F)` is the limit of the stalks over `U` along restriction.

use std::collections::HashMap;

use crate::bitset::ElemSet;
use crate::check::{ensure, CheckFailure, CheckResult};
use crate::localization::{LocalizedMSet, LocalizedMonoid};
use crate::monoid::{FiniteCommMonoid, MonoidError, MonoidHom};
use crate::mset::MSet;

use super::qc::{cartesian, enumerate_qc_sheaves, qc_homs, stalk, stalk_in_chart, structure_sheaf, transport_stalk, QcSheaf, Stalk};
use super::MonoidScheme;

/// Restriction `F_from -> F_to` for `to <= from`, computed in the home
/// chart of `from` and transported to the home chart of `to`.
pub fn stalk_restriction(x: &MonoidScheme, f: &QcSheaf, from: usize, to: usize) -> Vec<usize> {
    let sx = stalk(x, f, from);
    let c = sx.chart;
    let q = x.local_prime(to, c).expect("a generization lies in every chart of the point");
    let in_chart = stalk_in_chart(x, f, c, q);
    let home = stalk(x, f, to);
    let t = transport_stalk(x, f, &in_chart, &home);
    (0..sx.set.fractions().count())
        .map(|cl| {
            let (a, s) = sx.set.fractions().rep(cl);
            t[in_chart.set.fraction(a, s)]
        })
        .collect()
}

/// `Γ(U, F)`: one value per point of `U` (in ascending point order), in the
/// point's home-chart stalk, compatible under every restriction.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub open: ElemSet,
    pub points: Vec<usize>,
    pub stalks: Vec<Stalk>,
    pub sections: Vec<Vec<usize>>,
}

impl SectionSpace {
    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.sections.iter().position(|t| t == s)
    }
}

/// Values at the maximal points of `U` are free; the rest follow by
/// restriction and every pair is then checked.
pub fn sections(x: &MonoidScheme, f: &QcSheaf, u: ElemSet) -> SectionSpace {
    let order = x.order();
    let points: Vec<usize> = u.iter().collect();
    let stalks: Vec<Stalk> = points.iter().map(|&p| stalk(x, f, p)).collect();
    let mut restrictions = Vec::new();
    for (a, &from) in points.iter().enumerate() {
        for (b, &to) in points.iter().enumerate() {
            if a != b && order.leq(to, from) {
                restrictions.push((a, b, stalk_restriction(x, f, from, to)));
            }
        }
    }
    let maximal: Vec<usize> = (0..points.len()).filter(|&a| !points.iter().any(|&q| q != points[a] && order.leq(points[a], q))).collect();
    let choices: Vec<Vec<usize>> = maximal.iter().map(|&a| (0..stalks[a].set.fractions().count()).collect()).collect();
    let mut out = Vec::new();
    for choice in cartesian(&choices) {
        let mut s = vec![usize::MAX; points.len()];
        for (&a, &v) in maximal.iter().zip(&choice) {
            s[a] = v;
        }
        for b in 0..points.len() {
            if s[b] == usize::MAX {
                let (a, _, r) =
                    restrictions.iter().find(|(a, bb, _)| *bb == b && maximal.contains(a)).expect("every point lies below a maximal one");
                s[b] = r[s[*a]];
            }
        }
        if restrictions.iter().all(|(a, b, r)| r[s[*a]] == s[*b]) {
            out.push(s);
        }
    }
    SectionSpace { open: u, points, stalks, sections: out }
}

/// `Γ(U, O)` with componentwise multiplication in the stalks.
pub fn section_monoid(x: &MonoidScheme, u: ElemSet) -> (FiniteCommMonoid, SectionSpace) {
    let o = structure_sheaf(x);
    let space = sections(x, &o, u);
    let index: HashMap<&[usize], usize> = space.sections.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mul = |s: &[usize], t: &[usize]| -> Vec<usize> {
        space.stalks.iter().enumerate().map(|(a, st)| st.monoid.result().mul(s[a], t[a])).collect()
    };
    let rows: Vec<Vec<usize>> =
        space.sections.iter().map(|s| space.sections.iter().map(|t| index[mul(s, t).as_slice()]).collect()).collect();
    let one: Vec<usize> = space.stalks.iter().map(|st| st.monoid.result().identity()).collect();
    let names: Vec<String> = space
        .sections
        .iter()
        .map(|s| {
            let parts: Vec<&str> = s.iter().zip(&space.stalks).map(|(&v, st)| st.monoid.result().element_name(v)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let m = FiniteCommMonoid::new(format!("Γ({}, O)", x.format_points(u)), &rows, index[one.as_slice()])
        .and_then(|m| m.with_names(names))
        .expect("sections of O form a commutative monoid");
    (m, space)
}

/// `Γ(U, F)` as a `Γ(U, O)`-set.
pub fn section_mset(x: &MonoidScheme, f: &QcSheaf, u: ElemSet) -> (MSet, FiniteCommMonoid) {
    let (gamma_o, o_space) = section_monoid(x, u);
    let space = sections(x, f, u);
    let rows: Vec<Vec<usize>> = space
        .sections
        .iter()
        .map(|s| {
            o_space
                .sections
                .iter()
                .map(|o| {
                    let t: Vec<usize> = space.stalks.iter().enumerate().map(|(a, st)| st.set.result().act(s[a], o[a])).collect();
                    space.index_of(&t).expect("sections are closed under the action")
                })
                .collect()
        })
        .collect();
    let set = MSet::new(format!("Γ({}, {})", x.format_points(u), f.name()), &gamma_o, &rows).expect("action laws hold componentwise");
    (set, gamma_o)
}

/// The centre: `Γ(X, O)`.
pub fn centre(x: &MonoidScheme) -> FiniteCommMonoid {
    section_monoid(x, x.all_points()).0.renamed(format!("Z({})", x.name()))
}

/// For a principal open `D(f)` of chart `i`, `Γ(D(f), O) ≅ (M_i)_f` and
/// `Γ(D(f), F) ≅ (A_i)_f` over `M_i`.
pub fn verify_chart_sections(x: &MonoidScheme, f: &QcSheaf, chart: usize, elem: usize) -> CheckResult {
    let m = x.chart(chart);
    let u: ElemSet = x.spec(chart).basic_open(elem).iter().map(|p| x.point_of(chart, p)).collect();
    let label = || format!("{} on {}, chart {chart} at {}", f.name(), x.name(), m.element_name(elem));
    let (gamma, o_space) = section_monoid(x, u);
    let loc = LocalizedMonoid::at_element(m, elem);
    ensure(gamma.is_isomorphic(loc.result()), "chart-sections-monoid", label)?;
    let (set, gamma2) = section_mset(x, f, u);
    let o = structure_sheaf(x);
    let germ_maps: Vec<Vec<usize>> = o_space
        .points
        .iter()
        .zip(&o_space.stalks)
        .map(|(&y, home)| {
            let local = stalk_in_chart(x, &o, chart, x.local_prime(y, chart).expect("D(f) lies in the chart"));
            let t = transport_stalk(x, &o, &local, home);
            m.elements().map(|g| t[local.monoid.loc_map().apply(g)]).collect()
        })
        .collect();
    let germs: Vec<usize> = m
        .elements()
        .map(|g| {
            let s: Vec<usize> = germ_maps.iter().map(|gm| gm[g]).collect();
            o_space.index_of(&s).expect("germs of chart elements are sections")
        })
        .collect();
    let germ = MonoidHom::new(m.clone(), gamma2.clone(), germs).map_err(|e| CheckFailure::new("chart-sections-germ", e.to_string()))?;
    let expected = LocalizedMSet::new(f.chart(chart), &loc).result().restrict_scalars(loc.loc_map());
    ensure(set.restrict_scalars(&germ).is_isomorphic(&expected), "chart-sections-mset", label)
}

/// `{(x_i) ∈ ∏ M_i : φ_ij(x_i/1) = x_j/1}` under componentwise multiplication.
pub fn chart_pullback(x: &MonoidScheme) -> FiniteCommMonoid {
    let choices: Vec<Vec<usize>> = x.charts().iter().map(|m| m.elements().collect()).collect();
    let tuples: Vec<Vec<usize>> = cartesian(&choices)
        .into_iter()
        .filter(|t| {
            x.overlap_pairs().all(|(i, j)| {
                let (ij, ji) = (x.overlap(i, j).unwrap(), x.overlap(j, i).unwrap());
                ij.phi.apply(ij.loc_here.loc_map().apply(t[i])) == ji.loc_here.loc_map().apply(t[j])
            })
        })
        .collect();
    let index: HashMap<Vec<usize>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let rows: Vec<Vec<usize>> = tuples
        .iter()
        .map(|s| {
            tuples
                .iter()
                .map(|t| {
                    let p: Vec<usize> = (0..s.len()).map(|i| x.chart(i).mul(s[i], t[i])).collect();
                    index[&p]
                })
                .collect()
        })
        .collect();
    let one: Vec<usize> = x.charts().iter().map(FiniteCommMonoid::identity).collect();
    FiniteCommMonoid::new(format!("lim({})", x.name()), &rows, index[&one]).expect("pullback of monoids is a monoid")
}

fn compose(h: &[Vec<usize>], g: &[Vec<usize>]) -> Vec<Vec<usize>> {
    h.iter().zip(g).map(|(hi, gi)| gi.iter().map(|&v| hi[v]).collect()).collect()
}

/// The natural endomorphisms of the identity on the full subcategory of
/// sheaves with charts of at most `max_k` points, together with `O_X`,
/// composed pointwise.
pub fn centre_oracle(x: &MonoidScheme, max_k: usize) -> Result<FiniteCommMonoid, MonoidError> {
    let mut objects = enumerate_qc_sheaves(x, max_k);
    objects.push(structure_sheaf(x));
    objects.sort_by_key(|f| f.sizes().iter().sum::<usize>());
    let n = objects.len();
    let ends: Vec<Vec<Vec<Vec<usize>>>> = objects.iter().map(|f| qc_homs(x, f, f)).collect();
    let homs: Vec<Vec<Vec<Vec<Vec<usize>>>>> = objects.iter().map(|f| objects.iter().map(|g| qc_homs(x, f, g)).collect()).collect();
    let consistent = |assign: &[usize], g: usize| -> bool {
        let eta_g = &ends[g][assign[g]];
        (0..=g).all(|f| {
            let eta_f = &ends[f][assign[f]];
            homs[f][g].iter().all(|h| compose(h, eta_f) == compose(eta_g, h))
                && homs[g][f].iter().all(|h| compose(h, eta_g) == compose(eta_f, h))
        })
    };
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut assign = vec![0usize; n];
    fn search(
        depth: usize,
        assign: &mut Vec<usize>,
        ends: &[Vec<Vec<Vec<usize>>>],
        consistent: &dyn Fn(&[usize], usize) -> bool,
        found: &mut Vec<Vec<usize>>,
    ) {
        if depth == assign.len() {
            found.push(assign.clone());
            return;
        }
        for e in 0..ends[depth].len() {
            assign[depth] = e;
            if consistent(assign, depth) {
                search(depth + 1, assign, ends, consistent, found);
            }
        }
    }
    search(0, &mut assign, &ends, &consistent, &mut found);
    let index: HashMap<Vec<usize>, usize> = found.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let end_index: Vec<HashMap<&Vec<Vec<usize>>, usize>> =
        ends.iter().map(|es| es.iter().enumerate().map(|(i, e)| (e, i)).collect()).collect();
    let rows: Vec<Vec<usize>> = found
        .iter()
        .map(|a| {
            found
                .iter()
                .map(|b| {
                    let c: Vec<usize> = (0..n).map(|f| end_index[f][&compose(&ends[f][a[f]], &ends[f][b[f]])]).collect();
                    index[&c]
                })
                .collect()
        })
        .collect();
    let identity: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(f, obj)| {
            let id: Vec<Vec<usize>> = obj.charts().iter().map(|c| (0..c.size()).collect()).collect();
            end_index[f][&id]
        })
        .collect();
    FiniteCommMonoid::new(format!("End(id, {})", x.name()), &rows, index[&identity])
}

/// `Γ(X, O)`, the chart pullback and the oracle agree.
pub fn verify_centre(x: &MonoidScheme, max_k: usize) -> CheckResult {
    let z = centre(x);
    let label = || format!("{}: |Z| = {}", x.name(), z.size());
    ensure(z.is_isomorphic(&chart_pullback(x)), "centre-is-pullback", label)?;
    let oracle = centre_oracle(x, max_k).map_err(|e| CheckFailure::new("centre-oracle", e.to_string()))?;
    ensure(z.is_isomorphic(&oracle), "centre-matches-oracle", || format!("{}, oracle {}", label(), oracle.size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scheme::qc::omega_sheaf;
    use crate::scheme::{build_scheme, GluingData};

    #[test]
    fn x2_centre_has_five_elements() {
        let x = build_scheme(&corpus::x2()).unwrap();
        assert_eq!(centre(&x).size(), 5);
        assert_eq!(chart_pullback(&x).size(), 5);
    }

    #[test]
    fn affine_centre_is_the_monoid() {
        for m in corpus::monoids() {
            let x = build_scheme(&GluingData::affine(&m)).unwrap();
            assert!(centre(&x).is_isomorphic(&m), "{}", m.name());
        }
    }

    #[test]
    fn affine_sections_are_localizations() {
        let affine = [corpus::b(), corpus::e(), corpus::f3(), corpus::n2()].iter().map(GluingData::affine).collect::<Vec<_>>();
        for g in affine.into_iter().chain(corpus::schemes()) {
            let x = build_scheme(&g).unwrap();
            let sheaves = [structure_sheaf(&x), omega_sheaf(&x).unwrap()];
            for i in 0..x.chart_count() {
                for f in x.chart(i).elements() {
                    for s in &sheaves {
                        verify_chart_sections(&x, s, i, f).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn disjoint_union_centre_is_product() {
        let x = build_scheme(&corpus::b_plus_e()).unwrap();
        assert!(centre(&x).is_isomorphic(&corpus::b().product(&corpus::e())));
    }

    #[test]
    fn centre_matches_oracle_on_x2() {
        let x = build_scheme(&corpus::x2()).unwrap();
        verify_centre(&x, 2).unwrap();
    }

    #[test]
    fn centre_matches_oracle_on_corpus() {
        for g in corpus::schemes() {
            let x = build_scheme(&g).unwrap();
            verify_centre(&x, 2).unwrap();
        }
    }
}
