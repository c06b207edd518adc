//! Opens as chartwise topologies, point direct images, the incidence test,
//! finite-limit preservation by stalks, and recovery of the space from
//! `Open(X)`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::check::{ensure, CheckFailure, CheckResult};
use crate::localization::{pullback_ideal, LocalizedMSet, LocalizedMonoid};
use crate::mset::{is_bijection, MSet};
use crate::poset::{birkhoff_points, FiniteLattice};
use crate::sheaf::is_sheaf;
use crate::topology::{verify_bijection, Family, Site};

use super::qc::{cartesian, qc_homs, stalk, terminal_sheaf, QcSheaf, Stalk};
use super::{prime_complement, MonoidScheme};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("pitchfork at {point} disagrees between charts: {answers:?}")]
    ChartDisagreement { point: String, answers: Vec<(usize, bool)> },
    #[error("{0} is not open")]
    NotOpen(String),
}

/// `Φ(U)`: `ϒ(U ∩ Spec(M_i))` on each chart.
pub fn phi(x: &MonoidScheme, sites: &[Site], u: ElemSet) -> Vec<Family> {
    (0..x.chart_count()).map(|i| sites[i].upsilon(x.restrict_open(i, u))).collect()
}

pub fn chart_sites(x: &MonoidScheme) -> Vec<Site> {
    x.charts().iter().map(Site::new).collect()
}

/// A topology `F` on `M` seen on `M_f`: `ϒ` of the primes of `M_f` whose
/// pullback lies in `Ξ(F)`.
pub fn restrict_topology(site: &Site, loc: &LocalizedMonoid, local: &Site, fam: &Family) -> Family {
    let points = site.xi(fam);
    let kept: ElemSet = (0..local.spec().size())
        .filter(|&q| {
            let p = pullback_ideal(loc.loc_map(), local.spec().prime(q));
            points.contains(site.spec().index_of(p).expect("pullback of a prime is prime"))
        })
        .collect();
    local.upsilon(kept)
}

/// Chart topologies agree on every overlap after transport along `φ_ij`.
pub fn is_compatible(x: &MonoidScheme, sites: &[Site], fams: &[Family]) -> bool {
    x.overlap_pairs().filter(|&(i, j)| i < j).all(|(i, j)| {
        let (ij, ji) = (x.overlap(i, j).unwrap(), x.overlap(j, i).unwrap());
        let (li, lj) = (Site::new(ij.loc_here.result()), Site::new(ji.loc_here.result()));
        let here = restrict_topology(&sites[i], &ij.loc_here, &li, &fams[i]);
        let there = restrict_topology(&sites[j], &ji.loc_here, &lj, &fams[j]);
        let moved = lj.family(here.iter().map(|b| lj.omega().index_of(ij.phi.image(li.ideal(b))).expect("φ maps ideals to ideals")));
        moved == there
    })
}

/// Every compatible family drawn from the chartwise topology lists.
pub fn compatible_families(x: &MonoidScheme, sites: &[Site]) -> Vec<Vec<Family>> {
    let per_chart: Vec<Vec<Family>> = sites.iter().map(Site::enumerate_topologies).collect();
    cartesian(&per_chart).into_iter().filter(|f| is_compatible(x, sites, f)).collect()
}

/// `Φ` is an order-reversing bijection from `Open(X)` onto the compatible
/// families, on top of the chartwise correspondences.
pub fn verify_phi_iso(x: &MonoidScheme) -> CheckResult {
    let sites = chart_sites(x);
    for site in &sites {
        verify_bijection(site)?;
    }
    let name = x.name();
    let opens = x.opens();
    let images: Vec<Vec<Family>> = opens.iter().map(|&u| phi(x, &sites, u)).collect();
    for (u, img) in opens.iter().zip(&images) {
        ensure(is_compatible(x, &sites, img), "phi-compatible", || format!("{name}: {}", x.format_points(*u)))?;
    }
    let mut families = compatible_families(x, &sites);
    families.sort();
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    ensure(sorted.len() == images.len(), "phi-injective", || name.to_string())?;
    ensure(sorted == families, "phi-surjective", || format!("{name}: {} opens, {} compatible families", opens.len(), families.len()))?;
    for (a, u) in opens.iter().enumerate() {
        for (b, v) in opens.iter().enumerate() {
            let contained = images[b].iter().zip(&images[a]).all(|(fv, fu)| fv.is_subset(fu));
            ensure(u.is_subset(*v) == contained, "phi-order-reversing", || {
                format!("{name}: {} and {}", x.format_points(*u), x.format_points(*v))
            })?;
        }
    }
    Ok(())
}

/// `p_*(S)` at prime `p` of chart `chart`: all maps `(M_i)_p -> S`, encoded
/// base `|S|` with the value at fraction `z` as digit `z`, acted on by
/// `(ψ·m)(z) = ψ(m/1 · z)`.
pub fn point_direct_image(x: &MonoidScheme, chart: usize, prime: usize, s: usize) -> MSet {
    assert!(s > 0, "S must be nonempty");
    let m = x.chart(chart);
    let loc = LocalizedMonoid::new(m, &prime_complement(m, x.spec(chart).prime(prime)));
    let l = loc.result();
    let count = s.pow(l.size() as u32);
    let digits = |code: usize| -> Vec<usize> { (0..l.size()).map(|z| code / s.pow(z as u32) % s).collect() };
    let encode = |d: &[usize]| -> usize { d.iter().enumerate().map(|(z, &v)| v * s.pow(z as u32)).sum() };
    let rows: Vec<Vec<usize>> = (0..count)
        .map(|code| {
            let psi = digits(code);
            m.elements()
                .map(|g| {
                    let lg = loc.loc_map().apply(g);
                    let moved: Vec<usize> = (0..l.size()).map(|z| psi[l.mul(lg, z)]).collect();
                    encode(&moved)
                })
                .collect()
        })
        .collect();
    MSet::new(format!("p_*({s})"), m, &rows).expect("direct image action")
}

/// `|Hom(A, p_*S)| = |S|^{|A_p|}` for each `A` in `objects`.
pub fn verify_direct_image_adjunction(x: &MonoidScheme, chart: usize, prime: usize, s: usize, objects: &[MSet]) -> CheckResult {
    let target = point_direct_image(x, chart, prime, s);
    let m = x.chart(chart);
    let loc = LocalizedMonoid::new(m, &prime_complement(m, x.spec(chart).prime(prime)));
    for a in objects {
        let stalk_size = LocalizedMSet::new(a, &loc).result().size();
        let homs = a.hom_maps(&target).len();
        ensure(homs == s.pow(stalk_size as u32), "direct-image-adjunction", || {
            format!("{} at chart {chart} prime {prime}, |S| = {s}: {homs} maps", a.name())
        })?;
    }
    Ok(())
}

/// `Π(x) ⋔ Φ(U)`: every test direct image at `x` is a sheaf for the chart
/// component of `Φ(U)`, evaluated in every chart containing `x`.
pub fn pitchfork(x: &MonoidScheme, sites: &[Site], point: usize, u: ElemSet, sizes: &[usize]) -> Result<bool, IncidenceError> {
    if !x.opens().contains(&u) {
        return Err(IncidenceError::NotOpen(x.format_points(u)));
    }
    let answers: Vec<(usize, bool)> = x
        .representatives(point)
        .iter()
        .map(|&(i, p)| {
            let topo = sites[i].upsilon(x.restrict_open(i, u));
            (i, sizes.iter().all(|&s| is_sheaf(&sites[i], &point_direct_image(x, i, p, s), &topo)))
        })
        .collect();
    if answers.iter().any(|&(_, v)| v != answers[0].1) {
        return Err(IncidenceError::ChartDisagreement { point: x.format_point(point), answers });
    }
    Ok(answers[0].1)
}

/// `pitchfork(x, U)` holds exactly when `x ∈ U`, over all points and opens.
pub fn verify_incidence(x: &MonoidScheme, sizes: &[usize]) -> CheckResult {
    let sites = chart_sites(x);
    for point in 0..x.point_count() {
        for &u in x.opens() {
            let got = pitchfork(x, &sites, point, u, sizes).map_err(|e| CheckFailure::new("pitchfork-chart-agreement", e.to_string()))?;
            ensure(got == u.contains(point), "pitchfork-iff-member", || {
                format!("{}: {} vs {}", x.name(), x.format_point(point), x.format_points(u))
            })?;
        }
    }
    Ok(())
}

/// `(A × B)_f ≅ A_f × B_f` by `(a, b)/s ↦ (a/s, b/s)`, indexed
/// `a·|B_f| + b`.
fn product_split(pair: &LocalizedMSet, la: &LocalizedMSet, lb: &LocalizedMSet, b_size: usize) -> Vec<usize> {
    let kb = lb.fractions().count();
    (0..pair.fractions().count())
        .map(|c| {
            let (ab, s) = pair.fractions().rep(c);
            la.fraction(ab / b_size, s) * kb + lb.fraction(ab % b_size, s)
        })
        .collect()
}

/// `A × B` with chart products glued through the canonical splittings.
pub fn product_sheaf(x: &MonoidScheme, a: &QcSheaf, b: &QcSheaf) -> QcSheaf {
    let charts: Vec<MSet> = (0..x.chart_count()).map(|i| a.chart(i).product(b.chart(i))).collect();
    let mut psi = BTreeMap::new();
    for (i, j) in x.overlap_pairs().filter(|&(i, j)| i < j) {
        let (ij, ji) = (x.overlap(i, j).unwrap(), x.overlap(j, i).unwrap());
        let here = LocalizedMSet::new(&charts[i], &ij.loc_here);
        let there = LocalizedMSet::new(&charts[j], &ji.loc_here);
        let split_i = product_split(&here, a.localized(i, j), b.localized(i, j), b.chart(i).size());
        let split_j = product_split(&there, a.localized(j, i), b.localized(j, i), b.chart(j).size());
        let mut join_j = vec![usize::MAX; split_j.iter().max().map_or(0, |&v| v + 1)];
        for (c, &v) in split_j.iter().enumerate() {
            join_j[v] = c;
        }
        let kb_i = b.localized(i, j).fractions().count();
        let kb_j = b.localized(j, i).fractions().count();
        let map = split_i
            .iter()
            .map(|&v| {
                let (pa, pb) = (a.psi(i, j)[v / kb_i], b.psi(i, j)[v % kb_i]);
                join_j[pa * kb_j + pb]
            })
            .collect();
        psi.insert((i, j), map);
    }
    QcSheaf::new(x, format!("{}×{}", a.name(), b.name()), charts, psi).expect("products of sheaves glue")
}

/// Stalks at every point preserve the terminal object, binary products and
/// equalizers of every pair and parallel pair among `objects`.
pub fn stalk_exactness_check(x: &MonoidScheme, objects: &[QcSheaf]) -> CheckResult {
    let one = terminal_sheaf(x);
    for point in 0..x.point_count() {
        ensure(stalk(x, &one, point).set.result().size() == 1, "stalk-terminal", || x.format_point(point))?;
    }
    let pairs: Vec<(usize, usize)> = (0..objects.len()).flat_map(|a| (0..objects.len()).map(move |b| (a, b))).collect();
    match pairs.par_iter().find_map_first(|&(a, b)| check_pair(x, &objects[a], &objects[b]).err()) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn check_pair(x: &MonoidScheme, a: &QcSheaf, b: &QcSheaf) -> CheckResult {
    let prod = product_sheaf(x, a, b);
    let homs = qc_homs(x, a, b);
    for point in 0..x.point_count() {
        let label = || format!("{} and {} at {}", a.name(), b.name(), x.format_point(point));
        let (sa, sb, sp) = (stalk(x, a, point), stalk(x, b, point), stalk(x, &prod, point));
        let split = product_split(&sp.set, &sa.set, &sb.set, b.chart(sp.chart).size());
        ensure(is_bijection(&split, sa.set.result().size() * sb.set.result().size()), "stalk-products", label)?;
        let c = sa.chart;
        let localized: Vec<Vec<usize>> = homs
            .iter()
            .map(|h| {
                (0..sa.set.fractions().count())
                    .map(|cl| {
                        let (v, s) = sa.set.fractions().rep(cl);
                        sb.set.fraction(h[c][v], s)
                    })
                    .collect()
            })
            .collect();
        let mut seen: HashMap<ElemSet, (ElemSet, bool)> = HashMap::new();
        for k in 0..homs.len() {
            for l in k + 1..homs.len() {
                let eq: ElemSet = (0..a.chart(c).size()).filter(|&v| homs[k][c][v] == homs[l][c][v]).collect();
                let (image, injective) = *seen.entry(eq).or_insert_with(|| equalizer_stalk(a.chart(c), eq, &sa));
                let expected: ElemSet = (0..localized[k].len()).filter(|&cl| localized[k][cl] == localized[l][cl]).collect();
                ensure(image == expected, "stalk-equalizer-image", label)?;
                ensure(injective, "stalk-equalizer-injective", label)?;
            }
        }
    }
    Ok(())
}

/// The image of `E_p -> A_p` for a sub-M-set `E ⊆ A`, and whether the map
/// is injective.
fn equalizer_stalk(a: &MSet, eq: ElemSet, sa: &Stalk) -> (ElemSet, bool) {
    let image: ElemSet = eq.iter().flat_map(|v| sa.monoid.fractions().denominators().iter().map(move |&s| sa.set.fraction(v, s))).collect();
    let (sub, _) = a.restrict_to(eq).expect("equalizers are sub-M-sets");
    let injective = LocalizedMSet::new(&sub, &sa.monoid).result().size() == image.len();
    (image, injective)
}

/// `Open(X)` recovers the points of `X` and their specialization order as
/// its join-irreducibles.
pub fn verify_reconstruction(x: &MonoidScheme) -> CheckResult {
    let lattice = FiniteLattice::of_sets(x.opens()).map_err(|e| CheckFailure::new("open-lattice", e.to_string()))?;
    let (irr, points) = birkhoff_points(&lattice).map_err(|e| CheckFailure::new("open-lattice", e.to_string()))?;
    ensure(points.is_isomorphic(x.order()), "reconstruction-round-trip", || {
        format!("{}: {} join-irreducibles for {} points", x.name(), irr.len(), x.point_count())
    })?;
    // each irreducible is the down-closure of exactly one point
    for &k in &irr {
        let u = x.opens()[k];
        ensure(
            (0..x.point_count()).filter(|&p| x.order().down_closure(ElemSet::singleton(p)) == u).count() == 1,
            "reconstruction-principal",
            || x.format_points(u),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::mset::enumerate_msets_up_to;
    use crate::scheme::qc::enumerate_qc_sheaves;
    use crate::scheme::{build_scheme, GluingData};

    #[test]
    fn phi_iso_on_corpus() {
        for g in corpus::schemes() {
            let x = build_scheme(&g).unwrap();
            verify_phi_iso(&x).unwrap();
        }
    }

    #[test]
    fn phi_extremes() {
        let x = build_scheme(&corpus::x2()).unwrap();
        let sites = chart_sites(&x);
        for (i, f) in phi(&x, &sites, x.all_points()).iter().enumerate() {
            assert_eq!(f.count(), 1, "chart {i}");
        }
        for (i, f) in phi(&x, &sites, ElemSet::EMPTY).iter().enumerate() {
            assert_eq!(f.count(), sites[i].ideal_count());
        }
    }

    #[test]
    fn direct_image_examples() {
        let x = build_scheme(&GluingData::affine(&corpus::b())).unwrap();
        assert_eq!(point_direct_image(&x, 0, 1, 2).size(), 4);
        assert_eq!(point_direct_image(&x, 0, 1, 1).size(), 1);
        let generic = point_direct_image(&x, 0, 0, 3);
        assert_eq!(generic.size(), 3);
        assert!((0..3).all(|v| generic.act(v, 1) == v));
        let objects = enumerate_msets_up_to(&corpus::b(), 3);
        for p in 0..2 {
            for s in 1..3 {
                verify_direct_image_adjunction(&x, 0, p, s, &objects).unwrap();
            }
        }
    }

    #[test]
    fn pitchfork_on_b() {
        let x = build_scheme(&GluingData::affine(&corpus::b())).unwrap();
        let sites = chart_sites(&x);
        let generic_only = ElemSet::singleton(x.point_of(0, 0));
        assert!(!pitchfork(&x, &sites, x.point_of(0, 1), generic_only, &[2]).unwrap());
        assert!(pitchfork(&x, &sites, x.point_of(0, 0), generic_only, &[2]).unwrap());
    }

    #[test]
    fn incidence_on_corpus() {
        for g in corpus::schemes() {
            verify_incidence(&build_scheme(&g).unwrap(), &[1, 2, 3]).unwrap();
        }
    }

    #[test]
    fn stalks_preserve_finite_limits() {
        for g in [corpus::x2(), corpus::b_plus_e(), GluingData::affine(&corpus::b())] {
            let x = build_scheme(&g).unwrap();
            let objects = enumerate_qc_sheaves(&x, 2);
            stalk_exactness_check(&x, &objects).unwrap();
        }
    }

    #[test]
    fn reconstruction_on_corpus() {
        for g in corpus::schemes() {
            verify_reconstruction(&build_scheme(&g).unwrap()).unwrap();
        }
    }
}
