//! Verification suites. Each suite expands into independent tasks, one
//! record each; tasks run on a worker pool and records come back in task
//! order, so reports do not depend on scheduling.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::check::{ensure, CheckFailure, CheckResult};
use crate::corpus;
use crate::counterexample::nat_counterexample;
use crate::ideals::{
    check_prime_tests_agree, enumerate_ideals, enumerate_ideals_exhaustive, order_topology, spec, verify_ideal_laws, verify_z_equals_order,
};
use crate::lawvere::{verify_lt_correspondence, verify_meet};
use crate::localization::{
    mono_criterion, omega_localization_iso, verify_ideal_transport, verify_localization_transport, LocalizedMSet, LocalizedMonoid,
};
use crate::monoid::{FiniteCommMonoid, MonoidHom};
use crate::mset::{enumerate_msets_up_to, MSet};
use crate::omega::{verify_classifier, verify_omega, Omega};
use crate::poset::{birkhoff_points, FiniteLattice};
use crate::scheme::incidence::{
    stalk_exactness_check, verify_direct_image_adjunction, verify_incidence, verify_phi_iso, verify_reconstruction,
};
use crate::scheme::qc::{enumerate_qc_sheaves, omega_sheaf, structure_sheaf, subsheaves, verify_qc_classifier, verify_stalk_independence};
use crate::scheme::sections::{centre, section_monoid, verify_centre, verify_chart_sections};
use crate::scheme::{build_scheme, GluingData, MonoidScheme};
use crate::sheaf::{verify_localizing_sheaves, verify_sheaf_conditions_agree, verify_sheafify_is_localization};
use crate::topology::{verify_bijection, verify_topology_lemmas, Site};

use super::report::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Ideals,
    Classifier,
    Localization,
    Topologies,
    Galois,
    Lawvere,
    Sheaves,
    Schemes,
    Reconstruction,
    Incidence,
    Stalks,
    Counterexample,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Ideals,
        Suite::Classifier,
        Suite::Localization,
        Suite::Topologies,
        Suite::Galois,
        Suite::Lawvere,
        Suite::Sheaves,
        Suite::Schemes,
        Suite::Reconstruction,
        Suite::Incidence,
        Suite::Stalks,
        Suite::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ideals => "ideals",
            Suite::Classifier => "classifier",
            Suite::Localization => "localization",
            Suite::Topologies => "topologies",
            Suite::Galois => "galois",
            Suite::Lawvere => "lawvere",
            Suite::Sheaves => "sheaves",
            Suite::Schemes => "schemes",
            Suite::Reconstruction => "reconstruction",
            Suite::Incidence => "incidence",
            Suite::Stalks => "stalks",
            Suite::Counterexample => "counterexample",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Largest M-set carrier enumerated by the monoid suites.
    pub max_carrier: usize,
    /// Chart carrier bound for enumerated sheaves in the centre oracle and
    /// the glued classifier.
    pub sheaf_carrier: usize,
    /// Chart carrier bound for the stalk limit checks.
    pub stalk_carrier: usize,
    pub pitchfork_sizes: Vec<usize>,
    pub max_s: u64,
    pub max_p: u64,
    /// Worker threads; `None` uses `MONOID_RECON_JOBS` or the rayon default.
    pub jobs: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_carrier: 4,
            sheaf_carrier: 2,
            stalk_carrier: 3,
            pitchfork_sizes: vec![1, 2, 3],
            max_s: 1_000_000,
            max_p: 1_000,
            jobs: None,
        }
    }
}

/// What the suites run over.
#[derive(Debug, Clone, Default)]
pub struct Target {
    pub monoids: Vec<FiniteCommMonoid>,
    pub msets: Vec<MSet>,
    pub schemes: Vec<GluingData>,
    /// Definitions that failed validation, as `(kind/name, problem)`.
    pub invalid: Vec<(String, String)>,
    /// Adds the built-in corpus expectations (fixed counts, the X2 shape).
    pub corpus: bool,
}

impl Target {
    pub fn corpus() -> Self {
        Target { monoids: corpus::monoids(), msets: Vec::new(), schemes: corpus::schemes(), invalid: Vec::new(), corpus: true }
    }
}

type Task<'a> = Box<dyn Fn() -> Record + Send + Sync + 'a>;

fn task<'a>(f: impl Fn() -> Record + Send + Sync + 'a) -> Task<'a> {
    Box::new(f)
}

fn mset_objects(m: &FiniteCommMonoid, target: &Target, max_k: usize) -> Vec<MSet> {
    let mut out = enumerate_msets_up_to(m, max_k);
    out.extend(target.msets.iter().filter(|a| a.monoid() == m).cloned());
    out
}

fn ideal_tasks<'a>(m: &'a FiniteCommMonoid) -> Vec<Task<'a>> {
    let n = m.name();
    vec![
        task(move || {
            Record::run(format!("ideals/{n}/enumeration"), "ideal-enumeration", || {
                let ideals = enumerate_ideals(m);
                ensure(ideals == enumerate_ideals_exhaustive(m), "ideal-enumerators-agree", || n.to_string())?;
                Ok(format!("{} ideals", ideals.len()))
            })
        }),
        task(move || Record::check(format!("ideals/{n}/quotient-laws"), "ideal-quotient-laws", || verify_ideal_laws(m))),
        task(move || {
            Record::run(format!("ideals/{n}/primes"), "prime-characterizations", || {
                check_prime_tests_agree(m)?;
                Ok(format!("{} primes", spec(m).size()))
            })
        }),
        task(move || Record::check(format!("ideals/{n}/zariski-is-order"), "zariski-equals-order", || verify_z_equals_order(m))),
    ]
}

fn classifier_tasks<'a>(m: &'a FiniteCommMonoid, target: &'a Target, cfg: &'a SuiteConfig) -> Vec<Task<'a>> {
    let n = m.name();
    vec![
        task(move || {
            Record::run(format!("classifier/{n}/omega"), "omega-mset", || {
                let om = Omega::new(m);
                verify_omega(&om)?;
                Ok(format!("|Ω| = {}", om.size()))
            })
        }),
        task(move || Record::check(format!("classifier/{n}/meet"), "meet-by-classifier", || verify_meet(&Site::new(m)))),
        task(move || {
            Record::run(format!("classifier/{n}/subobjects"), "classifier-pullback-unique", || {
                let om = Omega::new(m);
                let objects = mset_objects(m, target, cfg.max_carrier);
                let mut count = 0;
                for a in &objects {
                    for sub in a.sub_msets() {
                        verify_classifier(&om, a, sub)?;
                        count += 1;
                    }
                }
                Ok(format!("{count} subobjects of {} M-sets", objects.len()))
            })
        }),
    ]
}

/// Homomorphisms from `m` into each of `codomains`.
fn homs_from(m: &FiniteCommMonoid, codomains: &[FiniteCommMonoid]) -> Vec<MonoidHom> {
    codomains.iter().flat_map(|n| MonoidHom::enumerate(m, n)).collect()
}

fn localization_tasks<'a>(m: &'a FiniteCommMonoid, target: &'a Target, cfg: &'a SuiteConfig) -> Vec<Task<'a>> {
    let n = m.name();
    vec![
        task(move || {
            Record::run(format!("localization/{n}/monoids"), "localization-universal", || {
                let subs = m.all_submonoids();
                let small: Vec<&FiniteCommMonoid> = target.monoids.iter().filter(|t| t.size() <= 4).collect();
                for s in &subs {
                    let loc = LocalizedMonoid::new(m, s);
                    loc.verify()?;
                    for t in &small {
                        loc.verify_universal_property(t)?;
                    }
                }
                Ok(format!("{} submonoids", subs.len()))
            })
        }),
        task(move || {
            Record::run(format!("localization/{n}/ideal-transport"), "ideal-transport", || {
                let homs = homs_from(m, &target.monoids);
                for f in &homs {
                    verify_ideal_transport(f)?;
                }
                Ok(format!("{} homomorphisms", homs.len()))
            })
        }),
        task(move || {
            Record::check(format!("localization/{n}/localization-transport"), "localization-transport", || {
                m.all_submonoids().iter().try_for_each(|s| verify_localization_transport(&LocalizedMonoid::new(m, s)))
            })
        }),
        task(move || {
            Record::check(format!("localization/{n}/omega"), "omega-localization", || {
                m.all_submonoids().iter().try_for_each(|s| omega_localization_iso(&LocalizedMonoid::new(m, s)).map(|_| ()))
            })
        }),
        task(move || {
            Record::run(format!("localization/{n}/msets"), "mset-localization", || {
                let objects = mset_objects(m, target, cfg.max_carrier.min(3));
                let mut monos = 0;
                for s in m.all_submonoids() {
                    let loc = LocalizedMonoid::new(m, &s);
                    for a in &objects {
                        LocalizedMSet::new(a, &loc).verify(&loc)?;
                    }
                    for b in enumerate_msets_up_to(loc.result(), 2) {
                        let over_m = b.restrict_scalars(loc.loc_map());
                        for a in objects.iter().filter(|a| a.size() <= 2) {
                            for alpha in a.hom_maps(&over_m) {
                                mono_criterion(&loc, a, &b, &alpha)?;
                                monos += 1;
                            }
                        }
                    }
                }
                Ok(format!("{monos} mono-criterion cases"))
            })
        }),
    ]
}

fn topology_tasks<'a>(m: &'a FiniteCommMonoid) -> Vec<Task<'a>> {
    let n = m.name();
    vec![
        task(move || {
            let id = format!("topologies/{n}/enumeration");
            let site = Site::new(m);
            if site.ideal_count() > 16 {
                return Record::skipped(id, "topology-enumeration", "more than 16 ideals");
            }
            Record::run(id, "topology-enumeration", || {
                let tops = site.enumerate_topologies();
                ensure(tops == site.enumerate_topologies_brute_force(), "pruned-matches-brute-force", || n.to_string())?;
                Ok(format!("{} topologies", tops.len()))
            })
        }),
        task(move || Record::check(format!("topologies/{n}/lemmas"), "topology-lemmas", || verify_topology_lemmas(&Site::new(m)))),
    ]
}

fn galois_tasks<'a>(m: &'a FiniteCommMonoid) -> Vec<Task<'a>> {
    let n = m.name();
    vec![task(move || {
        Record::run(format!("galois/{n}/bijection"), "opens-topologies-bijection", || {
            let c = verify_bijection(&Site::new(m))?;
            Ok(format!("{} topologies, {} opens", c.topologies.len(), c.order_opens.len()))
        })
    })]
}

/// Fixed topology counts on the small corpus monoids.
pub const TOPOLOGY_COUNTS: [(&str, usize); 5] = [("B", 3), ("E", 4), ("F3", 3), ("C2", 2), ("T", 2)];

fn corpus_count_task<'a>() -> Task<'a> {
    task(|| {
        Record::check("galois/corpus-counts", "topology-counts", || {
            for (name, expected) in TOPOLOGY_COUNTS {
                let m = corpus::monoid_by_name(name).expect("corpus monoid");
                let got = Site::new(&m).enumerate_topologies_brute_force().len();
                ensure(got == expected, "topology-count", || format!("{name}: {got}, expected {expected}"))?;
            }
            Ok(())
        })
    })
}

fn lawvere_tasks<'a>(m: &'a FiniteCommMonoid) -> Vec<Task<'a>> {
    let n = m.name();
    vec![task(move || {
        let id = format!("lawvere/{n}/correspondence");
        if m.size() > 4 {
            return Record::skipped(id, "lt-correspondence", "endomap scan limited to |M| <= 4");
        }
        Record::check(id, "lt-correspondence", || verify_lt_correspondence(&Site::new(m)))
    })]
}

fn sheaf_tasks<'a>(m: &'a FiniteCommMonoid, cfg: &'a SuiteConfig) -> Vec<Task<'a>> {
    let n = m.name();
    vec![
        task(move || {
            Record::check(format!("sheaves/{n}/basic-open-sheaves"), "basic-open-sheaves", || {
                verify_localizing_sheaves(&Site::new(m), cfg.max_carrier)
            })
        }),
        task(move || {
            Record::check(format!("sheaves/{n}/sheafify-localizes"), "sheafify-is-localization", || {
                verify_sheafify_is_localization(&Site::new(m), cfg.max_carrier)
            })
        }),
        task(move || {
            let id = format!("sheaves/{n}/sheaf-conditions");
            if m.size() > 4 {
                return Record::skipped(id, "sheaf-condition-agreement", "density scan limited to |M| <= 4");
            }
            Record::check(id, "sheaf-condition-agreement", || verify_sheaf_conditions_agree(&Site::new(m), 2))
        }),
    ]
}

fn built(g: &GluingData) -> Result<MonoidScheme, CheckFailure> {
    build_scheme(g).map_err(|e| CheckFailure::new("scheme-build", e.to_string()))
}

fn scheme_tasks<'a>(g: &'a GluingData, cfg: &'a SuiteConfig) -> Vec<Task<'a>> {
    let n = g.name.as_str();
    vec![
        task(move || {
            Record::run(format!("schemes/{n}/build"), "scheme-gluing", || {
                let x = built(g)?;
                ensure(x.opens() == x.opens_by_charts().as_slice(), "opens-by-charts", || n.to_string())?;
                Ok(format!("{} points, {} opens", x.point_count(), x.opens().len()))
            })
        }),
        task(move || {
            Record::check(format!("schemes/{n}/stalks"), "stalk-chart-independence", || {
                let x = built(g)?;
                verify_stalk_independence(&x, &structure_sheaf(&x))?;
                verify_stalk_independence(&x, &omega_sheaf(&x)?)
            })
        }),
        task(move || {
            Record::check(format!("schemes/{n}/chart-sections"), "chart-principal-sections", || {
                let x = built(g)?;
                let sheaves = [structure_sheaf(&x), omega_sheaf(&x)?];
                for i in 0..x.chart_count() {
                    for f in x.chart(i).elements() {
                        for s in &sheaves {
                            verify_chart_sections(&x, s, i, f)?;
                        }
                    }
                }
                Ok(())
            })
        }),
        task(move || {
            Record::run(format!("schemes/{n}/glued-classifier"), "glued-classifier", || {
                let x = built(g)?;
                let om = omega_sheaf(&x)?;
                let mut count = 0;
                for a in enumerate_qc_sheaves(&x, cfg.sheaf_carrier) {
                    for sub in subsheaves(&x, &a) {
                        verify_qc_classifier(&x, &om, &a, &sub)?;
                        count += 1;
                    }
                }
                Ok(format!("{count} subsheaves"))
            })
        }),
        task(move || {
            Record::run(format!("schemes/{n}/centre"), "centre-pullback-oracle", || {
                let x = built(g)?;
                verify_centre(&x, cfg.sheaf_carrier)?;
                Ok(format!("|Z| = {}", centre(&x).size()))
            })
        }),
        task(move || Record::check(format!("schemes/{n}/phi"), "opens-as-chart-topologies", || verify_phi_iso(&built(g)?))),
    ]
}

/// The glued example's fixed shape: four points and the five global
/// sections `(1,1), (1,e), (e,1), (e,e), (0,0)`.
pub fn verify_x2_shape(x: &MonoidScheme) -> CheckResult {
    ensure(x.point_count() == 4, "x2-points", || format!("{} points", x.point_count()))?;
    let (gamma, space) = section_monoid(x, x.all_points());
    ensure(gamma.size() == 5, "x2-global-sections", || format!("{} sections", gamma.size()))?;
    let e = x.chart(0);
    let pairs: Vec<(usize, usize)> = (0..gamma.size())
        .map(|s| {
            let sec = &space.sections[s];
            let pick = |chart: usize| {
                let closed = x.point_of(chart, x.spec(chart).size() - 1);
                let a = space.points.iter().position(|&p| p == closed).expect("closed point");
                space.stalks[a].monoid.fractions().rep(sec[a]).0
            };
            (pick(0), pick(1))
        })
        .collect();
    let mut names: Vec<String> = pairs.iter().map(|&(a, b)| format!("({},{})", e.element_name(a), e.element_name(b))).collect();
    names.sort();
    let expected = ["(0,0)", "(1,1)", "(1,e)", "(e,1)", "(e,e)"];
    ensure(names == expected, "x2-section-elements", || names.join(" "))
}

fn incidence_tasks<'a>(g: &'a GluingData, cfg: &'a SuiteConfig) -> Vec<Task<'a>> {
    let n = g.name.as_str();
    vec![
        task(move || {
            Record::run(format!("incidence/{n}/pitchfork"), "pitchfork-incidence", || {
                let x = built(g)?;
                verify_incidence(&x, &cfg.pitchfork_sizes)?;
                Ok(format!("{} points × {} opens", x.point_count(), x.opens().len()))
            })
        }),
        task(move || {
            Record::check(format!("incidence/{n}/adjunction"), "direct-image-adjunction", || {
                let x = built(g)?;
                for point in 0..x.point_count() {
                    for &(i, p) in x.representatives(point) {
                        let objects = enumerate_msets_up_to(x.chart(i), 2);
                        for s in [1, 2] {
                            verify_direct_image_adjunction(&x, i, p, s, &objects)?;
                        }
                    }
                }
                Ok(())
            })
        }),
    ]
}

fn reconstruction_tasks<'a>(g: &'a GluingData) -> Vec<Task<'a>> {
    let n = g.name.as_str();
    vec![task(move || {
        Record::run(format!("reconstruction/{n}"), "reconstruction-round-trip", || {
            let x = built(g)?;
            verify_reconstruction(&x)?;
            Ok(format!("{} points from {} opens", x.point_count(), x.opens().len()))
        })
    })]
}

fn spectrum_reconstruction_task<'a>(m: &'a FiniteCommMonoid) -> Task<'a> {
    let n = m.name();
    task(move || {
        Record::check(format!("reconstruction/spec/{n}"), "spectrum-round-trip", || {
            let sp = spec(m);
            let lattice =
                FiniteLattice::of_sets(order_topology(&sp).opens()).map_err(|e| CheckFailure::new("open-lattice", e.to_string()))?;
            let (_, points) = birkhoff_points(&lattice).map_err(|e| CheckFailure::new("open-lattice", e.to_string()))?;
            ensure(points.is_isomorphic(sp.order()), "spectrum-round-trip", || n.to_string())
        })
    })
}

fn stalk_tasks<'a>(g: &'a GluingData, cfg: &'a SuiteConfig) -> Vec<Task<'a>> {
    let n = g.name.as_str();
    vec![task(move || {
        Record::run(format!("stalks/{n}/finite-limits"), "stalk-finite-limits", || {
            let x = built(g)?;
            let objects = enumerate_qc_sheaves(&x, cfg.stalk_carrier);
            stalk_exactness_check(&x, &objects)?;
            Ok(format!("{} sheaves", objects.len()))
        })
    })]
}

fn counterexample_task<'a>(cfg: &'a SuiteConfig) -> Task<'a> {
    task(move || {
        Record::run("counterexample/nat", "nat-counterexample", || {
            let t = nat_counterexample(cfg.max_s, cfg.max_p).map_err(|e| CheckFailure::new("nat-counterexample", e.to_string()))?;
            let mut hist = String::new();
            for (p, c) in t.histogram() {
                let _ = write!(hist, " {p}:{c}");
            }
            Ok(format!("s <= {}: largest witness {}; by prime{hist}", t.max_s, t.largest_prime_used()))
        })
    })
}

fn tasks<'a>(target: &'a Target, suites: &[Suite], cfg: &'a SuiteConfig) -> Vec<Task<'a>> {
    let mut out: Vec<Task<'a>> = Vec::new();
    for (name, problem) in &target.invalid {
        out.push(task(move || {
            Record::check(format!("input/{name}"), "input-validation", || Err(CheckFailure::new("invalid-definition", problem.clone())))
        }));
    }
    for &suite in suites {
        match suite {
            Suite::Ideals => target.monoids.iter().for_each(|m| out.extend(ideal_tasks(m))),
            Suite::Classifier => target.monoids.iter().for_each(|m| out.extend(classifier_tasks(m, target, cfg))),
            Suite::Localization => target.monoids.iter().for_each(|m| out.extend(localization_tasks(m, target, cfg))),
            Suite::Topologies => target.monoids.iter().for_each(|m| out.extend(topology_tasks(m))),
            Suite::Galois => {
                target.monoids.iter().for_each(|m| out.extend(galois_tasks(m)));
                if target.corpus {
                    out.push(corpus_count_task());
                }
            }
            Suite::Lawvere => target.monoids.iter().for_each(|m| out.extend(lawvere_tasks(m))),
            Suite::Sheaves => target.monoids.iter().for_each(|m| out.extend(sheaf_tasks(m, cfg))),
            Suite::Schemes => {
                target.schemes.iter().for_each(|g| out.extend(scheme_tasks(g, cfg)));
                if target.corpus {
                    out.push(task(|| Record::check("schemes/X2/shape", "x2-shape", || verify_x2_shape(&built(&corpus::x2())?))));
                }
            }
            Suite::Reconstruction => {
                target.monoids.iter().for_each(|m| out.push(spectrum_reconstruction_task(m)));
                target.schemes.iter().for_each(|g| out.extend(reconstruction_tasks(g)));
            }
            Suite::Incidence => target.schemes.iter().for_each(|g| out.extend(incidence_tasks(g, cfg))),
            Suite::Stalks => target.schemes.iter().for_each(|g| out.extend(stalk_tasks(g, cfg))),
            Suite::Counterexample => out.push(counterexample_task(cfg)),
        }
    }
    out
}

/// Worker count from the config, else `MONOID_RECON_JOBS`.
pub fn job_count(cfg: &SuiteConfig) -> Option<usize> {
    cfg.jobs.or_else(|| std::env::var("MONOID_RECON_JOBS").ok()?.parse().ok()).filter(|&n| n > 0)
}

/// Runs `suites` over `target`; records follow task order.
pub fn run(target: &Target, suites: &[Suite], cfg: &SuiteConfig) -> Vec<Record> {
    let tasks = tasks(target, suites, cfg);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = job_count(cfg) {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("worker pool");
    pool.install(|| tasks.par_iter().map(|t| t()).collect())
}
