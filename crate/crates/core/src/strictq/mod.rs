//! Strict quasispaces: those whose admissible maps are jointly surjective.
//!
//! Covers the coreflection `s`, the right adjoint `r` of the forgetful functor,
//! the "classical" point-class assumption with the smallest strict structure and
//! the reflection `ℓ` it yields, and bounded checks of the closure properties
//! of the strict subcategory.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::families::concrete::{is_final, is_strict_epi, ConcreteCategory, Sink};
use crate::families::{FamilyError, Verdict};
use crate::fincat::{all_functions, FinMap, FinSet, Obj};
use crate::fsetbase::{jointly_injective, jointly_surjective};
use crate::quasispace::{
    final_structure, generate, hom_q, initial_structure, limits_colimits_q,
    top_structure, yoneda_structure, QCategory, QDiagram, QSpace,
};
use crate::site::Site;

/// Images of all admissible maps.
pub fn reached(q: &QSpace) -> BTreeSet<usize> {
    q.all_admissible().flat_map(|(_, m)| m.image()).collect()
}

pub fn is_strict(q: &QSpace) -> bool {
    reached(q).len() == q.size()
}

fn index_subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    crate::families::subsets_up_to(&(0..n).collect::<Vec<_>>(), max)
}

/// A quasispace together with an injective morphism into another one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corestriction {
    pub space: QSpace,
    pub inclusion: FinMap,
}

/// Restricts `base` to `keep` and corestricts every map of `structure` that lands there.
fn corestrict(structure: &QSpace, keep: &BTreeSet<usize>) -> Corestriction {
    let positions: Vec<usize> = keep.iter().copied().collect();
    let mut index = vec![usize::MAX; structure.size()];
    for (i, &p) in positions.iter().enumerate() {
        index[p] = i;
    }
    let n = positions.len();
    let mut admissible = vec![BTreeSet::new(); structure.object_count()];
    for (o, m) in structure.all_admissible() {
        if m.images().iter().all(|&v| index[v] != usize::MAX) {
            admissible[o.0].insert(FinMap::new(m.images().iter().map(|&v| index[v]).collect(), n));
        }
    }
    Corestriction {
        space: QSpace::new(structure.base().subset(&positions), admissible),
        inclusion: FinMap::new(positions, structure.size()),
    }
}

/// `s(S, X)`: the reached part of `S` with every admissible map corestricted.
pub fn coreflection_s(q: &QSpace) -> Corestriction {
    corestrict(q, &reached(q))
}

/// `rS`: the part `H` of `S` reached by some map `uC -> S`, with every map admissible.
pub fn right_adjoint_r(site: &Site, base: &FinSet) -> Corestriction {
    let top = top_structure(site, base);
    let keep = reached(&top);
    let core = corestrict(&top, &keep);
    debug_assert!(core.space.same_structure(&top_structure(site, core.space.base())));
    core
}

/// Outcome of a bounded hom-set bijection check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjunctionCheck {
    /// Test objects visited.
    pub objects: usize,
    /// Total size of the hom-sets compared on one side.
    pub morphisms: usize,
    pub verdict: Verdict,
}

impl AdjunctionCheck {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

/// Checks that `ψ ↦ m∘ψ` is a bijection `left -> right` for each test object.
pub(crate) fn bijection_by_composition(
    pairs: impl IntoIterator<Item = (String, Vec<FinMap>, Vec<FinMap>)>,
    post: &FinMap,
) -> AdjunctionCheck {
    let mut objects = 0;
    let mut morphisms = 0;
    for (label, left, right) in pairs {
        objects += 1;
        morphisms += right.len();
        let image: BTreeSet<FinMap> = left.iter().map(|l| post.compose(l)).collect();
        let target: BTreeSet<FinMap> = right.into_iter().collect();
        if image.len() != left.len() || image != target {
            return AdjunctionCheck {
                objects,
                morphisms,
                verdict: Verdict::Fails(format!(
                    "at {label}: {} morphisms on one side, {} on the other, {} in common",
                    left.len(),
                    target.len(),
                    image.intersection(&target).count()
                )),
            };
        }
    }
    AdjunctionCheck {
        objects,
        morphisms,
        verdict: Verdict::Holds,
    }
}

/// `[iZ, q] ≅ [Z, s(q)]` for every strict `Z` of the universe.
pub fn verify_coreflection_s(universe: &QCategory<'_>, q: &QSpace) -> AdjunctionCheck {
    let core = coreflection_s(q);
    bijection_by_composition(
        universe.universe().iter().filter(|z| is_strict(z)).map(|z| {
            (
                z.base().to_string(),
                hom_q(z, &core.space),
                hom_q(z, q),
            )
        }),
        &core.inclusion,
    )
}

/// `[Z, rS] ≅ [q_s Z, S]` for every strict `Z` of the universe.
pub fn verify_right_adjoint_r(site: &Site, universe: &QCategory<'_>, base: &FinSet) -> AdjunctionCheck {
    let r = right_adjoint_r(site, base);
    bijection_by_composition(
        universe.universe().iter().filter(|z| is_strict(z)).map(|z| {
            (
                z.base().to_string(),
                hom_q(z, &r.space),
                all_functions(z.size(), base.len()).collect(),
            )
        }),
        &r.inclusion,
    )
}

/// The three conditions on a class of point objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalReport {
    pub points: Vec<String>,
    /// `u: hom(I, C) -> [uI, uC]` is bijective.
    pub hom_bijection: Verdict,
    /// All maps `uI -> S` are jointly surjective.
    pub points_cover: Verdict,
    /// Maps from points lift locally through strict epi families.
    pub local_lifting: Verdict,
    pub bound_base: usize,
    pub bound_legs: usize,
}

impl ClassicalReport {
    pub fn holds(&self) -> bool {
        self.hom_bijection.holds() && self.points_cover.holds() && self.local_lifting.holds()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("the point class is not classical: {0}")]
    NotClassical(String),
}

pub fn check_classical(site: &Site, points: &[Obj], bound_base: usize, bound_legs: usize) -> ClassicalReport {
    let c = site.category();
    let u = site.functor();

    let hom_bijection = Verdict::from_witness(points.iter().find_map(|&i| {
        c.objects().find_map(|o| {
            let images: BTreeSet<&FinMap> = c.hom(i, o).into_iter().map(|f| u.on_morphism(f)).collect();
            let arrows = c.hom(i, o).len();
            let maps = crate::fincat::function_count(site.size(i), site.size(o)).unwrap_or(usize::MAX);
            (images.len() != arrows || arrows != maps).then(|| {
                format!(
                    "{} arrows {} -> {} but {maps} maps between their underlying sets",
                    arrows,
                    c.object_name(i),
                    c.object_name(o)
                )
            })
        })
    }));

    let points_cover = Verdict::from_witness((0..=bound_base).find_map(|n| {
        let maps: Vec<FinMap> = points
            .iter()
            .flat_map(|&i| all_functions(site.size(i), n))
            .collect();
        (!jointly_surjective(n, &maps)).then(|| format!("maps from points miss elements of a {n}-element set"))
    }));

    let local_lifting = Verdict::from_witness(lifting_failure(site, points, bound_base, bound_legs));

    ClassicalReport {
        points: points.iter().map(|&i| c.object_name(i).to_string()).collect(),
        hom_bijection,
        points_cover,
        local_lifting,
        bound_base,
        bound_legs,
    }
}

fn lifting_failure(site: &Site, points: &[Obj], bound_base: usize, bound_legs: usize) -> Option<String> {
    let u = site.functor();
    for n in 0..=bound_base {
        // a set map factors through a leg exactly when its image lies in the leg's image
        let legs: Vec<FinMap> = (0..=bound_base).flat_map(|m| all_functions(m, n)).collect();
        let images: Vec<BTreeSet<usize>> = legs.iter().map(FinMap::image).collect();
        for family in index_subsets(legs.len(), bound_legs) {
            if !jointly_surjective(n, family.iter().map(|&k| &legs[k])) {
                continue;
            }
            for &i in points {
                for sigma in all_functions(site.size(i), n) {
                    let lifts = crate::quasispace::good_arrows_cover(site, i, |k| {
                        let image = sigma.compose(u.on_morphism(k)).image();
                        family.iter().any(|&a| image.is_subset(&images[a]))
                    });
                    if !lifts {
                        let shown: Vec<&[usize]> = family.iter().map(|&a| legs[a].images()).collect();
                        return Some(format!(
                            "{:?} from {} does not lift locally through the surjective family {shown:?}",
                            sigma.images(),
                            site.category().object_name(i)
                        ));
                    }
                }
            }
        }
    }
    None
}

/// A point class whose conditions were checked.
#[derive(Debug, Clone)]
pub struct ClassicalData<'a> {
    site: &'a Site,
    points: Vec<Obj>,
    report: ClassicalReport,
}

impl<'a> ClassicalData<'a> {
    pub fn establish(
        site: &'a Site,
        points: &[Obj],
        bound_base: usize,
        bound_legs: usize,
    ) -> Result<Self, ClassicalError> {
        let report = check_classical(site, points, bound_base, bound_legs);
        if !report.holds() {
            let w = [&report.hom_bijection, &report.points_cover, &report.local_lifting]
                .iter()
                .find_map(|v| v.witness().map(str::to_string))
                .unwrap_or_default();
            return Err(ClassicalError::NotClassical(w));
        }
        Ok(Self {
            site,
            points: points.to_vec(),
            report,
        })
    }

    pub fn site(&self) -> &'a Site {
        self.site
    }

    pub fn points(&self) -> &[Obj] {
        &self.points
    }

    pub fn report(&self) -> &ClassicalReport {
        &self.report
    }

    fn point_maps(&self, n: usize) -> Vec<(Obj, FinMap)> {
        self.points
            .iter()
            .flat_map(|&i| all_functions(self.site.size(i), n).map(move |m| (i, m)))
            .collect()
    }
}

/// `S_⊥ℓ`: `σ` is admissible when, locally on a cover, it factors through an
/// arrow into a point.
pub fn bottom_strict(data: &ClassicalData<'_>, base: &FinSet) -> QSpace {
    let site = data.site;
    let c = site.category();
    let u = site.functor();
    let n = base.len();
    let through_points: Vec<BTreeSet<FinMap>> = c
        .objects()
        .map(|d| {
            data.points
                .iter()
                .flat_map(|&i| {
                    c.hom(d, i).into_iter().flat_map(move |g| {
                        all_functions(site.size(i), n).map(move |tau| tau.compose(u.on_morphism(g)))
                    })
                })
                .collect()
        })
        .collect();
    let admissible = c
        .objects()
        .map(|o| {
            all_functions(site.size(o), n)
                .filter(|sigma| {
                    crate::quasispace::good_arrows_cover(site, o, |k| {
                        through_points[c.source(k).0].contains(&sigma.compose(u.on_morphism(k)))
                    })
                })
                .collect()
        })
        .collect();
    QSpace::new(base.clone(), admissible)
}

/// The structure generated by all maps from points; equals [`bottom_strict`].
pub fn bottom_strict_generated(data: &ClassicalData<'_>, base: &FinSet) -> QSpace {
    generate(data.site, base, data.point_maps(base.len()))
}

/// `ℓ(S, X)`: the structure generated by `X` and all maps from points.
pub fn reflection_l(data: &ClassicalData<'_>, q: &QSpace) -> QSpace {
    let seed = q
        .all_admissible()
        .map(|(o, m)| (o, m.clone()))
        .chain(data.point_maps(q.size()));
    generate(data.site, q.base(), seed)
}

/// `[ℓq, Z] ≅ [q, iZ]` for every strict `Z` of the universe; the unit is the identity.
pub fn verify_reflection_l(data: &ClassicalData<'_>, universe: &QCategory<'_>, q: &QSpace) -> AdjunctionCheck {
    let l = reflection_l(data, q);
    let mut objects = 0;
    let mut morphisms = 0;
    for z in universe.universe().iter().filter(|z| is_strict(z)) {
        objects += 1;
        let left: BTreeSet<FinMap> = hom_q(&l, z).into_iter().collect();
        let right: BTreeSet<FinMap> = hom_q(q, z).into_iter().collect();
        morphisms += right.len();
        if left != right {
            return AdjunctionCheck {
                objects,
                morphisms,
                verdict: Verdict::Fails(format!(
                    "at {}: {} morphisms out of the reflection, {} out of the original",
                    z.base(),
                    left.len(),
                    right.len()
                )),
            };
        }
    }
    AdjunctionCheck {
        objects,
        morphisms,
        verdict: Verdict::Holds,
    }
}

/// Checks of the three sufficient conditions, and of the conclusion directly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SufficientReport {
    /// `1_⊤` is strict.
    pub terminal: Verdict,
    /// Induced structures on subsets of `uC` are strict.
    pub subobjects: Verdict,
    /// `εC × εD` is strict.
    pub products: Verdict,
    /// Finite initial injective families with strict targets have strict sources.
    pub initial_injective: Verdict,
    pub bound_base: usize,
}

impl SufficientReport {
    pub fn conditions_hold(&self) -> bool {
        self.terminal.holds() && self.subobjects.holds() && self.products.holds()
    }
}

pub fn check_sufficient_a2(site: &Site, bound_base: usize) -> Result<SufficientReport, crate::quasispace::EnumerationError> {
    let c = site.category();
    let terminal = Verdict::from_witness(
        (!is_strict(&top_structure(site, &FinSet::range(1)))).then(|| "1_⊤ is not strict".to_string()),
    );
    let yoneda: Vec<QSpace> = c.objects().map(|o| yoneda_structure(site, o)).collect();
    let subobjects = Verdict::from_witness(c.objects().find_map(|o| {
        let eps = &yoneda[o.0];
        index_subsets(eps.size(), eps.size())
            .into_iter()
            .find_map(|keep| {
                let inc = FinMap::new(keep.clone(), eps.size());
                let induced = initial_structure(site, &eps.base().subset(&keep), &[(eps.clone(), inc)]);
                (!is_strict(&induced)).then(|| {
                    format!(
                        "the structure induced on {} from the representable at {} is not strict",
                        induced.base(),
                        c.object_name(o)
                    )
                })
            })
    }));
    let products = Verdict::from_witness(c.objects().find_map(|a| {
        c.objects().find_map(|b| {
            let p = limits_colimits_q(site, &QDiagram::Product(yoneda[a.0].clone(), yoneda[b.0].clone()))
                .expect("products exist")
                .object;
            (!is_strict(&p)).then(|| {
                format!(
                    "the product of the representables at {} and {} is not strict",
                    c.object_name(a),
                    c.object_name(b)
                )
            })
        })
    }));
    let strict = QCategory::strict(site, bound_base)?;
    let initial_injective = initial_families_of_strict(site, &strict, 2, true);
    Ok(SufficientReport {
        terminal,
        subobjects,
        products,
        initial_injective,
        bound_base,
    })
}

/// Initial structures induced by families (`injective_only`: jointly injective
/// ones) of at most `max_legs` maps into strict quasispaces of the universe
/// are strict. Sources range over sets up to the universe's base bound.
pub fn initial_families_of_strict(
    site: &Site,
    strict: &QCategory<'_>,
    max_legs: usize,
    injective_only: bool,
) -> Verdict {
    let targets: Vec<&QSpace> = strict.universe().iter().filter(|z| is_strict(z)).collect();
    for n in 0..=strict.max_base() {
        let base = FinSet::range(n);
        let legs: Vec<(usize, FinMap)> = targets
            .iter()
            .enumerate()
            .flat_map(|(t, y)| all_functions(n, y.size()).map(move |m| (t, m)))
            .collect();
        for family in index_subsets(legs.len(), max_legs) {
            let maps: Vec<&FinMap> = family.iter().map(|&k| &legs[k].1).collect();
            if injective_only && !jointly_injective(n, maps.iter().copied()) {
                continue;
            }
            let cone: Vec<(QSpace, FinMap)> = family
                .iter()
                .map(|&k| (targets[legs[k].0].clone(), legs[k].1.clone()))
                .collect();
            let source = initial_structure(site, &base, &cone);
            if !is_strict(&source) {
                let shown: Vec<String> = cone
                    .iter()
                    .map(|(y, m)| format!("{:?} into {}", m.images(), y.describe(site)))
                    .collect();
                return Verdict::Fails(format!(
                    "the initial structure on {base} induced by [{}] is not strict",
                    shown.join("; ")
                ));
            }
        }
    }
    Verdict::Holds
}

/// Bounded checks of how the strict subcategory sits inside all quasispaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    /// Surjective families of strict quasispaces have strict targets.
    pub surjective_families: Verdict,
    /// Strict epi families of strict quasispaces have strict targets.
    pub strict_epi_families: Verdict,
    /// Final families between strict quasispaces are surjective.
    pub final_are_surjective: Verdict,
    /// Final surjective families in the strict subcategory are universal.
    pub final_surjective_universal: Verdict,
    pub covers_surjective: bool,
    pub families_checked: usize,
}

impl ClosureReport {
    /// The surjectivity of final families is only claimed for surjective covers.
    pub fn holds(&self) -> bool {
        self.surjective_families.holds()
            && self.strict_epi_families.holds()
            && (self.final_are_surjective.holds() || !self.covers_surjective)
            && self.final_surjective_universal.holds()
    }
}

fn is_final_family(site: &Site, target: &QSpace, legs: &[(QSpace, FinMap)]) -> bool {
    final_structure(site, target.base(), legs).same_structure(target)
}

/// All sinks of at most `max_legs` morphisms whose sources pass `source_ok`.
fn sinks<'q>(
    universe: &'q [QSpace],
    target: &QSpace,
    max_legs: usize,
    source_ok: impl Fn(&QSpace) -> bool,
) -> Vec<Vec<(&'q QSpace, FinMap)>> {
    let legs: Vec<(&QSpace, FinMap)> = universe
        .iter()
        .filter(|x| source_ok(x))
        .flat_map(|x| hom_q(x, target).into_iter().map(move |m| (x, m)))
        .collect();
    index_subsets(legs.len(), max_legs)
        .into_iter()
        .map(|ix| ix.into_iter().map(|k| legs[k].clone()).collect())
        .collect()
}

pub fn closure_checks(site: &Site, universe: &QCategory<'_>, max_legs: usize) -> Result<ClosureReport, FamilyError> {
    let all = universe.universe();
    let mut surjective_families = Verdict::Holds;
    let mut strict_epi_families = Verdict::Holds;
    let mut final_are_surjective = Verdict::Holds;
    let mut final_surjective_universal = Verdict::Holds;
    let mut checked = 0usize;
    let strict_cat = QCategory::strict(site, all.iter().map(QSpace::size).max().unwrap_or(0))
        .expect("the universe was enumerated at this bound");

    for x in all {
        for family in sinks(all, x, max_legs, is_strict) {
            checked += 1;
            let maps: Vec<&FinMap> = family.iter().map(|(_, m)| m).collect();
            let surjective = jointly_surjective(x.size(), maps.iter().copied());
            if surjective && !is_strict(x) && surjective_families.holds() {
                surjective_families = Verdict::Fails(format!("a surjective family of strict quasispaces reaches {}", x.describe(site)));
            }
            let sink = Sink {
                codomain: x.clone(),
                legs: family.iter().map(|(s, m)| ((*s).clone(), m.clone())).collect(),
            };
            if strict_epi_families.holds() && !is_strict(x) && is_strict_epi(universe, &sink, max_legs.max(2))?.holds() {
                strict_epi_families = Verdict::Fails(format!(
                    "a strict epi family of strict quasispaces reaches {}",
                    x.describe(site)
                ));
            }
            if !is_strict(x) {
                continue;
            }
            let legs: Vec<(QSpace, FinMap)> = sink.legs.clone();
            let fin = is_final_family(site, x, &legs);
            if fin && !surjective && final_are_surjective.holds() {
                final_are_surjective = Verdict::Fails(format!(
                    "a final family of strict quasispaces into {} misses elements",
                    x.describe(site)
                ));
            }
            if fin && surjective && final_surjective_universal.holds() {
                if let Some(w) = universality_failure(site, &strict_cat, x, &legs) {
                    final_surjective_universal = Verdict::Fails(w);
                }
            }
        }
    }
    Ok(ClosureReport {
        surjective_families,
        strict_epi_families,
        final_are_surjective,
        final_surjective_universal,
        covers_surjective: site.covers_are_surjective(),
        families_checked: checked,
    })
}

/// Pulls a final surjective family of strict quasispaces back along every
/// morphism from a strict test object, inside the strict subcategory.
fn universality_failure(
    site: &Site,
    strict: &QCategory<'_>,
    x: &QSpace,
    legs: &[(QSpace, FinMap)],
) -> Option<String> {
    for z in strict.universe() {
        for g in hom_q(z, x) {
            let pulled: Vec<(QSpace, FinMap)> = legs
                .iter()
                .map(|(s, f)| {
                    let (p, _, to_z) = strict.pullback((s, f), (z, &g));
                    (p, to_z)
                })
                .collect();
            let surjective = jointly_surjective(z.size(), pulled.iter().map(|(_, m)| m));
            if !surjective || !is_final_family(site, z, &pulled) {
                return Some(format!(
                    "pulling back along {:?} into {} gives a family that is not final surjective",
                    g.images(),
                    x.describe(site)
                ));
            }
        }
    }
    None
}

/// Cross-check of finality through the concrete decider; used by tests.
pub fn final_by_lifting(universe: &QCategory<'_>, target: &QSpace, legs: &[(QSpace, FinMap)]) -> Verdict {
    is_final(
        universe,
        &Sink {
            codomain: target.clone(),
            legs: legs.to_vec(),
        },
    )
}

/// Structures on `base` from the universe, for comparisons against `S_⊥ℓ`.
pub fn strict_fiber(universe: &QCategory<'_>, base_size: usize) -> Vec<QSpace> {
    universe
        .test_objects()
        .into_iter()
        .filter(|q| q.size() == base_size && is_strict(q))
        .collect()
}

/// `σ` is admissible in `q` for every map `σ` from a point.
pub fn admits_all_points(data: &ClassicalData<'_>, q: &QSpace) -> bool {
    data.point_maps(q.size()).iter().all(|(i, m)| q.admits(*i, m))
}

/// The structure `S_⊤` is strict when maps `uC -> S` reach every element.
pub fn top_is_strict(site: &Site, base: &FinSet) -> bool {
    is_strict(&top_structure(site, base))
}
