//! Named verification suites run against a loaded instance.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::assoc::{
    check_sharp_f_regular, sharp, verify_sharp_adjunction, verify_sharp_on_representables,
    verify_sharp_preserves_initial, verify_strict_square, AssocError, TopologyPair,
};
use crate::families::concrete::{is_final, is_initial, is_strict_epi, is_surjective, ConcreteCategory, Cone, Sink};
use crate::families::{check_property, subsets_up_to, FamilyError, Property, Verdict};
use crate::fincat::{all_functions, FinMap, FinSet, Obj};
use crate::fregular::{check_f_regular, families, FRegularReport, UnderlyingFunctor};
use crate::fsetbase::{
    f_factorize_generic, f_factorize_image, is_strict_epi_by_definition, iso_over_codomain,
    jointly_surjective, FinSets, SetFamily,
};
use crate::instance::{Bounds, Instance};
use crate::quasispace::{
    classify_strict_sub, enumerate_qspaces, exponential_q, f_factorize_q, final_structure, hom_q,
    initial_structure, is_morphism, omega_q, pull_back_truth, representable_r_pullback,
    sheaf_vs_covering, top_structure, validate_qspace, ClassifierError, EnumerationError,
    QCategory, QSpace,
};
use crate::report::{Report, ReportBounds};
use crate::site::{canonical_topology, saturate, validate_pretopology, Coverage, Site, SiteError};
use crate::strictq::{
    bottom_strict, bottom_strict_generated, check_classical, check_sufficient_a2, closure_checks,
    coreflection_s, initial_families_of_strict, is_strict, right_adjoint_r, strict_fiber,
    verify_coreflection_s, verify_reflection_l, verify_right_adjoint_r, ClassicalData,
};

pub const SUITES: [&str; 12] = [
    "site",
    "enumeration",
    "topologicity",
    "strict-epi",
    "universality",
    "factorization",
    "exponentials",
    "classifier",
    "sharp",
    "strict",
    "sheaf",
    "fregular",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (expected one of {list} or all)", list = SUITES.join(", "))]
    Unknown(String),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error(transparent)]
    Assoc(#[from] AssocError),
    #[error("{0}")]
    Other(String),
}

/// Quasispace families get at most this many legs, whatever the declared bound.
pub const MAX_FAMILY_LEGS: usize = 2;

pub fn report_bounds(bounds: &Bounds) -> ReportBounds {
    ReportBounds {
        base: bounds.base,
        legs: bounds.legs,
        universe: bounds.universe,
        family_legs: bounds.legs.min(MAX_FAMILY_LEGS),
    }
}

pub fn run_suite(name: &str, inst: &Instance, bounds: &Bounds) -> Result<Report, SuiteError> {
    let label = inst.name.as_deref().unwrap_or("instance");
    let mut r = Report::new(name, label, report_bounds(bounds));
    let ctx = Ctx { inst, site: &inst.site, bounds: r.bounds };
    match name {
        "site" => ctx.site_axioms(&mut r)?,
        "enumeration" => ctx.enumeration(&mut r)?,
        "topologicity" => ctx.topologicity(&mut r)?,
        "strict-epi" => ctx.strict_epi(&mut r)?,
        "universality" => ctx.universality(&mut r)?,
        "factorization" => ctx.factorization(&mut r)?,
        "exponentials" => ctx.exponentials(&mut r)?,
        "classifier" => ctx.classifier(&mut r)?,
        "sharp" => ctx.sharp(&mut r, None)?,
        "strict" => ctx.strict(&mut r)?,
        "sheaf" => ctx.sheaf(&mut r)?,
        "fregular" => ctx.fregular(&mut r)?,
        "all" => {
            for s in SUITES {
                r.absorb(run_suite(s, inst, bounds)?);
            }
        }
        other => return Err(SuiteError::Unknown(other.to_string())),
    }
    Ok(r)
}

/// The `sharp` suite for an explicit coarse site instead of the trivial topology.
pub fn run_sharp_suite(fine: &Instance, coarse: &Site, bounds: &Bounds) -> Result<Report, SuiteError> {
    let label = fine.name.as_deref().unwrap_or("instance");
    let mut r = Report::new("sharp", label, report_bounds(bounds));
    let ctx = Ctx { inst: fine, site: &fine.site, bounds: r.bounds };
    ctx.sharp(&mut r, Some(coarse))?;
    Ok(r)
}

struct Ctx<'a> {
    inst: &'a Instance,
    site: &'a Site,
    bounds: ReportBounds,
}

fn pretopology_verdict(c: &crate::fincat::FinCat, j: &Coverage) -> Verdict {
    let report = validate_pretopology(c, j);
    Verdict::from_witness((!report.is_valid()).then(|| report.to_string()))
}

/// Every subset of the maps `uC -> S`, kept when it is a quasispace; `None`
/// when there are too many maps to try.
pub fn brute_force_fiber(site: &Site, n: usize) -> Option<BTreeSet<QSpace>> {
    let c = site.category();
    let atoms: Vec<(Obj, FinMap)> = c
        .objects()
        .flat_map(|o| all_functions(site.size(o), n).map(move |m| (o, m)))
        .collect();
    if atoms.len() > 20 {
        return None;
    }
    Some(
        (0u32..1 << atoms.len())
            .map(|bits| {
                let mut adm = vec![BTreeSet::new(); c.object_count()];
                for (i, (o, m)) in atoms.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        adm[o.0].insert(m.clone());
                    }
                }
                QSpace::new(FinSet::range(n), adm)
            })
            .filter(|q| validate_qspace(site, q).is_empty())
            .collect(),
    )
}

fn first<T>(items: impl IntoIterator<Item = Result<(), T>>) -> Result<(), T> {
    items.into_iter().collect()
}

impl Ctx<'_> {
    fn universe(&self) -> Result<QCategory<'_>, EnumerationError> {
        QCategory::new(self.site, self.bounds.universe)
    }

    fn family_legs(&self) -> usize {
        self.bounds.family_legs
    }

    fn site_axioms(&self, r: &mut Report) -> Result<(), SuiteError> {
        let c = self.site.category();
        r.verdict("generating covers satisfy (I), (C), (U)", &pretopology_verdict(c, self.site.generators()));
        let topology = self.site.topology();
        for p in Property::ALL {
            r.verdict(
                format!("saturated topology satisfies {p}"),
                &check_property(c, topology.families(), p, c.morphism_count()),
            );
        }
        let again = saturate(c, &Coverage::generated_by(topology.families().clone()))?;
        r.push("saturation is idempotent", again.families() == topology.families(), None, None);
        let canonical = canonical_topology(c, self.bounds.legs)?;
        if canonical.report.is_valid() {
            r.note("the canonical topology satisfies (C) and (U)");
        } else {
            r.note(format!("canonical topology: {}", canonical.report));
        }
        Ok(())
    }

    fn enumeration(&self, r: &mut Report) -> Result<(), SuiteError> {
        for n in 0..=self.bounds.base {
            let listed = enumerate_qspaces(self.site, &FinSet::range(n), self.bounds.base)?;
            let set: BTreeSet<QSpace> = listed.iter().cloned().collect();
            r.push(
                format!("no duplicates on {n} elements"),
                set.len() == listed.len(),
                None,
                Some(listed.len()),
            );
            match brute_force_fiber(self.site, n) {
                Some(oracle) => {
                    let missing = oracle.difference(&set).count();
                    let extra = set.difference(&oracle).count();
                    r.push(
                        format!("closure enumeration matches subset filtering on {n} elements"),
                        missing == 0 && extra == 0,
                        (missing + extra > 0).then(|| format!("{missing} missing, {extra} unexpected")),
                        Some(oracle.len()),
                    );
                }
                None => {
                    r.note(format!("{n} elements: too many maps for the subset filter"));
                }
            }
            r.note(format!("{} structures on {n} elements", listed.len()));
        }
        Ok(())
    }

    fn topologicity(&self, r: &mut Report) -> Result<(), SuiteError> {
        let cat = self.universe()?;
        let objects = cat.universe();
        let (mut initial, mut finals) = (Ok(()), Ok(()));
        let (mut cones, mut sinks) = (0, 0);
        for n in 0..=self.bounds.base {
            let base = FinSet::range(n);
            let out: Vec<(QSpace, FinMap)> = objects
                .iter()
                .flat_map(|y| all_functions(n, y.size()).map(move |m| (y.clone(), m)))
                .collect();
            for legs in subsets_up_to(&out, self.family_legs()) {
                cones += 1;
                let x = initial_structure(self.site, &base, &legs);
                if let (Ok(()), Verdict::Fails(w)) = (&initial, is_initial(&cat, &Cone { source: x, legs })) {
                    initial = Err(w);
                }
            }
            let into: Vec<(QSpace, FinMap)> = objects
                .iter()
                .flat_map(|y| all_functions(y.size(), n).map(move |m| (y.clone(), m)))
                .collect();
            for legs in subsets_up_to(&into, self.family_legs()) {
                sinks += 1;
                let x = final_structure(self.site, &base, &legs);
                if let (Ok(()), Verdict::Fails(w)) = (&finals, is_final(&cat, &Sink { codomain: x, legs })) {
                    finals = Err(w);
                }
            }
        }
        r.counted("initial structures give initial cones", &from_result(initial), cones);
        r.counted("final structures give final sinks", &from_result(finals), sinks);
        Ok(())
    }

    fn strict_epi(&self, r: &mut Report) -> Result<(), SuiteError> {
        let cat = self.universe()?;
        let mut count = 0;
        let mut outcome = Ok(());
        let mut strict = 0;
        'all: for x in cat.universe() {
            for legs in families(&cat, x, self.family_legs(), true) {
                count += 1;
                let sink = Sink { codomain: x.clone(), legs };
                let by_definition = is_strict_epi(&cat, &sink, self.family_legs())?.holds();
                let surjective = is_surjective(&cat, &sink);
                let by_lifting = surjective && is_final(&cat, &sink).holds();
                let by_construction =
                    surjective && final_structure(self.site, x.base(), &sink.legs).same_structure(x);
                strict += usize::from(by_definition);
                if by_definition != by_lifting || by_lifting != by_construction {
                    outcome = Err(format!(
                        "into {}: strict epi {by_definition}, final surjective by lifting {by_lifting}, by construction {by_construction}",
                        x.describe(self.site)
                    ));
                    break 'all;
                }
            }
        }
        r.counted("strict epi, final surjective and final structure agree", &from_result(outcome), count);
        r.note(format!("{strict} of {count} families are strict epi"));
        Ok(())
    }

    fn universality(&self, r: &mut Report) -> Result<(), SuiteError> {
        let cat = self.universe()?;
        let (mut finals, mut epis) = (Ok(()), Ok(()));
        let (mut final_cases, mut epi_cases) = (0, 0);
        // pulled families recur, so their verdicts are kept per codomain
        let mut memo: HashMap<QSpace, HashMap<Vec<(QSpace, FinMap)>, Verdict>> = HashMap::new();
        for x in cat.universe() {
            for legs in families(&cat, x, self.family_legs(), true) {
                let sink = Sink { codomain: x.clone(), legs };
                let is_fin = is_final(&cat, &sink).holds();
                let is_se = is_strict_epi(&cat, &sink, self.family_legs())?.holds();
                if !is_fin && !is_se {
                    continue;
                }
                for z in cat.universe() {
                    let seen = memo.entry(z.clone()).or_default();
                    for g in cat.hom(z, x) {
                        if is_fin && finals.is_ok() {
                            final_cases += 1;
                            let pulled = representable_r_pullback(self.site, &sink.legs, (z, &g));
                            let refines = pulled.iter().all(|(eps, psi)| {
                                let down = g.compose(psi);
                                sink.legs.iter().any(|(xa, f)| {
                                    hom_q(eps, xa).iter().any(|theta| f.compose(theta) == down)
                                })
                            });
                            let verdict = is_final(&cat, &Sink { codomain: z.clone(), legs: pulled });
                            if !refines || !verdict.holds() {
                                finals = Err(format!(
                                    "pulling a final family into {} back along {:?}: {}",
                                    x.describe(self.site),
                                    g.images(),
                                    verdict.witness().unwrap_or("not an r-pullback")
                                ));
                            }
                        }
                        if is_se && epis.is_ok() {
                            epi_cases += 1;
                            let mut legs: Vec<(QSpace, FinMap)> = sink
                                .legs
                                .iter()
                                .map(|(xa, f)| {
                                    let (p, _, to_z) = cat.pullback((xa, f), (z, &g));
                                    (p, to_z)
                                })
                                .collect();
                            legs.sort();
                            let pulled = Sink { codomain: z.clone(), legs };
                            let verdict = match seen.get(&pulled.legs) {
                                Some(v) => v.clone(),
                                None => {
                                    let v = is_strict_epi(&cat, &pulled, self.family_legs())?;
                                    seen.insert(pulled.legs.clone(), v.clone());
                                    v
                                }
                            };
                            if let Verdict::Fails(w) = verdict {
                                epis = Err(format!(
                                    "pulling a strict epi family into {} back along {:?}: {w}",
                                    x.describe(self.site),
                                    g.images()
                                ));
                            }
                        }
                    }
                }
            }
        }
        r.counted("r-pullbacks of final families are final", &from_result(finals), final_cases);
        r.counted("pullbacks of strict epi families are strict epi", &from_result(epis), epi_cases);
        Ok(())
    }

    fn factorization(&self, r: &mut Report) -> Result<(), SuiteError> {
        let cat = self.universe()?;
        let objects = cat.universe();
        let mut outcome = Ok(());
        let mut count = 0;
        let mut strict_sinks: Vec<Vec<Vec<(QSpace, FinMap)>>> = Vec::new();
        for x in objects {
            let mut here = Vec::new();
            for legs in families(&cat, x, self.family_legs(), true) {
                count += 1;
                let sink = Sink { codomain: x.clone(), legs };
                let strict = is_strict_epi(&cat, &sink, self.family_legs())?.holds();
                let fac = f_factorize_q(self.site, x, &sink.legs);
                let parts = Sink {
                    codomain: fac.image.clone(),
                    legs: sink.legs.iter().zip(&fac.legs).map(|((xa, _), h)| (xa.clone(), h.clone())).collect(),
                };
                let mono_ok = fac.mono.is_injective() && is_morphism(&fac.image, x, &fac.mono);
                let legs_ok = sink
                    .legs
                    .iter()
                    .zip(&fac.legs)
                    .all(|((xa, f), h)| is_morphism(xa, &fac.image, h) && fac.mono.compose(h) == *f);
                let epi_ok = is_strict_epi(&cat, &parts, self.family_legs())?.holds();
                let iso = fac.mono.is_bijective()
                    && fac.mono.inverse().is_some_and(|inv| is_morphism(x, &fac.image, &inv));
                if outcome.is_ok() && !(mono_ok && legs_ok && epi_ok && iso == strict) {
                    outcome = Err(format!(
                        "family into {}: mono {mono_ok}, factors {legs_ok}, strict epi part {epi_ok}, iso {iso} vs strict epi {strict}",
                        x.describe(self.site)
                    ));
                }
                if strict {
                    here.push(sink.legs);
                }
            }
            strict_sinks.push(here);
        }
        r.counted("mono after strict epi, with an iso exactly for strict epi families", &from_result(outcome), count);

        // composites with at most `legs` legs in total
        let mut composed = Ok(());
        let mut composites = 0;
        for (xi, x) in objects.iter().enumerate() {
            for outer in &strict_sinks[xi] {
                let choices: Vec<&Vec<Vec<(QSpace, FinMap)>>> = outer
                    .iter()
                    .map(|(xa, _)| &strict_sinks[objects.iter().position(|o| o == xa).expect("universe object")])
                    .collect();
                let mut pick = vec![0usize; outer.len()];
                loop {
                    if choices.iter().any(|c| c.is_empty()) {
                        break;
                    }
                    let total: usize = pick.iter().zip(&choices).map(|(&k, c)| c[k].len()).sum();
                    if total <= self.family_legs() {
                        composites += 1;
                        let legs: Vec<(QSpace, FinMap)> = outer
                            .iter()
                            .zip(pick.iter().zip(&choices))
                            .flat_map(|((_, f), (&k, c))| c[k].iter().map(move |(s, g)| (s.clone(), f.compose(g))))
                            .collect();
                        let sink = Sink { codomain: x.clone(), legs };
                        if let (Ok(()), Verdict::Fails(w)) = (&composed, is_strict_epi(&cat, &sink, self.family_legs())?) {
                            composed = Err(w);
                        }
                    }
                    // next choice
                    let mut i = 0;
                    while i < pick.len() {
                        pick[i] += 1;
                        if pick[i] < choices[i].len() {
                            break;
                        }
                        pick[i] = 0;
                        i += 1;
                    }
                    if i == pick.len() {
                        break;
                    }
                }
            }
        }
        r.counted("composites of strict epi families are strict epi", &from_result(composed), composites);

        let mut sets = Ok(());
        let mut set_families = 0;
        for cod in 0..=3usize {
            let legs: Vec<FinMap> = (0..=3usize).flat_map(|d| all_functions(d, cod)).collect();
            for chosen in subsets_up_to(&legs, 3) {
                set_families += 1;
                let f = SetFamily::new(cod, chosen);
                let (a, b) = (f_factorize_generic(&f), f_factorize_image(&f));
                if sets.is_ok() && iso_over_codomain(&a, &b).is_none() {
                    sets = Err(format!("into {cod}: {:?}", f.legs.iter().map(FinMap::images).collect::<Vec<_>>()));
                }
                if sets.is_ok() && jointly_surjective(cod, &f.legs) != a.mono.is_bijective() {
                    sets = Err(format!("into {cod}: image is not everything for a surjective family"));
                }
            }
        }
        r.counted("finite sets: generic factorization agrees with the image", &from_result(sets), set_families);
        Ok(())
    }

    fn exponentials(&self, r: &mut Report) -> Result<(), SuiteError> {
        let cat = self.universe()?;
        let mut outcome = Ok(());
        let mut count = 0;
        for x in cat.universe() {
            for y in cat.universe() {
                count += 1;
                if let Err(e) = exponential_q(self.site, x, y, &cat) {
                    outcome = Err(format!("{} to {}: {e}", x.describe(self.site), y.describe(self.site)));
                    break;
                }
            }
        }
        r.counted("transposition is a bijection for every test object", &from_result(outcome), count);
        Ok(())
    }

    fn classifier(&self, r: &mut Report) -> Result<(), SuiteError> {
        let cat = QCategory::new(self.site, self.bounds.base)?;
        let (omega, _) = omega_q(self.site);
        let (mut bijection, mut rejection) = (Ok(()), Ok(()));
        let (mut subs, mut rejected) = (0, 0);
        for q in cat.universe() {
            let mut here = 0;
            for keep in subsets_up_to(&(0..q.size()).collect::<Vec<_>>(), q.size()) {
                let inc = FinMap::new(keep.clone(), q.size());
                let base = q.base().subset(&keep);
                let sub = initial_structure(self.site, &base, &[(q.clone(), inc.clone())]);
                here += 1;
                let result = classify_strict_sub(self.site, q, &sub, &inc).map(|chi| pull_back_truth(self.site, q, &chi));
                match result {
                    Ok((back, back_inc)) if back.same_structure(&sub) && back_inc == inc => {}
                    other => {
                        if bijection.is_ok() {
                            bijection = Err(format!("subset {keep:?} of {}: {other:?}", q.describe(self.site)));
                        }
                    }
                }
                for coarser in enumerate_qspaces(self.site, &base, self.bounds.base)? {
                    if coarser.same_structure(&sub) || !is_morphism(&coarser, q, &inc) {
                        continue;
                    }
                    rejected += 1;
                    if !matches!(classify_strict_sub(self.site, q, &coarser, &inc), Err(ClassifierError::NotInitial(_)))
                        && rejection.is_ok()
                    {
                        rejection = Err(format!("a non-initial mono into {} was classified", q.describe(self.site)));
                    }
                }
            }
            subs += here;
            let maps = hom_q(q, &omega).len();
            if maps != here && bijection.is_ok() {
                bijection = Err(format!("{here} strict subobjects but {maps} maps to the classifier"));
            }
        }
        r.counted("strict subobjects correspond to maps into the classifier", &from_result(bijection), subs);
        r.counted("monos without the induced structure are rejected", &from_result(rejection), rejected);
        Ok(())
    }

    fn sharp(&self, r: &mut Report, coarse: Option<&Site>) -> Result<(), SuiteError> {
        let coarse = match coarse {
            Some(s) => s.clone(),
            None => Site::trivial(self.site.functor().clone())?,
        };
        let pair = TopologyPair::new(coarse, self.site.clone())?;
        let base = self.bounds.universe;
        let coarse_cat = QCategory::new(pair.coarse(), base)?;
        let guard = first(coarse_cat.universe().iter().map(|x| sharp(&pair, x).map(|_| ())));
        r.counted(
            "one pass gives a closed, valid structure",
            &Verdict::from_witness(guard.err().map(|e| e.to_string())),
            coarse_cat.universe().len(),
        );
        let adj = verify_sharp_adjunction(&pair, base)?;
        r.counted("unit is an inclusion", &adj.unit, adj.coarse_objects);
        r.counted("fine structures are fixed", &adj.fixes_fine, adj.fine_objects);
        r.counted("hom-sets agree", &adj.hom_bijection.verdict, adj.hom_bijection.morphisms);
        let pres = verify_sharp_preserves_initial(&pair, base, self.family_legs())?;
        r.counted("initial families are preserved", &pres.verdict, pres.families_checked);
        r.verdict("representables go to representables", &verify_sharp_on_representables(&pair));
        let square = verify_strict_square(&pair, base)?;
        r.verdict("strict fine structures are strict coarse structures", &square.inclusions_commute);
        r.verdict("strict structures stay strict", &square.sharp_keeps_strict);
        r.verdict("the strict part of a fine structure is fine", &square.coreflection_commutes);
        Ok(())
    }

    fn strict(&self, r: &mut Report) -> Result<(), SuiteError> {
        let site = self.site;
        let cat = self.universe()?;
        let density = first(cat.universe().iter().map(|q| {
            let maps: Vec<FinMap> = q.all_admissible().map(|(_, m)| m.clone()).collect();
            let by_definition = is_strict_epi_by_definition(&SetFamily::new(q.size(), maps));
            if by_definition == is_strict(q) {
                Ok(())
            } else {
                Err(format!("density of {} decided differently", q.describe(site)))
            }
        }));
        r.counted("density agrees with strict epi in finite sets", &from_result(density), cat.universe().len());

        let s_checks = cat.universe().iter().map(|q| verify_coreflection_s(&cat, q));
        let (s_ok, s_count) = fold_checks(s_checks);
        r.counted("coreflection hom-bijection", &s_ok, s_count);
        let r_checks = (0..=self.bounds.base).map(|n| verify_right_adjoint_r(site, &cat, &FinSet::range(n)));
        let (r_ok, r_count) = fold_checks(r_checks);
        r.counted("right adjoint hom-bijection", &r_ok, r_count);
        let idempotent = cat.universe().iter().all(|q| {
            let s = coreflection_s(q).space;
            is_strict(&s) && coreflection_s(&s).space == s
        });
        r.push("the strict part is strict and fixed", idempotent, None, None);
        if (0..=self.bounds.base).all(|n| {
            let base = FinSet::range(n);
            right_adjoint_r(site, &base).space.same_structure(&top_structure(site, &base))
        }) {
            r.note("the right adjoint gives the top structure on every base");
        }

        let closure = closure_checks(site, &cat, self.family_legs())?;
        r.counted("surjective families of strict structures", &closure.surjective_families, closure.families_checked);
        r.verdict("strict epi families of strict structures", &closure.strict_epi_families);
        if closure.covers_surjective {
            r.verdict("final families between strict structures are surjective", &closure.final_are_surjective);
        } else if let Some(w) = closure.final_are_surjective.witness() {
            r.note(format!("covers are not surjective and a final family is not: {w}"));
        }
        r.verdict("final surjective families of strict structures are universal", &closure.final_surjective_universal);

        let a2 = check_sufficient_a2(site, self.bounds.base)?;
        let implied = !a2.conditions_hold() || a2.initial_injective.holds();
        r.push(
            "the sufficient conditions give strict sources for initial injective families",
            implied,
            (!implied).then(|| a2.initial_injective.witness().unwrap_or_default().to_string()),
            None,
        );
        for (name, v) in [
            ("the terminal top structure is strict", &a2.terminal),
            ("induced structures on parts of representables are strict", &a2.subobjects),
            ("products of representables are strict", &a2.products),
            ("initial injective families of strict structures have strict sources", &a2.initial_injective),
        ] {
            r.note(match v.witness() {
                None => name.to_string(),
                Some(w) => format!("fails: {w}"),
            });
        }

        if self.inst.points.is_empty() {
            r.note("no point class declared");
        } else {
            self.classical(r, &cat)?;
        }
        Ok(())
    }

    fn classical(&self, r: &mut Report, cat: &QCategory<'_>) -> Result<(), SuiteError> {
        let site = self.site;
        let report = check_classical(site, &self.inst.points, self.bounds.base, self.family_legs());
        r.verdict("points: hom-sets are all functions", &report.hom_bijection);
        r.verdict("points: maps from points are jointly surjective", &report.points_cover);
        r.verdict("points: local lifting through strict epi families", &report.local_lifting);
        let Ok(data) = ClassicalData::establish(site, &self.inst.points, self.bounds.base, self.family_legs()) else {
            return Ok(());
        };
        let minimum = first((0..=self.bounds.base).map(|n| {
            let base = FinSet::range(n);
            let bottom = bottom_strict(&data, &base);
            let fiber = strict_fiber(cat, n);
            if !is_strict(&bottom) {
                Err(format!("the smallest structure on {n} elements is not strict"))
            } else if bottom != bottom_strict_generated(&data, &base) {
                Err(format!("on {n} elements the formula and the generated structure differ"))
            } else if !fiber.contains(&bottom) || !fiber.iter().all(|q| bottom.is_finer_than(q)) {
                Err(format!("on {n} elements it is not the minimum of {} strict structures", fiber.len()))
            } else {
                Ok(())
            }
        }));
        r.verdict("smallest strict structure is the minimum of the strict fiber", &from_result(minimum));
        let (l_ok, l_count) = fold_checks(cat.universe().iter().map(|q| verify_reflection_l(&data, cat, q)));
        r.counted("reflection hom-bijection", &l_ok, l_count);
        let strict_cat = QCategory::strict(site, self.bounds.base)?;
        r.verdict(
            "initial families of strict structures are strict",
            &initial_families_of_strict(site, &strict_cat, self.family_legs(), false),
        );
        Ok(())
    }

    fn sheaf(&self, r: &mut Report) -> Result<(), SuiteError> {
        let trivial = Site::trivial(self.site.functor().clone())?;
        let presheaves = QCategory::new(&trivial, self.bounds.base)?;
        let comparisons: Vec<_> = presheaves.universe().iter().map(|p| (p, sheaf_vs_covering(self.site, p))).collect();
        let disagreements: Vec<_> = comparisons.iter().filter(|(_, c)| !c.agree()).collect();
        let witness = disagreements.first().map(|(p, c)| {
            format!(
                "{}: covering condition {}, sheaf condition {}{}",
                p.describe(self.site),
                c.is_qspace,
                c.is_sheaf,
                c.sheaf_witness.as_deref().map(|w| format!(" ({w})")).unwrap_or_default()
            )
        });
        if self.site.covers_are_surjective() {
            r.counted(
                "sheaf and covering conditions agree",
                &Verdict::from_witness(witness),
                comparisons.len(),
            );
        } else {
            r.note(format!(
                "covers are not surjective: {} of {} subpresheaves disagree",
                disagreements.len(),
                comparisons.len()
            ));
            if let Some(w) = witness {
                r.note(format!("disagreement: {w}"));
            }
        }
        Ok(())
    }

    fn fregular(&self, r: &mut Report) -> Result<(), SuiteError> {
        let site = self.site;
        // the strict functors are only claimed to be f-regular under a2
        let a2 = check_sufficient_a2(site, self.bounds.universe)?.initial_injective.holds();
        // single legs on the full universe, pairs on the one below it
        let mut configs = vec![(self.bounds.universe, 1)];
        if self.family_legs() > 1 && self.bounds.universe > 0 {
            configs.push((self.bounds.universe - 1, self.family_legs()));
        }
        for (bound, legs) in configs {
            let tag = format!("(universe {bound}, legs {legs})");
            let quasi = QCategory::new(site, bound)?;
            let strict = QCategory::strict(site, bound)?;
            let sets = FinSets::up_to(bound);
            let size = |x: &QSpace| x.size();
            let top = |&n: &usize| (top_structure(site, &FinSet::range(n)), FinMap::identity(n));
            let q = UnderlyingFunctor { source: &quasi, target: &sets, on_object: &size, right_adjoint: &top };
            record_f_regular(r, &format!("underlying set {tag}"), &check_f_regular(&q, legs)?);

            if !a2 {
                r.note(format!("strict structures {tag}: initial injective families leave them, so only the associated structure is checked"));
            }
            let adjoint = |&n: &usize| {
                let c = right_adjoint_r(site, &FinSet::range(n));
                (c.space.with_base(FinSet::range(c.inclusion.dom())), c.inclusion)
            };
            let qs = UnderlyingFunctor { source: &strict, target: &sets, on_object: &size, right_adjoint: &adjoint };
            if a2 {
                record_f_regular(r, &format!("underlying set of strict structures {tag}"), &check_f_regular(&qs, legs)?);
            }

            let same = |x: &QSpace| x.clone();
            let core = |y: &QSpace| {
                let c = coreflection_s(y);
                (c.space.with_base(FinSet::range(c.inclusion.dom())), c.inclusion)
            };
            let i = UnderlyingFunctor { source: &strict, target: &quasi, on_object: &same, right_adjoint: &core };
            if a2 {
                record_f_regular(r, &format!("strict inclusion {tag}"), &check_f_regular(&i, legs)?);
            }

            let pair = TopologyPair::new(Site::trivial(site.functor().clone())?, site.clone())?;
            let report = check_sharp_f_regular(&pair, bound, legs).map_err(|e| SuiteError::Other(e.to_string()))?;
            record_f_regular(r, &format!("associated structure {tag}"), &report);
        }
        Ok(())
    }
}

fn record_f_regular(r: &mut Report, functor: &str, report: &FRegularReport) {
    for (name, v) in report.verdicts() {
        r.verdict(format!("{functor}: {name}"), v);
    }
    r.note(format!("{functor}: {} families searched", report.families_checked));
}

fn from_result(r: Result<(), String>) -> Verdict {
    Verdict::from_witness(r.err())
}

fn fold_checks(checks: impl IntoIterator<Item = crate::strictq::AdjunctionCheck>) -> (Verdict, usize) {
    let mut count = 0;
    for c in checks {
        count += c.morphisms;
        if !c.holds() {
            return (c.verdict, count);
        }
    }
    (Verdict::Holds, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn every_suite_passes_on_the_two_point_site() {
        let f1 = fixtures::f1();
        let r = run_suite("all", &f1, &f1.bounds).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        for s in SUITES {
            assert!(r.checks.iter().any(|c| c.name.starts_with(&format!("{s}: "))), "{s}");
        }
    }

    #[test]
    fn unknown_suite() {
        let f1 = fixtures::f1();
        assert!(matches!(run_suite("nope", &f1, &f1.bounds), Err(SuiteError::Unknown(_))));
    }

    #[test]
    fn subset_filtering_gives_up_on_large_fibers() {
        let f3 = fixtures::f3().site;
        // graphs on three vertices: a vertex subset and any relation on it
        assert_eq!(brute_force_fiber(&f3, 3).map(|s| s.len()), Some(1 + 3 * 2 + 3 * 16 + 512));
        assert!(brute_force_fiber(&f3, 5).is_none());
    }

    #[test]
    fn missing_hypotheses_become_notes() {
        let half = fixtures::load("half").unwrap();
        let r = run_suite("strict", &half, &half.bounds).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.notes.iter().any(|n| n.starts_with("fails: the product")));
    }

    #[test]
    fn empty_covers_leave_a_disagreement_note() {
        let inst = fixtures::load("empty-cover").unwrap();
        let r = run_suite("sheaf", &inst, &inst.bounds).unwrap();
        assert!(r.checks.is_empty());
        assert!(r.notes.iter().any(|n| n.starts_with("disagreement")));
    }
}
