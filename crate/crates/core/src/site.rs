//! Grothendieck pretopologies and topologies on finite categories, and sites
//! made of a category, a functor into finite sets and a coverage.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::families::{
    check_property, families_over, is_strict_epi_family, iso_collection, saturation, Collection,
    Family, FamilyError, Property,
};
use crate::fincat::{
    validate_category, validate_functor, CategoryViolation, ConcreteFunctor, FinCat,
    FunctorViolation, Obj,
};

/// Per-object covering families, either generators or a saturated topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    families: Collection,
    saturated: bool,
}

impl Coverage {
    pub fn generated_by(families: Collection) -> Self {
        Self {
            families,
            saturated: false,
        }
    }

    pub fn families(&self) -> &Collection {
        &self.families
    }

    pub fn covers(&self, o: Obj) -> &BTreeSet<Family> {
        self.families.over(o)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyFailure {
    pub property: Property,
    pub witness: String,
}

impl fmt::Display for PropertyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails: {}", self.property, self.witness)
    }
}

/// Failures of the pretopology axioms (I), (C), (U); empty iff valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PretopologyReport {
    pub failures: Vec<PropertyFailure>,
}

impl PretopologyReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for PretopologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.failures.iter().map(ToString::to_string).collect();
        write!(f, "{}", lines.join("; "))
    }
}

fn check_properties(c: &FinCat, col: &Collection, props: &[Property]) -> PretopologyReport {
    let failures = props
        .iter()
        .filter_map(|&p| {
            check_property(c, col, p, c.morphism_count())
                .witness()
                .map(|w| PropertyFailure {
                    property: p,
                    witness: w.to_string(),
                })
        })
        .collect();
    PretopologyReport { failures }
}

const PRETOPOLOGY: [Property; 3] = [Property::Isomorphisms, Property::Composition, Property::Universal];

pub fn validate_pretopology(c: &FinCat, j: &Coverage) -> PretopologyReport {
    check_properties(c, &j.families, &PRETOPOLOGY)
}

#[derive(Debug, Error)]
pub enum SiteError {
    #[error("not a category: {}", join_display(.0))]
    Category(Vec<CategoryViolation>),
    #[error("not a functor: {}", join_display(.0))]
    Functor(Vec<FunctorViolation>),
    #[error("not a pretopology: {0}")]
    Pretopology(PretopologyReport),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

fn join_display<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Every family refined by a cover, up to `max_legs` legs.
pub fn saturate_bounded(c: &FinCat, j: &Coverage, max_legs: usize) -> Result<Coverage, SiteError> {
    if j.saturated {
        return Ok(j.clone());
    }
    let report = validate_pretopology(c, j);
    if !report.is_valid() {
        return Err(SiteError::Pretopology(report));
    }
    Ok(Coverage {
        families: saturation(c, &j.families, max_legs),
        saturated: true,
    })
}

/// Saturation over all families (the leg bound is the number of morphisms).
pub fn saturate(c: &FinCat, j: &Coverage) -> Result<Coverage, SiteError> {
    saturate_bounded(c, j, c.morphism_count())
}

pub fn trivial_topology(c: &FinCat) -> Coverage {
    Coverage {
        families: saturation(c, &iso_collection(c), c.morphism_count()),
        saturated: true,
    }
}

/// The strict-epimorphic families, saturated, with the (U)/(C) check result.
#[derive(Debug, Clone)]
pub struct CanonicalTopology {
    pub coverage: Coverage,
    pub report: PretopologyReport,
}

pub fn canonical_topology(c: &FinCat, max_legs: usize) -> Result<CanonicalTopology, SiteError> {
    let mut strict = Collection::empty(c);
    for o in c.objects() {
        for f in families_over(c, o, max_legs) {
            if is_strict_epi_family(c, &f, max_legs)?.holds() {
                strict.insert(f);
            }
        }
    }
    let families = saturation(c, &strict, c.morphism_count());
    let report = check_properties(
        c,
        &families,
        &[Property::Universal, Property::Composition],
    );
    Ok(CanonicalTopology {
        coverage: Coverage {
            families,
            saturated: true,
        },
        report,
    })
}

/// Membership in the generated topology: some listed cover refines `f`.
pub fn is_cover(c: &FinCat, j: &Coverage, f: &Family) -> bool {
    if j.saturated {
        return j.families.contains(f);
    }
    j.covers(f.codomain()).iter().any(|g| {
        crate::families::refines(c, g, f)
            .map(|r| r.is_some())
            .unwrap_or(false)
    })
}

/// A category with a functor into finite sets and a Grothendieck topology.
#[derive(Debug, Clone)]
pub struct Site {
    functor: ConcreteFunctor,
    generators: Coverage,
    topology: Coverage,
}

impl Site {
    /// Validates the category, the functor and the pretopology, then saturates.
    pub fn new(functor: ConcreteFunctor, generators: Collection) -> Result<Self, SiteError> {
        let c = functor.domain();
        let violations = validate_category(c);
        if !violations.is_empty() {
            return Err(SiteError::Category(violations));
        }
        let violations = validate_functor(&functor);
        if !violations.is_empty() {
            return Err(SiteError::Functor(violations));
        }
        let generators = Coverage::generated_by(generators);
        let topology = saturate(c, &generators)?;
        Ok(Self {
            functor,
            generators,
            topology,
        })
    }

    /// The same category and functor with the trivial topology.
    pub fn trivial(functor: ConcreteFunctor) -> Result<Self, SiteError> {
        let gens = iso_collection(functor.domain());
        Self::new(functor, gens)
    }

    pub fn with_generators(&self, generators: Collection) -> Result<Self, SiteError> {
        Self::new(self.functor.clone(), generators)
    }

    pub fn category(&self) -> &FinCat {
        self.functor.domain()
    }

    pub fn functor(&self) -> &ConcreteFunctor {
        &self.functor
    }

    pub fn generators(&self) -> &Coverage {
        &self.generators
    }

    pub fn topology(&self) -> &Coverage {
        &self.topology
    }

    /// Covers of `o` in the saturated topology.
    pub fn covers(&self, o: Obj) -> &BTreeSet<Family> {
        self.topology.covers(o)
    }

    pub fn has_empty_cover(&self, o: Obj) -> bool {
        self.covers(o).contains(&Family::empty(o))
    }

    /// `|u(o)|`.
    pub fn size(&self, o: Obj) -> usize {
        self.functor.size(o)
    }

    /// Are all generating covers jointly surjective after `u`?
    pub fn covers_are_surjective(&self) -> bool {
        self.generators
            .families()
            .iter()
            .all(|f| crate::families::is_surjective_family(&self.functor, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Family, DEFAULT_MAX_LEGS};

    fn two_point() -> FinCat {
        FinCat::builder()
            .objects(["P", "L"])
            .morphism("a", "P", "L")
            .morphism("b", "P", "L")
            .build()
            .unwrap()
    }

    fn fam(c: &FinCat, o: &str, legs: &[&str]) -> Family {
        Family::by_names(c, o, legs).unwrap()
    }

    fn two_point_covers(c: &FinCat) -> Coverage {
        Coverage::generated_by(Collection::from_families(
            c,
            [fam(c, "L", &["a", "b"]), fam(c, "L", &["id_L"]), fam(c, "P", &["id_P"])],
        ))
    }

    fn diamond() -> FinCat {
        FinCat::from_preorder(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap()
    }

    #[test]
    fn two_point_coverage_is_a_pretopology() {
        let c = two_point();
        assert!(validate_pretopology(&c, &two_point_covers(&c)).is_valid());
        assert!(validate_pretopology(&c, &Coverage::generated_by(iso_collection(&c))).is_valid());
    }

    #[test]
    fn dropping_the_point_cover_breaks_identities() {
        let c = two_point();
        let mut cov = two_point_covers(&c).families.clone();
        cov.remove(&fam(&c, "P", &["id_P"]));
        let report = validate_pretopology(&c, &Coverage::generated_by(cov));
        assert!(report
            .failures
            .iter()
            .any(|f| f.property == Property::Isomorphisms));
    }

    #[test]
    fn saturation_examples() {
        let c = two_point();
        let sat = saturate(&c, &two_point_covers(&c)).unwrap();
        assert!(sat.families.contains(&fam(&c, "L", &["a", "b", "id_L"])));
        assert!(!sat.families.contains(&Family::empty(c.object("L").unwrap())));
        assert_eq!(saturate(&c, &sat).unwrap(), sat);

        let triv = trivial_topology(&c);
        let p = c.object("P").unwrap();
        for f in triv.covers(p) {
            assert!(f.contains(c.identity(p)));
        }
        assert_eq!(triv.covers(p).len(), 1);
    }

    #[test]
    fn trivial_topology_covers_contain_an_identity_refinement() {
        let d = diamond();
        let triv = trivial_topology(&d);
        for o in d.objects() {
            for f in families_over(&d, o, d.morphism_count()) {
                assert_eq!(triv.families.contains(&f), f.contains(d.identity(o)));
            }
            assert!(!triv.families.contains(&Family::empty(o)));
        }
    }

    #[test]
    fn canonical_topology_on_diamond_and_n5() {
        let d = diamond();
        let can = canonical_topology(&d, DEFAULT_MAX_LEGS).unwrap();
        assert!(can.coverage.families.contains(&fam(&d, "1", &["a<1", "b<1"])));
        assert!(can.report.is_valid(), "{}", can.report);

        let n5 = FinCat::from_preorder(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        )
        .unwrap();
        let can = canonical_topology(&n5, DEFAULT_MAX_LEGS).unwrap();
        assert!(can
            .report
            .failures
            .iter()
            .any(|f| f.property == Property::Universal));

        let point = FinCat::builder().object("*").build().unwrap();
        let can = canonical_topology(&point, DEFAULT_MAX_LEGS).unwrap();
        let star = point.object("*").unwrap();
        // the lone object is initial, so the empty family is strict epi too
        assert_eq!(
            can.coverage.covers(star).iter().collect::<Vec<_>>(),
            vec![&Family::empty(star), &Family::singleton(&point, point.identity(star))]
        );
    }

    #[test]
    fn cover_membership_via_generators() {
        let c = two_point();
        let j = two_point_covers(&c);
        assert!(is_cover(&c, &j, &fam(&c, "L", &["a", "b"])));
        assert!(!is_cover(&c, &j, &Family::empty(c.object("L").unwrap())));
        assert!(is_cover(&c, &j, &fam(&c, "L", &["a", "b", "id_L"])));
    }
}
