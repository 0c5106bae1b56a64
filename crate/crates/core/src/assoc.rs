//! The associated quasispace functor `#` from quasispaces for a coarse
//! topology to quasispaces for a finer one on the same site, left adjoint
//! to the inclusion.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::families::concrete::ConcreteCategory;
use crate::families::{subsets_up_to, Verdict};
use crate::fincat::{all_functions, FinMap, FinSet};
use crate::fregular::{check_f_regular, FRegularReport, UnderlyingFunctor};
use crate::quasispace::{
    good_arrows_cover, hom_q, initial_structure, validate_qspace, yoneda_structure,
    EnumerationError, QCategory, QSpace,
};
use crate::site::Site;
use crate::strictq::{bijection_by_composition, coreflection_s, is_strict, AdjunctionCheck};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AssocError {
    #[error("the two sites have different categories or functors")]
    DifferentFunctors,
    #[error("the coarse topology is not contained in the fine one: {0}")]
    NotNested(String),
    #[error("not a quasispace for the coarse topology: {0}")]
    InvalidInput(String),
    #[error("associated structure is not closed: {0}")]
    NotClosed(String),
}

/// Two topologies on one site, the first contained in the second.
#[derive(Debug, Clone)]
pub struct TopologyPair {
    coarse: Site,
    fine: Site,
}

impl TopologyPair {
    pub fn new(coarse: Site, fine: Site) -> Result<Self, AssocError> {
        if coarse.functor() != fine.functor() {
            return Err(AssocError::DifferentFunctors);
        }
        let c = coarse.category();
        for o in c.objects() {
            if let Some(f) = coarse.covers(o).iter().find(|f| !fine.covers(o).contains(f)) {
                return Err(AssocError::NotNested(format!(
                    "{} covers {} only coarsely",
                    f.describe(c),
                    c.object_name(o)
                )));
            }
        }
        Ok(Self { coarse, fine })
    }

    pub fn coarse(&self) -> &Site {
        &self.coarse
    }

    pub fn fine(&self) -> &Site {
        &self.fine
    }
}

/// `σ` is admissible when the arrows along which it restricts into `q`
/// cover its domain in the fine topology. One pass suffices because the
/// fine topology is saturated.
fn sharp_once(fine: &Site, q: &QSpace) -> QSpace {
    let c = fine.category();
    let u = fine.functor();
    let admissible = c
        .objects()
        .map(|k| {
            all_functions(fine.size(k), q.size())
                .filter(|sigma| {
                    good_arrows_cover(fine, k, |leg| q.admits(c.source(leg), &sigma.compose(u.on_morphism(leg))))
                })
                .collect::<BTreeSet<_>>()
        })
        .collect();
    QSpace::new(q.base().clone(), admissible)
}

pub fn sharp(pair: &TopologyPair, q: &QSpace) -> Result<QSpace, AssocError> {
    if let Some(v) = validate_qspace(&pair.coarse, q).first() {
        return Err(AssocError::InvalidInput(v.to_string()));
    }
    let out = sharp_once(&pair.fine, q);
    if let Some(v) = validate_qspace(&pair.fine, &out).first() {
        return Err(AssocError::NotClosed(v.to_string()));
    }
    if sharp_once(&pair.fine, &out) != out {
        return Err(AssocError::NotClosed("a second pass adds maps".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharpAdjunctionReport {
    /// `X ⊆ #X` for every coarse quasispace.
    pub unit: Verdict,
    /// `#Y = Y` for every fine quasispace.
    pub fixes_fine: Verdict,
    /// `[#X, Y] = [X, Y]` as sets of functions.
    pub hom_bijection: AdjunctionCheck,
    pub coarse_objects: usize,
    pub fine_objects: usize,
    pub bound_base: usize,
}

impl SharpAdjunctionReport {
    pub fn holds(&self) -> bool {
        self.unit.holds() && self.fixes_fine.holds() && self.hom_bijection.holds()
    }
}

fn first_failure(checks: impl IntoIterator<Item = Result<(), String>>) -> Verdict {
    checks
        .into_iter()
        .find_map(Result::err)
        .map_or(Verdict::Holds, Verdict::Fails)
}

pub fn verify_sharp_adjunction(pair: &TopologyPair, bound_base: usize) -> Result<SharpAdjunctionReport, EnumerationError> {
    let coarse = QCategory::new(&pair.coarse, bound_base)?;
    let fine = QCategory::new(&pair.fine, bound_base)?;
    let sharpened: Vec<QSpace> = coarse
        .universe()
        .iter()
        .map(|x| sharp(pair, x).expect("enumerated structures are valid"))
        .collect();
    let unit = first_failure(coarse.universe().iter().zip(&sharpened).map(|(x, sx)| {
        if x.is_finer_than(sx) {
            Ok(())
        } else {
            Err(format!("{} is not contained in its associated structure", x.base()))
        }
    }));
    let fixes_fine = first_failure(fine.universe().iter().map(|y| match sharp(pair, y) {
        Ok(sy) if sy == *y => Ok(()),
        Ok(_) => Err(format!("a fine structure on {} is moved", y.base())),
        Err(e) => Err(e.to_string()),
    }));
    let mut hom_bijection = AdjunctionCheck { objects: 0, morphisms: 0, verdict: Verdict::Holds };
    'outer: for (x, sx) in coarse.universe().iter().zip(&sharpened) {
        for y in fine.universe() {
            // both sides are sets of functions between the same bases
            let step = bijection_by_composition(
                [(format!("{} to {}", x.base(), y.base()), hom_q(sx, y), hom_q(x, y))],
                &FinMap::identity(y.size()),
            );
            hom_bijection.objects += step.objects;
            hom_bijection.morphisms += step.morphisms;
            if !step.holds() {
                hom_bijection.verdict = step.verdict;
                break 'outer;
            }
        }
    }
    Ok(SharpAdjunctionReport {
        unit,
        fixes_fine,
        hom_bijection,
        coarse_objects: coarse.universe().len(),
        fine_objects: fine.universe().len(),
        bound_base,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub verdict: Verdict,
    pub families_checked: usize,
    pub bound_base: usize,
    pub max_legs: usize,
}

/// `#` of an initial structure is the initial structure of the sharpened
/// cone, for every cone of at most `max_legs` legs into coarse quasispaces
/// with bases of size at most `bound_base`.
pub fn verify_sharp_preserves_initial(
    pair: &TopologyPair,
    bound_base: usize,
    max_legs: usize,
) -> Result<PreservationReport, EnumerationError> {
    let coarse = QCategory::new(&pair.coarse, bound_base)?;
    let targets: Vec<(QSpace, QSpace)> = coarse
        .universe()
        .iter()
        .map(|y| (y.clone(), sharp(pair, y).expect("enumerated structures are valid")))
        .collect();
    let mut checked = 0;
    for n in 0..=bound_base {
        let base = FinSet::range(n);
        let legs: Vec<(usize, FinMap)> = targets
            .iter()
            .enumerate()
            .flat_map(|(i, (y, _))| all_functions(n, y.size()).map(move |m| (i, m)))
            .collect();
        for chosen in subsets_up_to(&legs, max_legs) {
            checked += 1;
            let cone: Vec<(QSpace, FinMap)> = chosen.iter().map(|(i, m)| (targets[*i].0.clone(), m.clone())).collect();
            let sharpened: Vec<(QSpace, FinMap)> = chosen.iter().map(|(i, m)| (targets[*i].1.clone(), m.clone())).collect();
            let lhs = sharp(pair, &initial_structure(&pair.coarse, &base, &cone)).expect("initial structures are valid");
            let rhs = initial_structure(&pair.fine, &base, &sharpened);
            if lhs != rhs {
                let shown: Vec<String> = chosen.iter().map(|(i, m)| format!("{:?} into #{i}", m.images())).collect();
                return Ok(PreservationReport {
                    verdict: Verdict::Fails(format!("cone on {n} elements [{}]", shown.join(", "))),
                    families_checked: checked,
                    bound_base,
                    max_legs,
                });
            }
        }
    }
    Ok(PreservationReport { verdict: Verdict::Holds, families_checked: checked, bound_base, max_legs })
}

/// `#` applied to coarse representables gives the fine representables.
pub fn verify_sharp_on_representables(pair: &TopologyPair) -> Verdict {
    let c = pair.coarse.category();
    first_failure(c.objects().map(|o| {
        let coarse = yoneda_structure(&pair.coarse, o);
        match sharp(pair, &coarse) {
            Ok(s) if s == yoneda_structure(&pair.fine, o) => Ok(()),
            Ok(_) => Err(format!("representable at {} differs", c.object_name(o))),
            Err(e) => Err(e.to_string()),
        }
    }))
}

/// Compatibility of `#`, the inclusion `c` and the strict coreflection `s`
/// with the inclusion `i` of strict quasispaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    /// A strict fine quasispace is a strict coarse quasispace.
    pub inclusions_commute: Verdict,
    /// `#` sends strict quasispaces to strict quasispaces.
    pub sharp_keeps_strict: Verdict,
    /// `s` of a fine quasispace is the same in both categories.
    pub coreflection_commutes: Verdict,
}

impl SquareReport {
    pub fn holds(&self) -> bool {
        self.inclusions_commute.holds() && self.sharp_keeps_strict.holds() && self.coreflection_commutes.holds()
    }
}

pub fn verify_strict_square(pair: &TopologyPair, bound_base: usize) -> Result<SquareReport, EnumerationError> {
    let coarse = QCategory::new(&pair.coarse, bound_base)?;
    let fine = QCategory::new(&pair.fine, bound_base)?;
    let inclusions_commute = first_failure(fine.universe().iter().filter(|y| is_strict(y)).map(|y| {
        match validate_qspace(&pair.coarse, y).first() {
            None => Ok(()),
            Some(v) => Err(v.to_string()),
        }
    }));
    let sharp_keeps_strict = first_failure(coarse.universe().iter().filter(|x| is_strict(x)).map(|x| {
        match sharp(pair, x) {
            Ok(s) if is_strict(&s) => Ok(()),
            Ok(_) => Err(format!("a strict structure on {} loses density", x.base())),
            Err(e) => Err(e.to_string()),
        }
    }));
    let coreflection_commutes = first_failure(fine.universe().iter().map(|y| {
        let s = coreflection_s(y).space;
        let fine_ok = validate_qspace(&pair.fine, &s).is_empty();
        let coarse_ok = validate_qspace(&pair.coarse, &s).is_empty();
        if fine_ok && coarse_ok && is_strict(&s) {
            Ok(())
        } else {
            Err(format!("the strict part of a structure on {} is not a fine strict quasispace", y.base()))
        }
    }));
    Ok(SquareReport { inclusions_commute, sharp_keeps_strict, coreflection_commutes })
}

/// Bounded f-regularity of `#`, with the inclusion as right adjoint.
pub fn check_sharp_f_regular(
    pair: &TopologyPair,
    bound_base: usize,
    max_legs: usize,
) -> Result<FRegularReport, Box<dyn std::error::Error>> {
    let coarse = QCategory::new(&pair.coarse, bound_base)?;
    let fine = QCategory::new(&pair.fine, bound_base)?;
    let on_object = |x: &QSpace| sharp(pair, x).expect("enumerated structures are valid");
    let right_adjoint = |y: &QSpace| (y.clone(), FinMap::identity(y.size()));
    debug_assert!(fine.test_objects().iter().all(|y| validate_qspace(&pair.coarse, y).is_empty()));
    let functor = UnderlyingFunctor {
        source: &coarse,
        target: &fine,
        on_object: &on_object,
        right_adjoint: &right_adjoint,
    };
    Ok(check_f_regular(&functor, max_legs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quasispace::top_structure;

    fn two_point_pair() -> TopologyPair {
        TopologyPair::new(fixtures::f2().site, fixtures::f1().site).unwrap()
    }

    #[test]
    fn a_single_point_glues_along_the_cover() {
        let pair = two_point_pair();
        let x = fixtures::f2().qspace("point").unwrap().clone();
        let l = pair.fine().category().object("L").unwrap();
        assert!(x.admissible(l).is_empty());
        let sx = sharp(&pair, &x).unwrap();
        // only the constant pair at x restricts along a and b to the admitted point
        assert_eq!(sx.admissible(l).iter().map(|m| m.images().to_vec()).collect::<Vec<_>>(), vec![vec![0, 0]]);
    }

    #[test]
    fn fine_structures_and_the_top_are_fixed() {
        let pair = two_point_pair();
        let fine = QCategory::new(pair.fine(), 2).unwrap();
        for y in fine.universe() {
            assert_eq!(&sharp(&pair, y).unwrap(), y);
        }
        let top = top_structure(pair.coarse(), &FinSet::range(3));
        assert_eq!(sharp(&pair, &top).unwrap(), top);
    }

    #[test]
    fn invalid_input_and_unnested_topologies_are_rejected() {
        let pair = two_point_pair();
        let l = pair.fine().category().object("L").unwrap();
        let mut adm = vec![BTreeSet::new(); 2];
        adm[l.0].insert(FinMap::identity(2));
        assert!(matches!(
            sharp(&pair, &QSpace::new(FinSet::range(2), adm)),
            Err(AssocError::InvalidInput(_))
        ));
        assert!(matches!(
            TopologyPair::new(fixtures::f1().site, fixtures::f2().site),
            Err(AssocError::NotNested(_))
        ));
        assert!(matches!(
            TopologyPair::new(fixtures::f1().site, fixtures::f3().site),
            Err(AssocError::DifferentFunctors)
        ));
    }

    #[test]
    fn adjunction_between_the_two_point_topologies() {
        let report = verify_sharp_adjunction(&two_point_pair(), 2).unwrap();
        assert!(report.holds(), "{report:?}");
        assert!(report.hom_bijection.morphisms > 0);
        assert!(report.coarse_objects > report.fine_objects);
    }

    #[test]
    fn identity_pair_gives_the_identity() {
        let site = fixtures::f1().site;
        let pair = TopologyPair::new(site.clone(), site).unwrap();
        let report = verify_sharp_adjunction(&pair, 2).unwrap();
        assert!(report.holds());
        assert_eq!(report.coarse_objects, report.fine_objects);
    }

    #[test]
    fn initial_families_are_preserved() {
        let report = verify_sharp_preserves_initial(&two_point_pair(), 2, 2).unwrap();
        assert!(report.verdict.holds(), "{report:?}");
        // the empty cone on each base size is among them
        assert!(report.families_checked > 3);
    }

    #[test]
    fn representables_go_to_representables() {
        assert!(verify_sharp_on_representables(&two_point_pair()).holds());
    }

    #[test]
    fn strictness_square() {
        let report = verify_strict_square(&two_point_pair(), 2).unwrap();
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn sharp_is_f_regular() {
        // pairs of legs only on the smaller universe, to keep the search short
        for (bound, legs) in [(2, 1), (1, 2)] {
            let report = check_sharp_f_regular(&two_point_pair(), bound, legs).unwrap();
            assert!(report.holds(), "{report:?}");
        }
    }
}
