//! Bounded checks that a functor between concrete categories is f-regular:
//! it has a right adjoint, is faithful, and creates and preserves finite
//! strict mono families, strict epi families and universal strict epi
//! families.
//!
//! Every functor checked here keeps underlying maps unchanged, so a morphism
//! of the source is sent to the same function. Families range over the test
//! universes with at most `max_legs` legs.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::families::concrete::{is_strict_epi, is_strict_mono, ConcreteCategory, Cone, Sink};
use crate::families::{FamilyError, Verdict};
use crate::fincat::FinMap;
use crate::fsetbase::{self, Diagram, FinSets};
use crate::quasispace::QCategory;

/// Concrete categories in which pullbacks of cospans can be computed.
pub trait WithPullbacks: ConcreteCategory {
    /// Pullback of `f: X -> Z` and `g: Y -> Z`, with its two projections.
    fn pullback(
        &self,
        f: (&Self::Object, &FinMap),
        g: (&Self::Object, &FinMap),
    ) -> (Self::Object, FinMap, FinMap);
}

impl WithPullbacks for FinSets {
    fn pullback(&self, (_, f): (&usize, &FinMap), (_, g): (&usize, &FinMap)) -> (usize, FinMap, FinMap) {
        let u = fsetbase::limits_colimits(&Diagram::Pullback(f.clone(), g.clone())).expect("a cospan");
        (u.object, u.maps[0].clone(), u.maps[1].clone())
    }
}

impl WithPullbacks for QCategory<'_> {
    fn pullback(
        &self,
        f: (&Self::Object, &FinMap),
        g: (&Self::Object, &FinMap),
    ) -> (Self::Object, FinMap, FinMap) {
        QCategory::pullback(self, f, g)
    }
}

/// `R y` with the counit `u(R y) -> y`.
pub type RightAdjoint<'a, S, T> = &'a dyn Fn(&<T as ConcreteCategory>::Object) -> (<S as ConcreteCategory>::Object, FinMap);

/// A functor that is the identity on underlying functions.
pub struct UnderlyingFunctor<'a, S: WithPullbacks, T: WithPullbacks> {
    pub source: &'a S,
    pub target: &'a T,
    pub on_object: &'a dyn Fn(&S::Object) -> T::Object,
    pub right_adjoint: RightAdjoint<'a, S, T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FRegularReport {
    pub right_adjoint: Verdict,
    pub faithful: Verdict,
    pub strict_mono: Verdict,
    pub strict_epi: Verdict,
    pub universal_strict_epi: Verdict,
    pub max_legs: usize,
    pub families_checked: usize,
}

impl FRegularReport {
    pub fn holds(&self) -> bool {
        self.right_adjoint.holds()
            && self.faithful.holds()
            && self.strict_mono.holds()
            && self.strict_epi.holds()
            && self.universal_strict_epi.holds()
    }

    pub fn verdicts(&self) -> [(&'static str, &Verdict); 5] {
        [
            ("right adjoint", &self.right_adjoint),
            ("faithful", &self.faithful),
            ("finite strict mono families", &self.strict_mono),
            ("strict epi families", &self.strict_epi),
            ("universal strict epi families", &self.universal_strict_epi),
        ]
    }
}

fn index_subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    crate::families::subsets_up_to(&(0..n).collect::<Vec<_>>(), max)
}

/// Sets of at most `max_legs` morphisms into (or out of) `x`.
pub(crate) fn families<C: ConcreteCategory>(cat: &C, x: &C::Object, max_legs: usize, into: bool) -> Vec<Vec<(C::Object, FinMap)>> {
    let legs: Vec<(C::Object, FinMap)> = cat
        .test_objects()
        .into_iter()
        .flat_map(|y| {
            let homs = if into { cat.hom(&y, x) } else { cat.hom(x, &y) };
            homs.into_iter().map(move |m| (y.clone(), m))
        })
        .collect();
    index_subsets(legs.len(), max_legs)
        .into_iter()
        .map(|ix| ix.into_iter().map(|k| legs[k].clone()).collect())
        .collect()
}

fn each_lift<O: Clone>(fibers: &[Vec<O>], visit: &mut dyn FnMut(&[O]) -> bool) -> bool {
    fn go<O: Clone>(fibers: &[Vec<O>], acc: &mut Vec<O>, visit: &mut dyn FnMut(&[O]) -> bool) -> bool {
        match fibers.split_first() {
            None => visit(acc),
            Some((first, rest)) => {
                for o in first {
                    acc.push(o.clone());
                    if !go(rest, acc, visit) {
                        return false;
                    }
                    acc.pop();
                }
                true
            }
        }
    }
    go(fibers, &mut Vec::new(), visit)
}

/// Universal: strict epi, and still strict epi after pulling back along
/// any morphism from a test object.
pub fn is_universal_strict_epi<C: WithPullbacks>(
    cat: &C,
    sink: &Sink<C::Object>,
    max_legs: usize,
) -> Result<Verdict, FamilyError> {
    let v = is_strict_epi(cat, sink, max_legs)?;
    if !v.holds() {
        return Ok(v);
    }
    for z in cat.test_objects() {
        for g in cat.hom(&z, &sink.codomain) {
            let pulled = Sink {
                codomain: z.clone(),
                legs: sink
                    .legs
                    .iter()
                    .map(|(x, f)| {
                        let (p, _, to_z) = cat.pullback((x, f), (&z, &g));
                        (p, to_z)
                    })
                    .collect(),
            };
            if let Verdict::Fails(w) = is_strict_epi(cat, &pulled, max_legs)? {
                return Ok(Verdict::Fails(format!(
                    "pulled back along {:?} from {z:?}: {w}",
                    g.images()
                )));
            }
        }
    }
    Ok(Verdict::Holds)
}

type Decider<'d, C> = &'d dyn Fn(&C, &Sink<<C as ConcreteCategory>::Object>) -> Result<Verdict, FamilyError>;

pub fn check_f_regular<S: WithPullbacks, T: WithPullbacks>(
    f: &UnderlyingFunctor<'_, S, T>,
    max_legs: usize,
) -> Result<FRegularReport, FamilyError>
where
    S::Object: std::fmt::Debug,
    T::Object: std::fmt::Debug,
{
    let images: Vec<(S::Object, T::Object)> = f
        .source
        .test_objects()
        .into_iter()
        .map(|x| {
            let fx = (f.on_object)(&x);
            (x, fx)
        })
        .collect();
    let cached = |x: &S::Object| match images.iter().find(|(y, _)| y == x) {
        Some((_, fx)) => fx.clone(),
        None => (f.on_object)(x),
    };
    let f = &UnderlyingFunctor {
        source: f.source,
        target: f.target,
        on_object: &cached,
        right_adjoint: f.right_adjoint,
    };
    let mut counted = 0usize;
    let right_adjoint = check_adjoint(f);
    let faithful = check_faithful(f);

    let strict_mono = check_cones(f, max_legs, &mut counted)?;
    let epi_s = |c: &S, s: &Sink<S::Object>| is_strict_epi(c, s, max_legs);
    let epi_t = |c: &T, s: &Sink<T::Object>| is_strict_epi(c, s, max_legs);
    let strict_epi = check_sinks(f, max_legs, &epi_s, &epi_t, &mut counted)?;
    let uni_s = |c: &S, s: &Sink<S::Object>| is_universal_strict_epi(c, s, max_legs);
    let uni_t = |c: &T, s: &Sink<T::Object>| is_universal_strict_epi(c, s, max_legs);
    let universal_strict_epi = check_sinks(f, max_legs, &uni_s, &uni_t, &mut counted)?;

    Ok(FRegularReport {
        right_adjoint,
        faithful,
        strict_mono,
        strict_epi,
        universal_strict_epi,
        max_legs,
        families_checked: counted,
    })
}

fn check_adjoint<S: WithPullbacks, T: WithPullbacks>(f: &UnderlyingFunctor<'_, S, T>) -> Verdict {
    for y in f.target.test_objects() {
        let (ry, counit) = (f.right_adjoint)(&y);
        for x in f.source.test_objects() {
            let ux = (f.on_object)(&x);
            let before = f.source.hom(&x, &ry);
            let transposed: BTreeSet<FinMap> = before.iter().map(|p| counit.compose(p)).collect();
            let direct: BTreeSet<FinMap> = f.target.hom(&ux, &y).into_iter().collect();
            if transposed.len() != before.len() || transposed != direct {
                return Verdict::Fails(format!(
                    "{x:?} and {y:?}: {} morphisms into the adjoint, {} out of the image",
                    before.len(),
                    direct.len()
                ));
            }
        }
    }
    Verdict::Holds
}

fn check_faithful<S: WithPullbacks, T: WithPullbacks>(f: &UnderlyingFunctor<'_, S, T>) -> Verdict {
    let objects = f.source.test_objects();
    for x in &objects {
        for y in &objects {
            let (ux, uy) = ((f.on_object)(x), (f.on_object)(y));
            if let Some(m) = f.source.hom(x, y).into_iter().find(|m| !f.target.is_morphism(&ux, &uy, m)) {
                return Verdict::Fails(format!("{:?} is not sent to a morphism", m.images()));
            }
        }
    }
    Verdict::Holds
}

fn fiber<S: WithPullbacks, T: WithPullbacks>(f: &UnderlyingFunctor<'_, S, T>, y: &T::Object) -> Vec<S::Object> {
    f.source
        .test_objects()
        .into_iter()
        .filter(|x| (f.on_object)(x) == *y)
        .collect()
}

fn check_cones<S: WithPullbacks, T: WithPullbacks>(
    f: &UnderlyingFunctor<'_, S, T>,
    max_legs: usize,
    counted: &mut usize,
) -> Result<Verdict, FamilyError>
where
    S::Object: std::fmt::Debug,
    T::Object: std::fmt::Debug,
{
    // preservation
    for x in f.source.test_objects() {
        for legs in families(f.source, &x, max_legs, false) {
            *counted += 1;
            let cone = Cone { source: x.clone(), legs };
            if !is_strict_mono(f.source, &cone, max_legs)?.holds() {
                continue;
            }
            let image = Cone {
                source: (f.on_object)(&x),
                legs: cone.legs.iter().map(|(y, m)| ((f.on_object)(y), m.clone())).collect(),
            };
            if let Verdict::Fails(w) = is_strict_mono(f.target, &image, max_legs)? {
                return Ok(Verdict::Fails(format!("a strict mono cone from {x:?} is not preserved: {w}")));
            }
        }
    }
    // creation
    for s in f.target.test_objects() {
        let over_s = fiber(f, &s);
        for legs in families(f.target, &s, max_legs, false) {
            *counted += 1;
            let cone = Cone { source: s.clone(), legs };
            if !is_strict_mono(f.target, &cone, max_legs)?.holds() {
                continue;
            }
            let fibers: Vec<Vec<S::Object>> = cone.legs.iter().map(|(t, _)| fiber(f, t)).collect();
            let mut failure = None;
            each_lift(&fibers, &mut |targets| {
                let created = over_s.iter().any(|x| {
                    let lifted = Cone {
                        source: x.clone(),
                        legs: targets.iter().cloned().zip(cone.legs.iter().map(|(_, m)| m.clone())).collect(),
                    };
                    lifted.legs.iter().all(|(t, m)| f.source.is_morphism(x, t, m))
                        && matches!(is_strict_mono(f.source, &lifted, max_legs), Ok(Verdict::Holds))
                });
                if !created {
                    failure = Some(format!("no strict mono cone over {cone:?} into {targets:?}"));
                }
                created
            });
            if let Some(w) = failure {
                return Ok(Verdict::Fails(w));
            }
        }
    }
    Ok(Verdict::Holds)
}

fn check_sinks<S: WithPullbacks, T: WithPullbacks>(
    f: &UnderlyingFunctor<'_, S, T>,
    max_legs: usize,
    in_source: Decider<'_, S>,
    in_target: Decider<'_, T>,
    counted: &mut usize,
) -> Result<Verdict, FamilyError>
where
    S::Object: std::fmt::Debug,
    T::Object: std::fmt::Debug,
{
    for x in f.source.test_objects() {
        for legs in families(f.source, &x, max_legs, true) {
            *counted += 1;
            let sink = Sink { codomain: x.clone(), legs };
            if !in_source(f.source, &sink)?.holds() {
                continue;
            }
            let image = Sink {
                codomain: (f.on_object)(&x),
                legs: sink.legs.iter().map(|(y, m)| ((f.on_object)(y), m.clone())).collect(),
            };
            if let Verdict::Fails(w) = in_target(f.target, &image)? {
                return Ok(Verdict::Fails(format!("a family into {x:?} is not preserved: {w}")));
            }
        }
    }
    for s in f.target.test_objects() {
        let over_s = fiber(f, &s);
        for legs in families(f.target, &s, max_legs, true) {
            *counted += 1;
            let sink = Sink { codomain: s.clone(), legs };
            if !in_target(f.target, &sink)?.holds() {
                continue;
            }
            let fibers: Vec<Vec<S::Object>> = sink.legs.iter().map(|(t, _)| fiber(f, t)).collect();
            let mut failure = None;
            let mut error = None;
            each_lift(&fibers, &mut |sources| {
                let created = over_s.iter().any(|x| {
                    let lifted = Sink {
                        codomain: x.clone(),
                        legs: sources.iter().cloned().zip(sink.legs.iter().map(|(_, m)| m.clone())).collect(),
                    };
                    lifted.legs.iter().all(|(t, m)| f.source.is_morphism(t, x, m))
                        && match in_source(f.source, &lifted) {
                            Ok(v) => v.holds(),
                            Err(e) => {
                                error = Some(e);
                                false
                            }
                        }
                });
                if !created {
                    failure = Some(format!("no family over {sink:?} out of {sources:?}"));
                }
                created && error.is_none()
            });
            if let Some(e) = error {
                return Err(e);
            }
            if let Some(w) = failure {
                return Ok(Verdict::Fails(w));
            }
        }
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quasispace::{top_structure, QSpace};
    use crate::strictq::{coreflection_s, right_adjoint_r};

    #[test]
    fn underlying_set_functor() {
        for (name, bound) in [("f1", 2), ("f3", 1)] {
            let site = fixtures::load(name).unwrap().site;
            let quasi = QCategory::new(&site, bound).unwrap();
            let sets = FinSets::up_to(bound);
            let on_object = |x: &QSpace| x.size();
            let right_adjoint = |&n: &usize| (top_structure(&site, &crate::fincat::FinSet::range(n)), FinMap::identity(n));
            let functor = UnderlyingFunctor { source: &quasi, target: &sets, on_object: &on_object, right_adjoint: &right_adjoint };
            let report = check_f_regular(&functor, 2).unwrap();
            assert!(report.holds(), "{name}: {report:?}");
            assert!(report.families_checked > 0);
        }
    }

    #[test]
    fn strict_underlying_set_functor_and_inclusion() {
        let site = fixtures::f1().site;
        let strict = QCategory::strict(&site, 2).unwrap();
        let quasi = QCategory::new(&site, 2).unwrap();
        let sets = FinSets::up_to(2);

        let size = |x: &QSpace| x.size();
        let r = |&n: &usize| {
            let c = right_adjoint_r(&site, &crate::fincat::FinSet::range(n));
            (c.space, c.inclusion)
        };
        let qs = UnderlyingFunctor { source: &strict, target: &sets, on_object: &size, right_adjoint: &r };
        let report = check_f_regular(&qs, 2).unwrap();
        assert!(report.holds(), "{report:?}");

        let same = |x: &QSpace| x.clone();
        let s = |y: &QSpace| {
            let c = coreflection_s(y);
            (c.space.with_base(crate::fincat::FinSet::range(c.inclusion.dom())), c.inclusion)
        };
        let inclusion = UnderlyingFunctor { source: &strict, target: &quasi, on_object: &same, right_adjoint: &s };
        let report = check_f_regular(&inclusion, 2).unwrap();
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn a_functor_without_the_right_adjoint_is_caught() {
        let site = fixtures::f1().site;
        let quasi = QCategory::new(&site, 2).unwrap();
        let sets = FinSets::up_to(2);
        let on_object = |x: &QSpace| x.size();
        // the bottom structure is not right adjoint to the underlying set
        let wrong = |&n: &usize| (crate::quasispace::bottom_structure(&site, &crate::fincat::FinSet::range(n)), FinMap::identity(n));
        let functor = UnderlyingFunctor { source: &quasi, target: &sets, on_object: &on_object, right_adjoint: &wrong };
        assert!(!check_f_regular(&functor, 1).unwrap().right_adjoint.holds());
    }

    #[test]
    fn universal_strict_epi_in_sets() {
        let sets = FinSets::up_to(2);
        let sink = Sink { codomain: 2, legs: vec![(1, FinMap::constant(1, 2, 0)), (1, FinMap::constant(1, 2, 1))] };
        assert!(is_universal_strict_epi(&sets, &sink, 2).unwrap().holds());
        let partial = Sink { codomain: 2, legs: vec![(1, FinMap::constant(1, 2, 0))] };
        assert!(!is_universal_strict_epi(&sets, &partial, 2).unwrap().holds());
    }
}
