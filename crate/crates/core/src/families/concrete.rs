//! Deciders for categories concrete over finite sets.
//!
//! Morphisms are functions between carriers that pass a membership test, so
//! the forgetful functor is faithful by construction. The category itself is
//! usually not finite (quasispaces on arbitrary sets), so every quantifier over
//! objects ranges over a declared test universe, extended by the objects of
//! the family under test.

use std::fmt::Debug;

use super::{FamilyError, Verdict};
use crate::fincat::{all_functions, FinMap};
use crate::fsetbase::{jointly_injective, jointly_surjective};

pub trait ConcreteCategory {
    type Object: Clone + PartialEq + Debug;

    /// Size of the underlying finite set.
    fn carrier(&self, x: &Self::Object) -> usize;

    fn is_morphism(&self, src: &Self::Object, tgt: &Self::Object, map: &FinMap) -> bool;

    /// The bounded universe every quantifier ranges over.
    fn test_objects(&self) -> Vec<Self::Object>;

    fn hom(&self, src: &Self::Object, tgt: &Self::Object) -> Vec<FinMap> {
        all_functions(self.carrier(src), self.carrier(tgt))
            .filter(|m| self.is_morphism(src, tgt, m))
            .collect()
    }
}

/// Legs `(X_α, f_α: X_α -> X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sink<O> {
    pub codomain: O,
    pub legs: Vec<(O, FinMap)>,
}

/// Legs `(X_α, f_α: X -> X_α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone<O> {
    pub source: O,
    pub legs: Vec<(O, FinMap)>,
}

fn universe_with<C: ConcreteCategory>(cat: &C, extra: &[&C::Object]) -> Vec<C::Object> {
    let mut objects = cat.test_objects();
    for &x in extra {
        if !objects.contains(x) {
            objects.push(x.clone());
        }
    }
    objects
}

fn check_limit(legs: usize, limit: usize) -> Result<(), FamilyError> {
    if legs > limit {
        Err(FamilyError::TooManyLegs { legs, limit })
    } else {
        Ok(())
    }
}

/// Depth-first over tuples `(g_α)` with `g_α ∈ spaces[α]`, pruned by `consistent`.
/// `visit` returns `false` to stop the search.
fn search(
    spaces: &[Vec<FinMap>],
    consistent: &dyn Fn(&[FinMap]) -> bool,
    tuple: &mut Vec<FinMap>,
    visit: &mut dyn FnMut(&[FinMap]) -> bool,
) -> bool {
    if tuple.len() == spaces.len() {
        return visit(tuple);
    }
    for g in &spaces[tuple.len()] {
        tuple.push(g.clone());
        if consistent(tuple) && !search(spaces, consistent, tuple, visit) {
            tuple.pop();
            return false;
        }
        tuple.pop();
    }
    true
}

/// Strict epimorphic families: every compatible cocone factors uniquely.
pub fn is_strict_epi<C: ConcreteCategory>(
    cat: &C,
    sink: &Sink<C::Object>,
    max_legs: usize,
) -> Result<Verdict, FamilyError> {
    check_limit(sink.legs.len(), max_legs)?;
    let mut extra: Vec<&C::Object> = sink.legs.iter().map(|(o, _)| o).collect();
    extra.push(&sink.codomain);
    let universe = universe_with(cat, &extra);
    let legs = &sink.legs;

    // (α, x, β, y) with f_α x = f_β y, for x, y out of any test object
    let mut relations: Vec<(usize, FinMap, usize, FinMap)> = Vec::new();
    for z in &universe {
        let homs: Vec<Vec<FinMap>> = legs.iter().map(|(xa, _)| cat.hom(z, xa)).collect();
        for a in 0..legs.len() {
            for b in a..legs.len() {
                for x in &homs[a] {
                    for y in &homs[b] {
                        if legs[a].1.compose(x) == legs[b].1.compose(y) {
                            relations.push((a, x.clone(), b, y.clone()));
                        }
                    }
                }
            }
        }
    }

    for y in &universe {
        let spaces: Vec<Vec<FinMap>> = legs.iter().map(|(xa, _)| cat.hom(xa, y)).collect();
        let candidates = cat.hom(&sink.codomain, y);
        let consistent = |t: &[FinMap]| {
            let last = t.len() - 1;
            relations
                .iter()
                .filter(|r| r.2 == last)
                .all(|(a, x, _, yy)| t[*a].compose(x) == t[last].compose(yy))
        };
        let mut witness = None;
        search(&spaces, &consistent, &mut Vec::new(), &mut |g: &[FinMap]| {
            let n = candidates
                .iter()
                .filter(|h| legs.iter().zip(g).all(|((_, f), ga)| h.compose(f) == *ga))
                .count();
            if n == 1 {
                return true;
            }
            witness = Some(format!(
                "compatible cocone into {y:?} with legs {:?} has {n} factorizations",
                g.iter().map(FinMap::images).collect::<Vec<_>>()
            ));
            false
        });
        if let Some(w) = witness {
            return Ok(Verdict::Fails(w));
        }
    }
    Ok(Verdict::Holds)
}

/// Strict monomorphic cones: every compatible cone factors uniquely.
pub fn is_strict_mono<C: ConcreteCategory>(
    cat: &C,
    cone: &Cone<C::Object>,
    max_legs: usize,
) -> Result<Verdict, FamilyError> {
    check_limit(cone.legs.len(), max_legs)?;
    let mut extra: Vec<&C::Object> = cone.legs.iter().map(|(o, _)| o).collect();
    extra.push(&cone.source);
    let universe = universe_with(cat, &extra);
    let legs = &cone.legs;

    // (α, x, β, y) with x f_α = y f_β, for x, y into any test object
    let mut relations: Vec<(usize, FinMap, usize, FinMap)> = Vec::new();
    for w in &universe {
        let homs: Vec<Vec<FinMap>> = legs.iter().map(|(xa, _)| cat.hom(xa, w)).collect();
        for a in 0..legs.len() {
            for b in a..legs.len() {
                for x in &homs[a] {
                    for y in &homs[b] {
                        if x.compose(&legs[a].1) == y.compose(&legs[b].1) {
                            relations.push((a, x.clone(), b, y.clone()));
                        }
                    }
                }
            }
        }
    }

    for z in &universe {
        let spaces: Vec<Vec<FinMap>> = legs.iter().map(|(xa, _)| cat.hom(z, xa)).collect();
        let candidates = cat.hom(z, &cone.source);
        let consistent = |t: &[FinMap]| {
            let last = t.len() - 1;
            relations
                .iter()
                .filter(|r| r.2 == last)
                .all(|(a, x, _, y)| x.compose(&t[*a]) == y.compose(&t[last]))
        };
        let mut witness = None;
        search(&spaces, &consistent, &mut Vec::new(), &mut |g: &[FinMap]| {
            let n = candidates
                .iter()
                .filter(|h| legs.iter().zip(g).all(|((_, f), ga)| f.compose(h) == *ga))
                .count();
            if n == 1 {
                return true;
            }
            witness = Some(format!(
                "compatible cone from {z:?} with legs {:?} has {n} factorizations",
                g.iter().map(FinMap::images).collect::<Vec<_>>()
            ));
            false
        });
        if let Some(w) = witness {
            return Ok(Verdict::Fails(w));
        }
    }
    Ok(Verdict::Holds)
}

/// Final families: a function out of the codomain is a morphism as soon as
/// all its composites with the legs are.
pub fn is_final<C: ConcreteCategory>(cat: &C, sink: &Sink<C::Object>) -> Verdict {
    let mut extra: Vec<&C::Object> = sink.legs.iter().map(|(o, _)| o).collect();
    extra.push(&sink.codomain);
    let n = cat.carrier(&sink.codomain);
    for y in universe_with(cat, &extra) {
        for phi in all_functions(n, cat.carrier(&y)) {
            let lifts = sink
                .legs
                .iter()
                .all(|(xa, f)| cat.is_morphism(xa, &y, &phi.compose(f)));
            if lifts && !cat.is_morphism(&sink.codomain, &y, &phi) {
                return Verdict::Fails(format!(
                    "{:?} into {y:?} lifts along every leg but is not a morphism",
                    phi.images()
                ));
            }
        }
    }
    Verdict::Holds
}

/// Initial cones: a function into the source is a morphism as soon as all
/// its composites with the legs are.
pub fn is_initial<C: ConcreteCategory>(cat: &C, cone: &Cone<C::Object>) -> Verdict {
    let mut extra: Vec<&C::Object> = cone.legs.iter().map(|(o, _)| o).collect();
    extra.push(&cone.source);
    let n = cat.carrier(&cone.source);
    for z in universe_with(cat, &extra) {
        for psi in all_functions(cat.carrier(&z), n) {
            let lifts = cone
                .legs
                .iter()
                .all(|(xa, f)| cat.is_morphism(&z, xa, &f.compose(&psi)));
            if lifts && !cat.is_morphism(&z, &cone.source, &psi) {
                return Verdict::Fails(format!(
                    "{:?} from {z:?} lifts along every leg but is not a morphism",
                    psi.images()
                ));
            }
        }
    }
    Verdict::Holds
}

pub fn is_surjective<C: ConcreteCategory>(cat: &C, sink: &Sink<C::Object>) -> bool {
    jointly_surjective(cat.carrier(&sink.codomain), sink.legs.iter().map(|(_, f)| f))
}

pub fn is_injective<C: ConcreteCategory>(cat: &C, cone: &Cone<C::Object>) -> bool {
    jointly_injective(cat.carrier(&cone.source), cone.legs.iter().map(|(_, f)| f))
}
