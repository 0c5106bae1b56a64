//! Families of arrows with a common codomain, over a finite category.
//!
//! A family is kept as a *set* of legs: none of the properties computed here
//! depend on the order or multiplicity of legs. Enumerations over "all
//! families" range over subsets of the arrows into an object, up to a leg
//! bound.
//!
//! [`concrete`] holds the deciders for categories concrete over finite sets,
//! where quantifiers range over a bounded universe of test objects.

pub mod concrete;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{opposite, ConcreteFunctor, FinCat, FinMap, Mor, Obj};

/// Maximum number of legs the strict-epi deciders accept by default.
pub const DEFAULT_MAX_LEGS: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("leg `{leg}` does not have codomain `{codomain}`")]
    LegTarget { leg: String, codomain: String },
    #[error("families have different codomains `{0}` and `{1}`")]
    CodomainMismatch(String, String),
    #[error("arrow `{arrow}` does not run from `{from}` to `{to}`")]
    ArrowTyping { arrow: String, from: String, to: String },
    #[error("family has {legs} legs, above the configured limit of {limit}")]
    TooManyLegs { legs: usize, limit: usize },
    #[error("no pullback of the cospan {0}")]
    MissingPullback(String),
    #[error(transparent)]
    Category(#[from] crate::fincat::CatError),
}

/// Outcome of a universally quantified check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "witness", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn from_witness(witness: Option<String>) -> Self {
        witness.map_or(Verdict::Holds, Verdict::Fails)
    }
}

/// A sink `(X_α -> X)` in a finite category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Family {
    codomain: Obj,
    legs: Vec<Mor>,
}

impl Family {
    pub fn new(
        c: &FinCat,
        codomain: Obj,
        legs: impl IntoIterator<Item = Mor>,
    ) -> Result<Self, FamilyError> {
        let legs: BTreeSet<Mor> = legs.into_iter().collect();
        for &m in &legs {
            if c.target(m) != codomain {
                return Err(FamilyError::LegTarget {
                    leg: c.morphism_name(m).to_string(),
                    codomain: c.object_name(codomain).to_string(),
                });
            }
        }
        Ok(Self {
            codomain,
            legs: legs.into_iter().collect(),
        })
    }

    pub fn by_names(c: &FinCat, codomain: &str, legs: &[&str]) -> Result<Self, FamilyError> {
        let codomain = c.object(codomain)?;
        let legs = legs
            .iter()
            .map(|l| c.morphism(l))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(c, codomain, legs)
    }

    pub fn singleton(c: &FinCat, m: Mor) -> Self {
        Self {
            codomain: c.target(m),
            legs: vec![m],
        }
    }

    pub fn empty(codomain: Obj) -> Self {
        Self {
            codomain,
            legs: Vec::new(),
        }
    }

    pub fn codomain(&self) -> Obj {
        self.codomain
    }

    pub fn legs(&self) -> &[Mor] {
        &self.legs
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn contains(&self, m: Mor) -> bool {
        self.legs.binary_search(&m).is_ok()
    }

    /// `{arrow ∘ leg}` over the target of `arrow`.
    pub fn post_compose(&self, c: &FinCat, arrow: Mor) -> Family {
        let legs: BTreeSet<Mor> = self.legs.iter().map(|&l| c.comp(arrow, l)).collect();
        Family {
            codomain: c.target(arrow),
            legs: legs.into_iter().collect(),
        }
    }

    pub fn describe(&self, c: &FinCat) -> String {
        let legs: Vec<&str> = self.legs.iter().map(|&m| c.morphism_name(m)).collect();
        format!("{{{}}} → {}", legs.join(", "), c.object_name(self.codomain))
    }
}

/// One factorization per leg of the refining family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    /// `(leg y, leg x, h)` with `x ∘ h = y`.
    pub steps: Vec<(Mor, Mor, Mor)>,
}

/// Some `h` with `x ∘ h = y`.
pub fn factor_through(c: &FinCat, y: Mor, x: Mor) -> Option<Mor> {
    if c.target(y) != c.target(x) {
        return None;
    }
    c.hom(c.source(y), c.source(x))
        .into_iter()
        .find(|&h| c.comp(x, h) == y)
}

/// A witness that `f` refines `g` (every leg of `f` factors through a leg of `g`).
pub fn refines(c: &FinCat, f: &Family, g: &Family) -> Result<Option<Refinement>, FamilyError> {
    if f.codomain != g.codomain {
        return Err(FamilyError::CodomainMismatch(
            c.object_name(f.codomain).to_string(),
            c.object_name(g.codomain).to_string(),
        ));
    }
    Ok(refinement_unchecked(c, f, g))
}

fn refinement_unchecked(c: &FinCat, f: &Family, g: &Family) -> Option<Refinement> {
    let mut steps = Vec::with_capacity(f.len());
    for &y in &f.legs {
        let step = g
            .legs
            .iter()
            .find_map(|&x| factor_through(c, y, x).map(|h| (y, x, h)))?;
        steps.push(step);
    }
    Some(Refinement { steps })
}

fn does_refine(c: &FinCat, f: &Family, g: &Family) -> bool {
    f.codomain == g.codomain && refinement_unchecked(c, f, g).is_some()
}

/// Is `over_y` an r-pullback of `over_x` along `arrow: Y -> X`?
pub fn is_r_pullback(
    c: &FinCat,
    over_y: &Family,
    arrow: Mor,
    over_x: &Family,
) -> Result<bool, FamilyError> {
    if c.source(arrow) != over_y.codomain || c.target(arrow) != over_x.codomain {
        return Err(FamilyError::ArrowTyping {
            arrow: c.morphism_name(arrow).to_string(),
            from: c.object_name(over_y.codomain).to_string(),
            to: c.object_name(over_x.codomain).to_string(),
        });
    }
    Ok(does_refine(c, &over_y.post_compose(c, arrow), over_x))
}

/// All families over `o` with at most `max_legs` legs.
pub fn families_over(c: &FinCat, o: Obj, max_legs: usize) -> Vec<Family> {
    let arrows = c.arrows_into(o);
    subsets_up_to(&arrows, max_legs)
        .into_iter()
        .map(|legs| Family { codomain: o, legs })
        .collect()
}

pub(crate) fn subsets_up_to<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for item in items {
        let extra: Vec<Vec<T>> = out
            .iter()
            .filter(|s| s.len() < max)
            .map(|s| {
                let mut s = s.clone();
                s.push(item.clone());
                s
            })
            .collect();
        out.extend(extra);
    }
    out
}

/// One class of families per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    slots: Vec<BTreeSet<Family>>,
}

impl Collection {
    pub fn empty(c: &FinCat) -> Self {
        Self {
            slots: vec![BTreeSet::new(); c.object_count()],
        }
    }

    pub fn from_families(c: &FinCat, families: impl IntoIterator<Item = Family>) -> Self {
        let mut col = Self::empty(c);
        for f in families {
            col.insert(f);
        }
        col
    }

    pub fn insert(&mut self, f: Family) -> bool {
        self.slots[f.codomain.0].insert(f)
    }

    pub fn remove(&mut self, f: &Family) -> bool {
        self.slots[f.codomain.0].remove(f)
    }

    pub fn contains(&self, f: &Family) -> bool {
        self.slots[f.codomain.0].contains(f)
    }

    pub fn over(&self, o: Obj) -> &BTreeSet<Family> {
        &self.slots[o.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Family> {
        self.slots.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.slots.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Collection) -> bool {
        self.iter().all(|f| other.contains(f))
    }

    pub fn intersection(&self, other: &Collection) -> Collection {
        Collection {
            slots: self
                .slots
                .iter()
                .zip(&other.slots)
                .map(|(a, b)| a.intersection(b).cloned().collect())
                .collect(),
        }
    }

    pub fn describe(&self, c: &FinCat) -> String {
        let fams: Vec<String> = self.iter().map(|f| f.describe(c)).collect();
        fams.join("; ")
    }
}

/// The singleton families `{f}` with `f` an isomorphism.
pub fn iso_collection(c: &FinCat) -> Collection {
    Collection::from_families(
        c,
        c.morphisms()
            .filter(|&m| c.is_iso(m))
            .map(|m| Family::singleton(c, m)),
    )
}

/// `A ∘ B`: compose every `A`-family with a choice of `B`-family over each leg.
pub fn compose_collections(c: &FinCat, a: &Collection, b: &Collection) -> Collection {
    let mut out = Collection::empty(c);
    for f in a.iter() {
        let choices: Vec<Vec<&Family>> = f
            .legs
            .iter()
            .map(|&leg| b.over(c.source(leg)).iter().collect())
            .collect();
        for_each_choice(&choices, &mut |picked: &[&Family]| {
            let legs = f
                .legs
                .iter()
                .zip(picked)
                .flat_map(|(&leg, g)| g.legs.iter().map(move |&m| c.comp(leg, m)));
            out.insert(Family::new(c, f.codomain, legs).expect("composite legs land in the codomain"));
        });
    }
    out
}

fn for_each_choice<T: Copy>(choices: &[Vec<T>], visit: &mut dyn FnMut(&[T])) {
    fn go<T: Copy>(choices: &[Vec<T>], acc: &mut Vec<T>, visit: &mut dyn FnMut(&[T])) {
        match choices.split_first() {
            None => visit(acc),
            Some((first, rest)) => {
                for &x in first {
                    acc.push(x);
                    go(rest, acc, visit);
                    acc.pop();
                }
            }
        }
    }
    go(choices, &mut Vec::with_capacity(choices.len()), visit);
}

/// All pullback squares `(P, p: P -> Y, q: P -> X')` of `y: Y -> X` and `f: X' -> X`.
pub fn pullbacks(c: &FinCat, y: Mor, f: Mor) -> Vec<(Obj, Mor, Mor)> {
    debug_assert_eq!(c.target(y), c.target(f));
    let (ys, fs) = (c.source(y), c.source(f));
    let cones: Vec<(Obj, Mor, Mor)> = c
        .objects()
        .flat_map(|p| {
            let left = c.hom(p, ys);
            let right = c.hom(p, fs);
            left.into_iter()
                .flat_map(move |a| right.clone().into_iter().map(move |b| (p, a, b)))
        })
        .filter(|&(_, a, b)| c.comp(y, a) == c.comp(f, b))
        .collect();
    cones
        .iter()
        .copied()
        .filter(|&(p, a, b)| {
            cones.iter().all(|&(q, qa, qb)| {
                c.hom(q, p)
                    .into_iter()
                    .filter(|&u| c.comp(a, u) == qa && c.comp(b, u) == qb)
                    .count()
                    == 1
            })
        })
        .collect()
}

/// `π A`: families obtained by pulling an `A`-family back along an arrow.
pub fn pullback_collection(c: &FinCat, a: &Collection) -> Result<Collection, FamilyError> {
    let mut out = Collection::empty(c);
    for f in a.iter() {
        for y in c.arrows_into(f.codomain) {
            let mut squares = Vec::with_capacity(f.len());
            for &leg in &f.legs {
                let pb = pullbacks(c, y, leg);
                if pb.is_empty() {
                    return Err(FamilyError::MissingPullback(format!(
                        "{} → {} ← {}",
                        c.morphism_name(y),
                        c.object_name(f.codomain),
                        c.morphism_name(leg)
                    )));
                }
                squares.push(pb.into_iter().map(|(_, p, _)| p).collect::<Vec<_>>());
            }
            for_each_choice(&squares, &mut |picked: &[Mor]| {
                out.insert(
                    Family::new(c, c.source(y), picked.iter().copied())
                        .expect("pullback legs land in the source"),
                );
            });
        }
    }
    Ok(out)
}

/// `s A`: every family (up to `max_legs` legs) refined by an `A`-family.
pub fn saturation(c: &FinCat, a: &Collection, max_legs: usize) -> Collection {
    let mut out = Collection::empty(c);
    for o in c.objects() {
        if a.over(o).is_empty() {
            continue;
        }
        for g in families_over(c, o, max_legs) {
            if a.over(o).iter().any(|f| does_refine(c, f, &g)) {
                out.insert(g);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub enum CollectionOp<'a> {
    Iso,
    Compose(&'a Collection, &'a Collection),
    Pullback(&'a Collection),
    Saturate(&'a Collection),
}

pub fn collection_op(
    c: &FinCat,
    op: CollectionOp<'_>,
    max_legs: usize,
) -> Result<Collection, FamilyError> {
    Ok(match op {
        CollectionOp::Iso => iso_collection(c),
        CollectionOp::Compose(a, b) => compose_collections(c, a, b),
        CollectionOp::Pullback(a) => pullback_collection(c, a)?,
        CollectionOp::Saturate(a) => saturation(c, a, max_legs),
    })
}

/// The five closure properties of collections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Property {
    /// (I) every isomorphism is a one-leg member.
    Isomorphisms,
    /// (C) `A ∘ A ⊆ A`.
    Composition,
    /// (S) `s A ⊆ A`.
    Saturated,
    /// (U) every member has a member r-pullback along every arrow.
    Universal,
    /// (F) any two members over an object have a common member refinement.
    Filtered,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Isomorphisms,
        Property::Composition,
        Property::Saturated,
        Property::Universal,
        Property::Filtered,
    ];

    pub fn letter(self) -> char {
        match self {
            Property::Isomorphisms => 'I',
            Property::Composition => 'C',
            Property::Saturated => 'S',
            Property::Universal => 'U',
            Property::Filtered => 'F',
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.letter())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim_matches(|ch| ch == '(' || ch == ')');
        Property::ALL
            .into_iter()
            .find(|p| s.eq_ignore_ascii_case(&p.letter().to_string()))
            .ok_or_else(|| format!("unknown property `{s}` (expected I, C, S, U or F)"))
    }
}

/// Decides one property by enumeration; failures carry a witness.
pub fn check_property(c: &FinCat, col: &Collection, prop: Property, max_legs: usize) -> Verdict {
    let witness = match prop {
        Property::Isomorphisms => iso_collection(c)
            .iter()
            .find(|f| !col.contains(f))
            .map(|f| format!("isomorphism family {} is missing", f.describe(c))),
        Property::Composition => compose_collections(c, col, col)
            .iter()
            .find(|f| !col.contains(f))
            .map(|f| format!("composite {} is not a member", f.describe(c))),
        Property::Saturated => saturation(c, col, max_legs)
            .iter()
            .find(|f| !col.contains(f))
            .map(|f| format!("{} is refined by a member but is not one", f.describe(c))),
        Property::Universal => universality_witness(c, col),
        Property::Filtered => filtered_witness(c, col),
    };
    Verdict::from_witness(witness)
}

fn universality_witness(c: &FinCat, col: &Collection) -> Option<String> {
    for f in col.iter() {
        for y in c.arrows_into(f.codomain) {
            let found = col
                .over(c.source(y))
                .iter()
                .any(|g| does_refine(c, &g.post_compose(c, y), f));
            if !found {
                return Some(format!(
                    "no member over {} is an r-pullback of {} along {}",
                    c.object_name(c.source(y)),
                    f.describe(c),
                    c.morphism_name(y)
                ));
            }
        }
    }
    None
}

fn filtered_witness(c: &FinCat, col: &Collection) -> Option<String> {
    for o in c.objects() {
        let members = col.over(o);
        for f in members {
            for g in members {
                if !members
                    .iter()
                    .any(|h| does_refine(c, h, f) && does_refine(c, h, g))
                {
                    return Some(format!(
                        "{} and {} have no common member refinement",
                        f.describe(c),
                        g.describe(c)
                    ));
                }
            }
        }
    }
    None
}

fn check_leg_limit(len: usize, limit: usize) -> Result<(), FamilyError> {
    if len > limit {
        Err(FamilyError::TooManyLegs { legs: len, limit })
    } else {
        Ok(())
    }
}

/// Is `f` strict epimorphic? Every quantifier ranges over the whole category.
///
/// A compatible cocone `g_α: X_α -> Y` must factor through `f` by exactly one
/// `g: X -> Y`.
pub fn is_strict_epi_family(c: &FinCat, f: &Family, max_legs: usize) -> Result<Verdict, FamilyError> {
    check_leg_limit(f.len(), max_legs)?;
    let legs = f.legs();
    let x = f.codomain;
    // (α, x_α, β, x_β) with f_α x_α = f_β x_β, over every test object Z
    let mut relations = Vec::new();
    for z in c.objects() {
        for (a, &fa) in legs.iter().enumerate() {
            for (b, &fb) in legs.iter().enumerate().skip(a) {
                for xa in c.hom(z, c.source(fa)) {
                    for xb in c.hom(z, c.source(fb)) {
                        if c.comp(fa, xa) == c.comp(fb, xb) {
                            relations.push((a, xa, b, xb));
                        }
                    }
                }
            }
        }
    }
    for y in c.objects() {
        let homs: Vec<Vec<Mor>> = legs.iter().map(|&l| c.hom(c.source(l), y)).collect();
        let candidates = c.hom(x, y);
        let mut witness = None;
        let mut tuple = Vec::with_capacity(legs.len());
        search_cocones(c, &homs, &relations, &mut tuple, &mut |g: &[Mor]| {
            let factorizations = candidates
                .iter()
                .filter(|&&h| legs.iter().zip(g).all(|(&l, &ga)| c.comp(h, l) == ga))
                .count();
            if factorizations != 1 {
                let names: Vec<&str> = g.iter().map(|&m| c.morphism_name(m)).collect();
                witness = Some(format!(
                    "compatible family ({}) into {} has {} factorizations",
                    names.join(", "),
                    c.object_name(y),
                    factorizations
                ));
                false
            } else {
                true
            }
        });
        if witness.is_some() {
            return Ok(Verdict::from_witness(witness));
        }
    }
    Ok(Verdict::Holds)
}

/// Depth-first search over compatible tuples; `visit` returns `false` to stop.
fn search_cocones(
    c: &FinCat,
    homs: &[Vec<Mor>],
    relations: &[(usize, Mor, usize, Mor)],
    tuple: &mut Vec<Mor>,
    visit: &mut dyn FnMut(&[Mor]) -> bool,
) -> bool {
    let depth = tuple.len();
    if depth == homs.len() {
        return visit(tuple);
    }
    for &g in &homs[depth] {
        tuple.push(g);
        let consistent = relations.iter().all(|&(a, xa, b, xb)| {
            b != depth || c.comp(tuple[a], xa) == c.comp(tuple[b], xb)
        });
        if consistent && !search_cocones(c, homs, relations, tuple, visit) {
            tuple.pop();
            return false;
        }
        tuple.pop();
    }
    true
}

/// Is the cone `(X -> X_α)` strict monomorphic? Decided as strict epi in the
/// opposite category. All legs must share their source.
pub fn is_strict_mono_family(
    c: &FinCat,
    source: Obj,
    legs: &[Mor],
    max_legs: usize,
) -> Result<Verdict, FamilyError> {
    for &l in legs {
        if c.source(l) != source {
            return Err(FamilyError::LegTarget {
                leg: c.morphism_name(l).to_string(),
                codomain: c.object_name(source).to_string(),
            });
        }
    }
    let op = opposite(c)?;
    let fam = Family::new(&op, source, legs.iter().copied())?;
    is_strict_epi_family(&op, &fam, max_legs)
}

/// Are the images `u(f_α)` jointly surjective?
pub fn is_surjective_family(u: &ConcreteFunctor, f: &Family) -> bool {
    let maps: Vec<&FinMap> = f.legs().iter().map(|&m| u.on_morphism(m)).collect();
    crate::fsetbase::jointly_surjective(u.size(f.codomain()), maps)
}

/// Is the cone `(X -> X_α)` jointly injective after `u`?
pub fn is_injective_cone(u: &ConcreteFunctor, source: Obj, legs: &[Mor]) -> bool {
    let maps: Vec<&FinMap> = legs.iter().map(|&m| u.on_morphism(m)).collect();
    crate::fsetbase::jointly_injective(u.size(source), maps)
}

#[cfg(test)]
mod tests;
