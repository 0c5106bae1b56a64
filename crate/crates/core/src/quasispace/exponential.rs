//! Exponentials of quasispaces.
//!
//! The carrier of `Y^X` is the set of functions `φ: S -> T` that are morphisms
//! `1_⊥ × X -> Y`; these only involve objects covered by the empty family. A
//! map `σ: uC -> carrier` is admissible when its transpose is a morphism
//! `εC × X -> Y`. This closed form is not trusted: every construction is
//! checked against the exponential adjunction over a bounded universe.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{is_morphism, limits_colimits_q, yoneda_structure, QCategory, QDiagram, QSpace};
use crate::families::Verdict;
use crate::fincat::{all_functions, FinMap, FinSet, Obj};
use crate::site::Site;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExponentialError {
    #[error("exponential adjunction fails: {0}")]
    Verification(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponential {
    pub space: QSpace,
    /// The function `S -> T` each carrier element stands for.
    pub functions: Vec<FinMap>,
    /// Evaluation `carrier × S -> T`.
    pub eval: FinMap,
}

impl Exponential {
    /// Position of `phi` in the carrier, if it is there.
    pub fn element(&self, phi: &FinMap) -> Option<usize> {
        self.functions.iter().position(|f| f == phi)
    }
}

fn product(site: &Site, a: &QSpace, b: &QSpace) -> QSpace {
    limits_colimits_q(site, &QDiagram::Product(a.clone(), b.clone()))
        .expect("products always exist")
        .object
}

/// The transpose `A × S -> T` of `σ: A -> carrier`.
fn uncurry(functions: &[FinMap], sigma: &FinMap, s: usize, t: usize) -> FinMap {
    FinMap::new(
        (0..sigma.dom() * s)
            .map(|k| functions[sigma.apply(k / s)].apply(k % s))
            .collect(),
        t,
    )
}

/// The transpose `A -> T^S` of `g: A × S -> T`, as functions.
fn curry(g: &FinMap, a: usize, s: usize) -> Vec<FinMap> {
    (0..a)
        .map(|i| FinMap::new((0..s).map(|j| g.apply(i * s + j)).collect(), g.cod()))
        .collect()
}

/// Builds `Y^X` and verifies the adjunction against `universe`.
pub fn exponential_q(
    site: &Site,
    x: &QSpace,
    y: &QSpace,
    universe: &QCategory<'_>,
) -> Result<Exponential, ExponentialError> {
    let exp = exponential_unchecked(site, x, y);
    match verify_exponential(site, x, y, &exp, universe) {
        Verdict::Holds => Ok(exp),
        Verdict::Fails(w) => Err(ExponentialError::Verification(w)),
    }
}

pub(crate) fn exponential_unchecked(site: &Site, x: &QSpace, y: &QSpace) -> Exponential {
    let c = site.category();
    let (s, t) = (x.size(), y.size());
    let empty_covered: Vec<Obj> = c.objects().filter(|&o| site.has_empty_cover(o)).collect();
    let functions: Vec<FinMap> = all_functions(s, t)
        .filter(|phi| {
            empty_covered
                .iter()
                .all(|&o| x.admissible(o).iter().all(|tau| y.admits(o, &phi.compose(tau))))
        })
        .collect();
    let names: Vec<String> = functions
        .iter()
        .map(|phi| x.base().show_map(y.base(), phi))
        .collect();
    let base = FinSet::new(names).expect("distinct functions have distinct names");
    let n = functions.len();

    let mut admissible = Vec::with_capacity(c.object_count());
    for o in c.objects() {
        let local = product(site, &yoneda_structure(site, o), x);
        let maps: BTreeSet<FinMap> = all_functions(site.size(o), n)
            .filter(|sigma| is_morphism(&local, y, &uncurry(&functions, sigma, s, t)))
            .collect();
        admissible.push(maps);
    }
    let eval = uncurry(&functions, &FinMap::identity(n), s, t);
    Exponential {
        space: QSpace::new(base, admissible),
        functions,
        eval,
    }
}

/// `g: Z × X -> Y` is a morphism exactly when its transpose lands in the
/// carrier and is a morphism `Z -> Y^X`, for every `Z` in the universe; and
/// evaluation is a morphism.
pub fn verify_exponential(
    site: &Site,
    x: &QSpace,
    y: &QSpace,
    exp: &Exponential,
    universe: &QCategory<'_>,
) -> Verdict {
    let (s, t) = (x.size(), y.size());
    if !is_morphism(&product(site, &exp.space, x), y, &exp.eval) {
        return Verdict::Fails("evaluation is not a morphism".into());
    }
    for z in universe.universe() {
        let zx = product(site, z, x);
        let mut left = 0usize;
        let mut right = 0usize;
        for g in all_functions(z.size() * s, t) {
            let is_left = is_morphism(&zx, y, &g);
            let transposed: Option<Vec<usize>> = curry(&g, z.size(), s)
                .iter()
                .map(|phi| exp.element(phi))
                .collect();
            let is_right = transposed
                .map(|images| is_morphism(z, &exp.space, &FinMap::new(images, exp.functions.len())))
                .unwrap_or(false);
            left += usize::from(is_left);
            right += usize::from(is_right);
            if is_left != is_right {
                return Verdict::Fails(format!(
                    "at Z = {:?}: {:?} is {}a morphism Z × X -> Y but its transpose is {}a morphism Z -> Y^X",
                    z.base().elements(),
                    g.images(),
                    if is_left { "" } else { "not " },
                    if is_right { "" } else { "not " },
                ));
            }
        }
        debug_assert_eq!(left, right);
    }
    Verdict::Holds
}
