//! The strict subobject classifier `Ω = {0, 1}_⊤` with its point `t = 1`.

use thiserror::Error;

use super::{initial_structure, limits_colimits_q, top_structure, QDiagram, QSpace};
use crate::fincat::{FinMap, FinSet};
use crate::fsetbase;
use crate::site::Site;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("the map is not injective")]
    NotInjective,
    #[error("the subobject does not carry the induced structure: {0}")]
    NotInitial(String),
    #[error("the map is not a morphism")]
    NotMorphism,
}

/// `(Ω_⊤, t: 1_⊤ -> Ω_⊤)`.
pub fn omega_q(site: &Site) -> (QSpace, FinMap) {
    let (size, t) = fsetbase::omega_set();
    (top_structure(site, &FinSet::range(size)), t)
}

/// The characteristic map of a strict (initial injective) subobject.
pub fn classify_strict_sub(
    site: &Site,
    q: &QSpace,
    sub: &QSpace,
    mono: &FinMap,
) -> Result<FinMap, ClassifierError> {
    if !super::is_morphism(sub, q, mono) {
        return Err(ClassifierError::NotMorphism);
    }
    if !mono.is_injective() {
        return Err(ClassifierError::NotInjective);
    }
    let induced = initial_structure(site, sub.base(), &[(q.clone(), mono.clone())]);
    if !induced.same_structure(sub) {
        let c = site.category();
        let witness = c
            .objects()
            .find_map(|o| {
                induced
                    .admissible(o)
                    .difference(sub.admissible(o))
                    .next()
                    .map(|m| format!("{:?} at {} is induced but not admissible", m.images(), c.object_name(o)))
            })
            .unwrap_or_default();
        return Err(ClassifierError::NotInitial(witness));
    }
    Ok(fsetbase::classify(q.size(), &mono.image()))
}

/// The pullback of `t` along `chi: q -> Ω`, with its inclusion into `q`.
pub fn pull_back_truth(site: &Site, q: &QSpace, chi: &FinMap) -> (QSpace, FinMap) {
    let (omega, t) = omega_q(site);
    let one = top_structure(site, &FinSet::range(1));
    let pb = limits_colimits_q(
        site,
        &QDiagram::Pullback {
            left: (q.clone(), chi.clone()),
            right: (one, t),
            apex: omega,
        },
    )
    .expect("chi and t are morphisms into a top structure");
    (pb.object, pb.maps[0].clone())
}
