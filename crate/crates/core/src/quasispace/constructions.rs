//! Canonical structures, initial and final lifts, limits, colimits and
//! f-factorizations of quasispaces.

use std::collections::BTreeSet;

use super::{good_arrows_cover, hom_q, is_morphism, QCategory, QSpace};
use crate::families::Verdict;
use crate::fincat::{all_functions, FinMap, FinSet, Obj};
use crate::fsetbase::{self, Diagram, DiagramError};
use crate::site::Site;

fn structure_where(site: &Site, size: usize, keep: impl Fn(Obj, &FinMap) -> bool) -> Vec<BTreeSet<FinMap>> {
    site.category()
        .objects()
        .map(|o| {
            all_functions(site.size(o), size)
                .filter(|s| keep(o, s))
                .collect()
        })
        .collect()
}

/// Every map is admissible.
pub fn top_structure(site: &Site, base: &FinSet) -> QSpace {
    QSpace::new(base.clone(), structure_where(site, base.len(), |_, _| true))
}

/// Every map at objects covered by the empty family, nothing elsewhere.
pub fn bottom_structure(site: &Site, base: &FinSet) -> QSpace {
    QSpace::new(
        base.clone(),
        structure_where(site, base.len(), |o, _| site.has_empty_cover(o)),
    )
}

/// `εC`: maps `uK -> uC` that agree with images of arrows into `C` locally on a cover.
pub fn yoneda_structure(site: &Site, target: Obj) -> QSpace {
    let c = site.category();
    let u = site.functor();
    let admissible = structure_where(site, site.size(target), |k, sigma| {
        good_arrows_cover(site, k, |leg| {
            let restricted = sigma.compose(u.on_morphism(leg));
            c.hom(c.source(leg), target)
                .into_iter()
                .any(|f| *u.on_morphism(f) == restricted)
        })
    });
    QSpace::new(u.on_object(target).clone(), admissible)
}

/// The maps `uK -> uC` that are images of arrows `K -> C`, without gluing.
/// [`yoneda_structure`] is the quasispace these maps generate.
pub fn yoneda_lifting_structure(site: &Site, target: Obj) -> QSpace {
    let c = site.category();
    let u = site.functor();
    let admissible = structure_where(site, site.size(target), |k, sigma| {
        c.hom(k, target).into_iter().any(|f| u.on_morphism(f) == sigma)
    });
    QSpace::new(u.on_object(target).clone(), admissible)
}

/// The coarsest structure on `base` making every `φ_α: base -> Y_α` a morphism.
pub fn initial_structure(site: &Site, base: &FinSet, legs: &[(QSpace, FinMap)]) -> QSpace {
    QSpace::new(
        base.clone(),
        structure_where(site, base.len(), |o, sigma| {
            legs.iter().all(|(y, phi)| y.admits(o, &phi.compose(sigma)))
        }),
    )
}

/// The finest structure on `base` making every `φ_α: X_α -> base` a morphism:
/// `σ` is admissible when, locally on a cover, it factors through some
/// admissible map of some `X_α`.
pub fn final_structure(site: &Site, base: &FinSet, legs: &[(QSpace, FinMap)]) -> QSpace {
    let c = site.category();
    let u = site.functor();
    let pushed: Vec<BTreeSet<FinMap>> = c
        .objects()
        .map(|o| {
            legs.iter()
                .flat_map(|(x, phi)| x.admissible(o).iter().map(move |t| phi.compose(t)))
                .collect()
        })
        .collect();
    QSpace::new(
        base.clone(),
        structure_where(site, base.len(), |o, sigma| {
            good_arrows_cover(site, o, |k| {
                pushed[c.source(k).0].contains(&sigma.compose(u.on_morphism(k)))
            })
        }),
    )
}

/// Diagrams of quasispaces whose limit or colimit is computed.
#[derive(Debug, Clone)]
pub enum QDiagram {
    Terminal,
    Product(QSpace, QSpace),
    /// `f: X -> Z`, `g: Y -> Z`.
    Pullback {
        left: (QSpace, FinMap),
        right: (QSpace, FinMap),
        apex: QSpace,
    },
    /// Parallel morphisms `source ⇉ target`.
    Equalizer {
        source: QSpace,
        target: QSpace,
        f: FinMap,
        g: FinMap,
    },
    Initial,
    Coproduct(QSpace, QSpace),
    Coequalizer {
        source: QSpace,
        target: QSpace,
        f: FinMap,
        g: FinMap,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QUniversal {
    pub object: QSpace,
    pub maps: Vec<FinMap>,
}

impl QDiagram {
    fn set_diagram(&self) -> Diagram {
        match self {
            QDiagram::Terminal => Diagram::Terminal,
            QDiagram::Initial => Diagram::Initial,
            QDiagram::Product(x, y) => Diagram::Product(x.size(), y.size()),
            QDiagram::Coproduct(x, y) => Diagram::Coproduct(x.size(), y.size()),
            QDiagram::Pullback { left, right, .. } => Diagram::Pullback(left.1.clone(), right.1.clone()),
            QDiagram::Equalizer { f, g, .. } => Diagram::Equalizer(f.clone(), g.clone()),
            QDiagram::Coequalizer { f, g, .. } => Diagram::Coequalizer(f.clone(), g.clone()),
        }
    }

    /// The objects the (co)cone legs run to or from.
    fn vertices(&self) -> Vec<&QSpace> {
        match self {
            QDiagram::Terminal | QDiagram::Initial => vec![],
            QDiagram::Product(x, y) | QDiagram::Coproduct(x, y) => vec![x, y],
            QDiagram::Pullback { left, right, .. } => vec![&left.0, &right.0],
            QDiagram::Equalizer { source, .. } => vec![source],
            QDiagram::Coequalizer { target, .. } => vec![target],
        }
    }

    fn well_typed(&self) -> bool {
        match self {
            QDiagram::Pullback { left, right, apex } => {
                is_morphism(&left.0, apex, &left.1) && is_morphism(&right.0, apex, &right.1)
            }
            QDiagram::Equalizer { source, target, f, g }
            | QDiagram::Coequalizer { source, target, f, g } => {
                is_morphism(source, target, f) && is_morphism(source, target, g)
            }
            _ => true,
        }
    }

    fn commutes(&self, legs: &[FinMap]) -> bool {
        match self {
            QDiagram::Pullback { left, right, .. } => left.1.compose(&legs[0]) == right.1.compose(&legs[1]),
            QDiagram::Equalizer { f, g, .. } => f.compose(&legs[0]) == g.compose(&legs[0]),
            QDiagram::Coequalizer { f, g, .. } => legs[0].compose(f) == legs[0].compose(g),
            _ => true,
        }
    }
}

/// Computed on underlying sets, with the initial (limits) or final (colimits) structure.
pub fn limits_colimits_q(site: &Site, d: &QDiagram) -> Result<QUniversal, DiagramError> {
    if !d.well_typed() {
        return Err(DiagramError::Malformed);
    }
    let set_diagram = d.set_diagram();
    let set = fsetbase::limits_colimits(&set_diagram)?;
    let base = FinSet::range(set.object);
    let legs: Vec<(QSpace, FinMap)> = d
        .vertices()
        .into_iter()
        .cloned()
        .zip(set.maps.iter().cloned())
        .collect();
    let object = if set_diagram.is_limit() {
        initial_structure(site, &base, &legs)
    } else {
        final_structure(site, &base, &legs)
    };
    Ok(QUniversal {
        object,
        maps: set.maps,
    })
}

/// Checks the universal property against every quasispace of the universe.
pub fn verify_universal_q(cat: &QCategory<'_>, d: &QDiagram, u: &QUniversal) -> Verdict {
    let limit = d.set_diagram().is_limit();
    let vertices = d.vertices();
    for (v, m) in vertices.iter().zip(&u.maps) {
        let ok = if limit {
            is_morphism(&u.object, v, m)
        } else {
            is_morphism(v, &u.object, m)
        };
        if !ok {
            return Verdict::Fails("a leg of the universal (co)cone is not a morphism".into());
        }
    }
    let mut extra = cat.universe().to_vec();
    extra.push(u.object.clone());
    for z in &extra {
        let spaces: Vec<Vec<FinMap>> = vertices
            .iter()
            .map(|v| if limit { hom_q(z, v) } else { hom_q(v, z) })
            .collect();
        let mediators = if limit {
            hom_q(z, &u.object)
        } else {
            hom_q(&u.object, z)
        };
        let mut failure = None;
        each_tuple(&spaces, &mut |legs| {
            if failure.is_some() || !d.commutes(legs) {
                return;
            }
            let n = mediators
                .iter()
                .filter(|k| {
                    u.maps.iter().zip(legs).all(|(p, l)| {
                        if limit {
                            p.compose(k) == *l
                        } else {
                            k.compose(p) == *l
                        }
                    })
                })
                .count();
            if n != 1 {
                failure = Some(format!("a (co)cone at a quasispace of size {} has {n} mediating morphisms", z.size()));
            }
        });
        if let Some(w) = failure {
            return Verdict::Fails(w);
        }
    }
    Verdict::Holds
}

fn each_tuple(spaces: &[Vec<FinMap>], visit: &mut dyn FnMut(&[FinMap])) {
    fn go(spaces: &[Vec<FinMap>], acc: &mut Vec<FinMap>, visit: &mut dyn FnMut(&[FinMap])) {
        match spaces.split_first() {
            None => visit(acc),
            Some((first, rest)) => {
                for m in first {
                    acc.push(m.clone());
                    go(rest, acc, visit);
                    acc.pop();
                }
            }
        }
    }
    go(spaces, &mut Vec::new(), visit)
}

/// `φ_α = m ∘ h_α` with `m` injective and `(h_α)` final surjective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFactorization {
    pub image: QSpace,
    pub mono: FinMap,
    pub legs: Vec<FinMap>,
}

pub fn f_factorize_q(site: &Site, target: &QSpace, legs: &[(QSpace, FinMap)]) -> QFactorization {
    let set = fsetbase::f_factorize_image(&fsetbase::SetFamily::new(
        target.size(),
        legs.iter().map(|(_, m)| m.clone()).collect(),
    ));
    let positions: Vec<usize> = set.image.iter().copied().collect();
    let base = target.base().subset(&positions);
    let lifted: Vec<(QSpace, FinMap)> = legs
        .iter()
        .zip(&set.legs)
        .map(|((x, _), h)| (x.clone(), h.clone()))
        .collect();
    QFactorization {
        image: final_structure(site, &base, &lifted),
        mono: set.mono,
        legs: set.legs,
    }
}

/// The r-pullback of a family `φ_α: X_α -> X` along `g: Y -> X` made of
/// representables: every admissible `ψ: uC -> Y` whose composite `g∘ψ`
/// factors as `φ_α∘θ` with `θ` admissible in `X_α`, as a leg `εC -> Y`.
pub fn representable_r_pullback(
    site: &Site,
    legs: &[(QSpace, FinMap)],
    (y, g): (&QSpace, &FinMap),
) -> Vec<(QSpace, FinMap)> {
    site.category()
        .objects()
        .flat_map(|o| {
            let eps = yoneda_structure(site, o);
            y.admissible(o)
                .iter()
                .filter(|psi| {
                    let down = g.compose(psi);
                    legs.iter()
                        .any(|(x, phi)| x.admissible(o).iter().any(|theta| phi.compose(theta) == down))
                })
                .map(move |psi| (eps.clone(), psi.clone()))
                .collect::<Vec<_>>()
        })
        .collect()
}
