use std::fmt;

use serde::Serialize;

use super::{FinCat, FinMap, FinSet, Mor, Obj};

/// A functor from a finite category into finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteFunctor {
    domain: FinCat,
    objects: Vec<FinSet>,
    morphisms: Vec<FinMap>,
}

impl ConcreteFunctor {
    /// `objects` and `morphisms` are indexed like the domain's tables.
    pub fn new(domain: FinCat, objects: Vec<FinSet>, morphisms: Vec<FinMap>) -> Self {
        assert_eq!(objects.len(), domain.object_count());
        assert_eq!(morphisms.len(), domain.morphism_count());
        Self {
            domain,
            objects,
            morphisms,
        }
    }

    pub fn domain(&self) -> &FinCat {
        &self.domain
    }

    pub fn on_object(&self, o: Obj) -> &FinSet {
        &self.objects[o.0]
    }

    /// `|u(o)|`.
    pub fn size(&self, o: Obj) -> usize {
        self.objects[o.0].len()
    }

    pub fn on_morphism(&self, m: Mor) -> &FinMap {
        &self.morphisms[m.0]
    }

    /// Is `u` injective on every hom-set?
    pub fn is_faithful(&self) -> bool {
        let c = &self.domain;
        c.objects().all(|a| {
            c.objects().all(|b| {
                let hom = c.hom(a, b);
                let images: std::collections::BTreeSet<_> =
                    hom.iter().map(|&m| self.on_morphism(m)).collect();
                images.len() == hom.len()
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    Typing { morphism: String },
    Identity { object: String },
    Composition { g: String, f: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Typing { morphism } => {
                write!(f, "image of {morphism} does not run between the images of its ends")
            }
            Self::Identity { object } => write!(f, "identity of {object} not sent to an identity"),
            Self::Composition { g, f: ff } => write!(f, "u({g} ∘ {ff}) ≠ u({g}) ∘ u({ff})"),
        }
    }
}

/// Every identity or composition preservation failure; empty iff functorial.
/// The domain is assumed to be a valid category.
pub fn validate_functor(u: &ConcreteFunctor) -> Vec<FunctorViolation> {
    let c = u.domain();
    let mut out = Vec::new();
    let mut well_typed = vec![true; c.morphism_count()];
    for m in c.morphisms() {
        let map = u.on_morphism(m);
        if map.dom() != u.size(c.source(m)) || map.cod() != u.size(c.target(m)) {
            well_typed[m.0] = false;
            out.push(FunctorViolation::Typing {
                morphism: c.morphism_name(m).to_string(),
            });
        }
    }
    for o in c.objects() {
        let id = c.identity(o);
        if well_typed[id.0] && *u.on_morphism(id) != FinMap::identity(u.size(o)) {
            out.push(FunctorViolation::Identity {
                object: c.object_name(o).to_string(),
            });
        }
    }
    for (g, f, gf) in c.composition_table() {
        if c.target(f) != c.source(g) || !(well_typed[g.0] && well_typed[f.0] && well_typed[gf.0]) {
            continue;
        }
        if u.on_morphism(g).compose(u.on_morphism(f)) != *u.on_morphism(gf) {
            out.push(FunctorViolation::Composition {
                g: c.morphism_name(g).to_string(),
                f: c.morphism_name(f).to_string(),
            });
        }
    }
    out
}
