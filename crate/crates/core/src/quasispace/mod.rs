//! Quasispaces on a site: finite sets with a family of admissible maps
//! `uC -> S` for every object `C`, closed under restriction along arrows and
//! under gluing along covers.

mod classifier;
mod constructions;
mod exponential;
mod lattice;
mod sheaf;

pub use classifier::{classify_strict_sub, omega_q, pull_back_truth, ClassifierError};
pub use constructions::{
    bottom_structure, f_factorize_q, final_structure, initial_structure, limits_colimits_q,
    top_structure, yoneda_lifting_structure, yoneda_structure, QDiagram, QFactorization,
    QUniversal, verify_universal_q, representable_r_pullback,
};
pub use exponential::{exponential_q, verify_exponential, Exponential, ExponentialError};
pub use lattice::{enumerate_qspaces, generate, EnumerationError};
pub use sheaf::{sheaf_vs_covering, SheafComparison};

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::families::concrete::ConcreteCategory;
use crate::families::{Collection, Family};
use crate::fincat::{all_functions, FinMap, FinSet, Obj};
use crate::site::Site;

/// A finite set with its admissible maps, one set of maps per site object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QSpace {
    base: FinSet,
    admissible: Vec<BTreeSet<FinMap>>,
}

impl QSpace {
    /// Assembles a structure without checking the quasispace conditions.
    pub fn new(base: FinSet, admissible: Vec<BTreeSet<FinMap>>) -> Self {
        debug_assert!(admissible.iter().flatten().all(|m| m.cod() == base.len()));
        Self { base, admissible }
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.base.len()
    }

    /// Number of site objects the structure is indexed by.
    pub fn object_count(&self) -> usize {
        self.admissible.len()
    }

    pub fn admissible(&self, o: Obj) -> &BTreeSet<FinMap> {
        &self.admissible[o.0]
    }

    pub fn admits(&self, o: Obj, sigma: &FinMap) -> bool {
        self.admissible[o.0].contains(sigma)
    }

    /// `(C, σ)` for every admissible `σ`.
    pub fn all_admissible(&self) -> impl Iterator<Item = (Obj, &FinMap)> {
        self.admissible
            .iter()
            .enumerate()
            .flat_map(|(i, maps)| maps.iter().map(move |m| (Obj(i), m)))
    }

    pub fn admissible_count(&self) -> usize {
        self.admissible.iter().map(BTreeSet::len).sum()
    }

    /// Pointwise inclusion of structures on sets of the same size.
    pub fn is_finer_than(&self, other: &QSpace) -> bool {
        self.size() == other.size()
            && self
                .admissible
                .iter()
                .zip(&other.admissible)
                .all(|(a, b)| a.is_subset(b))
    }

    /// Same structure, same underlying set, ignoring element names.
    pub fn same_structure(&self, other: &QSpace) -> bool {
        self.size() == other.size() && self.admissible == other.admissible
    }

    pub fn with_base(mut self, base: FinSet) -> Self {
        assert_eq!(base.len(), self.size());
        self.base = base;
        self
    }

    pub fn describe(&self, site: &Site) -> String {
        let c = site.category();
        let parts: Vec<String> = c
            .objects()
            .map(|o| {
                let src = site.functor().on_object(o);
                let maps: Vec<String> = self.admissible[o.0]
                    .iter()
                    .map(|m| src.show_map(&self.base, m))
                    .collect();
                format!("{}: [{}]", c.object_name(o), maps.join(", "))
            })
            .collect();
        format!("{} with {}", self.base, parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QSpaceViolation {
    Typing { object: String },
    Presheaf { arrow: String, map: Vec<usize> },
    Covering { object: String, cover: String, map: Vec<usize> },
}

impl fmt::Display for QSpaceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Typing { object } => write!(f, "maps at {object} have the wrong ends"),
            Self::Presheaf { arrow, map } => {
                write!(f, "{map:?} is admissible but its restriction along {arrow} is not")
            }
            Self::Covering { object, cover, map } => write!(
                f,
                "{map:?} at {object} restricts to admissible maps along {cover} but is not admissible"
            ),
        }
    }
}

/// Checks the presheaf condition and the covering condition for the site's
/// generating covers.
pub fn validate_qspace(site: &Site, q: &QSpace) -> Vec<QSpaceViolation> {
    violations(site, site.generators().families(), q)
}

/// The same checks against an explicit collection of covers.
pub fn validate_against(site: &Site, covers: &Collection, q: &QSpace) -> Vec<QSpaceViolation> {
    violations(site, covers, q)
}

fn violations(site: &Site, covers: &Collection, q: &QSpace) -> Vec<QSpaceViolation> {
    let c = site.category();
    let u = site.functor();
    let n = q.size();
    let mut out = Vec::new();
    if q.admissible.len() != c.object_count() {
        return vec![QSpaceViolation::Typing {
            object: "<all>".into(),
        }];
    }
    for o in c.objects() {
        if q.admissible[o.0].iter().any(|m| m.dom() != u.size(o) || m.cod() != n) {
            out.push(QSpaceViolation::Typing {
                object: c.object_name(o).to_string(),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in c.morphisms() {
        let uf = u.on_morphism(f);
        for sigma in &q.admissible[c.target(f).0] {
            if !q.admits(c.source(f), &sigma.compose(uf)) {
                out.push(QSpaceViolation::Presheaf {
                    arrow: c.morphism_name(f).to_string(),
                    map: sigma.images().to_vec(),
                });
            }
        }
    }
    for cover in covers.iter() {
        let o = cover.codomain();
        for sigma in all_functions(u.size(o), n) {
            if q.admits(o, &sigma) {
                continue;
            }
            let glued = cover
                .legs()
                .iter()
                .all(|&k| q.admits(c.source(k), &sigma.compose(u.on_morphism(k))));
            if glued {
                out.push(QSpaceViolation::Covering {
                    object: c.object_name(o).to_string(),
                    cover: cover.describe(c),
                    map: sigma.images().to_vec(),
                });
            }
        }
    }
    out
}

/// Does `phi` send admissible maps of `x` to admissible maps of `y`?
pub fn is_morphism(x: &QSpace, y: &QSpace, phi: &FinMap) -> bool {
    phi.dom() == x.size()
        && phi.cod() == y.size()
        && x.all_admissible().all(|(o, s)| y.admits(o, &phi.compose(s)))
}

pub fn hom_q(x: &QSpace, y: &QSpace) -> Vec<FinMap> {
    all_functions(x.size(), y.size())
        .filter(|phi| is_morphism(x, y, phi))
        .collect()
}

/// Is the family of arrows into `o` satisfying `good` a cover?
///
/// The stored topology is saturated, so some cover has all its legs good
/// exactly when the family of all good arrows is itself a cover.
pub(crate) fn good_arrows_cover(site: &Site, o: Obj, good: impl Fn(crate::fincat::Mor) -> bool) -> bool {
    let c = site.category();
    let legs = c.arrows_into(o).into_iter().filter(|&m| good(m));
    let fam = Family::new(c, o, legs).expect("arrows into o");
    site.covers(o).contains(&fam)
}

/// A bounded universe of quasispaces, used as a concrete category.
#[derive(Debug, Clone)]
pub struct QCategory<'a> {
    site: &'a Site,
    universe: Vec<QSpace>,
    max_base: usize,
    strict_only: bool,
    homs: RefCell<HashMap<(usize, usize), Vec<FinMap>>>,
}

impl<'a> QCategory<'a> {
    /// All quasispaces with base size at most `max_base`.
    pub fn new(site: &'a Site, max_base: usize) -> Result<Self, EnumerationError> {
        let mut universe = Vec::new();
        for n in 0..=max_base {
            universe.extend(enumerate_qspaces(site, &FinSet::range(n), max_base)?);
        }
        Ok(Self {
            site,
            universe,
            max_base,
            strict_only: false,
            homs: RefCell::default(),
        })
    }

    /// All strict quasispaces with base size at most `max_base`.
    pub fn strict(site: &'a Site, max_base: usize) -> Result<Self, EnumerationError> {
        let mut cat = Self::new(site, max_base)?;
        cat.universe.retain(crate::strictq::is_strict);
        cat.strict_only = true;
        Ok(cat)
    }

    pub fn site(&self) -> &'a Site {
        self.site
    }

    pub fn max_base(&self) -> usize {
        self.max_base
    }

    pub fn universe(&self) -> &[QSpace] {
        &self.universe
    }

    pub fn is_strict_only(&self) -> bool {
        self.strict_only
    }

    /// Pullback of `f: X -> Z` and `g: Y -> Z`: the set pullback with its
    /// initial structure, then the strict coreflection in the strict category.
    pub fn pullback(
        &self,
        (x, f): (&QSpace, &FinMap),
        (y, g): (&QSpace, &FinMap),
    ) -> (QSpace, FinMap, FinMap) {
        let set = crate::fsetbase::limits_colimits(&crate::fsetbase::Diagram::Pullback(
            f.clone(),
            g.clone(),
        ))
        .expect("pullback of a cospan");
        let base = FinSet::range(set.object);
        let p = initial_structure(
            self.site,
            &base,
            &[(x.clone(), set.maps[0].clone()), (y.clone(), set.maps[1].clone())],
        );
        if !self.strict_only {
            return (p, set.maps[0].clone(), set.maps[1].clone());
        }
        let core = crate::strictq::coreflection_s(&p);
        let inc = &core.inclusion;
        (
            core.space.clone(),
            set.maps[0].compose(inc),
            set.maps[1].compose(inc),
        )
    }
}

impl ConcreteCategory for QCategory<'_> {
    type Object = QSpace;

    fn carrier(&self, x: &QSpace) -> usize {
        x.size()
    }

    fn is_morphism(&self, src: &QSpace, tgt: &QSpace, map: &FinMap) -> bool {
        is_morphism(src, tgt, map)
    }

    fn test_objects(&self) -> Vec<QSpace> {
        self.universe.clone()
    }

    /// Memoized for objects of the universe.
    fn hom(&self, src: &QSpace, tgt: &QSpace) -> Vec<FinMap> {
        let position = |x: &QSpace| self.universe.iter().position(|u| u == x);
        let (Some(i), Some(j)) = (position(src), position(tgt)) else {
            return hom_q(src, tgt);
        };
        self.homs
            .borrow_mut()
            .entry((i, j))
            .or_insert_with(|| hom_q(src, tgt))
            .clone()
    }
}

#[cfg(test)]
mod tests;
