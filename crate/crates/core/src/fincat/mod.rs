//! Finite categories stored as explicit tables.
//!
//! Objects and morphisms carry opaque string identifiers. Every object has an
//! identity morphism (named `id_<object>` unless the table supplies one under
//! that name) and composition is a stored table, never computed. Validation is
//! exhaustive: [`validate_category`] enumerates every typing, identity and
//! associativity instance.

mod functor;
mod sets;

pub use functor::{validate_functor, ConcreteFunctor, FunctorViolation};
pub use sets::{
    all_functions, function_count, pairing, product_projections, FinMap, FinSet, SetError,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Obj(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mor(pub usize);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism `{0}`")]
    DuplicateMorphism(String),
    #[error("compose entry ({g}, {f}) given twice")]
    DuplicateComposite { g: String, f: String },
    #[error("category is not valid: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismData {
    pub name: String,
    pub source: Obj,
    pub target: Obj,
}

#[derive(Debug, Clone)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identities: Vec<Mor>,
    compose: BTreeMap<(Mor, Mor), Mor>,
    object_index: HashMap<String, Obj>,
    morphism_index: HashMap<String, Mor>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

impl Eq for FinCat {}

/// Builds a [`FinCat`] from named tables.
#[derive(Debug, Default, Clone)]
pub struct FinCatBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    composites: Vec<(String, String, String)>,
}

impl FinCatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: impl Into<String>) -> Self {
        self.objects.push(name.into());
        self
    }

    pub fn objects<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.objects.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn morphism(
        mut self,
        name: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        self.morphisms
            .push((name.into(), source.into(), target.into()));
        self
    }

    /// Records `g ∘ f = gf`.
    pub fn compose(
        mut self,
        g: impl Into<String>,
        f: impl Into<String>,
        gf: impl Into<String>,
    ) -> Self {
        self.composites.push((g.into(), f.into(), gf.into()));
        self
    }

    /// Resolves names and fills in identities. Axiom violations are not
    /// errors here; see [`validate_category`].
    pub fn build(self) -> Result<FinCat, CatError> {
        let mut object_index = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if object_index.insert(o.clone(), Obj(i)).is_some() {
                return Err(CatError::DuplicateObject(o.clone()));
            }
        }
        let obj = |name: &str| {
            object_index
                .get(name)
                .copied()
                .ok_or_else(|| CatError::UnknownObject(name.to_string()))
        };
        let mut morphisms = Vec::new();
        let mut morphism_index = HashMap::new();
        for (name, s, t) in &self.morphisms {
            let data = MorphismData {
                name: name.clone(),
                source: obj(s)?,
                target: obj(t)?,
            };
            if morphism_index
                .insert(name.clone(), Mor(morphisms.len()))
                .is_some()
            {
                return Err(CatError::DuplicateMorphism(name.clone()));
            }
            morphisms.push(data);
        }
        let mut identities = Vec::with_capacity(self.objects.len());
        for (i, o) in self.objects.iter().enumerate() {
            let name = identity_name(o);
            let id = match morphism_index.get(&name) {
                Some(&m) => m,
                None => {
                    let m = Mor(morphisms.len());
                    morphisms.push(MorphismData {
                        name: name.clone(),
                        source: Obj(i),
                        target: Obj(i),
                    });
                    morphism_index.insert(name, m);
                    m
                }
            };
            identities.push(id);
        }
        let mor = |name: &str| {
            morphism_index
                .get(name)
                .copied()
                .ok_or_else(|| CatError::UnknownMorphism(name.to_string()))
        };
        let mut compose = BTreeMap::new();
        for (g, f, gf) in &self.composites {
            if compose.insert((mor(g)?, mor(f)?), mor(gf)?).is_some() {
                return Err(CatError::DuplicateComposite {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
        }
        // identity laws are filled in only where the table is silent
        for (m, data) in morphisms.iter().enumerate() {
            let m = Mor(m);
            let id_t = identities[data.target.0];
            let id_s = identities[data.source.0];
            compose.entry((id_t, m)).or_insert(m);
            compose.entry((m, id_s)).or_insert(m);
        }
        Ok(FinCat {
            objects: self.objects,
            morphisms,
            identities,
            compose,
            object_index,
            morphism_index,
        })
    }
}

pub fn identity_name(object: &str) -> String {
    format!("id_{object}")
}

impl FinCat {
    pub fn builder() -> FinCatBuilder {
        FinCatBuilder::new()
    }

    /// The category of a preorder: one arrow `x<y` for each related pair.
    /// `leq` need not be reflexively or transitively closed.
    pub fn from_preorder<S: AsRef<str>>(elements: &[S], leq: &[(S, S)]) -> Result<FinCat, CatError> {
        let n = elements.len();
        let index: HashMap<&str, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_ref(), i))
            .collect();
        let mut rel = vec![vec![false; n]; n];
        for (a, b) in leq {
            let i = *index
                .get(a.as_ref())
                .ok_or_else(|| CatError::UnknownObject(a.as_ref().to_string()))?;
            let j = *index
                .get(b.as_ref())
                .ok_or_else(|| CatError::UnknownObject(b.as_ref().to_string()))?;
            rel[i][j] = true;
        }
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        let name = |i: usize, j: usize| {
            if i == j {
                identity_name(elements[i].as_ref())
            } else {
                format!("{}<{}", elements[i].as_ref(), elements[j].as_ref())
            }
        };
        let mut b = FinCat::builder().objects(elements.iter().map(|e| e.as_ref().to_string()));
        for (i, row) in rel.iter().enumerate() {
            for (j, &related) in row.iter().enumerate() {
                if i != j && related {
                    b = b.morphism(name(i, j), elements[i].as_ref(), elements[j].as_ref());
                }
            }
        }
        for i in 0..n {
            for (j, from_j) in rel.iter().enumerate() {
                for (k, &j_below_k) in from_j.iter().enumerate() {
                    if i != j && j != k && rel[i][j] && j_below_k {
                        b = b.compose(name(j, k), name(i, j), name(i, k));
                    }
                }
            }
        }
        b.build()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + '_ {
        (0..self.objects.len()).map(Obj)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o.0]
    }

    pub fn morphism_name(&self, m: Mor) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn object(&self, name: &str) -> Result<Obj, CatError> {
        self.object_index
            .get(name)
            .copied()
            .ok_or_else(|| CatError::UnknownObject(name.to_string()))
    }

    pub fn morphism(&self, name: &str) -> Result<Mor, CatError> {
        self.morphism_index
            .get(name)
            .copied()
            .ok_or_else(|| CatError::UnknownMorphism(name.to_string()))
    }

    pub fn source(&self, m: Mor) -> Obj {
        self.morphisms[m.0].source
    }

    pub fn target(&self, m: Mor) -> Obj {
        self.morphisms[m.0].target
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.identities[o.0]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identities[self.source(m).0] == m
    }

    /// The stored value of `g ∘ f`, if any.
    pub fn composite(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f` in a validated category.
    ///
    /// Panics if the pair is not composable or the table has no entry.
    pub fn comp(&self, g: Mor, f: Mor) -> Mor {
        match self.composite(g, f) {
            Some(gf) if self.target(f) == self.source(g) => gf,
            _ => panic!(
                "composite {} ∘ {} is undefined",
                self.morphism_name(g),
                self.morphism_name(f)
            ),
        }
    }

    pub fn composition_table(&self) -> impl Iterator<Item = (Mor, Mor, Mor)> + '_ {
        self.compose.iter().map(|(&(g, f), &gf)| (g, f, gf))
    }

    /// Morphisms `a -> b`.
    pub fn hom(&self, a: Obj, b: Obj) -> Vec<Mor> {
        self.morphisms()
            .filter(|&m| self.source(m) == a && self.target(m) == b)
            .collect()
    }

    /// Morphisms with target `b`, from any source.
    pub fn arrows_into(&self, b: Obj) -> Vec<Mor> {
        self.morphisms().filter(|&m| self.target(m) == b).collect()
    }

    pub fn arrows_from(&self, a: Obj) -> Vec<Mor> {
        self.morphisms().filter(|&m| self.source(m) == a).collect()
    }

    pub fn hom_by_name(&self, a: &str, b: &str) -> Result<Vec<String>, CatError> {
        let (a, b) = (self.object(a)?, self.object(b)?);
        Ok(self
            .hom(a, b)
            .into_iter()
            .map(|m| self.morphism_name(m).to_string())
            .collect())
    }

    pub fn is_iso(&self, m: Mor) -> bool {
        let (s, t) = (self.source(m), self.target(m));
        self.hom(t, s).into_iter().any(|n| {
            self.composite(n, m) == Some(self.identity(s))
                && self.composite(m, n) == Some(self.identity(t))
        })
    }

    /// Is `g` a split epimorphism (`g ∘ h = id` for some `h`)?
    pub fn is_split_epi(&self, g: Mor) -> bool {
        let t = self.target(g);
        self.hom(t, self.source(g))
            .into_iter()
            .any(|h| self.composite(g, h) == Some(self.identity(t)))
    }
}

impl fmt::Display for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "category with {} objects, {} morphisms",
            self.object_count(),
            self.morphism_count()
        )
    }
}

/// One failed axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CategoryViolation {
    /// A composite is recorded for a pair with `target(f) != source(g)`.
    Typing { g: String, f: String },
    /// `g ∘ f` has the wrong source or target.
    ResultTyping { g: String, f: String, gf: String },
    MissingComposite { g: String, f: String },
    IdentityTyping { object: String },
    LeftIdentity { morphism: String },
    RightIdentity { morphism: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Typing { g, f: ff } => write!(f, "compose({g}, {ff}) defined on a non-composable pair"),
            Self::ResultTyping { g, f: ff, gf } => {
                write!(f, "compose({g}, {ff}) = {gf} has the wrong source or target")
            }
            Self::MissingComposite { g, f: ff } => write!(f, "compose({g}, {ff}) missing"),
            Self::IdentityTyping { object } => write!(f, "identity of {object} is not an endomorphism of it"),
            Self::LeftIdentity { morphism } => write!(f, "left identity law fails at {morphism}"),
            Self::RightIdentity { morphism } => write!(f, "right identity law fails at {morphism}"),
            Self::Associativity { h, g, f: ff } => write!(f, "({h} ∘ {g}) ∘ {ff} ≠ {h} ∘ ({g} ∘ {ff})"),
        }
    }
}

/// Lists every violated category axiom; empty iff `c` is a category.
pub fn validate_category(c: &FinCat) -> Vec<CategoryViolation> {
    let name = |m: Mor| c.morphism_name(m).to_string();
    let mut out = Vec::new();
    for (g, f, gf) in c.composition_table() {
        if c.target(f) != c.source(g) {
            out.push(CategoryViolation::Typing { g: name(g), f: name(f) });
        } else if c.source(gf) != c.source(f) || c.target(gf) != c.target(g) {
            out.push(CategoryViolation::ResultTyping {
                g: name(g),
                f: name(f),
                gf: name(gf),
            });
        }
    }
    for f in c.morphisms() {
        for g in c.arrows_from(c.target(f)) {
            if c.composite(g, f).is_none() {
                out.push(CategoryViolation::MissingComposite { g: name(g), f: name(f) });
            }
        }
    }
    for o in c.objects() {
        let id = c.identity(o);
        if c.source(id) != o || c.target(id) != o {
            out.push(CategoryViolation::IdentityTyping {
                object: c.object_name(o).to_string(),
            });
        }
    }
    for f in c.morphisms() {
        if c.composite(c.identity(c.target(f)), f) != Some(f) {
            out.push(CategoryViolation::LeftIdentity { morphism: name(f) });
        }
        if c.composite(f, c.identity(c.source(f))) != Some(f) {
            out.push(CategoryViolation::RightIdentity { morphism: name(f) });
        }
    }
    for f in c.morphisms() {
        for g in c.arrows_from(c.target(f)) {
            for h in c.arrows_from(c.target(g)) {
                let left = c.composite(g, f).and_then(|gf| c.composite(h, gf));
                let right = c.composite(h, g).and_then(|hg| c.composite(hg, f));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        out.push(CategoryViolation::Associativity {
                            h: name(h),
                            g: name(g),
                            f: name(f),
                        });
                    }
                }
            }
        }
    }
    out
}

/// The opposite category: sources and targets swapped, composition transposed.
pub fn opposite(c: &FinCat) -> Result<FinCat, CatError> {
    let violations = validate_category(c);
    if let Some(v) = violations.first() {
        return Err(CatError::Invalid(v.to_string()));
    }
    let morphisms = c
        .morphisms
        .iter()
        .map(|m| MorphismData {
            name: m.name.clone(),
            source: m.target,
            target: m.source,
        })
        .collect();
    let compose = c
        .compose
        .iter()
        .map(|(&(g, f), &gf)| ((f, g), gf))
        .collect();
    Ok(FinCat {
        objects: c.objects.clone(),
        morphisms,
        identities: c.identities.clone(),
        compose,
        object_index: c.object_index.clone(),
        morphism_index: c.morphism_index.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinCat {
        FinCat::from_preorder(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap()
    }

    #[test]
    fn terminal_category_is_valid_and_self_dual() {
        let c = FinCat::builder().object("*").build().unwrap();
        assert!(validate_category(&c).is_empty());
        assert_eq!(c.morphism_count(), 1);
        assert_eq!(opposite(&c).unwrap(), c);
    }

    #[test]
    fn diamond_poset_is_a_category() {
        let d = diamond();
        assert!(validate_category(&d).is_empty());
        // 4 identities + 5 strict comparabilities
        assert_eq!(d.morphism_count(), 9);
        let one = d.object("1").unwrap();
        let zero = d.object("0").unwrap();
        assert!(d.hom(one, zero).is_empty());
    }

    #[test]
    fn diamond_opposite_reverses_order() {
        let d = diamond();
        let op = opposite(&d).unwrap();
        assert!(validate_category(&op).is_empty());
        // transpose oracle: x<y in d iff it runs y -> x in op
        for m in d.morphisms() {
            assert_eq!(op.source(m), d.target(m));
            assert_eq!(op.target(m), d.source(m));
        }
        let one = op.object("1").unwrap();
        let zero = op.object("0").unwrap();
        assert_eq!(op.hom(one, zero).len(), 1);
        assert_eq!(opposite(&op).unwrap(), d);
    }

    #[test]
    fn non_composable_entry_is_a_typing_violation() {
        let c = FinCat::builder()
            .objects(["P", "L"])
            .morphism("f", "P", "L")
            .compose("f", "f", "f")
            .build()
            .unwrap();
        let v = validate_category(&c);
        assert!(v.contains(&CategoryViolation::Typing {
            g: "f".into(),
            f: "f".into()
        }));
        assert!(opposite(&c).is_err());
    }

    #[test]
    fn missing_composite_and_associativity_are_reported() {
        // a: X -> Y, b: Y -> Z with no entry for b ∘ a
        let c = FinCat::builder()
            .objects(["X", "Y", "Z"])
            .morphism("a", "X", "Y")
            .morphism("b", "Y", "Z")
            .build()
            .unwrap();
        assert!(validate_category(&c)
            .iter()
            .any(|v| matches!(v, CategoryViolation::MissingComposite { .. })));

        // x∘x = y, y∘y = x: (x∘x)∘y = y∘y = x but x∘(x∘y) = x∘x = y
        let c = FinCat::builder()
            .object("M")
            .morphism("x", "M", "M")
            .morphism("y", "M", "M")
            .compose("x", "y", "x")
            .compose("y", "x", "x")
            .compose("x", "x", "y")
            .compose("y", "y", "x")
            .build()
            .unwrap();
        assert!(validate_category(&c)
            .iter()
            .any(|v| matches!(v, CategoryViolation::Associativity { .. })));
    }

    #[test]
    fn hom_by_name_checks_objects() {
        let d = diamond();
        assert_eq!(d.hom_by_name("a", "1").unwrap(), vec!["a<1".to_string()]);
        assert_eq!(
            d.hom_by_name("a", "q"),
            Err(CatError::UnknownObject("q".into()))
        );
        assert!(d.hom_by_name("a", "a").unwrap().contains(&"id_a".to_string()));
    }
}
