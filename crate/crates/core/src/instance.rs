//! Instance files: a site, named quasispaces, a point class and bounds, as JSON.
//!
//! Identities are implicit (`id_<object>`), as are identity composites and the
//! identity images under `u`. When `covers` is absent the topology is trivial.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{Collection, Family};
use crate::fincat::{ConcreteFunctor, FinCat, FinMap, FinSet, Obj};
use crate::quasispace::{validate_qspace, QSpace};
use crate::site::Site;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

fn invalid(location: impl Into<String>, message: impl ToString) -> InstanceError {
    InstanceError::Invalid {
        location: location.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    /// Largest base set enumerated.
    #[serde(default = "Bounds::default_base")]
    pub base: usize,
    /// Largest family searched by the strict-epi deciders.
    #[serde(default = "Bounds::default_legs")]
    pub legs: usize,
    /// Largest base of the quasispaces used as test objects.
    #[serde(default = "Bounds::default_universe")]
    pub universe: usize,
}

impl Bounds {
    fn default_base() -> usize {
        2
    }
    fn default_legs() -> usize {
        crate::families::DEFAULT_MAX_LEGS
    }
    fn default_universe() -> usize {
        2
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            base: Self::default_base(),
            legs: Self::default_legs(),
            universe: Self::default_universe(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDecl {
    id: String,
    src: String,
    tgt: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComposeDecl {
    g: String,
    f: String,
    gf: String,
}

type MapDecl = BTreeMap<String, String>;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorDecl {
    objects: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    morphisms: BTreeMap<String, MapDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QSpaceDecl {
    base: Vec<String>,
    #[serde(default)]
    admissible: BTreeMap<String, Vec<MapDecl>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    objects: Vec<String>,
    #[serde(default)]
    morphisms: Vec<MorphismDecl>,
    #[serde(default)]
    compose: Vec<ComposeDecl>,
    u: FunctorDecl,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    covers: Option<BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default)]
    qspaces: BTreeMap<String, QSpaceDecl>,
    #[serde(default)]
    points: Vec<String>,
    #[serde(default)]
    bounds: Bounds,
}

/// A fully validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: Option<String>,
    pub site: Site,
    pub qspaces: BTreeMap<String, QSpace>,
    pub points: Vec<Obj>,
    pub bounds: Bounds,
}

impl Instance {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let decl: InstanceDecl = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        build(decl)
    }

    /// The instance written back as JSON; loading it gives an equal instance.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.declaration()).expect("instance declarations serialize")
    }

    pub fn qspace(&self, name: &str) -> Result<&QSpace, InstanceError> {
        self.qspaces
            .get(name)
            .ok_or_else(|| invalid("qspaces", format!("no quasispace named `{name}`")))
    }

    pub fn object(&self, name: &str) -> Result<Obj, InstanceError> {
        self.site
            .category()
            .object(name)
            .map_err(|e| invalid("objects", e))
    }

    /// Same site, quasispaces, points and bounds.
    pub fn same_as(&self, other: &Instance) -> bool {
        self.site.category() == other.site.category()
            && self.site.functor() == other.site.functor()
            && self.site.generators().families() == other.site.generators().families()
            && self.site.topology().families() == other.site.topology().families()
            && self.qspaces == other.qspaces
            && self.points == other.points
            && self.bounds == other.bounds
    }

    fn declaration(&self) -> InstanceDecl {
        let c = self.site.category();
        let u = self.site.functor();
        let plain: Vec<_> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
        let map_decl = |src: &FinSet, tgt: &FinSet, m: &FinMap| -> MapDecl {
            m.images()
                .iter()
                .enumerate()
                .map(|(i, &j)| (src.name(i).to_string(), tgt.name(j).to_string()))
                .collect()
        };
        let mut covers = BTreeMap::new();
        for f in self.site.generators().families().iter() {
            covers
                .entry(c.object_name(f.codomain()).to_string())
                .or_insert_with(Vec::new)
                .push(f.legs().iter().map(|&m| c.morphism_name(m).to_string()).collect());
        }
        InstanceDecl {
            name: self.name.clone(),
            objects: c.objects().map(|o| c.object_name(o).to_string()).collect(),
            morphisms: plain
                .iter()
                .map(|&m| MorphismDecl {
                    id: c.morphism_name(m).to_string(),
                    src: c.object_name(c.source(m)).to_string(),
                    tgt: c.object_name(c.target(m)).to_string(),
                })
                .collect(),
            compose: c
                .composition_table()
                .filter(|&(g, f, _)| !c.is_identity(g) && !c.is_identity(f))
                .map(|(g, f, gf)| ComposeDecl {
                    g: c.morphism_name(g).to_string(),
                    f: c.morphism_name(f).to_string(),
                    gf: c.morphism_name(gf).to_string(),
                })
                .collect(),
            u: FunctorDecl {
                objects: c
                    .objects()
                    .map(|o| (c.object_name(o).to_string(), u.on_object(o).elements().to_vec()))
                    .collect(),
                morphisms: plain
                    .iter()
                    .map(|&m| {
                        (
                            c.morphism_name(m).to_string(),
                            map_decl(u.on_object(c.source(m)), u.on_object(c.target(m)), u.on_morphism(m)),
                        )
                    })
                    .collect(),
            },
            covers: Some(covers),
            qspaces: self
                .qspaces
                .iter()
                .map(|(name, q)| {
                    let admissible = c
                        .objects()
                        .filter(|&o| !q.admissible(o).is_empty())
                        .map(|o| {
                            (
                                c.object_name(o).to_string(),
                                q.admissible(o)
                                    .iter()
                                    .map(|m| map_decl(u.on_object(o), q.base(), m))
                                    .collect(),
                            )
                        })
                        .collect();
                    (
                        name.clone(),
                        QSpaceDecl {
                            base: q.base().elements().to_vec(),
                            admissible,
                        },
                    )
                })
                .collect(),
            points: self.points.iter().map(|&o| c.object_name(o).to_string()).collect(),
            bounds: self.bounds,
        }
    }
}

fn build(decl: InstanceDecl) -> Result<Instance, InstanceError> {
    let category = build_category(&decl)?;
    let c = &category;

    let mut objects = Vec::with_capacity(c.object_count());
    for o in c.objects() {
        let name = c.object_name(o);
        let elements = decl
            .u
            .objects
            .get(name)
            .ok_or_else(|| invalid(format!("u.objects.{name}"), "missing"))?;
        objects.push(FinSet::new(elements.iter().cloned()).map_err(|e| invalid(format!("u.objects.{name}"), e))?);
    }
    if let Some(extra) = decl.u.objects.keys().find(|k| c.object(k).is_err()) {
        return Err(invalid(format!("u.objects.{extra}"), "not an object"));
    }
    if let Some(extra) = decl.u.morphisms.keys().find(|k| c.morphism(k).is_err()) {
        return Err(invalid(format!("u.morphisms.{extra}"), "not a morphism"));
    }
    let mut maps = Vec::with_capacity(c.morphism_count());
    for m in c.morphisms() {
        let name = c.morphism_name(m);
        let (src, tgt) = (&objects[c.source(m).0], &objects[c.target(m).0]);
        let map = match decl.u.morphisms.get(name) {
            Some(pairs) => src
                .parse_map(tgt, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))
                .map_err(|e| invalid(format!("u.morphisms.{name}"), e))?,
            None if c.is_identity(m) => FinMap::identity(src.len()),
            None => return Err(invalid(format!("u.morphisms.{name}"), "missing")),
        };
        maps.push(map);
    }
    let functor = ConcreteFunctor::new(category.clone(), objects, maps);

    let site = match &decl.covers {
        None => Site::trivial(functor),
        Some(covers) => {
            let mut families = Vec::new();
            for (o, list) in covers {
                let obj = c.object(o).map_err(|e| invalid(format!("covers.{o}"), e))?;
                for (k, legs) in list.iter().enumerate() {
                    let mut ms = Vec::with_capacity(legs.len());
                    for (l, leg) in legs.iter().enumerate() {
                        ms.push(c.morphism(leg).map_err(|e| invalid(format!("covers.{o}[{k}][{l}]"), e))?);
                    }
                    families.push(Family::new(c, obj, ms).map_err(|e| invalid(format!("covers.{o}[{k}]"), e))?);
                }
            }
            Site::new(functor, Collection::from_families(c, families))
        }
    }
    .map_err(|e| invalid("site", e))?;

    let mut qspaces = BTreeMap::new();
    for (name, q) in &decl.qspaces {
        let at = format!("qspaces.{name}");
        let base = FinSet::new(q.base.iter().cloned()).map_err(|e| invalid(format!("{at}.base"), e))?;
        let mut admissible = vec![std::collections::BTreeSet::new(); c.object_count()];
        for (o, list) in &q.admissible {
            let obj = c.object(o).map_err(|e| invalid(format!("{at}.admissible.{o}"), e))?;
            for (k, pairs) in list.iter().enumerate() {
                let m = site
                    .functor()
                    .on_object(obj)
                    .parse_map(&base, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))
                    .map_err(|e| invalid(format!("{at}.admissible.{o}[{k}]"), e))?;
                admissible[obj.0].insert(m);
            }
        }
        let space = QSpace::new(base, admissible);
        if let Some(v) = validate_qspace(&site, &space).first() {
            return Err(invalid(at, v));
        }
        qspaces.insert(name.clone(), space);
    }

    let points = decl
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| c.object(p).map_err(|e| invalid(format!("points[{k}]"), e)))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Instance {
        name: decl.name,
        site,
        qspaces,
        points,
        bounds: decl.bounds,
    })
}

fn build_category(decl: &InstanceDecl) -> Result<FinCat, InstanceError> {
    let mut known: BTreeMap<&str, ()> = BTreeMap::new();
    for o in &decl.objects {
        known.insert(o, ());
    }
    for (k, m) in decl.morphisms.iter().enumerate() {
        for (field, end) in [("src", &m.src), ("tgt", &m.tgt)] {
            if !known.contains_key(end.as_str()) {
                return Err(invalid(format!("morphisms[{k}].{field}"), format!("unknown object `{end}`")));
            }
        }
    }
    let names: Vec<String> = decl
        .morphisms
        .iter()
        .map(|m| m.id.clone())
        .chain(decl.objects.iter().map(|o| crate::fincat::identity_name(o)))
        .collect();
    for (k, e) in decl.compose.iter().enumerate() {
        for (field, m) in [("g", &e.g), ("f", &e.f), ("gf", &e.gf)] {
            if !names.contains(m) {
                return Err(invalid(format!("compose[{k}].{field}"), format!("unknown morphism `{m}`")));
            }
        }
    }
    let mut b = FinCat::builder().objects(decl.objects.iter().cloned());
    for m in &decl.morphisms {
        b = b.morphism(m.id.clone(), m.src.clone(), m.tgt.clone());
    }
    for e in &decl.compose {
        b = b.compose(e.g.clone(), e.f.clone(), e.gf.clone());
    }
    let c = b.build().map_err(|e| invalid("category", e))?;
    if let Some(v) = crate::fincat::validate_category(&c).first() {
        use crate::fincat::CategoryViolation as V;
        let pair = match v {
            V::Typing { g, f } | V::ResultTyping { g, f, .. } | V::MissingComposite { g, f } => Some((g, f)),
            _ => None,
        };
        let location = pair
            .and_then(|(g, f)| decl.compose.iter().position(|e| &e.g == g && &e.f == f))
            .map_or_else(|| "compose".to_string(), |k| format!("compose[{k}]"));
        return Err(invalid(location, v));
    }
    Ok(c)
}
