//! Finite sets and functions between them.
//!
//! Elements of a [`FinSet`] are addressed by position; the string names only
//! matter for input and output. A [`FinMap`] is a total function stored as its
//! table of images.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{element}` in set {{{set}}}")]
    UnknownElement { element: String, set: String },
    #[error("map is not total: element `{0}` has no image")]
    NotTotal(String),
}

/// A finite set of named elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinSet {
    elements: Vec<String>,
}

impl FinSet {
    pub fn new<I, S>(elements: I) -> Result<Self, SetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(SetError::DuplicateElement(e.clone()));
            }
        }
        Ok(Self { elements })
    }

    /// The set `{0, 1, .., n-1}` with decimal names.
    pub fn range(n: usize) -> Self {
        Self {
            elements: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn empty() -> Self {
        Self::range(0)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    fn lookup(&self) -> HashMap<&str, usize> {
        self.elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect()
    }

    /// Cartesian product, elements ordered row-major: `(i, j)` sits at `i * |other| + j`.
    pub fn product(&self, other: &FinSet) -> FinSet {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for a in &self.elements {
            for b in &other.elements {
                elements.push(format!("({a},{b})"));
            }
        }
        FinSet { elements }
    }

    /// The sub-set on the given (sorted) positions, keeping names.
    pub fn subset(&self, positions: &[usize]) -> FinSet {
        FinSet {
            elements: positions.iter().map(|&i| self.elements[i].clone()).collect(),
        }
    }

    /// Parses a map given as `name -> name` pairs into a [`FinMap`] from `self` to `target`.
    pub fn parse_map<'a, I>(&self, target: &FinSet, pairs: I) -> Result<FinMap, SetError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let src = self.lookup();
        let tgt = target.lookup();
        let mut images = vec![None; self.len()];
        for (a, b) in pairs {
            let i = *src.get(a).ok_or_else(|| SetError::UnknownElement {
                element: a.to_string(),
                set: self.elements.join(","),
            })?;
            let j = *tgt.get(b).ok_or_else(|| SetError::UnknownElement {
                element: b.to_string(),
                set: target.elements.join(","),
            })?;
            images[i] = Some(j);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| SetError::NotTotal(self.elements[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinMap::new(images, target.len()))
    }

    /// Renders a map out of `self` into `target` as `{a↦b, ..}`.
    pub fn show_map(&self, target: &FinSet, map: &FinMap) -> String {
        let body: Vec<String> = map
            .images()
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("{}↦{}", self.elements[i], target.elements[j]))
            .collect();
        format!("{{{}}}", body.join(", "))
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.join(","))
    }
}

/// A total function `{0..dom} -> {0..cod}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FinMap {
    cod: usize,
    images: Vec<usize>,
}

impl FinMap {
    pub fn new(images: Vec<usize>, cod: usize) -> Self {
        assert!(
            images.iter().all(|&j| j < cod),
            "image out of range for codomain of size {cod}"
        );
        Self { cod, images }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cod: n,
            images: (0..n).collect(),
        }
    }

    pub fn constant(dom: usize, cod: usize, value: usize) -> Self {
        Self::new(vec![value; dom], cod)
    }

    pub fn dom(&self) -> usize {
        self.images.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FinMap) -> FinMap {
        debug_assert_eq!(inner.cod, self.dom(), "maps are not composable");
        FinMap {
            cod: self.cod,
            images: inner.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.images.iter().copied().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.images.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.cod
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut back = vec![0; self.cod];
        for (i, &j) in self.images.iter().enumerate() {
            back[j] = i;
        }
        Some(FinMap::new(back, self.images.len()))
    }

    /// Same images, viewed with a new codomain (all images must fit).
    pub fn with_cod(&self, cod: usize) -> FinMap {
        FinMap::new(self.images.clone(), cod)
    }

    /// Encodes the map as a number in base `cod`, least significant digit first.
    pub fn code(&self) -> usize {
        self.images
            .iter()
            .rev()
            .fold(0, |acc, &j| acc * self.cod + j)
    }

    pub fn from_code(mut code: usize, dom: usize, cod: usize) -> FinMap {
        let mut images = Vec::with_capacity(dom);
        for _ in 0..dom {
            images.push(code % cod.max(1));
            code /= cod.max(1);
        }
        FinMap { cod, images }
    }
}

/// Number of functions `dom -> cod`, or `None` on overflow.
pub fn function_count(dom: usize, cod: usize) -> Option<usize> {
    (0..dom).try_fold(1usize, |acc, _| acc.checked_mul(cod))
}

/// All functions `{0..dom} -> {0..cod}` in code order.
pub fn all_functions(dom: usize, cod: usize) -> impl Iterator<Item = FinMap> {
    let count = function_count(dom, cod).expect("function space too large");
    (0..count).map(move |c| FinMap::from_code(c, dom, cod))
}

/// Sizes and maps of a product of two sets, with projections.
pub fn product_projections(left: usize, right: usize) -> (FinMap, FinMap) {
    let n = left * right;
    let p1 = FinMap::new((0..n).map(|k| k / right).collect(), left);
    let p2 = FinMap::new((0..n).map(|k| k % right).collect(), right);
    (p1, p2)
}

/// The pairing `⟨f, g⟩ : X -> A × B` for `f: X -> A`, `g: X -> B`.
pub fn pairing(f: &FinMap, g: &FinMap) -> FinMap {
    assert_eq!(f.dom(), g.dom());
    let right = g.cod();
    FinMap::new(
        f.images()
            .iter()
            .zip(g.images())
            .map(|(&a, &b)| a * right + b)
            .collect(),
        f.cod() * right,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_round_trip_and_count() {
        let maps: Vec<_> = all_functions(3, 2).collect();
        assert_eq!(maps.len(), 8);
        for (c, m) in maps.iter().enumerate() {
            assert_eq!(m.code(), c);
        }
        assert_eq!(all_functions(0, 0).count(), 1);
        assert_eq!(all_functions(2, 0).count(), 0);
    }

    #[test]
    fn compose_and_properties() {
        let f = FinMap::new(vec![1, 0], 3);
        let g = FinMap::new(vec![0, 0, 1], 2);
        assert_eq!(g.compose(&f).images(), &[0, 0]);
        assert!(f.is_injective());
        assert!(!f.is_surjective());
        assert!(FinMap::identity(3).is_bijective());
    }

    #[test]
    fn parse_map_reports_missing_images() {
        let s = FinSet::new(["x", "y"]).unwrap();
        let t = FinSet::range(2);
        assert_eq!(
            s.parse_map(&t, [("x", "0")]),
            Err(SetError::NotTotal("y".into()))
        );
        let m = s.parse_map(&t, [("x", "1"), ("y", "0")]).unwrap();
        assert_eq!(m.images(), &[1, 0]);
        assert!(FinSet::new(["x", "x"]).is_err());
    }
}
