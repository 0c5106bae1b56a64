//! Quasispace structures on a fixed set as the closed sets of a Horn theory.
//!
//! Atoms are pairs `(C, σ: uC -> S)`. The presheaf condition contributes
//! `σ ⇒ σ∘uf` and each generating cover `(k_i)` contributes
//! `∧ σ∘uk_i ⇒ σ`. Closed sets are exactly the structures; they are listed in
//! lectic order by Ganter's NextClosure.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::QSpace;
use crate::fincat::{all_functions, FinMap, FinSet, Obj};
use crate::site::Site;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("base set of size {size} exceeds the enumeration bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
}

pub(crate) struct HornTheory {
    atoms: Vec<(Obj, FinMap)>,
    index: HashMap<(Obj, FinMap), usize>,
    premises: Vec<Vec<usize>>,
    conclusions: Vec<usize>,
    /// Clauses that mention each atom in their premise.
    watching: Vec<Vec<usize>>,
    objects: usize,
}

impl HornTheory {
    pub(crate) fn new(site: &Site, size: usize) -> Self {
        let c = site.category();
        let u = site.functor();
        let mut atoms = Vec::new();
        for o in c.objects() {
            for sigma in all_functions(u.size(o), size) {
                atoms.push((o, sigma));
            }
        }
        let index: HashMap<(Obj, FinMap), usize> =
            atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let mut clauses: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
        for f in c.morphisms() {
            if c.is_identity(f) {
                continue;
            }
            let (src, tgt) = (c.source(f), c.target(f));
            for sigma in all_functions(u.size(tgt), size) {
                let from = index[&(tgt, sigma.clone())];
                let to = index[&(src, sigma.compose(u.on_morphism(f)))];
                clauses.insert((vec![from], to));
            }
        }
        for cover in site.generators().families().iter() {
            let o = cover.codomain();
            for sigma in all_functions(u.size(o), size) {
                let to = index[&(o, sigma.clone())];
                let premise: BTreeSet<usize> = cover
                    .legs()
                    .iter()
                    .map(|&k| index[&(c.source(k), sigma.compose(u.on_morphism(k)))])
                    .collect();
                if !premise.contains(&to) {
                    clauses.insert((premise.into_iter().collect(), to));
                }
            }
        }
        let mut watching = vec![Vec::new(); atoms.len()];
        let (premises, conclusions): (Vec<_>, Vec<_>) = clauses.into_iter().unzip();
        for (k, p) in premises.iter().enumerate() {
            for &a in p {
                watching[a].push(k);
            }
        }
        Self {
            atoms,
            index,
            premises,
            conclusions,
            watching,
            objects: c.object_count(),
        }
    }

    /// Least closed set containing `seed`, by forward chaining.
    pub(crate) fn closure(&self, seed: &[bool]) -> Vec<bool> {
        let mut set = seed.to_vec();
        let mut missing: Vec<usize> = self
            .premises
            .iter()
            .map(|p| p.iter().filter(|&&a| !set[a]).count())
            .collect();
        let mut queue: Vec<usize> = Vec::new();
        for (k, &m) in missing.iter().enumerate() {
            if m == 0 && !set[self.conclusions[k]] {
                set[self.conclusions[k]] = true;
                queue.push(self.conclusions[k]);
            }
        }
        while let Some(a) = queue.pop() {
            for &k in &self.watching[a] {
                missing[k] -= 1;
                if missing[k] == 0 && !set[self.conclusions[k]] {
                    set[self.conclusions[k]] = true;
                    queue.push(self.conclusions[k]);
                }
            }
        }
        set
    }

    /// Every closed set, in lectic order.
    pub(crate) fn all_closed(&self) -> Vec<Vec<bool>> {
        let n = self.atoms.len();
        let mut out = Vec::new();
        let mut current = self.closure(&vec![false; n]);
        loop {
            out.push(current.clone());
            let mut next = None;
            let mut prefix = current.clone();
            for i in (0..n).rev() {
                if prefix[i] {
                    prefix[i] = false;
                    continue;
                }
                let mut seed = prefix.clone();
                seed[i] = true;
                let candidate = self.closure(&seed);
                if (0..i).all(|j| candidate[j] == prefix[j]) {
                    next = Some(candidate);
                    break;
                }
            }
            match next {
                Some(c) => current = c,
                None => return out,
            }
        }
    }

    pub(crate) fn seed(&self, maps: impl IntoIterator<Item = (Obj, FinMap)>) -> Vec<bool> {
        let mut set = vec![false; self.atoms.len()];
        for a in maps {
            set[self.index[&a]] = true;
        }
        set
    }

    pub(crate) fn to_qspace(&self, base: &FinSet, set: &[bool]) -> QSpace {
        let mut admissible = vec![BTreeSet::new(); self.objects];
        for (i, (o, sigma)) in self.atoms.iter().enumerate() {
            if set[i] {
                admissible[o.0].insert(sigma.clone());
            }
        }
        QSpace::new(base.clone(), admissible)
    }
}

/// All quasispace structures on `base`, smallest first in lectic order.
pub fn enumerate_qspaces(site: &Site, base: &FinSet, bound: usize) -> Result<Vec<QSpace>, EnumerationError> {
    if base.len() > bound {
        return Err(EnumerationError::BoundExceeded {
            size: base.len(),
            bound,
        });
    }
    let theory = HornTheory::new(site, base.len());
    Ok(theory
        .all_closed()
        .iter()
        .map(|set| theory.to_qspace(base, set))
        .collect())
}

/// The smallest structure on `base` containing the given maps.
pub fn generate(site: &Site, base: &FinSet, maps: impl IntoIterator<Item = (Obj, FinMap)>) -> QSpace {
    let theory = HornTheory::new(site, base.len());
    let seed = theory.seed(maps);
    theory.to_qspace(base, &theory.closure(&seed))
}
