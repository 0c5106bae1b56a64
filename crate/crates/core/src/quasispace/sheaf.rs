//! The sheaf condition against the covering condition, for a subpresheaf of
//! `[u(-), S]`.

use serde::Serialize;

use super::{validate_qspace, QSpace};
use crate::fincat::{all_functions, FinMap};
use crate::site::Site;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheafComparison {
    pub is_sheaf: bool,
    pub is_qspace: bool,
    /// A cover and matching family without exactly one amalgamation.
    pub sheaf_witness: Option<String>,
}

impl SheafComparison {
    pub fn agree(&self) -> bool {
        self.is_sheaf == self.is_qspace
    }
}

/// Both conditions over the generating covers. `presheaf` is expected to
/// satisfy the presheaf condition.
pub fn sheaf_vs_covering(site: &Site, presheaf: &QSpace) -> SheafComparison {
    let sheaf_witness = sheaf_failure(site, presheaf);
    SheafComparison {
        is_sheaf: sheaf_witness.is_none(),
        is_qspace: validate_qspace(site, presheaf).is_empty(),
        sheaf_witness,
    }
}

fn sheaf_failure(site: &Site, x: &QSpace) -> Option<String> {
    let c = site.category();
    let u = site.functor();
    for cover in site.generators().families().iter() {
        let legs = cover.legs();
        let o = cover.codomain();
        // pairs of test arrows identified by the cover
        let mut relations = Vec::new();
        for d in c.objects() {
            for (a, &ka) in legs.iter().enumerate() {
                for (b, &kb) in legs.iter().enumerate() {
                    for xa in c.hom(d, c.source(ka)) {
                        for xb in c.hom(d, c.source(kb)) {
                            if c.comp(ka, xa) == c.comp(kb, xb) {
                                relations.push((a, u.on_morphism(xa), b, u.on_morphism(xb)));
                            }
                        }
                    }
                }
            }
        }
        let spaces: Vec<Vec<&FinMap>> = legs
            .iter()
            .map(|&k| x.admissible(c.source(k)).iter().collect())
            .collect();
        let mut failure = None;
        each_choice(&spaces, &mut |family: &[&FinMap]| {
            if failure.is_some() {
                return;
            }
            let matching = relations
                .iter()
                .all(|(a, xa, b, xb)| family[*a].compose(xa) == family[*b].compose(xb));
            if !matching {
                return;
            }
            let amalgamations = all_functions(u.size(o), x.size())
                .filter(|sigma| {
                    x.admits(o, sigma)
                        && legs
                            .iter()
                            .zip(family)
                            .all(|(&k, s)| sigma.compose(u.on_morphism(k)) == **s)
                })
                .count();
            if amalgamations != 1 {
                let shown: Vec<&[usize]> = family.iter().map(|m| m.images()).collect();
                failure = Some(format!(
                    "matching family {shown:?} on {} has {amalgamations} amalgamations",
                    cover.describe(c)
                ));
            }
        });
        if failure.is_some() {
            return failure;
        }
    }
    None
}

fn each_choice<'a>(spaces: &[Vec<&'a FinMap>], visit: &mut dyn FnMut(&[&'a FinMap])) {
    fn go<'a>(
        spaces: &[Vec<&'a FinMap>],
        acc: &mut Vec<&'a FinMap>,
        visit: &mut dyn FnMut(&[&'a FinMap]),
    ) {
        match spaces.split_first() {
            None => visit(acc),
            Some((first, rest)) => {
                for &m in first {
                    acc.push(m);
                    go(rest, acc, visit);
                    acc.pop();
                }
            }
        }
    }
    go(spaces, &mut Vec::new(), visit)
}
