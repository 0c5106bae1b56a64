//! The base category of finite sets.
//!
//! Sets are represented by their size `n` (elements `0..n`) and functions by
//! [`FinMap`]. Subobjects are normalized to subsets: every injection is
//! identified with its image.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::families::concrete::{self, ConcreteCategory, Sink};
use crate::families::Verdict;
use crate::fincat::{all_functions, function_count, pairing, product_projections, FinMap};

pub type Subset = BTreeSet<usize>;

pub fn jointly_surjective<'a>(n: usize, maps: impl IntoIterator<Item = &'a FinMap>) -> bool {
    let mut hit = vec![false; n];
    for m in maps {
        for &j in m.images() {
            hit[j] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

pub fn jointly_injective<'a>(n: usize, maps: impl IntoIterator<Item = &'a FinMap>) -> bool {
    let maps: Vec<&FinMap> = maps.into_iter().collect();
    let mut seen = BTreeSet::new();
    (0..n).all(|i| seen.insert(maps.iter().map(|m| m.apply(i)).collect::<Vec<_>>()))
}

/// A sink of functions into a set of size `codomain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    pub codomain: usize,
    pub legs: Vec<FinMap>,
}

impl SetFamily {
    pub fn new(codomain: usize, legs: Vec<FinMap>) -> Self {
        assert!(legs.iter().all(|l| l.cod() == codomain), "leg with the wrong codomain");
        Self { codomain, legs }
    }
}

pub fn is_strict_epi_setfamily(f: &SetFamily) -> bool {
    jointly_surjective(f.codomain, &f.legs)
}

/// The category of finite sets of size at most `max_size`, as a test universe.
#[derive(Debug, Clone)]
pub struct FinSets {
    sizes: Vec<usize>,
}

impl FinSets {
    pub fn up_to(max_size: usize) -> Self {
        Self {
            sizes: (0..=max_size).collect(),
        }
    }
}

impl ConcreteCategory for FinSets {
    type Object = usize;

    fn carrier(&self, x: &usize) -> usize {
        *x
    }

    fn is_morphism(&self, _: &usize, _: &usize, _: &FinMap) -> bool {
        true
    }

    fn test_objects(&self) -> Vec<usize> {
        self.sizes.clone()
    }
}

/// Strict epi decided by the general definition, test sets up to `|codomain| + 1`.
pub fn is_strict_epi_by_definition(f: &SetFamily) -> bool {
    let cat = FinSets::up_to(f.codomain + 1);
    let sink = Sink {
        codomain: f.codomain,
        legs: f.legs.iter().map(|l| (l.dom(), l.clone())).collect(),
    };
    concrete::is_strict_epi(&cat, &sink, usize::MAX)
        .expect("no leg limit")
        .holds()
}

/// `g_α = m ∘ h_α` with `m` the inclusion of `image`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub image: Subset,
    pub mono: FinMap,
    pub legs: Vec<FinMap>,
}

impl Factorization {
    fn from_image(image: Subset, codomain: usize, family: &[FinMap]) -> Self {
        let positions: Vec<usize> = image.iter().copied().collect();
        let mono = FinMap::new(positions.clone(), codomain);
        let legs = family
            .iter()
            .map(|g| {
                FinMap::new(
                    g.images()
                        .iter()
                        .map(|j| positions.binary_search(j).expect("leg lands in image"))
                        .collect(),
                    positions.len(),
                )
            })
            .collect();
        Self { image, mono, legs }
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }
}

pub fn f_factorize_image(f: &SetFamily) -> Factorization {
    let image: Subset = f.legs.iter().flat_map(|g| g.images().iter().copied()).collect();
    Factorization::from_image(image, f.codomain, &f.legs)
}

/// Factorization via kernel-pair coequalizers and a supremum of subobjects.
pub fn f_factorize_generic(f: &SetFamily) -> Factorization {
    let lattice = SubobjectLattice::new(f.codomain);
    let mut pieces = Vec::with_capacity(f.legs.len());
    for g in &f.legs {
        let (p1, p2) = kernel_pair(g);
        let quotient = coequalizer(&p1, &p2);
        // g is constant on the fibres of the quotient, so it descends uniquely
        let descended = FinMap::new(
            (0..quotient.cod())
                .map(|class| {
                    let rep = quotient.images().iter().position(|&c| c == class).unwrap();
                    g.apply(rep)
                })
                .collect(),
            f.codomain,
        );
        debug_assert!(descended.is_injective());
        pieces.push(descended.image());
    }
    Factorization::from_image(lattice.join(pieces.iter()), f.codomain, &f.legs)
}

/// The unique `k: H -> H'` with `m' ∘ k = m`, if it exists and is a bijection
/// compatible with the legs.
pub fn iso_over_codomain(a: &Factorization, b: &Factorization) -> Option<FinMap> {
    if a.mono.cod() != b.mono.cod() || a.legs.len() != b.legs.len() {
        return None;
    }
    let ks: Vec<FinMap> = all_functions(a.size(), b.size())
        .filter(|k| b.mono.compose(k) == a.mono)
        .collect();
    match ks.as_slice() {
        [k] if k.is_bijective()
            && a.legs.iter().zip(&b.legs).all(|(ha, hb)| k.compose(ha) == *hb) =>
        {
            Some(k.clone())
        }
        _ => None,
    }
}

/// Subsets of `0..n` ordered by inclusion.
#[derive(Debug, Clone, Copy)]
pub struct SubobjectLattice {
    size: usize,
}

impl SubobjectLattice {
    pub fn new(size: usize) -> Self {
        Self { size }
    }

    pub fn elements(&self) -> Vec<Subset> {
        crate::families::subsets_up_to(&(0..self.size).collect::<Vec<_>>(), self.size)
            .into_iter()
            .map(|v| v.into_iter().collect())
            .collect()
    }

    pub fn bottom(&self) -> Subset {
        Subset::new()
    }

    pub fn top(&self) -> Subset {
        (0..self.size).collect()
    }

    pub fn join<'a>(&self, parts: impl IntoIterator<Item = &'a Subset>) -> Subset {
        parts.into_iter().flatten().copied().collect()
    }

    pub fn meet<'a>(&self, parts: impl IntoIterator<Item = &'a Subset>) -> Subset {
        parts
            .into_iter()
            .fold(self.top(), |acc, s| acc.intersection(s).copied().collect())
    }
}

pub fn kernel_pair(g: &FinMap) -> (FinMap, FinMap) {
    let n = g.dom();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| g.apply(i) == g.apply(j))
        .collect();
    (
        FinMap::new(pairs.iter().map(|p| p.0).collect(), n),
        FinMap::new(pairs.iter().map(|p| p.1).collect(), n),
    )
}

/// The quotient map of `B` by the equivalence generated by `f(a) ~ g(a)`.
/// Classes are numbered in order of their least element.
pub fn coequalizer(f: &FinMap, g: &FinMap) -> FinMap {
    let n = f.cod();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..f.dom() {
        let (x, y) = (find(&mut parent, f.apply(a)), find(&mut parent, g.apply(a)));
        let (lo, hi) = (x.min(y), x.max(y));
        parent[hi] = lo;
    }
    let mut class_of_root = vec![usize::MAX; n];
    let mut count = 0;
    let mut images = Vec::with_capacity(n);
    for b in 0..n {
        let r = find(&mut parent, b);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = count;
            count += 1;
        }
        images.push(class_of_root[r]);
    }
    FinMap::new(images, count)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("maps of the diagram do not share the required ends")]
    Malformed,
}

/// Finite diagrams whose limit or colimit is computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagram {
    Terminal,
    Product(usize, usize),
    /// `f: A -> C`, `g: B -> C`.
    Pullback(FinMap, FinMap),
    /// Parallel pair `A ⇉ B`.
    Equalizer(FinMap, FinMap),
    Initial,
    Coproduct(usize, usize),
    /// Parallel pair `A ⇉ B`.
    Coequalizer(FinMap, FinMap),
}

/// A limit cone (maps out of `object`) or colimit cocone (maps into it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universal {
    pub object: usize,
    pub maps: Vec<FinMap>,
}

impl Diagram {
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Diagram::Terminal | Diagram::Product(..) | Diagram::Pullback(..) | Diagram::Equalizer(..)
        )
    }

    fn check(&self) -> Result<(), DiagramError> {
        let ok = match self {
            Diagram::Pullback(f, g) => f.cod() == g.cod(),
            Diagram::Equalizer(f, g) | Diagram::Coequalizer(f, g) => {
                f.dom() == g.dom() && f.cod() == g.cod()
            }
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(DiagramError::Malformed)
        }
    }

    /// Sizes of the objects the (co)cone legs run to (or from).
    fn vertices(&self) -> Vec<usize> {
        match self {
            Diagram::Terminal | Diagram::Initial => vec![],
            Diagram::Product(a, b) | Diagram::Coproduct(a, b) => vec![*a, *b],
            Diagram::Pullback(f, g) => vec![f.dom(), g.dom()],
            Diagram::Equalizer(f, _) => vec![f.dom()],
            Diagram::Coequalizer(f, _) => vec![f.cod()],
        }
    }

    /// Is a tuple of legs a (co)cone over the diagram?
    fn commutes(&self, legs: &[FinMap]) -> bool {
        match self {
            Diagram::Pullback(f, g) => f.compose(&legs[0]) == g.compose(&legs[1]),
            Diagram::Equalizer(f, g) => f.compose(&legs[0]) == g.compose(&legs[0]),
            Diagram::Coequalizer(f, g) => legs[0].compose(f) == legs[0].compose(g),
            _ => true,
        }
    }
}

pub fn limits_colimits(d: &Diagram) -> Result<Universal, DiagramError> {
    d.check()?;
    Ok(match d {
        Diagram::Terminal => Universal {
            object: 1,
            maps: vec![],
        },
        Diagram::Initial => Universal {
            object: 0,
            maps: vec![],
        },
        Diagram::Product(a, b) => {
            let (p1, p2) = product_projections(*a, *b);
            Universal {
                object: a * b,
                maps: vec![p1, p2],
            }
        }
        Diagram::Pullback(f, g) => {
            let pairs: Vec<(usize, usize)> = (0..f.dom())
                .flat_map(|i| (0..g.dom()).map(move |j| (i, j)))
                .filter(|&(i, j)| f.apply(i) == g.apply(j))
                .collect();
            Universal {
                object: pairs.len(),
                maps: vec![
                    FinMap::new(pairs.iter().map(|p| p.0).collect(), f.dom()),
                    FinMap::new(pairs.iter().map(|p| p.1).collect(), g.dom()),
                ],
            }
        }
        Diagram::Equalizer(f, g) => {
            let kept: Vec<usize> = (0..f.dom()).filter(|&i| f.apply(i) == g.apply(i)).collect();
            Universal {
                object: kept.len(),
                maps: vec![FinMap::new(kept, f.dom())],
            }
        }
        Diagram::Coproduct(a, b) => Universal {
            object: a + b,
            maps: vec![
                FinMap::new((0..*a).collect(), a + b),
                FinMap::new((*a..a + b).collect(), a + b),
            ],
        },
        Diagram::Coequalizer(f, g) => {
            let q = coequalizer(f, g);
            Universal {
                object: q.cod(),
                maps: vec![q],
            }
        }
    })
}

/// Checks the universal property against every test set of size `≤ bound`.
pub fn verify_universal(d: &Diagram, u: &Universal, bound: usize) -> Verdict {
    let vertices = d.vertices();
    let limit = d.is_limit();
    if u.maps.len() != vertices.len() || !d.commutes(&u.maps) {
        return Verdict::Fails("the universal (co)cone does not commute".into());
    }
    for z in 0..=bound {
        let spaces: Vec<Vec<FinMap>> = vertices
            .iter()
            .map(|&v| {
                if limit {
                    all_functions(z, v).collect()
                } else {
                    all_functions(v, z).collect()
                }
            })
            .collect();
        let mut failure = None;
        each_tuple(&spaces, &mut |legs: &[FinMap]| {
            if failure.is_some() || !d.commutes(legs) {
                return;
            }
            let mediating = if limit {
                all_functions(z, u.object)
                    .filter(|k| u.maps.iter().zip(legs).all(|(p, l)| p.compose(k) == *l))
                    .count()
            } else {
                all_functions(u.object, z)
                    .filter(|k| u.maps.iter().zip(legs).all(|(i, l)| k.compose(i) == *l))
                    .count()
            };
            if mediating != 1 {
                failure = Some(format!(
                    "a (co)cone at a set of size {z} has {mediating} mediating maps"
                ));
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

/// The function set `T^S` (elements in code order) and evaluation `T^S × S -> T`.
pub fn exponential_set(s: usize, t: usize) -> (usize, FinMap) {
    let size = function_count(s, t).expect("function space too large");
    let eval = FinMap::new(
        (0..size * s)
            .map(|k| FinMap::from_code(k / s.max(1), s, t).apply(k % s))
            .collect(),
        t,
    );
    (size, eval)
}

/// The transpose `Z -> T^S` of `f: Z × S -> T`.
pub fn curry(f: &FinMap, z: usize, s: usize) -> FinMap {
    let t = f.cod();
    let size = function_count(s, t).expect("function space too large");
    FinMap::new(
        (0..z)
            .map(|i| FinMap::new((0..s).map(|j| f.apply(i * s + j)).collect(), t).code())
            .collect(),
        size,
    )
}

/// The transpose `Z × S -> T` of `g: Z -> T^S`.
pub fn uncurry(g: &FinMap, s: usize, t: usize) -> FinMap {
    let z = g.dom();
    FinMap::new(
        (0..z * s)
            .map(|k| FinMap::from_code(g.apply(k / s), s, t).apply(k % s))
            .collect(),
        t,
    )
}

/// `|[Z×S, T]| = |[Z, T^S]|` and the transposes are mutually inverse, for `Z ≤ bound`.
pub fn verify_exponential_set(s: usize, t: usize, bound: usize) -> Verdict {
    let (e, eval) = exponential_set(s, t);
    for z in 0..=bound {
        for f in all_functions(z * s, t) {
            let g = curry(&f, z, s);
            let (pz, ps) = product_projections(z, s);
            let via_eval = eval.compose(&pairing(&g.compose(&pz), &ps));
            if uncurry(&g, s, t) != f || via_eval != f {
                return Verdict::Fails(format!("transpose round trip fails at |Z| = {z}"));
            }
        }
        let lhs = function_count(z * s, t);
        let rhs = function_count(z, e);
        if lhs != rhs {
            return Verdict::Fails(format!("hom-set sizes differ at |Z| = {z}: {lhs:?} vs {rhs:?}"));
        }
    }
    Verdict::Holds
}

/// `Ω = {0, 1}` with the point `t = 1`.
pub fn omega_set() -> (usize, FinMap) {
    (2, FinMap::new(vec![1], 2))
}

pub fn classify(n: usize, sub: &Subset) -> FinMap {
    FinMap::new((0..n).map(|i| usize::from(sub.contains(&i))).collect(), 2)
}

/// Pulls `t` back along `chi: S -> Ω`.
pub fn classified_subset(chi: &FinMap) -> Subset {
    let (_, t) = omega_set();
    let pb = limits_colimits(&Diagram::Pullback(chi.clone(), t)).expect("well-typed");
    pb.maps[0].image()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(n: usize, i: usize) -> FinMap {
        FinMap::new(vec![i], n)
    }

    #[test]
    fn strict_epi_is_joint_surjectivity() {
        let two_points = SetFamily::new(2, vec![point(2, 0), point(2, 1)]);
        assert!(is_strict_epi_setfamily(&two_points));
        assert!(is_strict_epi_setfamily(&SetFamily::new(0, vec![])));
        assert!(!is_strict_epi_setfamily(&SetFamily::new(1, vec![])));
        assert!(!is_strict_epi_setfamily(&SetFamily::new(2, vec![point(2, 0)])));
    }

    #[test]
    fn strict_epi_agrees_with_definition_on_small_families() {
        for cod in 0..=2 {
            for d1 in 0..=2 {
                for g in all_functions(d1, cod) {
                    let single = SetFamily::new(cod, vec![g.clone()]);
                    assert_eq!(
                        is_strict_epi_setfamily(&single),
                        is_strict_epi_by_definition(&single),
                        "{single:?}"
                    );
                    for h in all_functions(1, cod) {
                        let pair = SetFamily::new(cod, vec![g.clone(), h]);
                        assert_eq!(
                            is_strict_epi_setfamily(&pair),
                            is_strict_epi_by_definition(&pair)
                        );
                    }
                }
            }
            let empty = SetFamily::new(cod, vec![]);
            assert_eq!(is_strict_epi_setfamily(&empty), is_strict_epi_by_definition(&empty));
        }
    }

    #[test]
    fn image_factorization_examples() {
        let f = SetFamily::new(3, vec![point(3, 0), point(3, 1)]);
        let fac = f_factorize_image(&f);
        assert_eq!(fac.image, Subset::from([0, 1]));
        assert!(fac.mono.is_injective());
        assert!(jointly_surjective(fac.size(), &fac.legs));

        assert!(f_factorize_image(&SetFamily::new(2, vec![])).image.is_empty());
        let onto = SetFamily::new(2, vec![point(2, 0), point(2, 1)]);
        assert!(f_factorize_image(&onto).mono.is_bijective());
    }

    #[test]
    fn generic_factorization_collapses_kernel() {
        let f = SetFamily::new(1, vec![FinMap::new(vec![0, 0], 1)]);
        let fac = f_factorize_generic(&f);
        assert_eq!(fac.image, Subset::from([0]));
        assert!(f_factorize_generic(&SetFamily::new(3, vec![])).image.is_empty());
    }

    #[test]
    fn limits_examples() {
        let p = limits_colimits(&Diagram::Product(2, 2)).unwrap();
        assert_eq!(p.object, 4);
        let pb = limits_colimits(&Diagram::Pullback(point(2, 0), point(2, 1))).unwrap();
        assert_eq!(pb.object, 0);
        let q = limits_colimits(&Diagram::Coequalizer(point(2, 0), point(2, 1))).unwrap();
        assert_eq!(q.object, 1);
        assert_eq!(
            limits_colimits(&Diagram::Equalizer(point(2, 0), point(3, 0))),
            Err(DiagramError::Malformed)
        );
    }

    #[test]
    fn exponential_counts() {
        assert_eq!(exponential_set(2, 2).0, 4);
        assert_eq!(exponential_set(0, 3).0, 1);
        assert!(verify_exponential_set(2, 2, 3).holds());
    }

    #[test]
    fn classifier_round_trip() {
        let (_, t) = omega_set();
        assert_eq!(t.images(), &[1]);
        assert_eq!(classify(3, &Subset::new()).images(), &[0, 0, 0]);
        assert_eq!(classify(3, &(0..3).collect()).images(), &[1, 1, 1]);
    }
}
