use std::collections::BTreeSet;

use proptest::prelude::*;
use qtl_core::assoc::{sharp, TopologyPair};
use qtl_core::families::concrete::{is_final, is_initial, is_strict_epi, is_surjective, ConcreteCategory, Cone, Sink};
use qtl_core::families::{check_property, Collection, Family, Property};
use qtl_core::fincat::{opposite, validate_category, FinCat, FinMap, FinSet, Obj};
use qtl_core::fixtures;
use qtl_core::fsetbase::{
    f_factorize_generic, f_factorize_image, iso_over_codomain, jointly_surjective, limits_colimits, Diagram, SetFamily,
};
use qtl_core::quasispace::{
    generate, initial_structure, is_morphism, validate_against, validate_qspace, QCategory, QSpace,
};
use qtl_core::site::{saturate, validate_pretopology, Coverage, Site};
use qtl_core::strictq::{coreflection_s, is_strict};

fn map(dom: usize, cod: usize) -> impl Strategy<Value = FinMap> {
    proptest::collection::vec(0..cod.max(1), dom).prop_map(move |images| FinMap::new(images, cod))
}

/// A codomain of size 1..=4 with up to four legs out of sets of size <= 3.
fn set_family() -> impl Strategy<Value = SetFamily> {
    (1usize..=4).prop_flat_map(|cod| {
        proptest::collection::vec((0usize..=3).prop_flat_map(move |d| map(d, cod)), 0..=4)
            .prop_map(move |legs| SetFamily::new(cod, legs))
    })
}

/// Seeds for `generate`: random maps `uC -> S` for random objects `C`.
fn structure(site: &Site, n: usize) -> impl Strategy<Value = QSpace> {
    let objects: Vec<(Obj, usize)> = site.category().objects().map(|o| (o, site.size(o))).collect();
    let site = site.clone();
    let seed = proptest::sample::select(objects).prop_flat_map(move |(o, d)| map(d, n).prop_map(move |m| (o, m)));
    proptest::collection::vec(seed, 0..=3)
        .prop_map(move |seeds| generate(&site, &FinSet::range(n), seeds.into_iter().filter(|(_, m)| n > 0 || m.dom() == 0)))
}

fn preorder() -> impl Strategy<Value = FinCat> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=6).prop_map(move |pairs| {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let leq: Vec<(String, String)> = pairs.iter().map(|&(a, b)| (names[a].clone(), names[b].clone())).collect();
            FinCat::from_preorder(&names, &leq).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preorders_are_categories_and_opposite_is_an_involution(c in preorder()) {
        prop_assert!(validate_category(&c).is_empty());
        let op = opposite(&c).unwrap();
        prop_assert!(validate_category(&op).is_empty());
        prop_assert_eq!(opposite(&op).unwrap(), c);
    }

    #[test]
    fn pulling_back_a_surjective_family_keeps_it_surjective(f in set_family(), dom in 0usize..=3, seed in any::<u64>()) {
        let images: Vec<usize> = (0..dom).map(|i| (seed as usize >> (2 * i)) % f.codomain).collect();
        let g = FinMap::new(images, f.codomain);
        let pulled: Vec<FinMap> = f
            .legs
            .iter()
            .map(|leg| limits_colimits(&Diagram::Pullback(leg.clone(), g.clone())).unwrap().maps[1].clone())
            .collect();
        if jointly_surjective(f.codomain, &f.legs) {
            prop_assert!(jointly_surjective(dom, &pulled));
        }
    }

    #[test]
    fn surjective_families_compose(f in set_family()) {
        // cover each leg's domain by its points
        let points: Vec<FinMap> = f
            .legs
            .iter()
            .flat_map(|leg| (0..leg.dom()).map(move |i| leg.compose(&FinMap::constant(1, leg.dom(), i))))
            .collect();
        prop_assert_eq!(jointly_surjective(f.codomain, &points), jointly_surjective(f.codomain, &f.legs));
        // or by one surjection from a bigger set
        let wrapped: Vec<FinMap> = f
            .legs
            .iter()
            .map(|leg| match leg.dom() {
                0 => leg.clone(),
                d => leg.compose(&FinMap::new((0..=d).map(|i| i % d).collect(), d)),
            })
            .collect();
        prop_assert_eq!(jointly_surjective(f.codomain, &wrapped), jointly_surjective(f.codomain, &f.legs));
    }

    #[test]
    fn image_and_generic_factorizations_agree(f in set_family()) {
        let (a, b) = (f_factorize_image(&f), f_factorize_generic(&f));
        prop_assert!(iso_over_codomain(&a, &b).is_some());
        prop_assert!(a.mono.is_injective());
        for (leg, h) in f.legs.iter().zip(&a.legs) {
            prop_assert_eq!(&a.mono.compose(h), leg);
        }
        prop_assert!(jointly_surjective(a.size(), &a.legs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strict_epi_is_final_and_surjective_with_three_legs(
        seeds in proptest::collection::vec((any::<usize>(), any::<usize>()), 1..=3),
        target in any::<usize>(),
    ) {
        let site = fixtures::f3().site;
        let cat = QCategory::new(&site, 2).unwrap();
        let objects = cat.universe();
        let x = &objects[target % objects.len()];
        let legs: Vec<(QSpace, FinMap)> = seeds
            .iter()
            .filter_map(|&(o, k)| {
                let xa = &objects[o % objects.len()];
                let homs = cat.hom(xa, x);
                (!homs.is_empty()).then(|| (xa.clone(), homs[k % homs.len()].clone()))
            })
            .collect();
        let sink = Sink { codomain: x.clone(), legs };
        let strict = is_strict_epi(&cat, &sink, 3).unwrap().holds();
        prop_assert_eq!(strict, is_final(&cat, &sink).holds() && is_surjective(&cat, &sink));
    }

    #[test]
    fn initial_structures_are_initial(
        n in 0usize..=2,
        seeds in proptest::collection::vec((any::<usize>(), any::<u64>()), 0..=3),
    ) {
        let site = fixtures::f3().site;
        let cat = QCategory::new(&site, 2).unwrap();
        let objects = cat.universe();
        let legs: Vec<(QSpace, FinMap)> = seeds
            .iter()
            .filter_map(|&(o, bits)| {
                let y = &objects[o % objects.len()];
                (y.size() > 0 || n == 0).then(|| {
                    let images = (0..n).map(|i| (bits as usize >> i) % y.size().max(1)).collect();
                    (y.clone(), FinMap::new(images, y.size()))
                })
            })
            .collect();
        let source = initial_structure(&site, &FinSet::range(n), &legs);
        prop_assert!(validate_qspace(&site, &source).is_empty());
        for (y, f) in &legs {
            prop_assert!(is_morphism(&source, y, f));
        }
        let cone = Cone { source, legs };
        prop_assert!(is_initial(&cat, &cone).holds());
    }

    #[test]
    fn associated_structure_is_fine_and_idempotent(q in structure(&fixtures::f2().site, 2)) {
        let pair = TopologyPair::new(fixtures::f2().site, fixtures::f1().site).unwrap();
        let s = sharp(&pair, &q).unwrap();
        prop_assert!(validate_qspace(pair.fine(), &s).is_empty());
        prop_assert!(q.is_finer_than(&s));
        prop_assert_eq!(sharp(&pair, &s).unwrap(), s);
    }

    #[test]
    fn coreflection_is_strict_and_includes(q in structure(&fixtures::f3().site, 3)) {
        let c = coreflection_s(&q);
        prop_assert!(is_strict(&c.space));
        prop_assert!(c.inclusion.is_injective());
        prop_assert!(is_morphism(&c.space, &q, &c.inclusion));
        if is_strict(&q) {
            prop_assert_eq!(c.space.size(), q.size());
        }
    }

    #[test]
    fn covering_condition_agrees_with_the_saturation(q in structure(&fixtures::f2().site, 2)) {
        // structures generated over the trivial topology, judged on the two-point site
        let f1 = fixtures::f1().site;
        let by_generators = validate_against(&f1, f1.generators().families(), &q).is_empty();
        prop_assert_eq!(by_generators, validate_qspace(&f1, &q).is_empty());
    }

    #[test]
    fn saturation_of_a_pretopology_is_a_topology(c in preorder(), picks in proptest::collection::vec(any::<usize>(), 0..=4)) {
        // identities, all arrows into each object, and a few single arrows
        let mut families: Vec<Family> = c.objects().map(|o| Family::singleton(&c, c.identity(o))).collect();
        families.extend(c.objects().map(|o| Family::new(&c, o, c.arrows_into(o)).unwrap()));
        let arrows: Vec<_> = c.morphisms().collect();
        for p in picks {
            families.push(Family::singleton(&c, arrows[p % arrows.len()]));
        }
        let generators = Coverage::generated_by(Collection::from_families(&c, families));
        if validate_pretopology(&c, &generators).is_valid() {
            let t = saturate(&c, &generators).unwrap();
            for p in [Property::Saturated, Property::Isomorphisms, Property::Composition, Property::Universal] {
                prop_assert!(check_property(&c, t.families(), p, c.morphism_count()).holds());
            }
            let sizes: BTreeSet<usize> = t.families().iter().map(Family::len).collect();
            prop_assert!(!sizes.is_empty());
        }
    }
}
