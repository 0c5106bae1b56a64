use super::*;
use crate::fixtures;

fn obj(site: &Site, name: &str) -> Obj {
    site.category().object(name).unwrap()
}

/// On F1 a structure is determined by the admissible points `A`.
fn with_points(site: &Site, n: usize, points: &[usize]) -> QSpace {
    let p = obj(site, "P");
    generate(
        site,
        &FinSet::range(n),
        points.iter().map(|&a| (p, FinMap::constant(1, n, a))),
    )
}

/// Brute force: every subset of all maps `uC -> S`, kept when it validates.
fn oracle_structures(site: &Site, n: usize) -> BTreeSet<QSpace> {
    let c = site.category();
    let atoms: Vec<(Obj, FinMap)> = c
        .objects()
        .flat_map(|o| all_functions(site.size(o), n).map(move |m| (o, m)))
        .collect();
    assert!(atoms.len() < 20, "oracle would be too slow");
    (0u32..1 << atoms.len())
        .map(|bits| {
            let mut adm = vec![BTreeSet::new(); c.object_count()];
            for (i, (o, m)) in atoms.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    adm[o.0].insert(m.clone());
                }
            }
            QSpace::new(FinSet::range(n), adm)
        })
        .filter(|q| validate_qspace(site, q).is_empty())
        .collect()
}

#[test]
fn enumeration_matches_the_brute_force_oracle() {
    for (name, n, expected) in [("f1", 2, 4), ("f3", 1, 3), ("f3", 2, 21), ("f1", 0, 1), ("empty-cover", 2, 4)] {
        let inst = fixtures::load(name).unwrap();
        let site = &inst.site;
        let listed = enumerate_qspaces(site, &FinSet::range(n), 3).unwrap();
        let set: BTreeSet<QSpace> = listed.iter().cloned().collect();
        assert_eq!(set.len(), listed.len(), "{name}: duplicates");
        assert_eq!(set, oracle_structures(site, n), "{name} |S| = {n}");
        assert_eq!(listed.len(), expected, "{name} |S| = {n}");
    }
}

#[test]
fn graph_fiber_over_three_elements() {
    // (A, R ⊆ A×A) summed over A ⊆ 3
    let oracle: usize = (0..=3u32).map(|k| [1, 3, 3, 1][k as usize] * (1usize << (k * k))).sum();
    let site = fixtures::f3().site;
    assert_eq!(enumerate_qspaces(&site, &FinSet::range(3), 3).unwrap().len(), oracle);
    assert_eq!(oracle, 567);
}

#[test]
fn enumeration_refuses_large_bases() {
    let site = fixtures::f1().site;
    assert_eq!(
        enumerate_qspaces(&site, &FinSet::range(3), 2),
        Err(EnumerationError::BoundExceeded { size: 3, bound: 2 })
    );
}

#[test]
fn two_point_structures_are_subsets() {
    let site = fixtures::f1().site;
    let (p, l) = (obj(&site, "P"), obj(&site, "L"));
    for q in enumerate_qspaces(&site, &FinSet::range(2), 2).unwrap() {
        let a: BTreeSet<usize> = q.admissible(p).iter().map(|m| m.apply(0)).collect();
        let expected: BTreeSet<FinMap> = all_functions(2, 2)
            .filter(|m| m.image().is_subset(&a))
            .collect();
        assert_eq!(q.admissible(l), &expected);
    }
}

#[test]
fn validation_examples() {
    let site = fixtures::f1().site;
    let top = top_structure(&site, &FinSet::range(2));
    assert!(validate_qspace(&site, &top).is_empty());
    let mut adm = vec![BTreeSet::new(); 2];
    adm[obj(&site, "L").0].insert(FinMap::new(vec![0, 1], 2));
    let bad = QSpace::new(FinSet::range(2), adm);
    let v = validate_qspace(&site, &bad);
    assert!(matches!(v[0], QSpaceViolation::Presheaf { .. }), "{v:?}");
}

#[test]
fn instance_structures_validate() {
    let inst = fixtures::f1();
    let half = inst.qspace("half").unwrap();
    assert!(half.same_structure(&with_points(&inst.site, 2, &[0])));
    assert!(inst.qspace("full").unwrap().same_structure(&top_structure(&inst.site, &FinSet::range(2))));
}

#[test]
fn representables() {
    let site = fixtures::f1().site;
    let (p, l) = (obj(&site, "P"), obj(&site, "L"));
    let eps_l = yoneda_structure(&site, l);
    assert!(eps_l.same_structure(&top_structure(&site, site.functor().on_object(l))));
    let eps_p = yoneda_structure(&site, p);
    assert!(eps_p.admits(p, &FinMap::identity(1)));
    // only the identity lifts to an arrow L -> L; the rest is glued along {a, b}
    assert_eq!(yoneda_lifting_structure(&site, l).admissible(l).len(), 1);
}

#[test]
fn representables_are_generated_by_lifts() {
    for (name, _) in fixtures::ALL {
        let site = fixtures::load(name).unwrap().site;
        for k in site.category().objects() {
            let lifts = yoneda_lifting_structure(&site, k);
            let generated = generate(&site, lifts.base(), lifts.all_admissible().map(|(o, m)| (o, m.clone())));
            assert!(generated.same_structure(&yoneda_structure(&site, k)), "{name}");
        }
    }
}

#[test]
fn representables_classify_admissible_maps() {
    for name in ["f1", "f2", "f3", "diamond", "empty-cover", "void", "half"] {
        let inst = fixtures::load(name).unwrap();
        let site = &inst.site;
        let cat = QCategory::new(site, 2).unwrap();
        for k in site.category().objects() {
            let eps = yoneda_structure(site, k);
            assert!(validate_qspace(site, &eps).is_empty(), "{name}");
            for x in cat.universe() {
                let homs: BTreeSet<FinMap> = hom_q(&eps, x).into_iter().collect();
                assert_eq!(&homs, x.admissible(k), "{name} at {}", site.category().object_name(k));
            }
        }
    }
}

#[test]
fn admissible_maps_form_a_final_family() {
    use crate::families::concrete::{is_final, Sink};
    for name in ["f1", "f3", "empty-cover"] {
        let inst = fixtures::load(name).unwrap();
        let site = &inst.site;
        let cat = QCategory::new(site, 2).unwrap();
        for x in cat.universe() {
            let legs: Vec<(QSpace, FinMap)> = x
                .all_admissible()
                .map(|(o, s)| (yoneda_structure(site, o), s.clone()))
                .collect();
            let sink = Sink {
                codomain: x.clone(),
                legs: legs.clone(),
            };
            assert!(is_final(&cat, &sink).holds(), "{name}: {}", x.describe(site));
            assert!(final_structure(site, x.base(), &legs).same_structure(x));
        }
    }
}

#[test]
fn hom_examples() {
    let site = fixtures::f1().site;
    let one = top_structure(&site, &FinSet::range(1));
    let bottom = bottom_structure(&site, &FinSet::range(2));
    for q in QCategory::new(&site, 2).unwrap().universe() {
        assert_eq!(hom_q(q, &one).len(), 1);
        assert_eq!(hom_q(&bottom, q).len(), crate::fincat::function_count(2, q.size()).unwrap());
    }
    for a in [vec![], vec![0], vec![1], vec![0, 1]] {
        for b in [vec![], vec![0], vec![0, 1]] {
            let (x, y) = (with_points(&site, 2, &a), with_points(&site, 2, &b));
            let expected: Vec<FinMap> = all_functions(2, 2)
                .filter(|phi| a.iter().all(|&s| b.contains(&phi.apply(s))))
                .collect();
            assert_eq!(hom_q(&x, &y), expected);
        }
    }
}

#[test]
fn initial_and_final_examples() {
    let site = fixtures::f1().site;
    let p = obj(&site, "P");
    let two = FinSet::range(2);
    assert!(initial_structure(&site, &two, &[]).same_structure(&top_structure(&site, &two)));
    assert!(final_structure(&site, &two, &[]).same_structure(&bottom_structure(&site, &two)));

    let a0 = with_points(&site, 2, &[0]);
    let id = FinMap::identity(2);
    assert!(initial_structure(&site, &two, &[(a0.clone(), id.clone())]).same_structure(&a0));
    assert!(final_structure(&site, &two, &[(a0.clone(), id)]).same_structure(&a0));

    let prod = limits_colimits_q(&site, &QDiagram::Product(a0.clone(), a0.clone())).unwrap();
    assert_eq!(prod.object.size(), 4);
    let pts: Vec<usize> = prod.object.admissible(p).iter().map(|m| m.apply(0)).collect();
    assert_eq!(pts, vec![0]);

    let quotient = final_structure(&site, &FinSet::range(1), &[(a0, FinMap::new(vec![0, 0], 1))]);
    assert!(quotient.admits(p, &FinMap::new(vec![0], 1)));
}

#[test]
fn limits_and_colimits() {
    let site = fixtures::f1().site;
    let cat = QCategory::new(&site, 2).unwrap();
    let t = limits_colimits_q(&site, &QDiagram::Terminal).unwrap();
    assert!(t.object.same_structure(&top_structure(&site, &FinSet::range(1))));
    let i = limits_colimits_q(&site, &QDiagram::Initial).unwrap();
    assert!(i.object.same_structure(&bottom_structure(&site, &FinSet::range(0))));

    // two subsets of a 2-element space, as sub-quasispaces, meet in their intersection
    let full = top_structure(&site, &FinSet::range(2));
    let left = with_points(&site, 1, &[0]);
    let pb = limits_colimits_q(
        &site,
        &QDiagram::Pullback {
            left: (left.clone(), FinMap::new(vec![0], 2)),
            right: (left, FinMap::new(vec![1], 2)),
            apex: full.clone(),
        },
    )
    .unwrap();
    assert_eq!(pb.object.size(), 0);

    let a0 = with_points(&site, 2, &[0]);
    let diagrams = [
        QDiagram::Terminal,
        QDiagram::Initial,
        QDiagram::Product(a0.clone(), full.clone()),
        QDiagram::Coproduct(a0.clone(), full.clone()),
        QDiagram::Equalizer {
            source: full.clone(),
            target: full.clone(),
            f: FinMap::identity(2),
            g: FinMap::new(vec![1, 0], 2),
        },
        QDiagram::Coequalizer {
            source: a0.clone(),
            target: full.clone(),
            f: FinMap::identity(2),
            g: FinMap::new(vec![0, 0], 2),
        },
    ];
    for d in &diagrams {
        let u = limits_colimits_q(&site, d).unwrap();
        assert!(verify_universal_q(&cat, d, &u).holds(), "{d:?}");
    }
    let malformed = QDiagram::Equalizer {
        source: a0,
        target: bottom_structure(&site, &FinSet::range(2)),
        f: FinMap::identity(2),
        g: FinMap::identity(2),
    };
    assert!(limits_colimits_q(&site, &malformed).is_err());
}

#[test]
fn f_factorization_examples() {
    let site = fixtures::f1().site;
    let full = top_structure(&site, &FinSet::range(2));
    let pt = top_structure(&site, &FinSet::range(1));
    let two_points = f_factorize_q(
        &site,
        &full,
        &[(pt.clone(), FinMap::new(vec![0], 2)), (pt.clone(), FinMap::new(vec![1], 2))],
    );
    assert!(two_points.mono.is_bijective());
    // joined along the cover, the two points give back every map
    assert!(two_points.image.same_structure(&full));

    let empty = f_factorize_q(&site, &full, &[]);
    assert_eq!(empty.image.size(), 0);
    assert!(empty.image.same_structure(&bottom_structure(&site, &FinSet::range(0))));

    let one = f_factorize_q(&site, &full, &[(pt, FinMap::new(vec![1], 2))]);
    assert_eq!(one.mono.images(), &[1]);
}

#[test]
fn exponential_closed_form_on_two_points() {
    let site = fixtures::f1().site;
    let cat = QCategory::new(&site, 2).unwrap();
    let p = obj(&site, "P");
    let a0 = with_points(&site, 2, &[0]);
    let e = exponential_q(&site, &a0, &a0, &cat).unwrap();
    assert_eq!(e.functions.len(), 4);
    let fixing: BTreeSet<usize> = e
        .space
        .admissible(p)
        .iter()
        .map(|m| m.apply(0))
        .collect();
    let expected: BTreeSet<usize> = (0..4).filter(|&k| e.functions[k].apply(0) == 0).collect();
    assert_eq!(fixing, expected);
    assert_eq!(expected.len(), 2);

    let one = top_structure(&site, &FinSet::range(1));
    let to_one = exponential_q(&site, &a0, &one, &cat).unwrap();
    assert!(to_one.space.same_structure(&one));

    let nothing = bottom_structure(&site, &FinSet::range(0));
    let from_nothing = exponential_q(&site, &nothing, &a0, &cat).unwrap();
    assert_eq!(from_nothing.functions.len(), 1);
    assert!(from_nothing.space.same_structure(&one));
}

#[test]
fn exponentials_with_empty_covers_shrink_the_carrier() {
    let site = fixtures::load("empty-cover").unwrap().site;
    let cat = QCategory::new(&site, 2).unwrap();
    for x in cat.universe() {
        for y in cat.universe() {
            let e = exponential_q(&site, x, y, &cat).unwrap();
            assert!(e.functions.len() <= crate::fincat::function_count(x.size(), y.size()).unwrap());
        }
    }
}

#[test]
fn a_wrong_exponential_is_caught() {
    let site = fixtures::f1().site;
    let cat = QCategory::new(&site, 2).unwrap();
    let a0 = with_points(&site, 2, &[0]);
    let mut e = exponential::exponential_unchecked(&site, &a0, &a0);
    e.space = top_structure(&site, e.space.base());
    assert!(!verify_exponential(&site, &a0, &a0, &e, &cat).holds());
}

#[test]
fn classifier_examples() {
    let site = fixtures::f1().site;
    let a0 = with_points(&site, 2, &[0]);
    let chi = classify_strict_sub(&site, &a0, &a0, &FinMap::identity(2)).unwrap();
    assert_eq!(chi.images(), &[1, 1]);

    let (omega, _) = omega_q(&site);
    let mut strict_subs = 0;
    for keep in crate::families::subsets_up_to(&[0usize, 1], 2) {
        let inc = FinMap::new(keep.clone(), 2);
        let sub = initial_structure(&site, &a0.base().subset(&keep), &[(a0.clone(), inc.clone())]);
        let chi = classify_strict_sub(&site, &a0, &sub, &inc).unwrap();
        let (back, back_inc) = pull_back_truth(&site, &a0, &chi);
        assert!(back.same_structure(&sub));
        assert_eq!(back_inc, inc);
        strict_subs += 1;
    }
    assert_eq!(strict_subs, hom_q(&a0, &omega).len());
    assert_eq!(strict_subs, 4);

    let bare = QSpace::new(FinSet::range(1), vec![BTreeSet::new(); 2]);
    assert!(matches!(
        classify_strict_sub(&site, &a0, &bare, &FinMap::new(vec![0], 2)),
        Err(ClassifierError::NotInitial(_))
    ));
    assert_eq!(
        classify_strict_sub(&site, &a0, &a0, &FinMap::new(vec![0, 0], 2)),
        Err(ClassifierError::NotInjective)
    );
}

#[test]
fn sheaf_and_covering_conditions() {
    let f1 = fixtures::f1().site;
    assert!(f1.covers_are_surjective());
    for n in 0..=2 {
        let full = top_structure(&f1, &FinSet::range(n));
        let cmp = sheaf_vs_covering(&f1, &full);
        assert!(cmp.is_sheaf && cmp.is_qspace);
    }
    let ec = fixtures::load("empty-cover").unwrap().site;
    assert!(!ec.covers_are_surjective());
    let two = top_structure(&ec, &FinSet::range(2));
    let cmp = sheaf_vs_covering(&ec, &two);
    assert!(cmp.is_qspace && !cmp.is_sheaf);
    assert!(cmp.sheaf_witness.unwrap().contains("2 amalgamations"));
}

#[test]
fn pullback_in_the_strict_category_is_corestricted() {
    let site = fixtures::f1().site;
    let cat = QCategory::strict(&site, 2).unwrap();
    assert!(cat.universe().iter().all(crate::strictq::is_strict));
    assert_eq!(cat.universe().len(), 3);
    let full = top_structure(&site, &FinSet::range(2));
    let pt = top_structure(&site, &FinSet::range(1));
    let (p, l, r) = cat.pullback((&pt, &FinMap::new(vec![0], 2)), (&full, &FinMap::identity(2)));
    assert_eq!(p.size(), 1);
    assert_eq!(l.images(), &[0]);
    assert_eq!(r.images(), &[0]);
}
