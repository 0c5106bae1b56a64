use super::*;

fn diamond() -> FinCat {
    FinCat::from_preorder(
        &["0", "a", "b", "1"],
        &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
    )
    .unwrap()
}

fn two_point() -> FinCat {
    FinCat::builder()
        .objects(["P", "L"])
        .morphism("a", "P", "L")
        .morphism("b", "P", "L")
        .build()
        .unwrap()
}

fn fam(c: &FinCat, codomain: &str, legs: &[&str]) -> Family {
    Family::by_names(c, codomain, legs).unwrap()
}

fn join_covers(c: &FinCat) -> Collection {
    let mut col = iso_collection(c);
    col.insert(fam(c, "1", &["a<1", "b<1"]));
    col
}

/// Is `x` the least upper bound of the sources of `f`? Oracle for posets.
fn is_join(c: &FinCat, f: &Family) -> bool {
    let leq = |x: Obj, y: Obj| !c.hom(x, y).is_empty();
    let sources: Vec<Obj> = f.legs().iter().map(|&l| c.source(l)).collect();
    c.objects()
        .filter(|&ub| sources.iter().all(|&s| leq(s, ub)))
        .all(|ub| leq(f.codomain(), ub))
}

#[test]
fn refinement_examples() {
    let d = diamond();
    let ab = fam(&d, "1", &["a<1", "b<1"]);
    assert!(refines(&d, &ab, &ab).unwrap().is_some());
    assert!(refines(&d, &fam(&d, "1", &["a<1"]), &ab).unwrap().is_some());

    let f1 = two_point();
    assert!(refines(&f1, &fam(&f1, "L", &["a"]), &fam(&f1, "L", &["b"]))
        .unwrap()
        .is_none());
    assert!(matches!(
        refines(&d, &ab, &fam(&d, "a", &["0<a"])),
        Err(FamilyError::CodomainMismatch(..))
    ));
}

#[test]
fn refinement_witness_triangles_commute() {
    let d = diamond();
    let f = fam(&d, "1", &["0<1", "a<1"]);
    let g = fam(&d, "1", &["a<1", "b<1"]);
    let r = refines(&d, &f, &g).unwrap().unwrap();
    for (y, x, h) in r.steps {
        assert_eq!(d.comp(x, h), y);
    }
}

#[test]
fn r_pullback_examples() {
    let d = diamond();
    let a1 = d.morphism("a<1").unwrap();
    let b_only = fam(&d, "1", &["b<1"]);
    assert!(is_r_pullback(&d, &Family::empty(d.object("a").unwrap()), a1, &b_only).unwrap());
    let ab = fam(&d, "1", &["a<1", "b<1"]);
    let id1 = d.identity(d.object("1").unwrap());
    assert!(is_r_pullback(&d, &ab, id1, &ab).unwrap());
    // {id_a} composed with a<1 is {a<1}, which does not factor through b<1
    assert!(!is_r_pullback(&d, &fam(&d, "a", &["id_a"]), a1, &b_only).unwrap());
    // 0 ≤ b, so {0<a} composed with a<1 does factor through b<1
    assert!(is_r_pullback(&d, &fam(&d, "a", &["0<a"]), a1, &b_only).unwrap());
    assert!(is_r_pullback(&d, &b_only, a1, &b_only).is_err());
}

#[test]
fn collection_operations() {
    let d = diamond();
    let iso = iso_collection(&d);
    assert_eq!(iso.len(), 4);
    assert!(iso.iter().all(|f| f.len() == 1 && d.is_identity(f.legs()[0])));

    let a = Collection::from_families(&d, [fam(&d, "1", &["a<1", "b<1"])]);
    let sat = saturation(&d, &a, d.morphism_count());
    assert!(a.is_subset(&sat));
    assert!(sat.contains(&fam(&d, "1", &["a<1", "b<1", "id_1"])));
    assert!(!sat.contains(&fam(&d, "1", &["a<1"])));

    let pulled = pullback_collection(&d, &a).unwrap();
    // along a<1: {a∧a, a∧b} = {id_a, 0<a}
    assert!(pulled.contains(&fam(&d, "a", &["id_a", "0<a"])));
}

#[test]
fn pullback_collection_reports_missing_pullbacks() {
    let f1 = two_point();
    let a = Collection::from_families(&f1, [fam(&f1, "L", &["a"])]);
    // a and b have no pullback: no object maps to P equalizing them
    let err = pullback_collection(&f1, &a).unwrap_err();
    assert!(matches!(err, FamilyError::MissingPullback(_)), "{err}");
}

#[test]
fn property_checks_on_diamond() {
    let d = diamond();
    let bound = d.morphism_count();
    assert!(check_property(&d, &iso_collection(&d), Property::Isomorphisms, bound).holds());
    let j = join_covers(&d);
    for p in [Property::Isomorphisms, Property::Composition, Property::Universal, Property::Filtered] {
        assert!(check_property(&d, &j, p, bound).holds(), "{p}");
    }
    let lonely = Collection::from_families(&d, [fam(&d, "1", &["a<1"])]);
    let v = check_property(&d, &lonely, Property::Saturated, bound);
    assert!(v.witness().is_some());
}

#[test]
fn strict_epi_in_diamond_matches_joins() {
    let d = diamond();
    assert!(is_strict_epi_family(&d, &fam(&d, "1", &["a<1", "b<1"]), 6).unwrap().holds());
    assert!(!is_strict_epi_family(&d, &fam(&d, "1", &["a<1"]), 6).unwrap().holds());
    for o in d.objects() {
        for f in families_over(&d, o, 4) {
            assert_eq!(
                is_strict_epi_family(&d, &f, 6).unwrap().holds(),
                is_join(&d, &f),
                "{}",
                f.describe(&d)
            );
        }
    }
}

#[test]
fn strict_mono_is_dual() {
    let d = diamond();
    let zero = d.object("0").unwrap();
    let leg = |n: &str| d.morphism(n).unwrap();
    assert!(is_strict_mono_family(&d, zero, &[leg("0<a"), leg("0<b")], 6).unwrap().holds());
    assert!(!is_strict_mono_family(&d, zero, &[leg("0<a")], 6).unwrap().holds());
    assert!(is_strict_mono_family(&d, zero, &[d.identity(zero)], 6).unwrap().holds());
}

#[test]
fn strict_epi_refuses_large_families() {
    let c = FinCat::from_preorder(
        &["x0", "x1", "x2", "x3", "top"],
        &[("x0", "top"), ("x1", "top"), ("x2", "top"), ("x3", "top")],
    )
    .unwrap();
    let f = fam(&c, "top", &["x0<top", "x1<top", "x2<top", "x3<top"]);
    assert_eq!(
        is_strict_epi_family(&c, &f, 3),
        Err(FamilyError::TooManyLegs { legs: 4, limit: 3 })
    );
}

#[test]
fn identity_family_is_strict_epi_everywhere() {
    for c in [diamond(), two_point()] {
        for o in c.objects() {
            let f = Family::singleton(&c, c.identity(o));
            assert!(is_strict_epi_family(&c, &f, 6).unwrap().holds());
        }
    }
}

#[test]
fn property_letters_parse() {
    for p in Property::ALL {
        assert_eq!(p.letter().to_string().parse::<Property>().unwrap(), p);
    }
    assert!("X".parse::<Property>().is_err());
}
