//! The shipped instance files, embedded.

use crate::instance::Instance;

/// `(name, JSON)` for every shipped fixture.
pub const ALL: [(&str, &str); 8] = [
    ("f1", include_str!("../fixtures/f1.json")),
    ("f2", include_str!("../fixtures/f2.json")),
    ("f3", include_str!("../fixtures/f3.json")),
    ("diamond", include_str!("../fixtures/diamond.json")),
    ("n5", include_str!("../fixtures/n5.json")),
    ("empty-cover", include_str!("../fixtures/empty-cover.json")),
    ("void", include_str!("../fixtures/void.json")),
    ("half", include_str!("../fixtures/half.json")),
];

/// Loads a shipped fixture by name.
pub fn load(name: &str) -> Option<Instance> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| Instance::from_json(text).unwrap_or_else(|e| panic!("fixture {n} is broken: {e}")))
}

/// Two points `a, b: P -> L`, with `L` covered by `{a, b}`.
pub fn f1() -> Instance {
    load("f1").expect("shipped")
}

/// The category of [`f1`] with the trivial topology.
pub fn f2() -> Instance {
    load("f2").expect("shipped")
}

/// Graphs: vertices `P`, edges `I`, with source and target `a, b: P -> I`.
pub fn f3() -> Instance {
    load("f3").expect("shipped")
}
