//! Finite categories, Grothendieck sites and quasispaces over finite sets,
//! with exhaustive checkers for their universal properties.

pub mod assoc;
pub mod families;
pub mod fincat;
pub mod fixtures;
pub mod fregular;
pub mod fsetbase;
pub mod instance;
pub mod quasispace;
pub mod report;
pub mod site;
pub mod strictq;
pub mod suites;
