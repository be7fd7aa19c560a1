//! Germs and their continuation along polygonal paths, homotopy checks, and
//! monodromy of algebraic functions.

pub mod algebraic;
pub mod germ;
pub mod homotopy;
pub mod path;

pub use algebraic::{algebraic_monodromy, AlgebraicFunction, MonodromyRep};
pub use germ::{continue_along, germ_builtin, germ_distance, BuiltinKind, Germ, DEFAULT_ORDER};
pub use homotopy::{check_monodromy_theorem, Homotopy, MonodromyTheoremReport};
pub use path::PathPoly;
