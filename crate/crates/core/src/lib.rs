//! Exact computations with partial abelian monoids, interval sets with
//! endpoint types, and labeled configuration and string spaces under a
//! finite group action.

pub mod completion;
pub mod config;
pub mod group_rep;
pub mod interval;
pub mod io;
pub mod linalg;
pub mod monoid;
pub mod rational;
pub mod strings;
