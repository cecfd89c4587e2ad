//! Document formats and generators shared by the `koszul` binary and its
//! test suites.

pub mod docs;
pub mod random;
