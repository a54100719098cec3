//! Input/output, seeded corpora and the acceptance driver for `divsq-core`.

pub mod corpus;
pub mod format;
pub mod render;
pub mod selftest;
