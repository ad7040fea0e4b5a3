//! Report types printed by the `kida` binary.

pub mod report;
