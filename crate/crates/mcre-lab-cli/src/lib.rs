//! Support library for the `mcre-lab` binary: run manifests and
//! deterministic output encoding.

pub mod manifest;
pub mod output;
