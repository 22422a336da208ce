//! Model files, workspaces, benchmarking and the `wautom` command line.

pub mod app;
pub mod bench;
pub mod dot;
pub mod model;
pub mod random;
pub mod workspace;
