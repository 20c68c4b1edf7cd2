//! Library half of the command-line tool: JSON schemas and the job
//! runner. The binary in `main.rs` is a thin argument-parsing wrapper so
//! that integration tests can drive everything in-process.

pub mod job;
pub mod schema;
