//! Library surface of the `harsanyi` command-line tool. The binary is a
//! thin argument-parsing wrapper; everything it can do is callable from
//! here, which is also how the acceptance suite drives the pipeline.

pub mod commands;
pub mod errors;
pub mod manifest;
pub mod pipeline;
pub mod svg;
pub mod toy;

pub use errors::{usage, UsageError};
