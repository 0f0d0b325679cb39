//! File formats, parallel execution and the pipeline driver for
//! mutation-based fault localization. The analysis itself lives in
//! [`mbfl_core`]; this crate adds everything that touches the file system.

pub mod error;
pub mod formats;
pub mod parallel;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
pub use pipeline::RunConfig;
