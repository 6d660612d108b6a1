//! Config parsing and batch pipelines behind the `tomofeat` command-line
//! tool.

pub mod config;
pub mod pipeline;
