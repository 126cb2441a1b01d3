//! Benchmark harness for the pattern classifiers.

pub mod alloc;
pub mod bench;
pub mod commands;
pub mod output;
pub mod rss;
