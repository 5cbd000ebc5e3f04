//! Criterion benchmarks for the pipeline; see `benches/pipeline.rs`.
