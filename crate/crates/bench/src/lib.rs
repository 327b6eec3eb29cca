//! Criterion benchmarks for the epistab kernels. See `benches/kernels.rs`.
