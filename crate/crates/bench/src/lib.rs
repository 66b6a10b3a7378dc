//! Benchmarks live in `benches/kernel.rs`.
