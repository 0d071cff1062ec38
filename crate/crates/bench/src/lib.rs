//! Criterion benchmarks of the defim engine; see `benches/engine.rs`.
