//! Criterion benchmarks for w1simplex live under `benches/`.
