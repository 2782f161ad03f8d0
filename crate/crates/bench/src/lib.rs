//! Criterion benchmarks for the certification pipeline; see `benches/`.
