//! Criterion benchmarks for neststat; see `benches/`.
