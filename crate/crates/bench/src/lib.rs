//! Criterion benchmarks for the elastic boxplot pipeline; see `benches/`.
