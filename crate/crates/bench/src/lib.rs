//! Criterion benchmarks for `yaglom-core`; see `benches/core_ops.rs`.
