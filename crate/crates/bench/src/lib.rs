//! Benchmarks for `qhopf-core` live in `benches/`; run them with
//! `cargo bench -p qhopf-bench`.
