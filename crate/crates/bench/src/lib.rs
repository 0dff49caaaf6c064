//! Criterion benchmarks for the automata kernel and the decision procedure
//! live under `benches/`.
