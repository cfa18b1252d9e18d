//! Wall-time benchmark support crate; the deterministic instruction-count
//! benches live in `relin::bench`, this crate only hosts the criterion
//! harness (see `benches/families.rs`).
