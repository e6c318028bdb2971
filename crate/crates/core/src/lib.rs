//! Coset complexes and homological stability for families of Coxeter groups.
//!
//! A family is given by a diagram `Γ_1` with a preferred vertex; `Γ_n`
//! attaches a path of `n - 1` further vertices. The crate enumerates the
//! groups `W_n`, builds the coset complex `C^n` on `W_n/W_{n-1}`, its
//! barycentric subdivision and basic construction, the semisimplicial set
//! `D^n`, and checks stability of `H_*(W_n)` numerically.

pub mod basic;
pub mod cli;
pub mod complexes;
pub mod diagrams;
pub mod engine;
pub mod homology;
pub mod report;
pub mod semisimplicial;
pub mod stability;
