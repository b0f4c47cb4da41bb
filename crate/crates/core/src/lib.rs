//! Exact decomposition matrices, blocks, and basic sets for cyclotomic Hecke
//! algebras of rank-2 exceptional complex reflection groups at roots of unity.
//!
//! Everything is computed over explicit cyclotomic fields: no floating point
//! enters any decision. The crate is organized bottom-up:
//!
//! * [`exactnum`]: rationals, roots of unity, and cyclotomic field elements.
//! * [`laurent`]: Laurent polynomials over cyclotomics, factored forms.
//! * [`heckedata`]: dataset loading and validation (groups, characters,
//!   representations, Schur elements).
//! * [`speceng`]: specialization of the generic algebra at a root of unity.
//! * [`decomp`]: the decomposition matrix engine.
//! * [`blocks`]: central elements, block partitions, shape classification.
//! * [`basicsets`]: a-values, basic sets, and conjecture audits.
//! * [`cli`]: the `heckedec` command line.

pub mod basicsets;
pub mod blocks;
pub mod cli;
pub mod decomp;
pub mod exactnum;
pub mod heckedata;
pub mod laurent;
pub mod speceng;
