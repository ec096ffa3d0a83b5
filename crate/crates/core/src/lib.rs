//! Harmonic analysis on bounded Vilenkin groups.
//!
//! Level-`N` truncations of `G_m`, the character system and its fast transform,
//! Nörlund-type summability means, martingale Hardy-space tools and exact
//! certificates for the divergence of Nörlund means below the critical exponent.

pub mod character;
pub mod counterexamples;
pub mod cyclotomic;
pub mod dirichlet;
pub mod error;
pub mod grid;
pub mod hardy;
pub mod group;
pub mod rational;
pub mod scalar;
pub mod summability;
pub mod transform;

pub use cyclotomic::Cyclotomic;
pub use dirichlet::{dirichlet, DirichletMode};
pub use error::{Error, Result};
pub use grid::{GridFunction, RealGrid};
pub use group::{digits_of_index, group_translate, make_group, IndexDigits, Point, RadixSequence, Sign, VilenkinGroup};
pub use scalar::Scalar;
pub use transform::{forward_transform, inverse_transform, partial_sum, Block, Spectrum};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/means.md")]
    mod means {}
    #[doc = include_str!("../../../book/src/hardy.md")]
    mod hardy {}
    #[doc = include_str!("../../../book/src/counterexamples.md")]
    mod counterexamples {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
