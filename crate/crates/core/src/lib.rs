pub mod cli;
pub mod error;
pub mod fgl;
pub mod fp;
pub mod graded;
pub mod lazard;
mod parse;
pub mod series;

pub use error::{Error, Result};
pub use fp::{Fp, FpMatrix, Prime};
pub use graded::{
    GradedPolynomial, GradedVariable, Monomial, Ring, RingDescriptor, TruncationGrading,
};

// The book's chapters are compiled as doc-tests so its snippets stay honest.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/graded.md")]
    mod graded {}
    #[doc = include_str!("../../../book/src/fgl.md")]
    mod fgl {}
    #[doc = include_str!("../../../book/src/lazard.md")]
    mod lazard {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
