pub mod analytics;
pub mod arith;
pub mod error;
pub mod halfint;
pub mod jacobi;
pub mod qforms;
pub mod series;
pub mod siegel;

pub use error::{Contradiction, Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/quadratic-forms.md")]
    mod quadratic_forms {}
    #[doc = include_str!("../../../book/src/jacobi-forms.md")]
    mod jacobi_forms {}
    #[doc = include_str!("../../../book/src/maass-lift.md")]
    mod maass_lift {}
    #[doc = include_str!("../../../book/src/half-integral.md")]
    mod half_integral {}
    #[doc = include_str!("../../../book/src/sanitize.md")]
    mod sanitize {}
    #[doc = include_str!("../../../book/src/analytics.md")]
    mod analytics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
