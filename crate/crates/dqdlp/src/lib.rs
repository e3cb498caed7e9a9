//! Distributed discrete-logarithm search on a simulated quantum cluster.
//!
//! Given `a`, `b`, and a modulus `N` with `b = a^t (mod N)`, the library
//! recovers the exponent `t` by repeatedly asking a much smaller question:
//! *does `t` lie in a given window of candidate exponents?* Each window
//! query runs a compact four-register circuit on a dense state-vector
//! simulator; a dichotomy walk shrinks or slides the window until a verified
//! singleton remains. Queries are independent, so a coordinator can fan them
//! out across worker lanes that exchange nothing but a window descriptor and
//! a one-bit verdict.
//!
//! ```
//! use dqdlp::numt::ProblemInstance;
//! use dqdlp::membership::{probe, SetDescriptor};
//!
//! let inst = ProblemInstance::new(3, 12, 71)?; // r = 35, t = 23
//! let window = SetDescriptor::new(20, 3, inst.r)?; // {20, ..., 27} contains 23
//! let p = probe(&inst, &window)?;
//! assert!(p.p_third_marker_given_fourth_1 > 0.8);
//! # Ok::<(), dqdlp::error::Error>(())
//! ```
//!
//! The guide under `book/` walks through each layer with runnable snippets;
//! those snippets are compiled as doc-tests of this crate, so the book and
//! the library cannot drift apart.

pub mod analytics;
pub mod baseline;
pub mod cli;
pub mod cluster;
pub mod error;
pub mod gates;
pub mod membership;
pub mod numt;
pub mod qsim;
pub mod search;

pub use error::{Error, Result};

/// Book chapters compiled as doc-tests (`cargo test --doc`).
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }
    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(NumberTheory, "../../../book/src/number-theory.md");
    chapter!(StateVectors, "../../../book/src/state-vectors.md");
    chapter!(Gates, "../../../book/src/gates.md");
    chapter!(Membership, "../../../book/src/membership.md");
    chapter!(Bounds, "../../../book/src/bounds.md");
    chapter!(Search, "../../../book/src/search.md");
    chapter!(Distribution, "../../../book/src/distribution.md");
    chapter!(Baseline, "../../../book/src/baseline.md");
    chapter!(CliGuide, "../../../book/src/cli.md");
    chapter!(Readme, "../../../README.md");
}
