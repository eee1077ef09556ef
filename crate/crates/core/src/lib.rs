//! Landmark matching over random clique complexes.
//!
//! The guide in `book/` walks through the pipeline; its code blocks are
//! compiled as doctests of this crate.

pub mod assignment;
pub mod complex;
pub mod descriptors;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod graph;
pub mod math;
pub mod noise;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};

macro_rules! book_chapter {
    ($name:ident, $file:literal) => {
        #[cfg(doctest)]
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub struct $name;
    };
}

book_chapter!(BookIntroduction, "introduction.md");
book_chapter!(BookGraphs, "graphs.md");
book_chapter!(BookComplexes, "complexes.md");
book_chapter!(BookDescriptors, "descriptors.md");
book_chapter!(BookMatching, "matching.md");
book_chapter!(BookNoise, "noise.md");
book_chapter!(BookExperiments, "experiments.md");
book_chapter!(BookTheory, "theory.md");
