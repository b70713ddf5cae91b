//! Crime analytics over crawled Bangla news.
//!
//! The pipeline ingests crawled news records, normalizes their text against a
//! stop list and a stem dictionary, categorizes each story with a multinomial
//! Naive Bayes model, drops cross-source duplicate stories using TF-IDF cosine
//! similarity, resolves crime locations against a gazetteer, aggregates crime
//! counts into a (year, month, zone) cube, and renders a dot map of crime
//! intensity.
//!
//! Each stage is its own module and is usable on its own; the [`cli`] module
//! wires them together behind the `crimelens` binary. The mdbook under
//! `book/` walks through every stage with runnable examples.

pub mod analytics;
pub mod classify;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod geodate;
pub mod lexicon;
pub mod maprender;
pub mod similarity;
pub mod textpipe;

/// The guide's code blocks, compiled and run by `cargo test --doc` so the
/// book cannot drift from the library.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/getting-started.md")]
    pub mod getting_started {}
    #[doc = include_str!("../../../book/src/records.md")]
    pub mod records {}
    #[doc = include_str!("../../../book/src/lexicons.md")]
    pub mod lexicons {}
    #[doc = include_str!("../../../book/src/tokens.md")]
    pub mod tokens {}
    #[doc = include_str!("../../../book/src/categorizer.md")]
    pub mod categorizer {}
    #[doc = include_str!("../../../book/src/duplicates.md")]
    pub mod duplicates {}
    #[doc = include_str!("../../../book/src/locations.md")]
    pub mod locations {}
    #[doc = include_str!("../../../book/src/analytics.md")]
    pub mod analytics {}
    #[doc = include_str!("../../../book/src/dot-map.md")]
    pub mod dot_map {}
}
