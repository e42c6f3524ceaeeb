//! Kansei engineering survey analysis.
//!
//! The pipeline follows a Type I study: a lexicon of Kansei words reduced
//! to bipolar pairs, semantic-differential ratings of product samples,
//! principal component analysis of the respondent × variable matrix,
//! interpretation of the leading components against a catalog of design
//! attributes, and a tally of the follow-up color survey.

pub mod catalog;
pub mod colorvote;
pub mod interpret;
pub mod lexicon;
pub mod linalg;
pub mod pca;
pub mod pipeline;
pub mod plot;
pub mod project;
pub mod stats;
pub mod survey;
