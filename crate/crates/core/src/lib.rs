//! Abstract content, a function registry, a lexicon and renderers that turn
//! language-independent content into text.

pub mod content;
pub mod docs;
pub mod entity;
pub mod lexicon;
pub mod phrase;
pub mod registry;
pub mod render;
pub mod suggest;

mod engine;

pub use engine::{Engine, EngineError};
