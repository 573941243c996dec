//! Abstract content: values, notation, catalog, validation and edits.

pub mod catalog;
pub mod edit;
pub mod path;
pub mod serialize;
pub mod syntax;
pub mod validate;
pub mod value;

pub use catalog::{Catalog, CatalogError, ConstructorSpec, KeySpec, TypeDescriptor};
pub use edit::{edit_value, get_value, remove_value, EditError};
pub use path::{ContentPath, Segment};
pub use serialize::{serialize_content, serialize_content_with, serialize_value};
pub use syntax::{parse_content, parse_value, SyntaxError};
pub use validate::{validate, CallSignature, Diagnostic, DiagnosticCode, FunctionLookup, Validator};
pub use value::{Content, ConstructorInstantiation, FunctionCall, ItemId, ItemRef, Literal, Value, ARTICLE_BODY_KEY};
