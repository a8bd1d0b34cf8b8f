//! XML text to node terms and back.

pub mod parse;
pub mod serialize;
pub mod validate;

pub use parse::{parse_document, parse_document_with, ParseOptions, XmlParseError};
pub use serialize::{escape_attr, escape_text, serialize_document, serialize_fragments, serialize_with, unescape, SerializeOptions};
pub use validate::{check_serializable, ValidationError};
