//! Instance files and DOT export for the `difactor` command.

pub mod dot;
pub mod format;

pub use format::{parse, serialize, InstanceFile, ParseError};
