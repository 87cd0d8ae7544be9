//! Parsing of the main tables and the appendix into genus records.

mod descriptor;
mod normalized;
mod splitting;
mod tables;

pub use descriptor::{FormatDescriptor, HasseFormat};
pub use normalized::{emit_normalized, fingerprint, read_normalized, RationalDto, FORMAT_TAG};
pub use splitting::{parse_splitting_expr, EvenLetter, SplitGroup, SplitItem, SplittingExpr};
pub use tables::{
    join_tables, parse_appendix, parse_main_table, AppendixKey, AppendixTable, MainTable, RawDataset, SourceSpan,
    TableKind,
};
