//! Subcommands. Each validates its arguments into a config before any
//! computation, then produces a [`ReportRecord`](crate::record::ReportRecord).

pub mod ec;
pub mod eds;
pub mod ff;
pub mod int;
pub mod report;
