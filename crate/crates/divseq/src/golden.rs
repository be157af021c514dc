//! Line-by-line comparison of a rendered table with a golden file.

use std::fmt;
use std::path::Path;

use crate::config::CliError;

/// The first line where the two texts differ. `None` on a side means that
/// text ended early.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    /// 1-based, header included.
    pub line: usize,
    pub produced: Option<String>,
    pub golden: Option<String>,
}

impl Divergence {
    /// The row key (first `|`-separated cell) of whichever side has the line.
    pub fn row(&self) -> Option<&str> {
        self.produced.as_deref().or(self.golden.as_deref()).map(|l| l.split('|').next().unwrap_or("").trim())
    }
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &Option<String>| s.clone().unwrap_or_else(|| "<end of file>".into());
        write!(f, "line {}", self.line)?;
        if let Some(row) = self.row().filter(|_| self.line > 1) {
            write!(f, " (row {row})")?;
        }
        write!(f, ": produced `{}`, golden `{}`", show(&self.produced), show(&self.golden))
    }
}

/// First divergent line of `produced` against `golden`, or `None` when they
/// match byte for byte.
pub fn golden_diff(produced: &str, golden: &str) -> Option<Divergence> {
    if produced == golden {
        return None;
    }
    let mut p = produced.split_inclusive('\n');
    let mut g = golden.split_inclusive('\n');
    let mut line = 1;
    loop {
        match (p.next(), g.next()) {
            (Some(a), Some(b)) if a == b => line += 1,
            (None, None) => unreachable!("texts differ"),
            (a, b) => {
                let strip = |s: &str| s.strip_suffix('\n').unwrap_or(s).to_string();
                return Some(Divergence { line, produced: a.map(strip), golden: b.map(strip) });
            }
        }
    }
}

pub fn golden_compare(produced: &str, golden: &Path) -> Result<Option<Divergence>, CliError> {
    let text = std::fs::read_to_string(golden).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::MissingGolden(golden.to_path_buf()),
        _ => CliError::Io { path: golden.to_path_buf(), source: e },
    })?;
    Ok(golden_diff(produced, &text))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = "n | d_n\n1 | 1\n2 | 2^3\n";

    #[test]
    fn identical_texts_have_no_divergence() {
        assert_eq!(golden_diff(TABLE, TABLE), None);
    }

    #[test]
    fn reports_first_divergent_row() {
        let d = golden_diff("n | d_n\n1 | 1\n2 | 2^4\n", TABLE).unwrap();
        assert_eq!(d.line, 3);
        assert_eq!(d.row(), Some("2"));
        assert_eq!(d.to_string(), "line 3 (row 2): produced `2 | 2^4`, golden `2 | 2^3`");
    }

    #[test]
    fn truncation_and_trailing_newline() {
        let d = golden_diff("n | d_n\n1 | 1\n", TABLE).unwrap();
        assert_eq!((d.line, d.produced.as_deref()), (3, None));
        let d = golden_diff(TABLE.trim_end(), TABLE).unwrap();
        assert_eq!(d.line, 3);
    }

    const EXAMPLE: &str = include_str!("../tests/golden/example3_1_17.txt");

    #[test]
    fn exponent_perturbation_at_row_17() {
        let bad = EXAMPLE.replace("17 | 101^2 * ", "17 | 101^3 * ");
        assert_ne!(bad, EXAMPLE);
        let d = golden_diff(&bad, EXAMPLE).unwrap();
        assert_eq!((d.line, d.row()), (18, Some("17")));
    }

    #[test]
    fn reordered_primes_diverge() {
        let bad = EXAMPLE.replace("\n3 | 3^2 * 17\n", "\n3 | 17 * 3^2\n");
        assert_ne!(bad, EXAMPLE);
        assert_eq!(golden_diff(&bad, EXAMPLE).unwrap().row(), Some("3"));
    }

    #[test]
    fn missing_golden() {
        let err = golden_compare(TABLE, Path::new("/nonexistent/golden.txt")).unwrap_err();
        assert!(matches!(err, CliError::MissingGolden(_)));
    }
}
