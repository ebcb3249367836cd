//! The line-oriented diagram file format.
//!
//! ```text
//! BRATTELI 1
//! levels 2
//! vertices 1 1 2
//! incidence 0
//! 2
//! incidence 1
//! 1 1
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Rows of a stage whose
//! target level is empty have no entries and are omitted.

use std::fmt::Write as _;

use thiserror::Error;

use crate::diagram::BratteliDiagram;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<_> = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("");
                let tokens: Vec<&str> = body.split_whitespace().collect();
                (!tokens.is_empty()).then_some((i + 1, tokens))
            })
            .collect();
        let last_line = text.lines().count();
        Lines { lines, pos: 0, last_line }
    }

    fn next(&mut self, expecting: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        let item = self.lines.get(self.pos).cloned().ok_or_else(|| ParseError {
            line: self.last_line + 1,
            message: format!("unexpected end of file, expected {expecting}"),
        })?;
        self.pos += 1;
        Ok(item)
    }
}

fn numbers<T: std::str::FromStr>(line: usize, tokens: &[&str]) -> Result<Vec<T>, ParseError> {
    tokens
        .iter()
        .map(|t| t.parse().map_err(|_| ParseError { line, message: format!("`{t}` is not a nonnegative integer") }))
        .collect()
}

fn keyword<'a>(line: usize, tokens: &'a [&'a str], word: &str) -> Result<&'a [&'a str], ParseError> {
    match tokens.split_first() {
        Some((first, rest)) if *first == word => Ok(rest),
        _ => Err(ParseError { line, message: format!("expected `{word}`, found `{}`", tokens.join(" ")) }),
    }
}

pub fn parse_diagram(text: &str) -> Result<BratteliDiagram, ParseError> {
    let mut lines = Lines::new(text);

    let (line, tokens) = lines.next("header `BRATTELI 1`")?;
    if tokens != ["BRATTELI", "1"] {
        return Err(ParseError { line, message: format!("bad header `{}`, expected `BRATTELI 1`", tokens.join(" ")) });
    }

    let (line, tokens) = lines.next("`levels <D>`")?;
    let rest = keyword(line, &tokens, "levels")?;
    let depth = match numbers::<usize>(line, rest)?.as_slice() {
        [d] if *d >= 1 => *d,
        _ => return Err(ParseError { line, message: "`levels` takes one integer D >= 1".into() }),
    };

    let (line, tokens) = lines.next("`vertices <c0> ... <cD>`")?;
    let counts: Vec<usize> = numbers(line, keyword(line, &tokens, "vertices")?)?;
    if counts.len() != depth + 1 {
        return Err(ParseError {
            line,
            message: format!("expected {} vertex counts, found {}", depth + 1, counts.len()),
        });
    }

    let mut incidence = Vec::with_capacity(depth);
    for n in 0..depth {
        let (line, tokens) = lines.next(&format!("`incidence {n}`"))?;
        let rest = keyword(line, &tokens, "incidence")?;
        if numbers::<usize>(line, rest)? != [n] {
            return Err(ParseError { line, message: format!("expected `incidence {n}`") });
        }
        let width = counts[n + 1];
        let mut matrix = Vec::with_capacity(counts[n]);
        for i in 0..counts[n] {
            if width == 0 {
                matrix.push(Vec::new());
                continue;
            }
            let (line, tokens) = lines.next(&format!("row {i} of incidence {n}"))?;
            let row: Vec<u64> = numbers(line, &tokens)?;
            if row.len() != width {
                return Err(ParseError {
                    line,
                    message: format!("row {i} of incidence {n} has {} entries, expected {width}", row.len()),
                });
            }
            matrix.push(row);
        }
        incidence.push(matrix);
    }

    if let Some((line, tokens)) = lines.lines.get(lines.pos) {
        return Err(ParseError { line: *line, message: format!("trailing content `{}`", tokens.join(" ")) });
    }

    BratteliDiagram::new(counts, incidence).map_err(|e| ParseError { line: lines.last_line, message: e.to_string() })
}

pub fn serialize_diagram(d: &BratteliDiagram) -> String {
    let mut out = String::from("BRATTELI 1\n");
    let _ = writeln!(out, "levels {}", d.depth());
    let counts: Vec<String> = d.vertex_counts().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "vertices {}", counts.join(" "));
    for (n, matrix) in d.incidences().iter().enumerate() {
        let _ = writeln!(out, "incidence {n}");
        for row in matrix.iter().filter(|r| !r.is_empty()) {
            let row: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Builtin, Condition};

    const CAR: &str = "\
# the CAR algebra
BRATTELI 1
levels 3
vertices 1 1 1 1
incidence 0
2
incidence 1
2   # two edges
incidence 2
2
";

    #[test]
    fn parses_car() {
        let d = parse_diagram(CAR).unwrap();
        assert_eq!(d, Builtin::Car.diagram(3).unwrap());
        assert!(d.validate().is_empty());
    }

    #[test]
    fn empty_level_parses_then_fails_validation() {
        let d = parse_diagram("BRATTELI 1\nlevels 2\nvertices 1 0 1\nincidence 0\nincidence 1\n").unwrap();
        let report = d.validate();
        assert!(report.iter().any(|v| v.condition == Condition::NonemptyLevel && v.level == 1));
    }

    #[test]
    fn truncated_block_reports_line() {
        let err =
            parse_diagram("BRATTELI 1\nlevels 2\nvertices 1 2 1\nincidence 0\n1 1\nincidence 1\n1\n").unwrap_err();
        assert_eq!(err.line, 8);
        assert!(err.message.contains("row 1 of incidence 1"), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(parse_diagram("BRATTELI 2\n").unwrap_err().line, 1);
        let err = parse_diagram("BRATTELI 1\nlevels 1\nvertices 1 1\nincidence 0\nx\n").unwrap_err();
        assert_eq!(err.line, 5);
        assert!(err.message.contains("`x`"));
        let err = parse_diagram("BRATTELI 1\nlevels 1\nvertices 1 1 1\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_diagram("BRATTELI 1\nlevels 1\nvertices 1 1\nincidence 0\n1 1\n").unwrap_err();
        assert_eq!(err.line, 5);
        let err = parse_diagram(&format!("{CAR}extra\n")).unwrap_err();
        assert!(err.message.contains("trailing"));
    }

    #[test]
    fn builtins_round_trip() {
        for b in Builtin::ALL {
            let d = b.diagram(4).unwrap();
            assert_eq!(parse_diagram(&serialize_diagram(&d)).unwrap(), d);
        }
    }
}
