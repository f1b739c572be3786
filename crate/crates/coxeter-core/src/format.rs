//! Sectioned text format for data files. The grammar is described in
//! `docs/formats.md`.

use crate::datum::{CoxeterDatum, DatumError};
use crate::rational::{self, Q};
use crate::realization::{Realization, RealizationError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("missing section [{0}]")]
    MissingSection(String),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
}

impl FormatError {
    pub fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        FormatError::Syntax { line, column, message: message.into() }
    }
}

/// A content line: 1-based line number, and its tokens with 1-based columns.
#[derive(Debug, Clone)]
pub struct Line {
    pub number: usize,
    pub tokens: Vec<(usize, String)>,
}

impl Line {
    pub fn column_of(&self, k: usize) -> usize {
        self.tokens.get(k).map_or(1, |t| t.0)
    }

    pub fn words(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.1.as_str()).collect()
    }

    pub fn error(&self, k: usize, message: impl Into<String>) -> FormatError {
        FormatError::at(self.number, self.column_of(k), message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Sections {
    pub sections: Vec<(String, usize, Vec<Line>)>,
}

impl Sections {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut out = Sections::default();
        for (idx, raw) in text.lines().enumerate() {
            let number = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let col = raw.find('[').unwrap() + 1;
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| FormatError::at(number, col, "unterminated section header"))?
                    .trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(FormatError::at(number, col + 1, "bad section name"));
                }
                if out.get(name).is_some() {
                    return Err(FormatError::at(number, col + 1, format!("duplicate section [{name}]")));
                }
                out.sections.push((name.to_string(), number, Vec::new()));
                continue;
            }
            let Some(last) = out.sections.last_mut() else {
                let col = raw.len() - raw.trim_start().len() + 1;
                return Err(FormatError::at(number, col, "content before the first section"));
            };
            let mut tokens = Vec::new();
            let mut start = None;
            for (i, ch) in content.char_indices().chain([(content.len(), ' ')]) {
                let sep = ch.is_whitespace() || ch == ':' || ch == ',';
                match (start, sep) {
                    (None, false) => start = Some(i),
                    (Some(s), true) => {
                        tokens.push((content[..s].chars().count() + 1, content[s..i].to_string()));
                        start = None;
                    }
                    _ => {}
                }
            }
            last.2.push(Line { number, tokens });
        }
        Ok(out)
    }

    pub fn get(&self, name: &str) -> Option<&[Line]> {
        self.sections.iter().find(|s| s.0 == name).map(|s| s.2.as_slice())
    }

    pub fn header_line(&self, name: &str) -> Option<usize> {
        self.sections.iter().find(|s| s.0 == name).map(|s| s.1)
    }

    pub fn require(&self, name: &str) -> Result<&[Line], FormatError> {
        self.get(name).ok_or_else(|| FormatError::MissingSection(name.to_string()))
    }
}

fn int_rows(lines: &[Line], n: usize, header: usize) -> Result<Vec<Vec<i64>>, FormatError> {
    if lines.len() != n {
        let at = lines.get(n).map_or(header, |l| l.number);
        return Err(FormatError::at(at, 1, format!("expected {n} matrix rows, found {}", lines.len())));
    }
    lines
        .iter()
        .map(|l| {
            if l.tokens.len() != n {
                return Err(l.error(l.tokens.len().min(n), format!("expected {n} entries")));
            }
            l.tokens
                .iter()
                .enumerate()
                .map(|(k, t)| t.1.parse::<i64>().map_err(|_| l.error(k, format!("not an integer: `{}`", t.1))))
                .collect()
        })
        .collect()
}

/// Reads `[generators]`, `[coxeter]`, and the optional `[cartan]` and
/// `[realization]` sections.
pub fn parse_realization(sections: &Sections) -> Result<Realization, FormatError> {
    let gens = sections.require("generators")?;
    let labels: Vec<String> = gens.iter().flat_map(|l| l.tokens.iter().map(|t| t.1.clone())).collect();
    let n = labels.len();
    let rows = int_rows(sections.require("coxeter")?, n, sections.header_line("coxeter").unwrap_or(1))?;
    let mut coxeter = Vec::with_capacity(n);
    for (r, row) in rows.iter().enumerate() {
        let line = &sections.get("coxeter").unwrap()[r];
        let mut out = Vec::with_capacity(n);
        for (k, &x) in row.iter().enumerate() {
            out.push(match x {
                0 => None,
                x if x > 0 => Some(x as u32),
                _ => return Err(line.error(k, "coxeter entries are positive, 0 meaning infinity")),
            });
        }
        coxeter.push(out);
    }
    let cartan = match sections.get("cartan") {
        Some(lines) => Some(int_rows(lines, n, sections.header_line("cartan").unwrap_or(1))?),
        None => None,
    };
    let datum = CoxeterDatum::new(labels.clone(), coxeter, cartan)?;
    let Some(lines) = sections.get("realization") else {
        return Ok(Realization::new(datum));
    };
    let mut roots: Vec<Option<Vec<Q>>> = vec![None; n];
    let mut coroots: Vec<Option<Vec<Q>>> = vec![None; n];
    for l in lines {
        let w = l.words();
        if w.len() < 3 {
            return Err(l.error(0, "expected `root <label>: <values>` or `coroot <label>: <values>`"));
        }
        let target = match w[0] {
            "root" => &mut roots,
            "coroot" => &mut coroots,
            _ => return Err(l.error(0, "expected `root` or `coroot`")),
        };
        let i = labels.iter().position(|x| x == w[1]).ok_or_else(|| l.error(1, "unknown generator"))?;
        if target[i].is_some() {
            return Err(l.error(1, "vector given twice"));
        }
        let mut v = Vec::new();
        for (k, s) in w.iter().enumerate().skip(2) {
            v.push(rational::parse(s).map_err(|e| l.error(k, e.to_string()))?);
        }
        target[i] = Some(v);
    }
    let header = sections.header_line("realization").unwrap_or(1);
    let collect = |v: Vec<Option<Vec<Q>>>, kind: &str| -> Result<Vec<Vec<Q>>, FormatError> {
        v.into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| FormatError::at(header, 1, format!("missing {kind} for `{}`", labels[i]))))
            .collect()
    };
    let roots = collect(roots, "root")?;
    let coroots = collect(coroots, "coroot")?;
    Ok(Realization::custom(datum, roots, coroots)?)
}

pub fn parse_realization_text(text: &str) -> Result<Realization, FormatError> {
    parse_realization(&Sections::parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    const A2: &str = "\
# type A2
[generators]
s t
[coxeter]
1 3
3 1
";

    #[test]
    fn parses_a2() {
        let re = parse_realization_text(A2).unwrap();
        assert_eq!(re.datum().cartan(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(re.datum().labels(), &["s", "t"]);
    }

    #[test]
    fn infinity_and_cartan() {
        let text = "[generators]\n0 1\n[coxeter]\n1 0\n0 1\n[cartan]\n2 -1\n-4 2\n";
        let re = parse_realization_text(text).unwrap();
        assert_eq!(re.datum().m(0, 1), None);
        assert_eq!(re.datum().a(1, 0), -4);
    }

    #[test]
    fn custom_vectors() {
        let text = "[generators]\na\n[coxeter]\n1\n[realization]\nroot a: 1/2 0\ncoroot a: 4 7/3\n";
        let re = parse_realization_text(text).unwrap();
        assert_eq!(re.dim(), 2);
        assert_eq!(re.eval_simple(0, re.coroot(0)), int(2));
    }

    #[test]
    fn errors_name_positions() {
        let text = "[generators]\ns t\n[coxeter]\n1 3\n3 x\n";
        assert_eq!(
            parse_realization_text(text),
            Err(FormatError::Syntax { line: 5, column: 3, message: "not an integer: `x`".into() })
        );
        let text = "s t\n";
        assert!(matches!(parse_realization_text(text), Err(FormatError::Syntax { line: 1, column: 1, .. })));
        let text = "[generators]\ns t\n";
        assert_eq!(parse_realization_text(text), Err(FormatError::MissingSection("coxeter".into())));
        let text = "[generators]\ns t\n[coxeter]\n1 5\n5 1\n";
        assert!(matches!(parse_realization_text(text), Err(FormatError::Datum(_))));
    }
}
