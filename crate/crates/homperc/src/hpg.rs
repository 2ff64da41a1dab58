//! The HPG text format for surface graphs.
//!
//! ```text
//! HPG 1
//! 5 4          # Schläfli symbol f d, or 0 0 when not regular
//! 30 60 24     # vertices edges faces
//! 0 1          # NE lines: edge endpoints u < v
//! ...
//! 5 0 7 12 3 9 # NF lines: face length m, then m edge ids in walk order
//! ...
//! ```
//!
//! Lines starting with `#` are comments. Only the primal graph is stored;
//! the dual is rebuilt on load.

use std::fmt::Write as _;
use std::path::Path;

use homperc_core::{build_dual, DualPair, SurfaceGraph};

use crate::error::CliError;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HpgError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing section `{0}`")]
    MissingSection(&'static str),
}

fn syntax(line: usize, message: impl Into<String>) -> HpgError {
    HpgError::Syntax {
        line,
        message: message.into(),
    }
}

/// Serializes `g` with the given comment lines (without the `#`).
pub fn to_string(g: &SurfaceGraph, comments: &[String]) -> String {
    let mut out = String::from("HPG 1\n");
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let (f, d) = g.schlafli().unwrap_or((0, 0));
    let _ = writeln!(out, "{f} {d}");
    let _ = writeln!(
        out,
        "{} {} {}",
        g.num_vertices(),
        g.num_edges(),
        g.num_faces()
    );
    for [u, v] in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    for face in g.faces() {
        let _ = write!(out, "{}", face.len());
        for e in face {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

/// Parsed file: the graph (unchecked) and its comment lines.
#[derive(Clone, Debug)]
pub struct HpgFile {
    pub graph: SurfaceGraph,
    pub comments: Vec<String>,
}

impl HpgFile {
    /// Value of a `# key: value` comment.
    pub fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments
            .iter()
            .find_map(|c| c.strip_prefix(key)?.strip_prefix(':').map(str::trim))
    }
}

pub fn parse(text: &str) -> Result<HpgFile, HpgError> {
    let mut comments = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.trim().to_string());
        } else if !trimmed.is_empty() {
            lines.push((i + 1, trimmed.split_whitespace().collect::<Vec<_>>()));
        }
    }
    let mut lines = lines.into_iter();
    let mut next = |section: &'static str| lines.next().ok_or(HpgError::MissingSection(section));
    let number = |line: usize, tok: &str, what: &str| -> Result<usize, HpgError> {
        tok.parse()
            .map_err(|_| syntax(line, format!("expected {what}, found `{tok}`")))
    };

    let (no, toks) = next("header")?;
    if toks != ["HPG", "1"] {
        return Err(syntax(no, "expected header `HPG 1`"));
    }
    let (no, toks) = next("schlafli")?;
    let schlafli = match toks.as_slice() {
        [f, d] => match (number(no, f, "face size")?, number(no, d, "vertex degree")?) {
            (0, 0) => None,
            (f, d) => Some((f, d)),
        },
        _ => return Err(syntax(no, "expected `f d`")),
    };
    let (no, toks) = next("counts")?;
    let (nv, ne, nf) = match toks.as_slice() {
        [v, e, f] => (
            number(no, v, "vertex count")?,
            number(no, e, "edge count")?,
            number(no, f, "face count")?,
        ),
        _ => return Err(syntax(no, "expected `NV NE NF`")),
    };
    let mut edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (no, toks) = next("edges")?;
        match toks.as_slice() {
            [u, v] => edges.push([number(no, u, "vertex")?, number(no, v, "vertex")?]),
            _ => {
                return Err(syntax(
                    no,
                    format!("expected edge {} of {ne} as `u v`", edges.len()),
                ))
            }
        }
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (no, toks) = next("faces")?;
        let (len, rest) = toks.split_first().expect("nonempty line");
        let len = number(no, len, "face length")?;
        if rest.len() != len {
            return Err(syntax(
                no,
                format!("face declares {len} edges but lists {}", rest.len()),
            ));
        }
        let face = rest
            .iter()
            .map(|t| number(no, t, "edge id"))
            .collect::<Result<Vec<_>, _>>()?;
        faces.push(face);
    }
    if let Some((no, _)) = lines.next() {
        return Err(syntax(no, "unexpected content after the last face"));
    }
    Ok(HpgFile {
        graph: SurfaceGraph::from_parts(schlafli, nv, edges, faces),
        comments,
    })
}

/// Reads, validates and dualizes a graph file.
pub fn load(path: &Path) -> Result<(DualPair, HpgFile), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file =
        parse(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let pair = build_dual(&file.graph)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok((pair, file))
}

pub fn save(path: &Path, g: &SurfaceGraph, comments: &[String]) -> Result<(), CliError> {
    std::fs::write(path, to_string(g, comments)).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use homperc_core::build_torus;

    #[test]
    fn round_trip() {
        let pair = build_torus(3, 4).unwrap();
        let text = to_string(pair.primal(), &["relator: abAB".into()]);
        let back = parse(&text).unwrap();
        assert_eq!(&back.graph, pair.primal());
        assert_eq!(back.comment_value("relator"), Some("abAB"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "HPG 1\n4 4\n2 1 0\n0 x\n";
        assert_eq!(
            parse(text).unwrap_err(),
            syntax(4, "expected vertex, found `x`")
        );
        let text = "HPG 1\n# c\n4 4\n3 2 1\n0 1\n1 2\n";
        assert_eq!(parse(text).unwrap_err(), HpgError::MissingSection("faces"));
        assert_eq!(parse("").unwrap_err(), HpgError::MissingSection("header"));
        let text = "HPG 1\n4 4\n2 1 1\n0 1\n2 0\n";
        assert!(matches!(
            parse(text).unwrap_err(),
            HpgError::Syntax { line: 5, .. }
        ));
        let text = "HPG 1\n4 4\n2 1 0\n0 1\n9 9\n";
        assert!(matches!(
            parse(text).unwrap_err(),
            HpgError::Syntax { line: 5, .. }
        ));
    }
}
