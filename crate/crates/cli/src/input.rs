use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use chains_core::graph::{random_walk, WeightedDigraph};
use chains_core::{DenseMatrix, StateSpace, TransitionMatrix};
use serde_json::Value;

#[derive(Debug)]
pub enum InputError {
    Io(String),
    Parse { line: usize, reason: String },
    Validation(chains_core::Error),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(msg) => write!(f, "{msg}"),
            InputError::Parse { line, reason } => write!(f, "parse error at line {line}: {reason}"),
            InputError::Validation(e) => write!(f, "validation error: {e}"),
        }
    }
}

impl From<chains_core::Error> for InputError {
    fn from(e: chains_core::Error) -> Self {
        InputError::Validation(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    ChainJson,
    GraphTsv,
}

impl InputFormat {
    /// `.tsv`, `.txt` and `.edges` files are edge lists; everything else is chain JSON.
    pub fn guess(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv" | "txt" | "edges") => InputFormat::GraphTsv,
            _ => InputFormat::ChainJson,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Directive {
    Undirected,
    Directed,
}

impl Directive {
    pub fn as_str(self) -> &'static str {
        match self {
            Directive::Undirected => "undirected",
            Directive::Directed => "directed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphDocument {
    pub directive: Directive,
    pub graph: WeightedDigraph,
}

#[derive(Debug, Clone)]
pub enum Document {
    Chain(TransitionMatrix),
    Graph(GraphDocument),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Chain(_) => "chain",
            Document::Graph(_) => "graph",
        }
    }

    /// The chain itself, or the random walk on the graph.
    pub fn chain(&self) -> Result<TransitionMatrix, chains_core::Error> {
        match self {
            Document::Chain(c) => Ok(c.clone()),
            Document::Graph(g) => random_walk(&g.graph),
        }
    }
}

pub fn parse(text: &str, format: InputFormat, row_tol: f64) -> Result<Document, InputError> {
    match format {
        InputFormat::ChainJson => parse_chain(text, row_tol).map(Document::Chain),
        InputFormat::GraphTsv => parse_graph(text).map(Document::Graph),
    }
}

pub fn parse_chain(text: &str, row_tol: f64) -> Result<TransitionMatrix, InputError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| InputError::Parse {
        line: e.line(),
        reason: e.to_string(),
    })?;
    let bad = |reason: &str| InputError::Parse {
        line: 1,
        reason: reason.to_string(),
    };
    let obj = doc.as_object().ok_or_else(|| bad("expected an object with \"states\" and \"P\""))?;
    let states = obj
        .get("states")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"states\" array"))?;
    let labels = states
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("state labels must be strings")))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = obj.get("P").and_then(Value::as_array).ok_or_else(|| bad("missing \"P\" matrix"))?;
    let n = labels.len();
    if rows.len() != n {
        return Err(bad(&format!("{} states but {} rows", n, rows.len())));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad(&format!("row {i} is not an array")))?;
        if row.len() != n {
            return Err(bad(&format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for v in row {
            data.push(v.as_f64().ok_or_else(|| bad(&format!("row {i} has a non-numeric entry")))?);
        }
    }
    let space = StateSpace::new(labels)?;
    let p = DenseMatrix::new(n, n, data)?;
    Ok(TransitionMatrix::with_tolerance(space, p, row_tol)?)
}

/// Edge list: a `#undirected` or `#directed` header, then `src  dst  weight`
/// records. Other `#` lines are comments. Vertices are numbered in order of
/// first appearance; an undirected edge is stored in both orientations
/// except for self-loops, which count once.
pub fn parse_graph(text: &str) -> Result<GraphDocument, InputError> {
    let mut directive = None;
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = HashMap::new();

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| InputError::Parse { line: line_no, reason };
        if let Some(rest) = line.strip_prefix('#') {
            if directive.is_none() {
                directive = Some(match rest.trim() {
                    "undirected" => Directive::Undirected,
                    "directed" => Directive::Directed,
                    other => return Err(err(format!("expected #undirected or #directed, found #{other}"))),
                });
            }
            continue;
        }
        let directive = directive.ok_or_else(|| err("missing #undirected or #directed header".into()))?;
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let [src, dst, weight] = fields[..] else {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        };
        let w: f64 = weight.parse().map_err(|_| err(format!("weight {weight:?} is not a number")))?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(err(format!("weight {weight} must be positive and finite")));
        }
        let mut id = |label: &str| {
            *index.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (i, j) = (id(src), id(dst));
        let key = match directive {
            Directive::Undirected => (i.min(j), i.max(j)),
            Directive::Directed => (i, j),
        };
        if let Some(first) = seen.insert(key, line_no) {
            return Err(err(format!("edge {src} -> {dst} repeats line {first}")));
        }
        edges.push((i, j, w));
    }

    let directive = directive.ok_or(InputError::Parse {
        line: 1,
        reason: "missing #undirected or #directed header".into(),
    })?;
    if labels.is_empty() {
        return Err(InputError::Parse {
            line: 1,
            reason: "graph has no edges".into(),
        });
    }
    let n = labels.len();
    let mut w = DenseMatrix::zeros(n, n);
    for (i, j, x) in edges {
        w[(i, j)] = x;
        if directive == Directive::Undirected {
            w[(j, i)] = x;
        }
    }
    let graph = WeightedDigraph::new(StateSpace::new(labels)?, w)?;
    Ok(GraphDocument { directive, graph })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR_STATE: &str = r#"{"states": ["S", "P", "F", "C"],
        "P": [[0.5, 0.1, 0.2, 0.2], [1, 0, 0, 0], [0, 0, 0.5, 0.5], [1, 0, 0, 0]]}"#;

    #[test]
    fn chain_document() {
        let c = parse_chain(FOUR_STATE, 1e-9).unwrap();
        assert_eq!(c.labels(), ["S", "P", "F", "C"]);
        assert_eq!(c.p()[(0, 1)], 0.1);
    }

    #[test]
    fn short_row_is_a_validation_error() {
        let text = r#"{"states": ["a", "b"], "P": [[0.5, 0.4], [0, 1]]}"#;
        assert!(matches!(
            parse_chain(text, 1e-9),
            Err(InputError::Validation(chains_core::Error::RowSumViolation { row: 0, .. }))
        ));
    }

    #[test]
    fn malformed_json_reports_its_line() {
        let err = parse_chain("{\n\"states\": [\"a\"],\n\"P\": [[1,]]}", 1e-9).unwrap_err();
        assert!(matches!(err, InputError::Parse { line: 3, .. }));
    }

    #[test]
    fn undirected_edges_are_mirrored() {
        let g = parse_graph("#undirected\nv1\tv2\t2.0\nv2\tv2\t1.5\n").unwrap();
        let w = g.graph.w();
        assert_eq!((w[(0, 1)], w[(1, 0)]), (2.0, 2.0));
        assert_eq!(w[(1, 1)], 1.5);
        assert_eq!(g.graph.out_degrees(), vec![2.0, 3.5]);
    }

    #[test]
    fn directed_edges_are_kept_as_given() {
        let g = parse_graph("# directed\n# a comment\na b 1\nb a 3\n").unwrap();
        assert_eq!(g.directive, Directive::Directed);
        assert_eq!(g.graph.w().to_rows(), vec![vec![0.0, 1.0], vec![3.0, 0.0]]);
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        let cases = [
            ("a\tb\t1\n", 1),
            ("#undirected\na\tb\n", 2),
            ("#undirected\na\tb\t-1\n", 2),
            ("#undirected\na\tb\t1\nb\ta\t2\n", 3),
            ("#sideways\n", 1),
        ];
        for (text, line) in cases {
            match parse_graph(text) {
                Err(InputError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
