//! Text formats: matrices, edge partitions, chain manifests, and cylinder
//! functions. Everything is line oriented; `#` starts a comment anywhere on
//! a line and blank lines are ignored.

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, EdgeId};
use crate::matrix::IntMatrix;
use crate::scalar::Scalar;
use crate::shift::CylinderFunction;
use crate::splitting::{InPartition, OutPartition};
use crate::transpose_free::{MoveKind, Side};
use std::collections::BTreeMap;

/// Non-blank lines that are not whole-line comments. Edge labels contain
/// `#`, so only lines starting with `#` count as comments here.
fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().filter_map(|line| {
        let line = line.trim();
        (!line.is_empty() && !line.starts_with('#')).then_some(line)
    })
}

/// Matrix lines may also carry trailing `#` comments; entries never contain
/// the character.
fn matrix_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().filter_map(|line| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        (!line.is_empty()).then_some(line)
    })
}

/// Matrix format: first line `ROWS COLS`, then one line of space-separated
/// integers per row.
pub fn parse_matrix<T: Scalar>(text: &str) -> Result<IntMatrix<T>> {
    let mut lines = matrix_lines(text);
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse(format!(
            "matrix header must be 'ROWS COLS', got '{header}'"
        )));
    }
    let rows: usize = dims[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad row count '{}'", dims[0])))?;
    let cols: usize = dims[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad column count '{}'", dims[1])))?;
    let mut m = IntMatrix::zeros(rows, cols);
    let mut filled = 0usize;
    for line in lines {
        if filled >= rows {
            return Err(Error::Parse("more rows than the header declares".into()));
        }
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {cols}",
                filled + 1,
                entries.len()
            )));
        }
        for (j, entry) in entries.iter().enumerate() {
            let value: i64 = entry
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer '{entry}'")))?;
            m[(filled, j)] = T::from_i64(value);
        }
        filled += 1;
    }
    if filled != rows {
        return Err(Error::Parse(format!(
            "matrix has {filled} rows, header declares {rows}"
        )));
    }
    Ok(m)
}

pub fn render_matrix<T: Scalar>(m: &IntMatrix<T>) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    out.push_str(&m.to_string());
    out
}

/// Edge label `i->j#k`, 1-based.
pub fn parse_edge_label(g: &DirectedMultigraph, label: &str) -> Result<EdgeId> {
    let bad = || Error::Parse(format!("bad edge label '{label}', expected 'i->j#k'"));
    let (src, rest) = label.split_once("->").ok_or_else(bad)?;
    let (tgt, copy) = rest.split_once('#').ok_or_else(bad)?;
    let src: usize = src.trim().parse().map_err(|_| bad())?;
    let tgt: usize = tgt.trim().parse().map_err(|_| bad())?;
    let copy: usize = copy.trim().parse().map_err(|_| bad())?;
    if src == 0 || tgt == 0 || copy == 0 {
        return Err(bad());
    }
    g.find_edge(src - 1, tgt - 1, copy - 1)
        .ok_or_else(|| Error::Parse(format!("edge '{label}' does not exist in the graph")))
}

/// Partition format: one line per vertex, `I: e|e e|e` with `|` separating
/// blocks and whitespace separating edges; omitted vertices get the trivial
/// one-block partition.
fn parse_blocks(
    g: &DirectedMultigraph,
    text: &str,
    default_edges: impl Fn(usize) -> Vec<EdgeId>,
) -> Result<Vec<Vec<Vec<EdgeId>>>> {
    let mut per_vertex: BTreeMap<usize, Vec<Vec<EdgeId>>> = BTreeMap::new();
    for line in content_lines(text) {
        let (vertex, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("partition line '{line}' is missing ':'")))?;
        let vertex: usize = vertex
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex label '{}'", vertex.trim())))?;
        if vertex == 0 || vertex > g.num_vertices() {
            return Err(Error::Parse(format!("vertex {vertex} out of range")));
        }
        if per_vertex.contains_key(&(vertex - 1)) {
            return Err(Error::Parse(format!("vertex {vertex} appears twice")));
        }
        let mut blocks = Vec::new();
        for block_text in rest.split('|') {
            let edges: Vec<EdgeId> = block_text
                .split_whitespace()
                .map(|label| parse_edge_label(g, label))
                .collect::<Result<_>>()?;
            blocks.push(edges);
        }
        per_vertex.insert(vertex - 1, blocks);
    }
    Ok((0..g.num_vertices())
        .map(|v| {
            per_vertex
                .remove(&v)
                .unwrap_or_else(|| vec![default_edges(v)])
        })
        .collect())
}

pub fn parse_out_partition(g: &DirectedMultigraph, text: &str) -> Result<OutPartition> {
    let raw = parse_blocks(g, text, |v| g.out_edges(v))?;
    OutPartition::new(g, raw)
}

pub fn parse_in_partition(g: &DirectedMultigraph, text: &str) -> Result<InPartition> {
    let raw = parse_blocks(g, text, |v| g.in_edges(v))?;
    InPartition::new(g, raw)
}

pub fn render_out_partition(g: &DirectedMultigraph, p: &OutPartition) -> String {
    render_blocks(g, (0..g.num_vertices()).map(|v| p.inner().blocks(v)))
}

pub fn render_in_partition(g: &DirectedMultigraph, p: &InPartition) -> String {
    render_blocks(g, (0..g.num_vertices()).map(|v| p.inner().blocks(v)))
}

fn render_blocks<'a>(
    g: &DirectedMultigraph,
    blocks: impl Iterator<Item = &'a [Vec<EdgeId>]>,
) -> String {
    let mut out = String::new();
    for (v, vertex_blocks) in blocks.enumerate() {
        let rendered: Vec<String> = vertex_blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|&e| g.edge(e).label())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        out.push_str(&format!("{}: {}\n", v + 1, rendered.join("|")));
    }
    out
}

/// One chain-manifest step: `step <C-matrix-file> <D-matrix-file>`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainStepSpec {
    pub c_path: String,
    pub d_path: String,
}

pub fn parse_chain_manifest(text: &str) -> Result<Vec<ChainStepSpec>> {
    let mut steps = Vec::new();
    for line in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "step" {
            return Err(Error::Parse(format!(
                "chain manifest line '{line}' must be 'step <C-file> <D-file>'"
            )));
        }
        steps.push(ChainStepSpec {
            c_path: fields[1].to_string(),
            d_path: fields[2].to_string(),
        });
    }
    Ok(steps)
}

/// One transpose-free manifest step:
/// `tf <side> <move> <matrix-file> <partition-file>`, where the matrix and
/// partition describe the out-split witness on the stated side.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TfStepSpec {
    pub side: Side,
    pub mv: MoveKind,
    pub matrix_path: String,
    pub partition_path: String,
}

pub fn parse_tf_manifest(text: &str) -> Result<Vec<TfStepSpec>> {
    let mut steps = Vec::new();
    for line in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "tf" {
            return Err(Error::Parse(format!(
                "tf manifest line '{line}' must be 'tf <side> <move> <matrix-file> <partition-file>'"
            )));
        }
        let side = match fields[1] {
            "direct" => Side::Direct,
            "transposed" => Side::Transposed,
            other => {
                return Err(Error::Parse(format!(
                    "side must be 'direct' or 'transposed', got '{other}'"
                )))
            }
        };
        let mv = match fields[2] {
            "out-split" => MoveKind::OutSplit,
            "out-amalgamate" => MoveKind::OutAmalgamate,
            other => {
                return Err(Error::Parse(format!(
                    "move must be 'out-split' or 'out-amalgamate', got '{other}'"
                )))
            }
        };
        steps.push(TfStepSpec {
            side,
            mv,
            matrix_path: fields[3].to_string(),
            partition_path: fields[4].to_string(),
        });
    }
    Ok(steps)
}

/// Cylinder functions: `depth k` header, then `e1 e2 .. : value` per word.
pub fn render_cylinder(g: &DirectedMultigraph, f: &CylinderFunction) -> String {
    let mut out = format!("depth {}\n", f.depth());
    for (word, value) in f.values() {
        let labels: Vec<String> = word.iter().map(|&e| g.edge(e).label()).collect();
        if labels.is_empty() {
            out.push_str(&format!(": {value}\n"));
        } else {
            out.push_str(&format!("{} : {value}\n", labels.join(" ")));
        }
    }
    out
}

pub fn parse_cylinder(g: &DirectedMultigraph, text: &str, cap: u128) -> Result<CylinderFunction> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty cylinder function".into()))?;
    let depth: usize = header
        .strip_prefix("depth")
        .map(str::trim)
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad cylinder header '{header}'")))?;
    let mut values = BTreeMap::new();
    for line in lines {
        let (word_text, value_text) = line
            .rsplit_once(':')
            .ok_or_else(|| Error::Parse(format!("cylinder line '{line}' is missing ':'")))?;
        let word: Vec<EdgeId> = word_text
            .split_whitespace()
            .map(|label| parse_edge_label(g, label))
            .collect::<Result<_>>()?;
        let value: i64 = value_text
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad value '{}'", value_text.trim())))?;
        if values.insert(word, value).is_some() {
            return Err(Error::Parse(format!("word '{}' appears twice", word_text.trim())));
        }
    }
    CylinderFunction::new(g, depth, values, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_matrix;
    use crate::graph::TransitionMatrix;

    #[test]
    fn matrix_round_trip_with_comments() {
        let text = "# golden mean\n2 2\n1 1  # first row\n1 0\n";
        let m: IntMatrix<i64> = parse_matrix(text).unwrap();
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[1, 1], &[1, 0]]));
        let back: IntMatrix<i64> = parse_matrix(&render_matrix(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn matrix_rejects_bad_shapes() {
        assert!(parse_matrix::<i64>("2 2\n1 1\n").is_err());
        assert!(parse_matrix::<i64>("2 2\n1 1 1\n1 0\n").is_err());
        assert!(parse_matrix::<i64>("2\n1 1\n1 0\n").is_err());
    }

    #[test]
    fn partition_round_trip_and_defaults() {
        let g = from_matrix(&TransitionMatrix::<i64>::from_i64_rows(&[&[1, 1], &[1, 0]]))
            .unwrap();
        let p = parse_out_partition(&g, "1: 1->1#1|1->2#1\n").unwrap();
        assert_eq!(p.inner().blocks(0), &[vec![0], vec![1]]);
        // vertex 2 omitted: trivial block
        assert_eq!(p.inner().blocks(1), &[vec![2]]);

        let rendered = render_out_partition(&g, &p);
        let p2 = parse_out_partition(&g, &rendered).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn in_partition_uses_in_edges() {
        let g = from_matrix(&TransitionMatrix::<i64>::from_i64_rows(&[&[1, 1], &[1, 0]]))
            .unwrap();
        let p = parse_in_partition(&g, "1: 1->1#1|2->1#1\n").unwrap();
        assert_eq!(p.inner().blocks(0), &[vec![0], vec![2]]);
        assert_eq!(p.inner().blocks(1), &[vec![1]]);
        assert!(parse_in_partition(&g, "1: 1->2#1\n").is_err());
    }

    #[test]
    fn manifests_parse() {
        let chain = parse_chain_manifest("# two steps\nstep c1.mat d1.mat\nstep c2.mat d2.mat\n")
            .unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[0].c_path, "c1.mat");

        let tf = parse_tf_manifest("tf direct out-split a.mat p.txt\ntf transposed out-amalgamate b.mat q.txt\n").unwrap();
        assert_eq!(tf.len(), 2);
        assert_eq!(tf[0].side, Side::Direct);
        assert_eq!(tf[1].mv, MoveKind::OutAmalgamate);

        assert!(parse_tf_manifest("tf sideways out-split a b\n").is_err());
        assert!(parse_chain_manifest("step only-one\n").is_err());
    }

    #[test]
    fn cylinder_round_trip() {
        let g = from_matrix(&TransitionMatrix::<i64>::from_i64_rows(&[&[1, 1], &[1, 0]]))
            .unwrap();
        let f = CylinderFunction::indicator(&g, &[0], 1 << 20).unwrap();
        let rendered = render_cylinder(&g, &f);
        assert!(rendered.starts_with("depth 1\n"));
        let parsed = parse_cylinder(&g, &rendered, 1 << 20).unwrap();
        assert_eq!(parsed, f);
    }
}
