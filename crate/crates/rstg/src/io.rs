//! Text graph files.
//!
//! ```text
//! tg 1
//! n <N>
//! e <u> <v> <stamp>
//! ```
//!
//! One `e` line per edge with `u < v`, stamps printed with 17 significant
//! digits so doubles survive the round trip. Lines starting with `#` are
//! comments; blank lines are ignored.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rstg_core::{TemporalGraph, Vertex};

use crate::{Error, Result};

const MAGIC: &str = "tg";
const VERSION: &str = "1";

/// Formats like C's `%.17g`: 17 significant digits, fixed notation for
/// decimal exponents in `[-4, 17)`, trailing zeros removed.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `g` in the text format.
pub fn write_graph<W: Write>(g: &TemporalGraph, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{MAGIC} {VERSION}")?;
    writeln!(out, "n {}", g.n())?;
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, format_g17(e.stamp))?;
    }
    out.flush()?;
    Ok(())
}

/// Parses and validates a graph. Edge ids follow line order.
pub fn read_graph<R: Read>(input: R) -> Result<TemporalGraph> {
    let reader = BufReader::new(input);
    let mut n: Option<usize> = None;
    let mut seen_magic = false;
    let mut triples: Vec<(Vertex, Vertex, f64)> = Vec::new();
    let mut lines_of_edges = Vec::new();
    let mut pairs: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if !seen_magic {
            match fields.as_slice() {
                [MAGIC, VERSION] => seen_magic = true,
                [MAGIC, v] => return Err(Error::parse(line_no, format!("unsupported format version {v}"))),
                _ => return Err(Error::parse(line_no, "expected header `tg 1`")),
            }
            continue;
        }
        let Some(count) = n else {
            match fields.as_slice() {
                ["n", value] => {
                    n = Some(
                        value
                            .parse()
                            .map_err(|_| Error::parse(line_no, format!("bad vertex count `{value}`")))?,
                    );
                    continue;
                }
                _ => return Err(Error::parse(line_no, "expected `n <N>`")),
            }
        };
        let ["e", u, v, stamp] = fields.as_slice() else {
            return Err(Error::parse(line_no, "expected `e <u> <v> <stamp>`"));
        };
        let vertex = |s: &str| -> Result<Vertex> {
            let x: Vertex = s
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad vertex `{s}`")))?;
            if x >= count {
                return Err(Error::parse(line_no, format!("vertex {x} out of range for n = {count}")));
            }
            Ok(x)
        };
        let (u, v) = (vertex(u)?, vertex(v)?);
        if u >= v {
            return Err(Error::parse(line_no, format!("edge endpoints must satisfy u < v, got {u} {v}")));
        }
        let stamp: f64 = stamp
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad stamp `{stamp}`")))?;
        if !(stamp.is_finite() && stamp > 0.0 && stamp < 1.0) {
            return Err(Error::parse(line_no, format!("stamp {stamp} outside (0,1)")));
        }
        if let Some(first) = pairs.insert((u, v), line_no) {
            return Err(Error::parse(
                line_no,
                format!("duplicate edge {{{u},{v}}} (first on line {first})"),
            ));
        }
        triples.push((u, v, stamp));
        lines_of_edges.push(line_no);
    }
    if !seen_magic {
        return Err(Error::parse(1, "missing header `tg 1`"));
    }
    let n = n.ok_or_else(|| Error::parse(2, "missing vertex count line"))?;
    TemporalGraph::from_triples(n, triples).map_err(|e| {
        let line = match &e {
            rstg_core::Error::DuplicatePair { index, .. }
            | rstg_core::Error::StampOutOfRange { index, .. }
            | rstg_core::Error::SelfLoop { index, .. } => lines_of_edges[*index],
            _ => 0,
        };
        Error::parse(line, e.to_string())
    })
}

/// Writes `g` to `path`.
pub fn save_graph(g: &TemporalGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_graph(g, file)
}

/// Reads a graph from `path`.
pub fn load_graph(path: impl AsRef<Path>) -> Result<TemporalGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_graph(file)
}
