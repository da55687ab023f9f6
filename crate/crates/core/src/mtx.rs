//! Matrix Market coordinate files.
//!
//! Reads `real`, `integer` and `pattern` fields with `general` or `symmetric`
//! storage. Symmetric files are expanded to both triangles on read. Pattern
//! entries get the value 1.0.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::csr::{CooTriple, CsrMatrix, Duplicates};
use crate::error::{Result, SpgemmError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    let path = path.as_ref();
    let file = File::open(path)?;
    parse_matrix_market(BufReader::new(file), path)
}

/// Parses Matrix Market text from any reader. `origin` is only used in error
/// messages.
pub fn parse_matrix_market<R: Read>(reader: R, origin: &Path) -> Result<CsrMatrix> {
    let reader = BufReader::new(reader);
    let err = |line: usize, msg: String| SpgemmError::Parse { path: PathBuf::from(origin), line, msg };

    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (lno, header) = match lines.next() {
        Some((n, l)) => (n, l?),
        None => return Err(err(1, "empty file".into())),
    };
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(lno, format!("bad header: {header:?}")));
    }
    if tokens[2] != "coordinate" {
        return Err(err(lno, format!("unsupported format {:?}; only coordinate is read", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(err(lno, format!("unsupported field {other:?}"))),
    };
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(err(lno, format!("unsupported symmetry {other:?}"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triples: Vec<CooTriple> = Vec::new();
    let mut read_entries = 0usize;

    for (lno, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let mut next_usize = |what: &str| -> Result<usize> {
            let tok = it.next().ok_or_else(|| err(lno, format!("missing {what}")))?;
            tok.parse::<usize>().map_err(|_| err(lno, format!("bad {what}: {tok:?}")))
        };
        match size {
            None => {
                let m = next_usize("row count")?;
                let n = next_usize("column count")?;
                let nnz = next_usize("entry count")?;
                triples.reserve(if symmetric { 2 * nnz } else { nnz });
                size = Some((m, n, nnz));
            }
            Some((m, n, nnz)) => {
                let i = next_usize("row index")?;
                let j = next_usize("column index")?;
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(err(lno, format!("index ({i}, {j}) outside {m}x{n}")));
                }
                let val = match field {
                    Field::Pattern => 1.0,
                    Field::Real | Field::Integer => {
                        let tok = it.next().ok_or_else(|| err(lno, "missing value".into()))?;
                        tok.parse::<f64>().map_err(|_| err(lno, format!("bad value: {tok:?}")))?
                    }
                };
                read_entries += 1;
                if read_entries > nnz {
                    return Err(err(lno, format!("more than the declared {nnz} entries")));
                }
                let (r, c) = (i - 1, j - 1);
                triples.push(CooTriple::new(r, c, val));
                if symmetric && r != c {
                    triples.push(CooTriple::new(c, r, val));
                }
            }
        }
    }

    let Some((m, n, nnz)) = size else {
        return Err(err(0, "missing size line".into()));
    };
    if read_entries != nnz {
        return Err(err(0, format!("declared {nnz} entries but read {read_entries}")));
    }
    CsrMatrix::from_triples(m, n, &triples, Duplicates::Sum)
}

/// Writes `general` real coordinate format with 1-based indices.
pub fn write_matrix_market(path: impl AsRef<Path>, m: &CsrMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_market_to(&mut w, m)?;
    w.flush()?;
    Ok(())
}

pub fn write_matrix_market_to<W: Write>(w: &mut W, m: &CsrMatrix) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for i in 0..m.nrows() {
        let (cols, vals) = m.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            writeln!(w, "{} {} {:e}", i + 1, c + 1, v)?;
        }
    }
    Ok(())
}
