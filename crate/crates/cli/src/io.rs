//! Matrix text formats.
//!
//! `dense_text`: a line holding the order `n`, then `n` lines of `n`
//! whitespace-separated decimals.
//!
//! `coordinate_text`: a line `n nnz`, then `nnz` lines `i j value` with
//! one-based indices on the upper triangle (`i <= j`); the lower triangle is
//! mirrored on load. Missing entries are zero.
//!
//! Blank lines are ignored. The header decides the format.

use std::fmt::Write as _;
use std::path::Path;

use sddapprox::matrix::DEFAULT_SYMMETRY_TOL;
use sddapprox::{Error, SymMatrix};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    DenseText,
    CoordinateText,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::DenseText => "dense_text",
            Format::CoordinateText => "coordinate_text",
        }
    }
}

/// Shortest decimal that parses back to the same `f64`; scientific notation
/// outside `[1e-5, 1e17)`.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e17).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn write_dense(m: &SymMatrix<f64>) -> String {
    let n = m.order();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = m.row(i).iter().map(|&x| format_real(x)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Upper-triangle nonzeros in row-major order.
pub fn write_coordinate(m: &SymMatrix<f64>) -> String {
    let n = m.order();
    let entries: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, m.get(i, j)))
        .filter(|e| e.2 != 0.0)
        .collect();
    let mut out = format!("{n} {}\n", entries.len());
    for (i, j, x) in entries {
        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, format_real(x));
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next nonblank line with its one-based number.
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (k, line) in self.inner.by_ref() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !toks.is_empty() {
                return Some((k + 1, toks));
            }
        }
        None
    }
}

/// Parses either format; `source_name` labels error messages.
pub fn parse_matrix(text: &str, source_name: &str) -> CliResult<(SymMatrix<f64>, Format)> {
    let err = |line: usize, msg: String| CliError::Parse {
        source_name: source_name.to_string(),
        line,
        msg,
    };
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let parse_count = |tok: &str, what: &str| {
        tok.parse::<usize>().map_err(|_| {
            err(
                hline,
                format!("{what} must be a nonnegative integer, got {tok:?}"),
            )
        })
    };
    let parse_real = |line: usize, tok: &str| {
        tok.parse::<f64>()
            .map_err(|_| err(line, format!("not a decimal literal: {tok:?}")))
    };
    let (n, format) = match header.as_slice() {
        [n] => (parse_count(n, "order")?, Format::DenseText),
        [n, _] => (parse_count(n, "order")?, Format::CoordinateText),
        _ => {
            return Err(err(
                hline,
                format!(
                    "header must be \"n\" or \"n nnz\", got {} fields",
                    header.len()
                ),
            ))
        }
    };
    if n == 0 {
        return Err(err(hline, "order must be at least 1".into()));
    }
    if n > sddapprox::MAX_ORDER {
        return Err(CliError::Core(Error::TooLarge(n)));
    }
    let mut data = vec![0.0; n * n];
    let mut last = hline;
    match format {
        Format::DenseText => {
            for i in 0..n {
                let (k, toks) = lines
                    .next()
                    .ok_or_else(|| err(last + 1, format!("expected {n} rows, found {i}")))?;
                if toks.len() != n {
                    return Err(err(
                        k,
                        format!("row {} has {} entries, expected {n}", i + 1, toks.len()),
                    ));
                }
                for (j, tok) in toks.iter().enumerate() {
                    data[i * n + j] = parse_real(k, tok)?;
                }
                last = k;
            }
        }
        Format::CoordinateText => {
            let nnz = parse_count(header[1], "entry count")?;
            let mut seen = vec![false; n * n];
            for e in 0..nnz {
                let (k, toks) = lines
                    .next()
                    .ok_or_else(|| err(last + 1, format!("expected {nnz} entries, found {e}")))?;
                let [i, j, x] = toks.as_slice() else {
                    return Err(err(
                        k,
                        format!("entry must be \"i j value\", got {} fields", toks.len()),
                    ));
                };
                let index = |tok: &str| match tok.parse::<usize>() {
                    Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                    _ => Err(err(
                        k,
                        format!("index must be an integer in 1..={n}, got {tok:?}"),
                    )),
                };
                let (i, j) = (index(i)?, index(j)?);
                if i > j {
                    return Err(err(
                        k,
                        format!("entry ({}, {}) is below the diagonal", i + 1, j + 1),
                    ));
                }
                if seen[i * n + j] {
                    return Err(err(k, format!("duplicate entry ({}, {})", i + 1, j + 1)));
                }
                seen[i * n + j] = true;
                let x = parse_real(k, x)?;
                data[i * n + j] = x;
                data[j * n + i] = x;
                last = k;
            }
        }
    }
    if let Some((k, _)) = lines.next() {
        return Err(err(k, "unexpected content after the matrix".into()));
    }
    if let Some(p) = data.iter().position(|x| !x.is_finite()) {
        return Err(err(
            hline,
            format!("entry ({}, {}) is not finite", p / n + 1, p % n + 1),
        ));
    }
    match SymMatrix::from_row_major(n, data, DEFAULT_SYMMETRY_TOL) {
        Ok(m) => Ok((m, format)),
        Err(Error::Asymmetric {
            row,
            col,
            deviation,
        }) => Err(CliError::Asymmetric {
            source_name: source_name.to_string(),
            row: row + 1,
            col: col + 1,
            deviation,
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn read_matrix(path: &Path) -> CliResult<(SymMatrix<f64>, Format)> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: name.clone(),
        source,
    })?;
    parse_matrix(&text, &name)
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
