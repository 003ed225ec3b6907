//! The `.fctp` instance text format and the companion solution format.
//!
//! ```text
//! fctp 1
//! 2 3
//! capacity: 30 40
//! opening: 100 120
//! unitcost: 2 3
//! demand: 10 20 15
//! fixed:
//! 50 60 70
//! 55 65 75
//! cost:
//! 1 2 3
//! 4 5 6
//! emissions: 0.02 0.02 0.04 0.04 150000
//! ```
//!
//! `#` starts a comment that runs to the end of the line; blank lines are
//! ignored. Emission factors are stored on disk in scalar form only, in the
//! order `alpha_man alpha beta_man beta ghg_cap`.
//!
//! Solutions are `m n` followed by `m` rows of `n` flow values.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::model::{Customer, DistributionCenter, EmissionParams, Instance, Matrix, Solution};

pub const MAGIC: &str = "fctp";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error("emission factors differ per center or edge; the file format stores scalars only")]
    NonScalarEmissions,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Significant lines with their one-based line numbers.
struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines { inner: it.peekable() }
    }

    fn next(&mut self, expecting: &str) -> Result<(usize, &'a str), FormatError> {
        self.inner
            .next()
            .ok_or_else(|| FormatError::Truncated(format!("expected {expecting}")))
    }

    fn finish(mut self) -> Result<(), FormatError> {
        match self.inner.next() {
            Some((line, text)) => Err(syntax(line, format!("trailing content `{text}`"))),
            None => Ok(()),
        }
    }
}

fn parse_number(line: usize, token: &str) -> Result<f64, FormatError> {
    let v: f64 = token
        .parse()
        .map_err(|_| syntax(line, format!("`{token}` is not a number")))?;
    if !v.is_finite() {
        return Err(syntax(line, format!("`{token}` is not finite")));
    }
    Ok(v)
}

fn parse_values(line: usize, text: &str, expected: usize, what: &str) -> Result<Vec<f64>, FormatError> {
    let values = text
        .split_whitespace()
        .map(|t| parse_number(line, t))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != expected {
        return Err(syntax(
            line,
            format!("{what}: expected {expected} values, found {}", values.len()),
        ));
    }
    Ok(values)
}

fn parse_dims(line: usize, text: &str) -> Result<(usize, usize), FormatError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let [m, n] = tokens[..] else {
        return Err(syntax(line, "expected `m n`"));
    };
    let dim = |t: &str| match t.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(syntax(line, format!("`{t}` is not a positive integer"))),
    };
    Ok((dim(m)?, dim(n)?))
}

fn labeled<'a>(lines: &mut Lines<'a>, label: &str) -> Result<(usize, &'a str), FormatError> {
    let (line, text) = lines.next(&format!("`{label}:`"))?;
    match text.split_once(':') {
        Some((head, rest)) if head.trim() == label => Ok((line, rest.trim())),
        _ => Err(syntax(line, format!("expected `{label}:`"))),
    }
}

fn parse_matrix(lines: &mut Lines<'_>, label: &str, m: usize, n: usize) -> Result<Matrix, FormatError> {
    let (line, rest) = labeled(lines, label)?;
    if !rest.is_empty() {
        return Err(syntax(
            line,
            format!("`{label}:` must be followed by {m} rows on their own lines"),
        ));
    }
    let mut data = Vec::with_capacity(m * n);
    for i in 0..m {
        let (line, text) = lines.next(&format!("row {} of `{label}`", i + 1))?;
        data.extend(parse_values(line, text, n, &format!("{label} row {}", i + 1))?);
    }
    Ok(Matrix::from_vec(m, n, data).expect("row lengths checked"))
}

/// Parses an instance and its emission parameters.
pub fn parse_instance(text: &str) -> Result<(Instance, EmissionParams), FormatError> {
    let mut lines = Lines::new(text);

    let (line, header) = lines.next("header `fctp 1`")?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    match tokens[..] {
        [MAGIC, v] if v.parse::<u32>() == Ok(VERSION) => {}
        [MAGIC, v] => return Err(syntax(line, format!("unsupported format version `{v}`"))),
        _ => return Err(syntax(line, "expected header `fctp 1`")),
    }

    let (line, dims) = lines.next("dimensions `m n`")?;
    let (m, n) = parse_dims(line, dims)?;

    let mut vector = |label: &str, len: usize| -> Result<Vec<f64>, FormatError> {
        let (line, rest) = labeled(&mut lines, label)?;
        parse_values(line, rest, len, label)
    };
    let capacity = vector("capacity", m)?;
    let opening = vector("opening", m)?;
    let unitcost = vector("unitcost", m)?;
    let demand = vector("demand", n)?;

    let edge_fixed_cost = parse_matrix(&mut lines, "fixed", m, n)?;
    let edge_unit_cost = parse_matrix(&mut lines, "cost", m, n)?;

    let (line, rest) = labeled(&mut lines, "emissions")?;
    let e = parse_values(line, rest, 5, "emissions")?;
    let params = EmissionParams::uniform(e[0], e[1], e[2], e[3], e[4]);
    lines.finish()?;

    let centers = (0..m)
        .map(|i| DistributionCenter {
            capacity: capacity[i],
            opening_cost: opening[i],
            unit_transport_cost: unitcost[i],
        })
        .collect();
    let customers = demand.into_iter().map(|demand| Customer { demand }).collect();
    Ok((
        Instance {
            centers,
            customers,
            edge_fixed_cost,
            edge_unit_cost,
        },
        params,
    ))
}

fn push_values(out: &mut String, values: impl IntoIterator<Item = f64>) {
    for (k, v) in values.into_iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        // shortest representation that parses back to the same f64
        write!(out, "{v}").unwrap();
    }
}

fn push_labeled(out: &mut String, label: &str, values: impl IntoIterator<Item = f64>) {
    out.push_str(label);
    out.push_str(": ");
    push_values(out, values);
    out.push('\n');
}

fn push_matrix(out: &mut String, label: &str, mat: &Matrix) {
    out.push_str(label);
    out.push_str(":\n");
    for row in mat.iter_rows() {
        push_values(out, row.iter().copied());
        out.push('\n');
    }
}

/// Writes the canonical text form. Fails only when the emission factors are
/// not expressible as scalars.
pub fn serialize_instance(instance: &Instance, params: &EmissionParams) -> Result<String, FormatError> {
    let (alpha_man, alpha, beta_man, beta, cap) = params.as_scalars().ok_or(FormatError::NonScalarEmissions)?;
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "{} {}", instance.num_centers(), instance.num_customers()).unwrap();
    push_labeled(&mut out, "capacity", instance.centers.iter().map(|c| c.capacity));
    push_labeled(&mut out, "opening", instance.centers.iter().map(|c| c.opening_cost));
    push_labeled(
        &mut out,
        "unitcost",
        instance.centers.iter().map(|c| c.unit_transport_cost),
    );
    push_labeled(&mut out, "demand", instance.customers.iter().map(|c| c.demand));
    push_matrix(&mut out, "fixed", &instance.edge_fixed_cost);
    push_matrix(&mut out, "cost", &instance.edge_unit_cost);
    push_labeled(&mut out, "emissions", [alpha_man, alpha, beta_man, beta, cap]);
    Ok(out)
}

pub fn parse_solution(text: &str) -> Result<Solution, FormatError> {
    let mut lines = Lines::new(text);
    let (line, dims) = lines.next("dimensions `m n`")?;
    let (m, n) = parse_dims(line, dims)?;
    let mut data = Vec::with_capacity(m * n);
    for i in 0..m {
        let (line, text) = lines.next(&format!("flow row {}", i + 1))?;
        let row = parse_values(line, text, n, &format!("flow row {}", i + 1))?;
        if let Some(v) = row.iter().find(|v| **v < 0.0) {
            return Err(syntax(line, format!("negative flow {v}")));
        }
        data.extend(row);
    }
    lines.finish()?;
    Ok(Solution::new(
        Matrix::from_vec(m, n, data).expect("row lengths checked"),
    ))
}

pub fn serialize_solution(solution: &Solution) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", solution.num_centers(), solution.num_customers()).unwrap();
    for row in solution.flow.iter_rows() {
        push_values(&mut out, row.iter().copied());
        out.push('\n');
    }
    out
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<(Instance, EmissionParams), FormatError> {
    let path = path.as_ref();
    parse_instance(&read(path)?).map_err(|e| match e {
        FormatError::Syntax { line, message } => FormatError::Syntax {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance, params: &EmissionParams) -> Result<(), FormatError> {
    let path = path.as_ref();
    let text = serialize_instance(instance, params)?;
    std::fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<Solution, FormatError> {
    parse_solution(&read(path.as_ref())?)
}
