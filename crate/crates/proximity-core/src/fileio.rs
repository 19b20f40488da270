//! The problem-file format: a line-oriented text document describing one
//! proximity problem, with optional comparison-function selection.
//!
//! ```text
//! # comments run to the end of the line
//! points            # one point per line: label alone (table mode)
//!   p0              # or label followed by coordinates (Euclidean mode)
//!   p1
//! end
//! dist              # required exactly when points carry no coordinates:
//!   p1 p0 2.5       # one entry per unordered pair of distinct points
//! end
//! s1
//!   p0
//! end
//! s2
//!   p1
//! end
//! phi               # one `from to` pair per line; total on s1, into s2
//!   p0 p1
//! end
//! psi
//!   p0 p1
//! end
//! tol_eq 0          # optional, default 0
//! tol_conv 1e-9     # optional, default 1e-9
//! discretized       # optional flag
//! f f1              # optional: f1|f2|f3|f4, or `f custom` + table block
//! ```
//!
//! Labels are whitespace-free tokens. Distances and tolerances are decimal
//! literals parsed to the nearest double. Every violated invariant is
//! reported with the line number of the offending entry or section.

use std::fmt::Write as _;

use crate::error::{Error, ParseError};
use crate::ffunc::{FFunction, FKind};
use crate::problem::ProximityProblem;
use crate::real::Real;
use crate::space::{euclidean_table, metric_closure, FiniteMetricSpace};

/// A parsed problem plus the comparison function the file selected, if any.
#[derive(Debug, Clone)]
pub struct ParsedProblem<T: Real> {
    pub problem: ProximityProblem<T>,
    pub f: Option<FFunction<T>>,
}

struct Section {
    header_line: usize,
    entries: Vec<(usize, Vec<String>)>,
}

/// An `f` directive: its line, the arguments after the keyword, and the
/// table block for custom kinds.
type FSelection = (usize, Vec<String>, Vec<(usize, Vec<String>)>);

fn parse_value<T: Real>(token: &str, line: usize) -> Result<T, ParseError> {
    let value: f64 = token
        .parse()
        .map_err(|_| ParseError::new(line, format!("expected a decimal literal, got {token:?}")))?;
    T::from_f64(value)
        .ok_or_else(|| ParseError::new(line, format!("value {token} does not fit the scalar type")))
}

fn anchor(err: Error, line: usize) -> ParseError {
    ParseError::new(line, err.to_string())
}

/// Parses one problem document.
pub fn parse_problem<T: Real>(text: &str) -> Result<ParsedProblem<T>, ParseError> {
    let mut points: Option<Section> = None;
    let mut dist: Option<Section> = None;
    let mut s1: Option<Section> = None;
    let mut s2: Option<Section> = None;
    let mut phi: Option<Section> = None;
    let mut psi: Option<Section> = None;
    let mut f_section: Option<FSelection> = None;
    let mut tol_eq: Option<(usize, T)> = None;
    let mut tol_conv: Option<(usize, T)> = None;
    let mut discretized = false;

    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, raw)) = lines.next() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<String> = content.split_whitespace().map(str::to_string).collect();
        if tokens.is_empty() {
            continue;
        }
        let keyword = tokens[0].as_str();
        let read_block = |lines: &mut std::iter::Peekable<
            std::iter::Enumerate<std::str::Lines>,
        >|
         -> Result<Vec<(usize, Vec<String>)>, ParseError> {
            let mut entries = Vec::new();
            loop {
                let Some((idx, raw)) = lines.next() else {
                    return Err(ParseError::new(
                        line_no,
                        format!("section {keyword:?} is not closed by `end`"),
                    ));
                };
                let inner = raw.split('#').next().unwrap_or("");
                let toks: Vec<String> = inner.split_whitespace().map(str::to_string).collect();
                if toks.is_empty() {
                    continue;
                }
                if toks[0] == "end" {
                    return Ok(entries);
                }
                entries.push((idx + 1, toks));
            }
        };
        match keyword {
            "points" | "dist" | "s1" | "s2" | "phi" | "psi" => {
                let slot = match keyword {
                    "points" => &mut points,
                    "dist" => &mut dist,
                    "s1" => &mut s1,
                    "s2" => &mut s2,
                    "phi" => &mut phi,
                    _ => &mut psi,
                };
                if slot.is_some() {
                    return Err(ParseError::new(line_no, format!("duplicate section {keyword:?}")));
                }
                let entries = read_block(&mut lines)?;
                *slot = Some(Section { header_line: line_no, entries });
            }
            "tol_eq" | "tol_conv" => {
                if tokens.len() != 2 {
                    return Err(ParseError::new(
                        line_no,
                        format!("{keyword} expects exactly one value"),
                    ));
                }
                let value = parse_value::<T>(&tokens[1], line_no)?;
                let slot = if keyword == "tol_eq" { &mut tol_eq } else { &mut tol_conv };
                if slot.is_some() {
                    return Err(ParseError::new(line_no, format!("duplicate {keyword}")));
                }
                *slot = Some((line_no, value));
            }
            "discretized" => {
                discretized = true;
            }
            "f" => {
                if f_section.is_some() {
                    return Err(ParseError::new(line_no, "duplicate f selection"));
                }
                if tokens.len() < 2 {
                    return Err(ParseError::new(
                        line_no,
                        "f expects a kind: f1|f2|f3|f4 or custom",
                    ));
                }
                let args = tokens[1..].to_vec();
                let table = if args[0] == "custom" { read_block(&mut lines)? } else { Vec::new() };
                f_section = Some((line_no, args, table));
            }
            other => {
                return Err(ParseError::new(line_no, format!("unknown directive {other:?}")));
            }
        }
    }

    let points = points.ok_or_else(|| ParseError::new(1, "missing `points` section"))?;
    if points.entries.is_empty() {
        return Err(ParseError::new(points.header_line, "the points section is empty"));
    }
    let coordinate_mode = points.entries[0].1.len() > 1;
    let mut labels = Vec::new();
    let mut coords = Vec::new();
    for (line, toks) in &points.entries {
        labels.push(toks[0].clone());
        if coordinate_mode {
            if toks.len() < 2 {
                return Err(ParseError::new(
                    *line,
                    "mixed point styles: this line has no coordinates",
                ));
            }
            let mut tuple = Vec::with_capacity(toks.len() - 1);
            for tok in &toks[1..] {
                tuple.push(parse_value::<T>(tok, *line)?);
            }
            coords.push(tuple);
        } else if toks.len() != 1 {
            return Err(ParseError::new(
                *line,
                "mixed point styles: this line has coordinates but the first point did not",
            ));
        }
    }

    let space = if coordinate_mode {
        if let Some(d) = &dist {
            return Err(ParseError::new(
                d.header_line,
                "a dist section is not allowed when points carry coordinates",
            ));
        }
        // Coordinates describe Euclidean geometry, which satisfies the
        // triangle inequality exactly in the reals; the closure repairs the
        // ulp that independently rounded collinear triples can lose.
        let mut table =
            euclidean_table(&coords).map_err(|e| anchor(e, points.header_line))?;
        metric_closure(&mut table);
        FiniteMetricSpace::from_table(labels, table)
            .map_err(|e| anchor(e, points.header_line))?
    } else {
        let dist = dist.ok_or_else(|| {
            ParseError::new(points.header_line, "points without coordinates need a dist section")
        })?;
        let mut entries = Vec::new();
        for (line, toks) in &dist.entries {
            if toks.len() != 3 {
                return Err(ParseError::new(*line, "dist entries are `label label value`"));
            }
            let value = parse_value::<T>(&toks[2], *line)?;
            if !(value.is_finite() && value > T::zero()) {
                return Err(ParseError::new(
                    *line,
                    format!("distance between distinct points must be positive, got {}", toks[2]),
                ));
            }
            entries.push((toks[0].clone(), toks[1].clone(), value));
        }
        FiniteMetricSpace::from_pair_entries(labels, &entries)
            .map_err(|e| anchor(e, dist.header_line))?
    };

    let subset = |section: &Option<Section>, name: &str| -> Result<(usize, Vec<String>), ParseError> {
        let section = section
            .as_ref()
            .ok_or_else(|| ParseError::new(1, format!("missing `{name}` section")))?;
        let mut members = Vec::new();
        for (_, toks) in &section.entries {
            members.extend(toks.iter().cloned());
        }
        Ok((section.header_line, members))
    };
    let (s1_line, s1_members) = subset(&s1, "s1")?;
    let (_, s2_members) = subset(&s2, "s2")?;

    let mapping = |section: &Option<Section>, name: &str| -> Result<(usize, Vec<(String, String)>), ParseError> {
        let section = section
            .as_ref()
            .ok_or_else(|| ParseError::new(1, format!("missing `{name}` section")))?;
        let mut pairs = Vec::new();
        for (line, toks) in &section.entries {
            if toks.len() != 2 {
                return Err(ParseError::new(*line, format!("{name} entries are `from to`")));
            }
            pairs.push((toks[0].clone(), toks[1].clone()));
        }
        Ok((section.header_line, pairs))
    };
    let (phi_line, phi_pairs) = mapping(&phi, "phi")?;
    let (psi_line, psi_pairs) = mapping(&psi, "psi")?;

    let tol_eq_value = tol_eq.map(|(_, v)| v).unwrap_or_else(T::zero);
    let (tol_line, tol_conv_value) = match tol_conv {
        Some((line, v)) => (line, v),
        None => (s1_line, T::from_f64_lit(1e-9)),
    };

    let s1_refs: Vec<&str> = s1_members.iter().map(String::as_str).collect();
    let s2_refs: Vec<&str> = s2_members.iter().map(String::as_str).collect();
    let phi_refs: Vec<(&str, &str)> =
        phi_pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let psi_refs: Vec<(&str, &str)> =
        psi_pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();

    let problem = ProximityProblem::new(
        space,
        &s1_refs,
        &s2_refs,
        &phi_refs,
        &psi_refs,
        tol_eq_value,
        tol_conv_value,
    )
    .map_err(|e| {
        let line = match &e {
            Error::EmptySubset { which: "s1" } | Error::UnknownPoint(_) => s1_line,
            Error::InvalidMapping { which: "psi", .. } => psi_line,
            Error::InvalidMapping { .. } => phi_line,
            Error::InvalidTolerance(_) => tol_eq.map(|(l, _)| l).unwrap_or(tol_line),
            _ => s1_line,
        };
        anchor(e, line)
    })?
    .with_discretized(discretized);

    let f = match f_section {
        None => None,
        Some((line, args, table)) => {
            if args[0] == "custom" {
                let mut samples = Vec::new();
                for (entry_line, toks) in &table {
                    if toks.len() != 2 {
                        return Err(ParseError::new(
                            *entry_line,
                            "custom f entries are `alpha value`",
                        ));
                    }
                    samples.push((
                        parse_value::<T>(&toks[0], *entry_line)?,
                        parse_value::<T>(&toks[1], *entry_line)?,
                    ));
                }
                let mut f =
                    FFunction::custom_table(samples).map_err(|e| anchor(e, line))?;
                if args.len() > 1 {
                    let k = parse_value::<T>(&args[1], line)?;
                    f = f.with_k(k).map_err(|e| anchor(e, line))?;
                }
                Some(f)
            } else {
                Some(FFunction::by_name(&args[0]).ok_or_else(|| {
                    ParseError::new(line, format!("unknown f kind {:?}", args[0]))
                })?)
            }
        }
    };

    Ok(ParsedProblem { problem, f })
}

/// Serializes a problem back into the file format.
///
/// Always emits the explicit distance table (the lossless representation of
/// a stored instance). The output is a pure function of the problem, so
/// identical instances produce byte-identical documents.
pub fn write_problem<T: Real>(problem: &ProximityProblem<T>, f: Option<&FFunction<T>>) -> String {
    let space = problem.space();
    let mut out = String::new();
    let _ = writeln!(out, "# proximity problem: {} points", space.len());
    let _ = writeln!(out, "points");
    for label in space.labels() {
        let _ = writeln!(out, "  {label}");
    }
    let _ = writeln!(out, "end");
    let _ = writeln!(out, "dist");
    for i in 0..space.len() {
        for j in 0..i {
            let _ = writeln!(out, "  {} {} {}", space.label(i), space.label(j), space.d(i, j));
        }
    }
    let _ = writeln!(out, "end");
    for (name, members) in [("s1", problem.sets().s1()), ("s2", problem.sets().s2())] {
        let _ = writeln!(out, "{name}");
        for &i in members {
            let _ = writeln!(out, "  {}", space.label(i));
        }
        let _ = writeln!(out, "end");
    }
    let _ = writeln!(out, "phi");
    for &i in problem.sets().s1() {
        let _ = writeln!(out, "  {} {}", space.label(i), space.label(problem.phi(i)));
    }
    let _ = writeln!(out, "end");
    let _ = writeln!(out, "psi");
    for &i in problem.sets().s1() {
        let _ = writeln!(out, "  {} {}", space.label(i), space.label(problem.psi(i)));
    }
    let _ = writeln!(out, "end");
    let _ = writeln!(out, "tol_eq {}", problem.tol_eq());
    let _ = writeln!(out, "tol_conv {}", problem.tol_conv());
    if problem.discretized() {
        let _ = writeln!(out, "discretized");
    }
    if let Some(f) = f {
        match f.kind() {
            FKind::CustomTable(samples) => {
                let _ = writeln!(out, "f custom {}", f.k_exponent());
                for (alpha, value) in samples {
                    let _ = writeln!(out, "  {alpha} {value}");
                }
                let _ = writeln!(out, "end");
            }
            _ => {
                let _ = writeln!(out, "f {}", f.name());
            }
        }
    }
    out
}
