//! Text formats.
//!
//! Set system:
//!
//! ```text
//! # comment
//! n m
//! setid: e1 e2 ...
//! ```
//!
//! Set ids lie in `[0, m)`, element ids in `[0, n)`. Sets without a line are
//! empty. A set may appear on at most one line.
//!
//! Vaccine-clinic instance:
//!
//! ```text
//! P L
//! loc <label> <x> [<y>]        # coordinate block, or
//! loc <label>                  # label declaration for a distance block
//! dist <label> <label> <value>
//! person <label>: <loc> <loc> ...
//! ```
//!
//! Labels are arbitrary tokens without whitespace or `:`; locations are
//! numbered in order of first appearance. A distance block must list every
//! unordered pair once (both orders are accepted when they agree).

use std::collections::HashMap;
use std::fmt::Write as _;

use super::vacc::{Metric, VaccInstance};
use super::SetSystem;
use crate::error::{Error, Result};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>().or_else(|_| {
        parse_err(
            line,
            format!("expected a non-negative integer {what}, found {tok:?}"),
        )
    })
}

fn parse_header(line: usize, body: &str) -> Result<(usize, usize)> {
    let toks: Vec<&str> = body.split_whitespace().collect();
    if toks.len() != 2 {
        return parse_err(
            line,
            format!("header must hold two counts, found {:?}", body),
        );
    }
    Ok((
        parse_count(toks[0], line, "count")?,
        parse_count(toks[1], line, "count")?,
    ))
}

/// Parses the set-system format.
pub fn parse_set_system(input: &[u8]) -> Result<SetSystem> {
    let text =
        std::str::from_utf8(input).or_else(|e| parse_err(0, format!("input is not UTF-8: {e}")))?;
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .map_or_else(|| parse_err(0, "empty input"), Ok)?;
    let (n, m) = parse_header(hl, header)?;

    let mut sets: Vec<Option<Vec<usize>>> = vec![None; m];
    for (ln, body) in lines {
        let Some((id, rest)) = body.split_once(':') else {
            return parse_err(ln, "expected \"setid: elements...\"");
        };
        let id = parse_count(id.trim(), ln, "set id")?;
        if id >= m {
            return Err(Error::Validation(format!(
                "line {ln}: set id {id} out of range (m = {m})"
            )));
        }
        if sets[id].is_some() {
            return Err(Error::Validation(format!(
                "line {ln}: set {id} defined twice"
            )));
        }
        let mut members = Vec::new();
        for tok in rest.split_whitespace() {
            let e = parse_count(tok, ln, "element id")?;
            if e >= n {
                return Err(Error::Validation(format!(
                    "line {ln}: element {e} out of range (n = {n})"
                )));
            }
            members.push(e);
        }
        let mut sorted = members.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!(
                "line {ln}: duplicate element {} in set {id}",
                w[0]
            )));
        }
        sets[id] = Some(members);
    }
    SetSystem::new(n, sets.into_iter().map(Option::unwrap_or_default).collect())
}

/// Writes the set-system format; `parse_set_system` reads it back unchanged.
pub fn write_set_system(system: &SetSystem) -> String {
    let mut out = format!("{} {}\n", system.n(), system.m());
    for id in 0..system.m() {
        let _ = write!(out, "{id}:");
        for e in system.members(id) {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

fn parse_float(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => parse_err(line, format!("expected a finite number, found {tok:?}")),
    }
}

fn check_label(tok: &str, line: usize) -> Result<()> {
    if tok.contains(':') {
        return parse_err(line, format!("label {tok:?} may not contain ':'"));
    }
    Ok(())
}

#[derive(Default)]
struct Labels {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Labels {
    fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.names.len();
        self.names.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }
}

/// Parses the vaccine-clinic format.
pub fn parse_vacc_instance(input: &[u8]) -> Result<VaccInstance> {
    let text =
        std::str::from_utf8(input).or_else(|e| parse_err(0, format!("input is not UTF-8: {e}")))?;
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .map_or_else(|| parse_err(0, "empty input"), Ok)?;
    let (num_people, num_locs) = parse_header(hl, header)?;

    let mut locs = Labels::default();
    let mut coords: Vec<Option<[f64; 2]>> = Vec::new();
    let mut declared: Vec<bool> = Vec::new();
    let mut coord_lines = 0usize;
    let mut bare_lines = 0usize;
    let mut dists: Vec<(usize, usize, usize, f64)> = Vec::new();
    let mut people = Labels::default();
    let mut person_visits: Vec<(usize, Vec<String>)> = Vec::new();

    for (ln, body) in lines {
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        match kw {
            "loc" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.is_empty() || toks.len() > 3 {
                    return parse_err(ln, "expected \"loc <label> [<x> [<y>]]\"");
                }
                check_label(toks[0], ln)?;
                let id = locs.intern(toks[0]);
                coords.resize(locs.names.len(), None);
                declared.resize(locs.names.len(), false);
                if std::mem::replace(&mut declared[id], true) {
                    return Err(Error::Validation(format!(
                        "line {ln}: location {:?} declared twice",
                        toks[0]
                    )));
                }
                if toks.len() == 1 {
                    bare_lines += 1;
                } else {
                    let x = parse_float(toks[1], ln)?;
                    let y = toks.get(2).map_or(Ok(0.0), |t| parse_float(t, ln))?;
                    coords[id] = Some([x, y]);
                    coord_lines += 1;
                }
            }
            "dist" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 {
                    return parse_err(ln, "expected \"dist <label> <label> <value>\"");
                }
                check_label(toks[0], ln)?;
                check_label(toks[1], ln)?;
                let v = parse_float(toks[2], ln)?;
                let i = locs.intern(toks[0]);
                let j = locs.intern(toks[1]);
                coords.resize(locs.names.len(), None);
                dists.push((ln, i, j, v));
            }
            "person" => {
                let Some((label, visits)) = rest.split_once(':') else {
                    return parse_err(ln, "expected \"person <label>: <loc> ...\"");
                };
                let label = label.trim();
                if label.is_empty() || label.contains(char::is_whitespace) {
                    return parse_err(ln, format!("bad person label {label:?}"));
                }
                let before = people.names.len();
                if people.intern(label) < before {
                    return Err(Error::Validation(format!(
                        "line {ln}: person {label:?} listed twice"
                    )));
                }
                person_visits.push((ln, visits.split_whitespace().map(str::to_string).collect()));
            }
            other => return parse_err(ln, format!("unknown record {other:?}")),
        }
    }

    if coord_lines > 0 && (bare_lines > 0 || !dists.is_empty()) {
        return Err(Error::Validation(
            "coordinate and distance blocks cannot be mixed".to_string(),
        ));
    }
    let l = locs.names.len();
    if l != num_locs {
        return Err(Error::Validation(format!(
            "header declares {num_locs} locations, found {l}"
        )));
    }
    if person_visits.len() != num_people {
        return Err(Error::Validation(format!(
            "header declares {num_people} people, found {}",
            person_visits.len()
        )));
    }

    let metric = if coord_lines > 0 {
        if coords.iter().any(Option::is_none) {
            return Err(Error::Validation(
                "every location needs coordinates".to_string(),
            ));
        }
        Metric::Points(coords.into_iter().flatten().collect())
    } else {
        let mut dist = vec![f64::NAN; l * l];
        for i in 0..l {
            dist[i * l + i] = 0.0;
        }
        for (ln, i, j, v) in dists {
            if i == j {
                if v != 0.0 {
                    return Err(Error::Validation(format!(
                        "line {ln}: self-distance must be 0"
                    )));
                }
                continue;
            }
            let prev = dist[i * l + j];
            if !prev.is_nan() && prev != v {
                return Err(Error::Validation(format!(
                    "line {ln}: conflicting distance"
                )));
            }
            if v < 0.0 {
                return Err(Error::Validation(format!("line {ln}: negative distance")));
            }
            dist[i * l + j] = v;
            dist[j * l + i] = v;
        }
        if let Some(pos) = dist.iter().position(|v| v.is_nan()) {
            return Err(Error::Validation(format!(
                "missing distance between {:?} and {:?}",
                locs.names[pos / l],
                locs.names[pos % l]
            )));
        }
        Metric::Matrix { size: l, dist }
    };

    let mut visits = Vec::with_capacity(person_visits.len());
    for (ln, names) in person_visits {
        let mut v = Vec::with_capacity(names.len());
        for name in names {
            match locs.index.get(&name) {
                Some(&j) => v.push(j),
                None => {
                    return Err(Error::Validation(format!(
                        "line {ln}: unknown location {name:?}"
                    )))
                }
            }
        }
        if v.is_empty() {
            return Err(Error::Validation(format!(
                "line {ln}: person visits no location"
            )));
        }
        visits.push(v);
    }
    VaccInstance::new(metric, visits)?.with_labels(locs.names, people.names)
}

/// Writes the vaccine-clinic format in original units.
pub fn write_vacc_instance(inst: &VaccInstance) -> String {
    let labels = inst.location_labels();
    let mut out = format!("{} {}\n", inst.num_people(), inst.num_locations());
    match inst.metric() {
        Metric::Points(pts) => {
            for (label, p) in labels.iter().zip(pts) {
                let _ = writeln!(out, "loc {label} {} {}", p[0], p[1]);
            }
        }
        Metric::Matrix { size, dist } => {
            for label in labels {
                let _ = writeln!(out, "loc {label}");
            }
            for i in 0..*size {
                for j in i + 1..*size {
                    let _ = writeln!(
                        out,
                        "dist {} {} {}",
                        labels[i],
                        labels[j],
                        dist[i * size + j]
                    );
                }
            }
        }
    }
    for (p, label) in inst.person_labels().iter().enumerate() {
        let _ = write!(out, "person {label}:");
        for &j in inst.visits(p) {
            let _ = write!(out, " {}", labels[j]);
        }
        out.push('\n');
    }
    out
}
