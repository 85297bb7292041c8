//! Line-based text formats for algebras and construction data.
//!
//! Algebra file:
//!
//! ```text
//! # comment
//! name: paper-L
//! dim: 4
//! basis: a b c d
//! b*c = d
//! d*a = d
//! ```
//!
//! Unlisted products are zero and the opposite order is filled in by
//! anticommutativity. Construction files hold `[lie]`, `[p]`, `[psi]`,
//! `[lambda]` and an optional `[l0]` section.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{format_combination, Algebra};
use crate::linalg::{is_zero_vec, parse_scalar, Matrix, Scalar};
use crate::structure::ConstructionData;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `2*a - 1/2*b + c`, `-d` or `0` over the given names.
pub fn parse_combination(text: &str, names: &[String]) -> Result<Vec<Scalar>, String> {
    let mut out = vec![Scalar::zero(); names.len()];
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty expression".into());
    }
    let mut terms = Vec::new();
    let mut current = String::new();
    for (k, c) in compact.chars().enumerate() {
        if (c == '+' || c == '-') && k > 0 {
            terms.push(std::mem::take(&mut current));
        }
        current.push(c);
    }
    terms.push(current);
    for term in terms {
        let (negative, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.strip_prefix('+').unwrap_or(&term)),
        };
        if body.is_empty() {
            return Err(format!("dangling sign in `{text}`"));
        }
        let (coef, name) = match body.split_once('*') {
            Some((c, n)) => (parse_scalar(c).map_err(|e| e.to_string())?, Some(n)),
            None if is_identifier(body) => (Scalar::one(), Some(body)),
            None => (parse_scalar(body).map_err(|e| e.to_string())?, None),
        };
        let coef = if negative { -coef } else { coef };
        match name {
            Some(n) => {
                let i = names
                    .iter()
                    .position(|x| x == n)
                    .ok_or_else(|| format!("unknown basis name `{n}` (available: {})", names.join(", ")))?;
                out[i] += coef;
            }
            None if coef.is_zero() => {}
            None => return Err(format!("constant term `{body}` in `{text}`")),
        }
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Accumulates header lines and product relations.
struct AlgebraBuilder {
    name: Option<String>,
    dim: Option<usize>,
    basis: Option<Vec<String>>,
    relations: Vec<(usize, String, String, String)>,
}

impl AlgebraBuilder {
    fn new() -> Self {
        AlgebraBuilder { name: None, dim: None, basis: None, relations: Vec::new() }
    }

    fn line(&mut self, no: usize, line: &str) -> Result<(), FormatError> {
        if let Some((key, value)) = line.split_once(':') {
            let value = value.trim();
            match key.trim() {
                "name" => self.name = Some(value.to_string()),
                "dim" => self.dim = Some(value.parse().or_else(|_| err(no, format!("invalid dimension `{value}`")))?),
                "basis" => {
                    let names: Vec<String> = value.split_whitespace().map(String::from).collect();
                    if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
                        return err(no, format!("invalid basis name `{bad}`"));
                    }
                    self.basis = Some(names);
                }
                other => return err(no, format!("unknown header `{other}`")),
            }
            return Ok(());
        }
        let Some((lhs, rhs)) = line.split_once('=') else {
            return err(no, format!("expected `x*y = combination` or a header, got `{line}`"));
        };
        let Some((x, y)) = lhs.split_once('*') else {
            return err(no, format!("expected a product of two basis names, got `{}`", lhs.trim()));
        };
        self.relations.push((no, x.trim().to_string(), y.trim().to_string(), rhs.trim().to_string()));
        Ok(())
    }

    fn finish(self, last_line: usize) -> Result<Algebra, FormatError> {
        let Some(basis) = self.basis else {
            return err(last_line, "missing `basis:` header");
        };
        if let Some(d) = self.dim {
            if d != basis.len() {
                return err(last_line, format!("dim is {d} but {} basis names are listed", basis.len()));
            }
        }
        for (k, b) in basis.iter().enumerate() {
            if basis[..k].contains(b) {
                return err(last_line, format!("duplicate basis name `{b}`"));
            }
        }
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut products = Vec::new();
        for (no, x, y, rhs) in self.relations {
            let index = |s: &str| {
                basis.iter().position(|b| b == s).ok_or_else(|| FormatError {
                    line: no,
                    message: format!("unknown basis name `{s}` (available: {})", basis.join(", ")),
                })
            };
            let (i, j) = (index(&x)?, index(&y)?);
            let v = parse_combination(&rhs, &basis).map_err(|m| FormatError { line: no, message: m })?;
            if i == j {
                if is_zero_vec(&v) {
                    continue;
                }
                return err(no, format!("{x}*{x} must be 0 in an anticommutative algebra"));
            }
            let key = (i.min(j), i.max(j));
            if let Some(first) = seen.insert(key, no) {
                return err(no, format!("product of `{x}` and `{y}` already given on line {first}"));
            }
            let v = if i < j { v } else { v.into_iter().map(|c| -c).collect() };
            products.push((key.0, key.1, v));
        }
        let name = self.name.unwrap_or_else(|| "algebra".to_string());
        Algebra::new(name, basis, products).map_err(|e| FormatError { line: last_line, message: e.to_string() })
    }
}

pub fn parse_algebra(text: &str) -> Result<Algebra, FormatError> {
    let mut b = AlgebraBuilder::new();
    let mut last = 0;
    for (k, raw) in text.lines().enumerate() {
        last = k + 1;
        let line = strip_comment(raw);
        if !line.is_empty() {
            b.line(k + 1, line)?;
        }
    }
    b.finish(last.max(1))
}

fn relation_lines(alg: &Algebra) -> Vec<String> {
    let names = alg.basis_names();
    let mut out = Vec::new();
    for i in 0..alg.dim() {
        for j in (i + 1)..alg.dim() {
            let v = alg.multiply(&alg.basis_element(i), &alg.basis_element(j)).expect("basis").into_coords();
            if is_zero_vec(&v) {
                continue;
            }
            if v.iter().all(|c| c <= &Scalar::zero()) {
                let neg: Vec<Scalar> = v.iter().map(|c| -c).collect();
                out.push(format!("{}*{} = {}", names[j], names[i], format_combination(names, &neg)));
            } else {
                out.push(format!("{}*{} = {}", names[i], names[j], format_combination(names, &v)));
            }
        }
    }
    out
}

pub fn emit_algebra(alg: &Algebra) -> String {
    let mut s = format!("name: {}\ndim: {}\nbasis: {}\n", alg.name(), alg.dim(), alg.basis_names().join(" "));
    for line in relation_lines(alg) {
        s.push_str(&line);
        s.push('\n');
    }
    s
}

/// Parses `x1=a; x2=b; x3=2*c - d` into three elements.
pub fn parse_elements(text: &str, alg: &Algebra) -> Result<Vec<crate::algebra::Element>, String> {
    let mut slots: [Option<Vec<Scalar>>; 3] = [None, None, None];
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| format!("expected `xk=expression`, got `{part}`"))?;
        let k = match key.trim() {
            "x1" => 0,
            "x2" => 1,
            "x3" => 2,
            other => return Err(format!("unknown element `{other}` (expected x1, x2, x3)")),
        };
        if slots[k].is_some() {
            return Err(format!("{} given twice", key.trim()));
        }
        slots[k] = Some(parse_combination(value, alg.basis_names())?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(k, s)| s.map(crate::algebra::Element::from_coords).ok_or_else(|| format!("missing x{}", k + 1)))
        .collect()
}

pub fn parse_construction(text: &str) -> Result<ConstructionData, FormatError> {
    let mut name = None;
    let mut section = String::new();
    let mut lie = AlgebraBuilder::new();
    let mut lie_end = 0;
    let mut p_names: Option<Vec<String>> = None;
    let mut psi_lines = Vec::new();
    let mut lambda_lines = Vec::new();
    let mut l0_lines: Option<Vec<(usize, String)>> = None;
    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].trim().to_string();
            match section.as_str() {
                "lie" | "p" | "psi" | "lambda" => {}
                "l0" => l0_lines = Some(Vec::new()),
                other => return err(no, format!("unknown section `[{other}]`")),
            }
            continue;
        }
        match section.as_str() {
            "" => match line.split_once(':') {
                Some(("name", v)) => name = Some(v.trim().to_string()),
                _ => return err(no, "expected `name:` or a section header"),
            },
            "lie" => {
                lie.line(no, line)?;
                lie_end = no;
            }
            "p" => match line.split_once(':') {
                Some((k, v)) if k.trim() == "basis" => {
                    let names: Vec<String> = v.split_whitespace().map(String::from).collect();
                    if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
                        return err(no, format!("invalid basis name `{bad}`"));
                    }
                    p_names = Some(names);
                }
                _ => return err(no, "expected `basis: ...` in [p]"),
            },
            "psi" => psi_lines.push((no, line.to_string())),
            "lambda" => lambda_lines.push((no, line.to_string())),
            "l0" => l0_lines.get_or_insert_with(Vec::new).push((no, line.to_string())),
            _ => unreachable!(),
        }
    }
    let lie = lie.finish(lie_end.max(1))?;
    let n = lie.dim();
    let p_names = p_names.unwrap_or_default();
    let p_index = |s: &str, no: usize| {
        p_names.iter().position(|p| p == s).ok_or_else(|| FormatError {
            line: no,
            message: format!("unknown P basis name `{s}` (available: {})", p_names.join(", ")),
        })
    };
    let mut psi: Vec<Matrix> = vec![Matrix::zeros(n, n); p_names.len()];
    let mut psi_seen = BTreeMap::new();
    for (no, line) in psi_lines {
        let parsed = line.split_once('=').and_then(|(lhs, rhs)| {
            let lhs = lhs.trim();
            let (p, rest) = lhs.split_once('(')?;
            let l = rest.strip_suffix(')')?;
            Some((p.trim().to_string(), l.trim().to_string(), rhs.trim().to_string()))
        });
        let Some((p, l, rhs)) = parsed else {
            return err(no, format!("expected `p(l) = combination`, got `{line}`"));
        };
        let pi = p_index(&p, no)?;
        let li = lie
            .basis_index(&l)
            .ok_or_else(|| FormatError { line: no, message: format!("unknown L basis name `{l}`") })?;
        if let Some(first) = psi_seen.insert((pi, li), no) {
            return err(no, format!("{p}({l}) already given on line {first}"));
        }
        let v = parse_combination(&rhs, lie.basis_names()).map_err(|m| FormatError { line: no, message: m })?;
        for (r, c) in v.into_iter().enumerate() {
            psi[pi].set(r, li, c);
        }
    }
    let mut lambda = BTreeMap::new();
    for (no, line) in lambda_lines {
        let Some((lhs, rhs)) = line.split_once('=') else {
            return err(no, format!("expected `p*q = combination`, got `{line}`"));
        };
        let Some((x, y)) = lhs.split_once('*') else {
            return err(no, "expected a product of two P basis names");
        };
        let (i, j) = (p_index(x.trim(), no)?, p_index(y.trim(), no)?);
        if i == j {
            return err(no, "lambda is alternating; p*p is always 0");
        }
        let v = parse_combination(rhs, lie.basis_names()).map_err(|m| FormatError { line: no, message: m })?;
        let v = if i < j { v } else { v.into_iter().map(|c| -c).collect() };
        if lambda.insert((i.min(j), i.max(j)), v).is_some() {
            return err(no, "lambda pair given twice");
        }
    }
    let l0 = match l0_lines {
        None => ConstructionData::canonical_l0(&lie),
        Some(lines) => lines
            .into_iter()
            .map(|(no, l)| parse_combination(&l, lie.basis_names()).map_err(|m| FormatError { line: no, message: m }))
            .collect::<Result<_, _>>()?,
    };
    Ok(ConstructionData { name: name.unwrap_or_else(|| "construction".into()), lie, p_names, psi, lambda, l0 })
}

pub fn emit_construction(data: &ConstructionData) -> String {
    let lie = &data.lie;
    let names = lie.basis_names();
    let mut s = format!(
        "name: {}\n\n[lie]\n{}\n[p]\nbasis: {}\n\n[psi]\n",
        data.name,
        emit_algebra(lie),
        data.p_names.join(" ")
    );
    for (p, m) in data.p_names.iter().zip(&data.psi) {
        for (l, lname) in names.iter().enumerate() {
            let col = m.column(l);
            if !is_zero_vec(&col) {
                s.push_str(&format!("{p}({lname}) = {}\n", format_combination(names, &col)));
            }
        }
    }
    s.push_str("\n[lambda]\n");
    for ((i, j), v) in &data.lambda {
        if !is_zero_vec(v) {
            s.push_str(&format!("{}*{} = {}\n", data.p_names[*i], data.p_names[*j], format_combination(names, v)));
        }
    }
    s.push_str("\n[l0]\n");
    for v in &data.l0 {
        s.push_str(&format_combination(names, v));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::{int, ints, ratio};

    #[test]
    fn combinations() {
        let names: Vec<String> = ["a", "b", "e1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_combination("2*a - 1/2*b + e1", &names).unwrap(), vec![int(2), ratio(-1, 2), int(1)]);
        assert_eq!(parse_combination("-e1", &names).unwrap(), ints(&[0, 0, -1]));
        assert_eq!(parse_combination("0", &names).unwrap(), ints(&[0, 0, 0]));
        assert_eq!(parse_combination("a + a", &names).unwrap(), ints(&[2, 0, 0]));
        assert!(parse_combination("2", &names).is_err());
        assert!(parse_combination("z", &names).is_err());
        assert!(parse_combination("a -", &names).is_err());
    }

    #[test]
    fn four_dim_algebra_file() {
        let text = emit_algebra(&catalog::four_dim_l());
        assert_eq!(text, "name: paper-L\ndim: 4\nbasis: a b c d\nd*a = d\nb*c = d\n");
        assert_eq!(parse_algebra(&text).unwrap(), catalog::four_dim_l());
    }

    #[test]
    fn either_orientation_and_comments() {
        let a = parse_algebra("# L\nname: x\nbasis: a b c d\nb*c = d # bc\na*d = -d\n").unwrap();
        assert_eq!(a.table(), catalog::four_dim_l().table());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_algebra("basis: a b\na*b = a\nb*a = b\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_algebra("basis: a b\n\na*a = b\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_algebra("basis: a b\na*q = b\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("available"));
        let e = parse_algebra("dim: 3\nbasis: a b\n").unwrap_err();
        assert!(e.message.contains("dim"));
        assert!(parse_algebra("name: empty\n").is_err());
        assert_eq!(parse_algebra("basis: a b\nfoo\n").unwrap_err().line, 2);
    }

    #[test]
    fn construction_round_trip() {
        let data = catalog::example_construction(&int(1), &ratio(2, 3), &int(-1));
        let text = emit_construction(&data);
        let back = parse_construction(&text).unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn construction_file_by_hand() {
        let text = "name: B\n[lie]\nbasis: c\n[p]\nbasis: t a b\n[psi]\nt(c) = c\n[lambda]\nb*a = -c\n";
        let data = parse_construction(text).unwrap();
        assert_eq!(data.lambda_value(1, 2), ints(&[1]));
        let built = crate::structure::build_from_construction(&data).unwrap();
        assert_eq!(built.table(), catalog::example_b(&int(0), &int(0), &int(1)).unwrap().table());
        assert_eq!(parse_construction("[psi]\nq(c) = c\n[lie]\nbasis: c\n").unwrap_err().line, 2);
    }

    #[test]
    fn element_lists() {
        let l = catalog::four_dim_l();
        let xs = parse_elements("x1=a; x2 = b + d ; x3=1/2*c", &l).unwrap();
        assert_eq!(xs[1].coords(), &ints(&[0, 1, 0, 1])[..]);
        assert!(parse_elements("x1=a; x2=b", &l).is_err());
        assert!(parse_elements("x1=a; x1=b; x3=c", &l).is_err());
    }
}
