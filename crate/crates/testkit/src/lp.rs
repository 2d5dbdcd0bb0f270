//! Reader for the CPLEX LP file format, restricted to linear objectives,
//! linear rows, simple bounds and binary/general sections. It rejects
//! anything it does not understand, so a file that reads cleanly is
//! well-formed for the constructs it uses.

use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(f64, String)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn activity(&self, values: &HashMap<String, f64>) -> f64 {
        self.terms
            .iter()
            .map(|(a, v)| a * values.get(v).copied().unwrap_or(0.0))
            .sum()
    }

    pub fn holds(&self, values: &HashMap<String, f64>, tol: f64) -> bool {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => lhs <= self.rhs + tol,
            Sense::Ge => lhs >= self.rhs - tol,
            Sense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpModel {
    pub minimize: bool,
    pub objective: Vec<(f64, String)>,
    pub rows: Vec<Row>,
    /// `(variable, lower, upper)`; absent variables default to `[0, inf)`.
    pub bounds: Vec<(String, f64, f64)>,
    pub binaries: Vec<String>,
    pub generals: Vec<String>,
}

impl LpModel {
    /// Every variable named anywhere in the model.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        vars.extend(self.objective.iter().map(|(_, v)| v.clone()));
        for row in &self.rows {
            vars.extend(row.terms.iter().map(|(_, v)| v.clone()));
        }
        vars.extend(self.bounds.iter().map(|b| b.0.clone()));
        vars.extend(self.binaries.iter().cloned());
        vars.extend(self.generals.iter().cloned());
        vars
    }

    /// Names of the rows violated by `values` (missing variables are 0).
    pub fn violated_rows(&self, values: &HashMap<String, f64>, tol: f64) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|r| !r.holds(values, tol))
            .map(|r| r.name.as_str())
            .collect()
    }

    pub fn objective_value(&self, values: &HashMap<String, f64>) -> f64 {
        self.objective
            .iter()
            .map(|(a, v)| a * values.get(v).copied().unwrap_or(0.0))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    Binary,
    General,
    End,
}

fn section_keyword(line: &str) -> Option<Section> {
    match line.trim().to_ascii_lowercase().as_str() {
        "minimize" | "minimum" | "min" | "maximize" | "maximum" | "max" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "binary" | "binaries" | "bin" => Some(Section::Binary),
        "general" | "generals" | "gen" => Some(Section::General),
        "end" => Some(Section::End),
        _ => None,
    }
}

fn valid_name(name: &str) -> bool {
    const EXTRA: &str = "!\"#$%&()/,.;?@_`'{}|~";
    let Some(first) = name.chars().next() else {
        return false;
    };
    name.len() <= 255
        && !first.is_ascii_digit()
        && first != '.'
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || EXTRA.contains(c))
}

fn parse_number(tok: &str) -> Option<f64> {
    match tok.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" | "+infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        _ => tok
            .parse()
            .ok()
            .filter(|_| tok.starts_with(|c: char| c.is_ascii_digit() || "+-.".contains(c))),
    }
}

fn parse_sense(tok: &str) -> Option<Sense> {
    match tok {
        "<=" | "=<" | "<" => Some(Sense::Le),
        ">=" | "=>" | ">" => Some(Sense::Ge),
        "=" => Some(Sense::Eq),
        _ => None,
    }
}

/// Parses `[+|-] [coef] var` sequences.
fn parse_terms(tokens: &[&str]) -> Result<Vec<(f64, String)>, String> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    let mut expect_term = true;
    for &tok in tokens {
        match tok {
            "+" | "-" => {
                if coef.is_some() {
                    return Err(format!("dangling coefficient before `{tok}`"));
                }
                if tok == "-" {
                    sign = -sign;
                }
                expect_term = true;
            }
            _ => {
                if !expect_term {
                    return Err(format!("missing operator before `{tok}`"));
                }
                if let Some(x) = parse_number(tok) {
                    if coef.replace(x).is_some() {
                        return Err(format!("two coefficients in a row at `{tok}`"));
                    }
                } else if valid_name(tok) {
                    terms.push((sign * coef.take().unwrap_or(1.0), tok.to_string()));
                    sign = 1.0;
                    expect_term = false;
                } else {
                    return Err(format!("invalid variable name `{tok}`"));
                }
            }
        }
    }
    if coef.is_some() || (expect_term && !terms.is_empty()) {
        return Err("expression ends with an operator or a bare number".into());
    }
    Ok(terms)
}

/// Splits `name: body` into the label and the rest.
fn split_label(stmt: &str) -> (Option<String>, &str) {
    match stmt.split_once(':') {
        Some((label, body)) => (Some(label.trim().to_string()), body),
        None => (None, stmt),
    }
}

fn tokens(body: &str) -> Vec<&str> {
    body.split_whitespace().collect()
}

/// Reads an LP file. Rows may span several lines; a new statement starts
/// at a line containing a `:` label or, in the constraint section, after
/// the previous row's right-hand side.
pub fn parse(text: &str) -> Result<LpModel, String> {
    let mut model = LpModel::default();
    let mut section = Section::Start;
    let mut pending = String::new();
    let mut statements: Vec<(Section, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        if raw.len() > 510 {
            return Err(format!("line {} is longer than 510 characters", lineno + 1));
        }
        let line = raw.split('\\').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some(next) = section_keyword(line) {
            if !pending.trim().is_empty() {
                statements.push((section, std::mem::take(&mut pending)));
            }
            if next == Section::Objective {
                model.minimize = line.trim().to_ascii_lowercase().starts_with("min");
            }
            if section == Section::End {
                return Err(format!("line {}: content after End", lineno + 1));
            }
            section = next;
            continue;
        }
        match section {
            Section::Start => {
                return Err(format!(
                    "line {}: text before the objective section",
                    lineno + 1
                ))
            }
            Section::End => return Err(format!("line {}: content after End", lineno + 1)),
            Section::Constraints | Section::Objective => {
                if line.contains(':') && !pending.trim().is_empty() {
                    statements.push((section, std::mem::take(&mut pending)));
                }
                pending.push(' ');
                pending.push_str(line);
            }
            _ => statements.push((section, line.to_string())),
        }
    }
    if !pending.trim().is_empty() {
        statements.push((section, pending));
    }
    if section != Section::End {
        return Err("missing End".into());
    }

    for (section, stmt) in statements {
        match section {
            Section::Objective => {
                let (_, body) = split_label(&stmt);
                model.objective = parse_terms(&tokens(body))?;
            }
            Section::Constraints => {
                let (label, body) = split_label(&stmt);
                let toks = tokens(body);
                let pos = toks
                    .iter()
                    .position(|t| parse_sense(t).is_some())
                    .ok_or_else(|| format!("row `{stmt}` has no sense"))?;
                let [rhs] = toks[pos + 1..] else {
                    return Err(format!("row `{stmt}` needs a single right-hand side"));
                };
                let rhs =
                    parse_number(rhs).ok_or_else(|| format!("bad right-hand side in `{stmt}`"))?;
                let name = label.unwrap_or_else(|| format!("R{}", model.rows.len() + 1));
                if !valid_name(&name) {
                    return Err(format!("invalid row name `{name}`"));
                }
                model.rows.push(Row {
                    name,
                    terms: parse_terms(&toks[..pos])?,
                    sense: parse_sense(toks[pos]).expect("found above"),
                    rhs,
                });
            }
            Section::Bounds => model.bounds.push(parse_bound(&stmt)?),
            Section::Binary => model.binaries.extend(names(&stmt)?),
            Section::General => model.generals.extend(names(&stmt)?),
            Section::Start | Section::End => unreachable!("rejected while reading"),
        }
    }
    Ok(model)
}

fn names(stmt: &str) -> Result<Vec<String>, String> {
    tokens(stmt)
        .into_iter()
        .map(|t| {
            if valid_name(t) {
                Ok(t.to_string())
            } else {
                Err(format!("invalid variable name `{t}`"))
            }
        })
        .collect()
}

/// `lo <= v <= hi`, `v >= lo`, `v <= hi`, `v = x` or `v free`.
fn parse_bound(stmt: &str) -> Result<(String, f64, f64), String> {
    let toks = tokens(stmt);
    let var = |t: &str| {
        if valid_name(t) {
            Ok(t.to_string())
        } else {
            Err(format!("bad bound `{stmt}`"))
        }
    };
    let num = |t: &str| parse_number(t).ok_or_else(|| format!("bad bound `{stmt}`"));
    match toks[..] {
        [v, "free"] => Ok((var(v)?, f64::NEG_INFINITY, f64::INFINITY)),
        [lo, "<=", v, "<=", hi] => Ok((var(v)?, num(lo)?, num(hi)?)),
        [v, op, x] => {
            let x = num(x)?;
            match parse_sense(op) {
                Some(Sense::Ge) => Ok((var(v)?, x, f64::INFINITY)),
                Some(Sense::Le) => Ok((var(v)?, 0.0, x)),
                Some(Sense::Eq) => Ok((var(v)?, x, x)),
                None => Err(format!("bad bound `{stmt}`")),
            }
        }
        _ => Err(format!("bad bound `{stmt}`")),
    }
}
