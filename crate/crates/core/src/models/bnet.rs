//! Asynchronous Boolean networks in the `.bnet` text format.
//!
//! ```text
//! targets, factors
//! a, !b
//! b, a & c
//! c, c
//! initial: a !b c
//! ```

use std::collections::HashMap;
use std::fmt;

use super::expr::{parse_bool_expr, BoolExpr};
use super::{lines, valid_name};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanNetwork {
    pub variables: Vec<String>,
    /// Update function of each variable, in the same order.
    pub functions: Vec<BoolExpr>,
    pub initial: Vec<bool>,
}

impl BooleanNetwork {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }
}

pub fn parse_bnet(text: &str) -> Result<BooleanNetwork> {
    let mut variables = Vec::new();
    let mut functions = Vec::new();
    let mut initial_line: Option<(usize, &str)> = None;
    let mut seen_header = false;
    for (line, content) in lines(text) {
        if !seen_header && content.replace(' ', "").eq_ignore_ascii_case("targets,factors") {
            seen_header = true;
            continue;
        }
        if let Some(rest) = content.strip_prefix("initial:") {
            if initial_line.is_some() {
                return Err(Error::Input(format!("line {line}: second `initial:` line")));
            }
            initial_line = Some((line, rest));
            continue;
        }
        let (target, factor) = content
            .split_once(',')
            .ok_or_else(|| Error::Input(format!("line {line}: expected `target, factor`")))?;
        let target = target.trim();
        if !valid_name(target) {
            return Err(Error::Input(format!("line {line}: invalid variable name `{target}`")));
        }
        if variables.iter().any(|v| v == target) {
            return Err(Error::Input(format!("line {line}: duplicate target `{target}`")));
        }
        let f = parse_bool_expr(factor).map_err(|e| match e {
            Error::Parse { offset, message } => Error::Input(format!("line {line}, byte {offset}: {message}")),
            other => other,
        })?;
        variables.push(target.to_string());
        functions.push(f);
    }
    if variables.is_empty() {
        return Err(Error::Input("network has no variables".into()));
    }
    let index: HashMap<&str, usize> = variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    for (v, f) in variables.iter().zip(&functions) {
        if let Some(u) = f.support().into_iter().find(|u| !index.contains_key(u)) {
            return Err(Error::Input(format!("update of `{v}` uses undeclared variable `{u}`")));
        }
    }
    let mut initial = vec![false; variables.len()];
    if let Some((line, rest)) = initial_line {
        let mut set = vec![false; variables.len()];
        for w in rest.split_whitespace() {
            let (name, value) = match w.strip_prefix('!') {
                Some(n) => (n, false),
                None => (w, true),
            };
            let i = *index
                .get(name)
                .ok_or_else(|| Error::Input(format!("line {line}: unknown variable `{name}`")))?;
            if set[i] {
                return Err(Error::Input(format!("line {line}: `{name}` assigned twice")));
            }
            set[i] = true;
            initial[i] = value;
        }
    }
    Ok(BooleanNetwork {
        variables,
        functions,
        initial,
    })
}

impl fmt::Display for BooleanNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "targets, factors")?;
        for (v, e) in self.variables.iter().zip(&self.functions) {
            writeln!(f, "{v}, {e}")?;
        }
        let init: Vec<String> = self
            .variables
            .iter()
            .zip(&self.initial)
            .map(|(v, &b)| if b { v.clone() } else { format!("!{v}") })
            .collect();
        writeln!(f, "initial: {}", init.join(" "))
    }
}
