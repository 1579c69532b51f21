//! 1-safe Petri nets in the `.pnet` text format.
//!
//! ```text
//! # comment
//! places: s1 s2
//! initial: s1
//! transition a: in s1 ; out s2
//! ```

use std::collections::HashMap;
use std::fmt;

use super::{lines, valid_name};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    /// Indices into [`PetriNet::places`].
    pub preset: Vec<usize>,
    pub postset: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriNet {
    pub places: Vec<String>,
    pub transitions: Vec<Transition>,
    pub initial: Vec<usize>,
}

impl PetriNet {
    /// Places read or written by `t`, without repetition.
    pub fn touched(&self, t: &Transition) -> Vec<usize> {
        let mut v: Vec<usize> = t.preset.iter().chain(&t.postset).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn names<'a>(line: usize, words: impl Iterator<Item = &'a str>, index: &HashMap<String, usize>) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for w in words {
        let i = *index
            .get(w)
            .ok_or_else(|| Error::Input(format!("line {line}: unknown place `{w}`")))?;
        if out.contains(&i) {
            return Err(Error::Input(format!("line {line}: place `{w}` listed twice")));
        }
        out.push(i);
    }
    out.sort_unstable();
    Ok(out)
}

pub fn parse_pnet(text: &str) -> Result<PetriNet> {
    let mut places: Option<Vec<String>> = None;
    let mut index = HashMap::new();
    let mut initial: Option<Vec<usize>> = None;
    let mut transitions: Vec<Transition> = Vec::new();
    for (line, content) in lines(text) {
        if let Some(rest) = content.strip_prefix("places:") {
            if places.is_some() {
                return Err(Error::Input(format!("line {line}: second `places:` line")));
            }
            let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            for (i, p) in list.iter().enumerate() {
                if !valid_name(p) {
                    return Err(Error::Input(format!("line {line}: invalid place name `{p}`")));
                }
                if index.insert(p.clone(), i).is_some() {
                    return Err(Error::Input(format!("line {line}: duplicate place `{p}`")));
                }
            }
            places = Some(list);
        } else if let Some(rest) = content.strip_prefix("initial:") {
            if places.is_none() {
                return Err(Error::Input(format!("line {line}: `initial:` before `places:`")));
            }
            if initial.is_some() {
                return Err(Error::Input(format!("line {line}: second `initial:` line")));
            }
            initial = Some(names(line, rest.split_whitespace(), &index)?);
        } else if let Some(rest) = content.strip_prefix("transition") {
            if places.is_none() {
                return Err(Error::Input(format!("line {line}: transition before `places:`")));
            }
            let (name, body) = rest
                .split_once(':')
                .ok_or_else(|| Error::Input(format!("line {line}: expected `transition NAME: ...`")))?;
            let name = name.trim();
            if !valid_name(name) {
                return Err(Error::Input(format!("line {line}: invalid transition name `{name}`")));
            }
            if transitions.iter().any(|t| t.name == name) {
                return Err(Error::Input(format!("line {line}: duplicate transition `{name}`")));
            }
            let (mut preset, mut postset) = (None, None);
            for part in body.split(';') {
                let mut words = part.split_whitespace();
                let slot = match words.next() {
                    None => continue,
                    Some("in") => &mut preset,
                    Some("out") => &mut postset,
                    Some(w) => {
                        return Err(Error::Input(format!(
                            "line {line}: expected `in` or `out`, found `{w}`"
                        )))
                    }
                };
                if slot.is_some() {
                    return Err(Error::Input(format!("line {line}: repeated `in`/`out` list")));
                }
                *slot = Some(names(line, words, &index)?);
            }
            transitions.push(Transition {
                name: name.to_string(),
                preset: preset.unwrap_or_default(),
                postset: postset.unwrap_or_default(),
            });
        } else {
            return Err(Error::Input(format!("line {line}: unrecognised line `{content}`")));
        }
    }
    let places = places.ok_or_else(|| Error::Input("net has no `places:` line".into()))?;
    if places.is_empty() {
        return Err(Error::Input("net has no places".into()));
    }
    Ok(PetriNet {
        places,
        transitions,
        initial: initial.unwrap_or_default(),
    })
}

impl fmt::Display for PetriNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ix: &[usize]| {
            ix.iter()
                .map(|&i| self.places[i].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "places: {}", self.places.join(" "))?;
        writeln!(f, "initial: {}", list(&self.initial))?;
        for t in &self.transitions {
            writeln!(
                f,
                "transition {}: in {} ; out {}",
                t.name,
                list(&t.preset),
                list(&t.postset)
            )?;
        }
        Ok(())
    }
}
