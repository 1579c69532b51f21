//! Model frontends: 1-safe Petri nets and asynchronous Boolean networks,
//! their symbolic encoding and a Sloan variable ordering.

pub mod bnet;
pub mod expr;
pub mod petri;
mod sloan;
mod symbolic;

pub use bnet::{parse_bnet, BooleanNetwork};
pub use expr::{parse_bool_expr, BoolExpr};
pub use petri::{parse_pnet, PetriNet, Transition};
pub use sloan::{order_variables_sloan, IncidenceGraph};
pub use symbolic::{build_symbolic, PartitionKind, SymbolicModel};

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::{Error, Result};

/// Input file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelFormat {
    Pnet,
    Bnet,
}

impl ModelFormat {
    pub fn from_path(path: &Path) -> Option<ModelFormat> {
        match path.extension()?.to_str()? {
            "pnet" => Some(ModelFormat::Pnet),
            "bnet" => Some(ModelFormat::Bnet),
            _ => None,
        }
    }
}

impl FromStr for ModelFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pnet" => Ok(ModelFormat::Pnet),
            "bnet" => Ok(ModelFormat::Bnet),
            _ => Err(Error::Config(format!("unknown model format `{s}`"))),
        }
    }
}

impl fmt::Display for ModelFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelFormat::Pnet => "pnet",
            ModelFormat::Bnet => "bnet",
        })
    }
}

/// How variables are ordered before encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Ordering {
    #[default]
    Sloan,
    Input,
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sloan" => Ok(Ordering::Sloan),
            "input" => Ok(Ordering::Input),
            _ => Err(Error::Config(format!("unknown ordering `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Petri(PetriNet),
    Boolean(BooleanNetwork),
}

impl Model {
    pub fn parse(text: &str, format: ModelFormat) -> Result<Model> {
        Ok(match format {
            ModelFormat::Pnet => Model::Petri(parse_pnet(text)?),
            ModelFormat::Bnet => Model::Boolean(parse_bnet(text)?),
        })
    }

    /// Read a model, taking the format from the extension unless given.
    pub fn load(path: &Path, format: Option<ModelFormat>) -> Result<Model> {
        let format = format
            .or_else(|| ModelFormat::from_path(path))
            .ok_or_else(|| Error::Input(format!("cannot infer the model format of {}", path.display())))?;
        let text = std::fs::read_to_string(path)?;
        Model::parse(&text, format)
    }

    /// State variables: places or network variables.
    pub fn variables(&self) -> &[String] {
        match self {
            Model::Petri(n) => &n.places,
            Model::Boolean(n) => &n.variables,
        }
    }

    pub fn initial_state(&self) -> Vec<bool> {
        match self {
            Model::Petri(n) => {
                let mut s = vec![false; n.places.len()];
                for &p in &n.initial {
                    s[p] = true;
                }
                s
            }
            Model::Boolean(n) => n.initial.clone(),
        }
    }

    /// Sets of variables that interact in one transition or update.
    pub fn interaction_groups(&self) -> Vec<Vec<usize>> {
        match self {
            Model::Petri(n) => n.transitions.iter().map(|t| n.touched(t)).collect(),
            Model::Boolean(n) => n
                .functions
                .iter()
                .enumerate()
                .map(|(v, f)| {
                    let mut g: Vec<usize> = f.support().into_iter().filter_map(|u| n.index_of(u)).collect();
                    g.push(v);
                    g.sort_unstable();
                    g.dedup();
                    g
                })
                .collect(),
        }
    }

    pub fn order(&self, ordering: Ordering) -> Vec<usize> {
        match ordering {
            Ordering::Sloan => order_variables_sloan(self),
            Ordering::Input => (0..self.variables().len()).collect(),
        }
    }
}

/// Non-empty lines with `#` comments removed, numbered from 1.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
