//! Problem specifications: flag syntax and the JSON document format.

use abeltrans::{AbelianGroup, GroupElement, Subgroup};
use indexmap::IndexMap;
use serde::Deserialize;

/// A group and named subgroups, each given by generator vectors.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ProblemSpec {
    pub orders: Vec<u64>,
    #[serde(default)]
    pub subgroups: IndexMap<String, Vec<Vec<i64>>>,
}

/// One JSON object or an array of them.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Document {
    One(ProblemSpec),
    Many(Vec<ProblemSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

/// `"4,2"` → `[4, 2]`.
pub fn parse_orders(text: &str) -> Result<Vec<u64>, ParseError> {
    text.split(',')
        .map(|s| {
            let n: u64 = s.trim().parse().map_err(|_| bad(format!("bad cyclic order {s:?}")))?;
            if n < 2 {
                return Err(bad(format!("cyclic orders must be at least 2, got {n}")));
            }
            Ok(n)
        })
        .collect()
}

/// `"1,0"` → `[1, 0]`.
pub fn parse_element(text: &str) -> Result<Vec<i64>, ParseError> {
    text.split(',').map(|s| s.trim().parse::<i64>().map_err(|_| bad(format!("bad residue {s:?}")))).collect()
}

/// `"1,0;0,1"` → two vectors. The empty string is the empty list.
pub fn parse_element_list(text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';').map(parse_element).collect()
}

/// `"A=1,0;0,1"` → `("A", [[1,0],[0,1]])`.
pub fn parse_named_subgroup(text: &str) -> Result<(String, Vec<Vec<i64>>), ParseError> {
    let (name, gens) = text.split_once('=').ok_or_else(|| bad(format!("expected NAME=GENERATORS, got {text:?}")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(bad("empty subgroup name"));
    }
    Ok((name.to_string(), parse_element_list(gens)?))
}

pub fn parse_document(text: &str) -> Result<Vec<ProblemSpec>, ParseError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| bad(format!("invalid input document: {e}")))?;
    Ok(match doc {
        Document::One(s) => vec![s],
        Document::Many(v) => v,
    })
}

impl ProblemSpec {
    pub fn from_flags(group: &str, subs: &[String]) -> Result<Self, ParseError> {
        let orders = parse_orders(group)?;
        let mut subgroups = IndexMap::new();
        for s in subs {
            let (name, gens) = parse_named_subgroup(s)?;
            if subgroups.insert(name.clone(), gens).is_some() {
                return Err(bad(format!("subgroup {name} given twice")));
            }
        }
        Ok(ProblemSpec { orders, subgroups })
    }

    pub fn group(&self) -> Result<AbelianGroup, ParseError> {
        if let Some(n) = self.orders.iter().find(|&&n| n < 2) {
            return Err(bad(format!("cyclic orders must be at least 2, got {n}")));
        }
        AbelianGroup::new(self.orders.iter().copied()).map_err(|e| bad(e.to_string()))
    }

    pub fn element(&self, g: &AbelianGroup, v: &[i64]) -> Result<GroupElement, ParseError> {
        if v.len() != self.orders.len() {
            return Err(bad(format!("vector {v:?} has {} entries, the group has {}", v.len(), self.orders.len())));
        }
        g.element(v).map_err(|e| bad(e.to_string()))
    }

    /// Builds the group and every named subgroup, in input order.
    pub fn build(&self) -> Result<Instance, ParseError> {
        let group = self.group()?;
        let mut names = Vec::new();
        let mut subs = Vec::new();
        for (name, gens) in &self.subgroups {
            let gens = gens.iter().map(|v| self.element(&group, v)).collect::<Result<Vec<_>, _>>()?;
            subs.push(Subgroup::from_generators(&group, &gens).map_err(|e| bad(e.to_string()))?);
            names.push(name.clone());
        }
        Ok(Instance { spec: self.clone(), group, names, subs })
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: ProblemSpec,
    pub group: AbelianGroup,
    pub names: Vec<String>,
    pub subs: Vec<Subgroup>,
}

impl Instance {
    pub fn subgroup(&self, name: &str) -> Option<&Subgroup> {
        self.names.iter().position(|n| n == name).map(|i| &self.subs[i])
    }
}
