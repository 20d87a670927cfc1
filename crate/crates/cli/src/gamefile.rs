//! JSON game documents.
//!
//! Probabilities are exact fractions written as text (`"1/3"`) or integers.
//! Joint tables are keyed by comma-joined sorted element names, with `""`
//! for the empty set.

use std::collections::BTreeMap;
use std::fmt;

use poset_rescue::game::GameInstance;
use poset_rescue::model::{TreeNodeKind, MASS_LIMIT};
use poset_rescue::rational;
use poset_rescue::{
    IndependentModel, JointModel, Poset, ProbabilityModel, PseudoBayesTree, Rational, Subset,
    TreeNode, Variant,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

/// A rational that serializes as `"p/q"` and refuses JSON floats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fraction(pub Rational);

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(&self.0))
    }
}

struct FractionVisitor;

impl<'de> Visitor<'de> for FractionVisitor {
    type Value = Fraction;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a fraction such as \"1/3\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Fraction, E> {
        rational::parse(v)
            .map(Fraction)
            .ok_or_else(|| E::custom(format!("`{v}` is not a fraction")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Fraction, E> {
        Ok(Fraction(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Fraction, E> {
        Ok(Fraction(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Fraction, E> {
        Err(E::custom(format!(
            "floating-point number {v} is not exact; write it as a fraction like \"1/2\""
        )))
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Fraction, D::Error> {
        d.deserialize_any(FractionVisitor)
    }
}

/// Parses a fraction written as in game files.
pub fn parse_fraction(text: &str) -> Result<Rational, CliError> {
    let f: Fraction = serde_json::from_str(text).map_err(|e| CliError::from_json(&e))?;
    Ok(f.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum VariantDoc {
    Osr,
    Csr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    weight: Fraction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    leaf: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    children: Option<Vec<NodeDoc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum ModelDoc {
    Independent { pr: BTreeMap<String, Fraction> },
    Joint { pr: BTreeMap<String, Fraction> },
    Tree { root: NodeDoc },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    elements: Vec<String>,
    #[serde(default)]
    covers: Vec<(String, String)>,
    variant: VariantDoc,
    model: ModelDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stages: Option<Vec<Vec<String>>>,
}

/// A validated game plus an optional stage decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedGame {
    pub game: GameInstance,
    pub stages: Option<Vec<Subset>>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn lookup(poset: &Poset, name: &str) -> Result<usize, CliError> {
    poset.index_of(name).map_err(|e| invalid(e.to_string()))
}

fn subset_key(poset: &Poset, set: Subset) -> String {
    set.iter()
        .map(|x| poset.name(x))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_key(poset: &Poset, key: &str) -> Result<Subset, CliError> {
    if key.is_empty() {
        return Ok(Subset::EMPTY);
    }
    let mut set = Subset::EMPTY;
    for name in key.split(',') {
        let x = lookup(poset, name)?;
        if set.contains(x) {
            return Err(invalid(format!("subset key \"{key}\" repeats `{name}`")));
        }
        set = set.with(x);
    }
    Ok(set)
}

fn build_node(poset: &Poset, doc: &NodeDoc) -> Result<TreeNode, CliError> {
    match (&doc.leaf, &doc.children) {
        (Some(name), None) => Ok(TreeNode::leaf(doc.weight.0.clone(), lookup(poset, name)?)),
        (None, Some(children)) => match &children[..] {
            [a, b] => Ok(TreeNode::internal(
                doc.weight.0.clone(),
                build_node(poset, a)?,
                build_node(poset, b)?,
            )),
            _ => Err(invalid(format!(
                "tree node has {} children, expected two",
                children.len()
            ))),
        },
        _ => Err(invalid(
            "tree node needs exactly one of \"leaf\" and \"children\"",
        )),
    }
}

fn build_model(poset: &Poset, doc: &ModelDoc) -> Result<ProbabilityModel, CliError> {
    let n = poset.len();
    match doc {
        ModelDoc::Independent { pr } => {
            if let Some(extra) = pr.keys().find(|k| poset.index_of(k).is_err()) {
                return Err(invalid(format!(
                    "probability given for unknown element `{extra}`"
                )));
            }
            let p = poset
                .names()
                .iter()
                .map(|name| {
                    pr.get(name)
                        .map(|f| f.0.clone())
                        .ok_or_else(|| invalid(format!("missing probability for `{name}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(IndependentModel::new(p)
                .map_err(|e| invalid(e.to_string()))?
                .into())
        }
        ModelDoc::Joint { pr } => {
            if n > MASS_LIMIT {
                return Err(invalid(format!(
                    "joint tables are limited to {MASS_LIMIT} elements"
                )));
            }
            let mut table: Vec<Option<Rational>> = vec![None; 1 << n];
            for (key, f) in pr {
                let set = parse_key(poset, key)?;
                if table[set.0 as usize].replace(f.0.clone()).is_some() {
                    return Err(invalid(format!("subset \"{key}\" listed twice")));
                }
            }
            table[0].get_or_insert_with(rational::one);
            let table = table
                .into_iter()
                .enumerate()
                .map(|(mask, p)| {
                    p.ok_or_else(|| {
                        invalid(format!(
                            "missing subset \"{}\"",
                            subset_key(poset, Subset(mask as u64))
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(JointModel::new(n, table)
                .map_err(|e| invalid(e.to_string()))?
                .into())
        }
        ModelDoc::Tree { root } => {
            let tree = PseudoBayesTree::new(build_node(poset, root)?)
                .map_err(|e| invalid(e.to_string()))?;
            if tree.len() != n {
                return Err(invalid(format!(
                    "tree has {} leaves for {n} elements",
                    tree.len()
                )));
            }
            Ok(tree.into())
        }
    }
}

/// Parses and validates a game document.
pub fn parse_game_file(text: &str) -> Result<ParsedGame, CliError> {
    let doc: GameDoc = serde_json::from_str(text).map_err(|e| CliError::from_json(&e))?;
    if let Some(bad) = doc
        .elements
        .iter()
        .find(|e| e.is_empty() || e.contains(','))
    {
        return Err(invalid(format!(
            "element name \"{bad}\" is empty or contains a comma"
        )));
    }
    let poset = Poset::new(&doc.elements, &doc.covers).map_err(|e| invalid(e.to_string()))?;
    let model = build_model(&poset, &doc.model)?;
    let variant = match doc.variant {
        VariantDoc::Osr => Variant::Osr,
        VariantDoc::Csr => Variant::Csr,
    };
    let stages = doc
        .stages
        .as_ref()
        .map(|stages| {
            stages
                .iter()
                .map(|s| poset.indices_of(s).map_err(|e| invalid(e.to_string())))
                .collect()
        })
        .transpose()?;
    let game = GameInstance::new(poset, model, variant).map_err(|e| invalid(e.to_string()))?;
    Ok(ParsedGame { game, stages })
}

fn node_doc(poset: &Poset, node: &TreeNode) -> NodeDoc {
    let weight = Fraction(node.weight.clone());
    match &node.kind {
        TreeNodeKind::Leaf(x) => NodeDoc {
            weight,
            leaf: Some(poset.name(*x).to_string()),
            children: None,
        },
        TreeNodeKind::Internal(c) => NodeDoc {
            weight,
            leaf: None,
            children: Some(vec![node_doc(poset, &c[0]), node_doc(poset, &c[1])]),
        },
    }
}

/// Canonical pretty-printed document; [`parse_game_file`] inverts it.
pub fn render_game_file(parsed: &ParsedGame) -> String {
    let game = &parsed.game;
    let poset = game.poset();
    let model = match game.model() {
        ProbabilityModel::Independent(m) => ModelDoc::Independent {
            pr: poset
                .names()
                .iter()
                .cloned()
                .zip(m.marginals().iter().cloned().map(Fraction))
                .collect(),
        },
        ProbabilityModel::Joint(m) => ModelDoc::Joint {
            pr: poset
                .all()
                .subsets()
                .map(|s| (subset_key(poset, s), Fraction(m.pr(s))))
                .collect(),
        },
        ProbabilityModel::Tree(t) => ModelDoc::Tree {
            root: node_doc(poset, t.root()),
        },
    };
    let doc = GameDoc {
        elements: poset.names().to_vec(),
        covers: poset
            .covers()
            .iter()
            .map(|&(x, y)| (poset.name(x).to_string(), poset.name(y).to_string()))
            .collect(),
        variant: match game.variant() {
            Variant::Osr => VariantDoc::Osr,
            Variant::Csr => VariantDoc::Csr,
        },
        model,
        stages: parsed.stages.as_ref().map(|stages| {
            stages
                .iter()
                .map(|s| s.iter().map(|x| poset.name(x).to_string()).collect())
                .collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("game documents always serialize")
}
