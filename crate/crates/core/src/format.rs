//! JSON file formats. Labels travel as strings of exact rationals; decimal
//! strings are accepted and parsed exactly. Missing subset or relation
//! entries default to 0; unknown point names are rejected.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::approx::{Builtin, Direction, Operator};
use crate::error::{Error, Result};
use crate::label::parse_label;
use crate::lattice::{Elem, FiniteResiduatedLattice};
use crate::relation::LValuedRelation;
use crate::universe::{enumerate_powerset, LSubset, Universe};

/// Version stamped on every serialized report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeSpec {
    Lukasiewicz {
        levels: usize,
    },
    Goedel {
        levels: usize,
    },
    Boolean {},
    Table {
        labels: Vec<String>,
        leq: Vec<Vec<bool>>,
        tensor: Vec<Vec<Cell>>,
        #[serde(rename = "impl", default, skip_serializing_if = "Option::is_none")]
        imp: Option<Vec<Vec<Cell>>>,
    },
}

/// A table cell: an element index or one of the carrier labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Index(usize),
    Label(String),
}

impl LatticeSpec {
    pub fn build(&self) -> Result<Arc<FiniteResiduatedLattice>> {
        let lat = match self {
            LatticeSpec::Lukasiewicz { levels } => FiniteResiduatedLattice::lukasiewicz(*levels)?,
            LatticeSpec::Goedel { levels } => FiniteResiduatedLattice::goedel(*levels)?,
            LatticeSpec::Boolean {} => FiniteResiduatedLattice::boolean(),
            LatticeSpec::Table {
                labels,
                leq,
                tensor,
                imp,
            } => {
                let labels = labels
                    .iter()
                    .map(|s| parse_label(s))
                    .collect::<Result<Vec<_>>>()?;
                let resolve = |t: &Vec<Vec<Cell>>| -> Result<Vec<Vec<usize>>> {
                    t.iter()
                        .map(|row| {
                            row.iter()
                                .map(|c| match c {
                                    Cell::Index(i) => Ok(*i),
                                    Cell::Label(s) => {
                                        let l = parse_label(s)?;
                                        labels.iter().position(|x| *x == l).ok_or_else(|| {
                                            Error::InvalidInput(format!("label `{s}` is not in the carrier"))
                                        })
                                    }
                                })
                                .collect()
                        })
                        .collect()
                };
                let tensor = resolve(tensor)?;
                let imp = imp.as_ref().map(resolve).transpose()?;
                FiniteResiduatedLattice::from_tables(labels.clone(), leq.clone(), tensor, imp)?
            }
        };
        Ok(Arc::new(lat))
    }
}

fn element(lat: &FiniteResiduatedLattice, s: &str) -> Result<Elem> {
    let l = parse_label(s)?;
    lat.find_label(&l)
        .ok_or_else(|| Error::InvalidInput(format!("label `{s}` is not in the carrier")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseSpec {
    pub points: Vec<String>,
    pub membership: BTreeMap<String, String>,
}

impl UniverseSpec {
    pub fn build(&self, lat: &Arc<FiniteResiduatedLattice>) -> Result<Arc<Universe>> {
        for k in self.membership.keys() {
            if !self.points.contains(k) {
                return Err(Error::UnknownPoint(k.clone()));
            }
        }
        let membership = self
            .points
            .iter()
            .map(|p| match self.membership.get(p) {
                Some(s) => element(lat, s),
                None => Err(Error::InvalidInput(format!("no membership degree for point `{p}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Universe::new(lat.clone(), self.points.clone(), membership)
    }

    pub fn from_universe(u: &Universe) -> Self {
        let lat = u.lattice();
        UniverseSpec {
            points: u.points().to_vec(),
            membership: u
                .points()
                .iter()
                .zip(u.membership_values())
                .map(|(p, &e)| (p.clone(), lat.format(e)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetSpec {
    pub values: BTreeMap<String, String>,
}

fn point_map(u: &Universe, map: &BTreeMap<String, String>) -> Result<Vec<Elem>> {
    let lat = u.lattice();
    let mut v = vec![lat.bot(); u.len()];
    for (k, s) in map {
        v[u.point_index(k)?] = element(lat, s)?;
    }
    Ok(v)
}

fn render_map(u: &Universe, values: &[Elem]) -> BTreeMap<String, String> {
    let lat = u.lattice();
    u.points()
        .iter()
        .zip(values)
        .map(|(p, &e)| (p.clone(), lat.format(e)))
        .collect()
}

impl SubsetSpec {
    pub fn build(&self, u: &Arc<Universe>) -> Result<LSubset> {
        LSubset::new(u.clone(), point_map(u, &self.values)?)
    }

    pub fn from_subset(s: &LSubset) -> Self {
        SubsetSpec {
            values: render_map(s.universe(), s.values()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub matrix: BTreeMap<String, BTreeMap<String, String>>,
}

impl RelationSpec {
    pub fn build(&self, u: &Arc<Universe>) -> Result<LValuedRelation> {
        let n = u.len();
        let mut rows = vec![vec![u.lattice().bot(); n]; n];
        for (a, row) in &self.matrix {
            rows[u.point_index(a)?] = point_map(u, row)?;
        }
        LValuedRelation::new(u.clone(), rows)
    }

    pub fn from_relation(r: &LValuedRelation) -> Self {
        let u = r.universe();
        RelationSpec {
            matrix: u
                .points()
                .iter()
                .zip(r.rows())
                .map(|(p, row)| (p.clone(), render_map(u, &row)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    InducedUpper {
        relation: RelationSpec,
    },
    InducedLower {
        relation: RelationSpec,
    },
    Builtin {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        direction: Option<Direction>,
    },
    /// Images of every L-subset, in canonical P(U) order.
    Table {
        direction: Direction,
        entries: Vec<SubsetSpec>,
    },
}

impl OperatorSpec {
    pub fn build(&self, u: &Arc<Universe>) -> Result<Operator> {
        match self {
            OperatorSpec::InducedUpper { relation } => Ok(Operator::induced_upper(relation.build(u)?)),
            OperatorSpec::InducedLower { relation } => Ok(Operator::induced_lower(relation.build(u)?)),
            OperatorSpec::Builtin { name, direction } => {
                let b = Builtin::parse(name)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown builtin `{name}`")))?;
                let dir = direction
                    .or(b.natural_direction())
                    .ok_or_else(|| Error::InvalidInput(format!("builtin `{name}` needs a direction")))?;
                Operator::builtin(u, b, dir)
            }
            OperatorSpec::Table { direction, entries } => {
                let ps = enumerate_powerset(u)?;
                if entries.len() != ps.len() {
                    return Err(Error::InvalidInput(format!(
                        "operator table has {} entries, P(U) has {}",
                        entries.len(),
                        ps.len()
                    )));
                }
                let idx = entries
                    .iter()
                    .map(|e| {
                        let s = e.build(u)?;
                        Ok(ps.index_of_subset(&s)? as u32)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Operator::from_table(ps, idx, *direction)
            }
        }
    }

    /// Extensional form of any operator over its enumerated P(U).
    pub fn table_of(op: &Operator) -> Result<Self> {
        let ps = enumerate_powerset(op.universe())?;
        let entries = op
            .table_entries(&ps)
            .iter()
            .map(|&j| SubsetSpec {
                values: render_map(op.universe(), ps.values(j as usize)),
            })
            .collect();
        Ok(OperatorSpec::Table {
            direction: op.direction(),
            entries,
        })
    }
}

/// Wraps any report with the schema version field.
#[derive(Debug, Clone, Serialize)]
pub struct Versioned<T: Serialize> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: T,
}

pub fn versioned<T: Serialize>(body: T) -> Versioned<T> {
    Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    }
}

pub fn to_json<T: Serialize>(body: &T) -> String {
    serde_json::to_string_pretty(&versioned(body)).expect("reports serialize")
}
