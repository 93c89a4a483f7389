//! Named fixtures: micro instances for the oracle and the worked examples.

use std::collections::BTreeMap;

use crate::approx::Direction;
use crate::format::{LatticeSpec, OperatorSpec, RelationSpec, SubsetSpec, UniverseSpec};
use crate::oracle::{Budget, InstanceSpec};

pub const INSTANCES: [&str; 5] = ["boolean2x", "luk2x1", "luk2x2", "luk2x2half", "goedel2x2"];

pub const EXAMPLES: [&str; 7] = [
    "inner-example-godel",
    "inner-example-luk",
    "outer-example",
    "euclidean-example",
    "mediate-example",
    "least-equivalent",
    "largest-equivalent",
];

fn universe(points: &[&str], membership: &[&str]) -> UniverseSpec {
    UniverseSpec {
        points: points.iter().map(|s| s.to_string()).collect(),
        membership: points
            .iter()
            .zip(membership)
            .map(|(p, m)| (p.to_string(), m.to_string()))
            .collect(),
    }
}

fn subset(points: &[&str], values: &[&str]) -> SubsetSpec {
    SubsetSpec {
        values: points
            .iter()
            .zip(values)
            .map(|(p, v)| (p.to_string(), v.to_string()))
            .collect(),
    }
}

fn relation(points: &[&str], rows: &[[&str; 3]]) -> RelationSpec {
    RelationSpec {
        matrix: points
            .iter()
            .zip(rows)
            .map(|(p, row)| {
                let r: BTreeMap<String, String> = points
                    .iter()
                    .zip(row.iter())
                    .map(|(q, v)| (q.to_string(), v.to_string()))
                    .collect();
                (p.to_string(), r)
            })
            .collect(),
    }
}

/// Oracle micro instances. `luk2x2` carries the sampled-completeness budget.
pub fn instance(name: &str) -> Option<InstanceSpec> {
    let (lattice, universe, trials) = match name {
        "boolean2x" => (LatticeSpec::Boolean {}, universe(&["a", "b"], &["1", "1"]), 0),
        "luk2x1" => (LatticeSpec::Lukasiewicz { levels: 2 }, universe(&["a"], &["1"]), 0),
        "luk2x2" => (
            LatticeSpec::Lukasiewicz { levels: 2 },
            universe(&["a", "b"], &["1", "1"]),
            100_000,
        ),
        "luk2x2half" => (
            LatticeSpec::Lukasiewicz { levels: 2 },
            universe(&["a", "b"], &["1/2", "1/2"]),
            0,
        ),
        "goedel2x2" => (LatticeSpec::Goedel { levels: 2 }, universe(&["a", "b"], &["1", "1/2"]), 0),
        _ => return None,
    };
    Some(InstanceSpec {
        name: name.into(),
        lattice,
        universe,
        scope: Vec::new(),
        budget: Budget {
            sample_trials: trials,
            ..Budget::default()
        },
    })
}

/// A worked example: data plus the operator it is about, if any.
#[derive(Debug, Clone)]
pub struct Example {
    pub name: &'static str,
    pub lattice: LatticeSpec,
    pub universe: UniverseSpec,
    pub m: Option<SubsetSpec>,
    pub q: Option<SubsetSpec>,
    pub relation: Option<RelationSpec>,
    pub operator: Option<OperatorSpec>,
}

const ABCD: [&str; 4] = ["a", "b", "c", "d"];
const ABC: [&str; 3] = ["a", "b", "c"];

pub fn example(name: &str) -> Option<Example> {
    let four = universe(&ABCD, &["0.2", "0.7", "0.3", "0.8"]);
    let three = universe(&ABC, &["0.5", "0.7", "0.4"]);
    let m = Some(subset(&ABCD, &["0.2", "0.5", "0.3", "0.6"]));
    let q = Some(subset(&ABCD, &["0.2", "0.5", "0.3", "0.5"]));
    let builtin = |n: &str, d: Direction| {
        Some(OperatorSpec::Builtin {
            name: n.into(),
            direction: Some(d),
        })
    };
    let goedel = LatticeSpec::Goedel { levels: 10 };
    let luk = LatticeSpec::Lukasiewicz { levels: 10 };
    let (name, lattice, universe, m, q, relation, operator) = match name {
        "inner-example-godel" => (EXAMPLES[0], goedel, four, m, q, None, builtin("identity", Direction::Upper)),
        "inner-example-luk" => (EXAMPLES[1], luk, four, m, q, None, builtin("identity", Direction::Upper)),
        "outer-example" => (EXAMPLES[2], luk, four, m, q, None, builtin("identity", Direction::Lower)),
        "euclidean-example" => {
            let r = relation(&ABC, &[["0.5", "0.2", "0.2"], ["0.2", "0.7", "0.1"], ["0.2", "0.1", "0.4"]]);
            let op = Some(OperatorSpec::InducedUpper { relation: r.clone() });
            (EXAMPLES[3], goedel, three, None, None, Some(r), op)
        }
        "mediate-example" => {
            let r = relation(&ABC, &[["0.5", "0.2", "0.3"], ["0.1", "0.7", "0.1"], ["0.2", "0.4", "0.4"]]);
            let op = Some(OperatorSpec::InducedUpper { relation: r.clone() });
            (EXAMPLES[4], goedel, three, None, None, Some(r), op)
        }
        "least-equivalent" => (EXAMPLES[5], goedel, four, None, None, None, builtin("identity", Direction::Upper)),
        "largest-equivalent" => (EXAMPLES[6], goedel, four, None, None, None, builtin("h1_largest", Direction::Upper)),
        _ => return None,
    };
    Some(Example {
        name,
        lattice,
        universe,
        m,
        q,
        relation,
        operator,
    })
}
