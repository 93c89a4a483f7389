//! Upper and lower L-valued rough approximation operators, and the general
//! [`Operator`] abstraction over P(U).

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::product;
use crate::relation::LValuedRelation;
use crate::universe::{copoint_values, enumerate_powerset, point_values, LSubset, Powerset, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upper,
    Lower,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Upper => "upper",
            Direction::Lower => "lower",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(Direction::Upper),
            "lower" => Ok(Direction::Lower),
            _ => Err(Error::InvalidInput(format!("unknown direction `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `Q -> Q`.
    Identity,
    /// `a -> join_b Q(b) * (U(b) -> U(a))`, the upper operator of the full relation.
    H1Largest,
    /// `a -> U(a) meet (meet_d Q(d))`, the lower operator of the full relation.
    L1Least,
}

impl Builtin {
    pub const ALL: [Builtin; 3] = [Builtin::Identity, Builtin::H1Largest, Builtin::L1Least];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Identity => "identity",
            Builtin::H1Largest => "h1_largest",
            Builtin::L1Least => "l1_least",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == s)
    }

    /// The only direction a non-identity builtin makes sense in.
    pub fn natural_direction(self) -> Option<Direction> {
        match self {
            Builtin::Identity => None,
            Builtin::H1Largest => Some(Direction::Upper),
            Builtin::L1Least => Some(Direction::Lower),
        }
    }
}

#[derive(Clone)]
pub enum OperatorKind {
    InducedUpper(LValuedRelation),
    InducedLower(LValuedRelation),
    Builtin(Builtin),
    Table {
        powerset: Arc<Powerset>,
        entries: Arc<[u32]>,
    },
    /// Applied lazily; `probes[d] = U(d) meet H(U_{d})`.
    UpperInverse {
        base: Box<Operator>,
        probes: Arc<OnceLock<Vec<Vec<Elem>>>>,
    },
    /// Applied lazily; `probes[b] = L(U_{X-{b}})`.
    LowerInverse {
        base: Box<Operator>,
        probes: Arc<OnceLock<Vec<Vec<Elem>>>>,
    },
}

/// A map `P(U) -> P(U)` tagged with the axiom family it belongs to.
#[derive(Clone)]
pub struct Operator {
    universe: Arc<Universe>,
    kind: OperatorKind,
    direction: Direction,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({}, {})", self.describe(), self.direction)
    }
}

impl Operator {
    pub fn induced_upper(relation: LValuedRelation) -> Self {
        Operator {
            universe: relation.universe().clone(),
            kind: OperatorKind::InducedUpper(relation),
            direction: Direction::Upper,
        }
    }

    pub fn induced_lower(relation: LValuedRelation) -> Self {
        Operator {
            universe: relation.universe().clone(),
            kind: OperatorKind::InducedLower(relation),
            direction: Direction::Lower,
        }
    }

    pub fn builtin(universe: &Arc<Universe>, builtin: Builtin, direction: Direction) -> Result<Self> {
        if let Some(d) = builtin.natural_direction() {
            if d != direction {
                return Err(Error::InvalidInput(format!(
                    "builtin `{}` is a {} operator",
                    builtin.name(),
                    d
                )));
            }
        }
        Ok(Operator {
            universe: universe.clone(),
            kind: OperatorKind::Builtin(builtin),
            direction,
        })
    }

    /// An extensional operator; `entries[i]` is the canonical index of the
    /// image of the `i`-th member of `powerset`.
    pub fn from_table(powerset: Arc<Powerset>, entries: Vec<u32>, direction: Direction) -> Result<Self> {
        if entries.len() != powerset.len() {
            return Err(Error::InvalidInput(format!(
                "operator table has {} entries, powerset has {} members",
                entries.len(),
                powerset.len()
            )));
        }
        if entries.iter().any(|&e| e as usize >= powerset.len()) {
            return Err(Error::InvalidInput(
                "operator table entry outside the powerset".into(),
            ));
        }
        Ok(Self::table_raw(powerset, entries.into(), direction))
    }

    pub(crate) fn table_raw(powerset: Arc<Powerset>, entries: Arc<[u32]>, direction: Direction) -> Self {
        Operator {
            universe: powerset.universe().clone(),
            kind: OperatorKind::Table { powerset, entries },
            direction,
        }
    }

    pub(crate) fn inverse_of(base: Operator) -> Self {
        let universe = base.universe.clone();
        let direction = base.direction;
        let probes = Arc::new(OnceLock::new());
        let base = Box::new(base);
        let kind = match direction {
            Direction::Upper => OperatorKind::UpperInverse { base, probes },
            Direction::Lower => OperatorKind::LowerInverse { base, probes },
        };
        Operator {
            universe,
            kind,
            direction,
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            OperatorKind::InducedUpper(_) => "induced_upper".into(),
            OperatorKind::InducedLower(_) => "induced_lower".into(),
            OperatorKind::Builtin(b) => b.name().into(),
            OperatorKind::Table { .. } => "table".into(),
            OperatorKind::UpperInverse { base, .. } => format!("upper_inverse({})", base.describe()),
            OperatorKind::LowerInverse { base, .. } => format!("lower_inverse({})", base.describe()),
        }
    }

    /// Set when the value depends on an outer product over a non-constant
    /// universe, where its algebraic properties are not guaranteed.
    pub fn advisory(&self) -> Option<&'static str> {
        match &self.kind {
            OperatorKind::LowerInverse { .. } if !self.universe.is_constant() => {
                Some("nonconstant-universe")
            }
            OperatorKind::UpperInverse { base, .. } | OperatorKind::LowerInverse { base, .. } => {
                base.advisory()
            }
            _ => None,
        }
    }

    pub fn apply(&self, q: &LSubset) -> Result<LSubset> {
        Universe::ensure_same(&self.universe, q.universe())?;
        Ok(LSubset::from_raw(self.universe.clone(), self.apply_values(q.values())))
    }

    pub(crate) fn apply_values(&self, q: &[Elem]) -> Vec<Elem> {
        let u = &*self.universe;
        match &self.kind {
            OperatorKind::InducedUpper(r) => upper_values(r, q),
            OperatorKind::InducedLower(r) => lower_values(r, q),
            OperatorKind::Builtin(b) => builtin_values(u, *b, q),
            OperatorKind::Table { powerset, entries } => {
                let i = powerset.index_of(q).expect("argument lies in P(U)");
                powerset.values(entries[i] as usize).to_vec()
            }
            OperatorKind::UpperInverse { base, probes } => {
                let probes = probes.get_or_init(|| {
                    let lat = u.lattice();
                    (0..u.len())
                        .map(|d| {
                            base.apply_values(&point_values(u, d))
                                .into_iter()
                                .map(|v| lat.meet(u.membership(d), v))
                                .collect()
                        })
                        .collect()
                });
                probes.iter().map(|p| product::inner_values(u, p, q)).collect()
            }
            OperatorKind::LowerInverse { base, probes } => {
                let probes = probes.get_or_init(|| {
                    (0..u.len())
                        .map(|b| base.apply_values(&copoint_values(u, b)))
                        .collect()
                });
                probes.iter().map(|p| product::outer_values(u, p, q)).collect()
            }
        }
    }

    /// Canonical-index image table over `powerset`.
    pub(crate) fn table_entries(&self, powerset: &Arc<Powerset>) -> Arc<[u32]> {
        if let OperatorKind::Table {
            powerset: own,
            entries,
        } = &self.kind
        {
            if Arc::ptr_eq(own, powerset) {
                return entries.clone();
            }
        }
        (0..powerset.len())
            .map(|i| {
                let image = self.apply_values(powerset.values(i));
                powerset.index_of(&image).expect("operator preserves the bound") as u32
            })
            .collect()
    }

    /// The extensional form of this operator over `powerset`.
    pub fn tabulate_over(&self, powerset: &Arc<Powerset>) -> Result<Operator> {
        Universe::ensure_same(&self.universe, powerset.universe())?;
        Ok(Self::table_raw(
            powerset.clone(),
            self.table_entries(powerset),
            self.direction,
        ))
    }

    pub fn table(&self) -> Option<(&Arc<Powerset>, &[u32])> {
        match &self.kind {
            OperatorKind::Table { powerset, entries } => Some((powerset, entries)),
            _ => None,
        }
    }
}

/// Tabulates `op` over the canonically enumerated powerset of its universe.
pub fn tabulate(op: &Operator) -> Result<Operator> {
    if let OperatorKind::Table { .. } = op.kind() {
        return Ok(op.clone());
    }
    let ps = enumerate_powerset(op.universe())?;
    op.tabulate_over(&ps)
}

pub fn apply(op: &Operator, q: &LSubset) -> Result<LSubset> {
    op.apply(q)
}

/// `upper(Q)(o) = join_d R(d, o) * (U(d) -> Q(d))`.
pub fn upper_approx(r: &LValuedRelation, q: &LSubset) -> Result<LSubset> {
    Universe::ensure_same(r.universe(), q.universe())?;
    Ok(LSubset::from_raw(r.universe().clone(), upper_values(r, q.values())))
}

/// `lower(Q)(o) = meet_d U(o) * (R(d, o) -> Q(d))`.
pub fn lower_approx(r: &LValuedRelation, q: &LSubset) -> Result<LSubset> {
    Universe::ensure_same(r.universe(), q.universe())?;
    Ok(LSubset::from_raw(r.universe().clone(), lower_values(r, q.values())))
}

pub(crate) fn upper_values(r: &LValuedRelation, q: &[Elem]) -> Vec<Elem> {
    let u = r.universe();
    let lat = u.lattice();
    let n = u.len();
    let weights: Vec<Elem> = (0..n).map(|d| lat.implies(u.membership(d), q[d])).collect();
    (0..n)
        .map(|o| lat.join_all((0..n).map(|d| lat.tensor(r.get(d, o), weights[d]))))
        .collect()
}

pub(crate) fn lower_values(r: &LValuedRelation, q: &[Elem]) -> Vec<Elem> {
    let u = r.universe();
    let lat = u.lattice();
    let n = u.len();
    (0..n)
        .map(|o| {
            let uo = u.membership(o);
            lat.meet_all((0..n).map(|d| lat.tensor(uo, lat.implies(r.get(d, o), q[d]))))
        })
        .collect()
}

fn builtin_values(u: &Universe, b: Builtin, q: &[Elem]) -> Vec<Elem> {
    let lat = u.lattice();
    let n = u.len();
    match b {
        Builtin::Identity => q.to_vec(),
        Builtin::H1Largest => (0..n)
            .map(|a| {
                let ua = u.membership(a);
                lat.join_all(
                    (0..n).map(|b| lat.tensor(q[b], lat.implies(u.membership(b), ua))),
                )
            })
            .collect(),
        Builtin::L1Least => {
            let floor = lat.meet_all(q.iter().copied());
            (0..n).map(|a| lat.meet(u.membership(a), floor)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::lattice::FiniteResiduatedLattice;
    use crate::relation::{enumerate_relations, PropertySet};

    fn names(n: usize) -> Vec<String> {
        ["a", "b", "c", "d"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn small_universes() -> Vec<Arc<Universe>> {
        let mut out = Vec::new();
        let b = Arc::new(FiniteResiduatedLattice::boolean());
        out.push(Universe::constant(b.clone(), names(2), b.top()).unwrap());
        for lat in [
            FiniteResiduatedLattice::lukasiewicz(2).unwrap(),
            FiniteResiduatedLattice::goedel(2).unwrap(),
        ] {
            let lat = Arc::new(lat);
            let half = lat.find_label(&Label::new(1, 2)).unwrap();
            out.push(Universe::constant(lat.clone(), names(2), lat.top()).unwrap());
            out.push(Universe::new(lat.clone(), names(2), vec![lat.top(), half]).unwrap());
        }
        out
    }

    #[test]
    fn upper_of_point_is_row() {
        for u in small_universes() {
            for r in enumerate_relations(&u, PropertySet::NONE).unwrap() {
                for a in 0..u.len() {
                    let img = upper_approx(&r, &LSubset::point(&u, a)).unwrap();
                    for b in 0..u.len() {
                        assert_eq!(img.get(b), r.get(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_relation() {
        for u in small_universes() {
            let z = crate::relation::LValuedRelation::zero(&u);
            let ps = enumerate_powerset(&u).unwrap();
            for q in ps.iter() {
                assert_eq!(upper_approx(&z, &q).unwrap(), LSubset::zero(&u));
                assert_eq!(lower_approx(&z, &q).unwrap(), LSubset::full(&u));
            }
        }
    }

    #[test]
    fn builtins() {
        let l = Arc::new(FiniteResiduatedLattice::lukasiewicz(10).unwrap());
        let e = |k: i64| l.find_label(&Label::new(k, 10)).unwrap();
        let u = Universe::new(l.clone(), names(3), vec![e(2), e(7), e(3)]).unwrap();
        let h1 = Operator::builtin(&u, Builtin::H1Largest, Direction::Upper).unwrap();
        for a in 0..3 {
            let img = h1.apply(&LSubset::point(&u, a)).unwrap();
            for b in 0..3 {
                assert_eq!(img.get(b), l.meet(u.membership(a), u.membership(b)));
            }
        }
        let c = Universe::constant(l.clone(), names(3), e(8)).unwrap();
        let l1 = Operator::builtin(&c, Builtin::L1Least, Direction::Lower).unwrap();
        assert_eq!(l1.apply(&LSubset::full(&c)).unwrap(), LSubset::full(&c));
        let id = Operator::builtin(&u, Builtin::Identity, Direction::Lower).unwrap();
        let q = LSubset::point(&u, 1);
        assert_eq!(id.apply(&q).unwrap(), q);
        assert!(Operator::builtin(&u, Builtin::H1Largest, Direction::Lower).is_err());
    }

    #[test]
    fn tabulation() {
        let b = Arc::new(FiniteResiduatedLattice::boolean());
        let u = Universe::constant(b.clone(), names(2), b.top()).unwrap();
        let id = Operator::builtin(&u, Builtin::Identity, Direction::Upper).unwrap();
        let t = tabulate(&id).unwrap();
        assert_eq!(t.table().unwrap().1, &[0, 1, 2, 3]);
        let ind = tabulate(&Operator::induced_upper(crate::relation::LValuedRelation::diagonal(&u)))
            .unwrap();
        assert_eq!(ind.table().unwrap().1, t.table().unwrap().1);
        let again = tabulate(&t).unwrap();
        assert_eq!(again.table().unwrap().1, t.table().unwrap().1);
        let ps = t.table().unwrap().0.clone();
        assert!(Operator::from_table(ps.clone(), vec![0, 1, 2], Direction::Upper).is_err());
        assert!(Operator::from_table(ps, vec![0, 1, 2, 4], Direction::Upper).is_err());
    }

    #[test]
    fn monotone_join_and_meet_preserving() {
        for u in small_universes() {
            let ps = enumerate_powerset(&u).unwrap();
            for r in enumerate_relations(&u, PropertySet::NONE).unwrap() {
                let ups: Vec<LSubset> = ps.iter().map(|q| upper_approx(&r, &q).unwrap()).collect();
                let lows: Vec<LSubset> = ps.iter().map(|q| lower_approx(&r, &q).unwrap()).collect();
                for i in 0..ps.len() {
                    for j in 0..ps.len() {
                        let (qi, qj) = (ps.get(i), ps.get(j));
                        let join = qi.join(&qj).unwrap();
                        let meet = qi.meet(&qj).unwrap();
                        assert_eq!(upper_approx(&r, &join).unwrap(), ups[i].join(&ups[j]).unwrap());
                        assert_eq!(lower_approx(&r, &meet).unwrap(), lows[i].meet(&lows[j]).unwrap());
                        if qi.is_subset_of(&qj).unwrap() {
                            assert!(ups[i].is_subset_of(&ups[j]).unwrap());
                            assert!(lows[i].is_subset_of(&lows[j]).unwrap());
                        }
                    }
                }
                let p = r.properties();
                for (i, q) in ps.iter().enumerate() {
                    if p.reflexive {
                        assert!(q.is_subset_of(&ups[i]).unwrap());
                        assert!(lows[i].is_subset_of(&q).unwrap());
                    }
                    if p.transitive {
                        let twice = upper_approx(&r, &ups[i]).unwrap();
                        assert!(twice.is_subset_of(&ups[i]).unwrap());
                    }
                }
            }
        }
    }
}
