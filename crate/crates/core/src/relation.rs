//! L-valued relations on an L-universe and their property predicates.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result, SpaceSize};
use crate::lattice::Elem;
use crate::universe::Universe;

/// Default cap on enumerated relation spaces.
pub const DEFAULT_MAX_RELATIONS: usize = 1_000_000;

/// A matrix `R: X x X -> L` with `R(a, d) <= U(a) meet U(d)`.
#[derive(Debug, Clone)]
pub struct LValuedRelation {
    universe: Arc<Universe>,
    matrix: Vec<Elem>,
    props: OnceLock<RelationProperties>,
}

impl PartialEq for LValuedRelation {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && Universe::same(&self.universe, &other.universe)
    }
}

impl Eq for LValuedRelation {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationProperties {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub euclidean: bool,
    pub mediate: bool,
    pub tolerance: bool,
    pub preorder: bool,
    pub equivalence: bool,
}

/// A conjunction of primitive relation properties, used as an enumeration
/// filter and as the prediction attached to each single axiom.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PropertySet {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub euclidean: bool,
    pub mediate: bool,
}

impl PropertySet {
    pub const NONE: PropertySet = PropertySet {
        reflexive: false,
        symmetric: false,
        transitive: false,
        euclidean: false,
        mediate: false,
    };

    pub const REFLEXIVE: PropertySet = PropertySet {
        reflexive: true,
        ..Self::NONE
    };

    pub const EQUIVALENCE: PropertySet = PropertySet {
        reflexive: true,
        symmetric: true,
        transitive: true,
        ..Self::NONE
    };

    /// Parses letter codes such as `"RTS"`; the empty string is no property.
    pub fn from_letters(code: &str) -> Option<Self> {
        let mut set = Self::NONE;
        for c in code.chars() {
            let slot = match c {
                'R' => &mut set.reflexive,
                'S' => &mut set.symmetric,
                'T' => &mut set.transitive,
                'E' => &mut set.euclidean,
                'M' => &mut set.mediate,
                _ => return None,
            };
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(set)
    }

    pub fn letters(&self) -> String {
        let mut s = String::new();
        for (flag, c) in [
            (self.reflexive, 'R'),
            (self.transitive, 'T'),
            (self.symmetric, 'S'),
            (self.euclidean, 'E'),
            (self.mediate, 'M'),
        ] {
            if flag {
                s.push(c);
            }
        }
        s
    }

    pub fn satisfied_by(&self, p: &RelationProperties) -> bool {
        (!self.reflexive || p.reflexive)
            && (!self.symmetric || p.symmetric)
            && (!self.transitive || p.transitive)
            && (!self.euclidean || p.euclidean)
            && (!self.mediate || p.mediate)
    }

    pub fn union(self, other: Self) -> Self {
        PropertySet {
            reflexive: self.reflexive || other.reflexive,
            symmetric: self.symmetric || other.symmetric,
            transitive: self.transitive || other.transitive,
            euclidean: self.euclidean || other.euclidean,
            mediate: self.mediate || other.mediate,
        }
    }
}

impl LValuedRelation {
    /// Builds a relation from rows indexed `[a][d]`.
    pub fn new(universe: Arc<Universe>, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let n = universe.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!("relation must be {n}x{n}")));
        }
        Self::from_flat(universe, rows.into_iter().flatten().collect())
    }

    pub fn from_flat(universe: Arc<Universe>, matrix: Vec<Elem>) -> Result<Self> {
        let n = universe.len();
        if matrix.len() != n * n {
            return Err(Error::InvalidInput(format!("relation must be {n}x{n}")));
        }
        let lat = universe.lattice();
        for a in 0..n {
            for d in 0..n {
                let v = matrix[a * n + d];
                if v.index() >= lat.size() {
                    return Err(Error::InvalidInput(
                        "relation value outside the carrier".into(),
                    ));
                }
                let bound = lat.meet(universe.membership(a), universe.membership(d));
                if !lat.leq(v, bound) {
                    let p = universe.points();
                    return Err(Error::BoundViolation {
                        location: format!("({}, {})", p[a], p[d]),
                        value: lat.format(v),
                        bound: lat.format(bound),
                    });
                }
            }
        }
        Ok(Self::from_raw(universe, matrix))
    }

    pub(crate) fn from_raw(universe: Arc<Universe>, matrix: Vec<Elem>) -> Self {
        LValuedRelation {
            universe,
            matrix,
            props: OnceLock::new(),
        }
    }

    pub fn zero(universe: &Arc<Universe>) -> Self {
        let n = universe.len();
        Self::from_raw(universe.clone(), vec![universe.lattice().bot(); n * n])
    }

    /// `R(a, b) = U_{a}(b)`.
    pub fn diagonal(universe: &Arc<Universe>) -> Self {
        let n = universe.len();
        let bot = universe.lattice().bot();
        let m = (0..n * n)
            .map(|i| if i / n == i % n { universe.membership(i / n) } else { bot })
            .collect();
        Self::from_raw(universe.clone(), m)
    }

    /// `R(a, b) = U(a) meet U(b)`.
    pub fn full(universe: &Arc<Universe>) -> Self {
        let n = universe.len();
        let lat = universe.lattice();
        let m = (0..n * n)
            .map(|i| lat.meet(universe.membership(i / n), universe.membership(i % n)))
            .collect();
        Self::from_raw(universe.clone(), m)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    #[inline]
    pub fn get(&self, a: usize, d: usize) -> Elem {
        self.matrix[a * self.size() + d]
    }

    pub fn matrix(&self) -> &[Elem] {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.matrix.chunks(self.size()).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        let m = (0..n * n).map(|i| self.get(i % n, i / n)).collect();
        Self::from_raw(self.universe.clone(), m)
    }

    pub fn is_reflexive(&self) -> bool {
        let lat = self.universe.lattice();
        (0..self.size()).all(|a| lat.leq(self.universe.membership(a), self.get(a, a)))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..a).all(|d| self.get(a, d) == self.get(d, a)))
    }

    /// `R(a, d) * (U(d) -> R(d, h)) <= R(a, h)`.
    pub fn is_transitive(&self) -> bool {
        let lat = self.universe.lattice();
        let n = self.size();
        (0..n).all(|a| {
            (0..n).all(|d| {
                let ud = self.universe.membership(d);
                (0..n).all(|h| {
                    let lhs = lat.tensor(self.get(a, d), lat.implies(ud, self.get(d, h)));
                    lat.leq(lhs, self.get(a, h))
                })
            })
        })
    }

    /// `R(d, a) * (U(d) -> R(d, h)) <= R(a, h)`.
    pub fn is_euclidean(&self) -> bool {
        let lat = self.universe.lattice();
        let n = self.size();
        (0..n).all(|a| {
            (0..n).all(|d| {
                let ud = self.universe.membership(d);
                (0..n).all(|h| {
                    let lhs = lat.tensor(self.get(d, a), lat.implies(ud, self.get(d, h)));
                    lat.leq(lhs, self.get(a, h))
                })
            })
        })
    }

    /// `R(d, a) <= join_h R(d, h) * (U(h) -> R(h, a))`.
    pub fn is_mediate(&self) -> bool {
        let lat = self.universe.lattice();
        let n = self.size();
        (0..n).all(|d| {
            (0..n).all(|a| {
                let rhs = lat.join_all((0..n).map(|h| {
                    lat.tensor(
                        self.get(d, h),
                        lat.implies(self.universe.membership(h), self.get(h, a)),
                    )
                }));
                lat.leq(self.get(d, a), rhs)
            })
        })
    }

    pub fn properties(&self) -> RelationProperties {
        *self.props.get_or_init(|| {
            let reflexive = self.is_reflexive();
            let symmetric = self.is_symmetric();
            let transitive = self.is_transitive();
            RelationProperties {
                reflexive,
                symmetric,
                transitive,
                euclidean: self.is_euclidean(),
                mediate: self.is_mediate(),
                tolerance: reflexive && symmetric,
                preorder: reflexive && transitive,
                equivalence: reflexive && symmetric && transitive,
            }
        })
    }
}

/// The space of all relations on a universe, indexed in canonical
/// mixed-radix order over cells `(a, d)` in row-major order, first cell
/// most significant, each cell running through the down-set of
/// `U(a) meet U(d)` in ascending carrier-index order.
pub struct RelationSpace {
    universe: Arc<Universe>,
    digits: Vec<Vec<Elem>>,
    stride: Vec<usize>,
    size: usize,
}

impl RelationSpace {
    pub fn new(universe: &Arc<Universe>, cap: usize) -> Result<Self> {
        let size = Self::space_size(universe);
        if size > cap as u128 {
            return Err(Error::RelationSpaceTooLarge {
                size,
                cap: cap as u128,
            });
        }
        let n = universe.len();
        let lat = universe.lattice();
        let digits: Vec<Vec<Elem>> = (0..n * n)
            .map(|i| lat.down_set(lat.meet(universe.membership(i / n), universe.membership(i % n))))
            .collect();
        let mut stride = vec![1usize; n * n];
        for c in (0..(n * n).saturating_sub(1)).rev() {
            stride[c] = stride[c + 1] * digits[c + 1].len();
        }
        Ok(RelationSpace {
            universe: universe.clone(),
            digits,
            stride,
            size: size as usize,
        })
    }

    pub fn space_size(universe: &Universe) -> SpaceSize {
        let n = universe.len();
        let lat = universe.lattice();
        (0..n * n).fold(1u128, |acc, i| {
            let bound = lat.meet(universe.membership(i / n), universe.membership(i % n));
            acc.saturating_mul(lat.down_set(bound).len() as u128)
        })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn get(&self, i: usize) -> LValuedRelation {
        let m = self
            .digits
            .iter()
            .zip(&self.stride)
            .map(|(ds, &s)| ds[(i / s) % ds.len()])
            .collect();
        LValuedRelation::from_raw(self.universe.clone(), m)
    }

    pub fn iter(&self) -> impl Iterator<Item = LValuedRelation> + '_ {
        (0..self.size).map(|i| self.get(i))
    }
}

/// All relations satisfying `filter`, in canonical order.
pub fn enumerate_relations(
    universe: &Arc<Universe>,
    filter: PropertySet,
) -> Result<Vec<LValuedRelation>> {
    enumerate_relations_with_cap(universe, filter, DEFAULT_MAX_RELATIONS)
}

pub fn enumerate_relations_with_cap(
    universe: &Arc<Universe>,
    filter: PropertySet,
    cap: usize,
) -> Result<Vec<LValuedRelation>> {
    let space = RelationSpace::new(universe, cap)?;
    Ok(space
        .iter()
        .filter(|r| filter.satisfied_by(&r.properties()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::lattice::FiniteResiduatedLattice;

    fn names(n: usize) -> Vec<String> {
        ["a", "b", "c", "d"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn goedel_rel(membership: &[i64], rows: &[[i64; 3]]) -> LValuedRelation {
        let g = Arc::new(FiniteResiduatedLattice::goedel(10).unwrap());
        let e = |k: i64| g.find_label(&Label::new(k, 10)).unwrap();
        let m = membership.iter().map(|&k| e(k)).collect();
        let u = Universe::new(g.clone(), names(3), m).unwrap();
        let rows = rows.iter().map(|r| r.iter().map(|&k| e(k)).collect()).collect();
        LValuedRelation::new(u, rows).unwrap()
    }

    #[test]
    fn euclidean_table_verdicts_depend_on_tensor() {
        let r = goedel_rel(&[5, 7, 4], &[[5, 2, 2], [2, 7, 1], [2, 1, 4]]);
        assert!(r.is_symmetric());
        assert!(r.is_reflexive());
        // Under min: R(a,b) meet (0.5 -> 0.2) = 0.2 exceeds R(b,c) = 0.1.
        assert!(!r.is_euclidean());
        assert!(!r.is_transitive());

        let l = Arc::new(FiniteResiduatedLattice::lukasiewicz(10).unwrap());
        let e = |k: i64| l.find_label(&Label::new(k, 10)).unwrap();
        let u = Universe::new(l.clone(), names(3), vec![e(5), e(7), e(4)]).unwrap();
        let rows = [[5, 2, 2], [2, 7, 1], [2, 1, 4]]
            .iter()
            .map(|row| row.iter().map(|&k| e(k)).collect())
            .collect();
        let r = LValuedRelation::new(u, rows).unwrap();
        assert!(r.is_euclidean());
        assert!(r.is_transitive());
    }

    #[test]
    fn mediate_example_table() {
        let r = goedel_rel(&[5, 7, 4], &[[5, 2, 3], [1, 7, 1], [2, 4, 4]]);
        assert!(r.is_mediate());
        assert!(!r.is_symmetric());
        // Regression verdicts for the remaining predicates.
        let p = r.properties();
        assert!(p.reflexive);
        assert!(!p.transitive);
        assert!(!p.euclidean);
    }

    #[test]
    fn transitivity_violation() {
        // R(a,b) = R(b,c) = 0.5 but R(a,c) = 0.
        let r = goedel_rel(&[5, 5, 5], &[[0, 5, 0], [0, 0, 5], [0, 0, 0]]);
        assert!(!r.is_transitive());
        assert!(!r.is_reflexive());
        assert!(!r.is_symmetric());
    }

    #[test]
    fn named_relations() {
        let g = Arc::new(FiniteResiduatedLattice::goedel(10).unwrap());
        let e = |k: i64| g.find_label(&Label::new(k, 10)).unwrap();
        let u = Universe::new(g.clone(), names(3), vec![e(5), e(7), e(4)]).unwrap();
        let diag = LValuedRelation::diagonal(&u);
        let full = LValuedRelation::full(&u);
        for r in [&diag, &full] {
            assert!(r.properties().equivalence);
            assert!(r.is_euclidean() && r.is_mediate());
        }
        let zero = LValuedRelation::zero(&u);
        assert!(!zero.is_reflexive());
        assert!(zero.is_euclidean() && zero.is_mediate() && zero.is_transitive());
    }

    #[test]
    fn bound_is_enforced() {
        let g = Arc::new(FiniteResiduatedLattice::goedel(10).unwrap());
        let e = |k: i64| g.find_label(&Label::new(k, 10)).unwrap();
        let u = Universe::new(g.clone(), names(2), vec![e(5), e(7)]).unwrap();
        let err = LValuedRelation::new(u, vec![vec![e(5), e(6)], vec![e(0), e(7)]]).unwrap_err();
        assert!(matches!(err, Error::BoundViolation { .. }));
    }

    #[test]
    fn boolean_enumeration_counts() {
        let b = Arc::new(FiniteResiduatedLattice::boolean());
        let u = Universe::constant(b.clone(), names(2), b.top()).unwrap();
        assert_eq!(enumerate_relations(&u, PropertySet::NONE).unwrap().len(), 16);
        assert_eq!(enumerate_relations(&u, PropertySet::REFLEXIVE).unwrap().len(), 4);
        let eq = enumerate_relations(&u, PropertySet::EQUIVALENCE).unwrap();
        assert_eq!(eq.len(), 2);
        assert_eq!(eq[0], LValuedRelation::diagonal(&u));
        assert_eq!(eq[1], LValuedRelation::full(&u));
    }

    #[test]
    fn relation_cap() {
        let l = Arc::new(FiniteResiduatedLattice::lukasiewicz(2).unwrap());
        let u = Universe::constant(l.clone(), names(3), l.top()).unwrap();
        let err = enumerate_relations_with_cap(&u, PropertySet::NONE, 1000).unwrap_err();
        assert!(matches!(err, Error::RelationSpaceTooLarge { size: 19683, .. }));
    }

    #[test]
    fn symmetric_transitive_iff_euclidean() {
        for lat in [
            FiniteResiduatedLattice::lukasiewicz(2).unwrap(),
            FiniteResiduatedLattice::goedel(2).unwrap(),
        ] {
            let lat = Arc::new(lat);
            let half = lat.find_label(&Label::new(1, 2)).unwrap();
            for m in [vec![lat.top(), lat.top()], vec![lat.top(), half]] {
                let u = Universe::new(lat.clone(), names(2), m).unwrap();
                for r in enumerate_relations(&u, PropertySet::NONE).unwrap() {
                    if r.is_symmetric() {
                        assert_eq!(r.is_transitive(), r.is_euclidean(), "{:?}", r.rows());
                    }
                }
            }
        }
    }

    #[test]
    fn reflexive_implies_mediate() {
        let l = Arc::new(FiniteResiduatedLattice::lukasiewicz(2).unwrap());
        let half = l.find_label(&Label::new(1, 2)).unwrap();
        let u = Universe::new(l.clone(), names(2), vec![l.top(), half]).unwrap();
        for r in enumerate_relations(&u, PropertySet::REFLEXIVE).unwrap() {
            assert!(r.is_mediate());
        }
    }

    #[test]
    fn letters_round_trip() {
        for code in ["", "R", "RT", "RTS", "TE", "SM", "RTE"] {
            assert_eq!(PropertySet::from_letters(code).unwrap().letters(), code);
        }
        assert!(PropertySet::from_letters("RR").is_none());
        assert!(PropertySet::from_letters("X").is_none());
    }
}
