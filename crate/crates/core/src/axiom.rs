//! Axiom registry, the axiom checker, and relation reconstruction.
//!
//! Every single axiom has the shape `P(A, X(B)) = P(B, F(A))` for all
//! `A, B` in P(U), where `P` is the inner product for upper operators and
//! the outer product for lower ones, `X` is the operator and `F` is a join
//! (upper) or meet (lower) of terms built from `A`, `X` and the inverse
//! mapping. Component axioms are pointwise comparisons or preservation laws.
//!
//! Two engines evaluate axioms. The table engine works on canonical P(U)
//! indices and is used in exhaustive mode; the direct engine applies
//! operators to explicit value vectors and is used in sampled mode.

use std::borrow::Cow;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{tabulate, Direction, Operator};
use crate::error::{Error, Result, SpaceSize};
use crate::lattice::{Elem, FiniteResiduatedLattice};
use crate::product::{inner_values, lower_inverse, outer_values, upper_inverse};
use crate::relation::{LValuedRelation, PropertySet, RelationProperties};
use crate::universe::{
    copoint_values, enumerate_powerset, neg_values, point_values, require_mv_constant, Powerset,
    Universe,
};

/// Axioms are grouped by the operator direction they apply to.
pub type Family = Direction;

/// A term of an axiom, applied to a subset argument `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    /// `A`
    Arg,
    /// `X(A)`
    Op,
    /// `X(X(A))`
    OpOp,
    /// `X^-1(A)`
    Inv,
    /// `X^-1(X^-1(A))`
    InvInv,
    /// `X(X^-1(A))`
    OpInv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `P(A, X(B)) = P(B, F(A))`; `join` selects how the terms of `F` combine.
    Single { terms: &'static [Term], join: bool },
    /// `lhs(W) rel rhs(W)` pointwise for every `W`.
    Compare { lhs: Term, rel: Rel, rhs: Term },
    /// `X(U_{d}) <= U(d)`.
    Bounded,
    /// `X(b * (a -> Q)) = b * (a -> X(Q))` for `b <= a`, `join Q <= a`.
    ScalarUpper,
    /// `X(U meet (a -> W)) = U meet (a -> X(W))`.
    ScalarLower,
    /// Join preservation: binary joins and the empty join.
    JoinPreserving,
    /// Meet preservation: binary meets and the empty meet.
    MeetPreserving,
    /// `X(U_{d})(h) = X(U_{h})(d)`.
    PointSymmetric,
    /// `¬X(U_{X-{d}})(h) = ¬X(U_{X-{h}})(d)`.
    CopointSymmetric,
}

#[derive(Debug, Clone, Copy)]
pub struct AxiomSpec {
    pub name: &'static str,
    pub family: Family,
    pub form: Form,
    /// Relation properties characterized by a single axiom; `None` for
    /// component axioms.
    pub predicts: Option<&'static str>,
    pub statement: &'static str,
}

use Direction::{Lower, Upper};
use Term::*;

macro_rules! single {
    ($name:literal, $fam:expr, $join:expr, [$($t:expr),*], $pred:literal, $st:literal) => {
        AxiomSpec {
            name: $name,
            family: $fam,
            form: Form::Single { terms: &[$($t),*], join: $join },
            predicts: Some($pred),
            statement: $st,
        }
    };
}

macro_rules! compare {
    ($name:literal, $fam:expr, $lhs:expr, $rel:expr, $rhs:expr, $st:literal) => {
        AxiomSpec {
            name: $name,
            family: $fam,
            form: Form::Compare { lhs: $lhs, rel: $rel, rhs: $rhs },
            predicts: None,
            statement: $st,
        }
    };
}

macro_rules! component {
    ($name:literal, $fam:expr, $form:expr, $st:literal) => {
        AxiomSpec {
            name: $name,
            family: $fam,
            form: $form,
            predicts: None,
            statement: $st,
        }
    };
}

pub static REGISTRY: &[AxiomSpec] = &[
    component!("H0", Upper, Form::Bounded, "H(U_{d}) <= U(d)"),
    component!("H1", Upper, Form::ScalarUpper, "H(b * (a -> Q)) = b * (a -> H(Q)) for b <= a, join Q <= a"),
    component!("H2", Upper, Form::JoinPreserving, "H(join_i W_i) = join_i H(W_i)"),
    compare!("H3", Upper, Inv, Rel::Ge, Arg, "H^-1(W) >= W"),
    compare!("H4", Upper, InvInv, Rel::Le, Inv, "H^-1 H^-1(W) <= H^-1(W)"),
    compare!("H5", Upper, Inv, Rel::Eq, Op, "H^-1(W) = H(W)"),
    compare!("H6", Upper, OpInv, Rel::Le, Inv, "H H^-1(W) <= H^-1(W)"),
    compare!("H7", Upper, InvInv, Rel::Ge, Inv, "H^-1 H^-1(W) >= H^-1(W)"),
    component!("C1", Upper, Form::ScalarUpper, "H(b * (a -> Q)) = b * (a -> H(Q)) for b <= a, join Q <= a"),
    component!("C2", Upper, Form::JoinPreserving, "H(join_i W_i) = join_i H(W_i)"),
    compare!("C3", Upper, Arg, Rel::Le, Op, "W <= H(W)"),
    compare!("C4", Upper, OpOp, Rel::Le, Op, "H H(W) <= H(W)"),
    component!("C5", Upper, Form::PointSymmetric, "H(U_{d})(h) = H(U_{h})(d)"),
    single!("H", Upper, true, [Inv], "", "I(M, H(Q)) = I(Q, H^-1(M))"),
    single!("HR", Upper, true, [Arg, Inv], "R", "I(M, H(Q)) = I(Q, M v H^-1(M))"),
    single!("HT", Upper, true, [InvInv, Inv], "T", "I(M, H(Q)) = I(Q, H^-1 H^-1(M) v H^-1(M))"),
    single!("HS", Upper, true, [Op], "S", "I(M, H(Q)) = I(Q, H(M))"),
    single!("HE", Upper, true, [OpInv, Inv], "E", "I(M, H(Q)) = I(Q, H H^-1(M) v H^-1(M))"),
    single!("HM", Upper, false, [InvInv, Inv], "M", "I(M, H(Q)) = I(Q, H^-1 H^-1(M) ^ H^-1(M))"),
    single!("HRT", Upper, true, [Arg, InvInv, Inv], "RT", "I(M, H(Q)) = I(Q, M v H^-1 H^-1(M) v H^-1(M))"),
    single!("HRS", Upper, true, [Arg, Op], "RS", "I(M, H(Q)) = I(Q, M v H(M))"),
    single!("HRE", Upper, true, [Arg, OpInv, Inv], "RE", "I(M, H(Q)) = I(Q, M v H H^-1(M) v H^-1(M))"),
    single!("HTS", Upper, true, [OpOp, Op], "TS", "I(M, H(Q)) = I(Q, H H(M) v H(M))"),
    single!("HTE", Upper, true, [InvInv, OpInv, Inv], "TE", "I(M, H(Q)) = I(Q, H^-1 H^-1(M) v H H^-1(M) v H^-1(M))"),
    single!("HTM", Upper, true, [InvInv], "TM", "I(M, H(Q)) = I(Q, H^-1 H^-1(M))"),
    single!("HSM", Upper, false, [OpOp, Op], "SM", "I(M, H(Q)) = I(Q, H H(M) ^ H(M))"),
    single!("HRTS", Upper, true, [Arg, Op, OpOp], "RTS", "I(M, H(Q)) = I(Q, M v H(M) v H H(M))"),
    single!("HRTE", Upper, true, [Arg, InvInv, OpInv, Inv], "RTE", "I(M, H(Q)) = I(Q, M v H^-1 H^-1(M) v H H^-1(M) v H^-1(M))"),
    component!("L1", Lower, Form::ScalarLower, "L(U ^ (a -> W)) = U ^ (a -> L(W))"),
    component!("L2", Lower, Form::MeetPreserving, "L(meet_i W_i) = meet_i L(W_i)"),
    compare!("L3", Lower, Inv, Rel::Le, Arg, "L~(W) <= W"),
    compare!("L4", Lower, InvInv, Rel::Ge, Inv, "L~ L~(W) >= L~(W)"),
    compare!("L5", Lower, Inv, Rel::Eq, Op, "L~(W) = L(W)"),
    compare!("L6", Lower, OpInv, Rel::Ge, Inv, "L L~(W) >= L~(W)"),
    compare!("L7", Lower, InvInv, Rel::Le, Inv, "L~ L~(W) <= L~(W)"),
    component!("D1", Lower, Form::ScalarLower, "L(U ^ (a -> W)) = U ^ (a -> L(W))"),
    component!("D2", Lower, Form::MeetPreserving, "L(meet_i W_i) = meet_i L(W_i)"),
    compare!("D3", Lower, Op, Rel::Le, Arg, "L(Q) <= Q"),
    compare!("D4", Lower, OpOp, Rel::Ge, Op, "L L(Q) >= L(Q)"),
    component!("D5", Lower, Form::CopointSymmetric, "¬L(U_{X-{d}})(h) = ¬L(U_{X-{h}})(d)"),
    single!("L", Lower, false, [Inv], "", "O(M, L(Q)) = O(Q, L~(M))"),
    single!("LR", Lower, false, [Arg, Inv], "R", "O(M, L(Q)) = O(Q, M ^ L~(M))"),
    single!("LT", Lower, false, [InvInv, Inv], "T", "O(M, L(Q)) = O(Q, L~ L~(M) ^ L~(M))"),
    single!("LS", Lower, false, [Op], "S", "O(M, L(Q)) = O(Q, L(M))"),
    single!("LE", Lower, false, [OpInv, Inv], "E", "O(M, L(Q)) = O(Q, L L~(M) ^ L~(M))"),
    single!("LM", Lower, true, [InvInv, Inv], "M", "O(M, L(Q)) = O(Q, L~ L~(M) v L~(M))"),
    single!("LRT", Lower, false, [Arg, InvInv, Inv], "RT", "O(M, L(Q)) = O(Q, M ^ L~ L~(M) ^ L~(M))"),
    single!("LRS", Lower, false, [Arg, Op], "RS", "O(M, L(Q)) = O(Q, M ^ L(M))"),
    single!("LRE", Lower, false, [Arg, OpInv, Inv], "RE", "O(M, L(Q)) = O(Q, M ^ L L~(M) ^ L~(M))"),
    single!("LTS", Lower, false, [OpOp, Op], "TS", "O(M, L(Q)) = O(Q, L L(M) ^ L(M))"),
    single!("LTE", Lower, false, [InvInv, OpInv, Inv], "TE", "O(M, L(Q)) = O(Q, L~ L~(M) ^ L L~(M) ^ L~(M))"),
    single!("LTM", Lower, false, [InvInv], "TM", "O(M, L(Q)) = O(Q, L~ L~(M))"),
    single!("LSM", Lower, true, [OpOp, Op], "SM", "O(M, L(Q)) = O(Q, L L(M) v L(M))"),
    single!("LRTS", Lower, false, [Arg, Op, OpOp], "RTS", "O(M, L(Q)) = O(Q, M ^ L(M) ^ L L(M))"),
    single!("LRTE", Lower, false, [Arg, InvInv, OpInv, Inv], "RTE", "O(M, L(Q)) = O(Q, M ^ L~ L~(M) ^ L L~(M) ^ L~(M))"),
];

/// Names of the single-axiom characterization theorems, upper then lower.
pub fn theorems(family: Family) -> impl Iterator<Item = AxiomId> {
    REGISTRY
        .iter()
        .filter(move |s| s.family == family && s.predicts.is_some())
        .map(|s| AxiomId { spec: s })
}

pub const APPROACH_ONE_UPPER: [&str; 5] = ["C1", "C2", "C3", "C4", "C5"];
pub const APPROACH_ONE_LOWER: [&str; 5] = ["D1", "D2", "D3", "D4", "D5"];

#[derive(Clone, Copy)]
pub struct AxiomId {
    spec: &'static AxiomSpec,
}

impl PartialEq for AxiomId {
    fn eq(&self, other: &Self) -> bool {
        self.spec.name == other.spec.name
    }
}

impl Eq for AxiomId {}

impl std::fmt::Debug for AxiomId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.spec.name)
    }
}

impl std::fmt::Display for AxiomId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.spec.name)
    }
}

impl Serialize for AxiomId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AxiomId", 3)?;
        st.serialize_field("family", &self.spec.family)?;
        st.serialize_field("name", self.spec.name)?;
        st.serialize_field("statement", self.spec.statement)?;
        st.end()
    }
}

impl AxiomId {
    pub fn parse(name: &str) -> Result<Self> {
        REGISTRY
            .iter()
            .find(|s| s.name == name)
            .map(|spec| AxiomId { spec })
            .ok_or_else(|| Error::InvalidInput(format!("unknown axiom `{name}`")))
    }

    pub fn name(&self) -> &'static str {
        self.spec.name
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn spec(&self) -> &'static AxiomSpec {
        self.spec
    }

    pub fn is_theorem(&self) -> bool {
        self.spec.predicts.is_some()
    }

    /// Relation properties predicted by a characterization theorem.
    pub fn predicted_properties(&self) -> Option<PropertySet> {
        self.spec
            .predicts
            .map(|p| PropertySet::from_letters(p).expect("registry letters are valid"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub name: String,
    pub value: String,
}

/// A counterexample. Subsets are rendered as `0.2/a + 0.5/b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub bindings: Vec<Binding>,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip)]
    pub subsets: Vec<(String, Vec<Elem>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub holds: bool,
    pub mode: Mode,
    pub witness: Option<Witness>,
    /// Quantifier instances evaluated.
    pub checked_count: SpaceSize,
    /// Size of the full quantifier space.
    pub space_size: SpaceSize,
    /// Number of failing instances among those evaluated.
    pub failures: SpaceSize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advisory: Option<&'static str>,
}

/// Preconditions shared by every check on `op` against `axiom`.
fn check_preconditions(op: &Operator, axiom: AxiomId) -> Result<()> {
    if op.direction() != axiom.family() {
        return Err(Error::DirectionMismatch {
            axiom: axiom.name().into(),
            expected: axiom.family().name(),
            actual: op.direction().name(),
        });
    }
    let u = op.universe();
    match axiom.family() {
        Direction::Upper => {
            if !u.lattice().caps().gl_quantale {
                return Err(Error::RequiresGL);
            }
        }
        Direction::Lower => require_mv_constant(u)?,
    }
    Ok(())
}

fn inverse(op: &Operator) -> Result<Operator> {
    match op.direction() {
        Direction::Upper => upper_inverse(op),
        Direction::Lower => lower_inverse(op),
    }
}

/// Evaluation backend shared by both modes.
trait Engine: Sync {
    type S: Clone + Send + Sync;
    fn universe(&self) -> &Universe;
    fn family(&self) -> Family;
    fn term(&self, t: Term, a: &Self::S) -> Self::S;
    fn vals<'a>(&'a self, s: &'a Self::S) -> Cow<'a, [Elem]>;
    fn from_vals(&self, v: Vec<Elem>) -> Self::S;
    fn prod(&self, a: &Self::S, b: &Self::S) -> Elem;

    fn lat(&self) -> &FiniteResiduatedLattice {
        self.universe().lattice()
    }

    fn combine(&self, terms: &[Term], join: bool, a: &Self::S) -> Self::S {
        let lat = self.lat();
        let mut acc: Vec<Elem> = self.vals(&self.term(terms[0], a)).into_owned();
        for &t in &terms[1..] {
            let v = self.term(t, a);
            for (x, y) in acc.iter_mut().zip(self.vals(&v).iter()) {
                *x = if join { lat.join(*x, *y) } else { lat.meet(*x, *y) };
            }
        }
        self.from_vals(acc)
    }
}

/// Canonical-index engine over tabulated operator and inverse.
pub(crate) struct TableEngine {
    ps: Arc<Powerset>,
    family: Family,
    op: Arc<[u32]>,
    inv: Vec<u32>,
}

impl TableEngine {
    pub(crate) fn new(ps: Arc<Powerset>, family: Family, op: Arc<[u32]>) -> Self {
        let u = ps.universe().clone();
        let lat = u.lattice();
        let n = ps.len();
        let probes: Vec<Vec<Elem>> = (0..u.len())
            .map(|d| match family {
                Direction::Upper => ps
                    .values(op[ps.point_index(d)] as usize)
                    .iter()
                    .map(|&v| lat.meet(u.membership(d), v))
                    .collect(),
                Direction::Lower => ps.values(op[ps.copoint_index(d)] as usize).to_vec(),
            })
            .collect();
        let mut image = vec![lat.bot(); u.len()];
        let inv = (0..n)
            .map(|i| {
                let q = ps.values(i);
                for (d, p) in probes.iter().enumerate() {
                    image[d] = match family {
                        Direction::Upper => inner_values(&u, p, q),
                        Direction::Lower => outer_values(&u, p, q),
                    };
                }
                ps.index_of(&image).expect("inverse preserves the bound") as u32
            })
            .collect();
        TableEngine {
            ps,
            family,
            op,
            inv,
        }
    }

    #[inline]
    fn idx(&self, t: Term, i: usize) -> usize {
        let op = |k: usize| self.op[k] as usize;
        let inv = |k: usize| self.inv[k] as usize;
        match t {
            Arg => i,
            Op => op(i),
            OpOp => op(op(i)),
            Inv => inv(i),
            InvInv => inv(inv(i)),
            OpInv => op(inv(i)),
        }
    }

    #[cfg(test)]
    fn inverse_table(&self) -> &[u32] {
        &self.inv
    }
}

impl Engine for TableEngine {
    type S = usize;

    fn universe(&self) -> &Universe {
        self.ps.universe()
    }

    fn family(&self) -> Family {
        self.family
    }

    fn term(&self, t: Term, a: &usize) -> usize {
        self.idx(t, *a)
    }

    fn vals<'a>(&'a self, s: &'a usize) -> Cow<'a, [Elem]> {
        Cow::Borrowed(self.ps.values(*s))
    }

    fn from_vals(&self, v: Vec<Elem>) -> usize {
        self.ps.index_of(&v).expect("value vector lies in P(U)")
    }

    fn prod(&self, a: &usize, b: &usize) -> Elem {
        match self.family {
            Direction::Upper => self.ps.inner(*a, *b),
            Direction::Lower => self.ps.outer(*a, *b),
        }
    }

    fn combine(&self, terms: &[Term], join: bool, a: &usize) -> usize {
        if terms.len() == 1 {
            return self.idx(terms[0], *a);
        }
        let lat = self.lat();
        let mut acc = self.ps.values(self.idx(terms[0], *a)).to_vec();
        for &t in &terms[1..] {
            for (x, y) in acc.iter_mut().zip(self.ps.values(self.idx(t, *a))) {
                *x = if join { lat.join(*x, *y) } else { lat.meet(*x, *y) };
            }
        }
        self.from_vals(acc)
    }
}

/// Engine applying operators to explicit value vectors.
struct DirectEngine {
    op: Operator,
    inv: Operator,
}

impl Engine for DirectEngine {
    type S = Vec<Elem>;

    fn universe(&self) -> &Universe {
        self.op.universe()
    }

    fn family(&self) -> Family {
        self.op.direction()
    }

    fn term(&self, t: Term, a: &Vec<Elem>) -> Vec<Elem> {
        match t {
            Arg => a.clone(),
            Op => self.op.apply_values(a),
            OpOp => self.op.apply_values(&self.op.apply_values(a)),
            Inv => self.inv.apply_values(a),
            InvInv => self.inv.apply_values(&self.inv.apply_values(a)),
            OpInv => self.op.apply_values(&self.inv.apply_values(a)),
        }
    }

    fn vals<'a>(&'a self, s: &'a Vec<Elem>) -> Cow<'a, [Elem]> {
        Cow::Borrowed(s)
    }

    fn from_vals(&self, v: Vec<Elem>) -> Vec<Elem> {
        v
    }

    fn prod(&self, a: &Vec<Elem>, b: &Vec<Elem>) -> Elem {
        let u = self.universe();
        match self.family() {
            Direction::Upper => inner_values(u, a, b),
            Direction::Lower => outer_values(u, a, b),
        }
    }
}

/// One point of an axiom's quantifier space.
#[derive(Clone)]
enum Inst<S> {
    Pair(S, S),
    Sub(S),
    Point(usize),
    Points(usize, usize),
    Scalar { q: S, alpha: Elem, beta: Elem },
    Binary(S, S),
    Empty,
}

fn render_subset(u: &Universe, v: &[Elem]) -> String {
    let lat = u.lattice();
    v.iter()
        .zip(u.points())
        .map(|(&x, p)| format!("{}/{}", lat.format(x), p))
        .collect::<Vec<_>>()
        .join(" + ")
}

struct WitnessBuilder<'a> {
    u: &'a Universe,
    w: Witness,
}

impl<'a> WitnessBuilder<'a> {
    fn new(u: &'a Universe) -> Self {
        WitnessBuilder {
            u,
            w: Witness {
                bindings: Vec::new(),
                lhs: String::new(),
                rhs: String::new(),
                subsets: Vec::new(),
            },
        }
    }

    fn subset(mut self, name: &str, v: &[Elem]) -> Self {
        self.w.bindings.push(Binding {
            name: name.into(),
            value: render_subset(self.u, v),
        });
        self.w.subsets.push((name.into(), v.to_vec()));
        self
    }

    fn scalar(mut self, name: &str, e: Elem) -> Self {
        self.w.bindings.push(Binding {
            name: name.into(),
            value: self.u.lattice().format(e),
        });
        self
    }

    fn point(mut self, name: &str, d: usize) -> Self {
        self.w.bindings.push(Binding {
            name: name.into(),
            value: self.u.points()[d].clone(),
        });
        self
    }

    fn sides_elem(mut self, lhs: Elem, rhs: Elem) -> Witness {
        let lat = self.u.lattice();
        self.w.lhs = lat.format(lhs);
        self.w.rhs = lat.format(rhs);
        self.w
    }

    fn sides_subset(mut self, lhs: &[Elem], rhs: &[Elem]) -> Witness {
        self.w.lhs = render_subset(self.u, lhs);
        self.w.rhs = render_subset(self.u, rhs);
        self.w
    }
}

fn relates(lat: &FiniteResiduatedLattice, rel: Rel, a: &[Elem], b: &[Elem]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| match rel {
        Rel::Le => lat.leq(x, y),
        Rel::Ge => lat.leq(y, x),
        Rel::Eq => x == y,
    })
}

/// Evaluates one instance; `Some` is a counterexample.
fn eval<E: Engine>(e: &E, spec: &AxiomSpec, inst: &Inst<E::S>) -> Option<Witness> {
    let u = e.universe();
    let lat = u.lattice();
    let n = u.len();
    match (spec.form, inst) {
        (Form::Single { terms, join }, Inst::Pair(m, q)) => {
            let lhs = e.prod(m, &e.term(Op, q));
            let rhs = e.prod(q, &e.combine(terms, join, m));
            (lhs != rhs).then(|| {
                WitnessBuilder::new(u)
                    .subset("M", &e.vals(m))
                    .subset("Q", &e.vals(q))
                    .sides_elem(lhs, rhs)
            })
        }
        (Form::Compare { lhs, rel, rhs }, Inst::Sub(w)) => {
            let l = e.term(lhs, w);
            let r = e.term(rhs, w);
            let (lv, rv) = (e.vals(&l), e.vals(&r));
            (!relates(lat, rel, &lv, &rv)).then(|| {
                WitnessBuilder::new(u)
                    .subset("W", &e.vals(w))
                    .sides_subset(&lv, &rv)
            })
        }
        (Form::Bounded, Inst::Point(d)) => {
            let img = e.term(Op, &e.from_vals(point_values(u, *d)));
            let iv = e.vals(&img);
            let bound = u.membership(*d);
            (!iv.iter().all(|&v| lat.leq(v, bound))).then(|| {
                WitnessBuilder::new(u)
                    .point("d", *d)
                    .sides_subset(&iv, &vec![bound; n])
            })
        }
        (Form::PointSymmetric, Inst::Points(d, h)) => {
            let hd = e.term(Op, &e.from_vals(point_values(u, *d)));
            let hh = e.term(Op, &e.from_vals(point_values(u, *h)));
            let (l, r) = (e.vals(&hd)[*h], e.vals(&hh)[*d]);
            (l != r).then(|| {
                WitnessBuilder::new(u)
                    .point("d", *d)
                    .point("h", *h)
                    .sides_elem(l, r)
            })
        }
        (Form::CopointSymmetric, Inst::Points(d, h)) => {
            let ld = e.term(Op, &e.from_vals(copoint_values(u, *d)));
            let lh = e.term(Op, &e.from_vals(copoint_values(u, *h)));
            let l = neg_values(u, &e.vals(&ld))[*h];
            let r = neg_values(u, &e.vals(&lh))[*d];
            (l != r).then(|| {
                WitnessBuilder::new(u)
                    .point("d", *d)
                    .point("h", *h)
                    .sides_elem(l, r)
            })
        }
        (Form::ScalarUpper, Inst::Scalar { q, alpha, beta }) => {
            let (a, b) = (*alpha, *beta);
            let scale = |v: &[Elem]| -> Vec<Elem> {
                v.iter().map(|&x| lat.tensor(b, lat.implies(a, x))).collect()
            };
            let qv = e.vals(q);
            let lhs = e.term(Op, &e.from_vals(scale(&qv)));
            let rhs = scale(&e.vals(&e.term(Op, q)));
            let lv = e.vals(&lhs);
            (*lv != *rhs).then(|| {
                WitnessBuilder::new(u)
                    .subset("Q", &qv)
                    .scalar("alpha", a)
                    .scalar("beta", b)
                    .sides_subset(&lv, &rhs)
            })
        }
        (Form::ScalarLower, Inst::Scalar { q, alpha, .. }) => {
            let a = *alpha;
            let shift = |v: &[Elem]| -> Vec<Elem> {
                v.iter()
                    .enumerate()
                    .map(|(x, &w)| lat.meet(u.membership(x), lat.implies(a, w)))
                    .collect()
            };
            let wv = e.vals(q);
            let lhs = e.term(Op, &e.from_vals(shift(&wv)));
            let rhs = shift(&e.vals(&e.term(Op, q)));
            let lv = e.vals(&lhs);
            (*lv != *rhs).then(|| {
                WitnessBuilder::new(u)
                    .subset("W", &wv)
                    .scalar("alpha", a)
                    .sides_subset(&lv, &rhs)
            })
        }
        (Form::JoinPreserving | Form::MeetPreserving, Inst::Binary(a, b)) => {
            let join = matches!(spec.form, Form::JoinPreserving);
            let pick = |x: Elem, y: Elem| if join { lat.join(x, y) } else { lat.meet(x, y) };
            let (av, bv) = (e.vals(a), e.vals(b));
            let merged: Vec<Elem> = av.iter().zip(bv.iter()).map(|(&x, &y)| pick(x, y)).collect();
            let lhs = e.term(Op, &e.from_vals(merged));
            let (ia, ib) = (e.term(Op, a), e.term(Op, b));
            let rhs: Vec<Elem> = e
                .vals(&ia)
                .iter()
                .zip(e.vals(&ib).iter())
                .map(|(&x, &y)| pick(x, y))
                .collect();
            let lv = e.vals(&lhs);
            (*lv != *rhs).then(|| {
                WitnessBuilder::new(u)
                    .subset("W1", &av)
                    .subset("W2", &bv)
                    .sides_subset(&lv, &rhs)
            })
        }
        (Form::JoinPreserving | Form::MeetPreserving, Inst::Empty) => {
            // The empty join is the zero subset; the empty meet is U itself.
            let unit: Vec<Elem> = if matches!(spec.form, Form::JoinPreserving) {
                vec![lat.bot(); n]
            } else {
                u.membership_values().to_vec()
            };
            let img = e.term(Op, &e.from_vals(unit.clone()));
            let iv = e.vals(&img);
            (*iv != *unit).then(|| WitnessBuilder::new(u).sides_subset(&iv, &unit))
        }
        _ => unreachable!("instance shape does not match axiom form"),
    }
}

/// Quantifier space of an axiom in exhaustive mode.
struct Space {
    n: usize,
    points: usize,
    scalars: Vec<(usize, Elem, Elem)>,
    form: Form,
}

impl Space {
    fn new(ps: &Powerset, form: Form) -> Self {
        let u = ps.universe();
        let lat = u.lattice();
        let n = ps.len();
        let scalars = match form {
            Form::ScalarUpper => {
                let mut out = Vec::new();
                for q in 0..n {
                    let top_q = lat.join_all(ps.values(q).iter().copied());
                    for a in lat.elements().filter(|&a| lat.leq(top_q, a)) {
                        for b in lat.elements().filter(|&b| lat.leq(b, a)) {
                            out.push((q, a, b));
                        }
                    }
                }
                out
            }
            Form::ScalarLower => (0..n)
                .flat_map(|q| lat.elements().map(move |a| (q, a, a)))
                .collect(),
            _ => Vec::new(),
        };
        Space {
            n,
            points: u.len(),
            scalars,
            form,
        }
    }

    fn len(&self) -> usize {
        match self.form {
            Form::Single { .. } => self.n * self.n,
            Form::Compare { .. } => self.n,
            Form::Bounded => self.points,
            Form::PointSymmetric | Form::CopointSymmetric => self.points * self.points,
            Form::ScalarUpper | Form::ScalarLower => self.scalars.len(),
            Form::JoinPreserving | Form::MeetPreserving => self.n * self.n + 1,
        }
    }

    fn get(&self, k: usize) -> Inst<usize> {
        match self.form {
            Form::Single { .. } => Inst::Pair(k / self.n, k % self.n),
            Form::Compare { .. } => Inst::Sub(k),
            Form::Bounded => Inst::Point(k),
            Form::PointSymmetric | Form::CopointSymmetric => {
                Inst::Points(k / self.points, k % self.points)
            }
            Form::ScalarUpper | Form::ScalarLower => {
                let (q, alpha, beta) = self.scalars[k];
                Inst::Scalar { q, alpha, beta }
            }
            Form::JoinPreserving | Form::MeetPreserving => {
                if k == 0 {
                    Inst::Empty
                } else {
                    Inst::Binary((k - 1) / self.n, (k - 1) % self.n)
                }
            }
        }
    }
}

/// Fast yes/no check on a table engine, stopping at the first failure.
pub(crate) fn table_holds(engine: &TableEngine, axiom: AxiomId) -> bool {
    let spec = axiom.spec();
    if let Form::Single { terms, join } = spec.form {
        let n = engine.ps.len();
        let f: Vec<usize> = (0..n).map(|i| engine.combine(terms, join, &i)).collect();
        return (0..n).all(|m| {
            let fm = f[m];
            (0..n).all(|q| engine.prod(&m, &(engine.op[q] as usize)) == engine.prod(&q, &fm))
        });
    }
    let space = Space::new(&engine.ps, spec.form);
    (0..space.len()).all(|k| eval(engine, spec, &space.get(k)).is_none())
}

fn run_exhaustive(engine: &TableEngine, axiom: AxiomId) -> (SpaceSize, SpaceSize, Option<Witness>) {
    let spec = axiom.spec();
    let space = Space::new(&engine.ps, spec.form);
    let len = space.len();
    let (failures, first) = (0..len)
        .into_par_iter()
        .map(|k| match eval(engine, spec, &space.get(k)) {
            Some(w) => (1u128, Some((k, w))),
            None => (0, None),
        })
        .reduce(
            || (0, None),
            |(fa, wa), (fb, wb)| {
                let first = match (wa, wb) {
                    (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
                    (a, b) => a.or(b),
                };
                (fa + fb, first)
            },
        );
    (len as SpaceSize, failures, first.map(|(_, w)| w))
}

fn random_subset(u: &Universe, downs: &[Vec<Elem>], rng: &mut ChaCha8Rng) -> Vec<Elem> {
    (0..u.len())
        .map(|x| downs[x][rng.gen_range(0..downs[x].len())])
        .collect()
}

fn sample_instance(
    u: &Universe,
    downs: &[Vec<Elem>],
    form: Form,
    rng: &mut ChaCha8Rng,
) -> Inst<Vec<Elem>> {
    let lat = u.lattice();
    match form {
        Form::Single { .. } => Inst::Pair(random_subset(u, downs, rng), random_subset(u, downs, rng)),
        Form::Compare { .. } => Inst::Sub(random_subset(u, downs, rng)),
        Form::Bounded => Inst::Point(rng.gen_range(0..u.len())),
        Form::PointSymmetric | Form::CopointSymmetric => {
            Inst::Points(rng.gen_range(0..u.len()), rng.gen_range(0..u.len()))
        }
        Form::ScalarUpper => {
            let q = random_subset(u, downs, rng);
            let top_q = lat.join_all(q.iter().copied());
            let ups: Vec<Elem> = lat.elements().filter(|&a| lat.leq(top_q, a)).collect();
            let alpha = ups[rng.gen_range(0..ups.len())];
            let below = lat.down_set(alpha);
            let beta = below[rng.gen_range(0..below.len())];
            Inst::Scalar { q, alpha, beta }
        }
        Form::ScalarLower => {
            let q = random_subset(u, downs, rng);
            let alpha = Elem::new(rng.gen_range(0..lat.size()));
            Inst::Scalar {
                q,
                alpha,
                beta: alpha,
            }
        }
        Form::JoinPreserving | Form::MeetPreserving => {
            if rng.gen_range(0..16) == 0 {
                Inst::Empty
            } else {
                Inst::Binary(random_subset(u, downs, rng), random_subset(u, downs, rng))
            }
        }
    }
}

/// Per-trial generator: the stream index keeps draws independent of
/// scheduling, so results do not depend on the worker count.
pub(crate) fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_sampled(
    engine: &DirectEngine,
    axiom: AxiomId,
    seed: u64,
    trials: u64,
) -> (SpaceSize, SpaceSize, Option<Witness>) {
    let spec = axiom.spec();
    let u = engine.universe();
    let lat = u.lattice();
    let downs: Vec<Vec<Elem>> = u
        .membership_values()
        .iter()
        .map(|&m| lat.down_set(m))
        .collect();
    let (failures, first) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let inst = sample_instance(u, &downs, spec.form, &mut rng);
            match eval(engine, spec, &inst) {
                Some(w) => (1u128, Some((t, w))),
                None => (0, None),
            }
        })
        .reduce(
            || (0, None),
            |(fa, wa), (fb, wb)| {
                let first = match (wa, wb) {
                    (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
                    (a, b) => a.or(b),
                };
                (fa + fb, first)
            },
        );
    (trials as SpaceSize, failures, first.map(|(_, w)| w))
}

fn full_space_size(u: &Universe, form: Form) -> SpaceSize {
    let p = u.powerset_size();
    let m = u.lattice().size() as u128;
    let x = u.len() as u128;
    match form {
        Form::Single { .. } => p.saturating_mul(p),
        Form::Compare { .. } => p,
        Form::Bounded => x,
        Form::PointSymmetric | Form::CopointSymmetric => x * x,
        // Upper bound; the exact count depends on the precondition.
        Form::ScalarUpper => p.saturating_mul(m * m),
        Form::ScalarLower => p.saturating_mul(m),
        Form::JoinPreserving | Form::MeetPreserving => p.saturating_mul(p).saturating_add(1),
    }
}

pub fn check_axiom(op: &Operator, axiom: AxiomId, mode: Mode) -> Result<AxiomReport> {
    check_preconditions(op, axiom)?;
    let advisory = op.advisory();
    let (checked, space_size, failures, witness) = match mode {
        Mode::Exhaustive => {
            let ps = enumerate_powerset(op.universe())?;
            let engine = TableEngine::new(ps.clone(), op.direction(), op.table_entries(&ps));
            let (checked, failures, witness) = run_exhaustive(&engine, axiom);
            (checked, checked, failures, witness)
        }
        Mode::Sampled { seed, trials } => {
            let engine = DirectEngine {
                op: op.clone(),
                inv: inverse(op)?,
            };
            let (checked, failures, witness) = run_sampled(&engine, axiom, seed, trials);
            let space = full_space_size(op.universe(), axiom.spec().form);
            (checked, space, failures, witness)
        }
    };
    Ok(AxiomReport {
        axiom,
        holds: witness.is_none(),
        mode,
        witness,
        checked_count: checked,
        space_size,
        failures,
        advisory,
    })
}

/// Checks every axiom in `set`; all reports are produced, none short-circuit.
pub fn check_axiom_set(op: &Operator, set: &[AxiomId], mode: Mode) -> Result<Vec<AxiomReport>> {
    set.iter().map(|&a| check_axiom(op, a, mode)).collect()
}

pub fn parse_axiom_set(names: &[&str]) -> Result<Vec<AxiomId>> {
    names.iter().map(|n| AxiomId::parse(n)).collect()
}

/// `R(a, b) = H(U_{a})(b)`, after checking `H(U_{d}) <= U(d)`.
pub fn reconstruct_relation_upper(h: &Operator) -> Result<LValuedRelation> {
    if h.direction() != Direction::Upper {
        return Err(Error::DirectionMismatch {
            axiom: "reconstruction".into(),
            expected: "upper",
            actual: h.direction().name(),
        });
    }
    let u = h.universe();
    let rows: Vec<Vec<Elem>> = (0..u.len())
        .map(|a| h.apply_values(&point_values(u, a)))
        .collect();
    upper_relation_from_rows(u, rows)
}

pub(crate) fn upper_relation_from_rows(u: &Arc<Universe>, rows: Vec<Vec<Elem>>) -> Result<LValuedRelation> {
    let lat = u.lattice();
    for (a, row) in rows.iter().enumerate() {
        if !row.iter().all(|&v| lat.leq(v, u.membership(a))) {
            return Err(Error::H0Violated {
                point: u.points()[a].clone(),
            });
        }
    }
    Ok(LValuedRelation::from_raw(
        u.clone(),
        rows.into_iter().flatten().collect(),
    ))
}

/// `R(a, b) = ¬L(U_{X-{a}})(b)`.
pub fn reconstruct_relation_lower(l: &Operator) -> Result<LValuedRelation> {
    if l.direction() != Direction::Lower {
        return Err(Error::DirectionMismatch {
            axiom: "reconstruction".into(),
            expected: "lower",
            actual: l.direction().name(),
        });
    }
    let u = l.universe();
    require_mv_constant(u)?;
    let rows: Vec<Vec<Elem>> = (0..u.len())
        .map(|a| l.apply_values(&copoint_values(u, a)))
        .collect();
    Ok(lower_relation_from_rows(u, rows))
}

pub(crate) fn lower_relation_from_rows(u: &Arc<Universe>, rows: Vec<Vec<Elem>>) -> LValuedRelation {
    let m = rows.iter().flat_map(|r| neg_values(u, r)).collect();
    LValuedRelation::from_raw(u.clone(), m)
}

pub fn reconstruct_relation(op: &Operator) -> Result<LValuedRelation> {
    match op.direction() {
        Direction::Upper => reconstruct_relation_upper(op),
        Direction::Lower => reconstruct_relation_lower(op),
    }
}

pub fn induced(relation: LValuedRelation, direction: Direction) -> Operator {
    match direction {
        Direction::Upper => Operator::induced_upper(relation),
        Direction::Lower => Operator::induced_lower(relation),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterizationReport {
    pub theorem: AxiomId,
    pub axiom: AxiomReport,
    /// Rows of the reconstructed relation as labels; absent when (H0) fails.
    pub reconstruction: Option<Vec<Vec<String>>>,
    pub reconstruction_error: Option<String>,
    pub properties: Option<RelationProperties>,
    pub required_properties: String,
    pub roundtrip_equal: bool,
    /// `roundtrip_equal` and the reconstructed relation has the required properties.
    pub prediction: bool,
    /// The theorem's biconditional holds on this instance.
    pub confirmed: bool,
    #[serde(skip)]
    pub relation: Option<LValuedRelation>,
}

pub fn verify_characterization(
    theorem: AxiomId,
    op: &Operator,
    mode: Mode,
) -> Result<CharacterizationReport> {
    let required = theorem
        .predicted_properties()
        .ok_or_else(|| Error::NotATheorem(theorem.name().into()))?;
    let axiom = check_axiom(op, theorem, mode)?;
    let (relation, reconstruction_error) = match reconstruct_relation(op) {
        Ok(r) => (Some(r), None),
        Err(e @ Error::H0Violated { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let roundtrip_equal = match &relation {
        Some(r) => {
            let ps = enumerate_powerset(op.universe())?;
            let back = induced(r.clone(), op.direction()).table_entries(&ps);
            *back == *op.table_entries(&ps)
        }
        None => false,
    };
    let properties = relation.as_ref().map(|r| r.properties());
    let prediction =
        roundtrip_equal && properties.map(|p| required.satisfied_by(&p)).unwrap_or(false);
    let lat = op.universe().lattice();
    Ok(CharacterizationReport {
        theorem,
        confirmed: axiom.holds == prediction,
        axiom,
        reconstruction: relation.as_ref().map(|r| {
            r.rows()
                .iter()
                .map(|row| row.iter().map(|&e| lat.format(e)).collect())
                .collect()
        }),
        reconstruction_error,
        properties,
        required_properties: required.letters(),
        roundtrip_equal,
        prediction,
        relation,
    })
}

/// Tabulates `op` and checks every axiom of its family exhaustively.
pub fn exhaustive_profile(op: &Operator) -> Result<Vec<(AxiomId, bool)>> {
    let t = tabulate(op)?;
    let (ps, entries) = t.table().expect("tabulated");
    let engine = TableEngine::new(ps.clone(), op.direction(), entries.into());
    Ok(REGISTRY
        .iter()
        .filter(|s| s.family == op.direction())
        .map(|spec| {
            let id = AxiomId { spec };
            (id, table_holds(&engine, id))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::Builtin;
    use crate::label::Label;
    use crate::relation::enumerate_relations;

    fn names(n: usize) -> Vec<String> {
        ["a", "b", "c", "d"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn ax(name: &str) -> AxiomId {
        AxiomId::parse(name).unwrap()
    }

    fn goedel_universe() -> Arc<Universe> {
        let g = Arc::new(crate::lattice::FiniteResiduatedLattice::goedel(2).unwrap());
        let half = g.find_label(&Label::new(1, 2)).unwrap();
        Universe::new(g.clone(), names(2), vec![g.top(), half]).unwrap()
    }

    fn luk_constant(levels: usize, points: usize) -> Arc<Universe> {
        let l = Arc::new(crate::lattice::FiniteResiduatedLattice::lukasiewicz(levels).unwrap());
        Universe::constant(l.clone(), names(points), l.top()).unwrap()
    }

    #[test]
    fn registry_is_consistent() {
        assert_eq!(REGISTRY.len(), 55);
        assert_eq!(theorems(Direction::Upper).count(), 15);
        assert_eq!(theorems(Direction::Lower).count(), 15);
        for spec in REGISTRY {
            let first = spec.name.chars().next().unwrap();
            let expected = if "HC".contains(first) { Upper } else { Lower };
            assert_eq!(spec.family, expected, "{}", spec.name);
            assert_eq!(ax(spec.name).name(), spec.name);
        }
        // Each lower single axiom mirrors its upper twin with join and meet swapped.
        for (up, low) in theorems(Upper).zip(theorems(Lower)) {
            assert_eq!(&up.name()[1..], &low.name()[1..]);
            match (up.spec().form, low.spec().form) {
                (Form::Single { terms: a, join: ja }, Form::Single { terms: b, join: jb }) => {
                    assert_eq!(a, b);
                    assert_eq!(ja, !jb);
                }
                _ => panic!("theorems are single axioms"),
            }
        }
        assert!(AxiomId::parse("HX").is_err());
    }

    #[test]
    fn builtins_satisfy_their_strongest_axioms() {
        for u in [goedel_universe(), luk_constant(2, 2)] {
            let id = Operator::builtin(&u, Builtin::Identity, Upper).unwrap();
            let big = Operator::builtin(&u, Builtin::H1Largest, Upper).unwrap();
            for op in [&id, &big] {
                let rep = check_axiom(op, ax("HRTS"), Mode::Exhaustive).unwrap();
                assert!(rep.holds, "{rep:?}");
                assert_eq!(rep.checked_count, rep.space_size);
                assert_eq!(rep.failures, 0);
            }
            assert_eq!(
                reconstruct_relation_upper(&id).unwrap(),
                LValuedRelation::diagonal(&u)
            );
            assert_eq!(
                reconstruct_relation_upper(&big).unwrap(),
                LValuedRelation::full(&u)
            );
        }
        let u = luk_constant(2, 2);
        let id = Operator::builtin(&u, Builtin::Identity, Lower).unwrap();
        let least = Operator::builtin(&u, Builtin::L1Least, Lower).unwrap();
        for op in [&id, &least] {
            assert!(check_axiom(op, ax("LRTS"), Mode::Exhaustive).unwrap().holds);
        }
        assert_eq!(reconstruct_relation_lower(&id).unwrap(), LValuedRelation::diagonal(&u));
        assert_eq!(reconstruct_relation_lower(&least).unwrap(), LValuedRelation::full(&u));
    }

    #[test]
    fn preconditions() {
        let u = goedel_universe();
        let up = Operator::builtin(&u, Builtin::Identity, Upper).unwrap();
        let low = Operator::builtin(&u, Builtin::Identity, Lower).unwrap();
        assert!(matches!(
            check_axiom(&up, ax("LRTS"), Mode::Exhaustive),
            Err(Error::DirectionMismatch { .. })
        ));
        assert_eq!(
            check_axiom(&low, ax("L"), Mode::Exhaustive).unwrap_err(),
            Error::RequiresMV
        );
        let l = Arc::new(crate::lattice::FiniteResiduatedLattice::lukasiewicz(2).unwrap());
        let half = l.find_label(&Label::new(1, 2)).unwrap();
        let nc = Universe::new(l.clone(), names(2), vec![l.top(), half]).unwrap();
        let low = Operator::builtin(&nc, Builtin::Identity, Lower).unwrap();
        let set = parse_axiom_set(&APPROACH_ONE_LOWER).unwrap();
        assert_eq!(
            check_axiom_set(&low, &set, Mode::Exhaustive).unwrap_err(),
            Error::RequiresConstantUniverse
        );
        assert!(matches!(
            verify_characterization(ax("H3"), &up, Mode::Exhaustive),
            Err(Error::NotATheorem(_))
        ));
    }

    #[test]
    fn approach_one_sets_on_induced_operators() {
        for u in [goedel_universe(), luk_constant(2, 2)] {
            let upper = parse_axiom_set(&APPROACH_ONE_UPPER).unwrap();
            for r in enumerate_relations(&u, PropertySet::NONE).unwrap() {
                let op = Operator::induced_upper(r.clone());
                let reps = check_axiom_set(&op, &upper, Mode::Exhaustive).unwrap();
                assert!(reps[0].holds && reps[1].holds);
                let p = r.properties();
                assert_eq!(reps[2].holds, p.reflexive, "{:?}", r.rows());
                assert_eq!(reps[3].holds, p.transitive, "{:?}", r.rows());
                assert_eq!(reps[4].holds, p.symmetric, "{:?}", r.rows());
                assert!(check_axiom(&op, ax("H0"), Mode::Exhaustive).unwrap().holds);
            }
        }
        let u = luk_constant(2, 2);
        let lower = parse_axiom_set(&APPROACH_ONE_LOWER).unwrap();
        for r in enumerate_relations(&u, PropertySet::NONE).unwrap() {
            let op = Operator::induced_lower(r.clone());
            let reps = check_axiom_set(&op, &lower, Mode::Exhaustive).unwrap();
            let p = r.properties();
            assert!(reps[0].holds && reps[1].holds);
            assert_eq!(reps[2].holds, p.reflexive);
            assert_eq!(reps[3].holds, p.transitive);
            assert_eq!(reps[4].holds, p.symmetric);
        }
    }

    #[test]
    fn h5_matches_inverse_equality() {
        let u = goedel_universe();
        let ps = enumerate_powerset(&u).unwrap();
        for r in enumerate_relations(&u, PropertySet::NONE).unwrap() {
            let op = Operator::induced_upper(r.clone());
            let inv = upper_inverse(&op).unwrap();
            let equal = inv.table_entries(&ps) == op.table_entries(&ps);
            assert_eq!(check_axiom(&op, ax("H5"), Mode::Exhaustive).unwrap().holds, equal);
            assert_eq!(equal, r.is_symmetric());
        }
    }

    #[test]
    fn non_join_preserving_table_is_rejected_with_first_witness() {
        let u = luk_constant(2, 1);
        let ps = enumerate_powerset(&u).unwrap();
        // Constant map to U: fails the empty join first.
        let op = Operator::from_table(ps.clone(), vec![2, 2, 2], Upper).unwrap();
        let rep = check_axiom(&op, ax("H2"), Mode::Exhaustive).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.space_size, 10);
        assert_eq!(rep.checked_count, 10);
        let w = rep.witness.unwrap();
        assert!(w.bindings.is_empty());
        assert_eq!(w.lhs, "1/a");
        assert_eq!(w.rhs, "0/a");

        let report = verify_characterization(ax("H"), &op, Mode::Exhaustive).unwrap();
        assert!(!report.axiom.holds);
        assert!(report.axiom.witness.is_some());
        assert!(report.reconstruction.is_some());
        assert!(!report.roundtrip_equal);
        assert!(report.confirmed);
    }

    #[test]
    fn characterization_on_identity() {
        let u = goedel_universe();
        let id = Operator::builtin(&u, Builtin::Identity, Upper).unwrap();
        let rep = verify_characterization(ax("HRTS"), &id, Mode::Exhaustive).unwrap();
        assert!(rep.axiom.holds && rep.roundtrip_equal && rep.prediction && rep.confirmed);
        assert!(rep.properties.unwrap().equivalence);
    }

    #[test]
    fn sampled_mode_is_deterministic_and_agrees() {
        let u = luk_constant(2, 2);
        for r in enumerate_relations(&u, PropertySet::NONE).unwrap().into_iter().step_by(5) {
            let op = Operator::induced_upper(r);
            for name in ["H", "HR", "HT", "HE", "HM", "H1", "H2", "C5"] {
                let mode = Mode::Sampled { seed: 7, trials: 300 };
                let a = check_axiom(&op, ax(name), mode).unwrap();
                let b = check_axiom(&op, ax(name), mode).unwrap();
                assert_eq!(a.holds, b.holds);
                assert_eq!(a.witness, b.witness);
                let ex = check_axiom(&op, ax(name), Mode::Exhaustive).unwrap();
                // Sampling can miss failures but never invents them.
                if ex.holds {
                    assert!(a.holds, "{name}");
                }
            }
        }
    }

    #[test]
    fn table_and_direct_engines_agree() {
        let u = goedel_universe();
        for r in enumerate_relations(&u, PropertySet::NONE).unwrap() {
            let op = Operator::induced_upper(r);
            let ps = enumerate_powerset(&u).unwrap();
            let engine = TableEngine::new(ps.clone(), Upper, op.table_entries(&ps));
            let inv = upper_inverse(&op).unwrap();
            assert_eq!(engine.inverse_table(), &*inv.table_entries(&ps));
            for spec in REGISTRY.iter().filter(|s| s.family == Upper) {
                let id = AxiomId { spec };
                let fast = table_holds(&engine, id);
                let full = check_axiom(&op, id, Mode::Exhaustive).unwrap().holds;
                assert_eq!(fast, full, "{}", spec.name);
            }
        }
    }
}
