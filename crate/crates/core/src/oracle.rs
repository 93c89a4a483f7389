//! Brute-force verification of the characterization theorems on finite
//! instances.
//!
//! Soundness: every enumerated relation with a theorem's properties induces
//! an operator satisfying the theorem's axiom. Completeness: every operator
//! table satisfying the axiom reconstructs to a relation with those
//! properties whose induced operator is the same table. Work is split by
//! index range; merged results keep the smallest failing index, so the
//! matrix does not depend on the worker count.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{Direction, Operator};
use crate::axiom::{
    lower_relation_from_rows, table_holds, theorems, trial_rng, upper_relation_from_rows, AxiomId,
    TableEngine, Witness,
};
use crate::error::{Error, Result, SpaceSize};
use crate::format::{LatticeSpec, OperatorSpec, RelationSpec, UniverseSpec};
use crate::lattice::Elem;
use crate::product::{lower_inverse, upper_inverse};
use crate::relation::{LValuedRelation, PropertySet, RelationSpace, DEFAULT_MAX_RELATIONS};
use crate::universe::{enumerate_powerset, LSubset, Powerset, Universe};

pub const DEFAULT_MAX_OPERATORS: u64 = 10_000_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    pub max_relations: usize,
    pub max_operators: u64,
    pub sample_seed: u64,
    /// Zero disables sampled completeness.
    pub sample_trials: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_relations: DEFAULT_MAX_RELATIONS,
            max_operators: DEFAULT_MAX_OPERATORS,
            sample_seed: DEFAULT_SEED,
            sample_trials: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(default)]
    pub name: String,
    pub lattice: LatticeSpec,
    pub universe: UniverseSpec,
    /// Theorem names; empty means every theorem.
    #[serde(default)]
    pub scope: Vec<String>,
    #[serde(default)]
    pub budget: Budget,
}

pub struct Instance {
    pub name: String,
    pub universe: Arc<Universe>,
    pub scope: Vec<AxiomId>,
    pub budget: Budget,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance> {
        if self.budget.max_relations == 0 || self.budget.max_operators == 0 {
            return Err(Error::InvalidInput("budgets must be positive".into()));
        }
        let lat = self.lattice.build()?;
        let universe = self.universe.build(&lat)?;
        let scope = if self.scope.is_empty() {
            theorems(Direction::Upper)
                .chain(theorems(Direction::Lower))
                .collect()
        } else {
            let mut out = Vec::new();
            for name in &self.scope {
                let id = AxiomId::parse(name)?;
                if !id.is_theorem() {
                    return Err(Error::NotATheorem(name.clone()));
                }
                if !out.contains(&id) {
                    out.push(id);
                }
            }
            out
        };
        Ok(Instance {
            name: self.name.clone(),
            universe,
            scope,
            budget: self.budget.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckDirection {
    Soundness,
    Completeness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationWitness {
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axiom_witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowStatus {
    Confirmed,
    Refuted { witness: Box<RefutationWitness> },
    Skipped { reason: String, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixRow {
    pub theorem: String,
    pub family: Direction,
    pub properties: String,
    pub direction: CheckDirection,
    pub method: Method,
    #[serde(flatten)]
    pub status: RowStatus,
    /// Relations (soundness) or operator tables (completeness) examined.
    pub cases_checked: u64,
    /// Cases where the axiom held.
    pub accepted: u64,
}

impl MatrixRow {
    pub fn is_refuted(&self) -> bool {
        matches!(self.status, RowStatus::Refuted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationMatrix {
    pub instance: String,
    pub sample_seed: u64,
    pub rows: Vec<MatrixRow>,
}

impl VerificationMatrix {
    pub fn refutations(&self) -> usize {
        self.rows.iter().filter(|r| r.is_refuted()).count()
    }

    pub fn confirmed(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status == RowStatus::Confirmed)
            .count()
    }
}

/// Why a theorem cannot be checked on this universe, if it cannot.
fn family_skip(u: &Universe, family: Direction) -> Option<(&'static str, &'static str)> {
    let caps = u.lattice().caps();
    match family {
        Direction::Upper if !caps.gl_quantale => Some(("requires-gl", "lattice is not a GL-quantale")),
        Direction::Lower if !caps.mv_algebra => Some(("requires-mv", "lattice is not an MV-algebra")),
        Direction::Lower if !u.is_constant() => {
            Some(("requires-constant-universe", "lower theorems need a constant universe"))
        }
        _ => None,
    }
}

fn row(id: AxiomId, direction: CheckDirection, method: Method) -> MatrixRow {
    MatrixRow {
        theorem: id.name().into(),
        family: id.family(),
        properties: id.predicted_properties().unwrap_or_default().letters(),
        direction,
        method,
        status: RowStatus::Confirmed,
        cases_checked: 0,
        accepted: 0,
    }
}

fn skipped(id: AxiomId, direction: CheckDirection, method: Method, reason: &str, detail: String) -> MatrixRow {
    MatrixRow {
        status: RowStatus::Skipped {
            reason: reason.into(),
            detail,
        },
        ..row(id, direction, method)
    }
}

fn budget_reason(e: &Error) -> &'static str {
    match e {
        Error::PowersetTooLarge { .. } => "powerset-too-large",
        Error::RelationSpaceTooLarge { .. } => "relation-space-too-large",
        Error::OperatorSpaceTooLarge { .. } => "operator-space-too-large",
        _ => "error",
    }
}

/// Per-theorem tally merged across workers.
#[derive(Clone, Default)]
struct Tally {
    checked: u64,
    accepted: u64,
    first_failure: Option<(u64, String)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.accepted += other.accepted;
        self.first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    fn fail(&mut self, index: u64, reason: impl Into<String>) {
        if self.first_failure.as_ref().map_or(true, |(k, _)| index < *k) {
            self.first_failure = Some((index, reason.into()));
        }
    }
}

fn merge_all(a: Vec<Tally>, b: Vec<Tally>) -> Vec<Tally> {
    a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()
}

fn induced_entries(r: &LValuedRelation, family: Direction, ps: &Arc<Powerset>) -> Arc<[u32]> {
    let op = match family {
        Direction::Upper => Operator::induced_upper(r.clone()),
        Direction::Lower => Operator::induced_lower(r.clone()),
    };
    op.table_entries(ps)
}

fn active(inst: &Instance) -> (Vec<AxiomId>, Vec<MatrixRow>) {
    let mut live = Vec::new();
    let mut rows = Vec::new();
    for &id in &inst.scope {
        match family_skip(&inst.universe, id.family()) {
            None => live.push(id),
            Some((reason, detail)) => {
                for d in [CheckDirection::Soundness, CheckDirection::Completeness] {
                    rows.push(skipped(id, d, Method::Exhaustive, reason, detail.into()));
                }
            }
        }
    }
    (live, rows)
}

/// Soundness over every relation in the instance's relation space.
pub fn verify_soundness(inst: &Instance) -> Result<Vec<MatrixRow>> {
    let u = &inst.universe;
    let ps = enumerate_powerset(u)?;
    let space = RelationSpace::new(u, inst.budget.max_relations)?;
    let (live, mut rows) = active(inst);
    let rows_skipped: Vec<MatrixRow> = rows
        .drain(..)
        .filter(|r| r.direction == CheckDirection::Soundness)
        .collect();
    let required: Vec<PropertySet> = live
        .iter()
        .map(|t| t.predicted_properties().expect("theorem"))
        .collect();

    let tallies = (0..space.len())
        .into_par_iter()
        .fold(
            || vec![Tally::default(); live.len()],
            |mut acc, k| {
                let r = space.get(k);
                let props = r.properties();
                for family in [Direction::Upper, Direction::Lower] {
                    let mut engine = None;
                    for (i, t) in live.iter().enumerate() {
                        if t.family() != family || !required[i].satisfied_by(&props) {
                            continue;
                        }
                        let e = engine.get_or_insert_with(|| {
                            TableEngine::new(ps.clone(), family, induced_entries(&r, family, &ps))
                        });
                        acc[i].checked += 1;
                        if table_holds(e, *t) {
                            acc[i].accepted += 1;
                        } else {
                            acc[i].fail(k as u64, "induced operator fails the axiom");
                        }
                    }
                }
                acc
            },
        )
        .reduce(|| vec![Tally::default(); live.len()], merge_all);

    let mut out = rows_skipped;
    for (t, tally) in live.iter().zip(tallies) {
        let mut r = row(*t, CheckDirection::Soundness, Method::Exhaustive);
        r.cases_checked = tally.checked;
        r.accepted = tally.accepted;
        if let Some((k, reason)) = tally.first_failure {
            let rel = space.get(k as usize);
            let op = match t.family() {
                Direction::Upper => Operator::induced_upper(rel.clone()),
                Direction::Lower => Operator::induced_lower(rel.clone()),
            };
            let axiom_witness = crate::axiom::check_axiom(&op, *t, crate::axiom::Mode::Exhaustive)
                .ok()
                .and_then(|rep| rep.witness);
            r.status = RowStatus::Refuted {
                witness: Box::new(RefutationWitness {
                    reason,
                    relation: Some(RelationSpec::from_relation(&rel)),
                    operator: None,
                    axiom_witness,
                }),
            };
        }
        out.push(r);
    }
    Ok(out)
}

/// Outcome of the reconstruction half of a completeness check.
#[derive(Clone, Copy)]
enum Reconstruction {
    /// Some `H(U_{d})` exceeds `U(d)`.
    Unbounded,
    Built {
        roundtrip: bool,
        props: crate::relation::RelationProperties,
    },
}

fn reconstruct_table(ps: &Arc<Powerset>, family: Direction, entries: &[u32]) -> Reconstruction {
    let u = ps.universe();
    let rel = match family {
        Direction::Upper => {
            let rows = (0..u.len())
                .map(|a| ps.values(entries[ps.point_index(a)] as usize).to_vec())
                .collect();
            match upper_relation_from_rows(u, rows) {
                Ok(r) => r,
                Err(_) => return Reconstruction::Unbounded,
            }
        }
        Direction::Lower => {
            let rows = (0..u.len())
                .map(|a| ps.values(entries[ps.copoint_index(a)] as usize).to_vec())
                .collect();
            lower_relation_from_rows(u, rows)
        }
    };
    let back = induced_entries(&rel, family, ps);
    Reconstruction::Built {
        roundtrip: *back == *entries,
        props: rel.properties(),
    }
}

/// Runs every live theorem of `family` on one table, updating tallies.
fn completeness_case(
    ps: &Arc<Powerset>,
    family: Direction,
    entries: Arc<[u32]>,
    live: &[AxiomId],
    index: u64,
    acc: &mut [Tally],
) {
    if !live.iter().any(|t| t.family() == family) {
        return;
    }
    let engine = TableEngine::new(ps.clone(), family, entries.clone());
    let mut rec = None;
    for (i, t) in live.iter().enumerate() {
        if t.family() != family {
            continue;
        }
        acc[i].checked += 1;
        if !table_holds(&engine, *t) {
            continue;
        }
        acc[i].accepted += 1;
        let r = *rec.get_or_insert_with(|| reconstruct_table(ps, family, &entries));
        let required = t.predicted_properties().expect("theorem");
        match r {
            Reconstruction::Unbounded => acc[i].fail(index, "axiom holds but the table violates H0"),
            Reconstruction::Built { roundtrip: false, .. } => {
                acc[i].fail(index, "axiom holds but the roundtrip table differs")
            }
            Reconstruction::Built { props, .. } if !required.satisfied_by(&props) => {
                acc[i].fail(index, "axiom holds but the reconstructed relation lacks the properties")
            }
            _ => {}
        }
    }
}

fn completeness_rows(
    live: &[AxiomId],
    tallies: Vec<Tally>,
    method: Method,
    witness_table: impl Fn(u64, Direction) -> Vec<u32>,
    ps: &Arc<Powerset>,
) -> Result<Vec<MatrixRow>> {
    let mut out = Vec::new();
    for (t, tally) in live.iter().zip(tallies) {
        let mut r = row(*t, CheckDirection::Completeness, method);
        r.cases_checked = tally.checked;
        r.accepted = tally.accepted;
        if let Some((k, reason)) = tally.first_failure {
            let op = Operator::from_table(ps.clone(), witness_table(k, t.family()), t.family())?;
            r.status = RowStatus::Refuted {
                witness: Box::new(RefutationWitness {
                    reason: format!("{reason} (case {k})"),
                    relation: None,
                    operator: Some(OperatorSpec::table_of(&op)?),
                    axiom_witness: None,
                }),
            };
        }
        out.push(r);
    }
    Ok(out)
}

fn decode_table(k: u64, n: usize) -> Vec<u32> {
    let mut entries = vec![0u32; n];
    let mut rest = k;
    for slot in entries.iter_mut().rev() {
        *slot = (rest % n as u64) as u32;
        rest /= n as u64;
    }
    entries
}

/// Size of the operator space `|P(U)|^|P(U)|`.
pub fn operator_space_size(n: usize) -> SpaceSize {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(n as u128))
}

/// Completeness over every table `P(U) -> P(U)` in mixed-radix order, first
/// entry most significant.
pub fn verify_completeness_exhaustive(inst: &Instance) -> Result<Vec<MatrixRow>> {
    let ps = enumerate_powerset(&inst.universe)?;
    let n = ps.len();
    let size = operator_space_size(n);
    if size > inst.budget.max_operators as u128 {
        return Err(Error::OperatorSpaceTooLarge {
            size,
            cap: inst.budget.max_operators as u128,
        });
    }
    let (live, _) = active(inst);
    let tallies = (0..size as u64)
        .into_par_iter()
        .fold(
            || vec![Tally::default(); live.len()],
            |mut acc, k| {
                let entries: Arc<[u32]> = decode_table(k, n).into();
                for family in [Direction::Upper, Direction::Lower] {
                    completeness_case(&ps, family, entries.clone(), &live, k, &mut acc);
                }
                acc
            },
        )
        .reduce(|| vec![Tally::default(); live.len()], merge_all);
    completeness_rows(&live, tallies, Method::Exhaustive, |k, _| decode_table(k, n), &ps)
}

/// Tables drawn for sample `s`: even samples are uniform random tables used
/// for both families; odd samples perturb one or two entries of the table
/// induced by a uniformly drawn relation.
fn sample_tables(
    ps: &Arc<Powerset>,
    space: &RelationSpace,
    seed: u64,
    s: u64,
) -> (Vec<u32>, Vec<u32>) {
    let n = ps.len();
    let mut rng = trial_rng(seed, s);
    if s % 2 == 0 {
        let t: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n) as u32).collect();
        return (t.clone(), t);
    }
    let r = space.get(rng.gen_range(0..space.len()));
    let mut perturb = |mut t: Vec<u32>| {
        for _ in 0..rng.gen_range(1..=2) {
            let slot = rng.gen_range(0..n);
            t[slot] = rng.gen_range(0..n) as u32;
        }
        t
    };
    let up = perturb(induced_entries(&r, Direction::Upper, ps).to_vec());
    let low = perturb(induced_entries(&r, Direction::Lower, ps).to_vec());
    (up, low)
}

/// Completeness on seeded random tables.
pub fn verify_completeness_sampled(inst: &Instance, seed: u64, trials: u64) -> Result<Vec<MatrixRow>> {
    let ps = enumerate_powerset(&inst.universe)?;
    let space = RelationSpace::new(&inst.universe, inst.budget.max_relations)?;
    let (live, _) = active(inst);
    let tallies = (0..trials)
        .into_par_iter()
        .fold(
            || vec![Tally::default(); live.len()],
            |mut acc, s| {
                let (up, low) = sample_tables(&ps, &space, seed, s);
                completeness_case(&ps, Direction::Upper, up.into(), &live, s, &mut acc);
                completeness_case(&ps, Direction::Lower, low.into(), &live, s, &mut acc);
                acc
            },
        )
        .reduce(|| vec![Tally::default(); live.len()], merge_all);
    completeness_rows(
        &live,
        tallies,
        Method::Sampled,
        |s, family| {
            let (up, low) = sample_tables(&ps, &space, seed, s);
            match family {
                Direction::Upper => up,
                Direction::Lower => low,
            }
        },
        &ps,
    )
}

/// Runs every check the budget allows, optionally on a pool of `jobs` workers.
pub fn run(inst: &Instance, jobs: Option<usize>) -> Result<VerificationMatrix> {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(|| run_inner(inst)),
        None => run_inner(inst),
    }
}

fn run_inner(inst: &Instance) -> Result<VerificationMatrix> {
    let (live, skipped_rows) = active(inst);
    let mut rows = Vec::new();
    match verify_soundness(inst) {
        Ok(r) => rows.extend(r),
        Err(e) if e.is_budget() => {
            for &t in &inst.scope {
                rows.push(skipped(t, CheckDirection::Soundness, Method::Exhaustive, budget_reason(&e), e.to_string()));
            }
        }
        Err(e) => return Err(e),
    }
    match verify_completeness_exhaustive(inst) {
        Ok(r) => {
            rows.extend(r);
            rows.extend(
                skipped_rows
                    .iter()
                    .filter(|r| r.direction == CheckDirection::Completeness)
                    .cloned(),
            );
        }
        Err(e) if e.is_budget() => {
            for &t in &live {
                rows.push(skipped(t, CheckDirection::Completeness, Method::Exhaustive, budget_reason(&e), e.to_string()));
            }
            rows.extend(
                skipped_rows
                    .iter()
                    .filter(|r| r.direction == CheckDirection::Completeness)
                    .cloned(),
            );
        }
        Err(e) => return Err(e),
    }
    let b = &inst.budget;
    if b.sample_trials > 0 && !live.is_empty() {
        rows.extend(verify_completeness_sampled(inst, b.sample_seed, b.sample_trials)?);
    }
    Ok(VerificationMatrix {
        instance: inst.name.clone(),
        sample_seed: b.sample_seed,
        rows,
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DegeneracyCheck {
    pub name: &'static str,
    pub cases: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyReport {
    pub checks: Vec<DegeneracyCheck>,
}

impl DegeneracyReport {
    pub fn mismatches(&self) -> u64 {
        self.checks.iter().map(|c| c.mismatches).sum()
    }

    pub fn cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }
}

/// Textbook formulas on a classical universe, written against the raw
/// lattice tables only.
mod classical {
    use crate::lattice::{Elem, FiniteResiduatedLattice as Lat};

    pub fn inner(l: &Lat, m: &[Elem], q: &[Elem]) -> Elem {
        m.iter().zip(q).fold(l.bot(), |acc, (&a, &b)| l.join(acc, l.tensor(a, b)))
    }

    pub fn subset(l: &Lat, m: &[Elem], q: &[Elem]) -> Elem {
        m.iter().zip(q).fold(l.top(), |acc, (&a, &b)| l.meet(acc, l.implies(a, b)))
    }

    pub fn outer(l: &Lat, m: &[Elem], q: &[Elem]) -> Elem {
        let not_m: Vec<Elem> = m.iter().map(|&a| l.implies(a, l.bot())).collect();
        subset(l, &not_m, q)
    }

    /// `R` is row-major, `R[d * n + o] = R(d, o)`.
    pub fn upper(l: &Lat, r: &[Elem], q: &[Elem]) -> Vec<Elem> {
        let n = q.len();
        (0..n)
            .map(|o| (0..n).fold(l.bot(), |acc, d| l.join(acc, l.tensor(r[d * n + o], q[d]))))
            .collect()
    }

    pub fn lower(l: &Lat, r: &[Elem], q: &[Elem]) -> Vec<Elem> {
        let n = q.len();
        (0..n)
            .map(|o| (0..n).fold(l.top(), |acc, d| l.meet(acc, l.implies(r[d * n + o], q[d]))))
            .collect()
    }

    fn chi(l: &Lat, n: usize, d: usize, inside: bool) -> Vec<Elem> {
        (0..n)
            .map(|x| if (x == d) == inside { l.top() } else { l.bot() })
            .collect()
    }

    pub fn upper_inverse(l: &Lat, r: &[Elem], q: &[Elem]) -> Vec<Elem> {
        let n = q.len();
        (0..n)
            .map(|d| inner(l, &upper(l, r, &chi(l, n, d, true)), q))
            .collect()
    }

    pub fn lower_inverse(l: &Lat, r: &[Elem], q: &[Elem]) -> Vec<Elem> {
        let n = q.len();
        (0..n)
            .map(|d| outer(l, &lower(l, r, &chi(l, n, d, false)), q))
            .collect()
    }
}

/// Compares every product and operator with the classical formulas on a
/// universe with constant membership 1. Outer products and the lower
/// inverse are included only when the lattice is an MV-algebra.
pub fn classical_degeneracy(universe: &Arc<Universe>, max_relations: usize) -> Result<DegeneracyReport> {
    if !universe.is_top_constant() {
        return Err(Error::InvalidInput(
            "classical degeneracy needs a universe with constant membership 1".into(),
        ));
    }
    let lat = universe.lattice().clone();
    let mv = lat.caps().mv_algebra;
    let ps = enumerate_powerset(universe)?;
    let space = RelationSpace::new(universe, max_relations)?;
    let n = ps.len();
    let render = |v: &[Elem]| -> String {
        v.iter().map(|&e| lat.format(e)).collect::<Vec<_>>().join(",")
    };

    let mut checks = Vec::new();
    let mut record = |name: &'static str, results: Vec<Option<String>>| {
        let mut c = DegeneracyCheck {
            name,
            cases: results.len() as u64,
            ..Default::default()
        };
        for r in results.into_iter().flatten() {
            c.mismatches += 1;
            c.first_mismatch.get_or_insert(r);
        }
        checks.push(c);
    };

    let pairs = |f: &(dyn Fn(&LSubset, &LSubset) -> Result<Elem> + Sync),
                 g: fn(&crate::lattice::FiniteResiduatedLattice, &[Elem], &[Elem]) -> Elem|
     -> Vec<Option<String>> {
        (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (m, q) = (ps.get(k / n), ps.get(k % n));
                let got = f(&m, &q).expect("same universe");
                let want = g(&lat, m.values(), q.values());
                (got != want).then(|| {
                    format!(
                        "M=({}) Q=({}): {} vs {}",
                        render(m.values()),
                        render(q.values()),
                        lat.format(got),
                        lat.format(want)
                    )
                })
            })
            .collect()
    };
    record("inner_product", pairs(&crate::product::inner_product, classical::inner));
    record("subsethood", pairs(&crate::product::subsethood, classical::subset));
    if mv {
        record("outer_product", pairs(&crate::product::outer_product, classical::outer));
    }

    type Classic = fn(&crate::lattice::FiniteResiduatedLattice, &[Elem], &[Elem]) -> Vec<Elem>;
    let mut ops: Vec<(&'static str, Classic)> = vec![
        ("upper_approximation", classical::upper),
        ("lower_approximation", classical::lower),
        ("upper_inverse", classical::upper_inverse),
    ];
    if mv {
        ops.push(("lower_inverse", classical::lower_inverse));
    }
    for (name, classic) in ops {
        let results: Vec<Option<String>> = (0..space.len())
            .into_par_iter()
            .flat_map_iter(|k| {
                let r = space.get(k);
                let op = match name {
                    "upper_approximation" => Operator::induced_upper(r.clone()),
                    "lower_approximation" => Operator::induced_lower(r.clone()),
                    "upper_inverse" => upper_inverse(&Operator::induced_upper(r.clone())).expect("upper"),
                    _ => lower_inverse(&Operator::induced_lower(r.clone())).expect("mv"),
                };
                let lat = &lat;
                let ps = &ps;
                (0..n).map(move |i| {
                    let q = ps.values(i);
                    let got = op.apply_values(q);
                    let want = classic(lat, r.matrix(), q);
                    (got != want).then(|| {
                        let fmt = |v: &[Elem]| v.iter().map(|&e| lat.format(e)).collect::<Vec<_>>().join(",");
                        format!("relation #{k}, Q=({}): ({}) vs ({})", fmt(q), fmt(&got), fmt(&want))
                    })
                })
            })
            .collect();
        record(name, results);
    }
    Ok(DegeneracyReport { checks })
}
