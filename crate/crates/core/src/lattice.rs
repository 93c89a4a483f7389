//! Finite complete residuated lattices with exact operation tables.
//!
//! Elements are carrier indices ([`Elem`]); every operation is a table
//! lookup. Rational labels exist only for input and display. Every
//! constructor runs the full validation pass, so the capability flags on a
//! [`FiniteResiduatedLattice`] are always computed, never trusted from input.
//!
//! Distributivity of the tensor over arbitrary joins is checked through the
//! empty join (`a * 0 = 0`), binary joins, and the join of the whole carrier.
//! On a finite lattice every join is a finite iterate of binary joins, so
//! these cases imply the general law.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{format_label, Label};

/// Default upper bound on carrier size. All law checks are cubic in it.
pub const DEFAULT_MAX_CARRIER: usize = 64;

/// Carrier families are quantified exhaustively up to this carrier size;
/// above it the checks fall back to binary and empty families.
const FAMILY_EXHAUSTIVE_LIMIT: usize = 12;

/// A lattice element, identified by its carrier index.
///
/// The derived `Ord` is index order, used only for canonical enumeration.
/// Use [`FiniteResiduatedLattice::leq`] for the lattice order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u16);

impl Elem {
    pub(crate) fn new(index: usize) -> Self {
        Elem(index as u16)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub residuated: bool,
    pub gl_quantale: bool,
    pub mv_algebra: bool,
}

#[derive(Clone)]
pub struct FiniteResiduatedLattice {
    labels: Vec<Label>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    tensor: Vec<Elem>,
    imp: Vec<Elem>,
    bot: Elem,
    top: Elem,
    caps: Caps,
    chain: bool,
}

impl fmt::Debug for FiniteResiduatedLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels.iter().map(format_label).collect();
        f.debug_struct("FiniteResiduatedLattice")
            .field("labels", &labels)
            .field("caps", &self.caps)
            .finish()
    }
}

impl PartialEq for FiniteResiduatedLattice {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.leq == other.leq
            && self.tensor == other.tensor
            && self.imp == other.imp
    }
}

impl Eq for FiniteResiduatedLattice {}

impl FiniteResiduatedLattice {
    /// Łukasiewicz chain `{0, 1/n, ..., 1}` with `i * j = max(i + j - n, 0)`.
    pub fn lukasiewicz(levels: usize) -> Result<Self> {
        Self::lukasiewicz_with_limit(levels, DEFAULT_MAX_CARRIER)
    }

    pub fn lukasiewicz_with_limit(levels: usize, limit: usize) -> Result<Self> {
        let n = check_levels(levels)?;
        let tensor = square(n + 1, |i, j| (i + j).saturating_sub(n));
        let imp = square(n + 1, |i, j| (n + j - i).min(n));
        Self::from_chain_tables(n, tensor, Some(imp), limit)
    }

    /// Gödel chain `{0, 1/n, ..., 1}` with the minimum as tensor.
    pub fn goedel(levels: usize) -> Result<Self> {
        Self::goedel_with_limit(levels, DEFAULT_MAX_CARRIER)
    }

    pub fn goedel_with_limit(levels: usize, limit: usize) -> Result<Self> {
        let n = check_levels(levels)?;
        let tensor = square(n + 1, |i, j| i.min(j));
        let imp = square(n + 1, |i, j| if i <= j { n } else { j });
        Self::from_chain_tables(n, tensor, Some(imp), limit)
    }

    /// The two-element Boolean algebra.
    pub fn boolean() -> Self {
        let tensor = square(2, |i, j| i.min(j));
        Self::from_chain_tables(1, tensor, None, DEFAULT_MAX_CARRIER)
            .expect("the two-element chain is a residuated lattice")
    }

    fn from_chain_tables(
        n: usize,
        tensor: Vec<Vec<usize>>,
        imp: Option<Vec<Vec<usize>>>,
        limit: usize,
    ) -> Result<Self> {
        let labels = (0..=n).map(|k| Label::new(k as i64, n as i64)).collect();
        let leq = (0..=n).map(|i| (0..=n).map(|j| i <= j).collect()).collect();
        Self::from_tables_with_limit(labels, leq, tensor, imp, limit)
    }

    /// Builds a lattice from explicit tables. When `imp` is `None` the
    /// residuum is derived as `a -> b = join { c : a * c <= b }`.
    pub fn from_tables(
        labels: Vec<Label>,
        leq: Vec<Vec<bool>>,
        tensor: Vec<Vec<usize>>,
        imp: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        Self::from_tables_with_limit(labels, leq, tensor, imp, DEFAULT_MAX_CARRIER)
    }

    pub fn from_tables_with_limit(
        labels: Vec<Label>,
        leq: Vec<Vec<bool>>,
        tensor: Vec<Vec<usize>>,
        imp: Option<Vec<Vec<usize>>>,
        limit: usize,
    ) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::NotALattice {
                reason: "empty carrier".into(),
            });
        }
        if m > limit || m > u16::MAX as usize {
            return Err(Error::CarrierTooLarge { size: m, limit });
        }
        for i in 0..m {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return Err(Error::InvalidInput(format!(
                        "duplicate label {}",
                        format_label(&labels[i])
                    )));
                }
            }
        }
        let leq = flatten_square(m, leq, "leq", |_| true)?;
        let tensor = flatten_square(m, tensor, "tensor", |v| *v < m)?;
        let imp = imp
            .map(|t| flatten_square(m, t, "impl", |v| *v < m))
            .transpose()?;

        let fmt_e = |i: usize| format_label(&labels[i]);
        check_partial_order(m, &leq, &fmt_e)?;
        let meet = bound_table(m, &leq, true, &fmt_e)?;
        let join = bound_table(m, &leq, false, &fmt_e)?;
        let bot = (0..m)
            .find(|&b| (0..m).all(|x| leq[b * m + x]))
            .ok_or_else(|| Error::NotALattice {
                reason: "no least element".into(),
            })?;
        let top = (0..m)
            .find(|&t| (0..m).all(|x| leq[x * m + t]))
            .ok_or_else(|| Error::NotALattice {
                reason: "no greatest element".into(),
            })?;

        let tensor: Vec<Elem> = tensor.into_iter().map(Elem::new).collect();
        let t = |a: usize, b: usize| tensor[a * m + b].index();
        let le = |a: usize, b: usize| leq[a * m + b];
        let mj = |a: usize, b: usize| join[a * m + b].index();
        let triple = |a: usize, b: usize, c: usize| {
            format!("({}, {}, {})", fmt_e(a), fmt_e(b), fmt_e(c))
        };
        let fail = |law: &'static str, witness: String| Error::NotResiduated { law, witness };

        for a in 0..m {
            if t(a, top) != a {
                return Err(fail("unit", format!("({})", fmt_e(a))));
            }
            if t(a, bot) != bot {
                return Err(fail("empty join", format!("({})", fmt_e(a))));
            }
            for b in 0..m {
                if t(a, b) != t(b, a) {
                    return Err(fail("commutativity", format!("({}, {})", fmt_e(a), fmt_e(b))));
                }
                for c in 0..m {
                    if t(t(a, b), c) != t(a, t(b, c)) {
                        return Err(fail("associativity", triple(a, b, c)));
                    }
                    if t(a, mj(b, c)) != mj(t(a, b), t(a, c)) {
                        return Err(fail("join distributivity", triple(a, b, c)));
                    }
                }
            }
            let whole = (0..m).fold(bot, |acc, b| mj(acc, t(a, b)));
            if t(a, top) != whole {
                return Err(fail("carrier join distributivity", format!("({})", fmt_e(a))));
            }
        }

        let imp: Vec<Elem> = match imp {
            Some(table) => table.into_iter().map(Elem::new).collect(),
            None => {
                let mut out = Vec::with_capacity(m * m);
                for a in 0..m {
                    for b in 0..m {
                        let r = (0..m)
                            .filter(|&c| le(t(a, c), b))
                            .fold(bot, |acc, c| mj(acc, c));
                        out.push(Elem::new(r));
                    }
                }
                out
            }
        };
        for a in 0..m {
            for b in 0..m {
                let r = imp[a * m + b].index();
                for c in 0..m {
                    if le(t(a, c), b) != le(c, r) {
                        return Err(fail("adjunction", triple(a, b, c)));
                    }
                }
            }
        }

        let mut lat = FiniteResiduatedLattice {
            labels,
            leq,
            meet,
            join,
            tensor,
            imp,
            bot: Elem::new(bot),
            top: Elem::new(top),
            caps: Caps {
                residuated: true,
                gl_quantale: false,
                mv_algebra: false,
            },
            chain: false,
        };
        let chain = lat.elements().all(|a| lat.elements().all(|b| lat.leq(a, b) || lat.leq(b, a)));
        lat.chain = chain;
        let gl = lat
            .elements()
            .all(|a| lat.elements().all(|b| lat.meet(a, b) == lat.tensor(a, lat.implies(a, b))));
        let mv = gl && lat.elements().all(|g| lat.neg(lat.neg(g)) == g);
        lat.caps.gl_quantale = gl;
        lat.caps.mv_algebra = mv;
        Ok(lat)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + Clone + '_ {
        (0..self.size()).map(Elem::new)
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn is_chain(&self) -> bool {
        self.chain
    }

    pub fn bot(&self) -> Elem {
        self.bot
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn label(&self, e: Elem) -> &Label {
        &self.labels[e.index()]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn format(&self, e: Elem) -> String {
        format_label(self.label(e))
    }

    pub fn find_label(&self, label: &Label) -> Option<Elem> {
        self.labels.iter().position(|l| l == label).map(Elem::new)
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.index() * self.size() + b.index()]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.index() * self.size() + b.index()]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.index() * self.size() + b.index()]
    }

    #[inline]
    pub fn tensor(&self, a: Elem, b: Elem) -> Elem {
        self.tensor[a.index() * self.size() + b.index()]
    }

    #[inline]
    pub fn implies(&self, a: Elem, b: Elem) -> Elem {
        self.imp[a.index() * self.size() + b.index()]
    }

    /// `a -> 0`.
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.implies(a, self.bot)
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    /// Elements below `bound`, in ascending index order.
    pub fn down_set(&self, bound: Elem) -> Vec<Elem> {
        self.elements().filter(|&e| self.leq(e, bound)).collect()
    }
}

fn check_levels(levels: usize) -> Result<usize> {
    if levels == 0 {
        return Err(Error::InvalidInput("chain needs at least one level".into()));
    }
    Ok(levels)
}

fn square(size: usize, f: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    (0..size).map(|i| (0..size).map(|j| f(i, j)).collect()).collect()
}

fn flatten_square<T: Copy>(
    m: usize,
    rows: Vec<Vec<T>>,
    name: &str,
    valid: impl Fn(&T) -> bool,
) -> Result<Vec<T>> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput(format!("table `{name}` must be {m}x{m}")));
    }
    let flat: Vec<T> = rows.into_iter().flatten().collect();
    if !flat.iter().all(valid) {
        return Err(Error::InvalidInput(format!(
            "table `{name}` references an element outside the carrier"
        )));
    }
    Ok(flat)
}

fn check_partial_order(m: usize, leq: &[bool], fmt_e: &impl Fn(usize) -> String) -> Result<()> {
    let le = |a: usize, b: usize| leq[a * m + b];
    for a in 0..m {
        if !le(a, a) {
            return Err(Error::NotALattice {
                reason: format!("order is not reflexive at {}", fmt_e(a)),
            });
        }
        for b in 0..m {
            if a != b && le(a, b) && le(b, a) {
                return Err(Error::NotALattice {
                    reason: format!("order is not antisymmetric at ({}, {})", fmt_e(a), fmt_e(b)),
                });
            }
            for c in 0..m {
                if le(a, b) && le(b, c) && !le(a, c) {
                    return Err(Error::NotALattice {
                        reason: format!(
                            "order is not transitive at ({}, {}, {})",
                            fmt_e(a),
                            fmt_e(b),
                            fmt_e(c)
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Greatest lower bounds (`lower = true`) or least upper bounds of all pairs.
fn bound_table(
    m: usize,
    leq: &[bool],
    lower: bool,
    fmt_e: &impl Fn(usize) -> String,
) -> Result<Vec<Elem>> {
    let le = |a: usize, b: usize| if lower { leq[a * m + b] } else { leq[b * m + a] };
    let mut out = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let bounds: Vec<usize> = (0..m).filter(|&c| le(c, a) && le(c, b)).collect();
            let best = bounds
                .iter()
                .copied()
                .find(|&c| bounds.iter().all(|&d| le(d, c)))
                .ok_or_else(|| Error::NotALattice {
                    reason: format!(
                        "({}, {}) has no {}",
                        fmt_e(a),
                        fmt_e(b),
                        if lower { "meet" } else { "join" }
                    ),
                })?;
            out.push(Elem::new(best));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LawStatus {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub name: String,
    pub statement: String,
    #[serde(flatten)]
    pub status: LawStatus,
    pub checked: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub laws: Vec<LawResult>,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        self.laws
            .iter()
            .all(|l| !matches!(l.status, LawStatus::Fail { .. }))
    }

    pub fn get(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.name == name)
    }

    pub(crate) fn push_skipped(&mut self, name: &str, statement: &str, reason: &str) {
        self.laws.push(LawResult {
            name: name.into(),
            statement: statement.into(),
            status: LawStatus::Skipped {
                reason: reason.into(),
            },
            checked: 0,
        });
    }

    pub(crate) fn push_scan<I>(&mut self, name: &str, statement: &str, cases: I)
    where
        I: IntoIterator<Item = std::result::Result<(), String>>,
    {
        let mut checked = 0u64;
        let mut status = LawStatus::Pass;
        for case in cases {
            checked += 1;
            if let Err(witness) = case {
                status = LawStatus::Fail { witness };
                break;
            }
        }
        self.laws.push(LawResult {
            name: name.into(),
            statement: statement.into(),
            status,
            checked,
        });
    }
}

/// Carrier families used by the family-quantified laws, as element lists.
fn families(lat: &FiniteResiduatedLattice, nonempty: bool) -> Vec<Vec<Elem>> {
    let m = lat.size();
    let mut out = Vec::new();
    if m <= FAMILY_EXHAUSTIVE_LIMIT {
        let start = if nonempty { 1u32 } else { 0 };
        for mask in start..(1u32 << m) {
            out.push(
                lat.elements()
                    .filter(|e| mask & (1 << e.index()) != 0)
                    .collect(),
            );
        }
    } else {
        if !nonempty {
            out.push(Vec::new());
        }
        for a in lat.elements() {
            for b in lat.elements() {
                out.push(vec![a, b]);
            }
        }
        out.push(lat.elements().collect());
    }
    out
}

/// Exhaustively checks the residuation, GL and MV element laws.
///
/// GL items are skipped unless the lattice is a GL-quantale and MV items
/// unless it is an MV-algebra.
pub fn verify_laws(lat: &FiniteResiduatedLattice) -> LawReport {
    let mut report = LawReport::default();
    let f = |e: Elem| lat.format(e);
    let all: Vec<Elem> = lat.elements().collect();
    let els = all.as_slice();
    let triples = move || {
        els.iter().flat_map(move |&a| {
            els.iter()
                .flat_map(move |&b| els.iter().map(move |&c| (a, b, c)))
        })
    };
    let pairs = move || els.iter().flat_map(move |&a| els.iter().map(move |&b| (a, b)));
    let fam_str = |fam: &[Elem]| {
        let items: Vec<String> = fam.iter().map(|&e| f(e)).collect();
        format!("{{{}}}", items.join(", "))
    };

    report.push_scan(
        "adjunction",
        "a * c <= b iff c <= a -> b",
        triples().map(|(a, b, c)| {
            if lat.leq(lat.tensor(a, c), b) == lat.leq(c, lat.implies(a, b)) {
                Ok(())
            } else {
                Err(format!("a={}, b={}, c={}", f(a), f(b), f(c)))
            }
        }),
    );
    report.push_scan(
        "modus-ponens",
        "(a -> b) * a <= b",
        pairs().map(|(a, b)| {
            if lat.leq(lat.tensor(lat.implies(a, b), a), b) {
                Ok(())
            } else {
                Err(format!("a={}, b={}", f(a), f(b)))
            }
        }),
    );
    report.push_scan(
        "currying",
        "a -> (b -> c) = (a * b) -> c",
        triples().map(|(a, b, c)| {
            if lat.implies(a, lat.implies(b, c)) == lat.implies(lat.tensor(a, b), c) {
                Ok(())
            } else {
                Err(format!("a={}, b={}, c={}", f(a), f(b), f(c)))
            }
        }),
    );
    report.push_scan(
        "order-by-implication",
        "a <= b iff a -> b = 1",
        pairs().map(|(a, b)| {
            if lat.leq(a, b) == (lat.implies(a, b) == lat.top()) {
                Ok(())
            } else {
                Err(format!("a={}, b={}", f(a), f(b)))
            }
        }),
    );
    let fams = families(lat, false);
    report.push_scan(
        "implies-meet",
        "b -> meet_i a_i = meet_i (b -> a_i)",
        fams.iter().flat_map(|fam| {
            els.iter().map(move |&b| {
                let lhs = lat.implies(b, lat.meet_all(fam.iter().copied()));
                let rhs = lat.meet_all(fam.iter().map(|&a| lat.implies(b, a)));
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(format!("b={}, family={}", f(b), fam_str(fam)))
                }
            })
        }),
    );
    report.push_scan(
        "join-implies",
        "(join_i a_i) -> b = meet_i (a_i -> b)",
        fams.iter().flat_map(|fam| {
            els.iter().map(move |&b| {
                let lhs = lat.implies(lat.join_all(fam.iter().copied()), b);
                let rhs = lat.meet_all(fam.iter().map(|&a| lat.implies(a, b)));
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(format!("b={}, family={}", f(b), fam_str(fam)))
                }
            })
        }),
    );

    const GL1: &str = "b <= c implies b = c * (c -> b)";
    const GL2: &str = "a, b <= c implies a * (c -> b) = b * (c -> a)";
    const GL3: &str = "b <= c implies c * (b -> a) = c meet ((c -> b) -> a)";
    if lat.caps().gl_quantale {
        report.push_scan(
            "gl.1",
            GL1,
            pairs().filter(|&(b, c)| lat.leq(b, c)).map(|(b, c)| {
                if b == lat.tensor(c, lat.implies(c, b)) {
                    Ok(())
                } else {
                    Err(format!("b={}, c={}", f(b), f(c)))
                }
            }),
        );
        report.push_scan(
            "gl.2",
            GL2,
            triples()
                .filter(|&(a, b, c)| lat.leq(a, c) && lat.leq(b, c))
                .map(|(a, b, c)| {
                    if lat.tensor(a, lat.implies(c, b)) == lat.tensor(b, lat.implies(c, a)) {
                        Ok(())
                    } else {
                        Err(format!("a={}, b={}, c={}", f(a), f(b), f(c)))
                    }
                }),
        );
        report.push_scan(
            "gl.3",
            GL3,
            triples().filter(|&(_, b, c)| lat.leq(b, c)).map(|(a, b, c)| {
                let lhs = lat.tensor(c, lat.implies(b, a));
                let rhs = lat.meet(c, lat.implies(lat.implies(c, b), a));
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(format!("a={}, b={}, c={}", f(a), f(b), f(c)))
                }
            }),
        );
    } else {
        for (name, st) in [("gl.1", GL1), ("gl.2", GL2), ("gl.3", GL3)] {
            report.push_skipped(name, st, "lattice is not a GL-quantale");
        }
    }

    const MV1: &str = "b -> c = (c -> 0) -> (b -> 0)";
    const MV2: &str = "b * meet_i a_i = meet_i (b * a_i) for nonempty families";
    if lat.caps().mv_algebra {
        report.push_scan(
            "mv.1",
            MV1,
            pairs().map(|(b, c)| {
                if lat.implies(b, c) == lat.implies(lat.neg(c), lat.neg(b)) {
                    Ok(())
                } else {
                    Err(format!("b={}, c={}", f(b), f(c)))
                }
            }),
        );
        let nonempty = families(lat, true);
        report.push_scan(
            "mv.2",
            MV2,
            nonempty.iter().flat_map(|fam| {
                els.iter().map(move |&b| {
                    let lhs = lat.tensor(b, lat.meet_all(fam.iter().copied()));
                    let rhs = lat.meet_all(fam.iter().map(|&a| lat.tensor(b, a)));
                    if lhs == rhs {
                        Ok(())
                    } else {
                        Err(format!("b={}, family={}", f(b), fam_str(fam)))
                    }
                })
            }),
        );
    } else {
        report.push_skipped("mv.1", MV1, "lattice is not an MV-algebra");
        report.push_skipped("mv.2", MV2, "lattice is not an MV-algebra");
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(lat: &FiniteResiduatedLattice, num: i64, den: i64) -> Elem {
        lat.find_label(&Label::new(num, den)).unwrap()
    }

    #[test]
    fn lukasiewicz_arithmetic() {
        let l = FiniteResiduatedLattice::lukasiewicz(10).unwrap();
        assert_eq!(l.tensor(el(&l, 5, 10), el(&l, 8, 10)), el(&l, 3, 10));
        assert_eq!(l.implies(el(&l, 8, 10), el(&l, 5, 10)), el(&l, 7, 10));
        let one = FiniteResiduatedLattice::lukasiewicz(1).unwrap();
        assert_eq!(one.tensor(one.top(), one.top()), one.top());
        let caps = l.caps();
        assert!(caps.residuated && caps.gl_quantale && caps.mv_algebra);
        assert!(l.is_chain());
    }

    #[test]
    fn goedel_arithmetic() {
        let g = FiniteResiduatedLattice::goedel(10).unwrap();
        assert_eq!(g.implies(el(&g, 7, 10), el(&g, 5, 10)), el(&g, 5, 10));
        assert_eq!(g.implies(el(&g, 3, 10), el(&g, 3, 10)), g.top());
        assert!(g.caps().gl_quantale);
        assert!(!g.caps().mv_algebra);
        // (1/2 -> 0) -> 0 = 0 -> 0 = 1, not 1/2.
        let g2 = FiniteResiduatedLattice::goedel(2).unwrap();
        assert!(!g2.caps().mv_algebra);
        let half = el(&g2, 1, 2);
        assert_eq!(g2.neg(g2.neg(half)), g2.top());
    }

    #[test]
    fn boolean_basics() {
        let b = FiniteResiduatedLattice::boolean();
        assert_eq!(b.implies(b.top(), b.bot()), b.bot());
        assert_eq!(b.implies(b.bot(), b.bot()), b.top());
        assert_eq!(b.tensor(b.top(), b.top()), b.top());
        let caps = b.caps();
        assert!(caps.residuated && caps.gl_quantale && caps.mv_algebra);
    }

    #[test]
    fn derived_residuum_matches_closed_form() {
        // Three-element Łukasiewicz and Gödel tables without an implication table.
        let labels = vec![Label::new(0, 1), Label::new(1, 2), Label::new(1, 1)];
        let leq: Vec<Vec<bool>> = (0..3).map(|i| (0..3).map(|j| i <= j).collect()).collect();
        let luk = FiniteResiduatedLattice::from_tables(
            labels.clone(),
            leq.clone(),
            square(3, |i, j| (i + j).saturating_sub(2)),
            None,
        )
        .unwrap();
        assert_eq!(luk, FiniteResiduatedLattice::lukasiewicz(2).unwrap());
        assert!(luk.caps().gl_quantale && luk.caps().mv_algebra);

        let god =
            FiniteResiduatedLattice::from_tables(labels, leq, square(3, |i, j| i.min(j)), None)
                .unwrap();
        assert_eq!(god, FiniteResiduatedLattice::goedel(2).unwrap());
        assert!(god.caps().gl_quantale && !god.caps().mv_algebra);
    }

    #[test]
    fn rejects_non_associative_tensor() {
        let labels = vec![Label::new(0, 1), Label::new(1, 2), Label::new(1, 1)];
        let leq: Vec<Vec<bool>> = (0..3).map(|i| (0..3).map(|j| i <= j).collect()).collect();
        // Commutative with unit 1 and 0 absorbing, but 1/2 * 1/2 = 1 breaks
        // monotonicity and associativity.
        let tensor = vec![vec![0, 0, 0], vec![0, 2, 1], vec![0, 1, 2]];
        let err = FiniteResiduatedLattice::from_tables(labels, leq, tensor, None).unwrap_err();
        assert!(matches!(err, Error::NotResiduated { .. }), "{err:?}");
    }

    #[test]
    fn rejects_non_lattice_order() {
        // Two incomparable atoms with no top.
        let labels = vec![Label::new(0, 1), Label::new(1, 3), Label::new(2, 3)];
        let leq = vec![
            vec![true, true, true],
            vec![false, true, false],
            vec![false, false, true],
        ];
        let tensor = square(3, |_, _| 0);
        let err = FiniteResiduatedLattice::from_tables(labels, leq, tensor, None).unwrap_err();
        assert!(matches!(err, Error::NotALattice { .. }), "{err:?}");
    }

    #[test]
    fn rejects_wrong_implication_table() {
        let labels = vec![Label::new(0, 1), Label::new(1, 1)];
        let leq = vec![vec![true, true], vec![false, true]];
        let tensor = square(2, |i, j| i.min(j));
        let imp = vec![vec![1, 1], vec![1, 1]];
        let err = FiniteResiduatedLattice::from_tables(labels, leq, tensor, Some(imp)).unwrap_err();
        assert!(matches!(err, Error::NotResiduated { law: "adjunction", .. }));
    }

    #[test]
    fn carrier_limit_is_enforced() {
        let err = FiniteResiduatedLattice::lukasiewicz(64).unwrap_err();
        assert!(matches!(err, Error::CarrierTooLarge { size: 65, limit: 64 }));
        assert!(FiniteResiduatedLattice::lukasiewicz_with_limit(64, 65).is_ok());
        assert!(FiniteResiduatedLattice::goedel(0).is_err());
    }

    #[test]
    fn diamond_boolean_algebra_from_tables() {
        // 0 < a, b < 1 with a, b incomparable; tensor = meet (a Heyting algebra).
        let labels = vec![Label::new(0, 1), Label::new(1, 3), Label::new(2, 3), Label::new(1, 1)];
        let leq = vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ];
        let meet = |i: usize, j: usize| match (i, j) {
            (x, y) if x == y => x,
            (3, y) => y,
            (x, 3) => x,
            _ => 0,
        };
        let lat =
            FiniteResiduatedLattice::from_tables(labels, leq, square(4, meet), None).unwrap();
        assert!(!lat.is_chain());
        // This is the four-element Boolean algebra, so it is also MV.
        assert!(lat.caps().gl_quantale);
        assert!(lat.caps().mv_algebra);
        assert!(verify_laws(&lat).all_pass());
    }

    #[test]
    fn law_suite_on_standard_chains() {
        let luk = verify_laws(&FiniteResiduatedLattice::lukasiewicz(10).unwrap());
        assert!(luk.all_pass());
        assert!(luk.laws.iter().all(|l| l.status == LawStatus::Pass));

        let god = verify_laws(&FiniteResiduatedLattice::goedel(10).unwrap());
        assert!(god.all_pass());
        assert_eq!(god.get("gl.2").unwrap().status, LawStatus::Pass);
        assert!(matches!(god.get("mv.1").unwrap().status, LawStatus::Skipped { .. }));

        let boo = verify_laws(&FiniteResiduatedLattice::boolean());
        assert!(boo.laws.iter().all(|l| l.status == LawStatus::Pass));
    }
}
