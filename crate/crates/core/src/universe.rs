//! L-universes, the L-subsets they bound, and enumeration of P(U).

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result, SpaceSize};
use crate::lattice::{Elem, FiniteResiduatedLattice, LawReport};

/// Default cap on enumerated powerset size.
pub const DEFAULT_MAX_POWERSET: usize = 100_000;

/// Environment variable overriding [`DEFAULT_MAX_POWERSET`].
pub const MAX_POWERSET_ENV: &str = "LVROUGH_MAX_POWERSET";

pub fn default_powerset_cap() -> usize {
    std::env::var(MAX_POWERSET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_POWERSET)
}

/// A finite point set `X` with a membership map `U: X -> L`.
#[derive(Debug, PartialEq, Eq)]
pub struct Universe {
    lattice: Arc<FiniteResiduatedLattice>,
    points: Vec<String>,
    membership: Vec<Elem>,
    constant: bool,
}

impl Universe {
    pub fn new(
        lattice: Arc<FiniteResiduatedLattice>,
        points: Vec<String>,
        membership: Vec<Elem>,
    ) -> Result<Arc<Self>> {
        if points.is_empty() {
            return Err(Error::InvalidInput("universe has no points".into()));
        }
        if points.len() != membership.len() {
            return Err(Error::InvalidInput(
                "membership must give one value per point".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidInput(format!("duplicate point `{p}`")));
            }
        }
        if membership.iter().any(|e| e.index() >= lattice.size()) {
            return Err(Error::InvalidInput(
                "membership value outside the carrier".into(),
            ));
        }
        let constant = membership.windows(2).all(|w| w[0] == w[1]);
        Ok(Arc::new(Universe {
            lattice,
            points,
            membership,
            constant,
        }))
    }

    /// A universe with the same membership value at every point.
    pub fn constant(
        lattice: Arc<FiniteResiduatedLattice>,
        points: Vec<String>,
        value: Elem,
    ) -> Result<Arc<Self>> {
        let membership = vec![value; points.len()];
        Self::new(lattice, points, membership)
    }

    pub fn lattice(&self) -> &Arc<FiniteResiduatedLattice> {
        &self.lattice
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_index(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    #[inline]
    pub fn membership(&self, x: usize) -> Elem {
        self.membership[x]
    }

    pub fn membership_values(&self) -> &[Elem] {
        &self.membership
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    /// True when every membership value is the lattice top.
    pub fn is_top_constant(&self) -> bool {
        self.constant && self.membership[0] == self.lattice.top()
    }

    /// `|P(U)|`, saturating.
    pub fn powerset_size(&self) -> SpaceSize {
        self.membership.iter().fold(1u128, |acc, &u| {
            acc.saturating_mul(self.lattice.down_set(u).len() as u128)
        })
    }

    pub(crate) fn same(a: &Arc<Universe>, b: &Arc<Universe>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub(crate) fn ensure_same(a: &Arc<Universe>, b: &Arc<Universe>) -> Result<()> {
        if Self::same(a, b) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }
}

/// An L-subset `W` with `W(x) <= U(x)` at every point.
#[derive(Debug, Clone)]
pub struct LSubset {
    universe: Arc<Universe>,
    values: Vec<Elem>,
}

impl PartialEq for LSubset {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && Universe::same(&self.universe, &other.universe)
    }
}

impl Eq for LSubset {}

impl LSubset {
    pub fn new(universe: Arc<Universe>, values: Vec<Elem>) -> Result<Self> {
        if values.len() != universe.len() {
            return Err(Error::InvalidInput(format!(
                "subset has {} values for {} points",
                values.len(),
                universe.len()
            )));
        }
        let lat = universe.lattice();
        for (x, &v) in values.iter().enumerate() {
            if v.index() >= lat.size() {
                return Err(Error::InvalidInput("subset value outside the carrier".into()));
            }
            let bound = universe.membership(x);
            if !lat.leq(v, bound) {
                return Err(Error::BoundViolation {
                    location: universe.points()[x].clone(),
                    value: lat.format(v),
                    bound: lat.format(bound),
                });
            }
        }
        Ok(LSubset { universe, values })
    }

    pub(crate) fn from_raw(universe: Arc<Universe>, values: Vec<Elem>) -> Self {
        debug_assert!(values
            .iter()
            .enumerate()
            .all(|(x, &v)| universe.lattice().leq(v, universe.membership(x))));
        LSubset { universe, values }
    }

    pub fn zero(universe: &Arc<Universe>) -> Self {
        let bot = universe.lattice().bot();
        Self::from_raw(universe.clone(), vec![bot; universe.len()])
    }

    /// The universe itself, as the largest member of P(U).
    pub fn full(universe: &Arc<Universe>) -> Self {
        Self::from_raw(universe.clone(), universe.membership_values().to_vec())
    }

    /// `U_{d}`: `U(d)` at `d`, zero elsewhere.
    pub fn point(universe: &Arc<Universe>, d: usize) -> Self {
        Self::from_raw(universe.clone(), point_values(universe, d))
    }

    /// `U_{X-{d}}`: zero at `d`, `U(x)` elsewhere.
    pub fn copoint(universe: &Arc<Universe>, d: usize) -> Self {
        Self::from_raw(universe.clone(), copoint_values(universe, d))
    }

    pub fn point_named(universe: &Arc<Universe>, name: &str) -> Result<Self> {
        Ok(Self::point(universe, universe.point_index(name)?))
    }

    pub fn copoint_named(universe: &Arc<Universe>, name: &str) -> Result<Self> {
        Ok(Self::copoint(universe, universe.point_index(name)?))
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Elem> {
        self.values
    }

    #[inline]
    pub fn get(&self, x: usize) -> Elem {
        self.values[x]
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Elem, Elem) -> Elem) -> Result<Self> {
        Universe::ensure_same(&self.universe, &other.universe)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_raw(self.universe.clone(), values))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        let lat = self.universe.lattice();
        self.zip_with(other, |a, b| lat.join(a, b))
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        let lat = self.universe.lattice();
        self.zip_with(other, |a, b| lat.meet(a, b))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let lat = self.universe.lattice();
        self.zip_with(other, |a, b| lat.tensor(a, b))
    }

    /// `¬W(d) = U(d) * (W(d) -> 0)`.
    pub fn neg(&self) -> Self {
        Self::from_raw(self.universe.clone(), neg_values(&self.universe, &self.values))
    }

    /// Pointwise order.
    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        Universe::ensure_same(&self.universe, &other.universe)?;
        let lat = self.universe.lattice();
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| lat.leq(a, b)))
    }

    /// Checks `Q = join_b (Q(b) * (U(b) -> U_{b}))` pointwise.
    pub fn decompose_join_check(&self) -> bool {
        decompose_join_holds(&self.universe, &self.values)
    }

    /// Checks `Q = meet_h (U meet ((Q(h) -> 0) -> U_{X-{h}}))` pointwise.
    pub fn decompose_meet_check(&self) -> Result<bool> {
        require_mv_constant(&self.universe)?;
        Ok(decompose_meet_holds(&self.universe, &self.values))
    }
}

pub(crate) fn require_mv_constant(universe: &Universe) -> Result<()> {
    if !universe.lattice().caps().mv_algebra {
        return Err(Error::RequiresMV);
    }
    if !universe.is_constant() {
        return Err(Error::RequiresConstantUniverse);
    }
    Ok(())
}

pub(crate) fn point_values(universe: &Universe, d: usize) -> Vec<Elem> {
    let bot = universe.lattice().bot();
    (0..universe.len())
        .map(|x| if x == d { universe.membership(x) } else { bot })
        .collect()
}

pub(crate) fn copoint_values(universe: &Universe, d: usize) -> Vec<Elem> {
    let bot = universe.lattice().bot();
    (0..universe.len())
        .map(|x| if x == d { bot } else { universe.membership(x) })
        .collect()
}

pub(crate) fn neg_values(universe: &Universe, values: &[Elem]) -> Vec<Elem> {
    let lat = universe.lattice();
    values
        .iter()
        .enumerate()
        .map(|(x, &w)| lat.tensor(universe.membership(x), lat.neg(w)))
        .collect()
}

fn decompose_join_holds(universe: &Universe, q: &[Elem]) -> bool {
    let lat = universe.lattice();
    let n = universe.len();
    (0..n).all(|x| {
        let rhs = lat.join_all((0..n).map(|b| {
            let ub_x = if x == b { universe.membership(x) } else { lat.bot() };
            lat.tensor(q[b], lat.implies(universe.membership(b), ub_x))
        }));
        rhs == q[x]
    })
}

fn decompose_meet_holds(universe: &Universe, q: &[Elem]) -> bool {
    let lat = universe.lattice();
    let n = universe.len();
    (0..n).all(|x| {
        let u = universe.membership(x);
        let rhs = lat.meet_all((0..n).map(|h| {
            let co_x = if x == h { lat.bot() } else { u };
            lat.meet(u, lat.implies(lat.neg(q[h]), co_x))
        }));
        rhs == q[x]
    })
}

/// All members of P(U) in canonical mixed-radix order: the first point is
/// the most significant digit, and each point's digits run through the
/// down-set of `U(x)` in ascending carrier-index order.
///
/// On chains the per-point radix is `index(U(x)) + 1`; on other lattices it
/// is the size of the down-set.
pub struct Powerset {
    universe: Arc<Universe>,
    size: usize,
    width: usize,
    values: Vec<Elem>,
    digit_of: Vec<Vec<Option<u32>>>,
    stride: Vec<usize>,
    zero: usize,
    full: usize,
    points: Vec<usize>,
    copoints: Vec<usize>,
    pub(crate) inner: OnceLock<Vec<Elem>>,
    pub(crate) outer: OnceLock<Vec<Elem>>,
}

impl std::fmt::Debug for Powerset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Powerset")
            .field("points", &self.universe.points())
            .field("size", &self.size)
            .finish()
    }
}

pub fn enumerate_powerset(universe: &Arc<Universe>) -> Result<Arc<Powerset>> {
    Powerset::with_cap(universe, default_powerset_cap())
}

impl Powerset {
    pub fn new(universe: &Arc<Universe>) -> Result<Arc<Self>> {
        enumerate_powerset(universe)
    }

    pub fn with_cap(universe: &Arc<Universe>, cap: usize) -> Result<Arc<Self>> {
        let size = universe.powerset_size();
        if size > cap as u128 {
            return Err(Error::PowersetTooLarge {
                size,
                cap: cap as u128,
            });
        }
        let size = size as usize;
        let lat = universe.lattice();
        let width = universe.len();
        let digits: Vec<Vec<Elem>> = universe
            .membership_values()
            .iter()
            .map(|&u| lat.down_set(u))
            .collect();
        let digit_of = digits
            .iter()
            .map(|ds| {
                let mut map = vec![None; lat.size()];
                for (pos, e) in ds.iter().enumerate() {
                    map[e.index()] = Some(pos as u32);
                }
                map
            })
            .collect();
        let mut stride = vec![1usize; width];
        for x in (0..width.saturating_sub(1)).rev() {
            stride[x] = stride[x + 1] * digits[x + 1].len();
        }
        let mut values = Vec::with_capacity(size * width);
        for i in 0..size {
            for x in 0..width {
                values.push(digits[x][(i / stride[x]) % digits[x].len()]);
            }
        }
        let mut ps = Powerset {
            universe: universe.clone(),
            size,
            width,
            values,
            digit_of,
            stride,
            zero: 0,
            full: 0,
            points: Vec::new(),
            copoints: Vec::new(),
            inner: OnceLock::new(),
            outer: OnceLock::new(),
        };
        let idx = |ps: &Powerset, v: &[Elem]| ps.index_of(v).expect("bounded subset");
        ps.zero = idx(&ps, &vec![lat.bot(); width]);
        ps.full = idx(&ps, universe.membership_values());
        ps.points = (0..width).map(|d| idx(&ps, &point_values(universe, d))).collect();
        ps.copoints = (0..width)
            .map(|d| idx(&ps, &copoint_values(universe, d)))
            .collect();
        Ok(Arc::new(ps))
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn values(&self, i: usize) -> &[Elem] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    pub fn get(&self, i: usize) -> LSubset {
        LSubset::from_raw(self.universe.clone(), self.values(i).to_vec())
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = LSubset> + '_ {
        (0..self.size).map(|i| self.get(i))
    }

    /// Canonical index of a value vector, or `None` if it is not in P(U).
    pub fn index_of(&self, values: &[Elem]) -> Option<usize> {
        if values.len() != self.width {
            return None;
        }
        let mut idx = 0;
        for (x, v) in values.iter().enumerate() {
            let d = (*self.digit_of[x].get(v.index())?)? as usize;
            idx += d * self.stride[x];
        }
        Some(idx)
    }

    pub fn index_of_subset(&self, s: &LSubset) -> Result<usize> {
        Universe::ensure_same(&self.universe, s.universe())?;
        Ok(self.index_of(s.values()).expect("subset is bounded"))
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    pub fn full_index(&self) -> usize {
        self.full
    }

    pub fn point_index(&self, d: usize) -> usize {
        self.points[d]
    }

    pub fn copoint_index(&self, d: usize) -> usize {
        self.copoints[d]
    }
}

/// Subset-level identities over an enumerated powerset: both decomposition
/// identities and the MV items about negation of subsets.
pub fn verify_subset_laws(ps: &Powerset) -> LawReport {
    let universe = ps.universe();
    let lat = universe.lattice();
    let n = ps.len();
    let w = ps.width();
    let mut report = LawReport::default();
    let show = |i: usize| {
        let items: Vec<String> = ps
            .values(i)
            .iter()
            .zip(universe.points())
            .map(|(&v, p)| format!("{}/{}", lat.format(v), p))
            .collect();
        items.join(" + ")
    };

    const DJ: &str = "Q = join_b (Q(b) * (U(b) -> U_{b}))";
    const DM: &str = "Q = meet_h (U meet ((Q(h) -> 0) -> U_{X-{h}}))";
    if lat.caps().gl_quantale {
        report.push_scan(
            "decompose.join",
            DJ,
            (0..n).map(|i| {
                if decompose_join_holds(universe, ps.values(i)) {
                    Ok(())
                } else {
                    Err(format!("Q={}", show(i)))
                }
            }),
        );
    } else {
        report.push_skipped("decompose.join", DJ, "lattice is not a GL-quantale");
    }
    match require_mv_constant(universe) {
        Ok(()) => report.push_scan(
            "decompose.meet",
            DM,
            (0..n).map(|i| {
                if decompose_meet_holds(universe, ps.values(i)) {
                    Ok(())
                } else {
                    Err(format!("Q={}", show(i)))
                }
            }),
        ),
        Err(e) => report.push_skipped("decompose.meet", DM, &e.to_string()),
    }

    const MV3A: &str = "W -> V = ¬V -> ¬W pointwise";
    const MV3B: &str = "¬¬W = W";
    const MV4: &str = "¬U_{X-{b}} = U_{b}";
    const MV5: &str = "U(b) -> ¬W(b) = W(b) -> 0";
    if !lat.caps().mv_algebra {
        for (name, st) in [("mv.3a", MV3A), ("mv.3b", MV3B), ("mv.4", MV4), ("mv.5", MV5)] {
            report.push_skipped(name, st, "lattice is not an MV-algebra");
        }
        return report;
    }
    let negs: Vec<Vec<Elem>> = (0..n).map(|i| neg_values(universe, ps.values(i))).collect();
    report.push_scan(
        "mv.3a",
        MV3A,
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| {
            let (wv, vv) = (ps.values(i), ps.values(j));
            let ok = (0..w).all(|x| {
                lat.implies(wv[x], vv[x]) == lat.implies(negs[j][x], negs[i][x])
            });
            if ok {
                Ok(())
            } else {
                Err(format!("W={}, V={}", show(i), show(j)))
            }
        }),
    );
    report.push_scan(
        "mv.3b",
        MV3B,
        (0..n).map(|i| {
            if neg_values(universe, &negs[i]) == ps.values(i) {
                Ok(())
            } else {
                Err(format!("W={}", show(i)))
            }
        }),
    );
    report.push_scan(
        "mv.4",
        MV4,
        (0..w).map(|b| {
            if neg_values(universe, ps.values(ps.copoint_index(b))) == point_values(universe, b) {
                Ok(())
            } else {
                Err(format!("b={}", universe.points()[b]))
            }
        }),
    );
    report.push_scan(
        "mv.5",
        MV5,
        (0..n).flat_map(|i| (0..w).map(move |b| (i, b))).map(|(i, b)| {
            let wb = ps.values(i)[b];
            if lat.implies(universe.membership(b), negs[i][b]) == lat.neg(wb) {
                Ok(())
            } else {
                Err(format!("W={}, b={}", show(i), universe.points()[b]))
            }
        }),
    );
    report
}
