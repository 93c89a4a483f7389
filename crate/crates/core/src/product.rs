//! Inner product, subsethood degree, outer product, and the inverse mappings.

use crate::approx::{Direction, Operator};
use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::universe::{neg_values, LSubset, Powerset, Universe};

/// Powersets up to this size cache full product matrices.
const MATRIX_LIMIT: usize = 2048;

/// Advisory attached to outer products and lower inverses over a
/// non-constant universe.
pub const NONCONSTANT_ADVISORY: &str = "nonconstant-universe";

pub fn nonconstant_advisory(universe: &Universe) -> Option<&'static str> {
    (!universe.is_constant()).then_some(NONCONSTANT_ADVISORY)
}

/// `I(M, Q) = join_d M(d) * (U(d) -> Q(d))`.
pub fn inner_product(m: &LSubset, q: &LSubset) -> Result<Elem> {
    Universe::ensure_same(m.universe(), q.universe())?;
    Ok(inner_values(m.universe(), m.values(), q.values()))
}

/// `S(M, Q) = meet_b U(b) * (M(b) -> Q(b))`.
pub fn subsethood(m: &LSubset, q: &LSubset) -> Result<Elem> {
    Universe::ensure_same(m.universe(), q.universe())?;
    Ok(subsethood_values(m.universe(), m.values(), q.values()))
}

/// `O(M, Q) = S(¬M, Q)`.
pub fn outer_product(m: &LSubset, q: &LSubset) -> Result<Elem> {
    Universe::ensure_same(m.universe(), q.universe())?;
    Ok(outer_values(m.universe(), m.values(), q.values()))
}

pub(crate) fn inner_values(u: &Universe, m: &[Elem], q: &[Elem]) -> Elem {
    let lat = u.lattice();
    lat.join_all(
        (0..u.len()).map(|d| lat.tensor(m[d], lat.implies(u.membership(d), q[d]))),
    )
}

pub(crate) fn subsethood_values(u: &Universe, m: &[Elem], q: &[Elem]) -> Elem {
    let lat = u.lattice();
    lat.meet_all((0..u.len()).map(|b| lat.tensor(u.membership(b), lat.implies(m[b], q[b]))))
}

pub(crate) fn outer_values(u: &Universe, m: &[Elem], q: &[Elem]) -> Elem {
    subsethood_values(u, &neg_values(u, m), q)
}

/// `H^-1(Q)(d) = I(U(d) meet H(U_{d}), Q)`, evaluated lazily.
pub fn upper_inverse(h: &Operator) -> Result<Operator> {
    if h.direction() != Direction::Upper {
        return Err(Error::DirectionMismatch {
            axiom: "upper inverse".into(),
            expected: "upper",
            actual: h.direction().name(),
        });
    }
    Ok(Operator::inverse_of(h.clone()))
}

/// `L~(Q)(b) = O(L(U_{X-{b}}), Q)`, evaluated lazily.
pub fn lower_inverse(l: &Operator) -> Result<Operator> {
    if l.direction() != Direction::Lower {
        return Err(Error::DirectionMismatch {
            axiom: "lower inverse".into(),
            expected: "lower",
            actual: l.direction().name(),
        });
    }
    if !l.universe().lattice().caps().mv_algebra {
        return Err(Error::RequiresMV);
    }
    Ok(Operator::inverse_of(l.clone()))
}

impl Powerset {
    fn product_matrix(&self, f: fn(&Universe, &[Elem], &[Elem]) -> Elem) -> Vec<Elem> {
        let n = self.len();
        let u = &**self.universe();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(f(u, self.values(i), self.values(j)));
            }
        }
        out
    }

    /// `I` between canonical indices, from the cached matrix when small.
    pub fn inner(&self, i: usize, j: usize) -> Elem {
        if self.len() <= MATRIX_LIMIT {
            let m = self.inner.get_or_init(|| self.product_matrix(inner_values));
            m[i * self.len() + j]
        } else {
            inner_values(self.universe(), self.values(i), self.values(j))
        }
    }

    /// `O` between canonical indices, from the cached matrix when small.
    pub fn outer(&self, i: usize, j: usize) -> Elem {
        if self.len() <= MATRIX_LIMIT {
            let m = self.outer.get_or_init(|| self.product_matrix(outer_values));
            m[i * self.len() + j]
        } else {
            outer_values(self.universe(), self.values(i), self.values(j))
        }
    }
}
