//! Monomial indexing, sparse polynomials and coefficient vectors.
//!
//! Monomials of degree at most `d` in `n` variables are indexed in graded
//! lexicographic order: by total degree first, then lexicographically
//! descending in the exponent vector, so for `n = 2, d = 2` the order is
//! `1, x1, x2, x1^2, x1 x2, x2^2`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Ring;
use crate::budget;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

/// Number of monomials of exact degree `deg` in `vars` variables.
fn exact_count(vars: usize, deg: u32) -> u128 {
    if vars == 0 {
        return u128::from(deg == 0);
    }
    binomial(deg as u128 + vars as u128 - 1, vars as u128 - 1)
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    n: usize,
    d: u32,
}

impl MonomialOrder {
    pub fn new(n: usize, d: u32) -> Self {
        MonomialOrder { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `N = C(n + d, n)`, saturating.
    pub fn size(&self) -> u128 {
        binomial(self.n as u128 + self.d as u128, self.n as u128)
    }

    /// `N` as a `usize`; panics if it does not fit.
    pub fn len(&self) -> usize {
        usize::try_from(self.size()).expect("monomial count fits in usize")
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, e: &[u32]) -> Result<usize> {
        if e.len() != self.n {
            return Err(Error::Schema(format!("exponent vector of length {} for {} variables", e.len(), self.n)));
        }
        let k: u32 = e.iter().sum();
        if k > self.d {
            return Err(Error::DegreeOverflow { found: k, bound: self.d });
        }
        let mut idx = if k == 0 { 0 } else { binomial(self.n as u128 + k as u128 - 1, self.n as u128) };
        let mut rem = k;
        for (i, &ei) in e.iter().enumerate() {
            for v in (ei + 1)..=rem {
                idx += exact_count(self.n - i - 1, rem - v);
            }
            rem -= ei;
        }
        Ok(idx as usize)
    }

    /// Inverse of [`MonomialOrder::index`].
    pub fn exponents(&self, index: usize) -> Exponents {
        assert!((index as u128) < self.size(), "index {index} out of range");
        let mut idx = index as u128;
        let mut k = 0;
        loop {
            let c = exact_count(self.n, k);
            if idx < c {
                break;
            }
            idx -= c;
            k += 1;
        }
        let mut e = vec![0u32; self.n];
        let mut rem = k;
        for i in 0..self.n {
            if i + 1 == self.n {
                e[i] = rem;
                break;
            }
            let mut v = rem;
            loop {
                let c = exact_count(self.n - i - 1, rem - v);
                if idx < c {
                    break;
                }
                idx -= c;
                v -= 1;
            }
            e[i] = v;
            rem -= v;
        }
        e
    }

    /// All exponent vectors in index order.
    pub fn monomials(&self) -> impl Iterator<Item = Exponents> + '_ {
        (0..self.len()).map(move |i| self.exponents(i))
    }

    pub(crate) fn ensure_same(&self, other: &MonomialOrder) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::OrderMismatch { expected_n: self.n, expected_d: self.d, n: other.n, d: other.d })
        }
    }
}

/// Value of the monomial `x^e` at `point`.
pub fn monomial_eval<R: Ring>(ring: &R, e: &[u32], point: &[R::Elem]) -> R::Elem {
    let mut acc = ring.one();
    for (x, &k) in point.iter().zip(e) {
        if k > 0 {
            acc = ring.mul(&acc, &ring.pow(x, k as u64));
        }
    }
    acc
}

/// Sparse polynomial in `n` variables with no zero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    n: usize,
    terms: BTreeMap<Exponents, E>,
}

impl<E: Clone> Poly<E> {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, n: usize, c: E) -> Self {
        let mut p = Poly::zero(n);
        if !ring.is_zero(&c) {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn variable<R: Ring<Elem = E>>(ring: &R, n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        let mut p = Poly::zero(n);
        p.terms.insert(e, ring.one());
        p
    }

    pub fn from_terms<R: Ring<Elem = E>>(ring: &R, n: usize, terms: impl IntoIterator<Item = (Exponents, E)>) -> Self {
        let mut p = Poly::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n);
            p.add_term(ring, e, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &E)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Option<&E> {
        self.terms.get(e)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, e: Exponents, c: E) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !ring.is_zero(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), &c);
                if ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(ring, e.clone(), c.clone());
        }
        out
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        Poly::from_terms(ring, self.n, self.terms.iter().map(|(e, v)| (e.clone(), ring.mul(v, c))))
    }

    /// Product, refusing results with more than `term_limit` terms.
    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self, term_limit: usize) -> Result<Self> {
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(ring, e, ring.mul(ca, cb));
            }
            budget::check("polynomial terms", out.len() as u128, term_limit as u128)?;
        }
        Ok(out)
    }

    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, point: &[E]) -> E {
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            acc = ring.add(&acc, &ring.mul(c, &monomial_eval(ring, e, point)));
        }
        acc
    }

    /// Map every coefficient through `f`, dropping those that become zero.
    pub fn map_coeffs<R: Ring>(&self, ring: &R, f: impl Fn(&E) -> R::Elem) -> Poly<R::Elem> {
        Poly::from_terms(ring, self.n, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

/// Symbolic expansion of a circuit into a sparse polynomial.
pub fn expand<R: Ring>(circuit: &Circuit, ring: &R, term_limit: usize) -> Result<Poly<R::Elem>> {
    let n = circuit.n();
    let mut values: Vec<Poly<R::Elem>> = Vec::with_capacity(circuit.size());
    for gate in circuit.gates() {
        let v = match gate {
            Gate::Var(i) => Poly::variable(ring, n, *i),
            Gate::Const(c) => Poly::constant(ring, n, ring.from_constant(c)?),
            Gate::Add(a, b) => values[*a].add(ring, &values[*b]),
            Gate::Mul(a, b) => values[*a].mul(ring, &values[*b], term_limit)?,
        };
        budget::check("polynomial terms", v.len() as u128, term_limit as u128)?;
        values.push(v);
    }
    Ok(values.swap_remove(circuit.output()))
}

/// Coefficient vector of the polynomial a circuit computes. Fails (rather than
/// truncating) when the true degree exceeds the order's bound.
pub fn circuit_to_coeffs<R: Ring>(
    circuit: &Circuit,
    order: MonomialOrder,
    ring: &R,
    term_limit: usize,
) -> Result<CoeffVector<R::Elem>> {
    if circuit.n() != order.n() {
        return Err(Error::Schema(format!("circuit has {} variables, order has {}", circuit.n(), order.n())));
    }
    let poly = expand(circuit, ring, term_limit)?;
    CoeffVector::from_poly(&poly, order)
}

/// Exact coefficient vector indexed by a [`MonomialOrder`]; zero entries are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffVector<E> {
    order: MonomialOrder,
    entries: BTreeMap<usize, E>,
}

impl<E: Clone> CoeffVector<E> {
    pub fn zero(order: MonomialOrder) -> Self {
        CoeffVector { order, entries: BTreeMap::new() }
    }

    pub fn from_entries<R: Ring<Elem = E>>(
        ring: &R,
        order: MonomialOrder,
        entries: impl IntoIterator<Item = (usize, E)>,
    ) -> Result<Self> {
        let n = order.len();
        let mut out = CoeffVector::zero(order);
        for (i, c) in entries {
            if i >= n {
                return Err(Error::Schema(format!("index {i} outside [0, {n})")));
            }
            if !ring.is_zero(&c) {
                out.entries.insert(i, c);
            }
        }
        Ok(out)
    }

    pub fn from_dense<R: Ring<Elem = E>>(ring: &R, order: MonomialOrder, dense: &[E]) -> Self {
        assert_eq!(dense.len(), order.len());
        CoeffVector::from_entries(ring, order, dense.iter().cloned().enumerate()).expect("indices in range")
    }

    pub fn from_poly(poly: &Poly<E>, order: MonomialOrder) -> Result<Self> {
        if let Some(deg) = poly.degree() {
            if deg > order.d() {
                return Err(Error::DegreeOverflow { found: deg, bound: order.d() });
            }
        }
        let mut entries = BTreeMap::new();
        for (e, c) in poly.terms() {
            entries.insert(order.index(e)?, c.clone());
        }
        Ok(CoeffVector { order, entries })
    }

    pub fn to_poly<R: Ring<Elem = E>>(&self, ring: &R) -> Poly<E> {
        Poly::from_terms(ring, self.order.n(), self.entries.iter().map(|(&i, c)| (self.order.exponents(i), c.clone())))
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &E)> {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    pub fn get(&self, index: usize) -> Option<&E> {
        self.entries.get(&index)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.entries.keys().map(|&i| self.order.exponents(i).iter().sum()).max()
    }

    pub fn dense<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<E> {
        let mut out = vec![ring.zero(); self.order.len()];
        for (&i, c) in &self.entries {
            out[i] = c.clone();
        }
        out
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        self.order.ensure_same(&other.order)?;
        let mut out = self.clone();
        for (&i, c) in &other.entries {
            let s = match out.entries.get(&i) {
                Some(v) => ring.add(v, c),
                None => c.clone(),
            };
            if ring.is_zero(&s) {
                out.entries.remove(&i);
            } else {
                out.entries.insert(i, s);
            }
        }
        Ok(out)
    }

    /// `sum_m v_m m(a)`.
    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, point: &[E]) -> Result<E> {
        if point.len() != self.order.n() {
            return Err(Error::Schema(format!("point of length {} for {} variables", point.len(), self.order.n())));
        }
        let mut acc = ring.zero();
        for (&i, c) in &self.entries {
            let m = monomial_eval(ring, &self.order.exponents(i), point);
            acc = ring.add(&acc, &ring.mul(c, &m));
        }
        Ok(acc)
    }

    /// Inner product with a dense vector indexed by the same order.
    pub fn dot<R: Ring<Elem = E>>(&self, ring: &R, dense: &[E]) -> E {
        let mut acc = ring.zero();
        for (&i, c) in &self.entries {
            acc = ring.add(&acc, &ring.mul(c, &dense[i]));
        }
        acc
    }

    /// Re-index under a different order holding every present monomial.
    pub fn reindex(&self, order: MonomialOrder) -> Result<Self> {
        if order.n() != self.order.n() {
            return Err(Error::OrderMismatch {
                expected_n: order.n(),
                expected_d: order.d(),
                n: self.order.n(),
                d: self.order.d(),
            });
        }
        let mut entries = BTreeMap::new();
        for (&i, c) in &self.entries {
            entries.insert(order.index(&self.order.exponents(i))?, c.clone());
        }
        Ok(CoeffVector { order, entries })
    }

    /// Map coefficients into another ring.
    pub fn map<R: Ring>(&self, ring: &R, f: impl Fn(&E) -> R::Elem) -> CoeffVector<R::Elem> {
        CoeffVector::from_entries(ring, self.order, self.entries.iter().map(|(&i, c)| (i, f(c))))
            .expect("indices in range")
    }
}

impl CoeffVector<num_bigint::BigInt> {
    /// Whether every entry lies in `{-1, 0, 1}`.
    pub fn is_delta(&self) -> bool {
        self.first_non_delta().is_none()
    }

    pub fn first_non_delta(&self) -> Option<usize> {
        use num_traits::Signed;
        self.entries.iter().find(|(_, c)| c.abs() > num_bigint::BigInt::from(1)).map(|(&i, _)| i)
    }
}
