//! Polynomial classes and hitting sets for them.
//!
//! A class is enumerated exhaustively, so a hitting set can be found greedily
//! and then checked against every member. Grids are listed in lexicographic
//! order, which fixes the greedy tie-break.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{Carrier, Constant, FieldElem, FieldSpec, Ring};
use crate::budget::{self, Budget};
use crate::circuit::{walk_expansions, EnumerationParams};
use crate::error::{Error, Result};
use crate::poly::{monomial_eval, CoeffVector, MonomialOrder, Poly};

/// Parameters of an enumerated class: `n`-variate polynomials of degree at
/// most `d` computed by circuits with at most `s` gates over `constants`.
/// With `m > 0` the class is the `s`-definable one (sums over `m` Boolean
/// variables), built by the `vnp` module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassParams {
    pub n: usize,
    pub d: u32,
    pub s: usize,
    pub constants: Vec<Constant>,
    /// Keep only members with coefficients in {-1, 0, 1}.
    pub delta: bool,
    pub m: usize,
}

impl ClassParams {
    pub fn new(n: usize, d: u32, s: usize, constants: Vec<Constant>) -> Self {
        ClassParams { n, d, s, constants, delta: false, m: 0 }
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::new(self.n, self.d)
    }
}

/// The constant menu used when none is given: {0, 1, -1} over the integers,
/// all of F over fields with at most four elements, {0, 1} otherwise.
pub fn default_constants<R: Ring>(ring: &R) -> Vec<Constant> {
    match ring.carrier() {
        Carrier::Int => vec![Constant::int(0), Constant::int(1), Constant::int(-1)],
        Carrier::Field(f) if f.q() <= 4 => f.elements().map(|a| ring_constant(&f, a)).collect(),
        Carrier::Field(_) => vec![Constant::int(0), Constant::int(1)],
    }
}

fn ring_constant(f: &FieldSpec, a: FieldElem) -> Constant {
    f.to_constant(&a)
}

/// Deduplicated class members; the zero polynomial is always first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyClass<E> {
    pub params: ClassParams,
    pub carrier: Carrier,
    pub members: Vec<CoeffVector<E>>,
}

impl<E: Clone> PolyClass<E> {
    pub fn order(&self) -> MonomialOrder {
        self.params.order()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub(crate) fn is_delta_coeff<R: Ring>(ring: &R, c: &R::Elem) -> bool {
    ring.is_zero(c) || *c == ring.one() || *c == ring.neg(&ring.one())
}

/// Filters, converts and deduplicates candidate polynomials in the order given.
pub(crate) fn assemble_class<R: Ring>(
    ring: &R,
    params: &ClassParams,
    candidates: Vec<CoeffVector<R::Elem>>,
) -> PolyClass<R::Elem> {
    let order = params.order();
    let mut seen: HashSet<CoeffVector<R::Elem>> = HashSet::new();
    let zero = CoeffVector::zero(order);
    seen.insert(zero.clone());
    let mut members = vec![zero];
    for v in candidates {
        if seen.insert(v.clone()) {
            members.push(v);
        }
    }
    PolyClass { params: params.clone(), carrier: ring.carrier(), members }
}

/// Candidate filter shared by the plain and definable classes.
pub(crate) fn admit<R: Ring>(
    ring: &R,
    params: &ClassParams,
    order: MonomialOrder,
    poly: &Poly<R::Elem>,
) -> Option<CoeffVector<R::Elem>> {
    if poly.degree().is_some_and(|deg| deg > params.d) {
        return None;
    }
    if params.delta && poly.terms().any(|(_, c)| !is_delta_coeff(ring, c)) {
        return None;
    }
    CoeffVector::from_poly(poly, order).ok()
}

/// Every polynomial of the class, expanded exactly and deduplicated in order
/// of first appearance.
pub fn enumerate_class<R: Ring>(ring: &R, params: &ClassParams, budget: &Budget) -> Result<PolyClass<R::Elem>> {
    if params.m > 0 {
        return crate::vnp::enumerate_definable(ring, params, budget);
    }
    let order = params.order();
    let ep =
        EnumerationParams { n: params.n, max_gates: params.s, constants: params.constants.clone(), degree_cap: None };
    let candidates =
        walk_expansions(&ep, ring, budget.enumeration, budget.expansion_terms, |p| admit(ring, params, order, p))?;
    Ok(assemble_class(ring, params, candidates))
}

/// Evaluation points with their cached monomial values `eval(a)_m = m(a)`.
#[derive(Clone, Debug)]
pub struct HittingSet<R: Ring> {
    ring: R,
    order: MonomialOrder,
    points: Vec<Vec<R::Elem>>,
    grid_bound: Option<u64>,
    evals: Vec<Vec<R::Elem>>,
}

impl<R: Ring> PartialEq for HittingSet<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.carrier() == other.ring.carrier()
            && self.order == other.order
            && self.points == other.points
            && self.grid_bound == other.grid_bound
    }
}

pub(crate) fn eval_vector<R: Ring>(ring: &R, order: MonomialOrder, point: &[R::Elem]) -> Vec<R::Elem> {
    order.monomials().map(|e| monomial_eval(ring, &e, point)).collect()
}

impl<R: Ring> HittingSet<R> {
    pub fn new(ring: R, order: MonomialOrder, points: Vec<Vec<R::Elem>>, grid_bound: Option<u64>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != order.n()) {
            return Err(Error::Schema(format!("point of length {} for n = {}", p.len(), order.n())));
        }
        let evals = points.par_iter().map(|a| eval_vector(&ring, order, a)).collect();
        Ok(HittingSet { ring, order, points, grid_bound, evals })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn points(&self) -> &[Vec<R::Elem>] {
        &self.points
    }

    pub fn grid_bound(&self) -> Option<u64> {
        self.grid_bound
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `"ff"` or `"int"`.
    pub fn mode(&self) -> &'static str {
        match self.ring.carrier() {
            Carrier::Int => "int",
            Carrier::Field(_) => "ff",
        }
    }

    /// Cached `eval(a)` for the `i`-th point.
    pub fn eval_vector(&self, i: usize) -> &[R::Elem] {
        &self.evals[i]
    }

    /// `f(a_i) = <coeff(f), eval(a_i)>`.
    pub fn value(&self, i: usize, v: &CoeffVector<R::Elem>) -> R::Elem {
        v.dot(&self.ring, &self.evals[i])
    }

    /// True when `v` vanishes on every point.
    pub fn vanishes_on(&self, v: &CoeffVector<R::Elem>) -> bool {
        (0..self.len()).all(|i| self.ring.is_zero(&self.value(i, v)))
    }
}

/// `K^n` in lexicographic order of packed values.
pub fn ff_grid(ext: &FieldSpec, n: usize, budget: &Budget) -> Result<Vec<Vec<FieldElem>>> {
    let size = (ext.q() as u128).saturating_pow(n as u32);
    budget::check("grid points", size, budget.grid_points as u128)?;
    let axis: Vec<FieldElem> = ext.elements().collect();
    Ok(product_grid(&axis, n))
}

/// `{1, .., bound}^n` in lexicographic order.
pub fn int_grid(bound: u64, n: usize, budget: &Budget) -> Result<Vec<Vec<BigInt>>> {
    let size = (bound as u128).saturating_pow(n as u32);
    budget::check("grid points", size, budget.grid_points as u128)?;
    let axis: Vec<BigInt> = (1..=bound).map(BigInt::from).collect();
    Ok(product_grid(&axis, n))
}

pub(crate) fn product_grid<E: Clone>(axis: &[E], n: usize) -> Vec<Vec<E>> {
    let mut out: Vec<Vec<E>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |a| {
                    let mut p = prefix.clone();
                    p.push(a.clone());
                    p
                })
            })
            .collect();
    }
    out
}

type Bits = Vec<u64>;

fn popcount_and(a: &Bits, b: &Bits) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Greedy cover: repeatedly take the grid point on which the most surviving
/// nonzero members are nonzero, breaking ties towards the earliest point.
pub fn greedy_hitting_set<R: Ring>(
    ring: &R,
    class: &PolyClass<R::Elem>,
    grid: &[Vec<R::Elem>],
    grid_bound: Option<u64>,
) -> Result<HittingSet<R>> {
    let order = class.order();
    let nonzero: Vec<usize> = (0..class.len()).filter(|&j| !class.members[j].is_zero()).collect();
    let words = nonzero.len().div_ceil(64);
    let kills: Vec<Bits> = grid
        .par_iter()
        .map(|a| {
            let ev = eval_vector(ring, order, a);
            let mut bits = vec![0u64; words];
            for (k, &j) in nonzero.iter().enumerate() {
                if !ring.is_zero(&class.members[j].dot(ring, &ev)) {
                    bits[k / 64] |= 1 << (k % 64);
                }
            }
            bits
        })
        .collect();

    let mut covered = vec![0u64; words];
    for b in &kills {
        for (c, w) in covered.iter_mut().zip(b) {
            *c |= w;
        }
    }
    if let Some(k) = (0..nonzero.len()).find(|&k| covered[k / 64] >> (k % 64) & 1 == 0) {
        return Err(Error::GridInsufficient { member: nonzero[k] });
    }

    let mut alive = covered;
    let mut chosen = Vec::new();
    while alive.iter().any(|&w| w != 0) {
        let (best, _) = kills
            .par_iter()
            .enumerate()
            .map(|(i, b)| (i, popcount_and(&alive, b)))
            .reduce(|| (usize::MAX, 0), |x, y| if y.1 > x.1 || (y.1 == x.1 && y.0 < x.0) { y } else { x });
        for (a, k) in alive.iter_mut().zip(&kills[best]) {
            *a &= !k;
        }
        chosen.push(grid[best].clone());
    }
    let hs = HittingSet::new(ring.clone(), order, chosen, grid_bound)?;
    debug_assert!(verify_hitting_set(&hs, class).is_none());
    Ok(hs)
}

/// `t` distinct grid points drawn uniformly with the given seed, kept only if
/// they hit the whole class.
pub fn random_hitting_set<R: Ring>(
    ring: &R,
    class: &PolyClass<R::Elem>,
    grid: &[Vec<R::Elem>],
    grid_bound: Option<u64>,
    t: usize,
    seed: u64,
) -> Result<HittingSet<R>> {
    let hs = sample_points(ring, class.order(), grid, grid_bound, t, seed)?;
    match verify_hitting_set(&hs, class) {
        None => Ok(hs),
        Some(member) => Err(Error::NotHitting { member }),
    }
}

/// The unverified sample behind [`random_hitting_set`].
pub fn sample_points<R: Ring>(
    ring: &R,
    order: MonomialOrder,
    grid: &[Vec<R::Elem>],
    grid_bound: Option<u64>,
    t: usize,
    seed: u64,
) -> Result<HittingSet<R>> {
    if t > grid.len() {
        return Err(Error::Precondition(format!("cannot draw {t} distinct points from a grid of {}", grid.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = rand::seq::index::sample(&mut rng, grid.len(), t);
    let points = picks.into_iter().map(|i| grid[i].clone()).collect();
    HittingSet::new(ring.clone(), order, points, grid_bound)
}

/// Index of the first nonzero member vanishing on all of `hs`, if any.
pub fn verify_hitting_set<R: Ring>(hs: &HittingSet<R>, class: &PolyClass<R::Elem>) -> Option<usize> {
    class.members.par_iter().position_first(|v| !v.is_zero() && hs.vanishes_on(v))
}

/// Brute-force zero count of a polynomial on `S^n`, with the bound
/// `deg(v) · |S|^(n-1)` of the polynomial identity lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCount {
    pub zeros: u128,
    pub points: u128,
    /// `None` for the zero polynomial, where no bound applies.
    pub bound: Option<u128>,
}

impl ZeroCount {
    pub fn holds(&self) -> bool {
        self.bound.is_none_or(|b| self.zeros <= b)
    }
}

pub fn pit_zero_count<R: Ring>(
    ring: &R,
    v: &CoeffVector<R::Elem>,
    axis: &[R::Elem],
    budget: &Budget,
) -> Result<ZeroCount> {
    let n = v.order().n();
    let points = (axis.len() as u128).saturating_pow(n as u32);
    budget::check("grid points", points, budget.grid_points as u128)?;
    let poly = v.to_poly(ring);
    let grid = product_grid(axis, n);
    let zeros = grid.par_iter().filter(|a| ring.is_zero(&poly.eval(ring, a))).count() as u128;
    let bound = v.degree().map(|d| d as u128 * (axis.len() as u128).pow(n.saturating_sub(1) as u32));
    Ok(ZeroCount { zeros, points, bound })
}

/// `⌈log2 x⌉` for `x >= 1`.
fn ceil_log2(x: &BigInt) -> u64 {
    (x - BigInt::one()).bits()
}

/// Size bound for hitting sets of size-`s` circuit classes,
/// `⌈2s(log n + 2 log s + 4)⌉`, computed exactly as `⌈log2 (16 n s²)^(2s)⌉`.
pub fn circuit_hs_bound(n: u64, s: u64) -> u64 {
    let base = BigInt::from(16u64) * n * s * s;
    ceil_log2(&base.pow(2 * s as u32))
}

/// Size bound for hitting sets of `s`-definable classes, `⌈2s(3 log s + 4)⌉`,
/// computed exactly as `⌈log2 (16 s³)^(2s)⌉`.
pub fn definable_hs_bound(s: u64) -> u64 {
    let base = BigInt::from(16u64) * s * s * s;
    ceil_log2(&base.pow(2 * s as u32))
}

/// Upper bound `(8 n |F| s²)^s` on the number of polynomials computed by
/// circuits of size at most `s`; reported only.
pub fn circuit_count_bound(n: u64, field_size: u64, s: u64) -> BigInt {
    (BigInt::from(8u64) * n * field_size * s * s).pow(s as u32)
}

/// Integer grid side `(s d)²` for circuit classes.
pub fn circuit_grid_bound(s: u64, d: u64) -> u64 {
    (s * d).pow(2)
}

/// Integer grid side `d s |Δ|` for definable classes.
pub fn definable_grid_bound(d: u64, s: u64, delta_size: u64) -> u64 {
    d * s * delta_size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Integers;
    use crate::circuit::enumerate_circuits;
    use crate::poly::{circuit_to_coeffs, expand};

    fn f2() -> FieldSpec {
        FieldSpec::new(2, 1).unwrap()
    }

    fn class_of<R: Ring>(ring: &R, order: MonomialOrder, polys: Vec<Vec<(Vec<u32>, R::Elem)>>) -> PolyClass<R::Elem> {
        let params = ClassParams::new(order.n(), order.d(), 1, vec![]);
        let members = polys
            .into_iter()
            .map(|t| CoeffVector::from_poly(&Poly::from_terms(ring, order.n(), t), order).unwrap())
            .collect();
        PolyClass { params, carrier: ring.carrier(), members }
    }

    #[test]
    fn tiny_class_over_f2() {
        let f = f2();
        let params = ClassParams::new(1, 1, 1, vec![Constant::int(1)]);
        let class = enumerate_class(&f, &params, &Budget::default()).unwrap();
        let got: Vec<Vec<(usize, FieldElem)>> =
            class.members.iter().map(|v| v.entries().map(|(i, c)| (i, *c)).collect()).collect();
        assert_eq!(got, vec![vec![], vec![(1, f.one())], vec![(0, f.one())]]);
    }

    #[test]
    fn delta_filter_drops_two_x() {
        let mut params = ClassParams::new(1, 1, 2, vec![]);
        params.delta = true;
        let class = enumerate_class(&Integers, &params, &Budget::default()).unwrap();
        assert_eq!(class.len(), 2);
        params.delta = false;
        let class = enumerate_class(&Integers, &params, &Budget::default()).unwrap();
        assert_eq!(class.len(), 3);
    }

    /// Second enumerator: stream circuits one at a time, expand each from
    /// scratch and collect the distinct results.
    fn naive_members<R: Ring>(ring: &R, params: &ClassParams) -> HashSet<CoeffVector<R::Elem>> {
        let ep = EnumerationParams {
            n: params.n,
            max_gates: params.s,
            constants: params.constants.clone(),
            degree_cap: None,
        };
        let mut out = HashSet::new();
        out.insert(CoeffVector::zero(params.order()));
        for c in enumerate_circuits(&ep, u64::MAX).unwrap() {
            let p = expand(&c, ring, 1 << 20).unwrap();
            if p.degree().unwrap_or(0) <= params.d {
                out.insert(circuit_to_coeffs(&c, params.order(), ring, 1 << 20).unwrap());
            }
        }
        out
    }

    #[test]
    fn member_count_matches_naive_recount() {
        let f = f2();
        let params = ClassParams::new(2, 3, 3, default_constants(&f));
        let class = enumerate_class(&f, &params, &Budget::default()).unwrap();
        let naive = naive_members(&f, &params);
        assert_eq!(class.len(), naive.len());
        assert_eq!(class.members.iter().cloned().collect::<HashSet<_>>(), naive);
    }

    #[test]
    fn greedy_examples() {
        let f = f2();
        let order = MonomialOrder::new(1, 1);
        let grid = vec![vec![f.zero()], vec![f.one()]];
        let c1 = class_of(&f, order, vec![vec![(vec![1], f.one())]]);
        let hs = greedy_hitting_set(&f, &c1, &grid, None).unwrap();
        assert_eq!(hs.points(), &[vec![f.one()]]);

        let c2 = class_of(&f, order, vec![vec![(vec![1], f.one())], vec![(vec![1], f.one()), (vec![0], f.one())]]);
        let hs = greedy_hitting_set(&f, &c2, &grid, None).unwrap();
        assert_eq!(hs.len(), 2);
        assert_eq!(hs.points(), &[vec![f.zero()], vec![f.one()]]);
    }

    #[test]
    fn greedy_reports_insufficient_grid() {
        let f = f2();
        let order = MonomialOrder::new(1, 2);
        // x^2 + x vanishes on all of F_2.
        let c = class_of(&f, order, vec![vec![(vec![1], f.one())], vec![(vec![2], f.one()), (vec![1], f.one())]]);
        let grid = vec![vec![f.zero()], vec![f.one()]];
        assert_eq!(greedy_hitting_set(&f, &c, &grid, None), Err(Error::GridInsufficient { member: 1 }));
    }

    #[test]
    fn greedy_within_size_bound_and_verified() {
        let k = FieldSpec::new(2, 2).unwrap();
        let base = k.base();
        let params = ClassParams::new(1, 2, 3, default_constants(&base));
        let class = enumerate_class(&base, &params, &Budget::default()).unwrap();
        let grid = ff_grid(&k, 1, &Budget::default()).unwrap();
        let hs = greedy_hitting_set(&k, &class, &grid, None).unwrap();
        assert!(verify_hitting_set(&hs, &class).is_none());
        assert!(hs.len() as u64 <= circuit_hs_bound(1, 3));
        let again = greedy_hitting_set(&k, &class, &grid, None).unwrap();
        assert_eq!(hs, again);
    }

    #[test]
    fn verify_examples() {
        let c = class_of(&Integers, MonomialOrder::new(1, 1), vec![vec![(vec![1], BigInt::from(1))]]);
        let empty = HittingSet::new(Integers, MonomialOrder::new(1, 1), vec![], None).unwrap();
        assert_eq!(verify_hitting_set(&empty, &c), Some(0));
        let grid = int_grid(3, 1, &Budget::default()).unwrap();
        let full = HittingSet::new(Integers, MonomialOrder::new(1, 1), grid, Some(3)).unwrap();
        assert_eq!(verify_hitting_set(&full, &c), None);
    }

    #[test]
    fn random_full_grid_and_seed_determinism() {
        let params = ClassParams::new(1, 2, 3, default_constants(&Integers));
        let class = enumerate_class(&Integers, &params, &Budget::default()).unwrap();
        let grid = int_grid(36, 1, &Budget::default()).unwrap();
        assert!(random_hitting_set(&Integers, &class, &grid, Some(36), 36, 1).is_ok());
        let a = sample_points(&Integers, class.order(), &grid, Some(36), 5, 99).unwrap();
        let b = sample_points(&Integers, class.order(), &grid, Some(36), 5, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_success_rate() {
        // degree <= 2 members have at most two roots, so three random points
        // of a sufficiently large grid almost always hit.
        let params = ClassParams::new(1, 2, 3, default_constants(&Integers));
        let class = enumerate_class(&Integers, &params, &Budget::default()).unwrap();
        let grid = int_grid(36, 1, &Budget::default()).unwrap();
        let ok =
            (0..100).filter(|&seed| random_hitting_set(&Integers, &class, &grid, Some(36), 3, seed).is_ok()).count();
        assert!(ok >= 90, "{ok}");
    }

    #[test]
    fn eval_cache_matches_direct() {
        let k = FieldSpec::new(3, 2).unwrap();
        let order = MonomialOrder::new(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let points: Vec<Vec<FieldElem>> = (0..10).map(|_| vec![k.random(&mut rng), k.random(&mut rng)]).collect();
        let hs = HittingSet::new(k.clone(), order, points, None).unwrap();
        for i in 0..100 {
            let p = i % hs.len();
            let m = (i * 7) % order.len();
            let direct = monomial_eval(&k, &order.exponents(m), &hs.points()[p]);
            assert_eq!(hs.eval_vector(p)[m], direct);
        }
    }

    #[test]
    fn zero_count_examples() {
        let b = Budget::default();
        let order = MonomialOrder::new(2, 2);
        let xy =
            CoeffVector::from_poly(&Poly::from_terms(&Integers, 2, [(vec![1, 1], BigInt::from(1))]), order).unwrap();
        let s: Vec<BigInt> = (0..3).map(BigInt::from).collect();
        let zc = pit_zero_count(&Integers, &xy, &s, &b).unwrap();
        assert_eq!((zc.zeros, zc.bound), (5, Some(6)));
        assert!(zc.holds());

        let zero = CoeffVector::<BigInt>::zero(order);
        let zc = pit_zero_count(&Integers, &zero, &s, &b).unwrap();
        assert_eq!((zc.zeros, zc.bound), (9, None));

        let o1 = MonomialOrder::new(1, 1);
        let xm1 = CoeffVector::from_poly(
            &Poly::from_terms(&Integers, 1, [(vec![1], BigInt::from(1)), (vec![0], BigInt::from(-1))]),
            o1,
        )
        .unwrap();
        let s01 = vec![BigInt::from(0), BigInt::from(1)];
        let zc = pit_zero_count(&Integers, &xm1, &s01, &b).unwrap();
        assert_eq!((zc.zeros, zc.bound), (1, Some(1)));
    }

    #[test]
    fn size_bounds_match_float_formulas() {
        for n in 1..6u64 {
            for s in 1..12u64 {
                let f = 2.0 * s as f64 * ((n as f64).log2() + 2.0 * (s as f64).log2() + 4.0);
                assert_eq!(circuit_hs_bound(n, s), f.ceil() as u64, "n={n} s={s}");
            }
        }
        for s in 1..12u64 {
            let f = 2.0 * s as f64 * (3.0 * (s as f64).log2() + 4.0);
            assert_eq!(definable_hs_bound(s), f.ceil() as u64, "s={s}");
        }
        assert_eq!(circuit_hs_bound(2, 5), 97);
        assert_eq!(circuit_count_bound(1, 2, 1), BigInt::from(16));
        assert_eq!(circuit_grid_bound(4, 2), 64);
        assert_eq!(definable_grid_bound(2, 4, 3), 24);
    }
}
