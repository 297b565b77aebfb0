//! Definable polynomials `f(x) = Σ_{α ∈ {0,1}^m} g(x, α)`.
//!
//! The coefficients of `f` are a fixed linear image of those of `g`: a
//! monomial `x^e w^a` of `g` contributes to `x^e` with weight `2^(m - |supp a|)`,
//! since `Σ_α α^a` counts the assignments that are 1 on the support of `a`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::algebra::{Constant, Ring};
use crate::budget::{self, Budget};
use crate::circuit::{walk_expansions, Circuit, EnumerationParams, Gate, UniversalCircuit};
use crate::error::{Error, Result};
use crate::hitting::{admit, assemble_class, ClassParams, PolyClass};
use crate::poly::{expand, CoeffVector, MonomialOrder, Poly};

/// A circuit `g` on `x_1..x_n, w_1..w_m` (in that order) defining
/// `f(x) = Σ_α g(x, α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinableSpec {
    pub g: Circuit,
    pub n: usize,
    pub m: usize,
}

impl DefinableSpec {
    pub fn new(g: Circuit, n: usize, m: usize) -> Result<Self> {
        if g.n() != n + m {
            return Err(Error::Schema(format!("g has {} variables, expected n + m = {}", g.n(), n + m)));
        }
        Ok(DefinableSpec { g, n, m })
    }

    pub fn s(&self) -> usize {
        self.n + self.m
    }
}

fn check_boolean_vars(m: usize, budget: &Budget) -> Result<()> {
    budget::check("Boolean summation variables", m as u128, budget.boolean_vars as u128)
}

fn boolean_points<R: Ring>(ring: &R, m: usize) -> impl Iterator<Item = Vec<R::Elem>> + '_ {
    (0u64..1 << m).map(move |bits| (0..m).map(|j| if bits >> j & 1 == 1 { ring.one() } else { ring.zero() }).collect())
}

/// `f(x)` by summing `g(x, α)` over all `2^m` assignments.
pub fn definable_eval<R: Ring>(ring: &R, spec: &DefinableSpec, x: &[R::Elem], budget: &Budget) -> Result<R::Elem> {
    check_boolean_vars(spec.m, budget)?;
    if x.len() != spec.n {
        return Err(Error::Schema(format!("point of length {} for n = {}", x.len(), spec.n)));
    }
    let mut acc = ring.zero();
    for alpha in boolean_points(ring, spec.m) {
        let point: Vec<R::Elem> = x.iter().cloned().chain(alpha).collect();
        acc = ring.add(&acc, &spec.g.eval(ring, &point)?);
    }
    Ok(acc)
}

/// Coefficients of `f` obtained the slow way: substitute each `α` into `g`,
/// expand, and add up.
pub fn definable_coeffs_bruteforce<R: Ring>(
    ring: &R,
    spec: &DefinableSpec,
    order: MonomialOrder,
    budget: &Budget,
) -> Result<CoeffVector<R::Elem>> {
    check_boolean_vars(spec.m, budget)?;
    let mut total = Poly::zero(spec.n);
    for bits in 0u64..1 << spec.m {
        let gates = spec
            .g
            .gates()
            .iter()
            .map(|gate| match gate {
                Gate::Var(i) if *i >= spec.n => Gate::Const(Constant::int((bits >> (i - spec.n) & 1) as i64)),
                other => other.clone(),
            })
            .collect();
        let sub = Circuit::new(spec.n, gates, spec.g.output())?;
        total = total.add(ring, &expand(&sub, ring, budget.expansion_terms)?);
    }
    CoeffVector::from_poly(&total, order)
}

/// The linear map from coefficients of `g` (in `s` variables, degree at most
/// `g_degree`) to those of `f`. Columns whose `x`-part has degree above `d`
/// land in the overflow part of the image, which must cancel for `f` to fit.
#[derive(Debug, PartialEq, Eq)]
pub struct LinearMapL {
    n: usize,
    d: u32,
    s: usize,
    g_order: MonomialOrder,
    image_order: MonomialOrder,
    /// For each column: target index in `image_order` and the exponent `k` of
    /// the weight `2^k`.
    columns: Vec<(usize, u32)>,
}

type LKey = (usize, u32, usize, u32);

fn l_cache() -> &'static Mutex<HashMap<LKey, Arc<LinearMapL>>> {
    static CACHE: OnceLock<Mutex<HashMap<LKey, Arc<LinearMapL>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl LinearMapL {
    /// The map for `(n, d, s)` with `g` of degree at most `s`. Maps are
    /// built once and shared.
    pub fn get(n: usize, d: u32, s: usize, budget: &Budget) -> Result<Arc<Self>> {
        Self::with_g_degree(n, d, s, s as u32, budget)
    }

    pub fn with_g_degree(n: usize, d: u32, s: usize, g_degree: u32, budget: &Budget) -> Result<Arc<Self>> {
        if s < n {
            return Err(Error::Precondition(format!("s = {s} is smaller than n = {n}")));
        }
        let g_order = MonomialOrder::new(s, g_degree);
        budget::check("coefficient map columns", g_order.size(), budget.expansion_terms as u128)?;
        let key = (n, d, s, g_degree);
        if let Some(l) = l_cache().lock().unwrap().get(&key) {
            return Ok(Arc::clone(l));
        }
        let image_order = MonomialOrder::new(n, g_degree.max(d));
        let m = (s - n) as u32;
        let columns = g_order
            .monomials()
            .map(|e| {
                let (x, w) = e.split_at(n);
                let supp = w.iter().filter(|&&k| k > 0).count() as u32;
                (image_order.index(x).expect("x-part fits the image order"), m - supp)
            })
            .collect();
        let built = Arc::new(LinearMapL { n, d, s, g_order, image_order, columns });
        Ok(Arc::clone(l_cache().lock().unwrap().entry(key).or_insert(built)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> usize {
        self.s - self.n
    }

    /// Order of the input vectors `coeff(g)`.
    pub fn g_order(&self) -> MonomialOrder {
        self.g_order
    }

    pub fn f_order(&self) -> MonomialOrder {
        MonomialOrder::new(self.n, self.d)
    }

    /// Nonzero entries as `(g index, f index, weight)`, skipping columns whose
    /// target has degree above `d`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, BigInt)> + '_ {
        let f_order = self.f_order();
        self.columns.iter().enumerate().filter_map(move |(j, &(t, k))| {
            let e = self.image_order.exponents(t);
            f_order.index(&e).ok().map(|i| (j, i, BigInt::from(1) << k))
        })
    }

    /// Weight of column `j` as the exponent of two.
    pub fn weight_exponent(&self, j: usize) -> u32 {
        self.columns[j].1
    }

    /// `coeff(f) = L(coeff(g))`; fails when `f` has degree above `d`.
    pub fn apply<R: Ring>(&self, ring: &R, cg: &CoeffVector<R::Elem>) -> Result<CoeffVector<R::Elem>> {
        self.g_order.ensure_same(&cg.order())?;
        let weights: Vec<R::Elem> = (0..=self.m() as u32).map(|k| ring.from_bigint(&(BigInt::from(1) << k))).collect();
        let mut acc: std::collections::BTreeMap<usize, R::Elem> = Default::default();
        for (j, c) in cg.entries() {
            let (t, k) = self.columns[j];
            let term = ring.mul(c, &weights[k as usize]);
            let slot = acc.entry(t).or_insert_with(|| ring.zero());
            *slot = ring.add(slot, &term);
        }
        let image = CoeffVector::from_entries(ring, self.image_order, acc)?;
        image.reindex(self.f_order())
    }
}

/// The `s`-definable class: every circuit `g` on `s = n + m` variables with at
/// most `s` gates and degree at most `s`, pushed through `L` and filtered to
/// degree `d` (and to {-1, 0, 1} coefficients in Δ-mode).
pub fn enumerate_definable<R: Ring>(ring: &R, params: &ClassParams, budget: &Budget) -> Result<PolyClass<R::Elem>> {
    let s = params.s;
    if s != params.n + params.m {
        return Err(Error::Precondition(format!(
            "definable classes need s = n + m, got s = {s}, n = {}, m = {}",
            params.n, params.m
        )));
    }
    check_boolean_vars(params.m, budget)?;
    let l = LinearMapL::get(params.n, params.d, s, budget)?;
    let order = params.order();
    let g_params = ClassParams { n: s, d: s as u32, s, constants: params.constants.clone(), delta: false, m: 0 };
    let ep = EnumerationParams { n: s, max_gates: s, constants: params.constants.clone(), degree_cap: None };
    let candidates = walk_expansions(&ep, ring, budget.enumeration, budget.expansion_terms, |g| {
        let cg = admit(ring, &g_params, l.g_order(), g)?;
        let cf = l.apply(ring, &cg).ok()?;
        admit(ring, params, order, &cf.to_poly(ring))
    })?;
    Ok(assemble_class(ring, params, candidates))
}

/// `L ∘ U`: the universal circuit for `C(s, s, s)` followed by the coefficient
/// map, as a polynomial map from wire assignments to coefficient vectors.
#[derive(Debug)]
pub struct UniversalMapVnp {
    u: UniversalCircuit,
    l: Arc<LinearMapL>,
}

pub fn universal_map_vnp(n: usize, d: u32, s: usize, budget: &Budget) -> Result<UniversalMapVnp> {
    let u = UniversalCircuit::build(s, s as u32, s, budget)?;
    let g_degree = (s as u64).max(u.x_degree()) as u32;
    let l = LinearMapL::with_g_degree(n, d, s, g_degree, budget)?;
    Ok(UniversalMapVnp { u, l })
}

impl UniversalMapVnp {
    pub fn universal(&self) -> &UniversalCircuit {
        &self.u
    }

    pub fn map(&self) -> &LinearMapL {
        &self.l
    }

    /// Number of `y` variables.
    pub fn arity(&self) -> usize {
        self.u.y_count()
    }

    /// Syntactic degree in `y`; `L` is linear so this bounds every coordinate.
    pub fn y_degree(&self) -> u64 {
        self.u.y_degree()
    }

    /// `5^ℓ`.
    pub fn degree_bound(&self) -> u128 {
        self.u.degree_bound()
    }

    /// `coeff(g)` for `g = U(·, y)` in the order `L` expects.
    pub fn g_coeffs<R: Ring>(&self, ring: &R, y: &[R::Elem], budget: &Budget) -> Result<CoeffVector<R::Elem>> {
        let g = self.u.specialize(ring, y, budget.expansion_terms)?;
        CoeffVector::from_poly(&g, self.l.g_order())
    }

    pub fn eval<R: Ring>(&self, ring: &R, y: &[R::Elem], budget: &Budget) -> Result<CoeffVector<R::Elem>> {
        self.l.apply(ring, &self.g_coeffs(ring, y, budget)?)
    }
}

/// Brute-force and fast coefficient paths side by side, for sampled `g`.
pub fn check_sigma_consistency<R: Ring>(
    ring: &R,
    specs: &[DefinableSpec],
    d: u32,
    budget: &Budget,
) -> Result<Option<usize>> {
    let results: Vec<Result<bool>> = specs
        .par_iter()
        .map(|spec| {
            let g = expand(&spec.g, ring, budget.expansion_terms)?;
            let g_degree = g.degree().unwrap_or(0).max(spec.s() as u32);
            let l = LinearMapL::with_g_degree(spec.n, d, spec.s(), g_degree, budget)?;
            let fast = l.apply(ring, &CoeffVector::from_poly(&g, l.g_order())?)?;
            let slow = definable_coeffs_bruteforce(ring, spec, MonomialOrder::new(spec.n, d), budget)?;
            Ok(fast == slow)
        })
        .collect();
    for (i, r) in results.into_iter().enumerate() {
        if !r? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldSpec, Integers};
    use crate::circuit::LayeredCircuit;
    use crate::hitting::{default_constants, enumerate_class};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn xw() -> DefinableSpec {
        let g = Circuit::new(2, vec![Gate::Var(0), Gate::Var(1), Gate::Mul(0, 1)], 2).unwrap();
        DefinableSpec::new(g, 1, 1).unwrap()
    }

    #[test]
    fn eval_examples() {
        let b = Budget::default();
        assert_eq!(definable_eval(&Integers, &xw(), &[BigInt::from(5)], &b).unwrap(), BigInt::from(5));
        let g = Circuit::new(3, vec![Gate::Var(0), Gate::Mul(0, 0)], 1).unwrap();
        let spec = DefinableSpec::new(g, 1, 2).unwrap();
        assert_eq!(definable_eval(&Integers, &spec, &[BigInt::from(3)], &b).unwrap(), BigInt::from(36));
    }

    #[test]
    fn map_examples() {
        let b = Budget::default();
        let l = LinearMapL::get(1, 1, 2, &b).unwrap();
        let g = expand(&xw().g, &Integers, 100).unwrap();
        let cf = l.apply(&Integers, &CoeffVector::from_poly(&g, l.g_order()).unwrap()).unwrap();
        let x = CoeffVector::from_poly(&Poly::variable(&Integers, 1, 0), MonomialOrder::new(1, 1)).unwrap();
        assert_eq!(cf, x);
        // a = 0 has weight 2^m
        assert_eq!(l.weight_exponent(0), 1);
        let zero = CoeffVector::zero(l.g_order());
        assert!(l.apply(&Integers, &zero).unwrap().is_zero());
    }

    #[test]
    fn map_is_shared() {
        let b = Budget::default();
        let a = LinearMapL::get(2, 2, 4, &b).unwrap();
        let c = LinearMapL::get(2, 2, 4, &b).unwrap();
        assert!(Arc::ptr_eq(&a, &c));
        let e = LinearMapL::get(2, 3, 4, &b).unwrap();
        assert!(!Arc::ptr_eq(&a, &e));
    }

    #[test]
    fn high_w_exponents_use_support() {
        // g = x w^3 over m = 1: Σ_α α^3 = 1.
        let b = Budget::default();
        let g = Circuit::new(2, vec![Gate::Var(0), Gate::Var(1), Gate::Mul(1, 1), Gate::Mul(2, 1), Gate::Mul(0, 3)], 4)
            .unwrap();
        let spec = DefinableSpec::new(g, 1, 1).unwrap();
        let d = 1;
        assert_eq!(check_sigma_consistency(&Integers, &[spec], d, &b).unwrap(), None);
    }

    #[test]
    fn overflow_is_an_error() {
        let b = Budget::default();
        let l = LinearMapL::get(1, 1, 2, &b).unwrap();
        let x2 = Poly::from_terms(&Integers, 2, [(vec![2, 0], BigInt::from(1))]);
        let cg = CoeffVector::from_poly(&x2, l.g_order()).unwrap();
        assert!(matches!(l.apply(&Integers, &cg), Err(Error::DegreeOverflow { .. })));
    }

    /// Random circuit on `n + m` variables with `size` gates.
    fn random_circuit(rng: &mut ChaCha8Rng, vars: usize, size: usize) -> Circuit {
        let mut gates = Vec::new();
        for i in 0..size {
            let g = if i < 2 || rng.gen_bool(0.3) {
                if rng.gen_bool(0.8) {
                    Gate::Var(rng.gen_range(0..vars))
                } else {
                    Gate::Const(Constant::int(rng.gen_range(-2..3)))
                }
            } else {
                let a = rng.gen_range(0..i);
                let c = rng.gen_range(0..i);
                if rng.gen_bool(0.5) {
                    Gate::Add(a, c)
                } else {
                    Gate::Mul(a, c)
                }
            };
            gates.push(g);
        }
        Circuit::new(vars, gates, size - 1).unwrap()
    }

    #[test]
    fn sigma_consistency_random() {
        let b = Budget::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f5 = FieldSpec::new(5, 1).unwrap();
        let specs: Vec<DefinableSpec> = (0..60)
            .map(|i| {
                let n = 1 + i % 2;
                let m = i % 4;
                DefinableSpec::new(random_circuit(&mut rng, n + m, 6), n, m).unwrap()
            })
            .collect();
        assert_eq!(check_sigma_consistency(&Integers, &specs, 12, &b).unwrap(), None);
        assert_eq!(check_sigma_consistency(&f5, &specs, 12, &b).unwrap(), None);
        for spec in &specs {
            let x: Vec<BigInt> = (0..spec.n).map(|_| BigInt::from(rng.gen_range(-4..5))).collect();
            let f = definable_coeffs_bruteforce(&Integers, spec, MonomialOrder::new(spec.n, 12), &b).unwrap();
            assert_eq!(definable_eval(&Integers, spec, &x, &b).unwrap(), f.eval(&Integers, &x).unwrap());
        }
    }

    #[test]
    fn m_zero_matches_plain_class() {
        let b = Budget::default();
        let f2 = FieldSpec::new(2, 1).unwrap();
        let mut params = ClassParams::new(2, 2, 2, default_constants(&f2));
        let plain = enumerate_class(&f2, &params, &b).unwrap();
        params.m = 0;
        let definable = enumerate_definable(&f2, &params, &b).unwrap();
        assert_eq!(plain.members, definable.members);
    }

    #[test]
    fn definable_class_contains_sum_of_xw() {
        // With s = n + m = 3 the circuit x * w1 fits; summing over (w1, w2)
        // gives 2x.
        let b = Budget::default();
        let mut params = ClassParams::new(1, 1, 3, vec![]);
        params.m = 2;
        let class = enumerate_definable(&Integers, &params, &b).unwrap();
        let two_x = CoeffVector::from_poly(
            &Poly::from_terms(&Integers, 1, [(vec![1], BigInt::from(2))]),
            MonomialOrder::new(1, 1),
        )
        .unwrap();
        assert!(class.members.contains(&two_x));
        let g_count = crate::circuit::circuit_count(&EnumerationParams {
            n: 3,
            max_gates: 3,
            constants: vec![],
            degree_cap: None,
        });
        assert!(class.len() as u128 <= g_count + 1);
        params.s = 4;
        assert!(matches!(enumerate_definable(&Integers, &params, &b), Err(Error::Precondition(_))));
    }

    #[test]
    fn universal_map_round_trip() {
        let b = Budget::default();
        let map = universal_map_vnp(2, 2, 4, &b).unwrap();
        let zero = vec![BigInt::from(0); map.arity()];
        assert!(map.eval(&Integers, &zero, &b).unwrap().is_zero());
        assert!(u128::from(map.y_degree()) <= map.degree_bound());

        // g = x1 w1 - x2 + w2 w1
        let g = Poly::from_terms(
            &Integers,
            4,
            [
                (vec![1, 0, 1, 0], BigInt::from(1)),
                (vec![0, 1, 0, 0], BigInt::from(-1)),
                (vec![0, 0, 1, 1], BigInt::from(1)),
            ],
        );
        let target = LayeredCircuit::from_poly(&Integers, &g).unwrap();
        let y = map.universal().embed(&Integers, &target, b.expansion_terms).unwrap();
        let via_map = map.eval(&Integers, &y, &b).unwrap();
        let direct = map.map().apply(&Integers, &CoeffVector::from_poly(&g, map.map().g_order()).unwrap()).unwrap();
        assert_eq!(via_map, direct);
    }
}
