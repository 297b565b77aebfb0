//! Layered universal circuit `U(x, y)`: every polynomial computed by a small
//! layered alternating circuit is `U(x, a)` for some assignment `a` to `y`.
//!
//! Layer 1 holds the variables and the constant 1, layer 2 every monomial of
//! degree at most 5, and above that sum and product layers alternate up to a
//! single sum gate at the top. Each sum-gate wire is scaled by its own
//! `y`-variable; product gates multiply fixed 5-subsets of the layer below.

use super::{Builder, Circuit, Constant, Gate};
use crate::algebra::Ring;
use crate::budget::{self, Budget};
use crate::error::{Error, Result};
use crate::poly::{binomial, Exponents, MonomialOrder, Poly};

const FAN_IN: usize = 5;

#[derive(Clone, Debug)]
pub struct UniversalCircuit {
    circuit: Circuit,
    layers: Vec<Vec<usize>>,
    n: usize,
    d: u32,
    s: usize,
    ell: usize,
    monomials: Vec<Exponents>,
    /// For each layer (0-based), the input positions of each product gate.
    subsets: Vec<Vec<Vec<usize>>>,
    /// For each layer, the index of its first wire variable.
    wire_base: Vec<usize>,
    y_count: usize,
}

/// Gates of one layer above the first in a target circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerGates {
    /// Each gate multiplies the listed positions of the layer below (with
    /// repetition allowed on layer 2).
    Products(Vec<Vec<usize>>),
    /// Each gate is a weighted sum of positions of the layer below.
    Sums(Vec<Vec<(usize, Constant)>>),
}

/// A target circuit already in layered, alternating, fan-in-5 form. Layer 1 is
/// implicit: positions `0..n` are the variables and position `n` is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCircuit {
    pub n: usize,
    pub layers: Vec<LayerGates>,
}

/// Layer count for degree `d`: odd, at least 3, with `5^((ℓ-1)/2) >= d`.
pub(crate) fn layer_count(d: u32) -> usize {
    let mut half = 1;
    let mut reach: u64 = 5;
    while reach < u64::from(d) {
        half += 1;
        reach *= 5;
    }
    2 * half + 1
}

fn subsets(width: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > width {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == width - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

impl UniversalCircuit {
    pub fn build(n: usize, d: u32, s: usize, budget: &Budget) -> Result<Self> {
        if n == 0 || d == 0 || s == 0 {
            return Err(Error::Precondition("universal circuit needs n, d, s' >= 1".into()));
        }
        let ell = layer_count(d);
        let mono_order = MonomialOrder::new(n, FAN_IN as u32);
        let width2 = mono_order.size();
        let k = FAN_IN.min(s);
        let prod_width = binomial(s as u128, k as u128);
        // Generous gate estimate: monomial trees, three gates per wire, and
        // product trees.
        let inner = (ell.saturating_sub(3) / 2) as u128;
        let estimate = width2 * 6
            + 3 * width2 * s as u128
            + inner * (3 * prod_width * s as u128 + 3 * s as u128 * prod_width + prod_width * k as u128)
            + 3 * prod_width.max(width2);
        budget::check("universal circuit gates", estimate, budget.circuit_gates as u128)?;

        let mut b = Builder::default();
        let mut layers: Vec<Vec<usize>> = Vec::with_capacity(ell);
        let v1: Vec<usize> = (0..n).map(|i| b.push(Gate::Var(i))).collect();
        let one = b.constant(Constant::int(1));
        layers.push(v1.iter().copied().chain([one]).collect());

        let monomials: Vec<Exponents> = mono_order.monomials().collect();
        let mut v2 = Vec::with_capacity(monomials.len());
        for e in &monomials {
            let factors: Vec<usize> =
                e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(v1[i], k as usize)).collect();
            let g = match factors.len() {
                0 => b.mul(one, one),
                1 => b.mul(factors[0], one),
                _ => b.tree(factors, true).unwrap(),
            };
            v2.push(g);
        }
        layers.push(v2);

        let mut subset_table = vec![Vec::new(), Vec::new()];
        let mut wire_base = vec![0, 0];
        let mut y_next = 0usize;
        let y_var = |y: usize| n + y;
        // The y variables are numbered after x, but their count is only known
        // at the end; record them as offsets and rewrite afterwards.
        let mut y_gates: Vec<(usize, usize)> = Vec::new();
        for layer in 2..ell {
            let prev = layers[layer - 1].clone();
            if layer % 2 == 0 {
                // sum layer (V_3, V_5, ...)
                let width = if layer == ell - 1 { 1 } else { s };
                wire_base.push(y_next);
                subset_table.push(Vec::new());
                let mut gates = Vec::with_capacity(width);
                for _ in 0..width {
                    let mut terms = Vec::with_capacity(prev.len());
                    for &src in &prev {
                        let yv = b.push(Gate::Var(0));
                        y_gates.push((yv, y_next));
                        y_next += 1;
                        terms.push(b.mul(yv, src));
                    }
                    gates.push(b.tree(terms, false).unwrap());
                }
                layers.push(gates);
            } else {
                let table = subsets(prev.len(), k);
                let gates =
                    table.iter().map(|set| b.tree(set.iter().map(|&p| prev[p]).collect(), true).unwrap()).collect();
                wire_base.push(0);
                subset_table.push(table);
                layers.push(gates);
            }
        }
        let root = layers[ell - 1][0];
        let mut gates = b.gates;
        for (g, y) in y_gates {
            gates[g] = Gate::Var(y_var(y));
        }
        let circuit = Circuit::new(n + y_next, gates, root)?;
        Ok(UniversalCircuit {
            circuit,
            layers,
            n,
            d,
            s,
            ell,
            monomials,
            subsets: subset_table,
            wire_base,
            y_count: y_next,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Gate indices of `V_1 .. V_ℓ`.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
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

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn y_count(&self) -> usize {
        self.y_count
    }

    pub fn size(&self) -> usize {
        self.circuit.size()
    }

    /// `ℓ (n s')^5`.
    pub fn size_bound(&self) -> u128 {
        self.ell as u128 * ((self.n * self.s) as u128).pow(5)
    }

    /// `ℓ (n s')^6`.
    pub fn y_bound(&self) -> u128 {
        self.ell as u128 * ((self.n * self.s) as u128).pow(6)
    }

    /// `5^ℓ`.
    pub fn degree_bound(&self) -> u128 {
        5u128.pow(self.ell as u32)
    }

    pub fn x_degree(&self) -> u64 {
        self.circuit.degree_in(|v| v < self.n)
    }

    pub fn y_degree(&self) -> u64 {
        self.circuit.degree_in(|v| v >= self.n)
    }

    /// Monomial computed by each gate of `V_2`, in graded-lex order.
    pub fn monomials(&self) -> &[Exponents] {
        &self.monomials
    }

    /// Input positions of product gate `gate` on (0-based) layer `layer >= 3`.
    pub fn product_inputs(&self, layer: usize, gate: usize) -> &[usize] {
        &self.subsets[layer][gate]
    }

    /// Index into `y` of the wire from position `source` of the layer below
    /// into sum gate `gate` of (0-based) layer `layer`.
    pub fn wire(&self, layer: usize, gate: usize, source: usize) -> usize {
        self.wire_base[layer] + gate * self.layers[layer - 1].len() + source
    }

    /// `U(x, a)` expanded over `x`.
    pub fn specialize<R: Ring>(&self, ring: &R, a: &[R::Elem], term_limit: usize) -> Result<Poly<R::Elem>> {
        if a.len() != self.y_count {
            return Err(Error::Schema(format!("assignment has {} entries, U has {} wires", a.len(), self.y_count)));
        }
        let n = self.n;
        let mut vals: Vec<Poly<R::Elem>> = Vec::with_capacity(self.circuit.size());
        for g in self.circuit.gates() {
            let v = match g {
                Gate::Var(i) if *i < n => Poly::variable(ring, n, *i),
                Gate::Var(i) => Poly::constant(ring, n, a[*i - n].clone()),
                Gate::Const(c) => Poly::constant(ring, n, ring.from_constant(c)?),
                Gate::Add(l, r) => vals[*l].add(ring, &vals[*r]),
                Gate::Mul(l, r) => vals[*l].mul(ring, &vals[*r], term_limit)?,
            };
            vals.push(v);
        }
        Ok(vals.swap_remove(self.circuit.output()))
    }

    /// Wire assignment realizing `target`, checked by expanding both sides.
    pub fn embed<R: Ring>(&self, ring: &R, target: &LayeredCircuit, term_limit: usize) -> Result<Vec<R::Elem>> {
        let a = self.assign(ring, target)?;
        let want = crate::poly::expand(&target.to_circuit()?, ring, term_limit)?;
        let got = self.specialize(ring, &a, term_limit)?;
        if want != got {
            return Err(Error::NotEmbeddable("specialized circuit differs from the target".into()));
        }
        Ok(a)
    }

    fn assign<R: Ring>(&self, ring: &R, target: &LayeredCircuit) -> Result<Vec<R::Elem>> {
        let bad = |msg: String| Err(Error::NotEmbeddable(msg));
        if target.n != self.n {
            return bad(format!("target has {} variables, U has {}", target.n, self.n));
        }
        if target.layers.len() != self.ell - 1 {
            return bad(format!("target has {} layers, U has {}", target.layers.len() + 1, self.ell));
        }
        let mut a = vec![ring.zero(); self.y_count];
        // U position of each gate of the previous target layer.
        let mut map: Vec<usize> = (0..=self.n).collect();
        let mono_order = MonomialOrder::new(self.n, FAN_IN as u32);
        for (t, gates) in target.layers.iter().enumerate() {
            let layer = t + 1;
            let expect_products = layer % 2 == 1;
            let width_prev = map.len();
            match gates {
                LayerGates::Products(prods) if expect_products => {
                    let mut next = Vec::with_capacity(prods.len());
                    for (j, inputs) in prods.iter().enumerate() {
                        if inputs.len() > FAN_IN {
                            return bad(format!("product gate {j} on layer {} has fan-in {}", layer + 1, inputs.len()));
                        }
                        if let Some(&p) = inputs.iter().find(|&&p| p >= width_prev) {
                            return bad(format!("input {p} outside layer {}", layer));
                        }
                        if layer == 1 {
                            let mut e = vec![0u32; self.n];
                            for &p in inputs {
                                if p < self.n {
                                    e[p] += 1;
                                }
                            }
                            next.push(mono_order.index(&e).expect("fan-in bounds the degree"));
                        } else {
                            let mut set: Vec<usize> = inputs.iter().map(|&p| map[p]).collect();
                            set.sort_unstable();
                            set.dedup();
                            let pos = self.subsets[layer].iter().position(|s| *s == set);
                            match pos {
                                Some(pos) if set.len() == inputs.len() => next.push(pos),
                                _ => {
                                    return bad(format!(
                                        "product gate {j} on layer {} must multiply {} distinct gates",
                                        layer + 1,
                                        self.subsets[layer].first().map_or(0, Vec::len)
                                    ))
                                }
                            }
                        }
                    }
                    map = next;
                }
                LayerGates::Sums(sums) if !expect_products => {
                    let width = self.layers[layer].len();
                    if sums.len() > width {
                        return bad(format!("sum layer {} has {} gates, U has {}", layer + 1, sums.len(), width));
                    }
                    for (j, inputs) in sums.iter().enumerate() {
                        for (p, w) in inputs {
                            if *p >= width_prev {
                                return bad(format!("input {p} outside layer {}", layer));
                            }
                            let y = self.wire(layer, j, map[*p]);
                            a[y] = ring.add(&a[y], &ring.from_constant(w)?);
                        }
                    }
                    map = (0..sums.len()).collect();
                }
                _ => return bad(format!("layer {} has the wrong gate type", layer + 1)),
            }
        }
        if map.len() != 1 {
            return bad("the top layer must be a single sum gate".into());
        }
        Ok(a)
    }
}

impl LayeredCircuit {
    /// Two-level target `Σ c_m · m` for a polynomial of degree at most 5.
    pub fn from_poly<R: Ring>(ring: &R, poly: &Poly<R::Elem>) -> Result<Self> {
        let n = poly.n();
        let mut prods = Vec::new();
        let mut sums = Vec::new();
        for (j, (e, c)) in poly.terms().enumerate() {
            let deg: u32 = e.iter().sum();
            if deg as usize > FAN_IN {
                return Err(Error::NotEmbeddable(format!("monomial of degree {deg} needs depth reduction")));
            }
            let mut inputs: Vec<usize> =
                e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
            if inputs.is_empty() {
                inputs.push(n);
            }
            prods.push(inputs);
            sums.push((j, ring.to_constant(c)));
        }
        Ok(LayeredCircuit { n, layers: vec![LayerGates::Products(prods), LayerGates::Sums(vec![sums])] })
    }

    /// Plain fan-in-2 circuit computing the same polynomial.
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut b = Builder::default();
        let mut prev: Vec<usize> = (0..self.n).map(|i| b.push(Gate::Var(i))).collect();
        prev.push(b.constant(Constant::int(1)));
        for (t, layer) in self.layers.iter().enumerate() {
            let oob = |p: usize| Error::Schema(format!("input {p} outside layer {}", t + 1));
            let mut next = Vec::new();
            match layer {
                LayerGates::Products(prods) => {
                    for inputs in prods {
                        let ids = inputs
                            .iter()
                            .map(|&p| prev.get(p).copied().ok_or_else(|| oob(p)))
                            .collect::<Result<Vec<_>>>()?;
                        next.push(match b.tree(ids, true) {
                            Some(g) => g,
                            None => b.constant(Constant::int(1)),
                        });
                    }
                }
                LayerGates::Sums(sums) => {
                    for inputs in sums {
                        let mut terms = Vec::with_capacity(inputs.len());
                        for (p, w) in inputs {
                            let src = *prev.get(*p).ok_or_else(|| oob(*p))?;
                            let c = b.constant(w.clone());
                            terms.push(b.mul(c, src));
                        }
                        next.push(match b.tree(terms, false) {
                            Some(g) => g,
                            None => b.constant(Constant::int(0)),
                        });
                    }
                }
            }
            prev = next;
        }
        if prev.len() != 1 {
            return Err(Error::Schema("layered circuit must end in a single gate".into()));
        }
        let out = prev[0];
        b.finish(self.n, out)
    }
}
