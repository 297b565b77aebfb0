//! Non-triviality witnesses: nonzero coefficient vectors that vanish on a
//! whole hitting set. Over a finite field these come from the exact kernel of
//! the projected evaluation matrix; over the integers from a collision search
//! for `{-1, 0, 1}` vectors in the kernel of `Γ`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{FieldElem, FieldSpec, Integers, Ring};
use crate::budget::{self, Budget};
use crate::error::{Error, Result};
use crate::hitting::HittingSet;
use crate::poly::{CoeffVector, MonomialOrder};

/// Dense evaluation matrix with columns indexed by the monomial order.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalMatrix<R: Ring> {
    ring: R,
    order: MonomialOrder,
    /// `(point, coordinate)` per row; the coordinate is 0 over the integers.
    labels: Vec<(usize, usize)>,
    rows: Vec<Vec<R::Elem>>,
}

impl<R: Ring> EvalMatrix<R> {
    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn rows(&self) -> &[Vec<R::Elem>] {
        &self.rows
    }

    pub fn label(&self, row: usize) -> (usize, usize) {
        self.labels[row]
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.order.len()
    }

    /// `M · z`.
    pub fn apply(&self, z: &CoeffVector<R::Elem>) -> Result<Vec<R::Elem>> {
        self.order.ensure_same(&z.order())?;
        Ok(self.rows.iter().map(|row| z.dot(&self.ring, row)).collect())
    }
}

fn check_columns(order: MonomialOrder, budget: &Budget) -> Result<()> {
    budget::check("dense matrix columns", order.size(), budget.dense_columns as u128)
}

/// Rows `Φ_i(eval(a))` over the prime field of the hitting set's field, one
/// per `(a, i)`.
pub fn eval_matrix_ff(hs: &HittingSet<FieldSpec>, budget: &Budget) -> Result<EvalMatrix<FieldSpec>> {
    check_columns(hs.order(), budget)?;
    let ext = hs.ring();
    let base = ext.base();
    let r = ext.r() as usize;
    let blocks: Vec<Vec<Vec<FieldElem>>> = (0..hs.len())
        .into_par_iter()
        .map(|a| {
            let ev = hs.eval_vector(a);
            (1..=r)
                .map(|i| {
                    ev.iter()
                        .map(|&v| base.from_u64(u64::from(ext.phi_project(v, i).expect("index in range"))))
                        .collect()
                })
                .collect()
        })
        .collect();
    let labels = (0..hs.len()).flat_map(|a| (1..=r).map(move |i| (a, i))).collect();
    Ok(EvalMatrix { ring: base, order: hs.order(), labels, rows: blocks.into_iter().flatten().collect() })
}

/// Rows `eval(a)` over the integers, one per point; this is the matrix of `Γ`.
pub fn eval_matrix_int(hs: &HittingSet<Integers>, budget: &Budget) -> Result<EvalMatrix<Integers>> {
    check_columns(hs.order(), budget)?;
    let rows = (0..hs.len()).map(|a| hs.eval_vector(a).to_vec()).collect();
    Ok(EvalMatrix { ring: Integers, order: hs.order(), labels: (0..hs.len()).map(|a| (a, 0)).collect(), rows })
}

/// Kernel of `M` by Gauss-Jordan elimination: one basis vector per free
/// column, with a 1 in that column.
pub fn kernel_basis_ff(m: &EvalMatrix<FieldSpec>) -> Vec<CoeffVector<FieldElem>> {
    let f = &m.ring;
    let cols = m.column_count();
    let mut rows: Vec<Vec<FieldElem>> = m.rows.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][c]).expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !f.is_zero(&row[c]) {
                let k = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(k, y));
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let is_pivot: Vec<bool> = (0..cols).map(|c| pivots.contains(&c)).collect();
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); cols];
            v[free] = f.one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[k][free]);
            }
            CoeffVector::from_dense(f, m.order, &v)
        })
        .collect()
}

/// A uniformly random nonzero combination of the basis vectors.
pub fn sample_kernel(field: &FieldSpec, basis: &[CoeffVector<FieldElem>], seed: u64) -> Result<CoeffVector<FieldElem>> {
    let first = basis.first().ok_or(Error::EmptyKernel)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coeffs: Vec<FieldElem> = basis.iter().map(|_| field.random(&mut rng)).collect();
        if coeffs.iter().all(|c| field.is_zero(c)) {
            continue;
        }
        let mut acc = CoeffVector::zero(first.order());
        for (c, b) in coeffs.iter().zip(basis) {
            if !field.is_zero(c) {
                let scaled = b.to_poly(field).scale(field, c);
                acc = acc.add(field, &CoeffVector::from_poly(&scaled, first.order())?)?;
            }
        }
        return Ok(acc);
    }
}

/// `Γ(z) = (<z, eval(a)> : a ∈ H)`.
pub fn gamma_map(z: &CoeffVector<BigInt>, hs: &HittingSet<Integers>) -> Vec<BigInt> {
    (0..hs.len()).map(|a| hs.value(a, z)).collect()
}

/// Whether `2^N > (2M + 1)^|H|` with `M = N B^d`, the condition under which
/// two distinct `{0,1}` vectors must share a `Γ` image.
pub fn pigeonhole_holds(hs: &HittingSet<Integers>) -> bool {
    let order = hs.order();
    let b = match hs.grid_bound() {
        Some(b) => BigInt::from(b),
        None => hs.points().iter().flatten().map(|x| x.abs()).max().unwrap_or_else(BigInt::one),
    };
    let m = BigInt::from(order.len()) * b.pow(order.d());
    let lhs = BigInt::one() << order.len();
    let rhs = (m * 2u32 + 1u32).pow(hs.len() as u32);
    lhs > rhs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelWitness {
    pub h: CoeffVector<BigInt>,
    pub pigeonhole: bool,
}

/// `digit(t, k)` in the balanced encoding 0 → 0, 1 → 1, 2 → -1, so that
/// index 0 is the zero vector.
fn ternary(mut t: u64, len: usize) -> Vec<i8> {
    (0..len)
        .map(|_| {
            let d = (t % 3) as i8;
            t /= 3;
            if d == 2 {
                -1
            } else {
                d
            }
        })
        .collect()
}

fn partial_gamma(columns: &[Vec<BigInt>], offset: usize, digits: &[i8]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); columns.first().map_or(0, Vec::len)];
    for (k, &d) in digits.iter().enumerate() {
        if d == 0 {
            continue;
        }
        for (x, v) in acc.iter_mut().zip(&columns[offset + k]) {
            if d > 0 {
                *x += v;
            } else {
                *x -= v;
            }
        }
    }
    acc
}

/// A nonzero `h ∈ {-1,0,1}^N` with `Γ(h) = 0`.
///
/// Such `h` are exactly the differences of two colliding `{0,1}` vectors. The
/// search splits the coordinates into a left block of `⌈N/2⌉` and a right
/// block, tabulates `Γ` on every ternary left vector and scans the right
/// vectors for `Γ_L(x) = -Γ_R(y)`. The first hit in scan order is returned,
/// independent of thread count, with its leading nonzero entry made positive.
pub fn siegel_search(hs: &HittingSet<Integers>, budget: &Budget) -> Result<SiegelWitness> {
    let order = hs.order();
    let n = order.len();
    let pigeonhole = pigeonhole_holds(hs);
    let left_len = n.div_ceil(2);
    let right_len = n - left_len;
    let left_size = 3u128.checked_pow(left_len as u32).unwrap_or(u128::MAX);
    let right_size = 3u128.checked_pow(right_len as u32).unwrap_or(u128::MAX);
    if left_size > budget.collision_entries as u128 || right_size > budget.enumeration as u128 {
        return Err(Error::WitnessNotFound { pigeonhole });
    }
    // columns[m] = (m(a) : a ∈ H)
    let columns: Vec<Vec<BigInt>> =
        (0..n).map(|m| (0..hs.len()).map(|a| hs.eval_vector(a)[m].clone()).collect()).collect();

    let left: Vec<Vec<BigInt>> =
        (0..left_size as u64).into_par_iter().map(|t| partial_gamma(&columns, 0, &ternary(t, left_len))).collect();
    let mut table: HashMap<&[BigInt], u64> = HashMap::with_capacity(left.len());
    let mut left_only = None;
    for (t, key) in left.iter().enumerate() {
        if t > 0 && left_only.is_none() && key.iter().all(Zero::is_zero) {
            left_only = Some(t as u64);
        }
        table.entry(key.as_slice()).or_insert(t as u64);
    }

    let hit = match left_only {
        Some(t) => Some((t, 0)),
        None => (1..right_size as u64).into_par_iter().find_map_first(|u| {
            let neg: Vec<BigInt> =
                partial_gamma(&columns, left_len, &ternary(u, right_len)).into_iter().map(|x| -x).collect();
            table.get(neg.as_slice()).map(|&t| (t, u))
        }),
    };
    let Some((t, u)) = hit else {
        return Err(Error::WitnessNotFound { pigeonhole });
    };
    let mut digits = ternary(t, left_len);
    digits.extend(ternary(u, right_len));
    // h and -h are both witnesses; report the one with a positive leading entry
    if digits.iter().find(|&&x| x != 0) == Some(&-1) {
        digits.iter_mut().for_each(|x| *x = -*x);
    }
    let dense: Vec<BigInt> = digits.into_iter().map(BigInt::from).collect();
    let h = CoeffVector::from_dense(&Integers, order, &dense);
    assert!(!h.is_zero() && gamma_map(&h, hs).iter().all(Zero::is_zero), "collision re-verification failed");
    Ok(SiegelWitness { h, pigeonhole })
}
