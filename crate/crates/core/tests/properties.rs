use forge_core::algebra::{Constant, FieldElem, FieldSpec, Integers, Ring};
use forge_core::circuit::{Circuit, Gate};
use forge_core::equation::{
    build_equation_ff, build_equation_int, crt_witness, ell_for, or_gadget_ff, or_gadget_int, VerdictInt,
};
use forge_core::hitting::HittingSet;
use forge_core::io::{from_json, to_canonical_json, CoeffVectorFile};
use forge_core::kernel::{eval_matrix_ff, gamma_map, kernel_basis_ff, sample_kernel, siegel_search};
use forge_core::poly::{expand, CoeffVector, MonomialOrder};
use forge_core::Budget;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::prime(5).unwrap(),
        FieldSpec::new(2, 4).unwrap(),
        FieldSpec::new(3, 2).unwrap(),
        FieldSpec::new(7, 2).unwrap(),
    ]
}

fn elem(f: &FieldSpec, v: u32) -> FieldElem {
    f.from_packed(v % f.q()).unwrap()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Circuits from a flat list of gate codes; references always point backwards.
fn circuit_from_codes(vars: usize, codes: &[(u8, usize, usize, i8)]) -> Circuit {
    let gates: Vec<Gate> = codes
        .iter()
        .enumerate()
        .map(|(i, &(op, a, b, c))| match (op % 4, i) {
            (_, 0) | (0, _) => Gate::Var(a % vars),
            (1, _) => Gate::Const(Constant::int(i64::from(c))),
            (2, _) => Gate::Add(a % i, b % i),
            _ => Gate::Mul(a % i, b % i),
        })
        .collect();
    let out = gates.len() - 1;
    Circuit::new(vars, gates, out).unwrap()
}

fn gate_codes() -> impl Strategy<Value = Vec<(u8, usize, usize, i8)>> {
    proptest::collection::vec((any::<u8>(), any::<usize>(), any::<usize>(), -2i8..=2), 1..8)
}

proptest! {
    #[test]
    fn field_axioms(k in 0usize..4, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[k];
        let (a, b, c) = (elem(f, a), elem(f, b), elem(f, c));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if a != f.zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.pow(a, u64::from(f.q() - 1)), f.one());
        }
    }

    #[test]
    fn circuit_eval_matches_expansion(codes in gate_codes(), x in proptest::collection::vec(-3i64..=3, 2)) {
        let c = circuit_from_codes(2, &codes);
        let p = expand(&c, &Integers, 1 << 16).unwrap();
        let x = ints(&x);
        prop_assert_eq!(c.eval(&Integers, &x).unwrap(), p.eval(&Integers, &x));
        prop_assert!(u64::from(p.degree().unwrap_or(0)) <= c.degree_bound());
    }

    #[test]
    fn index_bijection(n in 1usize..4, d in 0u32..6) {
        let o = MonomialOrder::new(n, d);
        for i in 0..o.len() {
            prop_assert_eq!(o.index(&o.exponents(i)).unwrap(), i);
        }
    }

    #[test]
    fn coeff_file_round_trip(k in 0usize..4, vals in proptest::collection::vec(any::<u32>(), 10)) {
        let f = &fields()[k];
        let o = MonomialOrder::new(3, 2);
        let dense: Vec<FieldElem> = vals.iter().map(|&v| elem(f, v)).collect();
        let v = CoeffVector::from_dense(f, o, &dense);
        let text = to_canonical_json(&CoeffVectorFile::new(f, &v));
        prop_assert_eq!(from_json::<CoeffVectorFile>(&text).unwrap().decode(f).unwrap(), v);
    }

    #[test]
    fn or_gadgets_detect_zero(vals in proptest::collection::vec(-1i64..=1, 6), p in prop::sample::select(vec![2u32, 3, 5])) {
        let o = MonomialOrder::new(2, 2);
        let z = CoeffVector::from_dense(&Integers, o, &ints(&vals));
        prop_assert_eq!(or_gadget_int(&z).unwrap().is_zero(), z.is_zero());
        let f = FieldSpec::prime(p).unwrap();
        let zf = CoeffVector::from_dense(&f, o, &vals.iter().map(|&v| f.from_i64(v)).collect::<Vec<_>>());
        prop_assert_eq!(f.is_zero(&or_gadget_ff(&f, &zf)), zf.is_zero());
    }

    #[test]
    fn crt_detects_every_small_value(v in 1i64..100_000, extra in 0i64..100_000, neg in any::<bool>()) {
        let m = BigInt::from(v + extra);
        let value = BigInt::from(if neg { -v } else { v });
        let r = crt_witness(&value, &m).unwrap();
        prop_assert!(r >= 2 && r <= ell_for(&m).pow(2));
        prop_assert!(!(value % BigInt::from(r)).is_zero());
    }

    #[test]
    fn int_verdict_matches_exact(
        vals in proptest::collection::vec(-1i64..=1, 3),
        pts in proptest::collection::vec(1i64..=2, 0..3),
    ) {
        let b = Budget::default();
        let o = MonomialOrder::new(1, 2);
        let points = pts.iter().map(|&x| vec![BigInt::from(x)]).collect();
        let eq = build_equation_int(HittingSet::new(Integers, o, points, Some(2)).unwrap(), &b).unwrap();
        let z = CoeffVector::from_dense(&Integers, o, &ints(&vals));
        let verdict = eq.verdict(&z).unwrap();
        prop_assert_eq!(eq.eval_exact(&z, &b).unwrap().is_zero(), verdict != VerdictInt::Nonzero);
        // a {-1,0,1} polynomial that vanishes on H is never annihilated beyond OR
        if !z.is_zero() && eq.hitting_set().vanishes_on(&z) {
            prop_assert_eq!(verdict, VerdictInt::Nonzero);
        }
    }

    #[test]
    fn kernel_samples_vanish_and_equation_is_one(
        raw in proptest::collection::vec((any::<u32>(), any::<u32>()), 0..3),
        seed in any::<u64>(),
    ) {
        let b = Budget::default();
        let k = FieldSpec::new(2, 4).unwrap();
        let base = k.base();
        let points = raw.iter().map(|&(x, y)| vec![elem(&k, x), elem(&k, y)]).collect();
        let hs = HittingSet::new(k, MonomialOrder::new(2, 3), points, None).unwrap();
        let basis = kernel_basis_ff(&eval_matrix_ff(&hs, &b).unwrap());
        prop_assert!(basis.len() + 4 * hs.len() >= 10);
        let g = sample_kernel(&base, &basis, seed).unwrap();
        prop_assert!(!g.is_zero() && hs.vanishes_on(&g));
        let eq = build_equation_ff(&base, hs).unwrap();
        prop_assert_eq!(eq.eval(&g).unwrap().0, base.one());
    }

    #[test]
    fn gamma_is_additive(
        u in proptest::collection::vec(-5i64..=5, 6),
        v in proptest::collection::vec(-5i64..=5, 6),
        pts in proptest::collection::vec((1i64..=9, 1i64..=9), 0..4),
    ) {
        let o = MonomialOrder::new(2, 2);
        let points = pts.iter().map(|&(x, y)| ints(&[x, y])).collect();
        let hs = HittingSet::new(Integers, o, points, Some(9)).unwrap();
        let (u, v) = (CoeffVector::from_dense(&Integers, o, &ints(&u)), CoeffVector::from_dense(&Integers, o, &ints(&v)));
        let sum: Vec<BigInt> = gamma_map(&u, &hs).into_iter().zip(gamma_map(&v, &hs)).map(|(a, b)| a + b).collect();
        prop_assert_eq!(gamma_map(&u.add(&Integers, &v).unwrap(), &hs), sum);
    }

    #[test]
    fn siegel_witnesses_are_valid(pts in proptest::collection::vec((1i64..=4, 1i64..=4), 0..3)) {
        let o = MonomialOrder::new(2, 2);
        let points = pts.iter().map(|&(x, y)| ints(&[x, y])).collect();
        let hs = HittingSet::new(Integers, o, points, Some(4)).unwrap();
        if let Ok(w) = siegel_search(&hs, &Budget::default()) {
            prop_assert!(!w.h.is_zero() && w.h.is_delta());
            prop_assert!(gamma_map(&w.h, &hs).iter().all(Zero::is_zero));
        }
    }
}

#[test]
fn projection_is_injective() {
    for f in fields() {
        let mut seen = std::collections::HashSet::new();
        for a in f.elements() {
            assert!(seen.insert(f.phi(a)));
        }
    }
}
