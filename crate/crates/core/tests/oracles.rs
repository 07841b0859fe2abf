//! Library results against independent oracles: brute-force enumeration,
//! closed forms, and small hand computations.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use cdg_factor::complexes::{expand, Window, WindowComplex};
use cdg_factor::dg_ring::{tensor, CdgRing, RingBuilder};
use cdg_factor::factorization::select_generators;
use cdg_factor::graded::{CoefficientRing, Polynomial};
use cdg_factor::matrix::{smith_normal_form, IntMatrix};
use cdg_factor::pd::{pd_obstruction_witness, PdOracle};
use cdg_factor::standard_rings::{c_even, c_even_with_cutoff, c_odd, c_tilde_even};
use common::{binom, brute_force_ranks, divided_power_ranks, gen, multinomial, relation};
use num_bigint::BigInt;

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn w(floor: i32) -> Window {
    Window::new(floor).unwrap()
}

#[test]
fn odd_block_ranks_match_enumeration() {
    let c = c_odd(-3).unwrap();
    let ranks = expand(&c.ring, w(-8)).unwrap().ranks();
    let oracle = brute_force_ranks(&[gen(-3), gen(-2)], -9);
    assert_eq!(ranks, oracle);
    for i in [0, -2, -3, -4, -5, -6, -7, -8] {
        assert_eq!(ranks[&i], 1, "degree {i}");
    }
    assert_eq!(ranks[&-1], 0);
}

#[test]
fn even_block_ranks_match_normal_form_count() {
    for (n, floor) in [(-2, -12), (-4, -12), (-6, -20)] {
        let c = c_even(n, floor).unwrap();
        let cutoff = c.ring.families()[0].cutoff();
        let ranks = expand(&c.ring, w(floor)).unwrap().ranks();
        assert_eq!(ranks, divided_power_ranks(n, cutoff, floor - 1), "n = {n}");
    }
    let ranks = expand(&c_even(-2, -12).unwrap().ring, w(-12))
        .unwrap()
        .ranks();
    assert!(ranks.values().all(|&r| r == 1));
}

#[test]
fn trivial_ring_is_z_in_degree_zero() {
    let ranks = expand(&Arc::new(CdgRing::integers()), w(-6))
        .unwrap()
        .ranks();
    for (i, r) in ranks {
        assert_eq!(r, usize::from(i == 0));
    }
}

#[test]
fn tensor_of_odd_blocks_matches_enumeration() {
    let c = c_odd(-3).unwrap().ring;
    let t = tensor(&[c.clone(), c]).unwrap();
    let ranks = expand(&t.ring, w(-12)).unwrap().ranks();
    let oracle = brute_force_ranks(&[gen(-3), gen(-2), gen(-3), gen(-2)], -13);
    assert_eq!(ranks, oracle);
    for inc in &t.inclusions {
        assert!(inc.check_dg().passed());
    }
}

#[test]
fn tensor_with_trivial_ring_is_isomorphic() {
    let c = c_even(-2, -10).unwrap().ring;
    let t = tensor(&[Arc::new(CdgRing::integers()), c.clone()]).unwrap();
    assert_eq!(t.ring.alphabet().len(), c.alphabet().len());
    assert_eq!(
        expand(&t.ring, w(-10)).unwrap().ranks(),
        expand(&c, w(-10)).unwrap().ranks()
    );
}

#[test]
fn rewriting_is_confluent() {
    let c = c_even_with_cutoff(-2, 10).unwrap();
    let r = &c.ring;
    for i in 1..=8usize {
        for j in 1..=(9 - i) {
            for k in 1..=(10 - i - j) {
                let (xi, xj, xk) = (c.member(i), c.member(j), c.member(k));
                let left = r.mul(&r.mul(&xi, &xj), &xk);
                let right = r.mul(&xi, &r.mul(&xj, &xk));
                let want = c
                    .member(i + j + k)
                    .scale_int(BigInt::from(multinomial(i as u32, j as u32, k as u32)));
                assert_eq!(left, want, "({i}·{j})·{k}");
                assert_eq!(right, want, "{i}·({j}·{k})");
            }
        }
    }
}

#[test]
fn rewriting_examples() {
    let c = c_even(-2, -12).unwrap();
    let r = &c.ring;
    assert_eq!(r.mul(&c.member(1), &c.member(1)), c.member(2).scale_int(2));
    assert_eq!(r.mul(&c.member(2), &c.member(3)), c.member(5).scale_int(10));
    assert_eq!(r.d(&c.member(4)), r.mul(&c.member(3), &c.y()));
    assert!(r.d(&r.mul(&c.member(3), &c.y())).is_zero());
}

#[test]
fn differential_of_relations_closed_form() {
    let r = c_tilde_even(-2, 10).unwrap();
    let y = r.gen("y").unwrap();
    for i in 1..=9usize {
        for j in 1..=(10 - i) {
            let lhs = r.d(&relation(&r, i, j));
            let rhs = (&relation(&r, i - 1, j) + &relation(&r, i, j - 1)).mul(&y);
            assert_eq!(lhs, rhs, "r({i},{j})");
        }
    }
    let d23 = r.d(&relation(&r, 2, 3));
    assert_eq!(d23, (&relation(&r, 1, 3) + &relation(&r, 2, 2)).mul(&y));
    assert!(r.d(&relation(&r, 1, 1)).is_zero());
    assert_eq!((binom(6, 4), binom(6, 3), binom(7, 4)), (15, 20, 35));
    assert_eq!(binom(6, 4) + binom(6, 3), binom(7, 4));
}

#[test]
fn odd_block_examples() {
    let c = c_odd(-3).unwrap();
    let r = &c.ring;
    let xy = r.mul(&c.x(), &c.y());
    assert_eq!(r.d(&xy), r.mul(&c.y(), &c.y()));
    let p = &Polynomial::integer(5) + &xy.scale_int(2);
    assert_eq!(c.augmentation.apply(&p), Polynomial::integer(5));
    assert!(c
        .augmentation
        .compose(&c.unit)
        .unwrap()
        .agrees_with(&cdg_factor::dg_ring::RingHom::identity(
            c.unit.source().clone()
        ))
        .is_empty());
}

#[test]
fn d_squared_detects_planted_defect() {
    let mut b = RingBuilder::new(CoefficientRing::Z);
    let x = b.var("x", -5);
    let y = b.var("y", -4);
    let z = b.var("z", -3);
    b.set_d(x, Polynomial::var(y));
    b.set_d(y, Polynomial::var(z));
    let report = b.build().unwrap().check_d_squared();
    assert!(!report.passed());
    assert_eq!(report.offenders.len(), 1);
    assert_eq!(report.offenders[0].at, "x");
    assert_eq!(report.offenders[0].residue, "z");
}

#[test]
fn small_snf_examples() {
    let s = smith_normal_form(&IntMatrix::identity(3));
    assert_eq!(s.invariants, vec![int(1); 3]);
    let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
    assert_eq!(s.invariants, vec![int(2), int(4)]);
    let s = smith_normal_form(&IntMatrix::zeros(2, 3));
    assert_eq!(s.rank, 0);
    assert!(s.invariants.is_empty() || s.invariants.iter().all(|v| *v == int(0)));
}

#[test]
fn multiplication_by_two_has_cokernel_z2() {
    let labels = BTreeMap::from([(-1, vec!["a".to_string()]), (0, vec!["b".to_string()])]);
    let d = BTreeMap::from([(-1, IntMatrix::from_rows(&[vec![2]]))]);
    let c = WindowComplex::new(-4, labels, d).unwrap();
    assert_eq!(c.cohomology(0).unwrap().to_string(), "Z/2");
    assert_eq!(c.cohomology(-1).unwrap().to_string(), "0");
}

#[test]
fn w_examples() {
    let odd = expand(&c_odd(-3).unwrap().ring, w(-8)).unwrap();
    let wq = odd.complex().w_quotient(-3).unwrap();
    assert_eq!(wq.rank, 1);
    assert_eq!(odd.complex().cocycles(-3).unwrap().cols(), 0);

    let even = expand(&c_even(-2, -12).unwrap().ring, w(-12)).unwrap();
    let c = even.complex();
    assert_eq!(c.w_quotient(-1).unwrap().rank, 0);
    assert_eq!(c.cocycles(-1).unwrap().cols(), 1);
    assert_eq!(c.cocycles(-2).unwrap().cols(), 0);
    assert_eq!(c.w_quotient(-2).unwrap().rank, 1);
}

#[test]
fn block_cohomology_is_z_in_degree_zero() {
    let cases = [
        (expand(&c_odd(-3).unwrap().ring, w(-8)).unwrap(), -7),
        (expand(&c_even(-2, -12).unwrap().ring, w(-12)).unwrap(), -11),
    ];
    for (exp, lo) in cases {
        let c = exp.complex();
        assert_eq!(c.cohomology(0).unwrap().to_string(), "Z");
        for i in lo..=-1 {
            assert!(c.cohomology(i).unwrap().is_zero(), "degree {i}");
        }
    }
}

#[test]
fn generator_selection_examples() {
    let c = c_even(-2, -12).unwrap();
    let exp = expand(&c.ring, w(-12)).unwrap();
    let s = select_generators(&exp, false).unwrap();
    assert_eq!(s.in_degree(-2), [c.member(1)]);
    assert!(s.in_degree(-1).is_empty());
    assert!(s.in_degree(-3).is_empty());
    assert_eq!(s.in_degree(-4), [c.member(2)]);

    let z = expand(&Arc::new(CdgRing::integers()), w(-8)).unwrap();
    assert!(select_generators(&z, false).unwrap().is_empty());

    let odd = c_odd(-1).unwrap();
    let exp = expand(&odd.ring, w(-6).with_cap(4)).unwrap();
    let s = select_generators(&exp, false).unwrap();
    assert_eq!(s.in_degree(-1)[0], odd.x());
    assert_eq!(
        s.in_degree(-1).len(),
        exp.complex().w_quotient(-1).unwrap().rank
    );
}

#[test]
fn gamma_examples() {
    let mut b = RingBuilder::new(CoefficientRing::Q);
    let x = b.var("x", -2);
    let q = b.build().unwrap();
    let a = Polynomial::var(x);
    let g = |k, p: &Polynomial| PdOracle::Char0.gamma(&q, k, p).unwrap().value;
    assert_eq!(g(0, &a), Polynomial::one());
    assert_eq!(
        g(2, &a),
        q.pow(&a, 2)
            .scale(&num_rational::BigRational::new(int(1), int(2)))
    );
    assert_eq!(g(3, &a.scale_int(2)), g(3, &a).scale_int(8));

    let c = c_even(-2, -12).unwrap();
    let dp = |k, i| {
        PdOracle::DpCanonical
            .gamma(&c.ring, k, &c.member(i))
            .unwrap()
    };
    for k in 1..=6 {
        assert_eq!(dp(k, 1).value, c.member(k as usize));
    }
    assert_eq!(dp(2, 2).value, c.member(4).scale_int(3));
    assert_eq!(dp(1, 5).value, c.member(5));
}

#[test]
fn power_identity_holds_for_canonical_gamma() {
    let c = c_even_with_cutoff(-2, 40).unwrap();
    for i in 1..=5usize {
        let a = c.member(i);
        for k in 0..=6u32 {
            let g = PdOracle::DpCanonical.gamma(&c.ring, k, &a).unwrap();
            assert!(!g.truncated);
            let lhs = g.value.scale_int(BigInt::from(common::factorial(k)));
            assert_eq!(lhs, c.ring.pow(&a, k), "k = {k}, x{i}");
        }
    }
}

#[test]
fn obstruction_examples() {
    let mut b = RingBuilder::new(CoefficientRing::Z);
    let x = b.var("x", -2);
    let zx = b.build().unwrap();
    let w = pd_obstruction_witness(&zx, &Polynomial::var(x), 2)
        .unwrap()
        .unwrap();
    assert_eq!(
        (w.k, w.monomial.as_str(), w.coefficient.as_str()),
        (2, "x^2", "1")
    );
    assert!(pd_obstruction_witness(&zx, &Polynomial::var(x), 1)
        .unwrap()
        .is_none());

    let c = c_even(-2, -12).unwrap();
    assert!(pd_obstruction_witness(&c.ring, &c.member(1), 2)
        .unwrap()
        .is_none());
}
