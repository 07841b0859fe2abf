//! Randomized algebraic and lattice properties.

use std::collections::BTreeMap;
use std::sync::Arc;

use cdg_factor::complexes::{check_quasi_iso, expand, ChainMapWindow, Window, WindowComplex};
use cdg_factor::dg_ring::{tensor, CdgRing, RingBuilder, RingHom};
use cdg_factor::graded::{CoefficientRing, Polynomial};
use cdg_factor::matrix::{determinant, lattice_contains, smith_normal_form, IntMatrix};
use cdg_factor::standard_rings::{c_even_with_cutoff, c_odd};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// `C_odd(-3) ⊗ C_even(-2; K=40) ⊗ C_odd(-1)`: odd, even and divided-power
/// generators together, with the cutoff far enough away that products of
/// the short monomials below never truncate.
fn mixed_ring() -> Arc<CdgRing> {
    let parts = [
        c_odd(-3).unwrap().ring,
        c_even_with_cutoff(-2, 40).unwrap().ring,
        c_odd(-1).unwrap().ring,
    ];
    tensor(&parts).unwrap().ring
}

/// Allowed generators for random monomials: skip divided-power members past
/// `x6` so that no product reaches the cutoff.
fn usable_vars(ring: &CdgRing) -> Vec<Polynomial> {
    ring.alphabet()
        .variables()
        .iter()
        .filter(|v| {
            v.name
                .strip_prefix("1.x")
                .and_then(|i| i.parse::<usize>().ok())
                .is_none_or(|i| i <= 6)
        })
        .map(|v| ring.gen(&v.name).unwrap())
        .collect()
}

/// A homogeneous term `c·g_1·…·g_r` built through the ring's own product.
fn term(ring: &CdgRing, vars: &[Polynomial], c: i64, picks: &[usize]) -> Polynomial {
    picks.iter().fold(Polynomial::integer(c), |acc, &k| {
        ring.mul(&acc, &vars[k % vars.len()])
    })
}

fn term_strategy() -> impl Strategy<Value = (i64, Vec<usize>)> {
    (-5i64..=5, prop::collection::vec(0usize..64, 0..4))
}

fn poly(ring: &CdgRing, vars: &[Polynomial], terms: &[(i64, Vec<usize>)]) -> Polynomial {
    let mut p = Polynomial::zero();
    for (c, picks) in terms {
        p += term(ring, vars, *c, picks);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn leibniz_rule(p in term_strategy(), q in prop::collection::vec(term_strategy(), 0..4)) {
        let ring = mixed_ring();
        let vars = usable_vars(&ring);
        let p = term(&ring, &vars, p.0, &p.1);
        let q = poly(&ring, &vars, &q);
        let lhs = ring.d(&ring.mul(&p, &q));
        let sign = if p.degree().is_some_and(|d| d % 2 != 0) { -1 } else { 1 };
        let rhs = &ring.mul(&ring.d(&p), &q) + &ring.mul(&p, &ring.d(&q)).scale_int(sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_vanishes(p in prop::collection::vec(term_strategy(), 0..5)) {
        let ring = mixed_ring();
        let vars = usable_vars(&ring);
        let p = poly(&ring, &vars, &p);
        prop_assert!(ring.d(&ring.d(&p)).is_zero());
    }

    #[test]
    fn graded_commutativity(p in term_strategy(), q in term_strategy()) {
        let ring = mixed_ring();
        let vars = usable_vars(&ring);
        let p = term(&ring, &vars, p.0, &p.1);
        let q = term(&ring, &vars, q.0, &q.1);
        let odd = |x: &Polynomial| x.degree().is_some_and(|d| d % 2 != 0);
        let sign = if odd(&p) && odd(&q) { -1 } else { 1 };
        prop_assert_eq!(ring.mul(&p, &q), ring.mul(&q, &p).scale_int(sign));
    }

    /// `x̄_i ↦ 2^i·x̄_i`, `y ↦ 2y` is a DG map compatible with the divided-power
    /// rewriting, so it must respect products and differentials.
    #[test]
    fn hom_respects_product_and_d(
        p in prop::collection::vec(term_strategy(), 0..4),
        q in prop::collection::vec(term_strategy(), 0..4),
    ) {
        let c = c_even_with_cutoff(-2, 40).unwrap().ring;
        let images = c
            .alphabet()
            .variables()
            .iter()
            .map(|v| {
                let g = c.gen(&v.name).unwrap();
                let i = v.name.strip_prefix('x').map_or(1, |s| s.parse::<u32>().unwrap());
                g.scale_int(BigInt::from(2).pow(i))
            })
            .collect();
        let phi = RingHom::new(c.clone(), c.clone(), images).unwrap();
        prop_assert!(phi.check_dg().passed());
        let vars: Vec<Polynomial> = ["x1", "x2", "x3", "y"].iter().map(|n| c.gen(n).unwrap()).collect();
        let p = poly(&c, &vars, &p);
        let q = poly(&c, &vars, &q);
        prop_assert_eq!(phi.apply(&c.mul(&p, &q)), c.mul(&phi.apply(&p), &phi.apply(&q)));
        prop_assert_eq!(phi.apply(&c.d(&p)), c.d(&phi.apply(&p)));
    }

    #[test]
    fn snf_round_trip(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-9i64..=9, 36)) {
        let entries: Vec<Vec<i64>> = (0..rows).map(|r| seed[r * 6..r * 6 + cols].to_vec()).collect();
        let a = IntMatrix::from_rows(&entries);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert!(determinant(&s.u).abs().is_one());
        prop_assert!(determinant(&s.v).abs().is_one());
        for k in 0..s.invariants.len() {
            prop_assert!(s.invariants[k].is_positive());
            if k + 1 < s.invariants.len() {
                prop_assert!((&s.invariants[k + 1] % &s.invariants[k]).is_zero());
            }
        }
    }

    #[test]
    fn cohomology_invariant_under_basis_permutation(seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let exp = expand(&torsion_ring(), Window::new(-10).unwrap()).unwrap();
        let c = exp.complex();
        let perms: BTreeMap<i32, Vec<usize>> = c
            .degrees()
            .map(|i| {
                let mut p: Vec<usize> = (0..c.rank(i)).collect();
                p.shuffle(&mut rng);
                (i, p)
            })
            .collect();
        let pm = |i: i32| {
            let p = &perms[&i];
            let mut m = IntMatrix::zeros(p.len(), p.len());
            for (k, &j) in p.iter().enumerate() {
                m[(j, k)] = BigInt::one();
            }
            m
        };
        let mut labels = BTreeMap::new();
        let mut ds = BTreeMap::new();
        for i in c.degrees() {
            let old = c.labels(i);
            labels.insert(i, perms[&i].iter().map(|&k| old[k].clone()).collect());
            if i < 0 {
                ds.insert(i, pm(i + 1).transpose().mul(c.d(i).unwrap()).mul(&pm(i)));
            }
        }
        let permuted = WindowComplex::new(c.floor(), labels, ds).unwrap();
        for i in c.exact_degrees() {
            prop_assert_eq!(c.cohomology(i).unwrap(), permuted.cohomology(i).unwrap());
        }
    }
}

/// `ℤ[x, y]` with `|x| = -3`, `dx = 2y`: cohomology with 2-torsion.
fn torsion_ring() -> Arc<CdgRing> {
    let mut b = RingBuilder::new(CoefficientRing::Z);
    let x = b.var("x", -3);
    let y = b.var("y", -2);
    b.set_d(x, Polynomial::var(y).scale_int(2));
    Arc::new(b.build().unwrap())
}

#[test]
fn torsion_ring_has_two_torsion() {
    let exp = expand(&torsion_ring(), Window::new(-10).unwrap()).unwrap();
    let h = exp.complex().cohomology(-2).unwrap();
    assert_eq!(h.to_string(), "Z/2");
}

#[test]
fn coboundaries_lie_in_cocycles() {
    for ring in [torsion_ring(), mixed_ring()] {
        let exp = expand(&ring, Window::new(-8).unwrap().with_cap(3)).unwrap();
        let c = exp.complex();
        for i in c.exact_degrees() {
            let z = c.cocycles(i).unwrap();
            let b = c.coboundaries(i).unwrap();
            assert!(lattice_contains(&z, &b), "degree {i}");
        }
    }
}

#[test]
fn tensor_ranks_are_associative_and_convolve() {
    let a = c_odd(-3).unwrap().ring;
    let b = c_even_with_cutoff(-2, 6).unwrap().ring;
    let c = c_odd(-5).unwrap().ring;
    let w = Window::new(-10).unwrap();
    let left = tensor(&[tensor(&[a.clone(), b.clone()]).unwrap().ring, c.clone()])
        .unwrap()
        .ring;
    let right = tensor(&[a.clone(), tensor(&[b.clone(), c.clone()]).unwrap().ring])
        .unwrap()
        .ring;
    let flat = tensor(&[a.clone(), b.clone(), c.clone()]).unwrap().ring;
    let rl = expand(&left, w).unwrap().ranks();
    assert_eq!(rl, expand(&right, w).unwrap().ranks());
    assert_eq!(rl, expand(&flat, w).unwrap().ranks());

    let lo = w.lowest();
    let ra = expand(&a, w).unwrap().ranks();
    let rb = expand(&b, w).unwrap().ranks();
    let rc = expand(&c, w).unwrap().ranks();
    let mut conv: BTreeMap<i32, usize> = (lo..=0).map(|i| (i, 0)).collect();
    for (&i, &x) in &ra {
        for (&j, &y) in &rb {
            for (&k, &z) in &rc {
                if i + j + k >= lo {
                    *conv.get_mut(&(i + j + k)).unwrap() += x * y * z;
                }
            }
        }
    }
    assert_eq!(rl, conv);
}

#[test]
fn homotopy_implies_quasi_isomorphism() {
    let w = Window::new(-10).unwrap();
    for block in [
        c_odd(-3).unwrap(),
        c_odd(-5).unwrap(),
        c_even_with_cutoff(-2, 6).unwrap(),
    ] {
        let cw = block.contraction(w).unwrap();
        assert!(cw.check().unwrap().passed());
        let c = cw.expansion.complex();
        let u = cw.scalars.complex();
        assert!(check_quasi_iso(&cw.projection, c, u).unwrap().passed());
        assert!(check_quasi_iso(&cw.inclusion, u, c).unwrap().passed());
    }
}

#[test]
fn identity_chain_map_is_quasi_isomorphism() {
    let exp = expand(&mixed_ring(), Window::new(-8).unwrap().with_cap(3)).unwrap();
    let id = ChainMapWindow::identity(exp.complex());
    assert!(check_quasi_iso(&id, exp.complex(), exp.complex())
        .unwrap()
        .passed());
}
