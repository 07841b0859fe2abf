//! Independent oracles: brute-force enumeration and closed-form counts that do
//! not go through the library's expansion or rewriting code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use cdg_factor::dg_ring::CdgRing;
use cdg_factor::graded::Polynomial;
use num_bigint::BigInt;

/// A generator as seen by the enumeration oracle.
#[derive(Clone, Copy, Debug)]
pub struct Gen {
    pub degree: i32,
    /// Largest exponent allowed (1 for odd generators, the cap for degree 0).
    pub max_exp: Option<u32>,
}

pub fn gen(degree: i32) -> Gen {
    Gen {
        degree,
        max_exp: if degree % 2 != 0 { Some(1) } else { None },
    }
}

pub fn capped(degree: i32, cap: u32) -> Gen {
    Gen {
        degree,
        max_exp: Some(cap),
    }
}

/// Number of monomials in each degree of `[lo, 0]`, by exhaustive search over
/// exponent vectors.
pub fn brute_force_ranks(gens: &[Gen], lo: i32) -> BTreeMap<i32, usize> {
    let mut out: BTreeMap<i32, usize> = (lo..=0).map(|i| (i, 0)).collect();
    fn go(gens: &[Gen], k: usize, deg: i32, lo: i32, out: &mut BTreeMap<i32, usize>) {
        if k == gens.len() {
            *out.get_mut(&deg).unwrap() += 1;
            return;
        }
        let g = gens[k];
        let mut e = 0u32;
        loop {
            let d = deg + g.degree * e as i32;
            if d < lo || g.max_exp.is_some_and(|m| e > m) {
                break;
            }
            go(gens, k + 1, d, lo, out);
            if g.degree == 0 && g.max_exp.is_none() {
                panic!("uncapped degree-0 generator");
            }
            e += 1;
        }
    }
    go(gens, 0, 0, lo, &mut out);
    out
}

/// Normal-form count for a divided-power block: monomials `x_i^a·y^b` with
/// at most one family member (`i` in `1..=k`, `a ≤ 1`) and `b ≤ 1`.
pub fn divided_power_ranks(n: i32, k: usize, lo: i32) -> BTreeMap<i32, usize> {
    let mut out: BTreeMap<i32, usize> = (lo..=0).map(|i| (i, 0)).collect();
    for i in 0..=k {
        for b in 0..=1 {
            let d = n * i as i32 + (n + 1) * b;
            if d >= lo {
                *out.get_mut(&d).unwrap() += 1;
            }
        }
    }
    out
}

pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

pub fn binom(n: u32, k: u32) -> u128 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn multinomial(i: u32, j: u32, k: u32) -> u128 {
    factorial(i + j + k) / (factorial(i) * factorial(j) * factorial(k))
}

pub fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `r_{i,j} = x_i·x_j - binom(i+j, j)·x_{i+j}` in a free ring with variables
/// `x1, x2, …`, built by hand with `x_0 = 1`.
pub fn relation(r: &CdgRing, i: usize, j: usize) -> Polynomial {
    let x = |k: usize| {
        if k == 0 {
            Polynomial::one()
        } else {
            r.gen(&format!("x{k}")).unwrap()
        }
    };
    &x(i).mul(&x(j)) - &x(i + j).scale_int(BigInt::from(binom((i + j) as u32, j as u32)))
}
