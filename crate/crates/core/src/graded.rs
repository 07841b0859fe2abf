//! Sparse polynomials over strongly commutative graded variables.
//!
//! A variable of odd degree anticommutes with every other odd variable and
//! squares to zero; even variables commute with everything. Monomials are
//! stored with factors sorted by variable id, and every product is brought
//! back to that order with the Koszul sign picked up along the way.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

/// Ring of coefficients a presentation is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    Z,
    Q,
}

/// A variable handle: a globally ordered id together with its degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    id: u32,
    degree: i32,
}

impl Var {
    pub const fn new(id: u32, degree: i32) -> Self {
        Var { id, degree }
    }

    pub fn id(self) -> u32 {
        self.id
    }

    pub fn degree(self) -> i32 {
        self.degree
    }

    pub fn is_odd(self) -> bool {
        self.degree % 2 != 0
    }
}

/// A product of variables with positive exponents, sorted by variable id.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

/// Sorts `factors` into canonical order.
///
/// Returns the canonical monomial and the Koszul sign of the permutation, or
/// sign `0` when an odd variable occurs with total exponent at least two.
pub fn normalize<I>(factors: I) -> (Monomial, i8)
where
    I: IntoIterator<Item = (Var, u32)>,
{
    let mut fs: Vec<(Var, u32)> = factors.into_iter().filter(|&(_, e)| e > 0).collect();
    let mut sign = 1i8;
    // insertion sort; only transpositions of two odd-degree odd-power blocks flip the sign
    for i in 1..fs.len() {
        let mut j = i;
        while j > 0 && fs[j - 1].0.id > fs[j].0.id {
            let (a, ea) = fs[j - 1];
            let (b, eb) = fs[j];
            if a.is_odd() && b.is_odd() && ea % 2 == 1 && eb % 2 == 1 {
                sign = -sign;
            }
            fs.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut out: Vec<(Var, u32)> = Vec::with_capacity(fs.len());
    for (v, e) in fs {
        match out.last_mut() {
            Some((w, f)) if w.id == v.id => *f += e,
            _ => out.push((v, e)),
        }
    }
    if out.iter().any(|&(v, e)| v.is_odd() && e >= 2) {
        return (Monomial::one(), 0);
    }
    (Monomial { factors: out }, sign)
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn power(v: Var, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: vec![(v, e)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> i32 {
        self.factors.iter().map(|&(v, e)| v.degree * e as i32).sum()
    }

    pub fn is_odd(&self) -> bool {
        self.degree() % 2 != 0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .iter()
            .find(|(w, _)| w.id == v.id)
            .map_or(0, |&(_, e)| e)
    }

    /// Product `self · other` in canonical form with its sign (`0` if it vanishes).
    pub fn mul(&self, other: &Monomial) -> (Monomial, i8) {
        if self.is_one() {
            return (other.clone(), 1);
        }
        if other.is_one() {
            return (self.clone(), 1);
        }
        // merge walk: every odd factor of `other` that jumps over odd factors of
        // `self` contributes one sign flip per such factor
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut sign = 1i8;
        let mut odd_remaining: u32 = self
            .factors
            .iter()
            .filter(|(v, e)| v.is_odd() && e % 2 == 1)
            .count() as u32;
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            let take_left = match (self.factors.get(i), other.factors.get(j)) {
                (Some(a), Some(b)) => {
                    if a.0.id == b.0.id {
                        let v = a.0;
                        if v.is_odd() {
                            return (Monomial::one(), 0);
                        }
                        out.push((v, a.1 + b.1));
                        i += 1;
                        j += 1;
                        continue;
                    }
                    a.0.id < b.0.id
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!(),
            };
            if take_left {
                let (v, e) = self.factors[i];
                if v.is_odd() && e % 2 == 1 {
                    odd_remaining -= 1;
                }
                out.push((v, e));
                i += 1;
            } else {
                let (v, e) = other.factors[j];
                if v.is_odd() && e % 2 == 1 && odd_remaining % 2 == 1 {
                    sign = -sign;
                }
                out.push((v, e));
                j += 1;
            }
        }
        (Monomial { factors: out }, sign)
    }

    /// Applies `f` to every variable and renormalizes.
    pub fn map_vars(&self, mut f: impl FnMut(Var) -> Var) -> (Monomial, i8) {
        normalize(self.factors.iter().map(|&(v, e)| (f(v), e)))
    }
}

/// A finite sum of monomials with nonzero exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn integer(c: i64) -> Self {
        Polynomial::constant(Coeff::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Monomial::var(v), Coeff::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Polynomial::term(m, Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: impl Into<BigInt>) -> Polynomial {
        self.scale(&Coeff::from_integer(c.into()))
    }

    /// Free graded-commutative product (no relations beyond strong commutativity).
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                let (mn, s) = m.mul(n);
                match s {
                    0 => {}
                    1 => out.add_term(mn, a * b),
                    _ => out.add_term(mn, -(a * b)),
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Degree of a nonzero homogeneous polynomial; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<i32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// True when every term has degree `d` (vacuously for zero).
    pub fn is_homogeneous_of(&self, d: i32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Monomial) -> Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out += f(m).scale(c);
        }
        out
    }

    /// Renames variables through `f` (sign-correcting if the order changes).
    pub fn map_vars(&self, mut f: impl FnMut(Var) -> Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (n, s) = m.map_vars(&mut f);
            match s {
                0 => {}
                1 => out.add_term(n, c.clone()),
                _ => out.add_term(n, -c.clone()),
            }
        }
        out
    }
}

impl std::ops::AddAssign<Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl std::ops::AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += rhs;
        self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

/// A named graded variable as it appears in documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub degree: i32,
}

impl Variable {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Variable {
            name: name.into(),
            degree,
        }
    }
}

/// One entry of the external term-list format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: String,
    pub monomial: Vec<(String, u32)>,
}

/// Variable names and degrees, indexed by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    vars: Vec<Variable>,
    index: BTreeMap<String, u32>,
}

impl Alphabet {
    pub fn new(vars: Vec<Variable>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, v) in vars.iter().enumerate() {
            if v.name.is_empty() {
                return Err(Error::InvalidRing("empty variable name".into()));
            }
            if index.insert(v.name.clone(), i as u32).is_some() {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Alphabet { vars, index })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| Var::new(i as u32, v.degree))
    }

    pub fn get(&self, name: &str) -> Option<Var> {
        self.index
            .get(name)
            .map(|&id| Var::new(id, self.vars[id as usize].degree))
    }

    pub fn lookup(&self, name: &str) -> Result<Var> {
        self.get(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, id: u32) -> Var {
        Var::new(id, self.vars[id as usize].degree)
    }

    pub fn name(&self, v: Var) -> &str {
        &self.vars[v.id as usize].name
    }

    /// Parses a term list, applying sign normalization.
    pub fn parse_terms(&self, terms: &[Term], ring: CoefficientRing) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for t in terms {
            let c = parse_coeff(&t.coeff, ring)?;
            let mut factors = Vec::with_capacity(t.monomial.len());
            let mut totals: BTreeMap<u32, u32> = BTreeMap::new();
            for (name, e) in &t.monomial {
                let v = self.lookup(name)?;
                if *e == 0 {
                    return Err(Error::ZeroExponent(name.clone()));
                }
                let tot = totals.entry(v.id).or_default();
                *tot += e;
                if v.is_odd() && *tot >= 2 {
                    return Err(Error::OddExponent {
                        name: name.clone(),
                        exponent: *tot,
                    });
                }
                factors.push((v, *e));
            }
            let (m, s) = normalize(factors);
            debug_assert!(s != 0);
            out.add_term(m, if s < 0 { -c } else { c });
        }
        Ok(out)
    }

    pub fn format_terms(&self, p: &Polynomial) -> Vec<Term> {
        p.terms()
            .map(|(m, c)| Term {
                coeff: format_coeff(c),
                monomial: m
                    .factors()
                    .iter()
                    .map(|&(v, e)| (self.name(v).to_string(), e))
                    .collect(),
            })
            .collect()
    }

    pub fn display_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        m.factors()
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    self.name(v).to_string()
                } else {
                    format!("{}^{}", self.name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Human-readable rendering such as `2*x1 - x2*y + 3`.
    pub fn display(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&format_coeff(&a));
            } else if a.is_one() {
                s.push_str(&self.display_monomial(m));
            } else {
                s.push_str(&format!(
                    "{}*{}",
                    format_coeff(&a),
                    self.display_monomial(m)
                ));
            }
        }
        s
    }
}

pub fn parse_coeff(s: &str, ring: CoefficientRing) -> Result<Coeff> {
    let bad = || Error::BadCoefficient(s.to_string());
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(bad());
    }
    let int = |x: &str| -> Result<BigInt> {
        let digits = x.strip_prefix('-').unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(x).map_err(|_| bad())
    };
    match t.split_once('/') {
        None => Ok(Coeff::from_integer(int(t)?)),
        Some((n, d)) => {
            if ring == CoefficientRing::Z {
                return Err(Error::BadCoefficient(format!(
                    "{s} (fractions need coefficients \"Q\")"
                )));
            }
            let d = int(d)?;
            if d.is_zero() || d.is_negative() {
                return Err(bad());
            }
            Ok(Coeff::new(int(n)?, d))
        }
    }
}

pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Z => f.write_str("Z"),
            CoefficientRing::Q => f.write_str("Q"),
        }
    }
}
