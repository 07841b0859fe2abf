//! Presentations of commutative DG rings and their homomorphisms.
//!
//! A [`CdgRing`] is a graded polynomial ring on finitely many nonpositive
//! variables, a differential given on generators, and optionally some
//! divided-power families `x_i·x_j = binom(i+j, j)·x_{i+j}` by which the
//! polynomial ring is divided. Elements are kept in normal form with respect
//! to those relations.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{Alphabet, Coeff, CoefficientRing, Monomial, Polynomial, Var, Variable};
use crate::util::binomial;

/// The members `x_1, …, x_K` of one divided-power family, with
/// `deg(x_i) = step·i`, and an optional companion odd variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividedPowerFamily {
    pub name: String,
    pub step: i32,
    members: Vec<Var>,
    companion: Option<Var>,
}

impl DividedPowerFamily {
    pub fn new(
        name: impl Into<String>,
        step: i32,
        members: Vec<Var>,
        companion: Option<Var>,
    ) -> Result<Self> {
        let name = name.into();
        if step > -2 || step % 2 != 0 {
            return Err(Error::InvalidRing(format!(
                "family {name}: step {step} must be even and at most -2"
            )));
        }
        for (k, v) in members.iter().enumerate() {
            let i = k as i32 + 1;
            if v.degree() != step * i {
                return Err(Error::InvalidRing(format!(
                    "family {name}: member {i} has degree {} instead of {}",
                    v.degree(),
                    step * i
                )));
            }
            if k > 0 && members[k - 1].id() >= v.id() {
                return Err(Error::InvalidRing(format!(
                    "family {name}: members must be in increasing variable order"
                )));
            }
        }
        if let Some(y) = companion {
            if y.degree() != step + 1 {
                return Err(Error::InvalidRing(format!(
                    "family {name}: companion has degree {} instead of {}",
                    y.degree(),
                    step + 1
                )));
            }
        }
        Ok(DividedPowerFamily {
            name,
            step,
            members,
            companion,
        })
    }

    /// Largest index `K` with `x_K` present.
    pub fn cutoff(&self) -> usize {
        self.members.len()
    }

    /// `x_i` for `1 ≤ i ≤ K`.
    pub fn member(&self, i: usize) -> Option<Var> {
        if i == 0 {
            return None;
        }
        self.members.get(i - 1).copied()
    }

    pub fn members(&self) -> &[Var] {
        &self.members
    }

    pub fn companion(&self) -> Option<Var> {
        self.companion
    }

    /// `x_i` as a polynomial, with `x_0 = 1` and `0` past the cutoff.
    pub fn element(&self, i: usize) -> Polynomial {
        if i == 0 {
            return Polynomial::one();
        }
        self.member(i)
            .map_or_else(Polynomial::zero, Polynomial::var)
    }

    fn map_vars(&self, f: impl Fn(Var) -> Var, prefix: &str) -> Result<Self> {
        DividedPowerFamily::new(
            format!("{prefix}{}", self.name),
            self.step,
            self.members.iter().map(|&v| f(v)).collect(),
            self.companion.map(&f),
        )
    }
}

/// A presentation of a commutative DG ring.
#[derive(Clone, Debug)]
pub struct CdgRing {
    coefficients: CoefficientRing,
    alphabet: Alphabet,
    differential: Vec<Polynomial>,
    families: Vec<DividedPowerFamily>,
    // var id -> (family index, member index i)
    family_index: BTreeMap<u32, (usize, usize)>,
}

/// Incremental construction of a [`CdgRing`].
#[derive(Debug)]
pub struct RingBuilder {
    coefficients: CoefficientRing,
    vars: Vec<Variable>,
    differential: BTreeMap<u32, Polynomial>,
    families: Vec<DividedPowerFamily>,
}

impl RingBuilder {
    pub fn new(coefficients: CoefficientRing) -> Self {
        RingBuilder {
            coefficients,
            vars: Vec::new(),
            differential: BTreeMap::new(),
            families: Vec::new(),
        }
    }

    pub fn var(&mut self, name: impl Into<String>, degree: i32) -> Var {
        let id = self.vars.len() as u32;
        self.vars.push(Variable::new(name, degree));
        Var::new(id, degree)
    }

    pub fn set_d(&mut self, v: Var, image: Polynomial) -> &mut Self {
        self.differential.insert(v.id(), image);
        self
    }

    pub fn family(&mut self, family: DividedPowerFamily) -> &mut Self {
        self.families.push(family);
        self
    }

    pub fn build(self) -> Result<CdgRing> {
        let alphabet = Alphabet::new(self.vars)?;
        let mut diff = vec![Polynomial::zero(); alphabet.len()];
        for (id, p) in self.differential {
            diff[id as usize] = p;
        }
        CdgRing::new(self.coefficients, alphabet, diff, self.families)
    }
}

impl CdgRing {
    pub fn new(
        coefficients: CoefficientRing,
        alphabet: Alphabet,
        differential: Vec<Polynomial>,
        families: Vec<DividedPowerFamily>,
    ) -> Result<Self> {
        if differential.len() != alphabet.len() {
            return Err(Error::InvalidRing(
                "differential table does not match the variables".into(),
            ));
        }
        for v in alphabet.vars() {
            if v.degree() > 0 {
                return Err(Error::InvalidRing(format!(
                    "variable {} has positive degree {}",
                    alphabet.name(v),
                    v.degree()
                )));
            }
        }
        let mut family_index = BTreeMap::new();
        for (f, fam) in families.iter().enumerate() {
            for (k, &m) in fam.members.iter().enumerate() {
                if m.id() as usize >= alphabet.len() || alphabet.var(m.id()) != m {
                    return Err(Error::InvalidRing(format!(
                        "family {} refers to an unknown variable",
                        fam.name
                    )));
                }
                if family_index.insert(m.id(), (f, k + 1)).is_some() {
                    return Err(Error::InvalidRing(format!(
                        "variable {} belongs to two families",
                        alphabet.name(m)
                    )));
                }
            }
            if let Some(y) = fam.companion {
                if y.id() as usize >= alphabet.len() || alphabet.var(y.id()) != y {
                    return Err(Error::InvalidRing(format!(
                        "family {} has an unknown companion",
                        fam.name
                    )));
                }
            }
        }
        let mut ring = CdgRing {
            coefficients,
            alphabet,
            differential: Vec::new(),
            families,
            family_index,
        };
        let mut diff = Vec::with_capacity(differential.len());
        for (v, p) in ring.alphabet.vars().zip(differential) {
            ring.check_element(&p)?;
            if !p.is_homogeneous_of(v.degree() + 1) {
                return Err(Error::InvalidRing(format!(
                    "d({}) = {} is not homogeneous of degree {}",
                    ring.alphabet.name(v),
                    ring.alphabet.display(&p),
                    v.degree() + 1
                )));
            }
            diff.push(ring.reduce(&p));
        }
        ring.differential = diff;
        Ok(ring)
    }

    /// The ring `ℤ` (or `ℚ`) with no variables.
    pub fn scalars(coefficients: CoefficientRing) -> Self {
        CdgRing {
            coefficients,
            alphabet: Alphabet::default(),
            differential: Vec::new(),
            families: Vec::new(),
            family_index: BTreeMap::new(),
        }
    }

    pub fn integers() -> Self {
        CdgRing::scalars(CoefficientRing::Z)
    }

    pub fn coefficients(&self) -> CoefficientRing {
        self.coefficients
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn families(&self) -> &[DividedPowerFamily] {
        &self.families
    }

    pub fn family_of(&self, v: Var) -> Option<(&DividedPowerFamily, usize)> {
        self.family_index
            .get(&v.id())
            .map(|&(f, i)| (&self.families[f], i))
    }

    pub fn var(&self, name: &str) -> Result<Var> {
        self.alphabet.lookup(name)
    }

    pub fn gen(&self, name: &str) -> Result<Polynomial> {
        Ok(Polynomial::var(self.var(name)?))
    }

    pub fn display(&self, p: &Polynomial) -> String {
        self.alphabet.display(p)
    }

    /// Image of a generator under the differential.
    pub fn d_gen(&self, v: Var) -> &Polynomial {
        &self.differential[v.id() as usize]
    }

    fn check_element(&self, p: &Polynomial) -> Result<()> {
        for (m, _) in p.terms() {
            for &(v, _) in m.factors() {
                if v.id() as usize >= self.alphabet.len() || self.alphabet.var(v.id()) != v {
                    return Err(Error::InvalidRing(format!(
                        "element refers to variable #{} outside the ring",
                        v.id()
                    )));
                }
            }
        }
        if self.coefficients == CoefficientRing::Z && !p.is_integral() {
            return Err(Error::InvalidRing(
                "non-integral coefficient in a ring over Z".into(),
            ));
        }
        Ok(())
    }

    /// Rewrites one monomial to normal form. Returns the coefficient factor,
    /// the normal monomial, and whether a family index ran past its cutoff
    /// (in which case the coefficient is zero).
    fn reduce_monomial(&self, m: &Monomial) -> (BigInt, Monomial, bool) {
        if self.families.is_empty() {
            return (BigInt::one(), m.clone(), false);
        }
        let mut rest: Vec<(Var, u32)> = Vec::with_capacity(m.factors().len());
        // per family: running index of the leftmost-pair fold
        let mut acc: BTreeMap<usize, usize> = BTreeMap::new();
        let mut coeff = BigInt::one();
        let mut touched = false;
        for &(v, e) in m.factors() {
            match self.family_index.get(&v.id()) {
                None => rest.push((v, e)),
                Some(&(f, i)) => {
                    for _ in 0..e {
                        let a = acc.entry(f).or_insert(0);
                        if *a > 0 {
                            touched = true;
                            coeff *= binomial(*a + i, i);
                        }
                        *a += i;
                    }
                }
            }
        }
        if !touched {
            return (BigInt::one(), m.clone(), false);
        }
        for (f, a) in acc {
            match self.families[f].member(a) {
                Some(x) => rest.push((x, 1)),
                None => return (BigInt::from(0), Monomial::one(), true),
            }
        }
        let (n, s) = crate::graded::normalize(rest);
        debug_assert_eq!(s, 1, "family members are even");
        (coeff, n, false)
    }

    /// Normal form modulo the divided-power relations, reporting whether any
    /// term was dropped because its index exceeded a family cutoff.
    pub fn reduce_tracked(&self, p: &Polynomial) -> (Polynomial, bool) {
        if self.families.is_empty() {
            return (p.clone(), false);
        }
        let mut out = Polynomial::zero();
        let mut truncated = false;
        for (m, c) in p.terms() {
            let (k, n, t) = self.reduce_monomial(m);
            truncated |= t;
            if !t {
                out.add_term(n, c * Coeff::from_integer(k));
            }
        }
        (out, truncated)
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        self.reduce_tracked(p).0
    }

    pub fn mul(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        self.reduce(&p.mul(q))
    }

    pub fn pow(&self, p: &Polynomial, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..k {
            acc = self.mul(&acc, p);
        }
        acc
    }

    /// The derivation determined by the generator table (graded Leibniz rule).
    pub fn d(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out += self.d_monomial_free(m).scale(c);
        }
        self.reduce(&out)
    }

    pub fn d_monomial(&self, m: &Monomial) -> Polynomial {
        self.reduce(&self.d_monomial_free(m))
    }

    fn d_monomial_free(&self, m: &Monomial) -> Polynomial {
        let fs = m.factors();
        let mut out = Polynomial::zero();
        let mut prefix_degree = 0i32;
        for (j, &(v, e)) in fs.iter().enumerate() {
            let dv = &self.differential[v.id() as usize];
            if !dv.is_zero() {
                // d(v^e) = e·v^(e-1)·dv for even v; odd v has e = 1
                let left =
                    Polynomial::monomial(crate::graded::normalize(fs[..j].iter().copied()).0);
                let right = Polynomial::monomial(
                    crate::graded::normalize(
                        std::iter::once((v, e - 1)).chain(fs[j + 1..].iter().copied()),
                    )
                    .0,
                );
                let mut term = left.mul(&dv.scale_int(e)).mul(&right);
                if prefix_degree % 2 != 0 {
                    term = -term;
                }
                out += term;
            }
            prefix_degree += v.degree() * e as i32;
        }
        out
    }

    /// Evaluates `d(d(v))` on every generator.
    pub fn check_d_squared(&self) -> DSquaredReport {
        let offenders = self
            .alphabet
            .vars()
            .filter_map(|v| {
                let r = self.d(self.d_gen(v));
                (!r.is_zero()).then(|| Residue {
                    at: self.alphabet.name(v).to_string(),
                    residue: self.display(&r),
                })
            })
            .collect();
        DSquaredReport {
            generators: self.alphabet.len(),
            offenders,
        }
    }

    /// Parses and validates an element given in the term-list format.
    pub fn parse(&self, terms: &[crate::graded::Term]) -> Result<Polynomial> {
        let p = self.alphabet.parse_terms(terms, self.coefficients)?;
        Ok(self.reduce(&p))
    }
}

/// A nonzero value found where zero was expected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residue {
    pub at: String,
    pub residue: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DSquaredReport {
    pub generators: usize,
    pub offenders: Vec<Residue>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.offenders.is_empty()
    }
}

/// A DG ring homomorphism, given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: Arc<CdgRing>,
    target: Arc<CdgRing>,
    images: Vec<Polynomial>,
}

impl RingHom {
    pub fn new(
        source: Arc<CdgRing>,
        target: Arc<CdgRing>,
        images: Vec<Polynomial>,
    ) -> Result<Self> {
        if images.len() != source.alphabet.len() {
            return Err(Error::InvalidHom(format!(
                "{} images given for {} generators",
                images.len(),
                source.alphabet.len()
            )));
        }
        if source.coefficients != target.coefficients {
            return Err(Error::InvalidHom("coefficient rings differ".into()));
        }
        let mut reduced = Vec::with_capacity(images.len());
        for (v, p) in source.alphabet.vars().zip(images) {
            target
                .check_element(&p)
                .map_err(|e| Error::InvalidHom(e.to_string()))?;
            if !p.is_homogeneous_of(v.degree()) {
                return Err(Error::InvalidHom(format!(
                    "image of {} is {}, not homogeneous of degree {}",
                    source.alphabet.name(v),
                    target.display(&p),
                    v.degree()
                )));
            }
            reduced.push(target.reduce(&p));
        }
        Ok(RingHom {
            source,
            target,
            images: reduced,
        })
    }

    /// Builds a homomorphism from images keyed by source variable name.
    pub fn from_named(
        source: Arc<CdgRing>,
        target: Arc<CdgRing>,
        named: &BTreeMap<String, Polynomial>,
    ) -> Result<Self> {
        for name in named.keys() {
            source.var(name)?;
        }
        let images = source
            .alphabet
            .variables()
            .iter()
            .map(|v| {
                named
                    .get(&v.name)
                    .cloned()
                    .ok_or_else(|| Error::InvalidHom(format!("no image given for {}", v.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(source, target, images)
    }

    pub fn identity(ring: Arc<CdgRing>) -> Self {
        let images = ring.alphabet.vars().map(Polynomial::var).collect();
        RingHom {
            source: ring.clone(),
            target: ring,
            images,
        }
    }

    /// The unit `ℤ → R`.
    pub fn unit(ring: Arc<CdgRing>) -> Self {
        RingHom {
            source: Arc::new(CdgRing::scalars(ring.coefficients)),
            target: ring,
            images: Vec::new(),
        }
    }

    /// The map `R → ℤ` killing every generator.
    pub fn augmentation(ring: Arc<CdgRing>) -> Self {
        let images = vec![Polynomial::zero(); ring.alphabet.len()];
        RingHom {
            target: Arc::new(CdgRing::scalars(ring.coefficients)),
            source: ring,
            images,
        }
    }

    pub fn source(&self) -> &Arc<CdgRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CdgRing> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image(&self, v: Var) -> &Polynomial {
        &self.images[v.id() as usize]
    }

    /// Multiplicative, additive, unital extension of the generator images.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out += self.apply_monomial(m).scale(c);
        }
        out
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Polynomial {
        let mut acc = Polynomial::one();
        for &(v, e) in m.factors() {
            let img = &self.images[v.id() as usize];
            for _ in 0..e {
                acc = self.target.mul(&acc, img);
                if acc.is_zero() {
                    return acc;
                }
            }
        }
        acc
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RingHom) -> Result<RingHom> {
        if !Arc::ptr_eq(&inner.target, &self.source)
            && inner.target.alphabet != self.source.alphabet
        {
            return Err(Error::InvalidHom("composition of mismatched maps".into()));
        }
        Ok(RingHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            images: inner.images.iter().map(|p| self.apply(p)).collect(),
        })
    }

    /// Generator-wise equality with another map between the same rings.
    pub fn agrees_with(&self, other: &RingHom) -> Vec<Residue> {
        self.source
            .alphabet
            .vars()
            .filter_map(|v| {
                let r = &self.images[v.id() as usize] - &other.images[v.id() as usize];
                (!r.is_zero()).then(|| Residue {
                    at: self.source.alphabet.name(v).to_string(),
                    residue: self.target.display(&r),
                })
            })
            .collect()
    }

    /// Checks `φ(d v) = d(φ v)` on generators, and that every divided-power
    /// relation of the source maps to zero.
    pub fn check_dg(&self) -> HomReport {
        let src = &self.source;
        let tgt = &self.target;
        let mut dg_violations = Vec::new();
        for v in src.alphabet.vars() {
            let lhs = self.apply(src.d_gen(v));
            let rhs = tgt.d(&self.images[v.id() as usize]);
            let r = &lhs - &rhs;
            if !r.is_zero() {
                dg_violations.push(Residue {
                    at: src.alphabet.name(v).to_string(),
                    residue: tgt.display(&r),
                });
            }
        }
        let mut relation_violations = Vec::new();
        for fam in &src.families {
            let k = fam.cutoff();
            for i in 1..=k {
                for j in i..=k - i {
                    let lhs = tgt.mul(&self.apply(&fam.element(i)), &self.apply(&fam.element(j)));
                    let rhs = self
                        .apply(&fam.element(i + j))
                        .scale_int(binomial(i + j, j));
                    let r = &lhs - &rhs;
                    if !r.is_zero() {
                        relation_violations.push(RelationResidue {
                            family: fam.name.clone(),
                            i,
                            j,
                            residue: tgt.display(&r),
                        });
                    }
                }
            }
        }
        HomReport {
            dg_violations,
            relation_violations,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationResidue {
    pub family: String,
    pub i: usize,
    pub j: usize,
    pub residue: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomReport {
    pub dg_violations: Vec<Residue>,
    pub relation_violations: Vec<RelationResidue>,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.dg_violations.is_empty() && self.relation_violations.is_empty()
    }
}

/// A finite tensor product with its canonical inclusions.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub ring: Arc<CdgRing>,
    pub inclusions: Vec<RingHom>,
    /// First variable id of each factor inside the product.
    pub offsets: Vec<u32>,
}

/// Tensor product over the coefficients, with factor `k` renamed `k.<name>`.
pub fn tensor(rings: &[Arc<CdgRing>]) -> Result<Tensor> {
    let labels: Vec<String> = (0..rings.len()).map(|k| k.to_string()).collect();
    let pairs: Vec<(&str, &Arc<CdgRing>)> = labels
        .iter()
        .map(String::as_str)
        .zip(rings.iter())
        .collect();
    tensor_labeled(&pairs)
}

/// Tensor product with caller-chosen stage labels; variables of stage `label`
/// are renamed `label.<name>` and keep their relative order.
pub fn tensor_labeled(factors: &[(&str, &Arc<CdgRing>)]) -> Result<Tensor> {
    let coefficients = factors
        .first()
        .map_or(CoefficientRing::Z, |(_, r)| r.coefficients);
    if factors.iter().any(|(_, r)| r.coefficients != coefficients) {
        return Err(Error::InvalidRing(
            "tensor factors have different coefficient rings".into(),
        ));
    }
    let mut vars = Vec::new();
    let mut offsets = Vec::with_capacity(factors.len());
    for (label, r) in factors {
        offsets.push(vars.len() as u32);
        for v in r.alphabet.variables() {
            vars.push(Variable::new(format!("{label}.{}", v.name), v.degree));
        }
    }
    let alphabet = Alphabet::new(vars).map_err(|e| match e {
        Error::DuplicateVariable(n) => {
            Error::Internal(format!("variable name collision {n:?} after renaming"))
        }
        e => e,
    })?;
    let mut differential = Vec::with_capacity(alphabet.len());
    let mut families = Vec::new();
    for ((label, r), &off) in factors.iter().zip(&offsets) {
        let shift = |v: Var| Var::new(v.id() + off, v.degree());
        for v in r.alphabet.vars() {
            differential.push(r.d_gen(v).map_vars(shift));
        }
        for fam in &r.families {
            families.push(fam.map_vars(shift, &format!("{label}."))?);
        }
    }
    let ring = Arc::new(CdgRing::new(
        coefficients,
        alphabet,
        differential,
        families,
    )?);
    let inclusions = factors
        .iter()
        .zip(&offsets)
        .map(|((_, r), &off)| RingHom {
            source: (*r).clone(),
            target: ring.clone(),
            images: r
                .alphabet
                .vars()
                .map(|v| Polynomial::var(Var::new(v.id() + off, v.degree())))
                .collect(),
        })
        .collect();
    Ok(Tensor {
        ring,
        inclusions,
        offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // deg x = -5, deg y = -4, deg z = -3; dx = y, dy = z, so d(dx) = z
    fn broken_ring() -> CdgRing {
        let mut b = RingBuilder::new(CoefficientRing::Z);
        let x = b.var("x", -5);
        let y = b.var("y", -4);
        let z = b.var("z", -3);
        b.set_d(x, Polynomial::var(y));
        b.set_d(y, Polynomial::var(z));
        b.build().unwrap()
    }

    #[test]
    fn d_squared_reports_offender() {
        let r = broken_ring().check_d_squared();
        assert!(!r.passed());
        assert_eq!(r.offenders.len(), 1);
        assert_eq!(r.offenders[0].at, "x");
        assert_eq!(r.offenders[0].residue, "z");
    }

    #[test]
    fn differential_degree_is_checked() {
        let mut b = RingBuilder::new(CoefficientRing::Z);
        let x = b.var("x", -3);
        let y = b.var("y", -3);
        b.set_d(x, Polynomial::var(y));
        assert!(matches!(b.build(), Err(Error::InvalidRing(_))));
    }

    #[test]
    fn d_of_unit_is_zero() {
        let r = broken_ring();
        assert!(r.d(&Polynomial::one()).is_zero());
        assert!(r.d(&Polynomial::integer(7)).is_zero());
    }

    #[test]
    fn leibniz_sign_on_odd_prefix() {
        // deg a = -3, deg b = -2, deg c = -1, db = c
        let mut bl = RingBuilder::new(CoefficientRing::Z);
        let a = bl.var("a", -3);
        let b = bl.var("b", -2);
        let c = bl.var("c", -1);
        bl.set_d(b, Polynomial::var(c));
        let r = bl.build().unwrap();
        let ab = Polynomial::var(a).mul(&Polynomial::var(b));
        // d(a·b) = da·b + (-1)^{-3} a·db = -a·c
        let expect = -Polynomial::var(a).mul(&Polynomial::var(c));
        assert_eq!(r.d(&ab), expect);
    }

    #[test]
    fn tensor_of_unit_is_renaming() {
        let r = Arc::new(broken_ring());
        let z = Arc::new(CdgRing::integers());
        let t = tensor(&[z, r.clone()]).unwrap();
        assert_eq!(t.ring.alphabet().len(), 3);
        assert_eq!(t.ring.alphabet().variables()[0].name, "1.x");
        let x = t.ring.var("1.x").unwrap();
        assert_eq!(t.ring.display(t.ring.d_gen(x)), "1.y");
        for inc in &t.inclusions {
            assert!(inc.check_dg().passed());
        }
    }

    #[test]
    fn tensor_rejects_mixed_coefficients() {
        let a = Arc::new(CdgRing::integers());
        let b = Arc::new(CdgRing::scalars(CoefficientRing::Q));
        assert!(tensor(&[a, b]).is_err());
    }

    #[test]
    fn zero_map_is_not_dg_when_d_hits_target() {
        // source: x (-3) with dx = y (-2); target the same ring, x ↦ 0, y ↦ y
        let mut b = RingBuilder::new(CoefficientRing::Z);
        let x = b.var("x", -3);
        let y = b.var("y", -2);
        b.set_d(x, Polynomial::var(y));
        let r = Arc::new(b.build().unwrap());
        let h = RingHom::new(
            r.clone(),
            r.clone(),
            vec![Polynomial::zero(), Polynomial::var(y)],
        )
        .unwrap();
        let rep = h.check_dg();
        assert!(!rep.passed());
        assert_eq!(rep.dg_violations[0].at, "x");
        assert_eq!(rep.dg_violations[0].residue, "y");
    }

    #[test]
    fn hom_image_degree_checked() {
        let mut b = RingBuilder::new(CoefficientRing::Z);
        let x = b.var("x", -3);
        let _ = x;
        let r = Arc::new(b.build().unwrap());
        let bad = RingHom::new(r.clone(), r.clone(), vec![Polynomial::one()]);
        assert!(matches!(bad, Err(Error::InvalidHom(_))));
    }
}
