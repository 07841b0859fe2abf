//! Divided-power operations `γ^k` as oracles, and mechanical checks of the
//! axioms `γ^k(a)·γ^l(a) = binom(k+l, l)·γ^{k+l}(a)` (PD1) and
//! `d(γ^k(a)) = d(a)·γ^{k-1}(a)` (PD2).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::dg_ring::CdgRing;
use crate::error::{Error, Result};
use crate::graded::{Coeff, CoefficientRing, Polynomial};
use crate::util::{binomial, factorial};

/// A rule evaluating `γ^k(a)`.
#[derive(Clone, Debug)]
pub enum PdOracle {
    /// `γ^k(a) = a^k / k!`, over `ℚ` only.
    Char0,
    /// `γ^k(x̄_i) = (k·i)! / (k!·(i!)^k) · x̄_{k·i}` on divided-power family members.
    DpCanonical,
    /// Explicit values keyed by variable name, then by `k`. `γ^0 = 1` and
    /// `γ^1 = a` are implicit unless overridden.
    Table(BTreeMap<String, BTreeMap<u32, Polynomial>>),
}

/// A value of `γ^k(a)`; `truncated` when the exact value lies past a family
/// cutoff or past the end of a table and was replaced by zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaValue {
    pub value: Polynomial,
    pub truncated: bool,
}

impl GammaValue {
    fn exact(value: Polynomial) -> Self {
        GammaValue {
            value,
            truncated: false,
        }
    }

    fn truncated() -> Self {
        GammaValue {
            value: Polynomial::zero(),
            truncated: true,
        }
    }
}

impl PdOracle {
    pub fn name(&self) -> &'static str {
        match self {
            PdOracle::Char0 => "char0",
            PdOracle::DpCanonical => "dp-canonical",
            PdOracle::Table(_) => "table",
        }
    }

    /// Rejects elements the oracle has no rule for.
    pub fn accepts(&self, ring: &CdgRing, a: &Polynomial) -> Result<()> {
        let reject = |reason: &str| Error::PdRejected {
            element: ring.display(a),
            reason: reason.to_string(),
        };
        match a.degree() {
            Some(d) if d <= -2 && d % 2 == 0 => {}
            _ => return Err(reject("not homogeneous of even degree <= -2")),
        }
        match self {
            PdOracle::Char0 => {
                if ring.coefficients() != CoefficientRing::Q {
                    return Err(reject("the characteristic-0 rule needs coefficients in Q"));
                }
            }
            PdOracle::DpCanonical => {
                let v = single_variable(a)
                    .ok_or_else(|| reject("not a divided-power family member"))?;
                if ring.family_of(v).is_none() {
                    return Err(reject("not a divided-power family member"));
                }
            }
            PdOracle::Table(t) => {
                let v = single_variable(a).ok_or_else(|| reject("not a single variable"))?;
                if !t.contains_key(ring.alphabet().name(v)) {
                    return Err(reject("no table entry"));
                }
            }
        }
        Ok(())
    }

    pub fn gamma(&self, ring: &CdgRing, k: u32, a: &Polynomial) -> Result<GammaValue> {
        self.accepts(ring, a)?;
        match self {
            PdOracle::Char0 => {
                let inv = Coeff::new(BigInt::from(1), factorial(k as usize));
                Ok(GammaValue::exact(ring.pow(a, k).scale(&inv)))
            }
            PdOracle::DpCanonical => {
                if k == 0 {
                    return Ok(GammaValue::exact(Polynomial::one()));
                }
                let v = single_variable(a).expect("accepted");
                let (fam, i) = ring.family_of(v).expect("accepted");
                let k = k as usize;
                match fam.member(k * i) {
                    None => Ok(GammaValue::truncated()),
                    Some(x) => {
                        let c = factorial(k * i) / (factorial(k) * factorial(i).pow(k as u32));
                        Ok(GammaValue::exact(Polynomial::var(x).scale_int(c)))
                    }
                }
            }
            PdOracle::Table(t) => {
                let v = single_variable(a).expect("accepted");
                let entries = &t[ring.alphabet().name(v)];
                if let Some(p) = entries.get(&k) {
                    return Ok(GammaValue::exact(ring.reduce(p)));
                }
                match k {
                    0 => Ok(GammaValue::exact(Polynomial::one())),
                    1 => Ok(GammaValue::exact(a.clone())),
                    _ => Ok(GammaValue::truncated()),
                }
            }
        }
    }
}

/// The variable `v` when `a = v` exactly.
fn single_variable(a: &Polynomial) -> Option<crate::graded::Var> {
    let mut terms = a.terms();
    let (m, c) = terms.next()?;
    if terms.next().is_some() || !c.is_integer() || c.to_integer() != BigInt::from(1) {
        return None;
    }
    match m.factors() {
        [(v, 1)] => Some(*v),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Axiom {
    /// `γ^0(a) = 1` and `γ^1(a) = a`.
    #[serde(rename = "PD0")]
    Unit,
    #[serde(rename = "PD1")]
    Product,
    #[serde(rename = "PD2")]
    Differential,
    /// `k!·γ^k(a) = a^k`.
    #[serde(rename = "power")]
    Power,
}

#[derive(Clone, Debug, Serialize)]
pub struct PdEntry {
    pub element: String,
    pub axiom: Axiom,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    pub passed: bool,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PdReport {
    pub oracle: String,
    pub entries: Vec<PdEntry>,
}

impl PdReport {
    /// Entries involving a truncated value do not count.
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<&PdEntry> {
        self.entries.iter().find(|e| !e.passed && !e.truncated)
    }

    pub fn render_text(&self) -> String {
        let mut s = format!(
            "PD axioms ({}): {}\n",
            self.oracle,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for e in &self.entries {
            let idx = match e.l {
                Some(l) => format!("k={} l={}", e.k, l),
                None => format!("k={}", e.k),
            };
            let axiom = serde_json::to_value(e.axiom).expect("axiom");
            s.push_str(&format!(
                "  {:<8} {:<6} {:<10} {}{}{}\n",
                e.element,
                axiom.as_str().unwrap_or_default(),
                idx,
                if e.passed { "pass" } else { "FAIL" },
                if e.truncated { "  [truncated]" } else { "" },
                e.residue
                    .as_deref()
                    .map(|r| format!("  residue {r}"))
                    .unwrap_or_default(),
            ));
        }
        s
    }
}

/// Checks PD0, PD1 for `k, l ≤ (k_max, l_max)`, PD2 for `1 ≤ k ≤ k_max`, and
/// the power identity for `k ≤ k_max` on every element.
pub fn check_pd(
    oracle: &PdOracle,
    ring: &CdgRing,
    elements: &[Polynomial],
    k_max: u32,
    l_max: u32,
) -> Result<PdReport> {
    let mut entries = Vec::new();
    for a in elements {
        oracle.accepts(ring, a)?;
        let name = ring.display(a);
        let top = k_max + l_max;
        let g: Vec<GammaValue> = (0..=top)
            .map(|k| oracle.gamma(ring, k, a))
            .collect::<Result<_>>()?;
        let mut push = |axiom, k, l, residue: Polynomial, truncated| {
            entries.push(PdEntry {
                element: name.clone(),
                axiom,
                k,
                l,
                passed: residue.is_zero(),
                truncated,
                residue: (!residue.is_zero()).then(|| ring.display(&residue)),
            });
        };

        push(
            Axiom::Unit,
            0,
            None,
            &g[0].value - &Polynomial::one(),
            g[0].truncated,
        );
        push(Axiom::Unit, 1, None, &g[1].value - a, g[1].truncated);
        for k in 0..=k_max {
            for l in 0..=l_max {
                let (gk, gl, gkl) = (&g[k as usize], &g[l as usize], &g[(k + l) as usize]);
                let lhs = ring.mul(&gk.value, &gl.value);
                let rhs = gkl.value.scale_int(binomial((k + l) as usize, l as usize));
                let truncated = gk.truncated || gl.truncated || gkl.truncated;
                push(Axiom::Product, k, Some(l), &lhs - &rhs, truncated);
            }
        }
        let da = ring.d(a);
        for k in 1..=k_max {
            let (gk, gk1) = (&g[k as usize], &g[(k - 1) as usize]);
            let lhs = ring.d(&gk.value);
            let rhs = ring.mul(&da, &gk1.value);
            push(
                Axiom::Differential,
                k,
                None,
                &lhs - &rhs,
                gk.truncated || gk1.truncated,
            );
        }
        for k in 0..=k_max {
            let gk = &g[k as usize];
            let (power, power_trunc) = ring.reduce_tracked(&a.pow(k));
            let lhs = gk.value.scale_int(factorial(k as usize));
            push(
                Axiom::Power,
                k,
                None,
                &lhs - &power,
                gk.truncated || power_trunc,
            );
        }
    }
    Ok(PdReport {
        oracle: oracle.name().to_string(),
        entries,
    })
}

/// A coefficient of `a^k` not divisible by `k!`, which rules out any
/// divided-power structure containing `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub element: String,
    pub k: u32,
    pub power: String,
    pub monomial: String,
    pub coefficient: String,
    pub divisor: String,
}

pub fn pd_obstruction_witness(
    ring: &CdgRing,
    a: &Polynomial,
    k: u32,
) -> Result<Option<ObstructionWitness>> {
    if ring.coefficients() != CoefficientRing::Z {
        return Err(Error::InvalidInput(
            "obstruction witnesses are defined over Z".into(),
        ));
    }
    let power = ring.pow(a, k);
    let kf = factorial(k as usize);
    for (m, c) in power.terms() {
        let c = c.to_integer();
        if !c.is_multiple_of(&kf) {
            return Ok(Some(ObstructionWitness {
                element: ring.display(a),
                k,
                power: ring.display(&power),
                monomial: ring.alphabet().display_monomial(m),
                coefficient: c.to_string(),
                divisor: kf.to_string(),
            }));
        }
    }
    Ok(None)
}
