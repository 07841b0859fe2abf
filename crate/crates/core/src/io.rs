//! JSON documents for rings, homomorphisms, divided-power descriptors and
//! factorization inputs. All maps are ordered so output is reproducible.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize};

use crate::dg_ring::{CdgRing, DividedPowerFamily, RingHom};
use crate::error::{Error, Result};
use crate::graded::{CoefficientRing, Term, Variable};
use crate::pd::PdOracle;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub name: String,
    /// `x_1, x_2, …` in order.
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub companion: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    pub coefficients: CoefficientRing,
    #[serde(default)]
    pub variables: Vec<Variable>,
    /// Images of generators; omitted generators are cocycles.
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<Term>>,
    #[serde(
        default,
        skip_serializing_if = "Vec::is_empty",
        deserialize_with = "one_or_many"
    )]
    pub rewrite: Vec<FamilyDoc>,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<FamilyDoc>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(FamilyDoc),
        Many(Vec<FamilyDoc>),
    }
    Ok(match Option::<OneOrMany>::deserialize(d)? {
        None => Vec::new(),
        Some(OneOrMany::One(f)) => vec![f],
        Some(OneOrMany::Many(v)) => v,
    })
}

impl RingDoc {
    pub fn from_ring(ring: &CdgRing) -> Self {
        let a = ring.alphabet();
        let differential = a
            .vars()
            .filter(|&v| !ring.d_gen(v).is_zero())
            .map(|v| (a.name(v).to_string(), a.format_terms(ring.d_gen(v))))
            .collect();
        let rewrite = ring
            .families()
            .iter()
            .map(|f| FamilyDoc {
                name: f.name.clone(),
                members: f.members().iter().map(|&v| a.name(v).to_string()).collect(),
                companion: f.companion().map(|v| a.name(v).to_string()),
            })
            .collect();
        RingDoc {
            coefficients: ring.coefficients(),
            variables: a.variables().to_vec(),
            differential,
            rewrite,
        }
    }

    pub fn to_ring(&self) -> Result<CdgRing> {
        let alphabet = crate::graded::Alphabet::new(self.variables.clone())?;
        let mut differential = vec![crate::graded::Polynomial::zero(); alphabet.len()];
        for (name, terms) in &self.differential {
            let v = alphabet.lookup(name)?;
            differential[v.id() as usize] = alphabet.parse_terms(terms, self.coefficients)?;
        }
        let mut families = Vec::new();
        for f in &self.rewrite {
            let members = f
                .members
                .iter()
                .map(|m| alphabet.lookup(m))
                .collect::<Result<Vec<_>>>()?;
            let step = members
                .first()
                .map(|v| v.degree())
                .ok_or_else(|| Error::InvalidRing(format!("family {} has no members", f.name)))?;
            let companion = f
                .companion
                .as_deref()
                .map(|c| alphabet.lookup(c))
                .transpose()?;
            families.push(DividedPowerFamily::new(
                f.name.clone(),
                step,
                members,
                companion,
            )?);
        }
        CdgRing::new(self.coefficients, alphabet, differential, families)
    }
}

/// A ring given inline or by name within an enclosing document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingRef {
    Named(String),
    Inline(Box<RingDoc>),
}

impl RingRef {
    pub fn resolve(&self, named: &BTreeMap<String, Arc<CdgRing>>) -> Result<Arc<CdgRing>> {
        match self {
            RingRef::Inline(doc) => Ok(Arc::new(doc.to_ring()?)),
            RingRef::Named(n) => named
                .get(n)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("no ring named {n:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub source: RingRef,
    pub target: RingRef,
    pub images: BTreeMap<String, Vec<Term>>,
}

impl HomDoc {
    /// Document form of `h`, referring to its rings by the given names.
    pub fn from_hom(h: &RingHom, source: &str, target: &str) -> Self {
        let (sa, ta) = (h.source().alphabet(), h.target().alphabet());
        let images = sa
            .vars()
            .map(|v| (sa.name(v).to_string(), ta.format_terms(h.image(v))))
            .collect();
        HomDoc {
            source: RingRef::Named(source.to_string()),
            target: RingRef::Named(target.to_string()),
            images,
        }
    }

    pub fn to_hom(&self, named: &BTreeMap<String, Arc<CdgRing>>) -> Result<RingHom> {
        let source = self.source.resolve(named)?;
        let target = self.target.resolve(named)?;
        images_to_hom(source, target, &self.images)
    }
}

fn images_to_hom(
    source: Arc<CdgRing>,
    target: Arc<CdgRing>,
    images: &BTreeMap<String, Vec<Term>>,
) -> Result<RingHom> {
    let mut parsed = BTreeMap::new();
    for (name, terms) in images {
        parsed.insert(name.clone(), target.parse(terms)?);
    }
    RingHom::from_named(source, target, &parsed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PdKind {
    Char0,
    DpCanonical,
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdDoc {
    pub kind: PdKind,
    /// Element name, then `k` (as a decimal string), then `γ^k` as a term list.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub table: BTreeMap<String, BTreeMap<String, Vec<Term>>>,
}

impl PdDoc {
    pub fn to_oracle(&self, ring: &CdgRing) -> Result<PdOracle> {
        match self.kind {
            PdKind::Char0 => Ok(PdOracle::Char0),
            PdKind::DpCanonical => Ok(PdOracle::DpCanonical),
            PdKind::Table => {
                let mut table = BTreeMap::new();
                for (name, entries) in &self.table {
                    ring.var(name)?;
                    let mut parsed = BTreeMap::new();
                    for (k, terms) in entries {
                        let k: u32 = k.parse().map_err(|_| {
                            Error::InvalidInput(format!(
                                "table key {k:?} for {name} is not an integer"
                            ))
                        })?;
                        parsed.insert(k, ring.parse(terms)?);
                    }
                    table.insert(name.clone(), parsed);
                }
                Ok(PdOracle::Table(table))
            }
        }
    }
}

/// The images of `f : A → B`; `source` and `target` default to `"A"` and `"B"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<RingRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<RingRef>,
    pub images: BTreeMap<String, Vec<Term>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizeDoc {
    #[serde(rename = "A")]
    pub a: RingDoc,
    #[serde(rename = "B")]
    pub b: RingDoc,
    pub f: MapDoc,
    pub pd: PdDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i32>,
    /// Exponent cap for every degree-0 variable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<u32>,
}

/// Parsed rings and map of a factorization input.
pub struct FactorizeParts {
    pub a: Arc<CdgRing>,
    pub b: Arc<CdgRing>,
    pub f: RingHom,
    pub pd: PdOracle,
}

impl FactorizeDoc {
    pub fn parts(&self) -> Result<FactorizeParts> {
        let a = Arc::new(self.a.to_ring()?);
        let b = Arc::new(self.b.to_ring()?);
        for (side, r, want) in [
            ("source", &self.f.source, "A"),
            ("target", &self.f.target, "B"),
        ] {
            if let Some(r) = r {
                if r != &RingRef::Named(want.to_string()) {
                    return Err(Error::InvalidInput(format!("f.{side} must be {want:?}")));
                }
            }
        }
        let f = images_to_hom(a.clone(), b.clone(), &self.f.images)?;
        let pd = self.pd.to_oracle(&b)?;
        Ok(FactorizeParts { a, b, f, pd })
    }
}

/// Element list for `pd-check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdCheckDoc {
    pub ring: RingDoc,
    pub pd: PdDoc,
    /// Defaults to every variable the oracle accepts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<Term>>>,
}

/// A collection of named rings and homomorphisms between them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    #[serde(default)]
    pub rings: BTreeMap<String, RingDoc>,
    #[serde(default)]
    pub homs: BTreeMap<String, HomDoc>,
}

impl Bundle {
    pub fn add_ring(&mut self, name: &str, ring: &CdgRing) {
        self.rings
            .insert(name.to_string(), RingDoc::from_ring(ring));
    }

    pub fn add_hom(&mut self, name: &str, h: &RingHom, source: &str, target: &str) {
        self.homs
            .insert(name.to_string(), HomDoc::from_hom(h, source, target));
    }

    pub fn parse_rings(&self) -> Result<BTreeMap<String, Arc<CdgRing>>> {
        self.rings
            .iter()
            .map(|(n, d)| Ok((n.clone(), Arc::new(d.to_ring()?))))
            .collect()
    }
}

/// Any of the documents the tools read.
pub enum Document {
    Ring(RingDoc),
    Hom(HomDoc),
    Bundle(Bundle),
    PdCheck(PdCheckDoc),
    Factorize(FactorizeDoc),
}

/// Recognizes a document by its top-level keys.
pub fn parse_document(text: &str) -> Result<Document> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let has = |k: &str| v.get(k).is_some();
    // re-parse from text so errors carry line and column
    if has("variables") || has("coefficients") {
        Ok(Document::Ring(serde_json::from_str(text)?))
    } else if has("images") {
        Ok(Document::Hom(serde_json::from_str(text)?))
    } else if has("A") && has("B") {
        Ok(Document::Factorize(serde_json::from_str(text)?))
    } else if has("ring") && has("pd") {
        Ok(Document::PdCheck(serde_json::from_str(text)?))
    } else if has("rings") {
        // extra keys such as a report are ignored
        Ok(Document::Bundle(serde_json::from_value(
            serde_json::json!({
                "rings": v["rings"],
                "homs": v.get("homs").cloned().unwrap_or_else(|| serde_json::json!({})),
            }),
        )?))
    } else {
        Err(Error::InvalidInput(
            "unrecognized document: expected a ring, hom, bundle, pd-check or factorize document"
                .into(),
        ))
    }
}
