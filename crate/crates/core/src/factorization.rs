//! Factorization of a DG ring map `f : A → B` (with `B` carrying divided
//! powers) as `A --e--> B̃ --f̃--> B`, where `B̃ = A ⊗ C` is semi-free over `A`,
//! `e` is split by `p : B̃ → A`, and `f̃` is a surjective quasi-isomorphism.
//!
//! `C` is a tensor product of one block per chosen element `b ∈ B^n`: an odd
//! block when `n` is odd and a divided-power block when `n` is even. Every
//! claim about the result is verified over the degree window.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::complexes::{
    check_b_surjective, check_exact_sequences, check_h_bijective, check_quasi_iso,
    check_surjective, check_w_surjective, check_z_surjective, expand, ChainMapWindow,
    RingExpansion, Window,
};
use crate::dg_ring::{tensor_labeled, CdgRing, RingHom};
use crate::error::{Error, Result};
use crate::graded::{CoefficientRing, Polynomial};
use crate::matrix::{smith_normal_form, IntMatrix};
use crate::pd::PdOracle;
use crate::report::{DegreeEntry, DegreeReport};
use crate::standard_rings::{c_even, c_odd, Block, BlockKind};

pub struct FactorizationInput {
    pub a: Arc<CdgRing>,
    pub b: Arc<CdgRing>,
    pub f: RingHom,
    pub pd: PdOracle,
    pub window: Window,
    /// Drop generators whose classes in `W^n(B)` are spanned by the others.
    pub minimize: bool,
}

impl FactorizationInput {
    fn validate(&self) -> Result<()> {
        if self.a.coefficients() != CoefficientRing::Z
            || self.b.coefficients() != CoefficientRing::Z
        {
            return Err(Error::InvalidInput(
                "factorization works over Z coefficients".into(),
            ));
        }
        if let Some(v) = self.a.alphabet().variables().iter().find(|v| v.degree > -1) {
            return Err(Error::InvalidInput(format!(
                "variable {} of A has degree {}; A must be generated in degrees <= -1",
                v.name, v.degree
            )));
        }
        if self.f.source().alphabet() != self.a.alphabet()
            || self.f.target().alphabet() != self.b.alphabet()
        {
            return Err(Error::InvalidInput("f does not go from A to B".into()));
        }
        Ok(())
    }
}

/// Elements `b_s ∈ B^n` whose classes generate `W^n(B)`.
#[derive(Clone, Debug)]
pub struct GeneratorSelection {
    pub generators: BTreeMap<i32, Vec<Polynomial>>,
    pub report: DegreeReport,
}

impl GeneratorSelection {
    pub fn len(&self) -> usize {
        self.generators.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn in_degree(&self, n: i32) -> &[Polynomial] {
        self.generators.get(&n).map_or(&[], Vec::as_slice)
    }
}

/// Takes every basis monomial of `B^n` outside `Z^n(B)`, for `n` in
/// `[floor, -1]`, and checks that their classes span `W^n(B)`.
pub fn select_generators(b: &RingExpansion, minimize: bool) -> Result<GeneratorSelection> {
    let c = b.complex();
    let mut generators = BTreeMap::new();
    let mut report = DegreeReport::new("generators span W^n(B)");
    for n in (c.floor()..=-1).rev() {
        let d = c.d(n)?;
        let mut chosen: Vec<usize> = (0..c.rank(n))
            .filter(|&j| d.column(j).iter().any(|x| x != &0.into()))
            .collect();
        let z = c.cocycles(n)?;
        let spans = |cols: &[usize]| {
            let m = IntMatrix::identity(c.rank(n)).select_columns(cols).hcat(&z);
            smith_normal_form(&m).is_onto()
        };
        if minimize {
            for k in (0..chosen.len()).rev() {
                let mut rest = chosen.clone();
                rest.remove(k);
                if spans(&rest) {
                    chosen = rest;
                }
            }
        }
        let ok = spans(&chosen);
        report.push(
            DegreeEntry::new(n, ok)
                .invariant(format!("rank W={}", c.rank(n) - z.cols()))
                .invariant(format!("generators={}", chosen.len()))
                .tainted(c.is_tainted(n)),
        );
        let elems: Vec<Polynomial> = chosen
            .iter()
            .map(|&j| Polynomial::monomial(b.basis(n)[j].clone()))
            .collect();
        if !elems.is_empty() {
            generators.insert(n, elems);
        }
    }
    Ok(GeneratorSelection { generators, report })
}

/// One block `C_s` with its map `g_s : C_s → B`.
#[derive(Clone, Debug)]
pub struct BuiltBlock {
    pub label: String,
    pub generator: Polynomial,
    pub block: Block,
    pub g: RingHom,
}

/// `x ↦ b`, `y ↦ d(b)` for `b` of odd degree `n`.
pub fn build_block_odd(label: &str, b: &Polynomial, target: &Arc<CdgRing>) -> Result<BuiltBlock> {
    let n = degree_of(b)?;
    let block = c_odd(n)?;
    let g = RingHom::new(
        block.ring.clone(),
        target.clone(),
        vec![b.clone(), target.d(b)],
    )?;
    Ok(BuiltBlock {
        label: label.to_string(),
        generator: b.clone(),
        block,
        g,
    })
}

/// `x̄_i ↦ γ^i(b)`, `ȳ ↦ d(b)` for `b` of even degree `n`. Fails with
/// [`Error::PdDefect`] when some relation `r_{i,j}` does not map to zero.
pub fn build_block_even(
    label: &str,
    b: &Polynomial,
    target: &Arc<CdgRing>,
    pd: &PdOracle,
    floor: i32,
) -> Result<BuiltBlock> {
    let n = degree_of(b)?;
    let block = c_even(n, floor)?;
    let BlockKind::Even { cutoff, .. } = block.kind else {
        unreachable!("c_even builds even blocks")
    };
    let mut images = Vec::with_capacity(cutoff + 1);
    for i in 1..=cutoff {
        let g = pd.gamma(target, i as u32, b)?;
        if g.truncated {
            return Err(Error::PdRejected {
                element: target.display(b),
                reason: format!("γ^{i} lies past the divided-power cutoff of B"),
            });
        }
        images.push(g.value);
    }
    images.push(target.d(b));
    let g = RingHom::new(block.ring.clone(), target.clone(), images)?;
    if let Some(r) = g.check_dg().relation_violations.first() {
        return Err(Error::PdDefect {
            block: label.to_string(),
            degree: n,
            i: r.i,
            j: r.j,
            residue: r.residue.clone(),
        });
    }
    Ok(BuiltBlock {
        label: label.to_string(),
        generator: b.clone(),
        block,
        g,
    })
}

fn degree_of(b: &Polynomial) -> Result<i32> {
    b.degree().filter(|&n| n <= -1).ok_or_else(|| {
        Error::InvalidInput("generator is not homogeneous of negative degree".into())
    })
}

/// `C = ⊗_s C_s` with `g_C : C → B`, `e_C : ℤ → C`, `p_C : C → ℤ`.
#[derive(Clone, Debug)]
pub struct CStage {
    pub ring: Arc<CdgRing>,
    pub blocks: Vec<BuiltBlock>,
    pub g: RingHom,
    pub unit: RingHom,
    pub augmentation: RingHom,
}

pub fn assemble_c(blocks: Vec<BuiltBlock>, target: &Arc<CdgRing>) -> Result<CStage> {
    let factors: Vec<(&str, &Arc<CdgRing>)> = blocks
        .iter()
        .map(|b| (b.label.as_str(), &b.block.ring))
        .collect();
    let t = tensor_labeled(&factors)?;
    let images = blocks
        .iter()
        .flat_map(|b| b.g.images().iter().cloned())
        .collect();
    let g = RingHom::new(t.ring.clone(), target.clone(), images)?;
    Ok(CStage {
        unit: RingHom::unit(t.ring.clone()),
        augmentation: RingHom::augmentation(t.ring.clone()),
        ring: t.ring,
        blocks,
        g,
    })
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub a: Arc<CdgRing>,
    pub b: Arc<CdgRing>,
    pub f: RingHom,
    pub window: Window,
    pub selection: GeneratorSelection,
    pub c: CStage,
    pub b_tilde: Arc<CdgRing>,
    pub e: RingHom,
    pub p: RingHom,
    pub f_tilde: RingHom,
}

/// `B̃ = A ⊗ C`, `e = id ⊗ e_C`, `p = id ⊗ p_C`, `f̃ = f ⊗ g_C`.
pub fn assemble_result(
    input: &FactorizationInput,
    selection: GeneratorSelection,
    c: CStage,
) -> Result<FactorizationResult> {
    let t = tensor_labeled(&[("A", &input.a), ("C", &c.ring)])?;
    let b_tilde = t.ring.clone();
    let e = t.inclusions[0].clone();
    let n_c = c.ring.alphabet().len();
    let p_images = input
        .a
        .alphabet()
        .vars()
        .map(Polynomial::var)
        .chain(std::iter::repeat_n(Polynomial::zero(), n_c))
        .collect();
    let p = RingHom::new(b_tilde.clone(), input.a.clone(), p_images)?;
    let f_images = input
        .f
        .images()
        .iter()
        .chain(c.g.images())
        .cloned()
        .collect();
    let f_tilde = RingHom::new(b_tilde.clone(), input.b.clone(), f_images)?;
    Ok(FactorizationResult {
        a: input.a.clone(),
        b: input.b.clone(),
        f: input.f.clone(),
        window: input.window,
        selection,
        c,
        b_tilde,
        e,
        p,
        f_tilde,
    })
}

/// Builds the factorization without verifying it.
pub fn construct(input: &FactorizationInput) -> Result<FactorizationResult> {
    input.validate()?;
    let b_exp = expand(&input.b, input.window)?;
    let selection = select_generators(&b_exp, input.minimize)?;
    let mut blocks = Vec::new();
    for (&n, elems) in selection.generators.iter().rev() {
        for b in elems {
            let label = format!("s{}", blocks.len());
            let built = if n % 2 != 0 {
                build_block_odd(&label, b, &input.b)?
            } else {
                build_block_even(&label, b, &input.b, &input.pd, input.window.floor)?
            };
            blocks.push(built);
        }
    }
    let c = assemble_c(blocks, &input.b)?;
    assemble_result(input, selection, c)
}

/// A check done on presentations rather than matrices.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolicCheck {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residues: Vec<String>,
}

impl SymbolicCheck {
    fn new(check: impl Into<String>, residues: Vec<String>) -> Self {
        SymbolicCheck {
            check: check.into(),
            passed: residues.is_empty(),
            residues,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub passed: bool,
    pub symbolic: Vec<SymbolicCheck>,
    pub degrees: Vec<DegreeReport>,
}

impl FactorizationReport {
    fn new(symbolic: Vec<SymbolicCheck>, degrees: Vec<DegreeReport>) -> Self {
        let passed = symbolic.iter().all(|s| s.passed) && degrees.iter().all(DegreeReport::passed);
        FactorizationReport {
            passed,
            symbolic,
            degrees,
        }
    }

    pub fn degree_report(&self, check: &str) -> Option<&DegreeReport> {
        self.degrees.iter().find(|r| r.check == check)
    }

    pub fn symbolic_check(&self, check: &str) -> Option<&SymbolicCheck> {
        self.symbolic.iter().find(|s| s.check == check)
    }

    /// Degrees flagged as affected by the exponent cap in any table.
    pub fn tainted_degrees(&self) -> Vec<i32> {
        let mut out: Vec<i32> = self
            .degrees
            .iter()
            .flat_map(|r| r.tainted_degrees())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for c in &self.symbolic {
            s.push_str(&format!(
                "{}: {}\n",
                c.check,
                if c.passed { "PASS" } else { "FAIL" }
            ));
            for r in &c.residues {
                s.push_str(&format!("  {r}\n"));
            }
        }
        for r in &self.degrees {
            s.push_str(&r.render_text());
        }
        s.push_str(&format!(
            "overall: {}\n",
            if self.passed { "PASS" } else { "FAIL" }
        ));
        s
    }
}

fn hom_residues(h: &RingHom) -> Vec<String> {
    let r = h.check_dg();
    r.dg_violations
        .iter()
        .map(|v| format!("d at {}: {}", v.at, v.residue))
        .chain(
            r.relation_violations
                .iter()
                .map(|v| format!("r({},{}) in {}: {}", v.i, v.j, v.family, v.residue)),
        )
        .collect()
}

fn rename(check: &str, mut r: DegreeReport) -> DegreeReport {
    r.check = check.to_string();
    r
}

/// Degreewise ranks of a tensor product from those of its factors.
fn convolve(a: &BTreeMap<i32, usize>, b: &BTreeMap<i32, usize>, lo: i32) -> BTreeMap<i32, usize> {
    let mut out: BTreeMap<i32, usize> = (lo..=0).map(|i| (i, 0)).collect();
    for (&i, &r) in a {
        for (&j, &s) in b {
            if i + j >= lo {
                *out.get_mut(&(i + j)).expect("in window") += r * s;
            }
        }
    }
    out
}

/// Verifies the factorization symbolically and over the window.
pub fn verify_factorization(result: &FactorizationResult) -> Result<FactorizationReport> {
    let w = result.window;
    let floor = w.floor;
    let mut symbolic = Vec::new();

    let pe = result.p.compose(&result.e)?;
    let id_a = RingHom::identity(result.a.clone());
    symbolic.push(SymbolicCheck::new(
        "p∘e = id_A",
        pe.agrees_with(&id_a)
            .iter()
            .map(|r| format!("{}: {}", r.at, r.residue))
            .collect(),
    ));
    let fe = result.f_tilde.compose(&result.e)?;
    symbolic.push(SymbolicCheck::new(
        "f̃∘e = f",
        fe.agrees_with(&result.f)
            .iter()
            .map(|r| format!("{}: {}", r.at, r.residue))
            .collect(),
    ));
    let d2 = result.b_tilde.check_d_squared();
    symbolic.push(SymbolicCheck::new(
        "d∘d = 0 on B̃",
        d2.offenders
            .iter()
            .map(|r| format!("{}: {}", r.at, r.residue))
            .collect(),
    ));
    symbolic.push(SymbolicCheck::new("f is DG", hom_residues(&result.f)));
    for b in &result.c.blocks {
        symbolic.push(SymbolicCheck::new(
            format!("g_{} is DG", b.label),
            hom_residues(&b.g),
        ));
    }
    symbolic.push(SymbolicCheck::new("e is DG", hom_residues(&result.e)));
    symbolic.push(SymbolicCheck::new("p is DG", hom_residues(&result.p)));
    symbolic.push(SymbolicCheck::new("f̃ is DG", hom_residues(&result.f_tilde)));

    let a_exp = expand(&result.a, w)?;
    let b_exp = expand(&result.b, w)?;
    let bt_exp = expand(&result.b_tilde, w)?;
    let (ma, mb, mbt) = (a_exp.complex(), b_exp.complex(), bt_exp.complex());
    let f = ChainMapWindow::from_hom(&result.f, &a_exp, &b_exp)?;
    let e = ChainMapWindow::from_hom(&result.e, &a_exp, &bt_exp)?;
    let p = ChainMapWindow::from_hom(&result.p, &bt_exp, &a_exp)?;
    let ft = ChainMapWindow::from_hom(&result.f_tilde, &bt_exp, &b_exp)?;

    let mut degrees = vec![result.selection.report.clone()];
    degrees.push(rename("d^2 = 0 on B̃ (matrices)", mbt.check_d_squared()));
    degrees.push(rename("f̃ commutes with d", ft.check_commutes(mbt, mb)?));

    let mut w_report = check_w_surjective(&ft, mbt, mb, floor..=-1)?;
    let w0 = mb.w_quotient(0)?.rank;
    w_report.push(
        DegreeEntry::new(0, w0 == 0)
            .invariant(format!("rank W^0(B)={w0}"))
            .tainted(mb.is_tainted(0)),
    );
    degrees.push(w_report);
    degrees.push(check_b_surjective(&ft, mbt, mb, floor + 1..=0)?);
    degrees.push(check_h_bijective(&ft, mbt, mb, floor + 2..=0)?);
    degrees.push(check_z_surjective(&ft, mbt, mb, floor + 1..=0)?);
    degrees.push(rename("f̃ surjective", check_surjective(&ft, mb)?));

    degrees.push(rename("quasi-isomorphism f", check_quasi_iso(&f, ma, mb)?));
    degrees.push(rename("quasi-isomorphism e", check_quasi_iso(&e, ma, mbt)?));
    degrees.push(rename("quasi-isomorphism p", check_quasi_iso(&p, mbt, ma)?));
    degrees.push(rename(
        "quasi-isomorphism f̃",
        check_quasi_iso(&ft, mbt, mb)?,
    ));

    let mut expected = a_exp.ranks();
    for b in &result.c.blocks {
        expected = convolve(&expected, &expand(&b.block.ring, w)?.ranks(), w.lowest());
    }
    let mut semi = DegreeReport::new("B̃ free on tensor monomials");
    for i in mbt.degrees() {
        let (got, want) = (bt_exp.rank(i), expected[&i]);
        semi.push(
            DegreeEntry::new(i, got == want)
                .invariant(format!("rank={got}"))
                .invariant(format!("expected={want}")),
        );
    }
    degrees.push(semi);
    degrees.push(rename("exact sequences on B̃", check_exact_sequences(mbt)?));

    Ok(FactorizationReport::new(symbolic, degrees))
}

/// Constructs and verifies.
pub fn factorize(input: &FactorizationInput) -> Result<(FactorizationResult, FactorizationReport)> {
    let result = construct(input)?;
    let report = verify_factorization(&result)?;
    Ok((result, report))
}
