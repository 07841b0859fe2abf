//! Command-line front end. The binary parses arguments with [`Cli`] and hands
//! them to [`run`]; everything else lives here so it can be tested directly.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::complexes::{check_exact_sequences, check_quasi_iso, expand, ChainMapWindow, Window};
use crate::dg_ring::{CdgRing, RingBuilder, RingHom};
use crate::error::{Error, Result};
use crate::factorization::{
    factorize, FactorizationInput, FactorizationReport, FactorizationResult,
};
use crate::graded::{CoefficientRing, Polynomial};
use crate::io::{parse_document, Bundle, Document, HomDoc, RingDoc};
use crate::pd::{check_pd, pd_obstruction_witness, PdOracle};
use crate::report::DegreeReport;
use crate::standard_rings::{
    c_even, c_odd, c_tilde_even, divided_power_relation, Block, BlockKind,
};

pub const DEFAULT_WINDOW: i32 = -10;
pub const DEFAULT_CAP: u32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "cdg-factor",
    version,
    about = "Build and verify commutative DG rings and factorizations of their maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Window floor: computations cover degrees [WINDOW, 0] (default -10, at most -2).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub window: Option<i32>,
    /// Exponent cap for degree-0 variables (default 6, at least 1).
    #[arg(long, global = true)]
    pub cap: Option<u32>,
    /// Also write the full JSON document to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    /// The odd block `ℤ[x, y]`, `dx = y`.
    #[value(alias = "odd-block")]
    Lemma100,
    /// The divided-power block.
    #[value(alias = "divided-power")]
    Lemma101,
    Counterexample,
    Factorization,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a standard construction and run its verification suite.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        /// Degree of the generator (odd for lemma100, even for lemma101 and counterexample).
        #[arg(allow_negative_numbers = true)]
        n: Option<i32>,
    },
    /// Cohomology of a ring over the window.
    Cohomology {
        file: PathBuf,
        /// Ring to use when the file holds several.
        #[arg(long)]
        name: Option<String>,
    },
    /// Check d∘d = 0 on generators and on the window expansion.
    VerifyRing {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Check that a homomorphism commutes with the differentials and relations.
    VerifyHom {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Check the divided-power axioms for an oracle on a list of elements.
    PdCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        k_max: u32,
        #[arg(long, default_value_t = 4)]
        l_max: u32,
    },
    /// Factor f : A → B and verify the result.
    Factorize {
        file: PathBuf,
        /// Drop generators that are redundant modulo cocycles.
        #[arg(long)]
        minimize: bool,
    },
}

/// Result of one command: the JSON document, a text rendering, and the verdict.
#[derive(Clone, Debug)]
pub struct Output {
    pub passed: bool,
    pub document: Value,
    pub text: String,
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.document).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => self.text.clone(),
        }
    }
}

/// Exit status for an error: a divided-power defect is a verification
/// failure, everything else is bad input.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::PdDefect { .. } => 1,
        _ => 2,
    }
}

/// Accumulates checks into a report.
#[derive(Default)]
struct Summary {
    passed: bool,
    checks: Vec<Value>,
    text: String,
}

impl Summary {
    fn new() -> Self {
        Summary {
            passed: true,
            ..Default::default()
        }
    }

    fn symbolic(&mut self, check: &str, residues: Vec<String>) {
        let ok = residues.is_empty();
        self.passed &= ok;
        self.text
            .push_str(&format!("{check}: {}\n", if ok { "PASS" } else { "FAIL" }));
        for r in &residues {
            self.text.push_str(&format!("  {r}\n"));
        }
        self.checks
            .push(json!({"check": check, "passed": ok, "residues": residues}));
    }

    fn degrees(&mut self, r: DegreeReport) {
        self.passed &= r.passed();
        self.text.push_str(&r.render_text());
        self.checks.push(serde_json::to_value(&r).expect("report"));
    }

    fn table(&mut self, check: &str, ok: bool, rows: Vec<(String, bool, String)>) {
        self.passed &= ok;
        self.text
            .push_str(&format!("{check}: {}\n", if ok { "PASS" } else { "FAIL" }));
        let mut json_rows = Vec::new();
        for (key, row_ok, value) in rows {
            self.text.push_str(&format!(
                "  {key:<10} {}  {value}\n",
                if row_ok { "pass" } else { "FAIL" }
            ));
            json_rows.push(json!({"entry": key, "passed": row_ok, "value": value}));
        }
        self.checks
            .push(json!({"check": check, "passed": ok, "rows": json_rows}));
    }

    fn value(&mut self, check: &str, ok: bool, v: impl Serialize, text: String) {
        self.passed &= ok;
        self.text.push_str(&text);
        let mut v = serde_json::to_value(v).expect("value");
        if let Value::Object(m) = &mut v {
            m.insert("check".into(), json!(check));
            m.insert("passed".into(), json!(ok));
        }
        self.checks.push(v);
    }

    fn finish(
        mut self,
        title: &str,
        bundle: Option<Bundle>,
        extra: Option<(&str, Value)>,
    ) -> Output {
        self.text = format!(
            "{title}\n{}overall: {}\n",
            self.text,
            if self.passed { "PASS" } else { "FAIL" }
        );
        let mut doc = serde_json::Map::new();
        if let Some(b) = bundle {
            doc.insert(
                "rings".into(),
                serde_json::to_value(&b.rings).expect("rings"),
            );
            doc.insert("homs".into(), serde_json::to_value(&b.homs).expect("homs"));
        }
        if let Some((k, v)) = extra {
            doc.insert(k.into(), v);
        }
        doc.insert(
            "report".into(),
            json!({"title": title, "passed": self.passed, "checks": self.checks}),
        );
        Output {
            passed: self.passed,
            document: Value::Object(doc),
            text: self.text,
        }
    }
}

fn window_from(cli: &Cli, doc_window: Option<i32>, doc_cap: Option<u32>) -> Result<Window> {
    let floor = cli.window.or(doc_window).unwrap_or(DEFAULT_WINDOW);
    let cap = cli.cap.or(doc_cap).unwrap_or(DEFAULT_CAP);
    if floor > -2 {
        return Err(Error::InvalidInput(format!(
            "--window must be at most -2, got {floor}"
        )));
    }
    if cap < 1 {
        return Err(Error::InvalidInput("--cap must be at least 1".into()));
    }
    Ok(Window::new(floor)?.with_cap(cap))
}

fn residues<T>(items: &[T], f: impl Fn(&T) -> String) -> Vec<String> {
    items.iter().map(f).collect()
}

fn hom_residues(h: &RingHom) -> Vec<String> {
    let r = h.check_dg();
    let mut out = residues(&r.dg_violations, |v| {
        format!("d at {}: {}", v.at, v.residue)
    });
    out.extend(residues(&r.relation_violations, |v| {
        format!("r({},{}) in {}: {}", v.i, v.j, v.family, v.residue)
    }));
    out
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Output> {
    let out = match &cli.command {
        Command::Demo { name, n } => {
            let w = window_from(cli, None, None)?;
            match name {
                DemoName::Lemma100 => demo_lemma100(n.unwrap_or(-3), w),
                DemoName::Lemma101 => demo_lemma101(n.unwrap_or(-2), w),
                DemoName::Counterexample => demo_counterexample(n.unwrap_or(-2)),
                DemoName::Factorization => demo_factorization(n.unwrap_or(-2), w),
            }
        }
        Command::Cohomology { file, name } => {
            let (label, ring) = pick_ring(&read(file)?, name.as_deref())?;
            cohomology(&label, &ring, window_from(cli, None, None)?)
        }
        Command::VerifyRing { file, name } => {
            let (label, ring) = pick_ring(&read(file)?, name.as_deref())?;
            verify_ring(&label, &ring, window_from(cli, None, None)?)
        }
        Command::VerifyHom { file, name } => {
            let homs = pick_homs(&read(file)?, name.as_deref())?;
            verify_homs(&homs, window_from(cli, None, None)?)
        }
        Command::PdCheck { file, k_max, l_max } => match parse_document(&read(file)?)? {
            Document::PdCheck(doc) => {
                let ring = doc.ring.to_ring()?;
                let oracle = doc.pd.to_oracle(&ring)?;
                let elements = match &doc.elements {
                    Some(list) => list
                        .iter()
                        .map(|t| ring.parse(t))
                        .collect::<Result<Vec<_>>>()?,
                    None => ring
                        .alphabet()
                        .vars()
                        .map(Polynomial::var)
                        .filter(|a| oracle.accepts(&ring, a).is_ok())
                        .collect(),
                };
                pd_check(&ring, &oracle, &elements, *k_max, *l_max)
            }
            _ => Err(Error::InvalidInput(
                "pd-check expects a document with \"ring\" and \"pd\"".into(),
            )),
        },
        Command::Factorize { file, minimize } => match parse_document(&read(file)?)? {
            Document::Factorize(doc) => {
                let w = window_from(cli, doc.window, doc.caps)?;
                let parts = doc.parts()?;
                let input = FactorizationInput {
                    a: parts.a,
                    b: parts.b,
                    f: parts.f,
                    pd: parts.pd,
                    window: w,
                    minimize: *minimize,
                };
                run_factorization("factorize", &input)
            }
            _ => Err(Error::InvalidInput(
                "factorize expects a document with \"A\", \"B\", \"f\" and \"pd\"".into(),
            )),
        },
    }?;
    if let Some(path) = &cli.out {
        std::fs::write(path, out.render(Format::Json))?;
    }
    Ok(out)
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn pick_ring(text: &str, name: Option<&str>) -> Result<(String, Arc<CdgRing>)> {
    match parse_document(text)? {
        Document::Ring(doc) => Ok(("ring".into(), Arc::new(doc.to_ring()?))),
        Document::Bundle(b) => {
            let rings = b.parse_rings()?;
            let key = match name {
                Some(n) => n.to_string(),
                None if rings.len() == 1 => rings.keys().next().expect("one ring").clone(),
                None => {
                    return Err(Error::InvalidInput(format!(
                        "the document holds several rings ({}); choose one with --name",
                        rings.keys().cloned().collect::<Vec<_>>().join(", ")
                    )))
                }
            };
            let ring = rings
                .get(&key)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("no ring named {key:?}")))?;
            Ok((key, ring))
        }
        _ => Err(Error::InvalidInput(
            "expected a ring document or a bundle".into(),
        )),
    }
}

fn pick_homs(text: &str, name: Option<&str>) -> Result<Vec<(String, RingHom)>> {
    match parse_document(text)? {
        Document::Hom(doc) => Ok(vec![("hom".into(), doc.to_hom(&BTreeMap::new())?)]),
        Document::Bundle(b) => {
            let rings = b.parse_rings()?;
            let chosen: Vec<(&String, &HomDoc)> = match name {
                Some(n) => vec![b
                    .homs
                    .get_key_value(n)
                    .ok_or_else(|| Error::InvalidInput(format!("no hom named {n:?}")))?],
                None => b.homs.iter().collect(),
            };
            if chosen.is_empty() {
                return Err(Error::InvalidInput("the document holds no homs".into()));
            }
            chosen
                .into_iter()
                .map(|(n, d)| Ok((n.clone(), d.to_hom(&rings)?)))
                .collect()
        }
        _ => Err(Error::InvalidInput(
            "expected a hom document or a bundle".into(),
        )),
    }
}

pub fn cohomology(label: &str, ring: &Arc<CdgRing>, w: Window) -> Result<Output> {
    let exp = expand(ring, w)?;
    let mut s = Summary::new();
    s.degrees(exp.complex().check_d_squared());
    s.degrees(exp.complex().cohomology_report()?);
    s.degrees(check_exact_sequences(exp.complex())?);
    let mut bundle = Bundle::default();
    bundle.add_ring(label, ring);
    Ok(s.finish(
        &format!("cohomology of {label} over [{}, 0]", w.floor),
        Some(bundle),
        None,
    ))
}

pub fn verify_ring(label: &str, ring: &Arc<CdgRing>, w: Window) -> Result<Output> {
    let mut s = Summary::new();
    let r = ring.check_d_squared();
    s.symbolic(
        "d∘d = 0 on generators",
        residues(&r.offenders, |o| format!("d(d({})) = {}", o.at, o.residue)),
    );
    let exp = expand(ring, w)?;
    s.degrees(exp.complex().check_d_squared());
    Ok(s.finish(&format!("ring {label}"), None, None))
}

pub fn verify_homs(homs: &[(String, RingHom)], w: Window) -> Result<Output> {
    let mut s = Summary::new();
    for (name, h) in homs {
        s.symbolic(&format!("{name} commutes with d"), hom_residues(h));
        let src = expand(h.source(), w)?;
        let tgt = expand(h.target(), w)?;
        let phi = ChainMapWindow::from_hom(h, &src, &tgt)?;
        let mut r = phi.check_commutes(src.complex(), tgt.complex())?;
        r.check = format!("{name} as a chain map");
        s.degrees(r);
    }
    Ok(s.finish("homomorphisms", None, None))
}

pub fn pd_check(
    ring: &CdgRing,
    oracle: &PdOracle,
    elements: &[Polynomial],
    k_max: u32,
    l_max: u32,
) -> Result<Output> {
    let rep = check_pd(oracle, ring, elements, k_max, l_max)?;
    let mut s = Summary::new();
    let text = rep.render_text();
    s.value("PD axioms", rep.passed(), &rep, text);
    Ok(s.finish(&format!("divided powers ({})", oracle.name()), None, None))
}

fn block_bundle(block: &Block) -> Bundle {
    let mut b = Bundle::default();
    b.add_ring("C", &block.ring);
    b.add_ring("Z", block.unit.source());
    b.add_hom("e", &block.unit, "Z", "C");
    b.add_hom("p", &block.augmentation, "C", "Z");
    b
}

/// Suite shared by both blocks: d², split identity, DG maps, contraction,
/// cohomology, quasi-isomorphisms, exact sequences.
fn block_suite(s: &mut Summary, block: &Block, w: Window) -> Result<()> {
    let r = block.ring.check_d_squared();
    s.symbolic(
        "d∘d = 0 on generators",
        residues(&r.offenders, |o| format!("d(d({})) = {}", o.at, o.residue)),
    );
    let pe = block.augmentation.compose(&block.unit)?;
    s.symbolic(
        "p∘e = id",
        residues(
            &pe.agrees_with(&RingHom::identity(block.unit.source().clone())),
            |r| format!("{}: {}", r.at, r.residue),
        ),
    );
    s.symbolic("e is DG", hom_residues(&block.unit));
    s.symbolic("p is DG", hom_residues(&block.augmentation));
    let wit = block.contraction(w)?;
    s.degrees(wit.check()?);
    let c = wit.expansion.complex();
    s.degrees(c.cohomology_report()?);
    let mut qe = check_quasi_iso(&wit.inclusion, wit.scalars.complex(), c)?;
    qe.check = "quasi-isomorphism e".into();
    s.degrees(qe);
    let mut qp = check_quasi_iso(&wit.projection, c, wit.scalars.complex())?;
    qp.check = "quasi-isomorphism p".into();
    s.degrees(qp);
    s.degrees(check_exact_sequences(c)?);
    Ok(())
}

/// Odd block suite.
pub fn demo_lemma100(n: i32, w: Window) -> Result<Output> {
    let block = c_odd(n)?;
    let mut s = Summary::new();
    block_suite(&mut s, &block, w)?;
    Ok(s.finish(
        &format!("odd block, deg x = {n}, window [{}, 0]", w.floor),
        Some(block_bundle(&block)),
        None,
    ))
}

/// Divided-power block suite.
pub fn demo_lemma101(n: i32, w: Window) -> Result<Output> {
    let block = c_even(n, w.floor)?;
    let BlockKind::Even { cutoff, .. } = block.kind else {
        unreachable!("even block")
    };
    let tilde = c_tilde_even(n, cutoff)?;
    let mut s = Summary::new();
    let r = tilde.check_d_squared();
    s.symbolic(
        "d∘d = 0 on the free ring",
        residues(&r.offenders, |o| format!("d(d({})) = {}", o.at, o.residue)),
    );

    let y = tilde.gen("y")?;
    let mut rows = Vec::new();
    let mut all = true;
    for i in 1..=cutoff {
        for j in 1..=cutoff - i {
            let lhs = tilde.d(&divided_power_relation(&tilde, i, j));
            let rhs = (&divided_power_relation(&tilde, i - 1, j)
                + &divided_power_relation(&tilde, i, j - 1))
                .mul(&y);
            let ok = lhs == rhs;
            all &= ok;
            rows.push((
                format!("r({i},{j})"),
                ok,
                format!("d(r) = {}", tilde.display(&lhs)),
            ));
        }
    }
    s.table("d(r_ij) = (r_{i-1,j} + r_{i,j-1})·y", all, rows);

    let exp = expand(&block.ring, w)?;
    let mut indep = Vec::new();
    let mut ok = true;
    for i in 1..=cutoff {
        let m = block.member(i);
        let (mono, _) = m.terms().next().expect("member");
        let present = exp.position(mono).is_some();
        ok &= present;
        indep.push((
            format!("x{i}"),
            present,
            format!("basis monomial in degree {}", n * i as i32),
        ));
    }
    s.table("x_i are distinct basis elements", ok, indep);
    if cutoff >= 2 {
        let sq = block.ring.mul(&block.member(1), &block.member(1));
        let want = block.member(2).scale_int(2);
        let res = &sq - &want;
        s.symbolic(
            "x1^2 = 2*x2",
            if res.is_zero() {
                vec![]
            } else {
                vec![block.ring.display(&res)]
            },
        );
    }
    block_suite(&mut s, &block, w)?;
    let mut bundle = block_bundle(&block);
    bundle.add_ring("C_tilde", &tilde);
    Ok(s.finish(
        &format!("divided-power block, deg x1 = {n}, window [{}, 0]", w.floor),
        Some(bundle),
        None,
    ))
}

pub fn demo_counterexample(n: i32) -> Result<Output> {
    if n > -2 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "the counterexample needs an even degree n <= -2, got {n}"
        )));
    }
    let mut b = RingBuilder::new(CoefficientRing::Z);
    b.var("x", n);
    let ring = b.build()?;
    let x = ring.gen("x")?;
    let mut s = Summary::new();
    let w1 = pd_obstruction_witness(&ring, &x, 1)?;
    s.symbolic(
        "no obstruction at k = 1",
        w1.iter()
            .map(|w| format!("{} has coefficient {}", w.monomial, w.coefficient))
            .collect(),
    );
    let w2 = pd_obstruction_witness(&ring, &x, 2)?;
    let text = match &w2 {
        Some(w) => format!(
            "obstruction at k = 2: FOUND\n  {}^{} = {}, coefficient {} of {} is not divisible by {}\n",
            w.element, w.k, w.power, w.coefficient, w.monomial, w.divisor
        ),
        None => "obstruction at k = 2: NOT FOUND\n".to_string(),
    };
    s.value(
        "obstruction at k = 2",
        w2.is_some(),
        json!({ "witness": w2 }),
        text,
    );
    let mut bundle = Bundle::default();
    bundle.add_ring("R", &ring);
    Ok(s.finish(&format!("Z[x], deg x = {n}, d = 0"), Some(bundle), None))
}

pub fn demo_factorization(n: i32, w: Window) -> Result<Output> {
    let block = if n % 2 == 0 {
        c_even(n, w.floor)?
    } else {
        c_odd(n)?
    };
    let input = FactorizationInput {
        a: block.unit.source().clone(),
        b: block.ring.clone(),
        f: block.unit.clone(),
        pd: PdOracle::DpCanonical,
        window: w,
        minimize: false,
    };
    run_factorization(&format!("factorization of Z -> block(deg {n})"), &input)
}

fn run_factorization(title: &str, input: &FactorizationInput) -> Result<Output> {
    let (res, rep) = factorize(input)?;
    Ok(factorization_output(title, &res, &rep))
}

/// The document `{rings, homs, generators, report}` for a factorization.
pub fn factorization_output(
    title: &str,
    res: &FactorizationResult,
    rep: &FactorizationReport,
) -> Output {
    let mut b = Bundle::default();
    b.add_ring("A", &res.a);
    b.add_ring("B", &res.b);
    b.add_ring("C", &res.c.ring);
    b.add_ring("B_tilde", &res.b_tilde);
    b.add_hom("f", &res.f, "A", "B");
    b.add_hom("g_C", &res.c.g, "C", "B");
    b.add_hom("e", &res.e, "A", "B_tilde");
    b.add_hom("p", &res.p, "B_tilde", "A");
    b.add_hom("f_tilde", &res.f_tilde, "B_tilde", "B");

    let gens: BTreeMap<String, Value> = res
        .c
        .blocks
        .iter()
        .map(|blk| {
            let kind = serde_json::to_value(blk.block.kind).expect("kind");
            (
                blk.label.clone(),
                json!({
                    "block": kind,
                    "generator": res.b.alphabet().format_terms(&blk.generator),
                }),
            )
        })
        .collect();

    let mut text = format!("{title}, window [{}, 0]\n", res.window.floor);
    text.push_str(&format!(
        "generators: {}\n",
        if res.c.blocks.is_empty() {
            "none".to_string()
        } else {
            res.c
                .blocks
                .iter()
                .map(|blk| {
                    format!(
                        "{}={} (deg {})",
                        blk.label,
                        res.b.display(&blk.generator),
                        blk.block.kind.degree()
                    )
                })
                .collect::<Vec<_>>()
                .join(", ")
        }
    ));
    text.push_str(&format!(
        "B̃ has {} generators\n",
        res.b_tilde.alphabet().len()
    ));
    let tainted = rep.tainted_degrees();
    if !tainted.is_empty() {
        text.push_str(&format!(
            "cap-tainted degrees (excluded from the verdict): {tainted:?}\n"
        ));
    }
    text.push_str(&rep.render_text());

    let mut doc = serde_json::Map::new();
    doc.insert(
        "rings".into(),
        serde_json::to_value(&b.rings).expect("rings"),
    );
    doc.insert("homs".into(), serde_json::to_value(&b.homs).expect("homs"));
    doc.insert(
        "generators".into(),
        serde_json::to_value(gens).expect("gens"),
    );
    doc.insert("report".into(), serde_json::to_value(rep).expect("report"));
    Output {
        passed: rep.passed,
        document: Value::Object(doc),
        text,
    }
}

/// A ring document as JSON, for writing example inputs.
pub fn ring_document(ring: &CdgRing) -> Value {
    serde_json::to_value(RingDoc::from_ring(ring)).expect("ring")
}
