//! Divided-power oracles: the axioms for `a^k/k!` over ℚ and for the
//! canonical structure on a divided-power block, plus a table that breaks
//! the product rule.

use std::collections::BTreeMap;

use cdg_factor::dg_ring::RingBuilder;
use cdg_factor::graded::{CoefficientRing, Polynomial};
use cdg_factor::pd::{check_pd, PdOracle};
use cdg_factor::standard_rings::c_even;

fn main() -> cdg_factor::Result<()> {
    let mut b = RingBuilder::new(CoefficientRing::Q);
    let a = b.var("a", -2);
    let u = b.var("u", -1);
    b.set_d(a, Polynomial::var(u));
    let q = b.build()?;
    let pa = Polynomial::var(a);
    let rep = check_pd(&PdOracle::Char0, &q, &[pa.clone(), q.mul(&pa, &pa)], 3, 3)?;
    println!(
        "char0 over Q: {}",
        if rep.passed() { "pass" } else { "FAIL" }
    );
    println!(
        "γ^3(a) = {}",
        q.display(&PdOracle::Char0.gamma(&q, 3, &pa)?.value)
    );

    let c = c_even(-2, -12)?;
    let members = [c.member(1), c.member(2)];
    let rep = check_pd(&PdOracle::DpCanonical, &c.ring, &members, 4, 4)?;
    println!(
        "dp-canonical on x1, x2: {}",
        if rep.passed() { "pass" } else { "FAIL" }
    );

    let table = PdOracle::Table(BTreeMap::from([(
        "x1".to_string(),
        BTreeMap::from([(2, c.member(2).scale_int(2))]),
    )]));
    let rep = check_pd(&table, &c.ring, &[c.member(1)], 2, 2)?;
    print!("{}", rep.render_text());
    Ok(())
}
