//! Factor the unit `ℤ → B` for `B` a divided-power block as
//! `ℤ → B̃ → B`, with `B̃` semi-free and `f̃` surjective, then verify
//! everything over the window.
//!
//! `cargo run --example factorization -- -12`

use cdg_factor::complexes::Window;
use cdg_factor::factorization::{factorize, FactorizationInput};
use cdg_factor::pd::PdOracle;
use cdg_factor::standard_rings::c_even;

fn main() -> cdg_factor::Result<()> {
    let floor: i32 = std::env::args()
        .nth(1)
        .map_or(-12, |s| s.parse().expect("window floor"));
    let b = c_even(-2, floor)?;
    let input = FactorizationInput {
        a: b.unit.source().clone(),
        b: b.ring.clone(),
        f: b.unit.clone(),
        pd: PdOracle::DpCanonical,
        window: Window::new(floor)?,
        minimize: false,
    };
    let (res, report) = factorize(&input)?;
    for (n, gens) in &res.selection.generators {
        let shown: Vec<String> = gens.iter().map(|g| res.b.display(g)).collect();
        println!("generators in degree {n}: {}", shown.join(", "));
    }
    let names: Vec<&str> = res
        .b_tilde
        .alphabet()
        .variables()
        .iter()
        .map(|v| v.name.as_str())
        .collect();
    println!("B̃ variables: {}", names.join(" "));
    print!("{}", report.render_text());
    Ok(())
}
