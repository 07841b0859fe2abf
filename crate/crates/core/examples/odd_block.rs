//! The odd block `ℤ[x, y]`, `dx = y`: its window complex, contracting
//! homotopy, and the quasi-isomorphism `ℤ → C`.
//!
//! `cargo run --example odd_block -- -3`

use cdg_factor::complexes::{check_quasi_iso, Window};
use cdg_factor::standard_rings::c_odd;

fn main() -> cdg_factor::Result<()> {
    let n: i32 = std::env::args()
        .nth(1)
        .map_or(-3, |s| s.parse().expect("odd degree"));
    let block = c_odd(n)?;
    let r = &block.ring;
    let xy = r.mul(&block.x(), &block.y());
    println!("d({}) = {}", r.display(&xy), r.display(&r.d(&xy)));
    println!("d∘d = 0 on generators: {}", r.check_d_squared().passed());

    let mut window = Window::new(-10)?;
    if n == -1 {
        window = window.with_cap(6);
    }
    let cw = block.contraction(window)?;
    println!("ranks: {:?}", cw.expansion.ranks());
    print!("{}", cw.check()?.render_text());
    let qi = check_quasi_iso(&cw.inclusion, cw.scalars.complex(), cw.expansion.complex())?;
    print!("{}", qi.render_text());
    Ok(())
}
