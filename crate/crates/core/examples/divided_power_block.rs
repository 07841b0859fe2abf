//! The divided-power block: rewriting `x̄_i·x̄_j = binom(i+j, j)·x̄_{i+j}`,
//! the relation identity `d(r_{i,j}) = (r_{i-1,j} + r_{i,j-1})·y` in the free
//! ring, and the cohomology of the quotient.
//!
//! `cargo run --example divided_power_block -- -2`

use cdg_factor::complexes::{expand, Window};
use cdg_factor::standard_rings::{c_even, c_tilde_even, divided_power_relation};

fn main() -> cdg_factor::Result<()> {
    let n: i32 = std::env::args()
        .nth(1)
        .map_or(-2, |s| s.parse().expect("even degree"));
    let floor = -12;
    let block = c_even(n, floor)?;
    let r = &block.ring;
    for (i, j) in [(1, 1), (1, 2), (2, 3)] {
        let p = r.mul(&block.member(i), &block.member(j));
        println!("x{i}·x{j} = {}", r.display(&p));
    }

    let free = c_tilde_even(n, 5)?;
    let y = free.gen("y")?;
    let rel = |i, j| divided_power_relation(&free, i, j);
    let lhs = free.d(&rel(2, 3));
    let rhs = (&rel(1, 3) + &rel(2, 2)).mul(&y);
    println!("d(r(2,3)) = {}", free.display(&lhs));
    println!("matches (r(1,3) + r(2,2))·y: {}", lhs == rhs);

    let exp = expand(r, Window::new(floor)?)?;
    print!("{}", exp.complex().cohomology_report()?.render_text());
    Ok(())
}
