//! `ℤ[x]` with `deg x = -2` has no divided powers: `x^2` is not divisible
//! by `2!`. The divided-power block avoids this because `x̄_1^2 = 2·x̄_2`.

use cdg_factor::dg_ring::RingBuilder;
use cdg_factor::graded::{CoefficientRing, Polynomial};
use cdg_factor::pd::pd_obstruction_witness;
use cdg_factor::standard_rings::c_even;

fn main() -> cdg_factor::Result<()> {
    let mut b = RingBuilder::new(CoefficientRing::Z);
    let x = b.var("x", -2);
    let zx = b.build()?;
    match pd_obstruction_witness(&zx, &Polynomial::var(x), 2)? {
        Some(w) => println!(
            "γ^{}({}) would be ({})/{}, but the coefficient {} of {} is not divisible by {}",
            w.k, w.element, w.power, w.divisor, w.coefficient, w.monomial, w.divisor
        ),
        None => println!("no obstruction"),
    }
    let c = c_even(-2, -12)?;
    let sq = c.ring.mul(&c.member(1), &c.member(1));
    println!("in the divided-power block: x1^2 = {}", c.ring.display(&sq));
    println!(
        "obstruction there: {:?}",
        pd_obstruction_witness(&c.ring, &c.member(1), 2)?
    );
    Ok(())
}
