//! Tensor products of blocks: renamed variables, inherited differentials,
//! and degreewise ranks that convolve.

use cdg_factor::complexes::{expand, Window};
use cdg_factor::dg_ring::tensor_labeled;
use cdg_factor::standard_rings::{c_even, c_odd};

fn main() -> cdg_factor::Result<()> {
    let odd = c_odd(-3)?.ring;
    let even = c_even(-2, -8)?.ring;
    let t = tensor_labeled(&[("s", &odd), ("t", &even)])?;
    let names: Vec<&str> = t
        .ring
        .alphabet()
        .variables()
        .iter()
        .map(|v| v.name.as_str())
        .collect();
    println!("variables: {names:?}");
    for inc in &t.inclusions {
        println!("inclusion is DG: {}", inc.check_dg().passed());
    }
    let w = Window::new(-8)?;
    println!("ranks C_odd(-3):  {:?}", expand(&odd, w)?.ranks());
    println!("ranks C_even(-2): {:?}", expand(&even, w)?.ranks());
    println!("ranks tensor:     {:?}", expand(&t.ring, w)?.ranks());
    Ok(())
}
