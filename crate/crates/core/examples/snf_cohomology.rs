//! Smith normal form and integral cohomology of a small complex with torsion.

use std::collections::BTreeMap;

use cdg_factor::complexes::WindowComplex;
use cdg_factor::matrix::{smith_normal_form, IntMatrix};

fn main() -> cdg_factor::Result<()> {
    let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&a);
    println!("invariant factors: {:?}", snf.invariants);
    println!("U·A·V = D: {}", snf.u.mul(&a).mul(&snf.v) == snf.d);

    // ℤ² → ℤ² by diag(2, 6), then ℤ² → 0.
    let labels = BTreeMap::from([
        (-2, vec!["a".into(), "b".into()]),
        (-1, vec!["c".into(), "d".into()]),
    ]);
    let d = BTreeMap::from([(-2, IntMatrix::from_rows(&[vec![2, 0], vec![0, 6]]))]);
    let m = WindowComplex::new(-4, labels, d)?;
    for i in m.exact_degrees() {
        println!("H^{i} = {}", m.cohomology(i)?);
    }
    Ok(())
}
