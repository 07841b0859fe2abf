//! The two building blocks of the factorization: the odd Koszul block
//! `ℤ[x, y]` with `dx = y`, and the divided-power block on `x̄_1, x̄_2, …, ȳ`
//! with `d x̄_i = x̄_{i-1}·ȳ`, together with their unit, augmentation and an
//! explicit contraction onto `ℤ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::complexes::{check_homotopy, expand, ChainMapWindow, RingExpansion, Window};
use crate::dg_ring::{CdgRing, DividedPowerFamily, RingBuilder, RingHom};
use crate::error::{Error, Result};
use crate::graded::{CoefficientRing, Monomial, Polynomial};
use crate::matrix::IntMatrix;
use crate::report::DegreeReport;
use crate::util::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BlockKind {
    /// Generator `x` in odd degree `n`, `y = dx` in degree `n + 1`.
    Odd { n: i32 },
    /// Members `x_1..x_K` in degrees `n·i`, companion `y` in degree `n + 1`.
    Even { n: i32, cutoff: usize },
}

impl BlockKind {
    pub fn degree(&self) -> i32 {
        match *self {
            BlockKind::Odd { n } | BlockKind::Even { n, .. } => n,
        }
    }
}

/// A block ring with its unit `e : ℤ → C` and augmentation `p : C → ℤ`.
#[derive(Clone, Debug)]
pub struct Block {
    pub kind: BlockKind,
    pub ring: Arc<CdgRing>,
    pub unit: RingHom,
    pub augmentation: RingHom,
}

/// `ℤ[x, y]` with `deg x = n`, `dx = y`, `dy = 0`.
pub fn c_odd(n: i32) -> Result<Block> {
    if n > -1 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "odd block needs an odd degree n <= -1, got {n}"
        )));
    }
    let mut b = RingBuilder::new(CoefficientRing::Z);
    let x = b.var("x", n);
    let y = b.var("y", n + 1);
    b.set_d(x, Polynomial::var(y));
    Ok(Block::from_ring(BlockKind::Odd { n }, b.build()?))
}

/// Least `K` with `n·(K + 1) < floor - 1`: the members that reach the guard band.
pub fn even_cutoff(n: i32, floor: i32) -> usize {
    let mut k = 0usize;
    while n * (k as i32 + 1) >= floor - 1 {
        k += 1;
    }
    k
}

fn check_even(n: i32) -> Result<()> {
    if n > -2 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "divided-power block needs an even degree n <= -2, got {n}"
        )));
    }
    Ok(())
}

/// The divided-power block sized for the window `[floor, 0]`.
pub fn c_even(n: i32, floor: i32) -> Result<Block> {
    check_even(n)?;
    if floor > -1 {
        return Err(Error::InvalidInput(format!(
            "window floor must be negative, got {floor}"
        )));
    }
    let k = even_cutoff(n, floor);
    if k == 0 {
        return Err(Error::InvalidInput(format!(
            "window floor {floor} is too shallow for a block in degree {n}"
        )));
    }
    c_even_with_cutoff(n, k)
}

/// The divided-power block with members `x_1..x_K`.
pub fn c_even_with_cutoff(n: i32, k: usize) -> Result<Block> {
    let ring = even_ring(n, k, true)?;
    Ok(Block::from_ring(BlockKind::Even { n, cutoff: k }, ring))
}

/// The free ring `ℤ[x_1..x_K, y]` with the same differential and no relations.
pub fn c_tilde_even(n: i32, k: usize) -> Result<CdgRing> {
    even_ring(n, k, false)
}

fn even_ring(n: i32, k: usize, quotient: bool) -> Result<CdgRing> {
    check_even(n)?;
    if k == 0 {
        return Err(Error::InvalidInput(
            "divided-power block needs K >= 1".into(),
        ));
    }
    let mut b = RingBuilder::new(CoefficientRing::Z);
    let xs: Vec<_> = (1..=k)
        .map(|i| b.var(format!("x{i}"), n * i as i32))
        .collect();
    let y = b.var("y", n + 1);
    b.set_d(xs[0], Polynomial::var(y));
    for i in 1..k {
        b.set_d(xs[i], Polynomial::var(xs[i - 1]).mul(&Polynomial::var(y)));
    }
    if quotient {
        b.family(DividedPowerFamily::new("x", n, xs, Some(y))?);
    }
    b.build()
}

/// `x_i` in a ring with variables `x1, x2, …`, with `x_0 = 1` and zero past the cutoff.
fn member(ring: &CdgRing, i: usize) -> Polynomial {
    if i == 0 {
        return Polynomial::one();
    }
    ring.gen(&format!("x{i}"))
        .unwrap_or_else(|_| Polynomial::zero())
}

/// `r_{i,j} = x_i·x_j - binom(i+j, j)·x_{i+j}`, computed without rewriting
/// (so it is nonzero in the free ring and zero in the quotient).
pub fn divided_power_relation(ring: &CdgRing, i: usize, j: usize) -> Polynomial {
    let prod = ring.reduce(&member(ring, i).mul(&member(ring, j)));
    &prod - &member(ring, i + j).scale_int(binomial(i + j, j))
}

impl Block {
    fn from_ring(kind: BlockKind, ring: CdgRing) -> Self {
        let ring = Arc::new(ring);
        Block {
            kind,
            unit: RingHom::unit(ring.clone()),
            augmentation: RingHom::augmentation(ring.clone()),
            ring,
        }
    }

    pub fn x(&self) -> Polynomial {
        match self.kind {
            BlockKind::Odd { .. } => self.ring.gen("x").expect("x"),
            BlockKind::Even { .. } => self.ring.gen("x1").expect("x1"),
        }
    }

    pub fn y(&self) -> Polynomial {
        self.ring.gen("y").expect("y")
    }

    /// `x̄_i` of an even block (`x̄_0 = 1`, zero past the cutoff).
    pub fn member(&self, i: usize) -> Polynomial {
        member(&self.ring, i)
    }

    /// The contracting homotopy on one basis monomial, or `None` where the
    /// value would leave the presentation.
    fn h_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let y = self.ring.var("y").expect("y");
        let ey = m.exponent(y);
        match self.kind {
            BlockKind::Odd { .. } => {
                let x = self.ring.var("x").expect("x");
                if m.exponent(x) == 0 && ey >= 1 {
                    // h(y^{i+1}) = x·y^i
                    let rest = Monomial::power(y, ey - 1);
                    Some(Polynomial::var(x).mul(&Polynomial::monomial(rest)))
                } else {
                    Some(Polynomial::zero())
                }
            }
            BlockKind::Even { cutoff, .. } => {
                if ey == 0 {
                    return Some(Polynomial::zero());
                }
                // m = x̄_{i-1}·ȳ ↦ x̄_i
                let i = if m.factors().len() == 1 {
                    1
                } else {
                    let (v, _) = m.factors()[0];
                    self.ring.family_of(v).expect("family member").1 + 1
                };
                (i <= cutoff).then(|| self.member(i))
            }
        }
    }

    /// The matrices `h^i : C^i → C^{i-1}` for `i` in `[floor + 1, 0]`.
    pub fn homotopy(&self, exp: &RingExpansion) -> Result<BTreeMap<i32, IntMatrix>> {
        let mut out = BTreeMap::new();
        for i in exp.complex().exact_degrees() {
            let cols = exp
                .basis(i)
                .iter()
                .map(|m| match self.h_monomial(m) {
                    Some(p) => Ok(exp.coordinates(i - 1, &p)?.0),
                    None => Ok(vec![0.into(); exp.rank(i - 1)]),
                })
                .collect::<Result<Vec<_>>>()?;
            out.insert(i, IntMatrix::from_columns(exp.rank(i - 1), &cols));
        }
        Ok(out)
    }

    /// Expands the block and packages `π = p`, `ι = e` and `h`.
    pub fn contraction(&self, window: Window) -> Result<ContractionWitness> {
        let expansion = expand(&self.ring, window)?;
        let scalars = expand(self.unit.source(), window)?;
        let projection = ChainMapWindow::from_hom(&self.augmentation, &expansion, &scalars)?;
        let inclusion = ChainMapWindow::from_hom(&self.unit, &scalars, &expansion)?;
        let homotopy = self.homotopy(&expansion)?;
        Ok(ContractionWitness {
            expansion,
            scalars,
            projection,
            inclusion,
            homotopy,
        })
    }
}

/// Data certifying that a block is chain homotopy equivalent to `ℤ`.
#[derive(Clone, Debug)]
pub struct ContractionWitness {
    pub expansion: RingExpansion,
    pub scalars: RingExpansion,
    pub projection: ChainMapWindow,
    pub inclusion: ChainMapWindow,
    pub homotopy: BTreeMap<i32, IntMatrix>,
}

impl ContractionWitness {
    pub fn check(&self) -> Result<DegreeReport> {
        check_homotopy(
            self.expansion.complex(),
            &self.projection,
            &self.inclusion,
            &self.homotopy,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_block_differential() {
        let c = c_odd(-3).unwrap();
        let xy = c.x().mul(&c.y());
        assert_eq!(c.ring.d(&xy), c.y().mul(&c.y()));
        assert!(c.ring.check_d_squared().passed());
        assert!(matches!(c_odd(-2), Err(Error::InvalidInput(_))));
        assert!(matches!(c_odd(1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn augmentation_kills_generators() {
        let c = c_odd(-3).unwrap();
        let p = Polynomial::integer(5) + c.x().mul(&c.y()).scale_int(2);
        assert_eq!(c.augmentation.apply(&p), Polynomial::integer(5));
        let pe = c.augmentation.compose(&c.unit).unwrap();
        assert!(pe.images().is_empty());
    }

    #[test]
    fn cutoff_from_window() {
        assert_eq!(even_cutoff(-2, -12), 6);
        assert_eq!(even_cutoff(-4, -12), 3);
        assert_eq!(even_cutoff(-2, -1), 1);
        assert_eq!(even_cutoff(-20, -2), 0);
        assert!(c_even(-20, -2).is_err());
        assert!(c_even(-3, -12).is_err());
    }

    #[test]
    fn first_member_squared() {
        let c = c_even(-2, -12).unwrap();
        let sq = c.ring.mul(&c.member(1), &c.member(1));
        assert_eq!(sq, c.member(2).scale_int(2));
        let p = c.ring.mul(&c.member(2), &c.member(3));
        assert_eq!(p, c.member(5).scale_int(10));
    }

    #[test]
    fn even_block_cocycles() {
        let c = c_even(-2, -12).unwrap();
        for i in 1..=6 {
            let xy = c.ring.mul(&c.member(i), &c.y());
            assert!(c.ring.d(&xy).is_zero());
            let expect = c.ring.mul(&c.member(i - 1), &c.y());
            assert_eq!(c.ring.d(&c.member(i)), expect);
        }
    }

    #[test]
    fn relation_r11_is_closed() {
        let t = c_tilde_even(-2, 4).unwrap();
        let r11 = divided_power_relation(&t, 1, 1);
        assert!(!r11.is_zero());
        assert!(t.d(&r11).is_zero());
        assert!(divided_power_relation(&t, 3, 0).is_zero());
    }

    #[test]
    fn contractions_pass() {
        let w = Window::new(-10).unwrap();
        for n in [-3, -5] {
            let r = c_odd(n).unwrap().contraction(w).unwrap().check().unwrap();
            assert!(r.passed(), "{}", r.render_text());
        }
        let w = Window::new(-12).unwrap();
        for n in [-2, -4] {
            let r = c_even(n, -12)
                .unwrap()
                .contraction(w)
                .unwrap()
                .check()
                .unwrap();
            assert!(r.passed(), "{}", r.render_text());
        }
    }

    #[test]
    fn capped_odd_block_taints_degree_zero() {
        let w = Window::new(-10).unwrap().with_cap(6);
        let wit = c_odd(-1).unwrap().contraction(w).unwrap();
        let r = wit.check().unwrap();
        assert!(r.passed());
        assert_eq!(r.tainted_degrees(), vec![-1, 0]);
        assert!(matches!(
            c_odd(-1).unwrap().contraction(Window::new(-10).unwrap()),
            Err(Error::UncappedDegreeZero(_))
        ));
    }
}
