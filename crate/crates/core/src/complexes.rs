//! Degree-window expansions of DG rings into integer cochain complexes, and
//! the lattice computations on them: cocycles `Z`, coboundaries `B`,
//! `W = M / Z`, cohomology, and the verdicts on chain maps.
//!
//! A window `[floor, 0]` is expanded one degree further down (`floor - 1`) so
//! that coboundaries are exact from `floor` on. Cohomology is reported for
//! `[floor + 1, 0]`, maps on cohomology for `[floor + 2, 0]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dg_ring::{CdgRing, RingHom};
use crate::error::{Error, Result};
use crate::graded::{Monomial, Polynomial};
use crate::matrix::{smith_normal_form, IntMatrix, Snf};
use crate::report::{DegreeEntry, DegreeReport};

/// The degree range `[floor, 0]` plus the exponent cap for degree-0 variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub floor: i32,
    pub cap: Option<u32>,
}

impl Window {
    pub fn new(floor: i32) -> Result<Self> {
        if floor > -1 {
            return Err(Error::InvalidInput(format!(
                "window floor must be negative, got {floor}"
            )));
        }
        Ok(Window { floor, cap: None })
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = Some(cap);
        self
    }

    /// Bottom of the guard band.
    pub fn lowest(&self) -> i32 {
        self.floor - 1
    }

    /// Degrees with exact cohomology.
    pub fn exact_degrees(&self) -> RangeInclusive<i32> {
        self.floor + 1..=0
    }

    /// Degrees where maps on cohomology are reported.
    pub fn map_degrees(&self) -> RangeInclusive<i32> {
        self.floor + 2..=0
    }
}

/// A finitely generated abelian group `ℤ^r ⊕ ⊕ ℤ/t_k` in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub free_rank: usize,
    /// Each at least 2, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl CohomologyGroup {
    pub fn zero() -> Self {
        CohomologyGroup::default()
    }

    pub fn free(r: usize) -> Self {
        CohomologyGroup {
            free_rank: r,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for CohomologyGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CohomologyGroup", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let t: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        st.serialize_field("torsion", &t)?;
        st.serialize_field("group", &self.to_string())?;
        st.end()
    }
}

/// Basis of coset representatives for `W^i = M^i / Z^i` (always free).
#[derive(Clone, Debug)]
pub struct WQuotient {
    pub rank: usize,
    pub representatives: IntMatrix,
}

/// A cochain complex of free abelian groups over `[floor - 1, 0]`.
#[derive(Clone, Debug)]
pub struct WindowComplex {
    floor: i32,
    labels: BTreeMap<i32, Vec<String>>,
    // d^i : degree i -> degree i + 1
    differentials: BTreeMap<i32, IntMatrix>,
    tainted: BTreeSet<i32>,
}

impl WindowComplex {
    /// Builds a complex from per-degree basis labels and differentials
    /// `d^i` for `i` in `[floor - 1, -1]` (missing ones are zero).
    pub fn new(
        floor: i32,
        labels: BTreeMap<i32, Vec<String>>,
        differentials: BTreeMap<i32, IntMatrix>,
    ) -> Result<Self> {
        let lo = floor - 1;
        if let Some(&d) = labels.keys().find(|&&d| d < lo || d > 0) {
            return Err(Error::InsufficientWindow {
                degree: d,
                lo,
                hi: 0,
            });
        }
        let labels: BTreeMap<i32, Vec<String>> = (lo..=0)
            .map(|i| (i, labels.get(&i).cloned().unwrap_or_default()))
            .collect();
        let mut ds = BTreeMap::new();
        for i in lo..=0 {
            let rows = if i == 0 { 0 } else { labels[&(i + 1)].len() };
            let cols = labels[&i].len();
            let m = differentials
                .get(&i)
                .cloned()
                .unwrap_or_else(|| IntMatrix::zeros(rows, cols));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::InvalidInput(format!(
                    "d^{i} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            ds.insert(i, m);
        }
        if let Some(&d) = differentials.keys().find(|&&d| d < lo || d > 0) {
            return Err(Error::InsufficientWindow {
                degree: d,
                lo,
                hi: 0,
            });
        }
        Ok(WindowComplex {
            floor,
            labels,
            differentials: ds,
            tainted: BTreeSet::new(),
        })
    }

    /// Abstract complex with `ranks[i]` anonymous basis elements per degree.
    pub fn from_ranks(
        floor: i32,
        ranks: &BTreeMap<i32, usize>,
        differentials: BTreeMap<i32, IntMatrix>,
    ) -> Result<Self> {
        let labels = ranks
            .iter()
            .map(|(&i, &r)| (i, (0..r).map(|k| format!("e{i}.{k}")).collect()))
            .collect();
        WindowComplex::new(floor, labels, differentials)
    }

    /// `ℤ` concentrated in degree 0.
    pub fn unit(floor: i32) -> Self {
        let labels = BTreeMap::from([(0, vec!["1".to_string()])]);
        WindowComplex::new(floor, labels, BTreeMap::new()).expect("unit complex")
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn lowest(&self) -> i32 {
        self.floor - 1
    }

    pub fn degrees(&self) -> RangeInclusive<i32> {
        self.lowest()..=0
    }

    pub fn exact_degrees(&self) -> RangeInclusive<i32> {
        self.floor + 1..=0
    }

    pub fn map_degrees(&self) -> RangeInclusive<i32> {
        self.floor + 2..=0
    }

    fn require(&self, i: i32, range: RangeInclusive<i32>) -> Result<()> {
        if range.contains(&i) {
            Ok(())
        } else {
            Err(Error::InsufficientWindow {
                degree: i,
                lo: *range.start(),
                hi: *range.end(),
            })
        }
    }

    pub fn rank(&self, i: i32) -> usize {
        self.labels.get(&i).map_or(0, Vec::len)
    }

    pub fn labels(&self, i: i32) -> &[String] {
        self.labels.get(&i).map_or(&[], Vec::as_slice)
    }

    /// `d^i : M^i → M^{i+1}`.
    pub fn d(&self, i: i32) -> Result<&IntMatrix> {
        self.require(i, self.degrees())?;
        Ok(&self.differentials[&i])
    }

    pub fn replace_differential(&mut self, i: i32, m: IntMatrix) -> Result<()> {
        let old = self.d(i)?;
        if (old.rows(), old.cols()) != (m.rows(), m.cols()) {
            return Err(Error::InvalidInput(format!("d^{i} has the wrong shape")));
        }
        self.differentials.insert(i, m);
        Ok(())
    }

    pub fn is_tainted(&self, i: i32) -> bool {
        self.tainted.contains(&i)
    }

    pub fn tainted(&self) -> &BTreeSet<i32> {
        &self.tainted
    }

    pub fn mark_tainted(&mut self, i: i32) {
        self.tainted.insert(i);
    }

    /// `d^{i+1}·d^i = 0` throughout the guard-banded window.
    pub fn check_d_squared(&self) -> DegreeReport {
        let mut r = DegreeReport::new("d^2 = 0 (matrices)");
        for i in self.lowest()..0 {
            let dd = self.differentials[&(i + 1)].mul(&self.differentials[&i]);
            let mut e = DegreeEntry::new(i, dd.is_zero());
            if !dd.is_zero() {
                e = e.detail(format!("d^{}·d^{} ≠ 0", i + 1, i));
            }
            r.push(e);
        }
        r
    }

    /// Basis of the cocycle lattice `Z^i` (saturated).
    pub fn cocycles(&self, i: i32) -> Result<IntMatrix> {
        Ok(smith_normal_form(self.d(i)?).kernel())
    }

    /// Generators of the coboundary lattice `B^i` (the columns of `d^{i-1}`).
    pub fn coboundaries(&self, i: i32) -> Result<IntMatrix> {
        self.require(i, self.floor..=0)?;
        Ok(self.differentials[&(i - 1)].clone())
    }

    pub fn w_quotient(&self, i: i32) -> Result<WQuotient> {
        let snf = smith_normal_form(self.d(i)?);
        let idx: Vec<usize> = (0..snf.rank).collect();
        Ok(WQuotient {
            rank: snf.rank,
            representatives: snf.v.select_columns(&idx),
        })
    }

    pub fn cohomology(&self, i: i32) -> Result<CohomologyGroup> {
        self.require(i, self.exact_degrees())?;
        let z = self.cocycles(i)?;
        let b = self.coboundaries(i)?;
        let coords = coordinates_in(&smith_normal_form(&z), &b).ok_or_else(|| {
            Error::InvalidInput(format!(
                "not a complex at degree {i}: B^{i} is not inside Z^{i}"
            ))
        })?;
        let snf = smith_normal_form(&coords);
        Ok(CohomologyGroup {
            free_rank: z.cols() - snf.rank,
            torsion: snf.torsion(),
        })
    }

    /// Cohomology in every exact degree, reported as a degree table.
    pub fn cohomology_report(&self) -> Result<DegreeReport> {
        let mut r = DegreeReport::new("cohomology");
        for i in self.exact_degrees() {
            let h = self.cohomology(i)?;
            r.push(
                DegreeEntry::new(i, true)
                    .invariant(format!("rank={}", self.rank(i)))
                    .invariant(format!("H={h}"))
                    .tainted(self.is_tainted(i)),
            );
        }
        Ok(r)
    }
}

/// Coordinates of every column of `vectors` in the basis whose SNF is `basis`.
fn coordinates_in(basis: &Snf, vectors: &IntMatrix) -> Option<IntMatrix> {
    let cols: Option<Vec<Vec<BigInt>>> = (0..vectors.cols())
        .map(|j| basis.solve(&vectors.column(j)))
        .collect();
    Some(IntMatrix::from_columns(basis.v.rows(), &cols?))
}

/// A DG ring expanded into its window complex, keeping the monomial basis.
#[derive(Clone, Debug)]
pub struct RingExpansion {
    ring: Arc<CdgRing>,
    window: Window,
    complex: WindowComplex,
    basis: BTreeMap<i32, Vec<Monomial>>,
    index: HashMap<Monomial, usize>,
}

impl RingExpansion {
    pub fn ring(&self) -> &Arc<CdgRing> {
        &self.ring
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn complex(&self) -> &WindowComplex {
        &self.complex
    }

    pub fn basis(&self, i: i32) -> &[Monomial] {
        self.basis.get(&i).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, i: i32) -> usize {
        self.complex.rank(i)
    }

    pub fn ranks(&self) -> BTreeMap<i32, usize> {
        self.complex.degrees().map(|i| (i, self.rank(i))).collect()
    }

    /// Position of a normal-form monomial within its degree's basis.
    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Integer coordinates of a homogeneous element of degree `i`. The flag
    /// reports terms dropped because they exceed the exponent cap.
    pub fn coordinates(&self, i: i32, p: &Polynomial) -> Result<(Vec<BigInt>, bool)> {
        self.complex.require(i, self.complex.degrees())?;
        let mut v = vec![BigInt::zero(); self.rank(i)];
        let mut truncated = false;
        for (m, c) in p.terms() {
            if m.degree() != i {
                return Err(Error::Internal(format!(
                    "term {} has degree {}, expected {i}",
                    self.ring.alphabet().display_monomial(m),
                    m.degree()
                )));
            }
            if !c.is_integer() {
                return Err(Error::InvalidInput(
                    "window expansion needs integer coefficients".into(),
                ));
            }
            match self.index.get(m) {
                Some(&k) => v[k] += c.to_integer(),
                None if self.exceeds_cap(m) => truncated = true,
                None => {
                    return Err(Error::Internal(format!(
                        "monomial {} is not in the normal-form basis",
                        self.ring.alphabet().display_monomial(m)
                    )))
                }
            }
        }
        Ok((v, truncated))
    }

    fn exceeds_cap(&self, m: &Monomial) -> bool {
        let cap = self.window.cap.unwrap_or(0);
        m.factors().iter().any(|&(v, e)| v.degree() == 0 && e > cap)
    }

    /// The element with the given coordinates in degree `i`.
    pub fn element(&self, i: i32, coords: &[BigInt]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in self.basis(i).iter().zip(coords) {
            p.add_term(m.clone(), crate::graded::Coeff::from_integer(c.clone()));
        }
        p
    }
}

/// Expands `ring` over `[window.floor - 1, 0]` in its normal-form monomial basis.
pub fn expand(ring: &Arc<CdgRing>, window: Window) -> Result<RingExpansion> {
    let lo = window.lowest();
    let vars: Vec<_> = ring.alphabet().vars().collect();
    for &v in &vars {
        if v.degree() == 0 && window.cap.is_none() {
            return Err(Error::UncappedDegreeZero(
                ring.alphabet().name(v).to_string(),
            ));
        }
    }
    let cap = window.cap.unwrap_or(0);

    let mut basis: BTreeMap<i32, Vec<Monomial>> = (lo..=0).map(|i| (i, Vec::new())).collect();
    let mut capped: BTreeSet<i32> = BTreeSet::new();
    let mut family_used = vec![false; ring.families().len()];
    let mut stack: Vec<(crate::graded::Var, u32)> = Vec::new();
    enumerate(
        ring,
        &vars,
        0,
        0,
        lo,
        cap,
        &mut stack,
        &mut family_used,
        &mut basis,
        &mut capped,
    );
    for ms in basis.values_mut() {
        ms.sort();
    }

    let mut index = HashMap::new();
    for ms in basis.values() {
        for (k, m) in ms.iter().enumerate() {
            index.insert(m.clone(), k);
        }
    }
    let labels = basis
        .iter()
        .map(|(&i, ms)| {
            (
                i,
                ms.iter()
                    .map(|m| ring.alphabet().display_monomial(m))
                    .collect(),
            )
        })
        .collect();
    let complex = WindowComplex::new(window.floor, labels, BTreeMap::new())?;
    let mut exp = RingExpansion {
        ring: ring.clone(),
        window,
        complex,
        basis,
        index,
    };

    let mut d_truncated = BTreeSet::new();
    for i in lo..0 {
        let cols: Vec<Vec<BigInt>> = exp
            .basis(i)
            .iter()
            .map(|m| {
                let (v, t) = exp.coordinates(i + 1, &ring.d_monomial(m))?;
                if t {
                    d_truncated.insert(i);
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let m = IntMatrix::from_columns(exp.rank(i + 1), &cols);
        exp.complex.differentials.insert(i, m);
    }
    for i in lo..=0 {
        if capped.contains(&i) || d_truncated.contains(&i) || d_truncated.contains(&(i - 1)) {
            exp.complex.tainted.insert(i);
        }
    }
    Ok(exp)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    ring: &CdgRing,
    vars: &[crate::graded::Var],
    k: usize,
    degree: i32,
    lo: i32,
    cap: u32,
    stack: &mut Vec<(crate::graded::Var, u32)>,
    family_used: &mut [bool],
    basis: &mut BTreeMap<i32, Vec<Monomial>>,
    capped: &mut BTreeSet<i32>,
) {
    if k == vars.len() {
        let (m, s) = crate::graded::normalize(stack.iter().copied());
        debug_assert_eq!(s, 1);
        if stack.iter().any(|&(v, e)| v.degree() == 0 && e == cap) {
            capped.insert(degree);
        }
        basis.get_mut(&degree).expect("degree in window").push(m);
        return;
    }
    let v = vars[k];
    let family = ring.family_of(v).map(|(f, _)| {
        ring.families()
            .iter()
            .position(|g| std::ptr::eq(g, f))
            .expect("family")
    });
    let max_e: u32 = match family {
        Some(f) if family_used[f] => 0,
        Some(_) => 1,
        None if v.is_odd() => 1,
        None if v.degree() == 0 => cap,
        None => ((degree - lo) / -v.degree()) as u32,
    };
    for e in 0..=max_e {
        let dd = degree + v.degree() * e as i32;
        if dd < lo {
            break;
        }
        if e > 0 {
            stack.push((v, e));
        }
        if let (Some(f), true) = (family, e > 0) {
            family_used[f] = true;
        }
        enumerate(
            ring,
            vars,
            k + 1,
            dd,
            lo,
            cap,
            stack,
            family_used,
            basis,
            capped,
        );
        if let (Some(f), true) = (family, e > 0) {
            family_used[f] = false;
        }
        if e > 0 {
            stack.pop();
        }
    }
}

/// Per-degree matrices of a degree-0 map between two window complexes.
#[derive(Clone, Debug)]
pub struct ChainMapWindow {
    floor: i32,
    maps: BTreeMap<i32, IntMatrix>,
    tainted: BTreeSet<i32>,
}

impl ChainMapWindow {
    pub fn new(floor: i32, maps: BTreeMap<i32, IntMatrix>) -> Self {
        ChainMapWindow {
            floor,
            maps,
            tainted: BTreeSet::new(),
        }
    }

    /// The matrices of a ring homomorphism between two expansions.
    pub fn from_hom(hom: &RingHom, source: &RingExpansion, target: &RingExpansion) -> Result<Self> {
        if source.window.floor != target.window.floor {
            return Err(Error::InvalidInput(
                "expansions use different windows".into(),
            ));
        }
        let mut maps = BTreeMap::new();
        let mut tainted = BTreeSet::new();
        for i in source.complex.degrees() {
            let cols: Vec<Vec<BigInt>> = source
                .basis(i)
                .iter()
                .map(|m| {
                    let (v, t) = target.coordinates(i, &hom.apply_monomial(m))?;
                    if t {
                        tainted.insert(i);
                    }
                    Ok(v)
                })
                .collect::<Result<_>>()?;
            maps.insert(i, IntMatrix::from_columns(target.rank(i), &cols));
        }
        Ok(ChainMapWindow {
            floor: source.window.floor,
            maps,
            tainted,
        })
    }

    /// Identity map on a complex.
    pub fn identity(c: &WindowComplex) -> Self {
        let maps = c
            .degrees()
            .map(|i| (i, IntMatrix::identity(c.rank(i))))
            .collect();
        ChainMapWindow::new(c.floor, maps)
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn map(&self, i: i32) -> Result<&IntMatrix> {
        self.maps.get(&i).ok_or(Error::InsufficientWindow {
            degree: i,
            lo: self.floor - 1,
            hi: 0,
        })
    }

    pub fn is_tainted(&self, i: i32) -> bool {
        self.tainted.contains(&i)
    }

    pub fn mark_tainted(&mut self, i: i32) {
        self.tainted.insert(i);
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainMapWindow) -> Result<ChainMapWindow> {
        let mut maps = BTreeMap::new();
        for (&i, m) in &inner.maps {
            maps.insert(i, self.map(i)?.mul(m));
        }
        let tainted = self.tainted.union(&inner.tainted).copied().collect();
        Ok(ChainMapWindow {
            floor: self.floor,
            maps,
            tainted,
        })
    }

    /// Multiplies the column of basis element `col` in degree `i` by `factor`.
    pub fn scale_column(&mut self, i: i32, col: usize, factor: i64) -> Result<()> {
        let m = self.maps.get_mut(&i).ok_or(Error::InsufficientWindow {
            degree: i,
            lo: self.floor - 1,
            hi: 0,
        })?;
        if col >= m.cols() {
            return Err(Error::InvalidInput(format!(
                "no basis element {col} in degree {i}"
            )));
        }
        m.scale_column(col, &BigInt::from(factor));
        Ok(())
    }

    /// `d_target^i·φ^i = φ^{i+1}·d_source^i` wherever both sides are in the window.
    pub fn check_commutes(
        &self,
        source: &WindowComplex,
        target: &WindowComplex,
    ) -> Result<DegreeReport> {
        let mut r = DegreeReport::new("chain map commutes with d");
        for i in source.lowest()..0 {
            let lhs = target.d(i)?.mul(self.map(i)?);
            let rhs = self.map(i + 1)?.mul(source.d(i)?);
            r.push(
                DegreeEntry::new(i, lhs == rhs)
                    .tainted(self.is_tainted(i) || self.is_tainted(i + 1)),
            );
        }
        Ok(r)
    }
}

/// Action on `H^i` of a chain map: whether it is injective and surjective.
struct InducedOnCohomology {
    injective: bool,
    surjective: bool,
    source: CohomologyGroup,
    target: CohomologyGroup,
}

fn induced_on_cohomology(
    phi: &IntMatrix,
    source: &WindowComplex,
    target: &WindowComplex,
    i: i32,
) -> Result<InducedOnCohomology> {
    let zs = source.cocycles(i)?;
    let bs = source.coboundaries(i)?;
    let zt = target.cocycles(i)?;
    let bt = target.coboundaries(i)?;
    let zs_snf = smith_normal_form(&zs);
    let zt_snf = smith_normal_form(&zt);
    let not_chain = || Error::InvalidInput(format!("map is not a chain map at degree {i}"));
    let psi = coordinates_in(&zt_snf, &phi.mul(&zs)).ok_or_else(not_chain)?;
    let bt_c = coordinates_in(&zt_snf, &bt).ok_or_else(not_chain)?;
    let bs_c = coordinates_in(&zs_snf, &bs).ok_or_else(not_chain)?;

    let joint = psi.hcat(&bt_c);
    let joint_snf = smith_normal_form(&joint);
    let surjective = joint_snf.is_onto();
    // kernel of Z_s → Z_t / B_t, projected to Z_s coordinates, must sit inside B_s
    let k = joint_snf.kernel();
    let kernel_cols: Vec<Vec<BigInt>> = (0..k.cols())
        .map(|j| k.column(j)[..zs.cols()].to_vec())
        .collect();
    let bs_snf = smith_normal_form(&bs_c);
    let injective = kernel_cols.iter().all(|c| bs_snf.solve(c).is_some());

    Ok(InducedOnCohomology {
        injective,
        surjective,
        source: source.cohomology(i)?,
        target: target.cohomology(i)?,
    })
}

/// Whether `φ` induces isomorphisms on `H^i` for `i` in `[floor + 2, 0]`.
pub fn check_quasi_iso(
    phi: &ChainMapWindow,
    source: &WindowComplex,
    target: &WindowComplex,
) -> Result<DegreeReport> {
    let mut r = DegreeReport::new("quasi-isomorphism");
    for i in source.map_degrees() {
        let h = induced_on_cohomology(phi.map(i)?, source, target, i)?;
        let mut e = DegreeEntry::new(i, h.injective && h.surjective)
            .invariant(format!("H(source)={}", h.source))
            .invariant(format!("H(target)={}", h.target))
            .tainted(source.is_tainted(i) || target.is_tainted(i) || phi.is_tainted(i));
        if !h.injective {
            e = e.detail("H^i map not injective");
        } else if !h.surjective {
            e = e.detail("H^i map not surjective");
        }
        r.push(e);
    }
    Ok(r)
}

/// Whether `φ^i` is onto `M^i` for `i` in `[floor + 1, 0]`.
pub fn check_surjective(phi: &ChainMapWindow, target: &WindowComplex) -> Result<DegreeReport> {
    let mut r = DegreeReport::new("surjective");
    for i in target.exact_degrees() {
        let snf = smith_normal_form(phi.map(i)?);
        let ok = snf.is_onto();
        let mut e = DegreeEntry::new(i, ok)
            .invariant(format!("rank={}", target.rank(i)))
            .tainted(target.is_tainted(i) || phi.is_tainted(i));
        if !ok {
            let mut coker = snf
                .torsion()
                .iter()
                .map(|t| format!("Z/{t}"))
                .collect::<Vec<_>>();
            let free = target.rank(i) - snf.rank;
            if free > 0 {
                coker.insert(0, format!("Z^{free}"));
            }
            e = e.detail(format!("cokernel {}", coker.join(" + ")));
        }
        r.push(e);
    }
    Ok(r)
}

/// Whether `W^i(φ)` is surjective: `φ(M_s^i) + Z_t^i = M_t^i`.
pub fn check_w_surjective(
    phi: &ChainMapWindow,
    source: &WindowComplex,
    target: &WindowComplex,
    degrees: RangeInclusive<i32>,
) -> Result<DegreeReport> {
    let mut r = DegreeReport::new("W^i surjective");
    for i in degrees {
        let zt = target.cocycles(i)?;
        let ok = smith_normal_form(&phi.map(i)?.hcat(&zt)).is_onto();
        r.push(
            DegreeEntry::new(i, ok)
                .invariant(format!("rank W(target)={}", target.rank(i) - zt.cols()))
                .tainted(source.is_tainted(i) || target.is_tainted(i) || phi.is_tainted(i)),
        );
    }
    Ok(r)
}

/// Whether `B^i(φ)` is surjective: `φ(B_s^i) = B_t^i`.
pub fn check_b_surjective(
    phi: &ChainMapWindow,
    source: &WindowComplex,
    target: &WindowComplex,
    degrees: RangeInclusive<i32>,
) -> Result<DegreeReport> {
    let mut r = DegreeReport::new("B^i surjective");
    for i in degrees {
        let image = phi.map(i)?.mul(&source.coboundaries(i)?);
        let ok = crate::matrix::lattice_contains(&image, &target.coboundaries(i)?);
        r.push(DegreeEntry::new(i, ok).tainted(
            source.is_tainted(i)
                || target.is_tainted(i)
                || phi.is_tainted(i)
                || phi.is_tainted(i - 1),
        ));
    }
    Ok(r)
}

/// Whether `Z^i(φ)` is surjective: `φ(Z_s^i) = Z_t^i`.
pub fn check_z_surjective(
    phi: &ChainMapWindow,
    source: &WindowComplex,
    target: &WindowComplex,
    degrees: RangeInclusive<i32>,
) -> Result<DegreeReport> {
    let mut r = DegreeReport::new("Z^i surjective");
    for i in degrees {
        let image = phi.map(i)?.mul(&source.cocycles(i)?);
        let ok = crate::matrix::lattice_contains(&image, &target.cocycles(i)?);
        r.push(
            DegreeEntry::new(i, ok)
                .tainted(source.is_tainted(i) || target.is_tainted(i) || phi.is_tainted(i)),
        );
    }
    Ok(r)
}

/// Whether `H^i(φ)` is bijective over the given degrees.
pub fn check_h_bijective(
    phi: &ChainMapWindow,
    source: &WindowComplex,
    target: &WindowComplex,
    degrees: RangeInclusive<i32>,
) -> Result<DegreeReport> {
    let mut r = DegreeReport::new("H^i bijective");
    for i in degrees {
        let h = induced_on_cohomology(phi.map(i)?, source, target, i)?;
        r.push(
            DegreeEntry::new(i, h.injective && h.surjective)
                .invariant(format!("H(source)={}", h.source))
                .invariant(format!("H(target)={}", h.target))
                .tainted(source.is_tainted(i) || target.is_tainted(i) || phi.is_tainted(i)),
        );
    }
    Ok(r)
}

/// Checks `d^{i-1}·h^i + h^{i+1}·d^i = id - ι^i·π^i` for `i` in `[floor + 1, 0]`,
/// where `π : M → U`, `ι : U → M` and `h^i : M^i → M^{i-1}`.
pub fn check_homotopy(
    m: &WindowComplex,
    projection: &ChainMapWindow,
    inclusion: &ChainMapWindow,
    h: &BTreeMap<i32, IntMatrix>,
) -> Result<DegreeReport> {
    let mut r = DegreeReport::new("contraction dh + hd = id - ιπ");
    let h_at = |i: i32| -> Result<IntMatrix> {
        if i > 0 {
            return Ok(IntMatrix::zeros(0, 0));
        }
        h.get(&i).cloned().ok_or(Error::InsufficientWindow {
            degree: i,
            lo: m.floor() + 1,
            hi: 0,
        })
    };
    for i in m.exact_degrees() {
        let n = m.rank(i);
        let hi = h_at(i)?;
        if hi.rows() != m.rank(i - 1) || hi.cols() != n {
            return Err(Error::InvalidInput(format!("h^{i} has the wrong shape")));
        }
        let mut lhs = m.d(i - 1)?.mul(&hi);
        if i < 0 {
            let next = h_at(i + 1)?;
            lhs = lhs.add(&next.mul(m.d(i)?));
        }
        let rhs = IntMatrix::identity(n).sub(&inclusion.map(i)?.mul(projection.map(i)?));
        let diff = lhs.sub(&rhs);
        let mut e = DegreeEntry::new(i, diff.is_zero())
            .invariant(format!("rank={n}"))
            .tainted(m.is_tainted(i) || projection.is_tainted(i) || inclusion.is_tainted(i));
        if let Some(j) = (0..n).find(|&j| diff.column(j).iter().any(|x| !x.is_zero())) {
            e = e.detail(format!("fails on basis element {}", m.labels(i)[j]));
        }
        r.push(e);
    }
    Ok(r)
}

/// Checks the three short exact sequences
/// `0 → Z^{i-1} → M^{i-1} → B^i → 0`, `0 → B^i → Z^i → H^i → 0`,
/// `0 → Z^i → M^i → W^i → 0` for `i` in `[floor + 1, 0]`.
pub fn check_exact_sequences(m: &WindowComplex) -> Result<DegreeReport> {
    let mut r = DegreeReport::new("exact sequences Z/M/B, B/Z/H, Z/M/W");
    for i in m.exact_degrees() {
        let mut problems = Vec::new();

        let d_prev = m.d(i - 1)?;
        let snf_prev = smith_normal_form(d_prev);
        let z_prev = snf_prev.kernel();
        if !d_prev.mul(&z_prev).is_zero() || z_prev.cols() + snf_prev.rank != m.rank(i - 1) {
            problems.push("Z^{i-1} -> M^{i-1} -> B^i");
        }

        let d = m.d(i)?;
        let snf = smith_normal_form(d);
        let z = snf.kernel();
        let z_snf = smith_normal_form(&z);
        let b = m.coboundaries(i)?;
        let b_inside = coordinates_in(&z_snf, &b);
        let mut h_text = String::from("?");
        match &b_inside {
            None => problems.push("B^i not inside Z^i"),
            Some(coords) => {
                let c_snf = smith_normal_form(coords);
                let h = CohomologyGroup {
                    free_rank: z.cols() - c_snf.rank,
                    torsion: c_snf.torsion(),
                };
                // rank Z = rank B + rank H
                if z.cols() != snf_prev.rank + h.free_rank {
                    problems.push("B^i -> Z^i -> H^i");
                }
                h_text = h.to_string();
            }
        }

        let saturated = z_snf.invariants.iter().all(One::is_one);
        if !saturated || z.cols() + snf.rank != m.rank(i) || !d.mul(&z).is_zero() {
            problems.push("Z^i -> M^i -> W^i");
        }

        let mut e = DegreeEntry::new(i, problems.is_empty())
            .invariant(format!("M={}", m.rank(i)))
            .invariant(format!("Z={}", z.cols()))
            .invariant(format!("B={}", snf_prev.rank))
            .invariant(format!("W={}", snf.rank))
            .invariant(format!("H={h_text}"))
            .tainted(m.is_tainted(i));
        if !problems.is_empty() {
            e = e.detail(problems.join("; "));
        }
        r.push(e);
    }
    Ok(r)
}
