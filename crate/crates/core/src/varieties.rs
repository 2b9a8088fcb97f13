//! Descendants of `G/P`: complete intersections, double covers, and
//! complete intersections in abelian varieties.
//!
//! A hypersurface section of degree `d` replaces `H(z)` by `H(z) - H(z-d)`;
//! a double cover branched in `|2dL|` replaces it by `H(z) + H(z-d)` since
//! `π_*O_Y = O_X ⊕ L^{-d}`. Both are computed level by level: the common
//! factor `A^ℓ` with exponents `min(h_k, h_{k+ℓd})` stays factored and the
//! rest is folded into the residual `H⁰`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{HilbertData, HilbertError, LevelTable};
use crate::ratpoly::{int, PolyError, RatPoly, Rational};
use crate::root_system::MarkedSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VarietyError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("section degree must be at least 1, got {0}")]
    InvalidDegree(i64),
    #[error("{count} hypersurfaces cut a variety of dimension {dim}")]
    TooManyDegrees { count: usize, dim: usize },
    #[error("cover branch degree d = {d} outside 1..={index}")]
    CoverDegreeOutOfRange { d: i64, index: i64 },
    #[error("factored form does not reproduce H(z) {op} H(z - {d})")]
    Reconstruction { op: char, d: i64 },
    #[error("χ(O) = {0}, expected 1 for a Fano descendant")]
    EulerCharacteristic(String),
    #[error("malformed abelian data: {0}")]
    Abelian(String),
}

/// Whether a step subtracts (hypersurface) or adds (double cover) the shifted polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Intersection,
    Cover,
}

impl StepKind {
    fn op(self) -> char {
        match self {
            StepKind::Intersection => '-',
            StepKind::Cover => '+',
        }
    }
}

struct LevelSplit {
    common: LevelTable,
    plus: RatPoly,
    minus: RatPoly,
}

/// Splits `H^ℓ(z)` and `H^ℓ(z - d)` into the common factor `A^ℓ(z)` times
/// `B⁺(z)` resp. `B⁻(z)`.
fn split_level(t: &LevelTable, d: i64) -> LevelSplit {
    let l = int(t.level as i64);
    let shift = int(t.level as i64 * d);
    let min_at = |k: &Rational| t.get(k).min(t.get(&(k + &shift)));

    let mut common = BTreeMap::new();
    let mut plus = RatPoly::one();
    let mut minus = RatPoly::one();
    for (k, &h) in &t.exponents {
        let m = min_at(k);
        if m > 0 {
            common.insert(k.clone(), m);
        }
        if h > m {
            plus = &plus * &RatPoly::linear(&l / k, Rational::one()).pow(h - m);
        }
        // factor of H^ℓ(z - d) indexed by k: (ℓz + k - ℓd)/k
        let below = k - &shift;
        let taken = if below.is_positive() {
            min_at(&below)
        } else {
            0
        };
        if h > taken {
            let lin = RatPoly::linear(&l / k, &below / k);
            minus = &minus * &lin.pow(h - taken);
        }
        if taken > 0 {
            // A^ℓ is normalized by 1/(k - ℓd) where H^ℓ(z - d) carries 1/k
            minus = minus.scale(&(&below / k).pow(taken as i32));
        }
    }
    LevelSplit {
        common: LevelTable {
            level: t.level,
            exponents: common,
            b: t.b.clone(),
        },
        plus,
        minus,
    }
}

/// One hypersurface section (`kind = Intersection`) or double cover
/// (`kind = Cover`) with branch/degree parameter `d`.
pub fn section_step(hd: &HilbertData, d: i64, kind: StepKind) -> Result<HilbertData, VarietyError> {
    if d < 1 {
        return Err(VarietyError::InvalidDegree(d));
    }
    if kind == StepKind::Intersection && hd.dim == 0 {
        return Err(VarietyError::TooManyDegrees { count: 1, dim: 0 });
    }
    let mut levels = Vec::with_capacity(hd.levels.len());
    let mut plus = RatPoly::one();
    let mut minus = RatPoly::one();
    for t in &hd.levels {
        let s = split_level(t, d);
        levels.push(s.common);
        plus = &plus * &s.plus;
        minus = &minus * &s.minus;
    }
    let shifted_residual = hd.residual.shift(&int(-d));
    let a = &hd.residual * &plus;
    let b = &shifted_residual * &minus;
    let residual = match kind {
        StepKind::Intersection => &a - &b,
        StepKind::Cover => &a + &b,
    };
    let lmax = levels
        .iter()
        .filter(|t| !t.is_empty())
        .map(|t| t.level)
        .max()
        .unwrap_or(0);
    let (dim, description) = match kind {
        StepKind::Intersection => (hd.dim - 1, hd.description.clone()),
        StepKind::Cover => (
            hd.dim,
            format!(
                "double cover of {} branched in |{}L|",
                hd.description,
                2 * d
            ),
        ),
    };
    let out = HilbertData {
        description,
        dim,
        index: hd.index - d,
        levels,
        residual,
        lmax,
    };

    let h = hd.polynomial();
    let hs = h.shift(&int(-d));
    let want = match kind {
        StepKind::Intersection => &h - &hs,
        StepKind::Cover => &h + &hs,
    };
    if out.polynomial() != want {
        return Err(VarietyError::Reconstruction { op: kind.op(), d });
    }
    out.check_invariants()?;
    Ok(out)
}

fn degrees_label(degrees: &[i64]) -> String {
    let ds: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
    format!("({})", ds.join(","))
}

/// Complete intersection of hypersurfaces of the given degrees in `G/P`.
pub fn complete_intersection(
    ms: &MarkedSystem,
    degrees: &[i64],
) -> Result<HilbertData, VarietyError> {
    let base = HilbertData::for_gp(ms)?;
    complete_intersection_from(&base, degrees)
}

pub fn complete_intersection_from(
    base: &HilbertData,
    degrees: &[i64],
) -> Result<HilbertData, VarietyError> {
    if degrees.len() > base.dim {
        return Err(VarietyError::TooManyDegrees {
            count: degrees.len(),
            dim: base.dim,
        });
    }
    if let Some(&d) = degrees.iter().find(|&&d| d < 1) {
        return Err(VarietyError::InvalidDegree(d));
    }
    let mut hd = base.clone();
    for &d in degrees {
        hd = section_step(&hd, d, StepKind::Intersection)?;
    }
    if !degrees.is_empty() {
        hd.description = format!("{} ∩ {}", base.description, degrees_label(degrees));
    }
    if hd.index > 0 && hd.euler_characteristic() != Rational::one() {
        return Err(VarietyError::EulerCharacteristic(
            crate::ratpoly::fmt_rational(&hd.euler_characteristic()),
        ));
    }
    Ok(hd)
}

/// Double cover of `G/P` branched along a member of `|2dL|`, `1 ≤ d ≤ ι`.
pub fn double_cover(ms: &MarkedSystem, d: i64) -> Result<HilbertData, VarietyError> {
    let base = HilbertData::for_gp(ms)?;
    if d < 1 || d > base.index {
        return Err(VarietyError::CoverDegreeOutOfRange {
            d,
            index: base.index,
        });
    }
    let hd = section_step(&base, d, StepKind::Cover)?;
    if hd.index > 0 && hd.euler_characteristic() != Rational::one() {
        return Err(VarietyError::EulerCharacteristic(
            crate::ratpoly::fmt_rational(&hd.euler_characteristic()),
        ));
    }
    Ok(hd)
}

/// Intersection numbers `(L_1^{ℓ_1} ⋯ L_c^{ℓ_c})` of ample bundles on an
/// abelian variety of dimension `n + c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianSpec {
    pub n: usize,
    pub c: usize,
    pub numbers: Vec<IntersectionNumber>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionNumber {
    pub tuple: Vec<u32>,
    pub value: i64,
}

impl AbelianSpec {
    pub fn validate(&self) -> Result<BTreeMap<Vec<u32>, i64>, VarietyError> {
        if self.c == 0 {
            return Err(VarietyError::Abelian("codimension must be positive".into()));
        }
        let total = (self.n + self.c) as u32;
        let mut map = BTreeMap::new();
        for e in &self.numbers {
            if e.tuple.len() != self.c {
                return Err(VarietyError::Abelian(format!(
                    "tuple {:?} has length {}, expected {}",
                    e.tuple,
                    e.tuple.len(),
                    self.c
                )));
            }
            if e.tuple.iter().sum::<u32>() != total {
                return Err(VarietyError::Abelian(format!(
                    "tuple {:?} does not sum to n + c = {total}",
                    e.tuple
                )));
            }
            if e.value <= 0 {
                return Err(VarietyError::Abelian(format!(
                    "intersection number for {:?} must be positive",
                    e.tuple
                )));
            }
            if map.insert(e.tuple.clone(), e.value).is_some() {
                return Err(VarietyError::Abelian(format!(
                    "duplicate tuple {:?}",
                    e.tuple
                )));
            }
        }
        Ok(map)
    }

    pub fn from_json(s: &str) -> Result<Self, VarietyError> {
        serde_json::from_str(s).map_err(|e| VarietyError::Abelian(e.to_string()))
    }
}

/// `P_ℓ(z) = z^ℓ - (z - 1)^ℓ`.
pub fn p_ell(l: u32) -> RatPoly {
    let z = RatPoly::x();
    let zm1 = RatPoly::from_ints(&[-1, 1]);
    &z.pow(l) - &zm1.pow(l)
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// `Σ_ℓ (L_1^{ℓ_1}⋯L_c^{ℓ_c}) / (ℓ_1!⋯ℓ_c!) · ∏ P_{ℓ_i}(z)`; missing tuples count as 0.
pub fn abelian_ci(spec: &AbelianSpec) -> Result<RatPoly, VarietyError> {
    let map = spec.validate()?;
    let mut acc = RatPoly::zero();
    for (tuple, &value) in &map {
        let denom: BigInt = tuple.iter().map(|&l| factorial(l)).product();
        let coeff = Rational::new(BigInt::from(value), denom);
        let term: RatPoly = tuple.iter().map(|&l| p_ell(l)).product();
        acc = &acc + &term.scale(&coeff);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Variable;
    use crate::ratpoly::rat;
    use crate::root_system::{Series, SimpleType};
    use num_traits::Zero;

    fn proj(n: usize) -> MarkedSystem {
        MarkedSystem::build(SimpleType::new(Series::A, n).unwrap(), 1).unwrap()
    }

    /// C(z + n, n) as a polynomial, built from linear factors.
    fn binom_poly(n: i64) -> RatPoly {
        (1..=n)
            .map(|i| RatPoly::linear(rat(1, i), int(1)))
            .product()
    }

    #[test]
    fn hyperplane_in_pn_is_pn_minus_one() {
        for n in 2..=6 {
            let z = complete_intersection(&proj(n), &[1]).unwrap();
            let p = HilbertData::for_gp(&proj(n - 1)).unwrap();
            assert_eq!(z.levels, p.levels);
            assert_eq!(z.residual, p.residual);
            assert_eq!((z.index, z.dim), (p.index, p.dim));
        }
    }

    // B2/P2 is P³ in disguise; its sections must peel exactly like A3/P1's.
    #[test]
    fn non_simply_laced_sections_split() {
        let b2 = MarkedSystem::build(SimpleType::new(Series::B, 2).unwrap(), 2).unwrap();
        let hd = HilbertData::for_gp(&b2).unwrap();
        assert_eq!(hd.levels, HilbertData::for_gp(&proj(3)).unwrap().levels);
        let z = complete_intersection(&b2, &[1]).unwrap();
        assert_eq!(z.residual, RatPoly::one());
        assert_eq!(z.polynomial(), binom_poly(2));
    }

    #[test]
    fn quadric_surface() {
        let z = complete_intersection(&proj(3), &[2]).unwrap();
        assert_eq!(z.polynomial(), RatPoly::from_ints(&[1, 2, 1]));
        assert_eq!((z.index, z.dim), (2, 2));
        assert_eq!(
            z.expand(Variable::Anticanonical).unwrap(),
            RatPoly::from_ints(&[1, 4, 4])
        );
        assert_eq!(z.degree().unwrap(), BigInt::from(2));
    }

    #[test]
    fn quintic_threefold() {
        let z = complete_intersection(&proj(4), &[5]).unwrap();
        let want = &binom_poly(4) - &binom_poly(4).shift(&int(-5));
        assert_eq!(z.polynomial(), want);
        assert_eq!(z.index, 0);
        assert!(z.euler_characteristic().is_zero());
        assert!(z.levels.iter().all(LevelTable::is_empty));
    }

    #[test]
    fn del_pezzo_quartic() {
        let z = complete_intersection(&proj(4), &[2, 2]).unwrap();
        assert_eq!((z.index, z.dim), (1, 2));
        let p = binom_poly(4);
        let once = &p - &p.shift(&int(-2));
        let twice = &once - &once.shift(&int(-2));
        assert_eq!(z.polynomial(), twice);
        assert_eq!(z.degree().unwrap(), BigInt::from(4));
    }

    #[test]
    fn covers() {
        let y = double_cover(&proj(1), 1).unwrap();
        assert_eq!(y.polynomial(), RatPoly::from_ints(&[1, 2]));
        assert_eq!(y.index, 1);
        let y = double_cover(&proj(2), 1).unwrap();
        assert_eq!(y.polynomial(), RatPoly::from_ints(&[1, 2, 1]));
        assert_eq!(y.index, 2);
        let y = double_cover(&proj(1), 2).unwrap();
        assert_eq!(y.polynomial(), RatPoly::from_ints(&[0, 2]));
        assert_eq!(y.index, 0);
        assert_eq!(
            double_cover(&proj(1), 3),
            Err(VarietyError::CoverDegreeOutOfRange { d: 3, index: 2 })
        );
    }

    #[test]
    fn e6_calabi_yau_section() {
        let ms = MarkedSystem::build(SimpleType::new(Series::E, 6).unwrap(), 4).unwrap();
        let z = complete_intersection(&ms, &[7]).unwrap();
        assert_eq!((z.index, z.dim), (0, 28));
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(
            complete_intersection(&proj(2), &[1, 1, 1]),
            Err(VarietyError::TooManyDegrees { count: 3, dim: 2 })
        );
        assert_eq!(
            complete_intersection(&proj(2), &[0]),
            Err(VarietyError::InvalidDegree(0))
        );
    }

    #[test]
    fn abelian_examples() {
        let curve = AbelianSpec {
            n: 1,
            c: 1,
            numbers: vec![IntersectionNumber {
                tuple: vec![2],
                value: 2,
            }],
        };
        assert_eq!(abelian_ci(&curve).unwrap(), RatPoly::from_ints(&[-1, 2]));
        let surface = AbelianSpec {
            n: 2,
            c: 1,
            numbers: vec![IntersectionNumber {
                tuple: vec![3],
                value: 6,
            }],
        };
        assert_eq!(
            abelian_ci(&surface).unwrap(),
            RatPoly::from_ints(&[1, -3, 3])
        );
        for n in 1..6u32 {
            let spec = AbelianSpec {
                n: n as usize,
                c: 1,
                numbers: vec![IntersectionNumber {
                    tuple: vec![n + 1],
                    value: 7,
                }],
            };
            let want = p_ell(n + 1).scale(&Rational::new(BigInt::from(7), factorial(n + 1)));
            assert_eq!(abelian_ci(&spec).unwrap(), want);
        }
    }

    #[test]
    fn abelian_validation() {
        let bad = |numbers| AbelianSpec {
            n: 1,
            c: 2,
            numbers,
        };
        let e = |t: Vec<u32>, v| IntersectionNumber { tuple: t, value: v };
        assert!(abelian_ci(&bad(vec![e(vec![3], 1)])).is_err());
        assert!(abelian_ci(&bad(vec![e(vec![1, 1], 1)])).is_err());
        assert!(abelian_ci(&bad(vec![e(vec![2, 1], 0)])).is_err());
        assert!(abelian_ci(&bad(vec![e(vec![2, 1], 1), e(vec![2, 1], 2)])).is_err());
        let json = r#"{"n":1,"c":1,"numbers":[{"tuple":[2],"value":2}]}"#;
        let spec = AbelianSpec::from_json(json).unwrap();
        assert_eq!(spec.numbers[0].value, 2);
    }
}
