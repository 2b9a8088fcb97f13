//! Hilbert polynomial of the ample generator `L` of `G/P`, kept in the
//! level-factored shape
//!
//! ```text
//! H_L(z) = H⁰(z) · ∏_ℓ ∏_k ((ℓz + k)/k)^{h_{ℓ,k}}
//! ```
//!
//! where `h_{ℓ,k}` counts roots of level ℓ with `(ρ, α) = k`. For `G/P`
//! itself `H⁰ = 1`; hyperplane sections and covers (see
//! [`crate::varieties`]) move part of the product into `H⁰`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratpoly::{fmt_rational, int, rat, RatPoly, Rational};
use crate::root_system::{MarkedSystem, RootSystemError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("level {level}: exponents not symmetric about {center}")]
    Symmetry { level: u32, center: String },
    #[error("level {level}: exponents not unimodal")]
    Unimodality { level: u32 },
    #[error("level {level}: {msg}")]
    LevelBounds { level: u32, msg: String },
    #[error("{0} variable requires a {1} index")]
    WrongIndexSign(&'static str, &'static str),
    #[error("degree {0} is not a positive integer")]
    NonIntegralDegree(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Exponents `h_{ℓ,k}` of one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTable {
    pub level: u32,
    pub exponents: BTreeMap<Rational, u32>,
    /// `(ρ, β_ℓ)`; kept when the table empties out after sections.
    pub b: Rational,
}

impl LevelTable {
    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn get(&self, k: &Rational) -> u32 {
        self.exponents.get(k).copied().unwrap_or(0)
    }

    /// `∏_k ((ℓz + k)/k)^{h_k}`.
    pub fn factor(&self) -> RatPoly {
        let l = int(self.level as i64);
        self.exponents
            .iter()
            .map(|(k, &h)| RatPoly::linear(&l / k, Rational::one()).pow(h))
            .product()
    }

    /// `h_k = h_{ℓι - k}`.
    pub fn check_symmetric(&self, index: i64) -> Result<(), HilbertError> {
        let top = int(self.level as i64 * index);
        for (k, &h) in &self.exponents {
            if self.get(&(&top - k)) != h {
                return Err(HilbertError::Symmetry {
                    level: self.level,
                    center: fmt_rational(&(top / int(2))),
                });
            }
        }
        Ok(())
    }

    /// Non-decreasing over the present keys up to the middle `ℓι/2`.
    pub fn check_unimodal(&self, index: i64) -> Result<(), HilbertError> {
        let mid = rat(self.level as i64 * index, 2);
        let lower: Vec<u32> = self
            .exponents
            .iter()
            .take_while(|(k, _)| **k <= mid)
            .map(|(_, &h)| h)
            .collect();
        if lower.windows(2).any(|w| w[0] > w[1]) {
            return Err(HilbertError::Unimodality { level: self.level });
        }
        Ok(())
    }
}

/// Which variable a Hilbert polynomial is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    /// `z ↦ χ(zL)`.
    AmpleGenerator,
    /// `z ↦ χ(-zK) = H_L(ιz)`, for `ι > 0`.
    Anticanonical,
    /// `z ↦ χ(zK) = H_L(-ιz)`, for `ι < 0`.
    Canonical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertData {
    pub description: String,
    pub dim: usize,
    pub index: i64,
    pub levels: Vec<LevelTable>,
    pub residual: RatPoly,
    pub lmax: u32,
}

impl HilbertData {
    /// Weyl-formula Hilbert polynomial of `L_{ω₀}` on `G/P`.
    ///
    /// Simply-laced systems use the root grading `(ω₀, α)`, `(ρ, α)` and check
    /// it against the extremal roots. Otherwise the tables are taken in the
    /// coroot grading `(ω₀, α^∨)`, `(ρ, α^∨)`, which gives the same polynomial
    /// with integral, gap-free keys that hyperplane sections can pair up.
    pub fn for_gp(ms: &MarkedSystem) -> Result<Self, HilbertError> {
        let index = ms.index;
        let simply_laced = ms.rs.is_simply_laced();
        let tables = if simply_laced {
            ms.level_heights()
        } else {
            ms.coroot_level_heights()
        };
        let mut levels = Vec::with_capacity(tables.len());
        for (i, exps) in tables.into_iter().enumerate() {
            let level = i as u32 + 1;
            let (Some(b), Some(g)) = (
                exps.keys().next().cloned(),
                exps.keys().next_back().cloned(),
            ) else {
                return Err(HilbertError::LevelBounds {
                    level,
                    msg: "empty level".into(),
                });
            };
            if simply_laced {
                let (beta, gamma) = ms.extremal_roots(level)?;
                if ms.rho_pair_unchecked(&beta) != b || ms.rho_pair_unchecked(&gamma) != g {
                    return Err(HilbertError::LevelBounds {
                        level,
                        msg: "extremal roots do not bound the exponent table".into(),
                    });
                }
            }
            if g != int(level as i64 * index) - &b {
                return Err(HilbertError::LevelBounds {
                    level,
                    msg: format!("largest key {} is not ℓι - b", fmt_rational(&g)),
                });
            }
            if exps.keys().any(|k| !k.is_integer()) {
                return Err(HilbertError::LevelBounds {
                    level,
                    msg: "non-integral key".into(),
                });
            }
            let table = LevelTable {
                level,
                exponents: exps,
                b,
            };
            table.check_symmetric(index)?;
            table.check_unimodal(index)?;
            levels.push(table);
        }
        let lmax = levels.len() as u32;
        let hd = HilbertData {
            description: ms.label(),
            dim: ms.dim(),
            index,
            levels,
            residual: RatPoly::one(),
            lmax,
        };
        Ok(hd)
    }

    /// Product of the level factors, residual excluded.
    pub fn level_product(&self) -> RatPoly {
        self.levels.iter().map(LevelTable::factor).product()
    }

    pub fn expand(&self, variable: Variable) -> Result<RatPoly, HilbertError> {
        let h = &self.level_product() * &self.residual;
        match variable {
            Variable::AmpleGenerator => Ok(h),
            Variable::Anticanonical => {
                if self.index <= 0 {
                    return Err(HilbertError::WrongIndexSign("anticanonical", "positive"));
                }
                Ok(h.compose_affine(&int(self.index), &Rational::zero())
                    .expect("non-zero scale"))
            }
            Variable::Canonical => {
                if self.index >= 0 {
                    return Err(HilbertError::WrongIndexSign("canonical", "negative"));
                }
                Ok(h.compose_affine(&int(-self.index), &Rational::zero())
                    .expect("non-zero scale"))
            }
        }
    }

    /// Hilbert polynomial in the L-variable.
    pub fn polynomial(&self) -> RatPoly {
        self.expand(Variable::AmpleGenerator)
            .expect("always defined")
    }

    /// `L^dim = dim! · (leading coefficient)`.
    pub fn degree(&self) -> Result<BigInt, HilbertError> {
        let p = self.polynomial();
        let fact: BigInt = (1..=self.dim as u64).map(BigInt::from).product();
        let d = p.leading() * Rational::from_integer(fact);
        if !d.is_integer() || !d.is_positive() {
            return Err(HilbertError::NonIntegralDegree(fmt_rational(&d)));
        }
        Ok(d.to_integer())
    }

    /// `χ(O) = H(0)`.
    pub fn euler_characteristic(&self) -> Rational {
        self.polynomial().eval(&Rational::zero())
    }

    pub fn is_fano(&self) -> bool {
        self.index > 0
    }

    /// Structural checks shared by every constructed descendant: degree
    /// equals dimension, integer values, and the Serre-duality symmetry
    /// `H(-ι - z) = (-1)^dim H(z)`.
    pub fn check_invariants(&self) -> Result<(), HilbertError> {
        let p = self.polynomial();
        if p.degree() != Some(self.dim) {
            return Err(HilbertError::Invariant(format!(
                "degree {:?} differs from dimension {}",
                p.degree(),
                self.dim
            )));
        }
        for k in -6..=6 {
            if !p.eval(&int(k)).is_integer() {
                return Err(HilbertError::Invariant(format!("H({k}) is not an integer")));
            }
        }
        let mirrored = p
            .compose_affine(&int(-1), &int(-self.index))
            .expect("scale -1");
        let mirrored = if self.dim % 2 == 0 {
            mirrored
        } else {
            -mirrored
        };
        if mirrored != p {
            return Err(HilbertError::Invariant("H(-ι - z) ≠ (-1)^dim H(z)".into()));
        }
        for t in &self.levels {
            t.check_symmetric(self.index)?;
            t.check_unimodal(self.index)?;
        }
        Ok(())
    }

    /// Renders the factored form, e.g. `((z+1)/1)·((z+2)/2)^3 · …`.
    pub fn factored_string(&self) -> String {
        let mut parts = Vec::new();
        for t in &self.levels {
            for (k, &h) in &t.exponents {
                let ks = fmt_rational(k);
                let lin = if t.level == 1 {
                    format!("((z+{ks})/{ks})")
                } else {
                    format!("(({}z+{ks})/{ks})", t.level)
                };
                parts.push(if h == 1 { lin } else { format!("{lin}^{h}") });
            }
        }
        if !self.residual.is_zero() && self.residual != RatPoly::one() {
            parts.push(format!("[{}]", self.residual));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
}

/// `∏_{α>0} (zω₀ + ρ, α^∨)/(ρ, α^∨)` at an integer point, computed over
/// coroots so it shares no code path with the root-based level tables.
pub fn weyl_product_at(ms: &MarkedSystem, z: i64) -> Rational {
    let len2 = &ms.norm_symmetrizer;
    let k = ms.node_index();
    let mut acc = Rational::one();
    for a in &ms.rs.positive_roots {
        // (α, α)/2 = Σ_ij c_i c_j (α_i, α_j)/2 with (α_i, α_j) = d_i C_ij
        let mut norm = Rational::zero();
        for i in 0..a.0.len() {
            for j in 0..a.0.len() {
                norm += int(a.0[i] * a.0[j] * ms.rs.cartan[i][j]) * &len2[i];
            }
        }
        let norm = norm / int(2);
        // α^∨ = Σ c_i (d_i / d_α) α_i^∨, and (ω_j, α_i^∨) = δ_ij
        let coroot: Vec<Rational> =
            a.0.iter()
                .zip(len2)
                .map(|(&c, d)| int(c) * d / &norm)
                .collect();
        let ht: Rational = coroot.iter().sum();
        let num = &coroot[k] * int(z) + &ht;
        acc = acc * num / ht;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::{Series, SimpleType};

    fn gp(s: Series, n: usize, node: usize) -> HilbertData {
        HilbertData::for_gp(&MarkedSystem::build(SimpleType::new(s, n).unwrap(), node).unwrap())
            .unwrap()
    }

    fn table(hd: &HilbertData, l: usize) -> Vec<(i64, u32)> {
        hd.levels[l - 1]
            .exponents
            .iter()
            .map(|(k, &h)| (i64::try_from(k.to_integer()).unwrap(), h))
            .collect()
    }

    #[test]
    fn e6_p4_tables() {
        let hd = gp(Series::E, 6, 4);
        assert_eq!(
            table(&hd, 1),
            vec![(1, 1), (2, 3), (3, 5), (4, 5), (5, 3), (6, 1)]
        );
        assert_eq!(table(&hd, 2), vec![(5, 1), (6, 2), (7, 3), (8, 2), (9, 1)]);
        assert_eq!(table(&hd, 3), vec![(10, 1), (11, 1)]);
        // 29! · ∏ ℓ/k over the tables above; independently recomputed from the
        // E6 root list. The widely quoted 996584151214080 is this divided by ι = 7.
        assert_eq!(
            hd.degree().unwrap(),
            "6976089058498560".parse::<BigInt>().unwrap()
        );
        assert_eq!(
            weyl_product_at(
                &MarkedSystem::build(SimpleType::new(Series::E, 6).unwrap(), 4).unwrap(),
                1
            ),
            int(2925)
        );
        hd.check_invariants().unwrap();
    }

    #[test]
    fn projective_space() {
        let hd = gp(Series::A, 3, 1);
        // (z+1)(z+2)(z+3)/6
        let want = RatPoly::from_ints(&[6, 11, 6, 1]).scale(&rat(1, 6));
        assert_eq!(hd.polynomial(), want);
        assert_eq!(hd.degree().unwrap(), BigInt::one());
        let p1 = gp(Series::A, 1, 1);
        assert_eq!(
            p1.expand(Variable::Anticanonical).unwrap(),
            RatPoly::from_ints(&[1, 2])
        );
        assert_eq!(
            p1.expand(Variable::Canonical),
            Err(HilbertError::WrongIndexSign("canonical", "negative"))
        );
    }

    #[test]
    fn quadric_from_d5() {
        // Q^8 ⊂ P^9: H = C(z+9,9) - C(z+7,9), evaluated independently
        let hd = gp(Series::D, 5, 1);
        assert_eq!((hd.dim, hd.index), (8, 8));
        let binom = |n: i64| -> Rational {
            if n < 9 {
                return Rational::zero();
            }
            (0..9).fold(Rational::one(), |acc, i| acc * int(n - i) / int(i + 1))
        };
        let p = hd.polynomial();
        for z in 0..10 {
            assert_eq!(p.eval(&int(z)), binom(z + 9) - binom(z + 7), "z = {z}");
        }
        assert_eq!(hd.degree().unwrap(), BigInt::from(2));
    }

    #[test]
    fn weyl_product_matches_tables() {
        let ms = MarkedSystem::build(SimpleType::new(Series::G, 2).unwrap(), 2).unwrap();
        let hd = HilbertData::for_gp(&ms).unwrap();
        for z in 0..6 {
            assert_eq!(hd.polynomial().eval(&int(z)), weyl_product_at(&ms, z));
        }
        // G2/P2 is the 5-dimensional adjoint variety with V_{ω2} = g2 of dim 14
        assert_eq!(weyl_product_at(&ms, 1), int(14));
    }

    #[test]
    fn asymmetric_table_rejected() {
        let t = LevelTable {
            level: 1,
            exponents: [(int(1), 1), (int(2), 2)].into_iter().collect(),
            b: int(1),
        };
        assert!(matches!(
            t.check_symmetric(3),
            Err(HilbertError::Symmetry { .. })
        ));
        let t = LevelTable {
            level: 1,
            exponents: [
                (int(1), 2),
                (int(2), 1),
                (int(3), 2),
                (int(4), 1),
                (int(5), 2),
            ]
            .into_iter()
            .collect(),
            b: int(1),
        };
        assert!(t.check_symmetric(6).is_ok());
        assert_eq!(
            t.check_unimodal(6),
            Err(HilbertError::Unimodality { level: 1 })
        );
    }

    #[test]
    fn factored_rendering() {
        let hd = gp(Series::A, 2, 1);
        assert_eq!(hd.factored_string(), "((z+1)/1)·((z+2)/2)");
    }
}
