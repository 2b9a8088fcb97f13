//! Root systems of the simple Lie algebras and their maximal parabolic
//! gradings.
//!
//! Simple roots, Cartan matrices and node numbers follow Bourbaki. The
//! invariant form is carried as a symmetrizer `d_i = (α_i, α_i)/2`; a
//! [`MarkedSystem`] rescales it so that the marked simple root has
//! `(α₀, α₀) = 2`, which makes `(ω₀, α)` equal to the α₀-coefficient of α.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratpoly::{fmt_rational, int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("invalid simple type {series}{rank}")]
    InvalidType { series: Series, rank: usize },
    #[error("unknown series {0:?}")]
    UnknownSeries(String),
    #[error("node out of range: {node} (rank {rank}, nodes are 1..={rank})")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("{0:?} is not a root of this system")]
    NotARoot(Vec<i64>),
    #[error("level {0} is empty or outside 1..=lmax")]
    EmptyLevel(u32),
    #[error("extremal root of level {0} is not unique")]
    NonUniqueExtremum(u32),
    #[error("index computation inconsistent: {0}")]
    IndexMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub const ALL: [Series; 7] = [
        Series::A,
        Series::B,
        Series::C,
        Series::D,
        Series::E,
        Series::F,
        Series::G,
    ];

    pub fn valid_rank(self, rank: usize) -> bool {
        match self {
            Series::A => rank >= 1,
            Series::B => rank >= 2,
            Series::C => rank >= 3,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        }
    }

    /// The only rank allowed for exceptional series that fix it.
    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            Series::F => Some(4),
            Series::G => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Series {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            other => Err(RootSystemError::UnknownSeries(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub series: Series,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(series: Series, rank: usize) -> Result<Self, RootSystemError> {
        if series.valid_rank(rank) {
            Ok(SimpleType { series, rank })
        } else {
            Err(RootSystemError::InvalidType { series, rank })
        }
    }

    /// Resolves the low-rank isomorphisms `C2 = B2` and `D3 = A3`,
    /// translating the Bourbaki node number along with the type.
    pub fn canonicalize(
        series: Series,
        rank: usize,
        node: usize,
    ) -> Result<(SimpleType, usize), RootSystemError> {
        let (series, node) = match (series, rank) {
            // C2 has α1 short, α2 long; B2 the reverse.
            (Series::C, 2) => (Series::B, swap_node(node, &[2, 1])),
            // D3 is 2 - 1 - 3 as a chain.
            (Series::D, 3) => (Series::A, swap_node(node, &[2, 1, 3])),
            _ => (series, node),
        };
        let t = SimpleType::new(series, rank)?;
        if node == 0 || node > rank {
            return Err(RootSystemError::NodeOutOfRange { node, rank });
        }
        Ok((t, node))
    }

    /// Every valid type with rank at most `max_rank`, in canonical order.
    pub fn enumerate(max_rank: usize) -> Vec<SimpleType> {
        let mut out = Vec::new();
        for series in Series::ALL {
            for rank in 1..=max_rank {
                if series.valid_rank(rank) {
                    out.push(SimpleType { series, rank });
                }
            }
        }
        out
    }

    /// Squared lengths of the simple roots, shortest normalized to a small integer.
    fn squared_lengths(&self) -> Vec<i64> {
        let n = self.rank;
        match self.series {
            Series::A | Series::D | Series::E => vec![2; n],
            Series::B => (0..n).map(|i| if i + 1 == n { 1 } else { 2 }).collect(),
            Series::C => (0..n).map(|i| if i + 1 == n { 4 } else { 2 }).collect(),
            Series::F => vec![4, 4, 2, 2],
            Series::G => vec![2, 6],
        }
    }

    /// Edges of the Dynkin diagram as 0-based node pairs.
    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        let chain = |k: usize| {
            (0..k.saturating_sub(1))
                .map(|i| (i, i + 1))
                .collect::<Vec<_>>()
        };
        match self.series {
            Series::A | Series::B | Series::C | Series::F | Series::G => chain(n),
            Series::D => {
                let mut e = chain(n - 1);
                e.push((n - 3, n - 1));
                e
            }
            // 1 - 3 - 4 - 5 - 6 - 7 - 8 with 2 attached to 4
            Series::E => {
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
        }
    }
}

fn swap_node(node: usize, map: &[usize]) -> usize {
    if node >= 1 && node <= map.len() {
        map[node - 1]
    } else {
        node
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// A root as its coefficient vector over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0[i]
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub simple_type: SimpleType,
    /// `cartan[i][j] = 2(α_i, α_j)/(α_i, α_i)`.
    pub cartan: Vec<Vec<i64>>,
    /// `d_i = (α_i, α_i)/2`, so that `d_i * cartan[i][j]` is symmetric.
    pub symmetrizer: Vec<Rational>,
    /// Sorted by height, then lexicographically.
    pub positive_roots: Vec<Root>,
    root_set: HashSet<Root>,
}

impl RootSystem {
    pub fn build(t: SimpleType) -> Result<Self, RootSystemError> {
        let t = SimpleType::new(t.series, t.rank)?;
        let n = t.rank;
        let len2 = t.squared_lengths();
        let mut form = vec![vec![0i64; n]; n];
        for i in 0..n {
            form[i][i] = len2[i];
        }
        for (i, j) in t.edges() {
            let v = -len2[i].max(len2[j]) / 2;
            form[i][j] = v;
            form[j][i] = v;
        }
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| 2 * form[i][j] / form[i][i]).collect())
            .collect();
        let symmetrizer: Vec<Rational> = len2
            .iter()
            .map(|&l| Rational::new(l.into(), 2.into()))
            .collect();

        let positive_roots = generate_positive_roots(&cartan);
        let root_set = positive_roots.iter().cloned().collect();
        Ok(RootSystem {
            simple_type: t,
            cartan,
            symmetrizer,
            positive_roots,
            root_set,
        })
    }

    pub fn rank(&self) -> usize {
        self.simple_type.rank
    }

    pub fn is_root(&self, a: &Root) -> bool {
        self.root_set.contains(a)
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots.last().expect("non-empty root system")
    }

    /// `h = 1 + Σ a_i` where the highest root is `Σ a_i α_i`.
    pub fn coxeter_number(&self) -> i64 {
        self.highest_root().height() + 1
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.simple_type.series, Series::A | Series::D | Series::E)
    }

    /// Number of positive roots predicted by the classification.
    pub fn classical_count(t: SimpleType) -> usize {
        let n = t.rank;
        match t.series {
            Series::A => n * (n + 1) / 2,
            Series::B | Series::C => n * n,
            Series::D => n * (n - 1),
            Series::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Series::F => 24,
            Series::G => 6,
        }
    }
}

/// Closure over root strings: `β + α_j` is a root iff `q > 0` where
/// `q = p - <β, α_j^∨>` and `p` is the length of the string below β.
fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Root> {
    let n = cartan.len();
    let mut known: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut all = Vec::new();
    while !layer.is_empty() {
        layer.sort();
        for r in &layer {
            known.insert(r.clone());
        }
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for j in 0..n {
                let mut p = 0;
                let mut below = beta.clone();
                loop {
                    below[j] -= 1;
                    if below[j] < 0 || !known.contains(&below) {
                        break;
                    }
                    p += 1;
                }
                let pairing: i64 = (0..n).map(|i| beta[i] * cartan[j][i]).sum();
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[j] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(layer.drain(..).map(Root));
        layer = next;
    }
    all
}

/// A root system with a marked node: the data of `G/P` for a maximal parabolic `P`.
#[derive(Debug, Clone)]
pub struct MarkedSystem {
    pub rs: RootSystem,
    /// 0-based index of the marked simple root.
    node_index: usize,
    /// Symmetrizer rescaled so the marked node has `d = 1`.
    pub norm_symmetrizer: Vec<Rational>,
    /// ω₀ expanded over the simple roots.
    pub omega0_in_roots: Vec<Rational>,
    pub index: i64,
    pub lmax: u32,
    /// `levels[ℓ - 1]` holds the positive roots with α₀-coefficient ℓ.
    pub levels: Vec<Vec<Root>>,
}

impl MarkedSystem {
    /// Marks Bourbaki node `node` (1-based).
    pub fn mark(rs: RootSystem, node: usize) -> Result<Self, RootSystemError> {
        let rank = rs.rank();
        if node == 0 || node > rank {
            return Err(RootSystemError::NodeOutOfRange { node, rank });
        }
        let k = node - 1;
        let scale = rs.symmetrizer[k].clone();
        let norm_symmetrizer: Vec<Rational> = rs.symmetrizer.iter().map(|d| d / &scale).collect();

        let mut rhs = vec![Rational::zero(); rank];
        rhs[k] = Rational::one();
        let cartan: Vec<Vec<Rational>> = rs
            .cartan
            .iter()
            .map(|row| row.iter().map(|&c| int(c)).collect())
            .collect();
        let omega0_in_roots = solve(cartan, rhs);

        let lmax = rs.highest_root().coeff(k) as u32;
        let mut levels = vec![Vec::new(); lmax as usize];
        for a in &rs.positive_roots {
            let l = a.coeff(k);
            if l > 0 {
                levels[l as usize - 1].push(a.clone());
            }
        }

        let mut ms = MarkedSystem {
            rs,
            node_index: k,
            norm_symmetrizer,
            omega0_in_roots,
            index: 0,
            lmax,
            levels,
        };
        ms.index = ms.compute_index()?;
        Ok(ms)
    }

    pub fn build(t: SimpleType, node: usize) -> Result<Self, RootSystemError> {
        Self::mark(RootSystem::build(t)?, node)
    }

    /// Bourbaki node number (1-based).
    pub fn node(&self) -> usize {
        self.node_index + 1
    }

    pub fn node_index(&self) -> usize {
        self.node_index
    }

    pub fn simple_type(&self) -> SimpleType {
        self.rs.simple_type
    }

    pub fn dim(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn level_of(&self, a: &Root) -> u32 {
        a.coeff(self.node_index) as u32
    }

    /// `(ρ, α) = Σ c_i d_i` in the marked normalization.
    pub fn rho_pair(&self, a: &Root) -> Result<Rational, RootSystemError> {
        if !self.rs.is_root(a) {
            return Err(RootSystemError::NotARoot(a.0.clone()));
        }
        Ok(self.rho_pair_unchecked(a))
    }

    pub(crate) fn rho_pair_unchecked(&self, a: &Root) -> Rational {
        a.0.iter()
            .zip(&self.norm_symmetrizer)
            .map(|(&c, d)| int(c) * d)
            .sum()
    }

    /// `(ω₀, ω₀)`: equal to the node coefficient of ω₀ since `(ω₀, α_j) = δ_{j,0}`.
    pub fn omega0_norm(&self) -> Rational {
        self.omega0_in_roots[self.node_index].clone()
    }

    /// `(ω₀, α_j^∨)` for every simple coroot.
    pub fn omega0_coroot_pairings(&self) -> Vec<Rational> {
        self.rs
            .cartan
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.omega0_in_roots)
                    .map(|(&c, x)| int(c) * x)
                    .sum()
            })
            .collect()
    }

    /// Lowest and highest roots of level `l` with respect to `(ρ, ·)`.
    pub fn extremal_roots(&self, l: u32) -> Result<(Root, Root), RootSystemError> {
        if l == 0 || l > self.lmax {
            return Err(RootSystemError::EmptyLevel(l));
        }
        let roots = &self.levels[l as usize - 1];
        if roots.is_empty() {
            return Err(RootSystemError::EmptyLevel(l));
        }
        let vals: Vec<Rational> = roots.iter().map(|a| self.rho_pair_unchecked(a)).collect();
        let lo = vals.iter().min().expect("non-empty");
        let hi = vals.iter().max().expect("non-empty");
        let pick = |target: &Rational| {
            let mut it = vals.iter().enumerate().filter(|(_, v)| *v == target);
            let first = it.next().map(|(i, _)| i);
            (first, it.next().is_none())
        };
        let (Some(bi), true) = pick(lo) else {
            return Err(RootSystemError::NonUniqueExtremum(l));
        };
        let (Some(gi), true) = pick(hi) else {
            return Err(RootSystemError::NonUniqueExtremum(l));
        };
        if &vals[bi] + &vals[gi] != int(self.index * l as i64) {
            return Err(RootSystemError::IndexMismatch(format!(
                "(ρ, β+γ) = {} at level {l}, expected {}",
                fmt_rational(&(&vals[bi] + &vals[gi])),
                self.index * l as i64
            )));
        }
        Ok((roots[bi].clone(), roots[gi].clone()))
    }

    /// Index ι computed two ways and required to agree:
    /// `(2ρ, ω₀)/(ω₀, ω₀)` with `ρ` the sum of fundamental weights, and the
    /// proportionality `2ρ_X = ι ω₀` of the sum of all roots with positive level.
    fn compute_index(&self) -> Result<i64, RootSystemError> {
        let k = self.node_index;
        let norm = self.omega0_norm();
        if !norm.is_positive() {
            return Err(RootSystemError::IndexMismatch(
                "(ω₀, ω₀) not positive".into(),
            ));
        }
        // (ω_i, ω₀) = d_i x_i in the marked normalization
        let two_rho_omega: Rational = self
            .omega0_in_roots
            .iter()
            .zip(&self.norm_symmetrizer)
            .map(|(x, d)| x * d)
            .sum::<Rational>()
            * int(2);
        let via_weights = &two_rho_omega / &norm;

        let graded: i64 = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, roots)| (i as i64 + 1) * roots.len() as i64)
            .sum();
        if int(graded) != two_rho_omega {
            return Err(RootSystemError::IndexMismatch(format!(
                "(2ρ, ω₀) = {} but Σ ℓ dim g_ℓ = {graded}",
                fmt_rational(&two_rho_omega)
            )));
        }

        let n = self.rs.rank();
        let mut two_rho_x = vec![0i64; n];
        for roots in &self.levels {
            for a in roots {
                for (s, c) in two_rho_x.iter_mut().zip(&a.0) {
                    *s += c;
                }
            }
        }
        let via_roots = int(two_rho_x[k]) / &norm;
        for (s, x) in two_rho_x.iter().zip(&self.omega0_in_roots) {
            if int(*s) != &via_roots * x {
                return Err(RootSystemError::IndexMismatch(
                    "2ρ_X is not proportional to ω₀".into(),
                ));
            }
        }
        if via_weights != via_roots {
            return Err(RootSystemError::IndexMismatch(format!(
                "{} vs {}",
                fmt_rational(&via_weights),
                fmt_rational(&via_roots)
            )));
        }
        if !via_roots.is_integer() || !via_roots.is_positive() {
            return Err(RootSystemError::IndexMismatch(format!(
                "index {} is not a positive integer",
                fmt_rational(&via_roots)
            )));
        }
        Ok(via_roots.to_integer().to_i64().expect("small index"))
    }

    pub fn is_cominuscule(&self) -> bool {
        self.lmax == 1
    }

    /// `Σ_k #{α ∈ g_ℓ : (ρ, α) = k}` per level, as `(k, count)` maps.
    pub fn level_heights(&self) -> Vec<BTreeMap<Rational, u32>> {
        self.levels
            .iter()
            .map(|roots| {
                let mut m = BTreeMap::new();
                for a in roots {
                    *m.entry(self.rho_pair_unchecked(a)).or_insert(0) += 1;
                }
                m
            })
            .collect()
    }

    /// Coefficients of `α^∨` over the simple coroots: `c_i d_i / d_α` with
    /// `d_α = (α, α)/2`.
    pub fn coroot(&self, a: &Root) -> Root {
        let rs = &self.rs;
        let n = rs.rank();
        let d = &rs.symmetrizer;
        let mut half_norm = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                half_norm += int(a.0[i] * a.0[j] * rs.cartan[i][j]) * &d[i];
            }
        }
        half_norm /= int(2);
        Root(
            a.0.iter()
                .zip(d)
                .map(|(&c, di)| {
                    let q = int(c) * di / &half_norm;
                    assert!(q.is_integer(), "coroot coefficient {q} not integral");
                    i64::try_from(q.to_integer()).expect("small coefficient")
                })
                .collect(),
        )
    }

    /// Exponent tables in the coroot grading: level `(ω₀, α^∨)`, key
    /// `(ρ, α^∨)`. Equal to [`Self::level_heights`] when simply laced.
    pub fn coroot_level_heights(&self) -> Vec<BTreeMap<Rational, u32>> {
        let mut out: Vec<BTreeMap<Rational, u32>> = Vec::new();
        for a in self.levels.iter().flatten() {
            let c = self.coroot(a);
            let l = c.0[self.node_index] as usize;
            if out.len() < l {
                out.resize_with(l, BTreeMap::new);
            }
            *out[l - 1].entry(int(c.height())).or_insert(0) += 1;
        }
        out
    }

    pub fn label(&self) -> String {
        format!("{}/P{}", self.rs.simple_type, self.node())
    }
}

/// Gaussian elimination over the rationals for a non-singular square system.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("Cartan matrix is non-singular");
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Rational::one() / &a[col][col];
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}
