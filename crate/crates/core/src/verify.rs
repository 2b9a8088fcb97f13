//! Certification of the canonical-strip hypotheses.
//!
//! Verdicts are decided only from exact data: rational roots read off the
//! level tables, and Sturm certificates for the residual factor after it is
//! reduced to a real-rootedness question by the even/odd split about its
//! symmetry center. Floating-point approximations are produced for display
//! and cross-checking and never feed a verdict.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{HilbertData, Variable};
use crate::ratpoly::{
    fmt_rational, int, to_f64, Bound, PolyError, RatPoly, Rational, SturmCertificate,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("polynomial is not symmetric about any center")]
    NoSymmetryCenter,
    #[error("the zero polynomial has no root structure")]
    ZeroPolynomial,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("root approximation did not converge after {0} restarts")]
    NoConvergence(usize),
}

/// Outcome of a critical-line check on one polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCheck {
    /// `None` for non-zero constants, which have no roots.
    pub center: Option<Rational>,
    pub eps: u32,
    /// Even part `q` with `p(w + c) = w^eps q(w²)`.
    pub even_part: RatPoly,
    pub on_line: bool,
    /// Every coefficient of `q` is non-negative.
    pub even_part_nonnegative: bool,
    pub certificates: Vec<(RatPoly, u32, SturmCertificate)>,
}

impl LineCheck {
    /// Number of roots of `p` counted with multiplicity.
    pub fn root_count(&self) -> usize {
        2 * self.even_part.deg() + self.eps as usize
    }
}

/// Decides whether every root of `p` lies on the vertical line through its
/// symmetry center: `q(u)` must have only real roots in `(-∞, 0]`.
pub fn check_line(p: &RatPoly) -> Result<LineCheck, VerifyError> {
    if p.is_zero() {
        return Err(VerifyError::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Ok(LineCheck {
            center: None,
            eps: 0,
            even_part: p.clone(),
            on_line: true,
            even_part_nonnegative: true,
            certificates: Vec::new(),
        });
    }
    let (center, _) = p.symmetry_center().ok_or(VerifyError::NoSymmetryCenter)?;
    let (eps, q) = p.even_odd_split(&center)?;
    let lead_sign = q.leading().signum();
    let even_part_nonnegative = q.coeffs().iter().all(|c| !(c * &lead_sign).is_negative());
    let mut certificates = Vec::new();
    let mut on_line = true;
    for (f, m) in q.squarefree_parts() {
        let cert = f.sturm_count(&Bound::NegInf, &Bound::Finite(Rational::zero()))?;
        if cert.count != f.deg() {
            on_line = false;
        }
        certificates.push((f, m, cert));
    }
    Ok(LineCheck {
        center: Some(center),
        eps,
        even_part: q,
        on_line,
        even_part_nonnegative,
        certificates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    CS,
    NCS,
    TCS,
    CL,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    NotApplicable,
    /// The exact data cannot decide: the residual leaves the line but its
    /// off-line roots were not localized against the strip.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// For `holds`: true when no root touches the boundary of the region.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub strict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Verdict {
    fn na() -> Self {
        Verdict {
            status: Status::NotApplicable,
            strict: None,
            witness: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarietyClass {
    Fano,
    CalabiYau,
    GeneralType,
}

impl VarietyClass {
    pub fn from_index(index: i64) -> Self {
        match index {
            i if i > 0 => VarietyClass::Fano,
            0 => VarietyClass::CalabiYau,
            _ => VarietyClass::GeneralType,
        }
    }

    /// Hypothesis the structure theorems predict for this class.
    pub fn predicted(self) -> Hypothesis {
        match self {
            VarietyClass::Fano => Hypothesis::TCS,
            VarietyClass::CalabiYau | VarietyClass::GeneralType => Hypothesis::CL,
        }
    }
}

impl fmt::Display for VarietyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarietyClass::Fano => "fano",
            VarietyClass::CalabiYau => "calabi_yau",
            VarietyClass::GeneralType => "general_type",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineVerdict {
    Certified,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripReport {
    pub description: String,
    pub dim: usize,
    pub index: i64,
    pub class: VarietyClass,
    /// Variable the roots below are expressed in.
    pub variable: Variable,
    /// Rational roots from the level tables, with multiplicity.
    pub rational_roots: Vec<(Rational, u32)>,
    /// Residual factor in `variable`.
    pub residual: RatPoly,
    pub residual_on_line: LineVerdict,
    pub residual_line: Option<Rational>,
    pub residual_check: LineCheck,
    pub verdicts: BTreeMap<Hypothesis, Verdict>,
    /// Some rational root sits on an endpoint of the closed tight segment.
    pub boundary_contact: bool,
    /// Hypothesis a theorem predicts for this case, if any.
    pub expected: Option<Hypothesis>,
}

impl StripReport {
    /// The predicted hypothesis is certified; undecided cases do not count.
    pub fn expected_holds(&self) -> bool {
        match self.expected {
            Some(h) => self.verdicts.get(&h).is_some_and(Verdict::holds),
            None => true,
        }
    }
}

/// Closed interval test with boundary detection.
fn in_closed(x: &Rational, lo: &Rational, hi: &Rational) -> (bool, bool) {
    let inside = lo <= x && x <= hi;
    (inside, inside && (x == lo || x == hi))
}

fn strip_verdict(
    roots: &[(Rational, u32)],
    lo: &Rational,
    hi: &Rational,
    line: &LineCheck,
    line_inside: bool,
) -> Verdict {
    let mut touching = false;
    for (r, _) in roots {
        let (inside, boundary) = in_closed(r, lo, hi);
        if !inside {
            return Verdict {
                status: Status::Fails,
                strict: None,
                witness: Some(fmt_rational(r)),
            };
        }
        touching |= boundary;
    }
    if !line.on_line {
        return Verdict {
            status: Status::Undetermined,
            strict: None,
            witness: Some("residual has roots off the critical line".into()),
        };
    }
    if line.root_count() > 0 && !line_inside {
        return Verdict {
            status: Status::Fails,
            strict: None,
            witness: Some("residual roots on a line outside the strip".into()),
        };
    }
    Verdict {
        status: Status::Holds,
        strict: Some(!touching),
        witness: None,
    }
}

fn line_verdict(roots: &[(Rational, u32)], center: &Rational, line: &LineCheck) -> Verdict {
    if let Some((r, _)) = roots.iter().find(|(r, _)| r != center) {
        return Verdict {
            status: Status::Fails,
            strict: None,
            witness: Some(fmt_rational(r)),
        };
    }
    if !line.on_line || line.center.as_ref().is_some_and(|c| c != center) {
        return Verdict {
            status: Status::Fails,
            strict: None,
            witness: Some(off_line_witness(line)),
        };
    }
    Verdict {
        status: Status::Holds,
        strict: Some(true),
        witness: None,
    }
}

/// Describes a failing line check, with an advisory root approximation.
fn off_line_witness(line: &LineCheck) -> String {
    let center = line.center.clone().unwrap_or_else(Rational::zero);
    for (f, _, cert) in &line.certificates {
        if cert.count == f.deg() {
            continue;
        }
        let mut msg = format!(
            "even part factor {} has {} of {} roots in (-inf, 0]",
            f,
            cert.count,
            f.deg()
        );
        if let Ok(approx) = approx_roots(f, 12) {
            if let Some(u) = approx.iter().find(|a| a.im.abs() > 1e-9 || a.re > 1e-12) {
                let w = Complex64::new(u.re, u.im).sqrt();
                let z = w + to_f64(&center);
                msg.push_str(&format!(
                    "; approx root {:.6}{:+.6}i (advisory)",
                    z.re, z.im
                ));
            }
        }
        return msg;
    }
    format!(
        "symmetry center {} differs from the expected line",
        fmt_rational(&center)
    )
}

/// Builds the strip report for a structured Hilbert polynomial.
///
/// Fano data is examined in the anticanonical variable, general type in the
/// canonical variable, and Calabi–Yau data in the L-variable; in each case
/// the expected symmetry line is `-1/2`, `+1/2`, `0` respectively.
pub fn strip_report(hd: &HilbertData) -> Result<StripReport, VerifyError> {
    let class = VarietyClass::from_index(hd.index);
    let (variable, scale, center) = match class {
        VarietyClass::Fano => (
            Variable::Anticanonical,
            int(hd.index),
            Rational::new((-1).into(), 2.into()),
        ),
        VarietyClass::CalabiYau => (Variable::AmpleGenerator, Rational::one(), Rational::zero()),
        VarietyClass::GeneralType => (
            Variable::Canonical,
            int(-hd.index),
            Rational::new(1.into(), 2.into()),
        ),
    };
    let residual = hd.residual.compose_affine(&scale, &Rational::zero())?;

    let mut rational_roots: BTreeMap<Rational, u32> = BTreeMap::new();
    for t in &hd.levels {
        for (k, &h) in &t.exponents {
            // (ℓz + k) vanishes at z = -k/ℓ in the L-variable
            let r = -(k / int(t.level as i64)) / &scale;
            *rational_roots.entry(r).or_insert(0) += h;
        }
    }
    let rational_roots: Vec<(Rational, u32)> = rational_roots.into_iter().collect();
    let residual_check = check_line(&residual)?;
    let residual_on_line = if residual.deg() == 0 {
        LineVerdict::NotApplicable
    } else if residual_check.on_line && residual_check.center.as_ref() == Some(&center) {
        LineVerdict::Certified
    } else {
        LineVerdict::Violated
    };

    let mut verdicts = BTreeMap::new();
    let mut boundary_contact = false;
    if class == VarietyClass::Fano {
        let one = Rational::one();
        let zero = Rational::zero();
        let iota = int(hd.index);
        let n1 = int(hd.dim as i64 + 1);
        let line_in = |lo: &Rational, hi: &Rational| lo <= &center && &center <= hi;

        let cs = strip_verdict(
            &rational_roots,
            &-one.clone(),
            &zero,
            &residual_check,
            line_in(&-one.clone(), &zero),
        );
        let (nlo, nhi) = (&one / &n1 - &one, -(&one / &n1));
        let ncs = strip_verdict(
            &rational_roots,
            &nlo,
            &nhi,
            &residual_check,
            line_in(&nlo, &nhi),
        );
        let (tlo, thi) = (&one / &iota - &one, -(&one / &iota));
        let tcs = strip_verdict(&rational_roots, &tlo, &thi, &residual_check, true);
        boundary_contact = rational_roots.iter().any(|(r, _)| *r == tlo || *r == thi);
        verdicts.insert(Hypothesis::CS, cs);
        verdicts.insert(Hypothesis::NCS, ncs);
        verdicts.insert(Hypothesis::TCS, tcs);
    } else {
        verdicts.insert(Hypothesis::CS, Verdict::na());
        verdicts.insert(Hypothesis::NCS, Verdict::na());
        verdicts.insert(Hypothesis::TCS, Verdict::na());
    }
    verdicts.insert(
        Hypothesis::CL,
        line_verdict(&rational_roots, &center, &residual_check),
    );

    Ok(StripReport {
        description: hd.description.clone(),
        dim: hd.dim,
        index: hd.index,
        class,
        variable,
        rational_roots,
        residual,
        residual_on_line,
        residual_line: Some(center),
        residual_check,
        verdicts,
        boundary_contact,
        expected: Some(class.predicted()),
    })
}

/// Line-only report for a bare polynomial, e.g. the abelian complete
/// intersections, using the polynomial's own symmetry center.
pub fn polynomial_line_report(
    description: &str,
    dim: usize,
    p: &RatPoly,
) -> Result<StripReport, VerifyError> {
    let check = check_line(p)?;
    let center = check.center.clone();
    let cl = if check.on_line {
        Verdict {
            status: Status::Holds,
            strict: Some(true),
            witness: None,
        }
    } else {
        Verdict {
            status: Status::Fails,
            strict: None,
            witness: Some(off_line_witness(&check)),
        }
    };
    let mut verdicts = BTreeMap::new();
    verdicts.insert(Hypothesis::CS, Verdict::na());
    verdicts.insert(Hypothesis::NCS, Verdict::na());
    verdicts.insert(Hypothesis::TCS, Verdict::na());
    verdicts.insert(Hypothesis::CL, cl);
    Ok(StripReport {
        description: description.to_string(),
        dim,
        index: 0,
        class: VarietyClass::GeneralType,
        variable: Variable::AmpleGenerator,
        rational_roots: Vec::new(),
        residual: p.clone(),
        residual_on_line: if check.on_line {
            LineVerdict::Certified
        } else {
            LineVerdict::Violated
        },
        residual_line: center,
        residual_check: check,
        verdicts,
        boundary_contact: false,
        expected: Some(Hypothesis::CL),
    })
}

/// Advisory floating-point root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxRoot {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
    /// `|f(ẑ)|` for the square-free factor `f` the root was taken from.
    pub residual: f64,
}

const MAX_RESTARTS: usize = 6;
const MAX_ITERS: usize = 2000;

/// Aberth–Ehrlich approximations of all roots, one pass per square-free
/// factor so that repeated roots come out accurately. Display only.
pub fn approx_roots(p: &RatPoly, digits: u32) -> Result<Vec<ApproxRoot>, VerifyError> {
    if p.deg() < 1 {
        return Err(PolyError::DegreeTooLow(1).into());
    }
    let tol = 10f64.powi(-(digits.clamp(1, 15) as i32));
    let mut out = Vec::new();
    for (f, mult) in p.squarefree_parts() {
        let coeffs: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
        let zs = aberth(&coeffs, tol)?;
        for z in zs {
            out.push(ApproxRoot {
                re: z.re,
                im: z.im,
                mult,
                residual: horner(&coeffs, z).0.norm(),
            });
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth(coeffs: &[f64], tol: f64) -> Result<Vec<Complex64>, VerifyError> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if n == 1 {
        return Ok(vec![Complex64::new(-coeffs[0] / lead, 0.0)]);
    }
    // Cauchy bound on the root moduli
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let centroid = -coeffs[n - 1] / (lead * n as f64);
    for attempt in 0..MAX_RESTARTS {
        let r = radius * (0.5 + 0.1 * attempt as f64);
        let offset = 0.4 + 0.37 * attempt as f64;
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / n as f64 + offset;
                Complex64::new(centroid, 0.0) + Complex64::from_polar(r, theta)
            })
            .collect();
        for _ in 0..MAX_ITERS {
            let mut worst = 0.0f64;
            for k in 0..n {
                let (p, dp) = horner(coeffs, z[k]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| (z[k] - z[j]).inv())
                    .sum();
                let step = ratio / (Complex64::one() - ratio * repulsion);
                if step.is_finite() {
                    z[k] -= step;
                    worst = worst.max(step.norm() / (1.0 + z[k].norm()));
                }
            }
            if worst <= tol * 1e-2 {
                return Ok(z);
            }
        }
        // accept a run that stalled at the floating-point floor
        let stalled = z.iter().all(|&zk| {
            let (p, dp) = horner(coeffs, zk);
            (p / dp).norm() <= tol * (1.0 + zk.norm())
        });
        if stalled {
            return Ok(z);
        }
    }
    Err(VerifyError::NoConvergence(MAX_RESTARTS))
}
