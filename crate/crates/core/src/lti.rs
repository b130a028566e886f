//! Polynomial and rational transfer-function arithmetic, root finding, and
//! stability tests. Everything downstream (margins, simulation, synthesis,
//! the design loop) is built on these primitives.
//!
//! Coefficients are stored in descending degree order, `coeffs[0]*s^n + ...
//! + coeffs[n]`, matching the benchmark file layout `"den": [1, B]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LtiError {
    #[error("constant polynomial has no roots")]
    ConstantPolynomial,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("improper transfer function: numerator degree {num} exceeds denominator degree {den}")]
    Improper { num: usize, den: usize },
    #[error("delay must be nonnegative, got {0}")]
    NegativeDelay(f64),
    #[error("rational feedback requires delay-free loop")]
    DelayedFeedback,
    #[error("cancel common integrator before DC evaluation")]
    IndeterminateDcGain,
    #[error("bandwidth coincides with plant zero")]
    BandwidthAtPlantZero,
    #[error("bandwidth coincides with plant pole")]
    BandwidthAtPlantPole,
    #[error("{0}")]
    Invalid(String),
}

/// Real polynomial in `s`, coefficients in descending degree order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Build from descending-order coefficients. Leading coefficients smaller
    /// than `1e-12 * max|coeff|` are trimmed; the zero polynomial normalizes
    /// to `[0.0]`.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if max == 0.0 {
            return Polynomial { coeffs: vec![0.0] };
        }
        let tol = 1e-12 * max;
        let first = coeffs
            .iter()
            .position(|c| c.abs() > tol)
            .unwrap_or(coeffs.len() - 1);
        Polynomial {
            coeffs: coeffs.split_off(first),
        }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^k`, zero when `k` exceeds the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        let n = self.degree();
        if k > n {
            0.0
        } else {
            self.coeffs[n - k]
        }
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let n = self.degree();
        if n == 0 {
            return Polynomial::constant(0.0);
        }
        let coeffs: Vec<f64> = self.coeffs[..n]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (n - i) as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    /// Coefficient-wise sum; exact for representable values.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[n - self.coeffs.len() + i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[n - other.coeffs.len() + i] += c;
        }
        Polynomial::new(out)
    }

    /// Largest real part over the roots; `-inf` for constants.
    pub fn max_root_real_part(&self) -> f64 {
        match poly_roots(self) {
            Ok(roots) => roots.iter().fold(f64::NEG_INFINITY, |m, r| m.max(r.re)),
            Err(_) => f64::NEG_INFINITY,
        }
    }
}

/// Convolution product of two polynomials.
pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = vec![0.0; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &ca) in a.coeffs.iter().enumerate() {
        for (j, &cb) in b.coeffs.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    Polynomial::new(out)
}

/// Scaled residual used to vet a candidate root:
/// `|p(r)| / (max|coeff| * max(1, |r|)^deg)`.
pub fn root_residual(p: &Polynomial, r: Complex64) -> f64 {
    let max = p.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max == 0.0 {
        return 0.0;
    }
    p.eval_complex(r).norm() / (max * r.norm().max(1.0).powi(p.degree() as i32))
}

/// All roots of `p` via a balanced companion-matrix eigenvalue problem,
/// polished with a few Newton steps. Roots at the origin are factored out
/// exactly first (exact zero trailing coefficients only).
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>, LtiError> {
    if p.degree() == 0 {
        return Err(LtiError::ConstantPolynomial);
    }
    let mut coeffs = p.coeffs.clone();
    let mut roots = Vec::with_capacity(p.degree());
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
        roots.push(Complex64::new(0.0, 0.0));
        coeffs.pop();
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(Complex64::new(-coeffs[1] / coeffs[0], 0.0));
        return Ok(roots);
    }
    if n == 2 {
        roots.extend(quadratic_roots(coeffs[0], coeffs[1], coeffs[2]));
        return Ok(roots);
    }

    // Companion matrix of the monic polynomial, first row = -a_i.
    let lead = coeffs[0];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    balance(&mut m);
    let eig = m.complex_eigenvalues();

    let deflated = Polynomial::new(coeffs);
    let dp = deflated.derivative();
    for e in eig.iter() {
        roots.push(newton_polish(&deflated, &dp, *e));
    }
    Ok(roots)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        // Citardauq form on the small root avoids cancellation.
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let r1 = if q != 0.0 { c / q } else { 0.0 };
        let r2 = if a != 0.0 { q / a } else { r1 };
        [Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Parlett–Reinsch balancing with radix-2 scaling (similarity transform,
/// eigenvalues unchanged).
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r: f64 = 0.0;
            let mut c: f64 = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let mut cc = c;
            let s = c + r;
            while cc < r / 2.0 {
                f *= 2.0;
                cc *= 4.0;
            }
            while cc > r * 2.0 {
                f /= 2.0;
                cc /= 4.0;
            }
            if (c * f + r / f) < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

fn newton_polish(p: &Polynomial, dp: &Polynomial, mut r: Complex64) -> Complex64 {
    let mut best = r;
    let mut best_res = root_residual(p, r);
    for _ in 0..4 {
        let d = dp.eval_complex(r);
        if d.norm() < 1e-300 {
            break;
        }
        r -= p.eval_complex(r) / d;
        let res = root_residual(p, r);
        if res < best_res {
            best = r;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityMethod {
    Routh,
    Roots,
    Simulation,
}

/// Outcome of a stability test on a polynomial's root locations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub max_real_part: f64,
    pub method: StabilityMethod,
}

/// Routh–Hurwitz sign test: stable iff every first-column entry shares the
/// sign of the leading coefficient. Zero pivots are replaced by 1e-12; when
/// any pivot falls below 1e-9 in magnitude the verdict is cross-checked
/// against the actual roots (boundary cases are where the epsilon trick
/// can mislead).
pub fn routh_stable(p: &Polynomial) -> StabilityVerdict {
    let n = p.degree();
    if n == 0 {
        return StabilityVerdict {
            stable: !p.is_zero(),
            max_real_part: f64::NEG_INFINITY,
            method: StabilityMethod::Routh,
        };
    }

    let lead_sign = p.leading().signum();
    // Work on a copy normalized to a positive leading coefficient.
    let coeffs: Vec<f64> = p.coeffs.iter().map(|c| c * lead_sign).collect();

    let cols = n / 2 + 1;
    let mut prev: Vec<f64> = (0..cols)
        .map(|j| coeffs.get(2 * j).copied().unwrap_or(0.0))
        .collect();
    let mut curr: Vec<f64> = (0..cols)
        .map(|j| coeffs.get(2 * j + 1).copied().unwrap_or(0.0))
        .collect();

    let mut first_col = vec![prev[0], curr[0]];
    let mut needs_crosscheck = false;
    const EPS: f64 = 1e-12;
    const CHECK_TOL: f64 = 1e-9;

    for _row in 2..=n {
        if curr.iter().all(|&c| c == 0.0) {
            // Full zero row: roots symmetric about the origin; never
            // strictly stable. Continue with the auxiliary-polynomial
            // derivative to finish the sign count.
            needs_crosscheck = true;
            let order = n + 2 - first_col.len(); // degree of the auxiliary row
            for (j, c) in curr.iter_mut().enumerate() {
                let power = order as i64 - 2 * j as i64;
                if power > 0 {
                    *c = prev[j] * power as f64;
                }
            }
        }
        let mut pivot = curr[0];
        if pivot == 0.0 {
            needs_crosscheck = true;
            pivot = EPS;
        } else if pivot.abs() < CHECK_TOL {
            needs_crosscheck = true;
        }
        let mut next = vec![0.0; cols];
        for j in 0..cols - 1 {
            let a = prev.get(j + 1).copied().unwrap_or(0.0);
            let b = curr.get(j + 1).copied().unwrap_or(0.0);
            next[j] = (pivot * a - prev[0] * b) / pivot;
        }
        first_col.push(next[0]);
        prev = curr;
        curr = next;
    }

    let routh_verdict = first_col.iter().all(|&c| c > 0.0);
    let max_re = p.max_root_real_part();

    if needs_crosscheck {
        StabilityVerdict {
            stable: max_re < 0.0,
            max_real_part: max_re,
            method: StabilityMethod::Roots,
        }
    } else {
        StabilityVerdict {
            stable: routh_verdict,
            max_real_part: max_re,
            method: StabilityMethod::Routh,
        }
    }
}

/// Rational LTI model `num(s)/den(s) * e^(-delay*s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferFunction {
    num: Polynomial,
    den: Polynomial,
    delay: f64,
}

impl TransferFunction {
    pub fn new(num: Polynomial, den: Polynomial, delay: f64) -> Result<Self, LtiError> {
        if den.is_zero() {
            return Err(LtiError::ZeroDenominator);
        }
        if delay < 0.0 || !delay.is_finite() {
            return Err(LtiError::NegativeDelay(delay));
        }
        if num.degree() > den.degree() && !num.is_zero() {
            return Err(LtiError::Improper {
                num: num.degree(),
                den: den.degree(),
            });
        }
        Ok(TransferFunction { num, den, delay })
    }

    /// Delay-free rational model from descending coefficient slices.
    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self, LtiError> {
        TransferFunction::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()), 0.0)
    }

    pub fn with_delay(num: &[f64], den: &[f64], delay: f64) -> Result<Self, LtiError> {
        TransferFunction::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()), delay)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    /// Rational part with the delay stripped.
    pub fn rational_part(&self) -> TransferFunction {
        TransferFunction {
            num: self.num.clone(),
            den: self.den.clone(),
            delay: 0.0,
        }
    }

    /// Evaluate at a complex frequency point, delay included.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let rational = self.num.eval_complex(s) / self.den.eval_complex(s);
        if self.delay == 0.0 {
            rational
        } else {
            rational * (-s * self.delay).exp()
        }
    }

    /// Poles of the rational part.
    pub fn poles(&self) -> Result<Vec<Complex64>, LtiError> {
        if self.den.degree() == 0 {
            return Ok(Vec::new());
        }
        poly_roots(&self.den)
    }
}

impl std::fmt::Display for TransferFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn poly_str(p: &Polynomial) -> String {
            let n = p.degree();
            let mut parts = Vec::new();
            for (i, &c) in p.coeffs().iter().enumerate() {
                if c == 0.0 && n > 0 {
                    continue;
                }
                let pow = n - i;
                let term = match pow {
                    0 => format!("{c}"),
                    1 => {
                        if c == 1.0 {
                            "s".to_string()
                        } else {
                            format!("{c}*s")
                        }
                    }
                    _ => {
                        if c == 1.0 {
                            format!("s^{pow}")
                        } else {
                            format!("{c}*s^{pow}")
                        }
                    }
                };
                parts.push(term);
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ").replace("+ -", "- ")
            }
        }
        write!(f, "({}) / ({})", poly_str(&self.num), poly_str(&self.den))?;
        if self.delay > 0.0 {
            write!(f, " * exp(-{}*s)", self.delay)?;
        }
        Ok(())
    }
}

/// Series interconnection `a*b`; delays add, no pole-zero cancellation.
pub fn tf_series(a: &TransferFunction, b: &TransferFunction) -> TransferFunction {
    TransferFunction {
        num: poly_mul(&a.num, &b.num),
        den: poly_mul(&a.den, &b.den),
        delay: a.delay + b.delay,
    }
}

/// Complementary sensitivity `T = L / (1 + L)` for a rational loop.
pub fn tf_feedback_unity(l: &TransferFunction) -> Result<TransferFunction, LtiError> {
    if l.delay != 0.0 {
        return Err(LtiError::DelayedFeedback);
    }
    Ok(TransferFunction {
        num: l.num.clone(),
        den: l.den.add(&l.num),
        delay: 0.0,
    })
}

/// DC gain `num(0)/den(0)`; signed infinity when only the denominator
/// vanishes at the origin.
pub fn tf_dc_gain(g: &TransferFunction) -> Result<f64, LtiError> {
    let n0 = g.num.coeff(0);
    let d0 = g.den.coeff(0);
    if d0 == 0.0 {
        if n0 == 0.0 {
            return Err(LtiError::IndeterminateDcGain);
        }
        // Sign of num/den as s -> 0+ along the real axis.
        let k = g.den.coeffs().iter().rev().position(|&c| c != 0.0).unwrap();
        let dk = g.den.coeff(k);
        return Ok(f64::INFINITY * (n0 / dk).signum());
    }
    Ok(n0 / d0)
}
