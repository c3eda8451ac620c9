use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// An `m`-tuple of signs; `−` marks a conjugated slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    signs: Vec<Sign>,
}

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::domain("sign pattern must be non-empty"));
        }
        Ok(SignPattern { signs })
    }

    /// `(+, −, +, −, …)` of length `m`.
    pub fn alternating(m: usize) -> Result<Self> {
        Self::new((0..m).map(|j| if j % 2 == 0 { Sign::Plus } else { Sign::Minus }).collect())
    }

    /// `α` pluses followed by `β` minuses, the pattern of `f^α g^β`.
    pub fn from_monomial(alpha: usize, beta: usize) -> Result<Self> {
        Self::new(std::iter::repeat_n(Sign::Plus, alpha).chain(std::iter::repeat_n(Sign::Minus, beta)).collect())
    }

    /// All `2^m` patterns of length `m`, in binary order with `+` first.
    pub fn all(m: usize) -> Result<Vec<Self>> {
        if m == 0 || m > 20 {
            return Err(Error::domain(format!("pattern length {m} outside 1..=20")));
        }
        Ok((0..1usize << m)
            .map(|bits| SignPattern {
                signs: (0..m).map(|j| if bits >> (m - 1 - j) & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect(),
            })
            .collect())
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// `Σ ±_j x_j`.
    pub fn combine(&self, xs: &[f64]) -> f64 {
        self.signs.iter().zip(xs).map(|(s, x)| s.value() * x).sum()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            f.write_str(if *s == Sign::Plus { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TwoFloat {
    hi: f64,
    lo: f64,
}

impl TwoFloat {
    pub(crate) fn from_f64(x: f64) -> Self {
        TwoFloat { hi: x, lo: 0.0 }
    }

    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        TwoFloat { hi: s, lo: (a - (s - bb)) + (b - bb) }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        TwoFloat { hi: p, lo: a.mul_add(b, -p) }
    }

    pub(crate) fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let v = Self::two_sum(s.hi, s.lo + t.hi);
        Self::two_sum(v.hi, v.lo + t.lo)
    }

    pub(crate) fn neg(self) -> Self {
        TwoFloat { hi: -self.hi, lo: -self.lo }
    }

    pub(crate) fn mul(self, o: Self) -> Self {
        let p = Self::two_prod(self.hi, o.hi);
        let lo = p.lo + (self.hi * o.lo + self.lo * o.hi);
        Self::two_sum(p.hi, lo)
    }

    pub(crate) fn fourth_power(self) -> Self {
        let sq = self.mul(self);
        sq.mul(sq)
    }
}

fn constraint_tolerance(xs: &[f64]) -> f64 {
    1e-12 * xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0)
}

/// `Ω = −ξ⁴ + Σ ±_j ξ_j⁴` for one-dimensional frequencies with
/// `ξ = Σ ±_j ξ_j`. Evaluated in double-double arithmetic, so `Ω` keeps its
/// absolute accuracy when the quartic terms nearly cancel.
pub fn resonance_omega(xi_out: f64, xi_in: &[f64], signs: &SignPattern) -> Result<f64> {
    if xi_in.len() != signs.len() {
        return Err(Error::domain(format!("{} frequencies for a pattern of length {}", xi_in.len(), signs.len())));
    }
    let sum = signs.combine(xi_in);
    if (sum - xi_out).abs() > constraint_tolerance(xi_in) {
        return Err(Error::Constraint(format!("output frequency {xi_out} differs from the signed sum {sum}")));
    }
    let mut acc = TwoFloat::from_f64(xi_out).fourth_power().neg();
    for (x, s) in xi_in.iter().zip(signs.signs()) {
        let q = TwoFloat::from_f64(*x).fourth_power();
        acc = acc.add(if *s == Sign::Plus { q } else { q.neg() });
    }
    Ok(acc.value())
}

/// Both sides of
/// `−(ξ₁−ξ₂+ξ₃)⁴ + ξ₁⁴ − ξ₂⁴ + ξ₃⁴ = 2(ξ₁−ξ₂)(ξ₂−ξ₃)(2ξ₁² + ξ₂² + 2ξ₃² − ξ₁ξ₂ − ξ₂ξ₃ + 3ξ₃ξ₁)`.
///
/// The left side is summed in double-double arithmetic (with the inner sum
/// kept exact) since its four quartic terms cancel. The quadratic factor on the
/// right is positive definite, so plain floating point is accurate there.
pub fn resonance_factorization_check(x1: f64, x2: f64, x3: f64) -> (f64, f64) {
    let d = TwoFloat::from_f64(x1).add(TwoFloat::from_f64(-x2));
    let sum = d.add(TwoFloat::from_f64(x3));
    let lhs = sum
        .fourth_power()
        .neg()
        .add(TwoFloat::from_f64(x1).fourth_power())
        .add(TwoFloat::from_f64(x2).fourth_power().neg())
        .add(TwoFloat::from_f64(x3).fourth_power());
    let quad = 2.0 * x1 * x1 + x2 * x2 + 2.0 * x3 * x3 - x1 * x2 - x2 * x3 + 3.0 * x3 * x1;
    let rhs = 2.0 * (x1 - x2) * (x2 - x3) * quad;
    (lhs.value(), rhs)
}

/// `|lhs − rhs| / max(|lhs|, |rhs|)`, zero when both vanish.
pub fn relative_discrepancy(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// An upper bound for `|Ω|` over `ξ₁, ξ₂, ξ₃ ∈ [N − 1/N, N + 1/N]` with the
/// alternating pattern: `8h²(8b² − 2a²)` for the band `[a, b]`, `h = 1/N`.
pub fn cubic_band_phase_bound(scale: f64) -> Result<f64> {
    if !(scale > 1.0) {
        return Err(Error::domain(format!("band scale must exceed 1, got {scale}")));
    }
    let h = 1.0 / scale;
    let (a, b) = (scale - h, scale + h);
    Ok(8.0 * h * h * (8.0 * b * b - 2.0 * a * a))
}

/// The largest `t` with `t·max|Ω| ≤ 1/2` for every band scale in `scales`.
pub fn small_time_rule(scales: &[f64]) -> Result<f64> {
    let mut bound: f64 = 0.0;
    for &n in scales {
        bound = bound.max(cubic_band_phase_bound(n)?);
    }
    if bound == 0.0 {
        return Err(Error::domain("no band scales given"));
    }
    Ok(0.5 / bound)
}
