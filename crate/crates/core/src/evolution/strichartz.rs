use std::fmt;

use super::equation::EquationSpec;
use super::norms::mixed_norm;
use super::propagate::free_propagate;
use super::trajectory::Trajectory;
use crate::spectral::{sobolev_norm, SpectralField};
use crate::{Error, Result};

/// A Lebesgue exponent in `[1, ∞]`, kept as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Finite { num: u64, den: u64 },
    Infinity,
}

impl Exponent {
    pub fn integer(k: u64) -> Self {
        Exponent::Finite { num: k, den: 1 }
    }

    /// `num/den` in lowest terms.
    pub fn ratio(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::domain(format!("exponent {num}/{den} is not a positive fraction")));
        }
        let g = gcd(num, den);
        Ok(Exponent::Finite { num: num / g, den: den / g })
    }

    pub fn value(&self) -> f64 {
        match *self {
            Exponent::Finite { num, den } => num as f64 / den as f64,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p` as `(num, den)`; `(0, 1)` for `p = ∞`.
    fn reciprocal(&self) -> (u128, u128) {
        match *self {
            Exponent::Finite { num, den } => (den as u128, num as u128),
            Exponent::Infinity => (0, 1),
        }
    }

    fn at_least_two(&self) -> bool {
        match *self {
            Exponent::Finite { num, den } => num as u128 >= 2 * den as u128,
            Exponent::Infinity => true,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite { num, den: 1 } => write!(f, "{num}"),
            Exponent::Finite { num, den } => write!(f, "{num}/{den}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `2/p + d/q = d/2` in exact arithmetic, excluding `(p, q, d) = (2, ∞, 2)`.
pub fn admissible_pair_check(p: Exponent, q: Exponent, dim: usize) -> Result<bool> {
    if !p.at_least_two() || !q.at_least_two() {
        return Err(Error::domain(format!("exponents must be >= 2, got ({p}, {q})")));
    }
    if dim == 2 && p == Exponent::integer(2) && q == Exponent::Infinity {
        return Ok(false);
    }
    let d = dim as u128;
    let (pn, pd) = p.reciprocal();
    let (qn, qd) = q.reciprocal();
    // 2·pn/pd + d·qn/qd == d/2  ⇔  4·pn·qd + 2d·qn·pd == d·pd·qd
    Ok(4 * pn * qd + 2 * d * qn * pd == d * pd * qd)
}

/// `(p_m, q_m) = (2(m−1), 2(m−1)d/((m−1)d−2))`, with `(4, ∞)` for `d = 1, m = 3`.
pub fn xs_exponents(dim: usize, degree: usize) -> Result<(Exponent, Exponent)> {
    if degree < 2 || dim < 1 {
        return Err(Error::domain(format!("need m >= 2 and d >= 1, got m = {degree}, d = {dim}")));
    }
    let k = ((degree - 1) * dim) as u64;
    let p = Exponent::integer(2 * (degree as u64 - 1));
    if dim == 1 && degree == 3 {
        return Ok((p, Exponent::Infinity));
    }
    if k <= 2 {
        return Err(Error::domain(format!("(m−1)d = {k} <= 2 has no Strichartz pair")));
    }
    Ok((p, Exponent::ratio(2 * k, k - 2)?))
}

/// `‖S(·)φ‖_{L^p_t L^q_x([0,T])} / ‖|∇|^{−2/p} φ‖_{L²}` sampled at
/// `samples + 1` uniform instants.
pub fn strichartz_ratio(phi: &SpectralField, p: Exponent, q: Exponent, horizon: f64, samples: usize) -> Result<f64> {
    let dim = phi.grid().dim();
    if !admissible_pair_check(p, q, dim)? {
        return Err(Error::domain(format!("({p}, {q}) is not admissible in dimension {dim}")));
    }
    if !(horizon > 0.0) || samples < 2 {
        return Err(Error::domain("need a positive horizon and at least two samples"));
    }
    let times: Vec<f64> = (0..=samples).map(|k| horizon * k as f64 / samples as f64).collect();
    let states = times.iter().map(|&t| free_propagate(phi, t)).collect();
    let spec = EquationSpec::monomial(dim, 2, 1, super::Derivative::Modulus)?.scaled(0.0);
    let traj = Trajectory::new(times, states, spec)?;
    let numerator = mixed_norm(&traj, p.value(), q.value())?;
    let denominator = sobolev_norm(phi, -2.0 / p.value(), true)?;
    if denominator == 0.0 {
        return Err(Error::domain("zero data has no Strichartz ratio"));
    }
    Ok(numerator / denominator)
}
