use num_complex::Complex64;

use crate::{Error, Result};

/// The derivative `∂` in front of the polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    /// `∂/∂x_k` (zero-based axis), symbol `iξ_k`.
    Coordinate(usize),
    /// `|∇|`, symbol `|ξ|`.
    Modulus,
}

/// One monomial `c·f^α g^β` of `P_m(f, g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub alpha: usize,
    pub beta: usize,
    pub coeff: f64,
}

/// Dimension, degree and nonlinearity `∂P_m(u, ū)` of an equation.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSpec {
    dim: usize,
    degree: usize,
    terms: Vec<Monomial>,
    derivative: Derivative,
}

impl EquationSpec {
    pub fn new(dim: usize, degree: usize, terms: Vec<Monomial>, derivative: Derivative) -> Result<Self> {
        if degree < 2 {
            return Err(Error::domain(format!("degree must be at least 2, got {degree}")));
        }
        if !(1..=2).contains(&dim) {
            return Err(Error::domain(format!("dimension {dim} outside 1..=2")));
        }
        if terms.is_empty() {
            return Err(Error::domain("nonlinearity needs at least one monomial"));
        }
        for t in &terms {
            if t.alpha + t.beta != degree {
                return Err(Error::domain(format!(
                    "monomial f^{} g^{} does not have degree {degree}",
                    t.alpha, t.beta
                )));
            }
            if !t.coeff.is_finite() {
                return Err(Error::domain("monomial coefficient must be finite"));
            }
        }
        if let Derivative::Coordinate(k) = derivative {
            if k >= dim {
                return Err(Error::domain(format!("axis {k} out of range for dimension {dim}")));
            }
        }
        Ok(EquationSpec { dim, degree, terms, derivative })
    }

    /// Single monomial `u^α ū^{m−α}` with unit coefficient.
    pub fn monomial(dim: usize, degree: usize, alpha: usize, derivative: Derivative) -> Result<Self> {
        if alpha > degree {
            return Err(Error::domain(format!("α = {alpha} exceeds degree {degree}")));
        }
        EquationSpec::new(dim, degree, vec![Monomial { alpha, beta: degree - alpha, coeff: 1.0 }], derivative)
    }

    /// `∂_x(ū⁴)` in one dimension.
    pub fn quartic_conjugate() -> Self {
        EquationSpec::monomial(1, 4, 0, Derivative::Coordinate(0)).expect("valid quartic nonlinearity")
    }

    /// `∂_x(|u|²u)` in one dimension.
    pub fn cubic() -> Self {
        EquationSpec::monomial(1, 3, 2, Derivative::Coordinate(0)).expect("valid cubic nonlinearity")
    }

    /// `Σ_α binom(m, α) u^α ū^{m−α} = (u + ū)^m`: every ordered sign pattern
    /// `(±₁, …, ±_m)` counted once.
    pub fn all_sign_patterns(dim: usize, degree: usize, derivative: Derivative) -> Result<Self> {
        let mut terms = Vec::with_capacity(degree + 1);
        let mut binom = 1.0;
        for alpha in 0..=degree {
            terms.push(Monomial { alpha, beta: degree - alpha, coeff: binom });
            binom = binom * (degree - alpha) as f64 / (alpha + 1) as f64;
        }
        EquationSpec::new(dim, degree, terms, derivative)
    }

    /// Same equation with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let terms = self.terms.iter().map(|t| Monomial { coeff: t.coeff * factor, ..*t }).collect();
        EquationSpec { terms, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn derivative(&self) -> Derivative {
        self.derivative
    }

    /// True when every coefficient vanishes.
    pub fn is_linear(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }

    /// Fourier symbol of `∂` at `ξ`.
    pub fn symbol(&self, xi: [f64; 2]) -> Complex64 {
        match self.derivative {
            Derivative::Coordinate(k) => Complex64::new(0.0, xi[k]),
            Derivative::Modulus => Complex64::new(xi[0].hypot(xi[1]), 0.0),
        }
    }
}
