use num_complex::Complex64;

use super::equation::EquationSpec;
use crate::spectral::{Grid, SpectralField};

/// Pseudospectral evaluator of `∂P_m(u, ū)` on a fixed grid.
///
/// Products are formed on a zero-padded grid with at least `(m+1)n/2` points
/// per axis, so no aliased product lands on a retained mode.
#[derive(Debug, Clone)]
pub struct Nonlinearity {
    spec: EquationSpec,
    grid: Grid,
    padded: Grid,
    symbol: Vec<Complex64>,
}

impl Nonlinearity {
    pub fn new(grid: Grid, spec: &EquationSpec) -> Self {
        let need = ((spec.degree() + 1) * grid.n()).div_ceil(2);
        let padded = grid.with_modes(need.next_power_of_two()).expect("padded grid keeps a valid shape");
        let symbol = (0..grid.len()).map(|i| spec.symbol(grid.wavevector(i))).collect();
        Nonlinearity { spec: spec.clone(), grid, padded, symbol }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn padded_grid(&self) -> &Grid {
        &self.padded
    }

    pub fn evaluate(&self, u: &SpectralField) -> SpectralField {
        debug_assert_eq!(u.grid(), &self.grid);
        if self.spec.is_linear() {
            return SpectralField::zeros(self.grid);
        }
        let phys = u.resample(self.padded).to_physical();
        let product: Vec<Complex64> = phys.iter().map(|&v| self.polynomial(v)).collect();
        let padded = SpectralField::from_physical(self.padded, &product).expect("padded length matches");
        padded.resample(self.grid).apply_symbol(&self.symbol)
    }

    /// The multilinear form behind `∂P_m`: each monomial `c f^α g^β` takes
    /// slots `0..α` as is and slots `α..m` conjugated. Passing the same field
    /// in every slot recovers [`Nonlinearity::evaluate`].
    pub fn evaluate_slots(&self, slots: &[SpectralField]) -> SpectralField {
        let m = self.spec.degree();
        assert_eq!(slots.len(), m, "one field per slot");
        if self.spec.is_linear() {
            return SpectralField::zeros(self.grid);
        }
        let phys: Vec<Vec<Complex64>> = slots
            .iter()
            .map(|u| {
                debug_assert_eq!(u.grid(), &self.grid);
                u.resample(self.padded).to_physical()
            })
            .collect();
        let mut product = vec![Complex64::new(0.0, 0.0); self.padded.len()];
        for t in self.spec.terms().iter().filter(|t| t.coeff != 0.0) {
            for (x, out) in product.iter_mut().enumerate() {
                let mut acc = Complex64::new(t.coeff, 0.0);
                for (j, slot) in phys.iter().enumerate() {
                    acc *= if j < t.alpha { slot[x] } else { slot[x].conj() };
                }
                *out += acc;
            }
        }
        let padded = SpectralField::from_physical(self.padded, &product).expect("padded length matches");
        padded.resample(self.grid).apply_symbol(&self.symbol)
    }

    fn polynomial(&self, v: Complex64) -> Complex64 {
        let vc = v.conj();
        self.spec
            .terms()
            .iter()
            .filter(|t| t.coeff != 0.0)
            .map(|t| {
                let mut acc = Complex64::new(t.coeff, 0.0);
                for _ in 0..t.alpha {
                    acc *= v;
                }
                for _ in 0..t.beta {
                    acc *= vc;
                }
                acc
            })
            .sum()
    }
}

/// `∂P_m(u, ū)` with zero-padding dealiasing; `∂` acts as `iξ_k` or `|ξ|`.
pub fn apply_nonlinearity(u: &SpectralField, spec: &EquationSpec) -> SpectralField {
    Nonlinearity::new(*u.grid(), spec).evaluate(u)
}
