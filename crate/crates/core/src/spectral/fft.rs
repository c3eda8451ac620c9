use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction))
}

/// Unnormalised in-place transform of a row-major `n^dim` array.
pub(crate) fn transform(data: &mut [Complex64], n: usize, dim: usize, direction: FftDirection) {
    let fft = plan(n, direction);
    match dim {
        1 => fft.process(data),
        2 => {
            fft.process(data);
            transpose(data, n);
            fft.process(data);
            transpose(data, n);
        }
        _ => unreachable!("grids are 1-d or 2-d"),
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// Unnormalised 1-d transform of a single sequence of arbitrary length.
pub(crate) fn transform_1d(data: &mut [Complex64], direction: FftDirection) {
    plan(data.len(), direction).process(data);
}
