use std::f64::consts::PI;

use b4ns_core::picard::{resonance_omega, SignPattern};
use b4ns_core::spectral::{make_grid, SpectralField};
use b4ns_core::variation::{make_up_atom, modulation_lemma_check, p_variation, p_variation_scalar};
use b4ns_core::Complex64;
use proptest::prelude::*;

/// Maximum over every sub-partition that keeps both endpoints.
fn enumerate(values: &[f64], p: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let interior = n - 2;
    let mut best = 0.0f64;
    for mask in 0u32..(1 << interior) {
        let mut prev = 0;
        let mut sum = 0.0;
        for k in 1..n {
            if k == n - 1 || mask >> (k - 1) & 1 == 1 {
                sum += (values[k] - values[prev]).abs().powf(p);
                prev = k;
            }
        }
        best = best.max(sum);
    }
    best.powf(1.0 / p)
}

fn path_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 2..=12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dynamic_program_equals_enumeration(values in path_strategy(), p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 4.0])) {
        let dp = p_variation_scalar(&values, p, false).unwrap();
        prop_assert_eq!(dp, enumerate(&values, p));
        let mut padded = values.clone();
        padded.push(0.0);
        prop_assert_eq!(p_variation_scalar(&values, p, true).unwrap(), enumerate(&padded, p));
    }

    #[test]
    fn non_increasing_in_p(values in path_strategy()) {
        let v: Vec<f64> = [1.0, 2.0, 3.0, 4.0].iter().map(|&p| p_variation_scalar(&values, p, true).unwrap()).collect();
        for w in v.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn atoms_have_variation_at_most_two(
        norms in prop::collection::vec(0.0f64..3.0, 1..10),
        phases in prop::collection::vec(0.0f64..(2.0 * PI), 10),
        modes in prop::collection::vec(-3i64..4, 10),
        p in prop::sample::select(vec![1.0, 2.0, 4.0]),
    ) {
        prop_assume!(norms.iter().any(|&x| x > 0.0));
        let g = make_grid(1, 8, 2.0 * PI).unwrap();
        let blocks: Vec<SpectralField> = norms
            .iter()
            .enumerate()
            .map(|(k, &r)| SpectralField::plane_wave(g, [modes[k], 0], Complex64::from_polar(r, phases[k])).unwrap())
            .collect();
        let partition: Vec<f64> = (0..=blocks.len()).map(|k| k as f64 * 0.25).collect();
        let atom = make_up_atom(&partition, &blocks, p).unwrap();
        let mass: f64 = atom.blocks().iter().map(|b| b.l2_norm().powf(p)).sum();
        prop_assert!((mass - 1.0).abs() < 1e-12);
        prop_assert!(p_variation(&atom.to_sample(), p, true).unwrap() <= 2.0);
    }

    #[test]
    fn step_paths_embed_downwards(values in path_strategy(), p in 1.0f64..4.0, dq in 0.0f64..3.0) {
        let a = p_variation_scalar(&values, p, true).unwrap();
        let b = p_variation_scalar(&values, p + dq, true).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn lemma_holds(xi4 in prop::array::uniform4(-10.0f64..10.0), tau4 in prop::array::uniform4(-1e4f64..1e4)) {
        let xi = [xi4[0], xi4[1], xi4[2], xi4[3], -xi4.iter().sum::<f64>()];
        let tau = [tau4[0], tau4[1], tau4[2], tau4[3], -tau4.iter().sum::<f64>()];
        let (_, _, ok) = modulation_lemma_check(&tau, &xi).unwrap();
        prop_assert!(ok);
    }

    /// With zero input modulation, the lemma's left side is the resonance
    /// function of the fully conjugated quartic.
    #[test]
    fn lemma_matches_conjugate_quartic_phase(eta in prop::array::uniform4(-10.0f64..10.0)) {
        let out = -eta.iter().sum::<f64>();
        let xi = [out, eta[0], eta[1], eta[2], eta[3]];
        let taus: Vec<f64> = eta.iter().map(|e| e.powi(4)).collect();
        let tau = [-taus.iter().sum::<f64>(), taus[0], taus[1], taus[2], taus[3]];
        let (lhs, rhs, ok) = modulation_lemma_check(&tau, &xi).unwrap();
        let pattern = SignPattern::from_monomial(0, 4).unwrap();
        let omega = resonance_omega(out, &eta, &pattern).unwrap();
        prop_assert!((lhs - omega.abs()).abs() <= 1e-12 * lhs.max(1.0));
        prop_assert!(ok && omega.abs() >= rhs);
    }
}
