//! Independent numerical checks of the vacuum module.

use mewheel_core::quantities::{C, HBAR};
use mewheel_core::vacuum::{mode_sum_oracle, vacuum_b_squared, ModeGrid};
use mewheel_core::{CutoffConvention, VacuumModel};

/// Adaptive Simpson on [a, b].
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// 4π ∫₀^ω_cut ħω³/(2π²c³) dω, integrated in the dimensionless variable
/// x = ω/ω_cut so the tolerance is relative.
fn b_squared_by_quadrature(omega_cut: f64) -> f64 {
    let spectral = |x: f64| {
        let w = x * omega_cut;
        4.0 * std::f64::consts::PI * HBAR * w.powi(3) / (2.0 * std::f64::consts::PI.powi(2) * C.powi(3)) * omega_cut
    };
    let scale = spectral(1.0);
    adaptive_simpson(&|x| spectral(x) / scale, 0.0, 1.0, 1e-12) * scale
}

#[test]
fn b_squared_matches_quadrature_over_log_spaced_sizes() {
    for cutoff in [
        CutoffConvention::WavelengthEqualsSize,
        CutoffConvention::HalfWavelength,
        CutoffConvention::ReducedWavelength,
    ] {
        let model = VacuumModel::new(1e-2, cutoff).unwrap();
        for i in 0..10 {
            let a = 1e-10 * 10f64.powf(i as f64 * 0.5);
            let omega_cut = C * cutoff.k_times_size() / a;
            let expected = b_squared_by_quadrature(omega_cut);
            let got = vacuum_b_squared(a, &model).unwrap().value;
            assert!(
                ((got - expected) / expected).abs() <= 1e-6,
                "{cutoff:?} a={a:e}: {got:e} vs {expected:e}"
            );
        }
    }
}

#[test]
fn b_squared_at_one_nanometre() {
    let got = vacuum_b_squared(1e-9, &VacuumModel::default()).unwrap().value;
    let expected = b_squared_by_quadrature(C * 2.0 * std::f64::consts::PI / 1e-9);
    assert!(((got - expected) / expected).abs() <= 1e-6);
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn oracle_momentum_scales_as_inverse_size() {
    let model = VacuumModel::default();
    let sizes = [1e-9, 2e-9, 4e-9, 8e-9];
    let logs: Vec<f64> = sizes.iter().map(|a: &f64| a.ln()).collect();
    let logp: Vec<f64> = sizes
        .iter()
        .map(|&a| {
            let g = ModeGrid::for_size(64, a, &model).unwrap();
            mode_sum_oracle(1e-3, a, &g)
                .unwrap()
                .momentum_along_axis
                .value
                .abs()
                .ln()
        })
        .collect();
    let s = slope(&logs, &logp);
    assert!((s + 1.0).abs() <= 0.05, "slope {s}");
}

#[test]
fn fixed_grid_momentum_scales_with_particle_volume() {
    // A k-grid fixed in absolute terms: larger particles count more modes
    // per cell (a³) against the same k⁴ integral.
    let g = ModeGrid::new(32, 2.0 * std::f64::consts::PI / 1e-9).unwrap();
    let p1 = mode_sum_oracle(1e-3, 1e-9, &g).unwrap().momentum_along_axis.value;
    let p2 = mode_sum_oracle(1e-3, 2e-9, &g).unwrap().momentum_along_axis.value;
    assert!(((p2 / p1) - 8.0).abs() < 1e-12);
}

#[test]
fn aggregation_scale_beats_cavity_scale_by_fourth_power() {
    // ⟨B²⟩ at cutoff 1/a versus cutoff 1/L for L ≫ a.
    let model = VacuumModel::default();
    let a = 1e-9;
    for l_over_a in [10.0, 100.0, 1000.0] {
        let fine = vacuum_b_squared(a, &model).unwrap().value;
        let coarse = vacuum_b_squared(a * l_over_a, &model).unwrap().value;
        let chi = 1e-3;
        let aggregation = chi * fine;
        let cavity = chi * coarse;
        assert!(aggregation > cavity);
        let ratio: f64 = aggregation / cavity;
        assert!((ratio / l_over_a.powi(4) - 1.0).abs() < 1e-12);
    }
}
