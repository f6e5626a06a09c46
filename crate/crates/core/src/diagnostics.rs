//! Goodness-of-fit statistics for simulated samples.

use num_complex::Complex64;

/// `sup_x |F_n(x) - F(x)|` for a sample and a continuous CDF evaluated at the
/// sorted sample points.
pub fn ks_statistic(sorted: &[f64], cdf_at_sorted: &[f64]) -> f64 {
    assert_eq!(sorted.len(), cdf_at_sorted.len(), "one CDF value per sample point");
    let n = sorted.len() as f64;
    cdf_at_sorted
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).max((i + 1) as f64 / n - f))
        .fold(0.0, f64::max)
}

/// One-sample statistic against a CDF given as a function.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let values: Vec<f64> = sorted.iter().map(|&x| cdf(x)).collect();
    ks_statistic(&sorted, &values)
}

/// Two-sample statistic `sup_x |F_n(x) - G_m(x)|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic critical value `sqrt(-ln(level/2)/2)` of `√n·D`.
pub fn ks_critical_value(level: f64) -> f64 {
    (-(level / 2.0).ln() / 2.0).sqrt()
}

/// Critical value of the one-sample statistic at sample size `n`.
pub fn ks_threshold(n: usize, level: f64) -> f64 {
    ks_critical_value(level) / (n as f64).sqrt()
}

/// Critical value of the two-sample statistic.
pub fn ks_two_sample_threshold(n: usize, m: usize, level: f64) -> f64 {
    ks_critical_value(level) * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// `(1/n) Σ e^{iuX_k}`.
pub fn empirical_cf(sample: &[f64], u: f64) -> Complex64 {
    let sum: Complex64 = sample.iter().map(|&x| Complex64::new(0.0, u * x).exp()).sum();
    sum / sample.len() as f64
}
