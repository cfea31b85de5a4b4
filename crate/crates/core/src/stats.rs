/// Arithmetic mean computed as `min + mean(x - min)`.
///
/// Returns exactly `v` when every element equals `v`, which the strict and
/// non-strict threshold comparisons in labeling depend on.
pub(crate) fn anchored_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let dev: f64 = xs.iter().map(|&x| x - lo).sum();
    lo + dev / xs.len() as f64
}

/// Population standard deviation (divisor n).
pub(crate) fn population_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = anchored_mean(xs);
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
    var.sqrt()
}
