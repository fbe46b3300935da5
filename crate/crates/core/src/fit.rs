//! Growth-exponent fits on log–log scales.

/// Least-squares slope of `ln y` against `ln x`.
///
/// Points with non-positive or non-finite coordinates are skipped; `None` when
/// fewer than two usable points remain. Any `+∞` among the `y` makes the slope `+∞`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if ys.iter().any(|y| y.is_infinite() && *y > 0.0) {
        return Some(f64::INFINITY);
    }
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Slope with `0` substituted when no fit is possible.
pub fn growth_exponent(xs: &[f64], ys: &[f64]) -> f64 {
    log_log_slope(xs, ys).unwrap_or(0.0)
}

/// Growth exponent over the larger half of a scan (at least three points), so
/// that transients at the smallest scales do not read as growth.
pub fn tail_exponent(xs: &[f64], ys: &[f64]) -> f64 {
    let keep = (xs.len() / 2).max(3).min(xs.len());
    let start = xs.len() - keep;
    growth_exponent(&xs[start..], &ys[start..])
}

/// Intercept and slope of the log–log fit, `y ≈ exp(a) x^b`.
pub fn power_law(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let b = log_log_slope(xs, ys)?;
    if !b.is_finite() {
        return None;
    }
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    Some((my - b * mx, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let xs = [4.0, 8.0, 16.0, 32.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x).collect();
        assert!((log_log_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-12);
        let flat = [1.0; 4];
        assert!(log_log_slope(&xs, &flat).unwrap().abs() < 1e-12);
        let (a, b) = power_law(&xs, &ys).unwrap();
        assert!((a - 3f64.ln()).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(log_log_slope(&[1.0], &[1.0]), None);
        assert_eq!(log_log_slope(&[2.0, 2.0], &[1.0, 3.0]), None);
        assert_eq!(
            log_log_slope(&[1.0, 2.0], &[1.0, f64::INFINITY]),
            Some(f64::INFINITY)
        );
    }
}
