//! Least-squares line fits.

/// Slope, intercept and coefficient of determination of `y ~ slope * x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares. Sums are accumulated over the points sorted by
/// `x` (ties by `y`), so the result does not depend on input order.
pub fn least_squares(x: &[f64], y: &[f64]) -> Option<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let mut pts: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = pts
            .iter()
            .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Some(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Slope of `log(err)` against `log(h)`.
pub fn observed_order(h: &[f64], err: &[f64]) -> Option<LineFit> {
    if err.iter().any(|&e| !(e > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    least_squares(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = least_squares(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15);
        assert!((f.intercept - 1.0).abs() < 1e-15);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn flat_data() {
        let f = least_squares(&[0.0, 1.0, 2.0], &[4.0, 4.0, 4.0]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert!(least_squares(&[1.0, 1.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn order_of_quadratic_errors() {
        let h = [0.1, 0.05, 0.025];
        let e: Vec<f64> = h.iter().map(|x| 3.0 * x * x).collect();
        assert!((observed_order(&h, &e).unwrap().slope - 2.0).abs() < 1e-12);
        assert!(observed_order(&h, &[1.0, 0.0, 1.0]).is_none());
    }
}
