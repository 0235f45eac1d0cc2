//! Summation, sample moments and least-squares fits.

/// Neumaier-compensated sum; result depends only on the input order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Sample mean and standard error `s / sqrt(N)` (with `s` the `N-1`
/// normalised standard deviation).
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = compensated_sum(values.iter().copied()) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    let sd = (ss / (n - 1) as f64).sqrt();
    (mean, sd / (n as f64).sqrt())
}

/// Ordinary least squares `y ≈ intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (0 for two points or a perfect fit).
    pub slope_std_error: f64,
}

pub fn ols(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = compensated_sum(x.iter().copied()) / n as f64;
    let my = compensated_sum(y.iter().copied()) / n as f64;
    let sxx = compensated_sum(x.iter().map(|a| (a - mx) * (a - mx)));
    if sxx == 0.0 {
        return None;
    }
    let sxy = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_std_error = if n > 2 {
        let rss = compensated_sum(
            x.iter()
                .zip(y)
                .map(|(a, b)| (b - intercept - slope * a).powi(2)),
        );
        (rss / (n - 2) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    Some(LinearFit { slope, intercept, slope_std_error })
}

/// OLS on `(ln x, ln y)`; all values must be positive.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    if x.iter().chain(y).any(|v| *v <= 0.0 || !v.is_finite()) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    ols(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_regression_by_hand() {
        // (0,1), (1,3), (2,4): mean x = 1, mean y = 8/3,
        // Sxy = (-1)(-5/3) + 0 + (1)(4/3) = 3, Sxx = 2 => slope 1.5,
        // intercept 8/3 - 1.5 = 7/6; residuals -1/6, 1/3, -1/6 => RSS = 1/6,
        // slope se = sqrt((1/6)/1/2) = sqrt(1/12).
        let fit = ols(&[0.0, 1.0, 2.0], &[1.0, 3.0, 4.0]).unwrap();
        assert!((fit.slope - 1.5).abs() < 1e-15);
        assert!((fit.intercept - 7.0 / 6.0).abs() < 1e-15);
        assert!((fit.slope_std_error - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn loglog_recovers_power_law() {
        let x = [64.0, 128.0, 256.0, 512.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.5)).collect();
        let fit = loglog_fit(&x, &y).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!(loglog_fit(&[1.0, 2.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn moments() {
        let (m, se) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // s^2 = 5/3, se = sqrt(5/3 / 4)
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(compensated_sum([1e16, 1.0, -1e16]), 1.0);
    }
}
