//! Least-squares line fits, used for convergence-order estimation: residuals
//! of a first-order approximation must scale as g^2, i.e. have slope ~2 on a
//! log-log grid of halving g values.

#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares y = slope * x + intercept with the coefficient of
/// determination.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LineFit {
        slope,
        intercept,
        r2,
    }
}

/// Log-log fit of residual against parameter: returns the estimated order.
/// Zero (or denormal) residuals are clamped to 1e-300 so an exactly captured
/// expansion reports a huge slope rather than NaN.
pub fn order_fit(params: &[f64], residuals: &[f64]) -> LineFit {
    let xs: Vec<f64> = params.iter().map(|p| p.abs().ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.abs().max(1e-300).ln()).collect();
    fit_line(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_quadratic_order() {
        let gs = [0.2, 0.1, 0.05, 0.025];
        let rs: Vec<f64> = gs.iter().map(|g| 3.7 * g * g).collect();
        let fit = order_fit(&gs, &rs);
        assert!((fit.slope - 2.0).abs() < 1e-12, "slope = {}", fit.slope);
        assert!(fit.r2 > 0.999999);
    }

    #[test]
    fn mixed_order_lands_between() {
        let gs = [0.2, 0.1, 0.05, 0.025];
        let rs: Vec<f64> = gs.iter().map(|g| g * g * (1.0 + g)).collect();
        let fit = order_fit(&gs, &rs);
        assert!(fit.slope > 1.9 && fit.slope < 2.2, "slope = {}", fit.slope);
    }
}
