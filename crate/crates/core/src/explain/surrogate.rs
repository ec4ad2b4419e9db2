use nalgebra::{DMatrix, DVector};

use super::ExplainError;

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeFit {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

/// Weighted ridge regression with an unpenalized intercept.
///
/// Features and target are centred on their weighted means, then
/// `(Xc' W Xc + lambda I) beta = Xc' W yc` is solved by Cholesky, falling
/// back to SVD when the system is singular (`lambda = 0` with collinear
/// features).
pub fn fit_weighted_ridge(
    features: &[Vec<f64>],
    targets: &[f64],
    weights: &[f64],
    lambda: f64,
) -> Result<RidgeFit, ExplainError> {
    let n = features.len();
    if n == 0 || targets.len() != n || weights.len() != n {
        return Err(ExplainError::Fit("inconsistent sample counts".into()));
    }
    let m = features[0].len();
    let total_w: f64 = weights.iter().sum();
    if !(total_w > 0.0) {
        return Err(ExplainError::Fit("weights sum to zero".into()));
    }
    let mut x_mean = vec![0.0; m];
    let mut y_mean = 0.0;
    for ((row, &y), &w) in features.iter().zip(targets).zip(weights) {
        for (acc, &x) in x_mean.iter_mut().zip(row) {
            *acc += w * x;
        }
        y_mean += w * y;
    }
    x_mean.iter_mut().for_each(|v| *v /= total_w);
    y_mean /= total_w;

    let xc = DMatrix::from_fn(n, m, |i, j| (features[i][j] - x_mean[j]) * weights[i].sqrt());
    let yc = DVector::from_fn(n, |i, _| (targets[i] - y_mean) * weights[i].sqrt());
    let gram = xc.transpose() * &xc + DMatrix::identity(m, m) * lambda;
    let rhs = xc.transpose() * &yc;
    let beta = match gram.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => gram
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|e| ExplainError::Fit(e.to_string()))?,
    };
    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let intercept = y_mean - coefficients.iter().zip(&x_mean).map(|(b, x)| b * x).sum::<f64>();
    Ok(RidgeFit {
        coefficients,
        intercept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_linear_model() {
        // y = 0.5 + 2 x0 - x1 on all four binary points
        let x = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let y: Vec<f64> = x.iter().map(|r| 0.5 + 2.0 * r[0] - r[1]).collect();
        let fit = fit_weighted_ridge(&x, &y, &[1.0, 2.0, 3.0, 4.0], 0.0).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((fit.coefficients[1] + 1.0).abs() < 1e-12);
        assert!((fit.intercept - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_feature_closed_form() {
        // One binary feature, equal weights: beta = Sxy / (Sxx + lambda).
        let x = vec![vec![1.0], vec![0.0], vec![1.0], vec![0.0]];
        let y = vec![1.0, 0.0, 1.0, 0.0];
        let fit = fit_weighted_ridge(&x, &y, &[1.0; 4], 1.0).unwrap();
        // Sxx = Sxy = 4 * 0.25 = 1
        assert!((fit.coefficients[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_feature_gets_zero_with_svd_fallback() {
        let x = vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 0.0]];
        let y = vec![0.0, 1.0, 0.0];
        let fit = fit_weighted_ridge(&x, &y, &[1.0; 3], 0.0).unwrap();
        assert!(fit.coefficients[0].abs() < 1e-9);
        assert!((fit.coefficients[1] - 1.0).abs() < 1e-9);
    }
}
