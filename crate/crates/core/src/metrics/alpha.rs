use super::MetricsError;
use crate::Label;

/// Krippendorff's alpha for two raters, nominal binary data, no missing
/// values.
///
/// Each item adds both ordered pairs of its two ratings to the coincidence
/// matrix `o`. With marginals `n_c` and total `n = 2N`,
/// `alpha = 1 - D_o / D_e`, `D_o = sum_{c != k} o_ck`,
/// `D_e = sum_{c != k} n_c n_k / (n - 1)`.
pub fn krippendorff_alpha(a: &[Label], b: &[Label]) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(MetricsError::TooFewItems);
    }
    let mut o = [[0.0f64; 2]; 2];
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (x.bit() as usize, y.bit() as usize);
        o[x][y] += 1.0;
        o[y][x] += 1.0;
    }
    let n_c = [o[0][0] + o[0][1], o[1][0] + o[1][1]];
    let n = n_c[0] + n_c[1];
    let observed = o[0][1] + o[1][0];
    let expected = 2.0 * n_c[0] * n_c[1] / (n - 1.0);
    if expected == 0.0 {
        return Err(MetricsError::DegenerateRatings);
    }
    Ok(1.0 - observed / expected)
}
