use num_integer::binomial;

/// a_{m,j} as exact fractions (numerator, denominator 4^{m−1}), j < m.
///
/// Σ_{l<m} (−1)^l C(−1/2, l)(1 − x)^l = Σ_j a_{m,j} x^j, using
/// (−1)^l C(−1/2, l) = C(2l, l)/4^l.
pub fn taylor_coeffs_tight_exact(m: usize) -> Vec<(i128, i128)> {
    assert!(m >= 1);
    let den = 4i128.pow(m as u32 - 1);
    (0..m)
        .map(|j| {
            let num: i128 = (j..m)
                .map(|l| {
                    let w = binomial(2 * l as i128, l as i128) * 4i128.pow((m - 1 - l) as u32);
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * w * binomial(l as i128, j as i128)
                })
                .sum();
            (num, den)
        })
        .collect()
}

pub fn taylor_coeffs_tight(m: usize) -> Vec<f64> {
    taylor_coeffs_tight_exact(m).into_iter().map(|(n, d)| n as f64 / d as f64).collect()
}

/// b_{m,j} from Σ_{l<m}(1 − x)^l = Σ_j (−1)^j C(m, j+1) x^j.
pub fn taylor_coeffs_dual_exact(m: usize) -> Vec<i128> {
    assert!(m >= 1);
    (0..m)
        .map(|j| {
            let c = binomial(m as i128, j as i128 + 1);
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

pub fn taylor_coeffs_dual(m: usize) -> Vec<f64> {
    taylor_coeffs_dual_exact(m).into_iter().map(|v| v as f64).collect()
}
