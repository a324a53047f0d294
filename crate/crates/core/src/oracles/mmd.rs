use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernel::{degree, DegreeVector, KernelParams, DEFAULT_BLOCK_SIZE};
use crate::matrix::squared_distance;

/// Unbiased empirical MMD² between `x` (m samples) and `y` (n samples):
///
/// ```text
/// 1/(m(m-1)) Σ_{i≠j} k(x_i, x_j) + 1/(n(n-1)) Σ_{i≠j} k(y_i, y_j) − 2/(mn) Σ_{i,j} k(x_i, y_j)
/// ```
///
/// For `n = 1` the middle term is undefined; it is taken to be
/// `k(y_1, y_1) = 1`. Evaluated by brute force; may be negative.
pub fn mmd2_empirical(x: &Dataset, y: &Dataset, params: &KernelParams) -> Result<f64> {
    let (m, n) = (x.n_samples(), y.n_samples());
    if m == 0 || n == 0 {
        return Err(Error::EmptyDataset);
    }
    if m < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: m });
    }
    if x.n_features() != y.n_features() {
        return Err(Error::DimensionMismatch {
            left: x.n_features(),
            right: y.n_features(),
        });
    }
    let gamma = params.gamma(x.n_features());
    let k = |a: &[f64], b: &[f64]| (-gamma * squared_distance(a, b)).exp();

    let mut xx = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                xx += k(x.sample(i), x.sample(j));
            }
        }
    }
    let yy = if n == 1 {
        1.0
    } else {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += k(y.sample(i), y.sample(j));
                }
            }
        }
        s / (n * (n - 1)) as f64
    };
    let mut xy = 0.0;
    for i in 0..m {
        for j in 0..n {
            xy += k(x.sample(i), y.sample(j));
        }
    }
    let (mf, nf) = (m as f64, n as f64);
    Ok(xx / (mf * (mf - 1.0)) + yy - 2.0 * xy / (mf * nf))
}

/// MMD² between `x` and the single sample `x[l]`, from degrees alone:
/// `(d_avg − 1)/(m − 1) + 1 − 2 d_l / m`.
pub fn mmd2_single(x: &Dataset, l: usize, params: &KernelParams) -> Result<f64> {
    let m = x.n_samples();
    if l >= m {
        return Err(Error::IndexOutOfRange { index: l, len: m });
    }
    if m < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: m });
    }
    let nu = degree(x, params, DEFAULT_BLOCK_SIZE)?;
    mmd2_single_from_degree(&nu, l)
}

pub fn mmd2_single_from_degree(nu: &DegreeVector, l: usize) -> Result<f64> {
    let m = nu.len();
    if l >= m {
        return Err(Error::IndexOutOfRange { index: l, len: m });
    }
    if m < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: m });
    }
    let mf = m as f64;
    Ok((nu.mean() - 1.0) / (mf - 1.0) + 1.0 - 2.0 * nu.values()[l] / mf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kernel_matrix;
    use crate::scoring::{argsort_asc, argsort_desc};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_data(n: usize, d: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect::<Vec<f64>>()
            })
            .collect();
        Dataset::from_rows(&rows).unwrap()
    }

    #[test]
    fn identical_sets_match_closed_form() {
        let x = random_data(9, 2, 1);
        let params = KernelParams::new(0.7).unwrap();
        let got = mmd2_empirical(&x, &x, &params).unwrap();
        // with T the off-diagonal kernel sum: 2T/(m(m-1)) - 2(m+T)/m²
        let k = kernel_matrix(&x, &params).unwrap();
        let m = 9.0;
        let t = k.values().as_slice().iter().sum::<f64>() - m;
        let expected = 2.0 * t / (m * (m - 1.0)) - 2.0 * (m + t) / (m * m);
        assert!(got <= 1e-12);
        assert!((got - expected).abs() <= 1e-12);
    }

    #[test]
    fn duplicated_point_against_itself_is_zero() {
        let x = Dataset::from_rows(&[[0.4, 1.0], [0.4, 1.0]]).unwrap();
        let y = Dataset::from_rows(&[[0.4, 1.0]]).unwrap();
        let params = KernelParams::default();
        assert_eq!(mmd2_empirical(&x, &y, &params).unwrap(), 0.0);
        assert_eq!(mmd2_single(&x, 0, &params).unwrap(), 0.0);
    }

    #[test]
    fn general_form_matches_single_form() {
        let x = random_data(8, 3, 2);
        let params = KernelParams::new(0.9).unwrap();
        let y = x.select(&[3]);
        let general = mmd2_empirical(&x, &y, &params).unwrap();
        let single = mmd2_single(&x, 3, &params).unwrap();
        assert!((general - single).abs() <= 1e-12);
    }

    #[test]
    fn far_point_hand_arithmetic() {
        // x0 = x1, x2 far away: ν = (2, 2, 1), d_avg = 5/3
        let x = Dataset::from_rows(&[[0.0], [0.0], [100.0]]).unwrap();
        let params = KernelParams::new(0.15).unwrap();
        let far = mmd2_single(&x, 2, &params).unwrap();
        let near = mmd2_single(&x, 0, &params).unwrap();
        assert!((far - 2.0 / 3.0).abs() < 1e-15);
        assert!(near.abs() < 1e-15);
        assert!(far > near);
    }

    #[test]
    fn ranks_agree_with_degree() {
        let x = random_data(12, 2, 3);
        let params = KernelParams::new(0.8).unwrap();
        let nu = degree(&x, &params, 5).unwrap();
        let mmd: Vec<f64> = (0..12)
            .map(|l| mmd2_single(&x, l, &params).unwrap())
            .collect();
        let neg: Vec<f64> = nu.values().iter().map(|v| -v).collect();
        assert_eq!(argsort_asc(&mmd), argsort_asc(&neg));
        assert_eq!(argsort_desc(&mmd), argsort_desc(&neg));
    }

    #[test]
    fn term_identities() {
        let x = random_data(15, 2, 4);
        let params = KernelParams::new(0.5).unwrap();
        let k = kernel_matrix(&x, &params).unwrap();
        let nu = degree(&x, &params, 4).unwrap();
        let m = 15.0;
        let mut off = 0.0;
        for i in 0..15 {
            for j in 0..15 {
                if i != j {
                    off += k.get(i, j);
                }
            }
        }
        assert!((off / (m * (m - 1.0)) - (nu.mean() - 1.0) / (m - 1.0)).abs() <= 1e-12);
        let l = 6;
        let col: f64 = (0..15).map(|i| k.get(i, l)).sum();
        assert!((2.0 * col / m - 2.0 * nu.values()[l] / m).abs() <= 1e-12);
    }

    #[test]
    fn error_paths() {
        let params = KernelParams::default();
        let one = Dataset::from_rows(&[[1.0]]).unwrap();
        let two = Dataset::from_rows(&[[1.0], [2.0]]).unwrap();
        assert!(matches!(
            mmd2_single(&two, 2, &params),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
        assert!(matches!(
            mmd2_single(&one, 0, &params),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(matches!(
            mmd2_empirical(&one, &two, &params),
            Err(Error::TooFewSamples { .. })
        ));
        let wide = Dataset::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(matches!(
            mmd2_empirical(&two, &wide, &params),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
