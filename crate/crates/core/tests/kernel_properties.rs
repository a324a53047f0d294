use gdba_core::kernel::{degree, kernel_matrix, DEFAULT_BLOCK_SIZE};
use gdba_core::{Dataset, KernelParams};
use proptest::prelude::*;

fn dataset() -> impl Strategy<Value = Dataset> {
    (2usize..30, 1usize..5).prop_flat_map(|(n, d)| {
        prop::collection::vec(prop::collection::vec(-3.0f64..3.0, d), n)
            .prop_map(|rows| Dataset::from_rows(&rows).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permuting_rows_permutes_degree(data in dataset(), seed in any::<u64>(), sigma in 0.05f64..3.0) {
        let n = data.n_samples();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let params = KernelParams::new(sigma).unwrap();
        let nu = degree(&data, &params, DEFAULT_BLOCK_SIZE).unwrap();
        let nu_perm = degree(&data.select(&perm), &params, DEFAULT_BLOCK_SIZE).unwrap();
        for (pos, &i) in perm.iter().enumerate() {
            prop_assert!((nu_perm.values()[pos] - nu.values()[i]).abs() <= 1e-12 * n as f64);
        }
    }

    #[test]
    fn degree_is_monotone_in_sigma(data in dataset(), a in 0.01f64..2.0, b in 0.01f64..2.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = degree(&data, &KernelParams::new(lo).unwrap(), 7).unwrap();
        let large = degree(&data, &KernelParams::new(hi).unwrap(), 7).unwrap();
        for (s, l) in small.values().iter().zip(large.values()) {
            prop_assert!(s <= l);
        }
    }

    #[test]
    fn degree_is_n_times_mean_similarity(data in dataset(), sigma in 0.05f64..3.0) {
        let params = KernelParams::new(sigma).unwrap();
        let k = kernel_matrix(&data, &params).unwrap();
        let nu = degree(&data, &params, 4).unwrap();
        let n = data.n_samples();
        for i in 0..n {
            let mean = k.values().row(i).iter().sum::<f64>() / n as f64;
            prop_assert!((nu.values()[i] - n as f64 * mean).abs() <= 1e-12 * n as f64);
            prop_assert!(nu.values()[i] >= 1.0 && nu.values()[i] <= n as f64);
        }
    }

    #[test]
    fn block_size_does_not_change_degree(data in dataset(), sigma in 0.05f64..3.0, block in 1usize..40) {
        let params = KernelParams::new(sigma).unwrap();
        let a = degree(&data, &params, block).unwrap();
        let b = degree(&data, &params, DEFAULT_BLOCK_SIZE).unwrap();
        prop_assert_eq!(a.values(), b.values());
    }
}

#[test]
fn sigma_extremes_reach_n_and_one() {
    let data = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [3.0, 3.0]]).unwrap();
    let wide = degree(&data, &KernelParams::new(1e7).unwrap(), 2).unwrap();
    assert!(wide
        .values()
        .iter()
        .all(|&v| (4.0 - 1e-6..=4.0).contains(&v)));
    let narrow = degree(&data, &KernelParams::new(1e-6).unwrap(), 2).unwrap();
    assert!(narrow.values().iter().all(|&v| v == 1.0));
}

#[test]
fn kernel_matrix_rows_sum_to_degree() {
    let data = Dataset::from_rows(&[[0.1], [0.4], [0.35], [2.0], [-1.0]]).unwrap();
    let params = KernelParams::new(0.3).unwrap();
    let k = kernel_matrix(&data, &params).unwrap();
    let nu = degree(&data, &params, 2).unwrap();
    assert!(k.row_sums().max_abs_diff(&nu) <= 1e-15);
    assert_eq!(k.max_asymmetry(), 0.0);
}
