use std::fs;

use gdba_core::data::{load_csv, standardize, write_csv, DEFAULT_LABEL_COLUMN};
use gdba_core::{Error, Matrix, RawTable};
use proptest::prelude::*;

fn table() -> impl Strategy<Value = RawTable> {
    (1usize..20, 1usize..5).prop_flat_map(|(n, d)| {
        (
            prop::collection::vec(-1e6f64..1e6, n * d),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(values, labels)| {
                let names = (0..d).map(|j| format!("f{j}")).collect();
                RawTable::new(Matrix::from_vec(n, d, values).unwrap(), Some(labels), names).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn csv_round_trip_is_lossless(t in table()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(&t, fs::File::create(&path).unwrap()).unwrap();
        let back = load_csv(&path, Some(DEFAULT_LABEL_COLUMN)).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn standardizing_twice_changes_nothing(t in table()) {
        let once = standardize(&t);
        let twice = once.standardize();
        prop_assert!(once.features().max_abs_diff(twice.features()) <= 1e-9);
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_csv(dir.path().join("absent.csv"), None).unwrap_err();
    assert!(matches!(err, Error::Io(_)));
}

#[test]
fn bundled_wdbc_has_expected_shape() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/wdbc.csv");
    let t = load_csv(path, Some(DEFAULT_LABEL_COLUMN)).unwrap();
    assert_eq!(t.n_samples(), 569);
    assert_eq!(t.n_features(), 30);
    let labels = t.labels().unwrap();
    assert_eq!(labels.iter().filter(|&&l| l).count(), 212);
    let kept = t.keep_first_anomalies(10).unwrap();
    assert_eq!(kept.n_samples(), 367);
}
