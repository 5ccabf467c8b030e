use edd_core::{edd, gdv, Dataset, EddConfig, Labels};
use proptest::prelude::*;

fn cloud(min_points: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=6, min_points..=60).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(-10.0f64..10.0, d), n)
    })
}

fn point_cloud() -> impl Strategy<Value = Vec<Vec<f64>>> {
    cloud(3)
}

/// At least two points in each of three classes.
fn labeled_cloud() -> impl Strategy<Value = Vec<Vec<f64>>> {
    cloud(6)
}

fn raw() -> EddConfig {
    EddConfig {
        zscore: false,
        ..EddConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn edd_translation(rows in point_cloud(), c in -10.0f64..10.0) {
        let data = Dataset::from_rows(&rows).unwrap();
        let d = data.n_dims();
        let moved = data.affine(&vec![1.0; d], &vec![c; d]).unwrap();
        for cfg in [raw(), EddConfig::default()] {
            let a = edd(&data, &cfg).unwrap().edd;
            let b = edd(&moved, &cfg).unwrap().edd;
            prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn edd_point_permutation(rows in point_cloud(), key in any::<u64>()) {
        let data = Dataset::from_rows(&rows).unwrap();
        let mut order: Vec<usize> = (0..data.n_points()).collect();
        order.sort_by_key(|&i| (i as u64).wrapping_mul(key | 1).rotate_left(17));
        let shuffled = data.permute_points(&order).unwrap();
        for cfg in [raw(), EddConfig::default()] {
            prop_assert_eq!(edd(&data, &cfg).unwrap().edd, edd(&shuffled, &cfg).unwrap().edd);
        }
    }

    #[test]
    fn edd_scaling_with_zscore(
        rows in point_cloud(),
        scales in prop::collection::vec(0.01f64..100.0, 6),
    ) {
        let data = Dataset::from_rows(&rows).unwrap();
        let d = data.n_dims();
        let scaled = data.affine(&scales[..d], &vec![0.0; d]).unwrap();
        let cfg = EddConfig::default();
        let a = edd(&data, &cfg).unwrap().edd;
        let b = edd(&scaled, &cfg).unwrap().edd;
        prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn gdv_affine_and_dimension_order(
        rows in labeled_cloud(),
        a in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
        b in -100.0f64..100.0,
        key in any::<u64>(),
    ) {
        let data = Dataset::from_rows(&rows).unwrap();
        let (n, d) = (data.n_points(), data.n_dims());
        let ids: Vec<usize> = (0..n).map(|i| i % 3).collect();
        let labels = Labels::new(ids).unwrap();
        let base = gdv(&data, &labels).unwrap().gdv;

        let moved = data.affine(&vec![a; d], &vec![b; d]).unwrap();
        let g = gdv(&moved, &labels).unwrap().gdv;
        prop_assert!((g - base).abs() <= 1e-9, "affine: {base} vs {g}");

        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by_key(|&i| (i as u64).wrapping_mul(key | 1).rotate_left(29));
        let g = gdv(&data.permute_dims(&order).unwrap(), &labels).unwrap().gdv;
        prop_assert!((g - base).abs() <= 1e-12, "dims: {base} vs {g}");
    }

    #[test]
    fn gdv_relabeling_is_exact(rows in labeled_cloud(), shift in 1usize..3) {
        let data = Dataset::from_rows(&rows).unwrap();
        let n = data.n_points();
        let ids: Vec<usize> = (0..n).map(|i| i % 3).collect();
        let renamed: Vec<usize> = ids.iter().map(|c| (c + shift) % 3).collect();
        let a = gdv(&data, &Labels::new(ids).unwrap()).unwrap().gdv;
        let b = gdv(&data, &Labels::new(renamed).unwrap()).unwrap().gdv;
        prop_assert_eq!(a, b);
    }
}
