use hsub::extmat::{
    bool_product, count_product, max_plus_product, min_plus_product, min_plus_product_blocked, BoolMatrix, CountMatrix,
    ExtMatrix,
};
use hsub::oracle;
use proptest::prelude::*;

fn bools(rows: usize, cols: usize) -> impl Strategy<Value = BoolMatrix> {
    proptest::collection::vec(any::<bool>(), rows * cols)
        .prop_map(move |bits| BoolMatrix::from_fn(rows, cols, |i, j| bits[i * cols + j]))
}

fn ext(rows: usize, cols: usize, inf: f64) -> impl Strategy<Value = ExtMatrix> {
    let entry = prop_oneof![4 => (-20i32..20).prop_map(f64::from), 1 => Just(inf)];
    proptest::collection::vec(entry, rows * cols)
        .prop_map(move |v| ExtMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]).unwrap())
}

fn pair<T: std::fmt::Debug>(
    f: impl Fn(usize, usize) -> BoxedStrategy<T> + Clone + 'static,
) -> impl Strategy<Value = (T, T)> {
    (1usize..12, 1usize..70, 1usize..12).prop_flat_map(move |(r, m, c)| (f(r, m), f(m, c)))
}

#[test]
fn stated_examples() {
    let a = BoolMatrix::from_rows(&[[1u8, 1], [1, 0]]);
    let b = BoolMatrix::from_rows(&[[1u8, 0], [1, 1]]);
    assert_eq!(
        bool_product(&a, &b).unwrap(),
        BoolMatrix::from_rows(&[[1u8, 1], [1, 0]])
    );
    let i3 = BoolMatrix::identity(3);
    assert!(bool_product(&i3, &b).is_err());
    assert_eq!(
        count_product(
            &BoolMatrix::from_rows(&[[1u8, 1]]),
            &BoolMatrix::from_rows(&[[1u8], [1]])
        )
        .unwrap(),
        CountMatrix::from_rows(&[[2u32]])
    );

    let inf = f64::INFINITY;
    let a = ExtMatrix::from_rows(&[[0.0, 5.0], [5.0, 0.0]]).unwrap();
    assert_eq!(min_plus_product(&a, &a).unwrap(), a);
    assert_eq!(min_plus_product(&ExtMatrix::min_plus_identity(2), &a).unwrap(), a);
    let a = ExtMatrix::from_rows(&[[0.0, 1.0], [-inf, 0.0]]).unwrap();
    let b = ExtMatrix::from_rows(&[[0.0, -inf], [2.0, 0.0]]).unwrap();
    assert_eq!(
        max_plus_product(&a, &b).unwrap(),
        ExtMatrix::from_rows(&[[3.0, 1.0], [2.0, 0.0]]).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn boolean_products_match_triple_loop((a, b) in pair(|r, c| bools(r, c).boxed())) {
        let (r, m, c) = (a.rows(), a.cols(), b.cols());
        let want_bool = BoolMatrix::from_fn(r, c, |i, j| (0..m).any(|k| a.get(i, k) && b.get(k, j)));
        let want_count: Vec<Vec<u32>> = (0..r)
            .map(|i| (0..c).map(|j| (0..m).filter(|&k| a.get(i, k) && b.get(k, j)).count() as u32).collect())
            .collect();
        prop_assert_eq!(bool_product(&a, &b).unwrap(), want_bool);
        prop_assert_eq!(count_product(&a, &b).unwrap(), CountMatrix::from_rows(&want_count));
    }

    #[test]
    fn identity_is_neutral(b in bools(9, 13)) {
        prop_assert_eq!(bool_product(&BoolMatrix::identity(9), &b).unwrap(), b);
    }

    #[test]
    fn min_plus_matches_oracle((a, b) in pair(|r, c| ext(r, c, f64::INFINITY).boxed()), block in 1usize..16) {
        let want = oracle::min_plus(&a, &b).unwrap();
        prop_assert_eq!(min_plus_product(&a, &b).unwrap(), want.clone());
        prop_assert_eq!(min_plus_product_blocked(&a, &b, block).unwrap(), want);
    }

    #[test]
    fn max_plus_matches_oracle((a, b) in pair(|r, c| ext(r, c, f64::NEG_INFINITY).boxed())) {
        prop_assert_eq!(max_plus_product(&a, &b).unwrap(), oracle::max_plus(&a, &b).unwrap());
    }
}
