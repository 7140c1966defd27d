use proptest::prelude::*;
use twostep::combinat::dim_forms;
use twostep::exactla::*;

fn int_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
}

/// Applies the row operations `row[i] += c·row[j]` and `swap(i, j)`, which
/// keep the row space fixed.
fn shuffle_basis(mut rows: Vec<Vec<Q>>, ops: &[(usize, usize, i64)]) -> Vec<Vec<Q>> {
    let n = rows.len();
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        if c == 0 {
            rows.swap(i, j);
        } else {
            let add: Vec<Q> = rows[j].iter().map(|v| v * q(c)).collect();
            for (a, b) in rows[i].iter_mut().zip(add) {
                *a += b;
            }
        }
    }
    rows
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rref_is_canonical_and_idempotent(
        m in int_matrix(6, 7),
        ops in prop::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..12),
    ) {
        let cols = m[0].len();
        let rows = to_q(&m);
        let a = Subspace::from_rows(cols, rows.clone());
        let b = Subspace::from_rows(cols, shuffle_basis(rows, &ops));
        prop_assert_eq!(&a, &b);
        let again = Subspace::from_rows(cols, a.basis().to_vec());
        prop_assert_eq!(&a, &again);
    }

    #[test]
    fn bareiss_and_gauss_jordan_agree(m in int_matrix(6, 7)) {
        let mat: RationalMatrix = Matrix::from_i64(&m);
        prop_assert_eq!(bareiss_rref(&mat), gauss_jordan(&mat));
    }

    #[test]
    fn rank_plus_nullity_is_column_count(m in int_matrix(7, 7)) {
        let mat: RationalMatrix = Matrix::from_i64(&m);
        let ker = kernel(&mat);
        prop_assert_eq!(mat.rank() + ker.dim(), mat.cols());
        for v in ker.basis() {
            prop_assert!(mat.apply(v).iter().all(Field::is_zero));
        }
    }

    #[test]
    fn prime_field_rank_matches_rational_rank(m in int_matrix(7, 7)) {
        let mat: RationalMatrix = Matrix::from_i64(&m);
        let modp = mat.map(|v| Fp::from_rational(v).unwrap());
        prop_assert_eq!(mat.rank(), modp.rank());
    }

    #[test]
    fn solve_recovers_a_consistent_right_hand_side(m in int_matrix(6, 6), x in prop::collection::vec(-4i64..=4, 6)) {
        let mat: RationalMatrix = Matrix::from_i64(&m);
        let x: Vec<Q> = x.into_iter().take(mat.cols()).map(q).collect();
        let b = mat.apply(&x);
        let sol = solve(&mat, &b).expect("b lies in the image");
        prop_assert_eq!(mat.apply(&sol), b);
    }

    #[test]
    fn sum_and_intersection_satisfy_the_dimension_formula(a in int_matrix(4, 6), b in int_matrix(4, 6)) {
        let cols = a[0].len().min(b[0].len());
        let cut = |m: &[Vec<i64>]| -> Vec<Vec<Q>> { to_q(&m.iter().map(|r| r[..cols].to_vec()).collect::<Vec<_>>()) };
        let v = Subspace::from_rows(cols, cut(&a));
        let w = Subspace::from_rows(cols, cut(&b));
        let sum = v.sum(&w).unwrap();
        let meet = v.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), v.dim() + w.dim());
        prop_assert!(sum.contains(&v).unwrap() && sum.contains(&w).unwrap());
        prop_assert!(v.contains(&meet).unwrap() && w.contains(&meet).unwrap());
    }

    #[test]
    fn multiplication_by_linear_forms_is_monotone(
        n in 2usize..=3,
        d in 1usize..=3,
        seed_rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 10), 1..4),
        extra in prop::collection::vec(prop::collection::vec(-2i64..=2, 10), 1..3),
    ) {
        let width = dim_forms(n, d);
        let trim = |rows: &[Vec<i64>]| -> Vec<Vec<Q>> {
            rows.iter().map(|r| r.iter().cycle().take(width).map(|&v| q(v)).collect()).collect()
        };
        let v = Subspace::from_rows(width, trim(&seed_rows));
        let w = v.sum(&Subspace::from_rows(width, trim(&extra))).unwrap();
        let rv = mul_by_linear(&v, n, d).unwrap();
        let rw = mul_by_linear(&w, n, d).unwrap();
        prop_assert!(rw.contains(&rv).unwrap());
        prop_assert_eq!(rv.ambient_dim(), dim_forms(n, d + 1));
    }

    #[test]
    fn rationals_round_trip_through_text(p in -1000i64..=1000, r in 1i64..=1000) {
        let x = Q::new(p.into(), r.into());
        prop_assert_eq!(parse_rational(&render_rational(&x)), Some(x));
    }
}
