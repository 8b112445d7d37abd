use royroot::linalg::{
    cholesky, generalized_eigenvalues, inv_sqrt, largest_generalized_eig, sym_eigen, Matrix, SymMatrix,
};

fn rows(r: &[[f64; 3]; 3]) -> Vec<Vec<f64>> {
    r.iter().map(|x| x.to_vec()).collect()
}

fn h() -> SymMatrix<f64> {
    SymMatrix::from_rows(&rows(&[[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]])).unwrap()
}

fn e() -> SymMatrix<f64> {
    SymMatrix::from_rows(&rows(&[[2.0, 0.3, 0.0], [0.3, 1.5, 0.1], [0.0, 0.1, 1.0]])).unwrap()
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

// Reference values from LAPACK (numpy / scipy eigh).

#[test]
fn eigenvalues_reference() {
    let got = sorted_desc(sym_eigen(&h()).unwrap().values);
    for (g, w) in got
        .iter()
        .zip([4.72157007774795, 2.398343019336997, 1.8800869029150526])
    {
        assert!((g - w).abs() < 1e-13, "{g} vs {w}");
    }
}

#[test]
fn generalized_reference() {
    let got = generalized_eigenvalues(&h(), &e()).unwrap();
    for (g, w) in got
        .iter()
        .zip([2.379119747631386, 2.0000000000000004, 1.5482158925070215])
    {
        assert!((g - w).abs() < 1e-13, "{g} vs {w}");
    }
    assert!((largest_generalized_eig(&h(), &e()).unwrap() - got[0]).abs() < 1e-15);
}

#[test]
fn tridiagonal_closed_form() {
    // Eigenvalues of tridiag(-1, 2, -1) are 2 - 2 cos(kπ/(n+1)).
    let n = 12;
    let a = SymMatrix::from_fn(n, |i, j| match i.abs_diff(j) {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    });
    let got = sorted_desc(sym_eigen(&a).unwrap().values);
    let mut want: Vec<f64> = (1..=n)
        .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos())
        .collect();
    want = sorted_desc(want);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-13, "{g} vs {w}");
    }
}

#[test]
fn cholesky_reconstructs_and_rejects() {
    let l = cholesky(&e()).unwrap();
    let back = l.matmul(&l.transpose()).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((back[(i, j)] - e()[(i, j)]).abs() < 1e-14);
            if j > i {
                assert_eq!(l[(i, j)], 0.0);
            }
        }
    }
    let indefinite = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    assert!(cholesky(&indefinite).is_err());
    assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
}

#[test]
fn inverse_square_root() {
    let s = inv_sqrt(&e()).unwrap();
    let prod = s
        .to_matrix()
        .matmul(&e().to_matrix())
        .unwrap()
        .matmul(&s.to_matrix())
        .unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((prod[(i, j)] - want).abs() < 1e-13);
        }
    }
}

#[test]
fn single_precision() {
    let a = SymMatrix::<f32>::from_fn(3, |i, j| h()[(i, j)] as f32);
    let got = sym_eigen(&a).unwrap().values;
    let top = got.iter().cloned().fold(f32::MIN, f32::max);
    assert!((top - 4.721_570_f32).abs() < 1e-5);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn spd(entries: &[f64], n: usize) -> SymMatrix<f64> {
        let g = Matrix::from_fn(n + 2, n, |i, j| {
            entries[(i * n + j) % entries.len()] + if i == j { 1.0 } else { 0.0 }
        });
        g.cross()
    }

    proptest! {
        #[test]
        fn eigen_decomposition_reconstructs(n in 1usize..7, entries in prop::collection::vec(-2.0f64..2.0, 64)) {
            let a = spd(&entries, n);
            let eig = sym_eigen(&a).unwrap();
            let v = &eig.vectors;
            for i in 0..n {
                for j in 0..n {
                    let r: f64 = (0..n).map(|k| v[(i, k)] * eig.values[k] * v[(j, k)]).sum();
                    prop_assert!((r - a[(i, j)]).abs() < 1e-10 * a.frobenius().max(1.0));
                    let o: f64 = (0..n).map(|k| v[(k, i)] * v[(k, j)]).sum();
                    let delta = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((o - delta).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn generalized_roots_are_invariant_to_scaling(n in 1usize..6, entries in prop::collection::vec(-2.0f64..2.0, 64), k in 0.1f64..10.0) {
            let h = spd(&entries, n);
            let e = spd(&entries[7..], n);
            let base = generalized_eigenvalues(&h, &e).unwrap();
            let scaled = generalized_eigenvalues(&h.scale(k), &e.scale(k)).unwrap();
            for (a, b) in base.iter().zip(&scaled) {
                prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
            }
        }
    }
}
