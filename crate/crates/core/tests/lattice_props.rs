#![allow(clippy::needless_range_loop)]

use nsindex::latred::{determinant, identity, mat_mul, smith_normal_form, IntegralLattice};
use nsindex::Lattice;
use proptest::prelude::*;

/// Even symmetric matrices of size 1..=3 with small entries.
fn even_gram() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|n| {
        proptest::collection::vec(-3i64..=3, n * n).prop_map(move |raw| {
            let mut g = vec![vec![0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    g[i][j] = if i == j {
                        2 * raw[a * n + a]
                    } else {
                        raw[a * n + b]
                    };
                }
            }
            g
        })
    })
}

/// U ⊕ M.
fn with_hyperbolic(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len() + 2;
    let mut g = vec![vec![0; n]; n];
    g[0][1] = 1;
    g[1][0] = 1;
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            g[i + 2][j + 2] = x;
        }
    }
    g
}

proptest! {
    #[test]
    fn smith_form_is_a_unimodular_diagonalization(raw in proptest::collection::vec(-6i64..=6, 9)) {
        let m: Vec<Vec<i64>> = raw.chunks(3).map(|r| r.to_vec()).collect();
        let s = smith_normal_form(&m);
        prop_assert_eq!(mat_mul(&mat_mul(&s.u, &m), &s.v), s.d.clone());
        prop_assert_eq!(determinant(&s.u).abs(), 1);
        prop_assert_eq!(determinant(&s.v).abs(), 1);
        let diag = s.diagonal();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert_eq!(s.d[i][j], 0);
                }
            }
        }
        prop_assert!(diag.iter().all(|&x| x >= 0));
        for w in diag.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        prop_assert_eq!(diag.iter().product::<i64>(), determinant(&m).abs());
    }

    /// Vectors (1, b, w) of norm ±2 in U ⊕ M exist for every w since M is even.
    #[test]
    fn reflections_are_trivial_on_discriminant(m in even_gram(), w in proptest::collection::vec(-2i64..=2, 3), plus in any::<bool>()) {
        let g = with_hyperbolic(&m);
        let l = match Lattice::from_i64(&g) {
            Ok(l) => l,
            Err(_) => return Ok(()),
        };
        let w = &w[..m.len()];
        let wmw: i64 = (0..w.len()).map(|i| (0..w.len()).map(|j| w[i] * m[i][j] * w[j]).sum::<i64>()).sum();
        let target = if plus { 2 } else { -2 };
        let mut v = vec![1, (target - wmw) / 2];
        v.extend_from_slice(w);
        prop_assert_eq!(l.norm(&v), target);
        let r = if plus { l.reflect_plus2(&v).unwrap() } else { l.reflect_minus2(&v).unwrap() };
        prop_assert!(l.preserves_gram(&r));
        prop_assert_eq!(mat_mul(&r, &r), identity::<i64>(l.rank()));
        prop_assert!(l.acts_trivially_on_discriminant(&r));
        prop_assert_eq!(l.disc_group().order(), l.det().abs());
    }
}

#[test]
fn bigint_and_i64_agree_on_discriminants() {
    for g in [
        vec![vec![2i64, 1], vec![1, -4]],
        vec![vec![-2, 0], vec![0, -6]],
    ] {
        let small = Lattice::from_i64(&g).unwrap().disc_group().record();
        let big = IntegralLattice::<num_bigint::BigInt>::from_i64(&g)
            .unwrap()
            .disc_group()
            .record();
        assert_eq!(small, big);
    }
}
