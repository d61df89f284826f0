mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

use schottky::heights::{check_growth, growth_constant, height_entries, height_matrix, height_rational, upsilon_scan};
use schottky::{Execution, Homography, SchottkyGroup};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn products_are_submultiplicative(g in homography(), h in homography()) {
        let raw = height_entries(&g.raw_product(&h));
        let bound = BigInt::from(2) * height_matrix(&g) * height_matrix(&h);
        prop_assert!(raw <= bound);
        prop_assert!(height_matrix(&g.compose(&h)) <= raw);
    }

    #[test]
    fn inverse_has_the_same_height(g in homography()) {
        let adj = g.adjugate();
        prop_assert_eq!(height_entries(&adj), height_matrix(&g));
        prop_assert_eq!(height_matrix(&g.inverse()), height_matrix(&g));
    }

    #[test]
    fn rational_height_is_symmetric(x in (1i64..100_000, 1i64..100_000)) {
        let a = q(x.0, x.1);
        prop_assert_eq!(height_rational(&a), height_rational(&a.recip()));
        prop_assert_eq!(height_rational(&a), height_rational(&-a.clone()));
    }

    #[test]
    fn diagonal_power_law(a in 1i64..40, d in 1i64..40, n in 0i64..12) {
        let g = Homography::diagonal(a, d).unwrap();
        prop_assert_eq!(height_matrix(&g.pow(n)), height_matrix(&g).pow(n as u32));
    }

    #[test]
    fn word_heights_obey_growth(i in 0usize..2, w in word(2, 10)) {
        let g = [SchottkyGroup::worked_example(), SchottkyGroup::sample(3, 2, 4).unwrap()][i].clone();
        let c = growth_constant(&g);
        let h = height_matrix(&g.word_to_homography(&w).unwrap());
        prop_assert!(h <= c.pow(w.len() as u32 + 1));
    }
}

#[test]
fn growth_holds_exhaustively_on_samples() {
    for g in [SchottkyGroup::sample(3, 2, 4).unwrap(), SchottkyGroup::sample(7, 3, 2).unwrap()] {
        let check = check_growth(&g, 5, Execution::default()).unwrap();
        assert!(check.violations.is_empty());
    }
}

#[test]
fn counting_scan_is_cumulative_and_deterministic() {
    let g = SchottkyGroup::worked_example();
    let seq = upsilon_scan(&g, 7, Execution::Sequential).unwrap();
    let par = upsilon_scan(&g, 7, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq.heights.len(), (1..=7).map(|l| 1usize << l).sum::<usize>());
    assert!(seq.rows.windows(2).all(|r| r[0].count <= r[1].count));
    for row in &seq.rows {
        let direct = seq.heights.iter().filter(|h| h.height <= row.threshold).count();
        assert_eq!(row.count, direct);
    }
}
