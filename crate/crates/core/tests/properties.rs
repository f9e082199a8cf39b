use drh_core::arith::gcd;
use drh_core::characters::{all_characters, kronecker_character};
use drh_core::lfunc::{hurwitz_zeta, l_value};
use drh_core::products::partial_product;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hurwitz_shift_recurrence(a in 0.05f64..4.0, sigma in -2.5f64..3.0, t in -30.0f64..30.0) {
        prop_assume!((sigma - 1.0).abs() > 0.05 || t.abs() > 0.05);
        let s = Complex64::new(sigma, t);
        let lhs = hurwitz_zeta(s, a).unwrap() - hurwitz_zeta(s, a + 1.0).unwrap();
        let rhs = (-s * a.ln()).exp();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn characters_are_multiplicative(modulus in 2u64..60, a in 1i64..500, b in 1i64..500) {
        for chi in all_characters(modulus) {
            let ab = chi.value(a * b);
            let prod = chi.value(a) * chi.value(b);
            prop_assert!((ab - prod).norm() < 1e-12);
        }
    }

    #[test]
    fn characters_are_periodic(modulus in 2u64..60, a in -500i64..500) {
        for chi in all_characters(modulus) {
            prop_assert!((chi.value(a) - chi.value(a + modulus as i64)).norm() < 1e-12);
        }
    }
}

#[test]
fn orthogonality_relations() {
    for n in [3u64, 4, 7, 8, 12, 15, 21, 24] {
        let chars = all_characters(n);
        let phi = chars.len() as f64;
        for (i, x) in chars.iter().enumerate() {
            for (j, y) in chars.iter().enumerate() {
                let s: Complex64 = (0..n as i64).map(|a| x.value(a) * y.value(a).conj()).sum();
                let want = if i == j { phi } else { 0.0 };
                assert!((s - want).norm() < 1e-9, "mod {n}: ({i},{j}) {s}");
            }
        }
        for a in 0..n as i64 {
            let s: Complex64 = chars.iter().map(|x| x.value(a)).sum();
            let want = if a == 1 % n as i64 { phi } else { 0.0 };
            assert!((s - want).norm() < 1e-9, "mod {n}: a={a}");
            if gcd(a.unsigned_abs(), n) != 1 {
                assert_eq!(s.norm(), 0.0);
            }
        }
    }
}

#[test]
fn euler_product_matches_dirichlet_series_at_sigma_two() {
    for d in [-4i64, -3, 5, -7, 8, 13] {
        let chi = kronecker_character(d).unwrap();
        let s = Complex64::new(2.0, 0.0);
        let euler = partial_product(s, &chi, 1e7).unwrap();
        let series = l_value(s, &chi).unwrap();
        assert!((euler - series).norm() < 1e-8, "d={d}: {euler} vs {series}");
        // plain partial sum, tail bounded by 1/N
        let n = 1_000_000i64;
        let direct: f64 = (1..=n).map(|k| chi.value(k).re / (k as f64 * k as f64)).sum();
        assert!((direct - series.re).abs() < 2.0 / n as f64, "d={d}");
    }
}
