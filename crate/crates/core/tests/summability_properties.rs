use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use vilenkin::dirichlet::psi_grid;
use vilenkin::summability::predicates::abel_weight_identity;
use vilenkin::summability::{
    automatic_bound_holds, fejer_mean, kernel_domination_ratio, make_weights, norlund_kernel, norlund_mean,
    norlund_mean_abel, norlund_mean_spectral, SchemeKind,
};
use vilenkin::{forward_transform, Cyclotomic, GridFunction, Spectrum, VilenkinGroup};

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn custom(values: &[i64]) -> SchemeKind {
    SchemeKind::custom(values.iter().map(|&v| r(v, 1)).collect())
}

fn weights(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=30, len)
}

fn small_group() -> VilenkinGroup {
    VilenkinGroup::new(&[2, 3, 2]).unwrap()
}

fn exact_function(g: &VilenkinGroup, v: &[i64]) -> GridFunction<Cyclotomic> {
    GridFunction::new(g, v.iter().map(|&x| Cyclotomic::rational(r(x, 4))).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weight_tables_are_nonnegative(w in weights(40), a in 1i64..=10) {
        for kind in [custom(&w), SchemeKind::Cesaro { alpha: r(a, 10) }, SchemeKind::NorlundLog] {
            let s = make_weights(kind, 40).unwrap();
            for k in 0..40 {
                prop_assert!(s.q(k) >= 0.0);
                prop_assert!(s.big_q(k + 1) >= s.big_q(k));
            }
        }
    }

    #[test]
    fn abel_form_is_exact(w in weights(12), v in prop::collection::vec(-8i64..=8, 12), n in 1u64..=12) {
        let g = small_group();
        let s = forward_transform(&exact_function(&g, &v));
        let scheme = make_weights(custom(&w), 12).unwrap();
        prop_assert_eq!(norlund_mean(&s, &scheme, n).unwrap(), norlund_mean_abel(&s, &scheme, n).unwrap());
        prop_assert_eq!(norlund_mean(&s, &scheme, n).unwrap(), norlund_mean_spectral(&s, &scheme, n).unwrap());
        prop_assert_eq!(abel_weight_identity(&scheme, n), Some(true));
    }

    #[test]
    fn characters_are_eigenfunctions(w in weights(12), j in 0u64..12, extra in 1u64..12) {
        let g = small_group();
        let n = (j + extra).min(12);
        prop_assume!(j < n);
        let scheme = make_weights(custom(&w), 12).unwrap();
        let t = norlund_mean(&Spectrum::<Cyclotomic>::delta(&g, j).unwrap(), &scheme, n).unwrap();
        let total = |m: u64| w[..m as usize].iter().sum::<i64>();
        let factor = r(total(n - j), total(n));
        prop_assert_eq!(t, psi_grid::<Cyclotomic>(&g, j).unwrap().scale(&Cyclotomic::rational(factor)));
    }

    #[test]
    fn nonincreasing_weights_get_the_automatic_bound(mut w in weights(64)) {
        w.sort_unstable_by(|a, b| b.cmp(a));
        let scheme = make_weights(custom(&w), 64).unwrap();
        prop_assert!(automatic_bound_holds(&scheme, 64).unwrap());
        for n in 1..=64usize {
            prop_assert!(n as i64 * w[0] >= w[..n].iter().sum::<i64>());
        }
    }

    #[test]
    fn nondecreasing_weights_are_dominated(mut w in weights(24), v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 24)) {
        w.sort_unstable();
        let g = VilenkinGroup::new(&[2, 3, 4]).unwrap();
        let f = GridFunction::new(&g, v.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let s = forward_transform(&f);
        let scheme = make_weights(custom(&w), 24).unwrap();
        let mut envelope = vec![0.0f64; 24];
        for n in 1..=24 {
            for (m, x) in envelope.iter_mut().zip(fejer_mean(&s, n).unwrap().values()) {
                *m = m.max(x.norm());
            }
            let t = norlund_mean_spectral(&s, &scheme, n).unwrap();
            for (x, m) in t.values().iter().zip(&envelope) {
                prop_assert!(x.norm() <= m + 1e-12);
            }
        }
    }

    #[test]
    fn kernels_integrate_to_one_exactly(w in weights(12), n in 1u64..=12) {
        let g = small_group();
        let scheme = make_weights(custom(&w), 12).unwrap();
        let k = norlund_kernel::<Cyclotomic>(&g, &scheme, n).unwrap();
        prop_assert_eq!(k.values.integral(), Cyclotomic::one());
    }

    #[test]
    fn domination_ratio_ignores_weight_scale(w in weights(32), c in 2i64..=9, n in 2u64..=32) {
        let g = VilenkinGroup::walsh(5).unwrap();
        let a = make_weights(custom(&w), 32).unwrap();
        let scaled: Vec<i64> = w.iter().map(|x| x * c).collect();
        let b = make_weights(custom(&scaled), 32).unwrap();
        let ra = kernel_domination_ratio(&g, &a, 0.5, n).unwrap().ratio;
        let rb = kernel_domination_ratio(&g, &b, 0.5, n).unwrap().ratio;
        prop_assert!((ra - rb).abs() <= 1e-12 * ra.max(1.0));
    }

    #[test]
    fn character_approximation_improves(mut w in weights(24), j in 0u64..12) {
        // monotone for nonincreasing weights: each step adds q_{n−j} ≥ q_n to Q_{n−j} and Q_n
        w.sort_unstable_by(|a, b| b.cmp(a));
        let g = VilenkinGroup::new(&[2, 3, 4]).unwrap();
        let scheme = make_weights(custom(&w), 24).unwrap();
        let delta = Spectrum::<Complex64>::delta(&g, j).unwrap();
        let psi = psi_grid::<Complex64>(&g, j).unwrap();
        let mut last = f64::INFINITY;
        for n in j + 1..=24 {
            let gap = norlund_mean_spectral(&delta, &scheme, n).unwrap().max_abs_diff(&psi);
            prop_assert!((gap - (1.0 - scheme.big_q(n - j) / scheme.big_q(n))).abs() <= 1e-12);
            prop_assert!(gap <= last + 1e-12);
            last = gap;
        }
    }
}
