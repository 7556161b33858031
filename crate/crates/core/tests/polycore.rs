use num_complex::Complex64;
use polyan_core::polycore::{CPoly, MultiIndex, PolyAnalytic, RationalHolo};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_in_disc(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> CPoly {
    let powers = MultiIndex::box_below(&MultiIndex::new(vec![deg + 1; n]));
    CPoly::from_terms(n, powers.into_iter().map(|g| (g, unit_in_disc(rng))).collect::<Vec<_>>())
}

/// Order-`alpha` function whose coefficients are `p/(3 + z₁)` or polynomials.
fn random_function(rng: &mut ChaCha8Rng, alpha: &MultiIndex) -> PolyAnalytic {
    random_with(rng, alpha, true)
}

fn random_with(rng: &mut ChaCha8Rng, alpha: &MultiIndex, rational: bool) -> PolyAnalytic {
    let n = alpha.dim();
    let den = CPoly::constant(n, Complex64::new(3.0, 0.0)).add(&CPoly::var(n, 0));
    let coeffs: Vec<_> = MultiIndex::box_below(alpha)
        .into_iter()
        .map(|b| {
            let p = random_poly(rng, n, 2);
            let a = if rational && rng.gen_bool(0.5) {
                RationalHolo::new(p, den.clone()).unwrap()
            } else {
                RationalHolo::from_poly(p)
            };
            (b, a)
        })
        .collect();
    PolyAnalytic::new(alpha.clone(), coeffs).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| unit_in_disc(rng)).collect()
}

fn alpha_strategy() -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(1u32..=3, 1..=2).prop_map(MultiIndex::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dbar_to_the_order_vanishes(seed in any::<u64>(), alpha in alpha_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_function(&mut rng, &alpha);
        for j in 0..alpha.dim() {
            prop_assert!(f.dbar(j, alpha.get(j)).unwrap().is_zero());
        }
    }

    #[test]
    fn dbar_lowers_exact_order_by_one(seed in any::<u64>(), alpha in alpha_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_function(&mut rng, &alpha);
        prop_assume!(!f.is_zero());
        let e = f.exact_order();
        for j in 0..alpha.dim() {
            let g = f.dbar(j, 1).unwrap();
            if g.is_zero() {
                prop_assert!(e.get(j) <= 1);
            } else {
                prop_assert_eq!(g.exact_order().get(j), e.get(j).saturating_sub(1).max(1));
            }
        }
    }

    #[test]
    fn conj_mul_is_the_squared_modulus(seed in any::<u64>(), alpha in alpha_strategy()) {
        // conj_mul needs polynomial coefficients on the conjugated side
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_with(&mut rng, &alpha, false);
        let g = f.conj_mul(&f).unwrap();
        for _ in 0..10 {
            let z = random_point(&mut rng, alpha.dim());
            let fz = f.eval(&z).unwrap();
            let gz = g.eval(&z).unwrap();
            let s = fz.norm_sqr();
            prop_assert!((gz.re - s).abs() <= 1e-12 * s.max(1.0) && gz.im.abs() <= 1e-12 * s.max(1.0));
        }
    }

    #[test]
    fn evaluation_is_linear(seed in any::<u64>(), a in alpha_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = MultiIndex::new(a.entries().iter().map(|x| 4 - x).collect());
        let f = random_function(&mut rng, &a);
        let g = random_function(&mut rng, &b);
        let s = f.add(&g).unwrap();
        prop_assert_eq!(s.order(), &a.join(&b));
        for _ in 0..10 {
            let z = random_point(&mut rng, a.dim());
            let expect = f.eval(&z).unwrap() + g.eval(&z).unwrap();
            prop_assert!((s.eval(&z).unwrap() - expect).norm() <= 1e-12 * expect.norm().max(1.0));
        }
    }
}

#[test]
fn geometric_sequence_converges_to_its_limit() {
    // f_k = Σ_β (1 − r^k)·a_β z̄^β → f = Σ_β a_β z̄^β
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let alpha = MultiIndex::new(vec![3]);
    let limit = random_function(&mut rng, &alpha);
    let pts: Vec<_> = (0..20).map(|_| random_point(&mut rng, 1)).collect();
    let mut last = f64::INFINITY;
    for k in [5, 10, 20, 40, 80] {
        let fk = limit.scale(Complex64::new(1.0 - 0.5f64.powi(k), 0.0));
        let err = pts.iter().map(|z| (fk.eval(z).unwrap() - limit.eval(z).unwrap()).norm()).fold(0.0, f64::max);
        assert!(err < last);
        last = err;
    }
    assert!(last < 1e-10);
}
