use num_complex::Complex64;
use polyan_core::levi::{
    bmmp_verify, build_disc_family, constant_modulus_trace, levi_form, DiscCounts, DiscFamily, GraphHypersurface,
    TraceVerdict,
};
use polyan_core::linalg::{hermitian_eigen, CMatrix};
use polyan_core::polycore::{CPoly, HoloFn, MWitness};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_in_disc(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_hermitian(rng: &mut ChaCha8Rng, m: usize) -> CMatrix {
    let mut s = CMatrix::zeros(m, m);
    for j in 0..m {
        s[(j, j)] = c(rng.gen_range(-1.0..1.0), 0.0);
        for k in j + 1..m {
            let v = unit_in_disc(rng);
            s[(j, k)] = v;
            s[(k, j)] = v.conj();
        }
    }
    s
}

fn quadric_family() -> (GraphHypersurface, DiscFamily) {
    let m = GraphHypersurface::builtin("quadric", 1.0).unwrap().unwrap();
    let l = levi_form(&m).unwrap();
    let fam = build_disc_family(&m, &l, 0.1, 0.3, DiscCounts { x: 7, y: 8, w: 1, boundary: 48 }).unwrap();
    (m, fam)
}

/// Affine polynomial in two variables with coefficients in the unit disc.
fn random_affine(rng: &mut ChaCha8Rng) -> CPoly {
    CPoly::constant(2, unit_in_disc(rng))
        .add(&CPoly::var(2, 0).scale(unit_in_disc(rng)))
        .add(&CPoly::var(2, 1).scale(unit_in_disc(rng)))
}

/// Balk quotient whose pole stays well away from the box `|z| < 1`.
fn random_balk(rng: &mut ChaCha8Rng) -> MWitness {
    let q = random_affine(rng)
        .scale(c(0.25, 0.0))
        .add(&CPoly::constant(2, Complex64::from_polar(2.0, rng.gen_range(0.0..std::f64::consts::TAU))));
    MWitness::BalkQuotient { lambda: unit_in_disc(rng) * 2.0, q }
}

#[test]
fn disc_family_lies_on_one_side() {
    let (m, fam) = quadric_family();
    for d in &fam.discs {
        assert!(d.attachment_defect < fam.attachment_tol);
        for p in fam.interior_points(d, 4) {
            assert!(p[1].im > m.eval(&p[..1], p[1].re));
        }
    }
}

#[test]
fn balk_modulus_is_constant_on_the_covered_set() {
    let (_, fam) = quadric_family();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let f = random_balk(&mut rng);
        let MWitness::BalkQuotient { lambda, .. } = &f else { unreachable!() };
        for d in &fam.discs {
            for p in fam.interior_points(d, 4).iter().chain(&fam.boundary_points(d)) {
                assert!((f.eval(p).unwrap().norm() - lambda.norm()).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn every_witness_kind_satisfies_the_boundary_maximum() {
    let (_, fam) = quadric_family();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..8 {
        let f = match k % 4 {
            0 => MWitness::Holomorphic(HoloFn::exp(random_affine(&mut rng))),
            1 => random_balk(&mut rng),
            2 => MWitness::SquaredModulus(random_affine(&mut rng)),
            _ => MWitness::HoloAntiholoProduct { g: HoloFn::poly(random_affine(&mut rng)), h: random_affine(&mut rng) },
        };
        let r = bmmp_verify(&f, &fam, 6).unwrap();
        assert!(r.within_bound, "{}: {r:?}", f.kind());
        if let Some(ok) = r.reciprocal_within_bound {
            assert!(ok, "{}: {r:?}", f.kind());
        }
    }
}

#[test]
fn trace_recovers_lambda_of_random_balk_quotients() {
    let (m, fam) = quadric_family();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let f = random_balk(&mut rng);
        let MWitness::BalkQuotient { lambda, .. } = &f else { unreachable!() };
        let r = constant_modulus_trace(&f, &m, &fam).unwrap();
        assert_eq!(r.verdict, TraceVerdict::BalkForm, "{r:?}");
        assert!((r.lambda_abs.unwrap() - lambda.norm()).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn levi_eigenvalues_are_unitarily_invariant(seed in any::<u64>(), m in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_hermitian(&mut rng, m);
        // eigenvectors of an unrelated Hermitian matrix give a random unitary
        let (_, u) = hermitian_eigen(&random_hermitian(&mut rng, m));
        let rotated = u.adjoint().mul(&s).mul(&u);
        let a = levi_form(&GraphHypersurface::hermitian_quadric(&s, 1.0).unwrap()).unwrap();
        let b = levi_form(&GraphHypersurface::hermitian_quadric(&rotated, 1.0).unwrap()).unwrap();
        prop_assert!(a.unitarity_defect() < 1e-12 && b.unitarity_defect() < 1e-12);
        prop_assert!(a.diagonalization_defect() < 1e-10 * s.max_abs().max(1.0));
        for (x, y) in a.lambda.iter().zip(&b.lambda) {
            prop_assert!((x - y).abs() < 1e-10, "{:?} vs {:?}", a.lambda, b.lambda);
        }
    }
}
