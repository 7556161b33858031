//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness and exits nonzero when any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use polyan_core::error::Error;
use polyan_core::harmonic::{solve_dirichlet, Domain2D};
use polyan_core::levi::{
    bmmp_verify, build_disc_family, constant_modulus_trace, levi_form, DiscCounts, GraphHypersurface, TraceVerdict,
};
use polyan_core::modulus::{balk_decompose, is_constant_modulus, BalkForm};
use polyan_core::polycore::{CPoly, HoloFn, MWitness, MultiIndex, PolyAnalytic, RationalHolo};
use polyan_core::rado::{
    hartogs_assemble, rado_verify, HartogsVerdict, PolyGrid, Polydisc, RadoVerdict, SampledFunction,
};
use polyan_core::sampling::{fit_polyanalytic, lines_through, uniqueness_test, PointSet, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_in_disc(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Order-`alpha` function with polynomial coefficients of degree ≤ `deg`
/// in each variable and coefficients in the disc of radius `scale`.
fn random_polyanalytic(rng: &mut ChaCha8Rng, alpha: &MultiIndex, deg: u32, scale: f64) -> PolyAnalytic {
    let n = alpha.dim();
    let powers = MultiIndex::box_below(&MultiIndex::new(vec![deg + 1; n]));
    let coeffs: Vec<_> = MultiIndex::box_below(alpha)
        .into_iter()
        .map(|beta| {
            let terms: Vec<_> = powers.iter().map(|g| (g.clone(), unit_in_disc(rng) * scale)).collect();
            (beta, RationalHolo::from_poly(CPoly::from_terms(n, terms)))
        })
        .collect();
    PolyAnalytic::new(alpha.clone(), coeffs).unwrap()
}

fn monic_univariate(rng: &mut ChaCha8Rng, deg: usize) -> CPoly {
    let mut c: Vec<Complex64> = (0..deg).map(|_| unit_in_disc(rng)).collect();
    c.push(Complex64::new(1.0, 0.0));
    CPoly::univariate(&c)
}

fn poly_distance(a: &CPoly, b: &CPoly) -> f64 {
    let deg = a.total_degree().max(b.total_degree());
    (0..=deg)
        .map(|k| {
            let m = MultiIndex::new(vec![k]);
            (a.coeff(&m) - b.coeff(&m)).norm()
        })
        .fold(0.0, f64::max)
}

fn balk_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let q = 2 + k % 3;
        let lambda = loop {
            let l = unit_in_disc(&mut rng);
            if l.norm() > 1e-3 {
                break l;
            }
        };
        let form = BalkForm { lambda, q: monic_univariate(&mut rng, q - 1) };
        let got = balk_decompose(&form.to_polyanalytic()).map_err(|e| format!("trial {k}: {e}"))?;
        worst = worst.max((got.lambda - lambda).norm()).max(poly_distance(&got.q, &form.q));
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst < 1e-9 && secs < 10.0, format!("200 trials, max coefficient error {worst:.2e}, {secs:.2}s"))
}

fn entire_constancy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut reported = 0;
    for k in 0..100 {
        let q = 1 + (k % 4) as u32;
        let alpha = MultiIndex::new(vec![q]);
        // every third draw keeps only the constant term, so the constant
        // branch is exercised as well as the generic one
        let f = if k % 3 == 0 {
            PolyAnalytic::constant(1, unit_in_disc(&mut rng)).with_order(alpha).unwrap()
        } else {
            random_polyanalytic(&mut rng, &alpha, 2, 1.0)
        };
        if is_constant_modulus(&f, 1e-9).map_err(|e| e.to_string())?.is_some_and(|m| m > 0.0) {
            reported += 1;
            let form = balk_decompose(&f).map_err(|e| format!("trial {k}: {e}"))?;
            if form.q.total_degree() != 0 {
                return Err(format!("trial {k}: deg Q = {}", form.q.total_degree()));
            }
        }
    }
    check(reported > 0, format!("{reported} of 100 reported constant modulus, all with deg Q = 0"))
}

fn rado_pair() -> Outcome {
    let h = 1.0 / 128.0;
    let start = Instant::now();
    let d = Domain2D::disc(c(0.0, 0.0), 1.0, h).unwrap();
    let f = SampledFunction::from_fn(&d, 2, |z| z * z.conj()).unwrap();
    let pos = rado_verify(&f).map_err(|e| e.to_string())?;
    let t_pos = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let d = Domain2D::disc(c(0.0, 0.0), 2.0, h).unwrap();
    let f = SampledFunction::from_fn(&d, 2, |z| {
        let s = z.norm_sqr();
        c(if s <= 1.0 { 1.0 - s } else { s - 1.0 }, 0.0)
    })
    .unwrap();
    let neg = rado_verify(&f).map_err(|e| e.to_string())?;
    let t_neg = start.elapsed().as_secs_f64();

    let ok = pos.verdict == RadoVerdict::Extends
        && pos.dbar_residual <= pos.scheme_bound
        && neg.verdict == RadoVerdict::Fails
        && neg.band_residual >= 100.0 * neg.scheme_bound
        && t_pos < 30.0
        && t_neg < 30.0;
    check(
        ok,
        format!(
            "z z̄: {} residual {:.2e} ≤ {:.2e} ({t_pos:.1}s); patch: {} interface {:.2e} vs 100·{:.2e} ({t_neg:.1}s)",
            pos.verdict.as_str(),
            pos.dbar_residual,
            pos.scheme_bound,
            neg.verdict.as_str(),
            neg.band_residual,
            neg.scheme_bound
        ),
    )
}

fn dirichlet_error(h: f64, g: fn(f64) -> f64, u: fn(Complex64) -> f64) -> f64 {
    let d = Domain2D::disc(c(0.0, 0.0), 1.0, h).unwrap();
    let bd = d.sample_boundary(|p| c(g(p.arg()), 0.0));
    let sol = solve_dirichlet(&d, &bd).unwrap();
    sol.iter().map(|(i, v)| (v.re - u(sol.lattice().point_of(i))).abs()).fold(0.0, f64::max)
}

fn dirichlet_accuracy() -> Outcome {
    let cases: [(&str, fn(f64) -> f64, fn(Complex64) -> f64); 3] = [
        ("cos θ", |t| t.cos(), |z| z.re),
        ("1", |_| 1.0, |_| 1.0),
        ("cos 2θ", |t| (2.0 * t).cos(), |z| z.re * z.re - z.im * z.im),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, u) in cases {
        let coarse = dirichlet_error(1.0 / 64.0, g, u);
        let fine = dirichlet_error(1.0 / 128.0, g, u);
        // exact reproduction has no convergence factor to measure
        let exact = fine <= 1e-12 && coarse <= 1e-12;
        let factor = coarse / fine;
        ok &= fine <= 2e-3 && (exact || (3.5..=4.5).contains(&factor));
        if exact {
            parts.push(format!("{name}: exact"));
        } else {
            parts.push(format!("{name}: {fine:.2e}, factor {factor:.2}"));
        }
    }
    check(ok, parts.join("; "))
}

fn uniqueness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let zero = c(0.0, 0.0);
    for k in 0..50 {
        let f = random_polyanalytic(&mut rng, &MultiIndex::new(vec![2]), 2, 1.0);
        let theta = rng.gen_range(0.0..PI);
        // g − f = z̄e^{iθ} − ze^{−iθ} vanishes exactly on the line of angle θ
        let e = Complex64::from_polar(1.0, theta);
        let line = PolyAnalytic::zbar(1, 0)
            .scale(e)
            .sub(&PolyAnalytic::holomorphic(RationalHolo::from_poly(CPoly::var(1, 0).scale(e.conj()))))
            .unwrap();
        let g = f.add(&line).unwrap();
        let one = lines_through(zero, &[theta], 10);
        if uniqueness_test(&f, &g, &one, 2) == Verdict::Equal {
            return Err(format!("trial {k}: one-line agreement reported equal"));
        }
        let two = lines_through(zero, &[theta, theta + rng.gen_range(0.3..PI - 0.3)], 10);
        if uniqueness_test(&f, &f.clone(), &two, 2) != Verdict::Equal {
            return Err(format!("trial {k}: identical pair on two lines not equal"));
        }
        let values = one.points().iter().map(|z| f.eval(&[*z]).unwrap()).collect();
        let samples = PointSet::new(zero, one.points().to_vec(), Some(values)).unwrap();
        match fit_polyanalytic(&samples, 2, 2) {
            Err(Error::RankDeficient { .. }) => {}
            other => return Err(format!("trial {k}: one-line fit gave {other:?}")),
        }
    }
    Ok("50 trials: one line never equal, two lines always equal, one-line fit rank deficient".into())
}

fn hartogs() -> Outcome {
    let start = Instant::now();
    let disc = Polydisc::new(&[c(0.0, 0.0), c(0.1, -0.2)], &[1.0, 0.8], 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut passed = 0;
    let mut sharp = 0;
    for a0 in 1..=3u32 {
        for a1 in 1..=3u32 {
            let alpha = MultiIndex::new(vec![a0, a1]);
            let f = random_polyanalytic(&mut rng, &alpha, 2, 0.5);
            let g = PolyGrid::from_polyanalytic(disc.clone(), &f).map_err(|e| e.to_string())?;
            match hartogs_assemble(&g, &alpha) {
                Ok(r) if r.verdict == HartogsVerdict::JointlyPolyanalytic => passed += 1,
                other => return Err(format!("α = {:?}: {other:?}", alpha.entries())),
            }
            drop(g);
            for j in 0..2 {
                let mono = alpha.with(j, alpha.get(j) + 1);
                let f =
                    PolyGrid::from_fn(disc.clone(), |z| (0..2).map(|k| z[k].conj().powu(mono.get(k) - 1)).product())
                        .map_err(|e| e.to_string())?;
                match hartogs_assemble(&f, &alpha) {
                    Err(Error::SliceViolation { variable, .. }) if variable == j => sharp += 1,
                    other => return Err(format!("α = {:?} + e_{j}: {other:?}", alpha.entries())),
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(format!("{passed}/9 functions jointly polyanalytic, {sharp}/18 monomials fail in their variable ({secs:.1}s)"))
}

fn random_affine(rng: &mut ChaCha8Rng) -> CPoly {
    CPoly::constant(2, unit_in_disc(rng))
        .add(&CPoly::var(2, 0).scale(unit_in_disc(rng)))
        .add(&CPoly::var(2, 1).scale(unit_in_disc(rng)))
}

fn random_balk(rng: &mut ChaCha8Rng) -> (Complex64, MWitness) {
    let lambda = unit_in_disc(rng) * 2.0 + 0.1;
    let q = random_affine(rng)
        .scale(c(0.25, 0.0))
        .add(&CPoly::constant(2, Complex64::from_polar(2.0, rng.gen_range(0.0..TAU))));
    (lambda, MWitness::BalkQuotient { lambda, q })
}

fn levi_suite() -> Outcome {
    let m = GraphHypersurface::builtin("quadric", 1.0).unwrap().map_err(|e| e.to_string())?;
    let l = levi_form(&m).map_err(|e| e.to_string())?;
    if (l.lambda[0] - 1.0).abs() > 1e-12 {
        return Err(format!("λ₁ = {}", l.lambda[0]));
    }
    let fam = build_disc_family(&m, &l, 0.1, 0.3, DiscCounts::default()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_ratio: f64 = 0.0;
    for k in 0..20 {
        let f = match k % 4 {
            0 => MWitness::Holomorphic(HoloFn::exp(random_affine(&mut rng))),
            1 => random_balk(&mut rng).1,
            2 => MWitness::SquaredModulus(random_affine(&mut rng)),
            _ => MWitness::HoloAntiholoProduct { g: HoloFn::poly(random_affine(&mut rng)), h: random_affine(&mut rng) },
        };
        let r = bmmp_verify(&f, &fam, 8).map_err(|e| e.to_string())?;
        if !r.within_bound {
            return Err(format!("witness {k} ({}): defect {:.2e} > {:.2e}", f.kind(), r.defect, r.sampling_bound));
        }
        worst_ratio = worst_ratio.max(r.defect / r.sampling_bound);
    }
    let mut worst_lambda: f64 = 0.0;
    for k in 0..5 {
        let (lambda, f) = random_balk(&mut rng);
        let r = constant_modulus_trace(&f, &m, &fam).map_err(|e| e.to_string())?;
        if r.verdict != TraceVerdict::BalkForm {
            return Err(format!("balk witness {k}: {}", r.verdict.as_str()));
        }
        worst_lambda = worst_lambda.max((r.lambda_abs.unwrap() - lambda.norm()).abs());
    }
    check(
        worst_lambda < 1e-6,
        format!(
            "λ₁ = 1, {} discs cover V⁺ ({} probes), 20 witnesses within bound (max defect/bound {worst_ratio:.2}), |λ| error {worst_lambda:.1e}",
            fam.discs.len(),
            fam.coverage_tested
        ),
    )
}

fn uniform_limit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let alpha = MultiIndex::new(vec![3]);
        let g = random_polyanalytic(&mut rng, &alpha, 3, 1.0);
        let r = rng.gen_range(0.1..0.6);
        // f_k = g·Σ_{m≤k} r^m converges coefficientwise to g/(1 − r)
        let limit = g.scale(c(1.0 / (1.0 - r), 0.0));
        if !limit.exact_order().le(&alpha) {
            return Err(format!("limit order {:?}", limit.exact_order().entries()));
        }
        let mut fk = PolyAnalytic::zero(1);
        for m in 0..80 {
            fk = fk.add(&g.scale(c(r.powi(m), 0.0))).unwrap();
        }
        for _ in 0..100 {
            let z = [unit_in_disc(&mut rng)];
            worst = worst.max((fk.eval(&z).unwrap() - limit.eval(&z).unwrap()).norm());
        }
    }
    check(worst <= 1e-10, format!("10 sequences, 100 points each, max |f_k − f| = {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 balk round trip", balk_round_trip),
        ("2 entire constancy", entire_constancy),
        ("3 rado positive/negative pair", rado_pair),
        ("4 dirichlet accuracy", dirichlet_accuracy),
        ("5 uniqueness", uniqueness),
        ("6 hartogs assembly", hartogs),
        ("7 levi/disc suite", levi_suite),
        ("8 uniform-limit closure", uniform_limit),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
