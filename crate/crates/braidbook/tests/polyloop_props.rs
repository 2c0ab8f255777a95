use std::f64::consts::PI;

use braidbook::braid::Permutation;
use braidbook::cactus::validate_cactus;
use braidbook::error::Error;
use braidbook::polyloop::roots::{derivative_monic, eval, roots};
use braidbook::polyloop::{
    boundary_monodromy, braid_projection, cactus_of_polynomial, coeffs_from_roots, critical_data,
    extract_braid_word, fiber_enumeration, lift_cv_loop, monodromy, pfib_check,
    pfib_check_source, Pin, SampledPolyLoop, Tolerances,
};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A: f64 = 0.3;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn square(t: f64) -> Vec<C> {
    vec![-C::from_polar(1.0, t), c(0.0)]
}

fn cubic(t: f64) -> Vec<C> {
    vec![C::from_polar(1.0, t), c(-3.0 * A * A), c(0.0)]
}

fn reversing(t: f64) -> Vec<C> {
    vec![C::from_polar(1.0, t.sin()), c(0.0)]
}

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn square_roots_expand_to_square_loop() {
    let t = 0.7;
    let r = C::from_polar(1.0, t / 2.0);
    let a = coeffs_from_roots(&[r, -r]);
    assert!((a[0] + C::from_polar(1.0, t)).norm() < 1e-15);
    assert!(a[1].norm() < 1e-15);
}

#[test]
fn repeated_root_expands_binomially() {
    let z = C::new(0.4, -1.1);
    let a = coeffs_from_roots(&[z; 4]);
    let binom = [1.0, 4.0, 6.0, 4.0];
    for k in 0..4 {
        let expected = binom[k] * (-z).powu(4 - k as u32);
        assert!((a[k] - expected).norm() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_round_trip(parts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=7)) {
        let r: Vec<C> = parts.iter().map(|&(x, y)| C::new(x, y)).collect();
        let sep = (0..r.len())
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| (r[i] - r[j]).norm())
            .fold(f64::INFINITY, f64::min);
        prop_assume!(sep > 1e-2);
        let found = roots(&coeffs_from_roots(&r));
        for z in &r {
            let best = found.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-10 * (1.0 + z.norm()), "{z} missing, off by {best}");
        }
    }
}

#[test]
fn square_loop_critical_data() {
    let lp = SampledPolyLoop::sample_coeffs(2, 64, square).unwrap();
    let cd = critical_data(&lp, &tol()).unwrap();
    for k in 0..64 {
        assert!(cd.points[0][k].norm() < 1e-14);
        assert!((cd.values[0][k] + C::from_polar(1.0, lp.t(k))).norm() < 1e-14);
    }
}

#[test]
fn cubic_critical_values_are_displaced_circles() {
    let lp = SampledPolyLoop::sample_coeffs(3, 64, cubic).unwrap();
    let cd = critical_data(&lp, &tol()).unwrap();
    let shift = 2.0 * A * A * A;
    for j in 0..2 {
        let cj = cd.points[j][0].re;
        assert!((cj.abs() - A).abs() < 1e-12);
        for k in 0..64 {
            let expected = C::from_polar(1.0, lp.t(k)) - cj.signum() * shift;
            assert!((cd.values[j][k] - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn pfib_square_has_unit_rate() {
    let lp = SampledPolyLoop::sample_coeffs(2, 256, square).unwrap();
    let cert = pfib_check(&critical_data(&lp, &tol()).unwrap(), 1e-6);
    assert!(cert.pass);
    assert!((cert.strands[0].min_rate - 1.0).abs() < 1e-6);
    assert!((cert.strands[0].max_rate - 1.0).abs() < 1e-6);
}

#[test]
fn pfib_cubic_passes_and_is_stable() {
    let cert = pfib_check_source(3, 256, &cubic, &tol()).unwrap();
    assert!(cert.pass);
    assert_eq!(cert.stable, Some(true));
    for s in &cert.strands {
        assert_eq!(s.sign, 1);
        assert!((s.min_rate - 1.0).abs() < 0.1);
    }
}

#[test]
fn pfib_reversing_loop_fails_at_turning_points() {
    let m = 256;
    let lp = SampledPolyLoop::sample_coeffs(2, m, reversing).unwrap();
    let cert = pfib_check(&critical_data(&lp, &tol()).unwrap(), 1e-6);
    assert!(!cert.pass);
    let width = 2.0 * PI / m as f64;
    for t in [PI / 2.0, 3.0 * PI / 2.0] {
        assert!(
            cert.failing.iter().any(|i| i.start - width <= t && t <= i.end + width),
            "{t} not reported in {:?}",
            cert.failing
        );
    }
}

#[test]
fn braid_of_square_loop_is_one_half_twist() {
    let lp = SampledPolyLoop::sample_coeffs(2, 128, square).unwrap();
    assert_eq!(extract_braid_word(&lp, &tol()).unwrap().letters, vec![1]);
}

#[test]
fn constant_roots_give_empty_word() {
    let r = vec![c(-1.0), C::new(0.2, 0.5), c(1.5)];
    let lp = SampledPolyLoop::sample_roots(3, 16, |_| r.clone()).unwrap();
    assert!(extract_braid_word(&lp, &tol()).unwrap().letters.is_empty());
}

#[test]
fn cubic_braid_closes_to_a_knot() {
    let lp = SampledPolyLoop::sample_coeffs(3, 256, cubic).unwrap();
    let w = extract_braid_word(&lp, &tol()).unwrap();
    assert_eq!(w.permutation().cycle_count(), 1);
    assert_eq!(w.exponent_sum(), 2);
}

/// The permutation of positions read off the word agrees with following the
/// roots from start to end.
fn braid_permutation_matches_roots(lp: &SampledPolyLoop) {
    let (w, theta) = braid_projection(lp, &tol()).unwrap();
    let (z, wrap) = lp.root_strands();
    let x = |s: usize| (z[0][s] * C::from_polar(1.0, -theta)).re;
    let mut order: Vec<usize> = (0..lp.n).collect();
    order.sort_by(|&a, &b| x(a).total_cmp(&x(b)));
    let mut pos = vec![0; lp.n];
    for (p, &s) in order.iter().enumerate() {
        pos[s] = p + 1;
    }
    let images: Vec<usize> = order.iter().map(|&s| pos[wrap[s]]).collect();
    assert_eq!(w.permutation(), Permutation::from_one_line(&images).unwrap());
}

#[test]
fn braid_permutations_match_on_random_root_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n = rng.gen_range(2..=4);
        let base: Vec<C> = (0..n).map(|_| C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let speed: Vec<i32> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let radius: Vec<f64> = (0..n).map(|j| 0.15 + 0.1 * j as f64).collect();
        let lp = SampledPolyLoop::sample_roots(n, 400, |t| {
            (0..n)
                .map(|j| base[j] + C::from_polar(radius[j], speed[j] as f64 * t))
                .collect()
        });
        if let Ok(lp) = lp {
            braid_permutation_matches_roots(&lp);
        }
    }
    let swap = SampledPolyLoop::sample_coeffs(3, 300, cubic).unwrap();
    braid_permutation_matches_roots(&swap);
}

#[test]
fn square_root_monodromy_is_a_transposition() {
    let path: Vec<C> = (0..64).map(|k| C::from_polar(1.0, 2.0 * PI * k as f64 / 64.0)).collect();
    let p = monodromy(&[c(0.0), c(0.0)], &path, &tol()).unwrap();
    assert_eq!(p, Permutation::transposition(2, 1, 2));
}

#[test]
fn small_loop_around_one_critical_value() {
    let a = [c(0.0), c(-3.0 * A * A), c(0.0)];
    let v = c(-2.0 * A * A * A);
    let path: Vec<C> = (0..64).map(|k| v + C::from_polar(0.01, 2.0 * PI * k as f64 / 64.0)).collect();
    let p = monodromy(&a, &path, &tol()).unwrap();
    assert_eq!(p.cycles().iter().filter(|c| c.len() == 2).count(), 1);
    assert_eq!(p.cycle_count(), 2);
}

#[test]
fn boundary_loop_is_the_descending_cycle() {
    for n in 2..=6 {
        let mut a = vec![c(0.0); n];
        a[0] = c(-1.0);
        let p = boundary_monodromy(&a, 10.0, -0.01, 1.0, &tol()).unwrap();
        assert_eq!(p, Permutation::descending_cycle(n));
    }
}

#[test]
fn quadratic_cactus() {
    let cactus = cactus_of_polynomial(&[c(-1.0), c(0.0)], &tol()).unwrap();
    assert_eq!(cactus.taus.len(), 1);
    assert!(validate_cactus(&cactus));
}

#[test]
fn generic_cubic_cactus() {
    let cactus = cactus_of_polynomial(&[c(0.5), c(-3.0 * A * A), c(0.0)], &tol()).unwrap();
    assert_eq!(cactus.taus.len(), 2);
    assert!(validate_cactus(&cactus));
}

fn tree(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in edges {
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        if x == y {
            return false;
        }
        parent[x] = y;
    }
    edges.len() + 1 == n
}

#[test]
fn random_polynomial_cacti_are_valid_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let n = rng.gen_range(2..=5);
        let a: Vec<C> = (0..n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let cactus = cactus_of_polynomial(&a, &tol()).unwrap();
        assert!(validate_cactus(&cactus));
        let edges: Vec<_> = cactus.taus.iter().map(|t| (t.k, t.l)).collect();
        assert!(tree(n, &edges), "{cactus}");
    }
}

#[test]
fn repeated_critical_point_is_rejected() {
    let lp = SampledPolyLoop::sample_coeffs(3, 16, |t| vec![-C::from_polar(1.0, t), c(0.0), c(0.0)]).unwrap();
    assert!(matches!(critical_data(&lp, &tol()), Err(Error::DegenerateCriticalValues(_))));
}

#[test]
fn lifting_the_square_loop_recovers_it() {
    let lp = SampledPolyLoop::sample_coeffs(2, 128, square).unwrap();
    let cd = critical_data(&lp, &tol()).unwrap();
    let lift = lift_cv_loop(&lp.coeffs[0], &cd.values, Pin::Subleading, &tol()).unwrap();
    assert!(lift.closed);
    let err = lift
        .samples
        .coeffs
        .iter()
        .zip(&lp.coeffs)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn lifting_reproduces_prescribed_values() {
    let lp = SampledPolyLoop::sample_coeffs(3, 128, cubic).unwrap();
    let cd = critical_data(&lp, &tol()).unwrap();
    let lift = lift_cv_loop(&lp.coeffs[0], &cd.values, Pin::Subleading, &tol()).unwrap();
    let back = critical_data(&lift.samples, &tol()).unwrap();
    for j in 0..2 {
        let k = (0..2).min_by(|&x, &y| {
            (back.values[x][0] - cd.values[j][0]).norm().total_cmp(&(back.values[y][0] - cd.values[j][0]).norm())
        }).unwrap();
        for s in 0..128 {
            assert!((back.values[k][s] - cd.values[j][s]).norm() < 1e-8);
        }
    }
}

#[test]
fn fiber_over_generic_point_has_nine_cubics() {
    let target = [C::new(0.7, 0.2), C::new(-0.4, 0.9)];
    let r = fiber_enumeration(&target, 150, 2, &tol()).unwrap();
    assert_eq!(r.polynomials.len(), 9);
    for p in &r.polynomials {
        assert_eq!(p[0], c(0.0));
        let crit = roots(&derivative_monic(p));
        for v in &target {
            assert!(crit.iter().any(|z| (eval(p, *z) - v).norm() < 1e-9));
        }
    }
}
