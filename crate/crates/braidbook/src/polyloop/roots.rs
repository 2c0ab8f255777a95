//! Monic polynomials stored by their lower coefficients `a_0, …, a_{n−1}`.

use num_complex::Complex64 as C;

/// Value of `z^n + a_{n−1} z^{n−1} + … + a_0`.
pub fn eval(a: &[C], z: C) -> C {
    a.iter().rev().fold(C::new(1.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative.
pub fn eval_d(a: &[C], z: C) -> (C, C) {
    let mut p = C::new(1.0, 0.0);
    let mut d = C::new(0.0, 0.0);
    for &c in a.iter().rev() {
        d = d * z + p;
        p = p * z + c;
    }
    (p, d)
}

/// Lower coefficients of `p′ / n`, which is monic of degree `n − 1`.
pub fn derivative_monic(a: &[C]) -> Vec<C> {
    let n = a.len() as f64;
    (1..a.len()).map(|k| a[k] * (k as f64 / n)).collect()
}

/// Lower coefficients of `∏ (z − r_j)`.
pub fn coeffs_from_roots(roots: &[C]) -> Vec<C> {
    // full[k] is the coefficient of z^k, leading 1 kept at the end
    let mut full = vec![C::new(1.0, 0.0)];
    for &r in roots {
        full.push(C::new(0.0, 0.0));
        for k in (1..full.len()).rev() {
            full[k] = full[k - 1] - r * full[k];
        }
        full[0] = -r * full[0];
    }
    full.pop();
    full
}

fn initial_guesses(a: &[C]) -> Vec<C> {
    let n = a.len();
    let r = a
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    (0..n)
        .map(|k| C::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect()
}

/// All roots by Aberth–Ehrlich iteration from Cauchy-radius starting points.
pub fn roots(a: &[C]) -> Vec<C> {
    roots_from(a, initial_guesses(a))
}

/// Aberth–Ehrlich iteration from the given starting points. Starting points
/// are nudged apart first, so a warm start from an earlier sample is fine.
pub fn roots_from(a: &[C], mut z: Vec<C>) -> Vec<C> {
    let n = a.len();
    assert_eq!(z.len(), n);
    if n == 0 {
        return z;
    }
    if n == 1 {
        return vec![-a[0]];
    }
    let scale = 1.0 + z.iter().map(|w| w.norm()).fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..i {
            if (z[i] - z[j]).norm() < 1e-10 * scale {
                z[i] += C::new(1e-7, 1.3e-7) * scale * (i + 1) as f64;
            }
        }
    }
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, d) = eval_d(a, z[i]);
            if p == C::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / d;
            let s: C = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

/// Reorders `next` so that `next[i]` is the point closest to `prev[i]`,
/// choosing pairs greedily by increasing distance.
pub fn match_points(prev: &[C], next: &[C]) -> Vec<C> {
    let perm = matching(prev, next);
    perm.iter().map(|&j| next[j]).collect()
}

/// `m[i]` is the index in `next` assigned to `prev[i]`.
pub fn matching(prev: &[C], next: &[C]) -> Vec<usize> {
    let n = prev.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in next.iter().enumerate() {
            pairs.push(((p - q).norm(), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (_, i, j) in pairs {
        if out[i] == usize::MAX && !used[j] {
            out[i] = j;
            used[j] = true;
        }
    }
    out
}

/// Smallest pairwise distance, infinite for fewer than two points.
pub fn min_separation(z: &[C]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..z.len() {
        for j in 0..i {
            best = best.min((z[i] - z[j]).norm());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_of_two_roots() {
        let a = coeffs_from_roots(&[C::new(2.0, 0.0), C::new(-3.0, 1.0)]);
        // (z − 2)(z + 3 − i) = z² + (1 − i) z − 6 + 2i
        assert!((a[1] - C::new(1.0, -1.0)).norm() < 1e-15);
        assert!((a[0] - C::new(-6.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn aberth_finds_roots_of_unity() {
        let mut a = vec![C::new(0.0, 0.0); 5];
        a[0] = C::new(-1.0, 0.0);
        let r = roots(&a);
        for z in &r {
            assert!((z.powu(5) - 1.0).norm() < 1e-13);
        }
        assert!(min_separation(&r) > 1.0);
    }

    #[test]
    fn derivative_of_cubic() {
        // z³ − 3z + 1 → (3z² − 3)/3 = z² − 1
        let a = [C::new(1.0, 0.0), C::new(-3.0, 0.0), C::new(0.0, 0.0)];
        let d = derivative_monic(&a);
        assert_eq!(d, vec![C::new(-1.0, 0.0), C::new(0.0, 0.0)]);
    }
}
