use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::roots::{self, derivative_monic, eval, eval_d, min_separation};
use super::Tolerances;
use crate::braid::Permutation;
use crate::cactus::{validate_cactus, Cactus, Transposition};
use crate::error::{Error, Result};

const MIN_STEP: f64 = 1e-14;
/// Critical values whose arguments differ by less than this share a ray.
const TIE: f64 = 1e-6;

fn newton_fiber(a: &[C], w: C, mut z: C, tol: &Tolerances) -> Option<C> {
    for _ in 0..8 {
        let (p, d) = eval_d(a, z);
        let dz = (p - w) / d;
        if !dz.is_finite() {
            return None;
        }
        z -= dz;
        if dz.norm() <= tol.newton_residual * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    None
}

/// Continues the fiber `p⁻¹(w)` while `w` runs along the polyline `path`.
fn track(a: &[C], mut z: Vec<C>, path: &[C], tol: &Tolerances) -> Result<Vec<C>> {
    for seg in path.windows(2) {
        let (w0, w1) = (seg[0], seg[1]);
        let (mut s, mut h) = (0.0, 1.0f64);
        while s < 1.0 {
            let h1 = h.min(1.0 - s);
            let wa = w0 + (w1 - w0) * s;
            let wb = w0 + (w1 - w0) * (s + h1);
            let pred: Vec<C> = z.iter().map(|&x| x + (wb - wa) / eval_d(a, x).1).collect();
            let corr: Option<Vec<C>> = pred.iter().map(|&x| newton_fiber(a, wb, x, tol)).collect();
            let ok = corr.as_ref().is_some_and(|c| {
                let sep = min_separation(c).min(min_separation(&z));
                let disp = c.iter().zip(&z).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                let jump = c.iter().zip(&pred).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                sep >= 4.0 * disp && jump < 0.25 * sep
            });
            if ok {
                z = corr.expect("checked");
                s += h1;
                h = (2.0 * h1).min(1.0);
            } else {
                h = h1 / 2.0;
                if h < MIN_STEP {
                    return Err(Error::ContinuationLoss(format!(
                        "step underflow near w = {:.6}{:+.6}i",
                        wa.re, wa.im
                    )));
                }
            }
        }
    }
    Ok(z)
}

/// Fiber over `w0`, labelled clockwise from the root nearest `arg(w0)/n`.
fn labelled_fiber(a: &[C], w0: C) -> Vec<C> {
    let n = a.len();
    let mut b = a.to_vec();
    b[0] -= w0;
    let z = roots::roots(&b);
    let base = w0.arg() / n as f64 - PI / n as f64;
    let key = |x: &C| (x.arg() - base).rem_euclid(2.0 * PI);
    let mut sorted = z;
    sorted.sort_by(|x, y| key(x).total_cmp(&key(y)));
    let mut out = vec![sorted[0]];
    out.extend(sorted[1..].iter().rev());
    out
}

fn permutation_of(start: &[C], end: &[C]) -> Result<Permutation> {
    let m = roots::matching(end, start);
    Permutation::from_one_line(&m.iter().map(|j| j + 1).collect::<Vec<_>>())
        .map_err(|_| Error::ContinuationLoss("fiber did not close up".into()))
}

fn closed(path: &[C]) -> Vec<C> {
    let mut p = path.to_vec();
    if p.first() != p.last() {
        p.push(p[0]);
    }
    p
}

/// Sheet permutation of `p(z) = w` along the closed polyline `path`. Sheets
/// over the start point are labelled clockwise starting next to `arg(w)/n`.
pub fn monodromy(a: &[C], path: &[C], tol: &Tolerances) -> Result<Permutation> {
    let path = closed(path);
    let start = labelled_fiber(a, path[0]);
    let end = track(a, start.clone(), &path, tol)?;
    permutation_of(&start, &end)
}

fn arc(r: f64, from: f64, sweep: f64) -> Vec<C> {
    let steps = ((sweep.abs() / (2.0 * PI) * 256.0).ceil() as usize).max(1);
    (0..=steps)
        .map(|k| C::from_polar(r, from + sweep * k as f64 / steps as f64))
        .collect()
}

/// Monodromy of the circle `|w| = r` starting at angle `beta`, traversed
/// with orientation `o` (`+1` counterclockwise).
pub fn boundary_monodromy(a: &[C], r: f64, beta: f64, o: f64, tol: &Tolerances) -> Result<Permutation> {
    monodromy(a, &arc(r, beta, o * 2.0 * PI), tol)
}

static ORIENTATION: OnceLock<std::result::Result<f64, String>> = OnceLock::new();

/// Orientation of the boundary circle whose monodromy equals the ordered
/// product of the petal monodromies: `+1` counterclockwise, `−1` clockwise.
/// Determined once per process on a fixed generic cubic.
pub fn calibration() -> Result<f64> {
    ORIENTATION
        .get_or_init(|| {
            let tol = Tolerances::default();
            let a = [C::new(0.3, 0.4), C::new(-0.27, 0.0), C::new(0.0, 0.0)];
            let sys = petal_paths(&a, &tol).map_err(|e| e.to_string())?;
            let (_, perms) = petal_monodromies(&a, &sys, &tol).map_err(|e| e.to_string())?;
            let product = perms.iter().fold(Permutation::identity(3), |acc, p| acc.then(p));
            let ccw = boundary_monodromy(&a, sys.radius, sys.base.arg(), 1.0, &tol)
                .map_err(|e| e.to_string())?;
            if product == ccw {
                Ok(1.0)
            } else if product == ccw.inverse() {
                Ok(-1.0)
            } else {
                Err(format!("petal product {product} against boundary loop {ccw}"))
            }
        })
        .clone()
        .map_err(Error::Calibration)
}

fn petal_monodromies(a: &[C], sys: &PetalSystem, tol: &Tolerances) -> Result<(Vec<C>, Vec<Permutation>)> {
    let fiber = labelled_fiber(a, sys.base);
    let perms = sys
        .petals
        .iter()
        .map(|petal| permutation_of(&fiber, &track(a, fiber.clone(), petal, tol)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((fiber, perms))
}

/// Paths used for the cactus of a polynomial: a base point on a large circle
/// and one closed petal per critical value, in cactus order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PetalSystem {
    pub base: C,
    pub radius: f64,
    pub critical_values: Vec<C>,
    /// Indices into `critical_values` in cactus order.
    pub order: Vec<usize>,
    pub petals: Vec<Vec<C>>,
}

/// Petal `j` runs counterclockwise along the large circle to `arg v_j`,
/// straight in (passing outer values on the same ray clockwise), once
/// counterclockwise around `v_j`, and back. Petals are sorted by increasing
/// argument measured from the base point.
pub fn petal_paths(a: &[C], tol: &Tolerances) -> Result<PetalSystem> {
    let c = roots::roots(&derivative_monic(a));
    let v: Vec<C> = c.iter().map(|&z| eval(a, z)).collect();
    let scale = 1.0 + a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let eps = tol.value_separation * scale;
    for (j, x) in v.iter().enumerate() {
        if x.norm() < eps {
            return Err(Error::DegenerateCriticalValues(format!("critical value {} is 0", j + 1)));
        }
        if v[..j].iter().any(|y| (x - y).norm() < eps) {
            return Err(Error::DegenerateCriticalValues("repeated critical value".into()));
        }
    }
    let ang: Vec<f64> = v.iter().map(|x| x.arg().rem_euclid(2.0 * PI)).collect();
    let tied = |j: usize, k: usize| {
        let d = (ang[j] - ang[k]).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d) < TIE
    };
    let mut sorted = ang.clone();
    sorted.sort_by(f64::total_cmp);
    let beta = match sorted.len() {
        0 => -0.01,
        k => {
            // midpoint of the angular gap containing −0.01
            let target = 2.0 * PI - 0.01;
            let mut b = (sorted[k - 1] + sorted[0] + 2.0 * PI) / 2.0;
            for w in sorted.windows(2) {
                if w[0] <= target && target < w[1] && w[1] - w[0] > TIE {
                    b = (w[0] + w[1]) / 2.0;
                }
            }
            b.rem_euclid(2.0 * PI)
        }
    };
    let radius = 2.5 * v.iter().map(|x| x.norm()).fold(0.0, f64::max) + 1.0;
    let offset = |j: usize| (ang[j] - beta).rem_euclid(2.0 * PI);
    // values on one ray count as if the outer ones sat slightly further along
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&x, &y| {
        if tied(x, y) {
            v[x].norm().total_cmp(&v[y].norm())
        } else {
            offset(x).total_cmp(&offset(y))
        }
    });
    let gap = |j: usize| {
        v.iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, y)| (v[j] - y).norm())
            .fold(v[j].norm(), f64::min)
    };
    let petals = order
        .iter()
        .map(|&j| {
            let out = arc(radius, beta, offset(j));
            let mut p = out.clone();
            let mut outer: Vec<usize> = (0..v.len())
                .filter(|&k| k != j && tied(j, k) && v[k].norm() > v[j].norm())
                .collect();
            outer.sort_by(|&x, &y| v[y].norm().total_cmp(&v[x].norm()));
            let dir = C::from_polar(1.0, ang[j]);
            for k in outer {
                let rho = 0.3 * gap(k);
                let centre = dir * v[k].norm();
                p.extend(arc(rho, ang[j], -PI).into_iter().map(|x| x + centre));
            }
            let back: Vec<C> = p.iter().rev().copied().collect();
            let eps = 0.25 * gap(j);
            p.extend(arc(eps, ang[j], 2.0 * PI).into_iter().map(|x| x + v[j]));
            p.extend(back);
            p
        })
        .collect();
    Ok(PetalSystem {
        base: C::from_polar(radius, beta),
        radius,
        critical_values: v,
        order,
        petals,
    })
}

/// Cactus of a polynomial with simple critical points and nonzero critical
/// values. Sheets are labelled so that the calibrated boundary loop is
/// `(1 n … 2)`; the ordered petal product must then agree.
pub fn cactus_of_polynomial(a: &[C], tol: &Tolerances) -> Result<Cactus> {
    let n = a.len();
    if n <= 1 {
        return Cactus::new(n.max(1), vec![]);
    }
    let o = calibration()?;
    let sys = petal_paths(a, tol)?;
    let (fiber, perms) = petal_monodromies(a, &sys, tol)?;
    let boundary = permutation_of(
        &fiber,
        &track(a, fiber.clone(), &arc(sys.radius, sys.base.arg(), o * 2.0 * PI), tol)?,
    )?;
    if boundary.cycle_count() != 1 {
        return Err(Error::Calibration(format!("boundary monodromy {boundary} is not an n-cycle")));
    }
    // sheet B^k(1) gets label n − k + 1
    let mut label = vec![0; n];
    let mut s = 1;
    for k in 0..n {
        label[s - 1] = if k == 0 { 1 } else { n - k + 1 };
        s = boundary.apply(s);
    }
    let mut taus = Vec::with_capacity(n - 1);
    for p in perms {
        let moved: Vec<usize> = (1..=n).filter(|&i| p.apply(i) != i).collect();
        if moved.len() != 2 {
            return Err(Error::DegenerateCriticalValues(format!(
                "petal monodromy {p} is not a transposition"
            )));
        }
        taus.push(Transposition::new(label[moved[0] - 1], label[moved[1] - 1])?);
    }
    let cactus = Cactus::new(n, taus)?;
    if !validate_cactus(&cactus) {
        return Err(Error::Calibration(format!(
            "petal product {} differs from (1 n … 2)",
            cactus.product()
        )));
    }
    Ok(cactus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_monodromy() {
        let a = [C::new(0.0, 0.0), C::new(0.0, 0.0)];
        let p = monodromy(&a, &arc(1.0, 0.0, 2.0 * PI), &Tolerances::default()).unwrap();
        assert_eq!(p, Permutation::transposition(2, 1, 2));
    }

    #[test]
    fn contractible_loop_is_trivial() {
        let a = [C::new(0.0, 0.0), C::new(0.0, 0.0)];
        let path: Vec<C> = arc(0.5, 0.0, 2.0 * PI).into_iter().map(|w| w + 3.0).collect();
        assert!(monodromy(&a, &path, &Tolerances::default()).unwrap().is_identity());
    }

    #[test]
    fn calibration_is_decided() {
        assert!(calibration().is_ok());
    }
}
