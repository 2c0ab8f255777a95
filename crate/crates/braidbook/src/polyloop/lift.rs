use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::roots::{self, derivative_monic, eval, min_separation};
use super::{SampledPolyLoop, Tolerances};
use crate::error::{Error, Result};

/// The coefficient held fixed while critical values are prescribed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Pin {
    /// `a_{n−1}` fixed; `a_0, …, a_{n−2}` move.
    #[default]
    Subleading,
    /// `a_0` fixed; `a_1, …, a_{n−1}` move.
    Constant,
}

impl Pin {
    fn free(self, n: usize) -> Vec<usize> {
        match self {
            Pin::Subleading => (0..n - 1).collect(),
            Pin::Constant => (1..n).collect(),
        }
    }
}

struct Tracker<'a> {
    a: Vec<C>,
    c: Vec<C>,
    free: Vec<usize>,
    tol: &'a Tolerances,
}

impl Tracker<'_> {
    fn values(&self) -> Vec<C> {
        self.c.iter().map(|&z| eval(&self.a, z)).collect()
    }

    fn refresh(&mut self) {
        let d = derivative_monic(&self.a);
        let z = roots::roots_from(&d, self.c.clone());
        self.c = roots::match_points(&self.c, &z);
    }

    /// `∂v_j/∂a_k = c_j^k` because `p′(c_j) = 0`.
    fn solve(&self, rhs: &[C]) -> Option<Vec<C>> {
        let s = self.c.len();
        let j = DMatrix::from_fn(s, s, |r, k| self.c[r].powu(self.free[k] as u32));
        let x = j.lu().solve(&DVector::from_column_slice(rhs))?;
        x.iter().all(|v| v.is_finite()).then(|| x.iter().copied().collect())
    }

    fn newton(&mut self, target: &[C], max_iter: usize) -> bool {
        let scale = 1.0 + target.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for _ in 0..max_iter {
            self.refresh();
            let r: Vec<C> = self.values().iter().zip(target).map(|(v, t)| v - t).collect();
            if r.iter().all(|x| x.norm() <= self.tol.newton_residual * scale) {
                return true;
            }
            let Some(d) = self.solve(&r) else { return false };
            for (k, &i) in self.free.iter().enumerate() {
                self.a[i] -= d[k];
            }
        }
        false
    }

    /// Follows `target(s)`, `s ∈ [0, 1]`, by Euler prediction and Newton
    /// correction with step halving.
    fn follow(&mut self, target: &dyn Fn(f64) -> Vec<C>) -> Result<()> {
        let (mut s, mut h) = (0.0, 0.25f64);
        while s < 1.0 {
            let h1 = h.min(1.0 - s);
            let (from, to) = (target(s), target(s + h1));
            let saved = (self.a.clone(), self.c.clone());
            let dv: Vec<C> = to.iter().zip(&from).map(|(x, y)| x - y).collect();
            let ok = match self.solve(&dv) {
                Some(d) => {
                    for (k, &i) in self.free.iter().enumerate() {
                        self.a[i] += d[k];
                    }
                    let sep = min_separation(&saved.1);
                    self.newton(&to, self.tol.newton_iters.min(12))
                        && self
                            .c
                            .iter()
                            .zip(&saved.1)
                            .all(|(x, y)| (x - y).norm() < 0.25 * sep)
                }
                None => false,
            };
            if ok {
                s += h1;
                h = (2.0 * h1).min(0.25);
            } else {
                (self.a, self.c) = saved;
                h = h1 / 2.0;
                if h < 1e-10 {
                    return Err(Error::StepFailure(format!("at path parameter {s:.6}")));
                }
            }
        }
        Ok(())
    }
}

/// A lifted loop: coefficients at the sample times plus the endpoint at
/// `t = 2π`, which may be a different polynomial over the same critical values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lift {
    pub pin: Pin,
    pub samples: SampledPolyLoop,
    pub end: Vec<C>,
    pub closed: bool,
}

fn start_tracker<'a>(p0: &[C], start: &[C], pin: Pin, tol: &'a Tolerances) -> Result<Tracker<'a>> {
    let n = p0.len();
    let c = roots::roots(&derivative_monic(p0));
    let v: Vec<C> = c.iter().map(|&z| eval(p0, z)).collect();
    let m = roots::matching(start, &v);
    let scale = 1.0 + start.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if start.iter().zip(&m).any(|(s, &j)| (s - v[j]).norm() > 1e-6 * scale) {
        return Err(Error::InvalidInput(
            "start polynomial's critical values differ from the loop's start".into(),
        ));
    }
    let mut t = Tracker {
        a: p0.to_vec(),
        c: m.iter().map(|&j| c[j]).collect(),
        free: pin.free(n),
        tol,
    };
    if !t.newton(start, tol.newton_iters) {
        return Err(Error::StepFailure("start polynomial does not converge".into()));
    }
    Ok(t)
}

/// Lifts a loop of critical values through the covering by polynomials.
/// `values[j][k]` is `v_j(t_k)`; strands close up by nearest matching.
pub fn lift_cv_loop(p0: &[C], values: &[Vec<C>], pin: Pin, tol: &Tolerances) -> Result<Lift> {
    let n = p0.len();
    if values.len() + 1 != n || values.iter().any(|v| v.len() != values[0].len()) {
        return Err(Error::InvalidInput(format!(
            "degree {n} needs {} strands of equal length",
            n.saturating_sub(1)
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput("degree must be at least 2".into()));
    }
    let m = values[0].len();
    let at = |k: usize| -> Vec<C> { values.iter().map(|v| v[k]).collect() };
    let first = at(0);
    let wrap = roots::matching(&at(m - 1), &first);
    let mut t = start_tracker(p0, &first, pin, tol)?;
    let mut coeffs = vec![t.a.clone()];
    for k in 0..m {
        let from = at(k);
        let to: Vec<C> = if k + 1 < m { at(k + 1) } else { wrap.iter().map(|&w| first[w]).collect() };
        t.follow(&|s| from.iter().zip(&to).map(|(x, y)| x * (1.0 - s) + y * s).collect())?;
        coeffs.push(t.a.clone());
    }
    let end = coeffs.pop().expect("m + 1 entries");
    let closed = end.iter().zip(p0).all(|(x, y)| (x - y).norm() < 1e-8 * (1.0 + y.norm()));
    Ok(Lift {
        pin,
        samples: SampledPolyLoop::from_coeffs(n, coeffs)?,
        end,
        closed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub n: usize,
    pub target: Vec<C>,
    /// Distinct polynomials with constant term 0 found over `target`.
    pub polynomials: Vec<Vec<C>>,
    pub attempts: usize,
    pub failures: usize,
}

/// Enumerates monic polynomials with constant term 0 whose critical values
/// are the set `target`, by continuation from random starting polynomials
/// along random paths. Results are deduplicated at `1e−6`.
pub fn fiber_enumeration(
    target: &[C],
    attempts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<FiberReport> {
    let n = target.len() + 1;
    if n < 2 {
        return Err(Error::InvalidInput("need at least one critical value".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disk = |rng: &mut ChaCha8Rng, r: f64| {
        C::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
    };
    let reach = 1.0 + target.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut found: Vec<Vec<C>> = Vec::new();
    let mut failures = 0;
    for _ in 0..attempts {
        let mut q = vec![C::new(0.0, 0.0); n];
        for x in q.iter_mut().skip(1) {
            *x = disk(&mut rng, 1.5);
        }
        let c = roots::roots(&derivative_monic(&q));
        let v: Vec<C> = c.iter().map(|&z| eval(&q, z)).collect();
        if v.iter().any(|x| x.norm() < 1e-3) || min_separation(&v) < 1e-3 || min_separation(&c) < 1e-3 {
            continue;
        }
        let mut perm: Vec<usize> = (0..n - 1).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let goal: Vec<C> = perm.iter().map(|&i| target[i]).collect();
        let mid: Vec<C> = (0..n - 1).map(|_| disk(&mut rng, reach)).collect();
        let mut t = Tracker {
            a: q,
            c,
            free: Pin::Constant.free(n),
            tol,
        };
        let legs = [(v, mid.clone()), (mid, goal.clone())];
        let ok = legs.iter().all(|(x, y)| {
            t.follow(&|s| x.iter().zip(y).map(|(a, b)| a * (1.0 - s) + b * s).collect())
                .is_ok()
        }) && t.newton(&goal, tol.newton_iters);
        if !ok {
            failures += 1;
            continue;
        }
        let p = t.a;
        let dup = found
            .iter()
            .any(|f| f.iter().zip(&p).all(|(x, y)| (x - y).norm() < 1e-6));
        if !dup {
            found.push(p);
        }
    }
    found.sort_by(|x, y| {
        x.iter()
            .rev()
            .flat_map(|c| [c.re, c.im])
            .zip(y.iter().rev().flat_map(|c| [c.re, c.im]))
            .map(|(a, b)| a.total_cmp(&b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(FiberReport {
        n,
        target: target.to_vec(),
        polynomials: found,
        attempts,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_loop_lifts_to_constant_loop() {
        let p0 = vec![C::new(0.5, 0.0), C::new(-0.27, 0.0), C::new(0.0, 0.0)];
        let c = roots::roots(&derivative_monic(&p0));
        let values: Vec<Vec<C>> = c.iter().map(|&z| vec![eval(&p0, z); 8]).collect();
        let l = lift_cv_loop(&p0, &values, Pin::Subleading, &Tolerances::default()).unwrap();
        assert!(l.closed);
        for a in &l.samples.coeffs {
            assert!(a.iter().zip(&p0).all(|(x, y)| (x - y).norm() < 1e-10));
        }
    }

    #[test]
    fn quadratic_fiber_has_two_points() {
        let r = fiber_enumeration(&[C::new(0.3, 0.7)], 20, 1, &Tolerances::default()).unwrap();
        assert_eq!(r.polynomials.len(), 2);
    }
}
