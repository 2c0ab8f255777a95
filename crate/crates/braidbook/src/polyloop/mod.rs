//! Loops of monic polynomials `g_t`, sampled at `t_k = 2πk/m`.
//!
//! The roots of a loop form a closed braid; its critical values `v_j(t)` decide
//! whether `arg g_t` fibers the complement (every `arg v_j` strictly monotone in
//! `t`). Sampled certificates are only as good as the sampling resolution and
//! carry it with them.
//!
//! Coefficient lists hold `a_0, …, a_{n−1}` of `z^n + a_{n−1} z^{n−1} + … + a_0`.

mod lift;
mod monodromy;
pub mod roots;

pub use lift::{fiber_enumeration, lift_cv_loop, FiberReport, Lift, Pin};
pub use monodromy::{
    boundary_monodromy, cactus_of_polynomial, calibration, monodromy, petal_paths, PetalSystem,
};
pub use roots::coeffs_from_roots;

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::braid::ArtinWord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative separation below which roots count as equal.
    pub root_distinct: f64,
    /// Relative size below which a critical value or a gap between two counts as zero.
    pub value_separation: f64,
    pub tol_rate: f64,
    pub newton_residual: f64,
    pub newton_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_distinct: 1e-9,
            value_separation: 1e-9,
            tol_rate: 1e-6,
            newton_residual: 1e-12,
            newton_iters: 50,
        }
    }
}

/// Samples of a loop at `t_k = 2πk/m`, `k = 0, …, m−1`. The loop closes from
/// sample `m−1` back to sample `0`; roots close up to a permutation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LoopJson", into = "LoopJson")]
pub struct SampledPolyLoop {
    pub n: usize,
    pub m: usize,
    pub coeffs: Vec<Vec<C>>,
    pub roots: Option<Vec<Vec<C>>>,
}

#[derive(Serialize, Deserialize)]
struct LoopJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<Vec<C>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<Vec<C>>>,
}

impl TryFrom<LoopJson> for SampledPolyLoop {
    type Error = Error;

    fn try_from(j: LoopJson) -> Result<Self> {
        let lp = match (j.roots, j.coeffs) {
            (Some(r), None) => SampledPolyLoop::from_roots(j.n, r)?,
            (None, Some(c)) => SampledPolyLoop::from_coeffs(j.n, c)?,
            (Some(r), Some(c)) => {
                let lp = SampledPolyLoop::from_roots(j.n, r)?;
                let ok = lp.coeffs.iter().zip(&c).all(|(a, b)| {
                    a.len() == b.len()
                        && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= 1e-8 * (1.0 + x.norm()))
                }) && c.len() == lp.m;
                if !ok {
                    return Err(Error::InvalidInput("roots and coefficients disagree".into()));
                }
                lp
            }
            (None, None) => {
                return Err(Error::InvalidInput("loop needs roots or coeffs".into()))
            }
        };
        if j.m.is_some_and(|m| m != lp.m) {
            return Err(Error::InvalidInput(format!(
                "m = {} but {} samples given",
                j.m.unwrap_or(0),
                lp.m
            )));
        }
        Ok(lp)
    }
}

impl From<SampledPolyLoop> for LoopJson {
    fn from(l: SampledPolyLoop) -> Self {
        LoopJson {
            n: l.n,
            m: Some(l.m),
            coeffs: if l.roots.is_some() { None } else { Some(l.coeffs) },
            roots: l.roots,
        }
    }
}

fn scale_of(a: &[C]) -> f64 {
    1.0 + a.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

impl SampledPolyLoop {
    pub fn from_coeffs(n: usize, coeffs: Vec<Vec<C>>) -> Result<Self> {
        if n == 0 || coeffs.is_empty() {
            return Err(Error::InvalidInput("need n ≥ 1 and at least one sample".into()));
        }
        if let Some(k) = coeffs.iter().position(|a| a.len() != n) {
            return Err(Error::InvalidInput(format!(
                "sample {k} has {} coefficients, expected {n}",
                coeffs[k].len()
            )));
        }
        Ok(SampledPolyLoop {
            n,
            m: coeffs.len(),
            coeffs,
            roots: None,
        })
    }

    pub fn from_roots(n: usize, roots: Vec<Vec<C>>) -> Result<Self> {
        if n == 0 || roots.is_empty() {
            return Err(Error::InvalidInput("need n ≥ 1 and at least one sample".into()));
        }
        let tol = Tolerances::default().root_distinct;
        for (k, r) in roots.iter().enumerate() {
            if r.len() != n {
                return Err(Error::InvalidInput(format!(
                    "sample {k} has {} roots, expected {n}",
                    r.len()
                )));
            }
            let s = 1.0 + r.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if roots::min_separation(r) < tol * s {
                return Err(Error::InvalidInput(format!("repeated root at sample {k}")));
            }
        }
        Ok(SampledPolyLoop {
            n,
            m: roots.len(),
            coeffs: roots.iter().map(|r| coeffs_from_roots(r)).collect(),
            roots: Some(roots),
        })
    }

    /// Samples `f(t)` (lower coefficients) at `m` equally spaced times.
    pub fn sample_coeffs(n: usize, m: usize, f: impl Fn(f64) -> Vec<C>) -> Result<Self> {
        Self::from_coeffs(n, (0..m).map(|k| f(time(k, m))).collect())
    }

    /// Samples `f(t)` (roots) at `m` equally spaced times.
    pub fn sample_roots(n: usize, m: usize, f: impl Fn(f64) -> Vec<C>) -> Result<Self> {
        Self::from_roots(n, (0..m).map(|k| f(time(k, m))).collect())
    }

    pub fn t(&self, k: usize) -> f64 {
        time(k, self.m)
    }

    /// Roots per sample, reordered so that index `i` follows one strand.
    /// The second value maps strand `i` at the last sample to its index at
    /// sample 0.
    pub fn root_strands(&self) -> (Vec<Vec<C>>, Vec<usize>) {
        let mut out: Vec<Vec<C>> = Vec::with_capacity(self.m);
        for k in 0..self.m {
            let next = match (&self.roots, out.last()) {
                (Some(r), None) => r[k].clone(),
                (Some(r), Some(prev)) => roots::match_points(prev, &r[k]),
                (None, None) => roots::roots(&self.coeffs[k]),
                (None, Some(prev)) => {
                    let z = roots::roots_from(&self.coeffs[k], prev.clone());
                    roots::match_points(prev, &z)
                }
            };
            out.push(next);
        }
        let wrap = roots::matching(&out[self.m - 1], &out[0]);
        (out, wrap)
    }
}

fn time(k: usize, m: usize) -> f64 {
    2.0 * PI * k as f64 / m as f64
}

/// Critical points and values, strand-major: `points[j][k]` is `c_j(t_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    pub n: usize,
    pub m: usize,
    pub points: Vec<Vec<C>>,
    pub values: Vec<Vec<C>>,
    /// Strand `j` at the last sample continues as strand `wrap[j]` at sample 0.
    pub wrap: Vec<usize>,
}

pub fn critical_data(lp: &SampledPolyLoop, tol: &Tolerances) -> Result<CriticalData> {
    let (n, m) = (lp.n, lp.m);
    let s = n - 1;
    let mut points = vec![Vec::with_capacity(m); s];
    let mut values = vec![Vec::with_capacity(m); s];
    let mut prev: Option<Vec<C>> = None;
    let mut close_prev = vec![false; s * s];
    let mut close_first = vec![false; s * s];
    for k in 0..m {
        let a = &lp.coeffs[k];
        let d = roots::derivative_monic(a);
        let c = match &prev {
            None => roots::roots(&d),
            Some(p) => roots::match_points(p, &roots::roots_from(&d, p.clone())),
        };
        let scale = scale_of(a);
        let v: Vec<C> = c.iter().map(|&z| roots::eval(a, z)).collect();
        for j in 0..s {
            if v[j].norm() < tol.value_separation * scale {
                return Err(Error::DegenerateCriticalValues(format!(
                    "critical value {} vanishes at t = {:.6}",
                    j + 1,
                    lp.t(k)
                )));
            }
            for i in 0..j {
                let close = (v[i] - v[j]).norm() < tol.value_separation * scale;
                if close && close_prev[i * s + j] {
                    return Err(Error::DegenerateCriticalValues(format!(
                        "critical values {} and {} coincide near t = {:.6}",
                        i + 1,
                        j + 1,
                        lp.t(k)
                    )));
                }
                close_prev[i * s + j] = close;
                if k == 0 {
                    close_first[i * s + j] = close;
                }
            }
            points[j].push(c[j]);
            values[j].push(v[j]);
        }
        prev = Some(c);
    }
    let last: Vec<C> = points.iter().map(|p| p[m - 1]).collect();
    let first: Vec<C> = points.iter().map(|p| p[0]).collect();
    let wrap = roots::matching(&last, &first);
    for j in 0..s {
        for i in 0..j {
            let (a, b) = (wrap[i].min(wrap[j]), wrap[i].max(wrap[j]));
            if m > 1 && close_prev[i * s + j] && close_first[a * s + b] {
                return Err(Error::DegenerateCriticalValues(format!(
                    "critical values {} and {} coincide at t = 0",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(CriticalData {
        n,
        m,
        points,
        values,
        wrap,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrandRate {
    /// Common sign of `Δ arg v_j / Δt`, or 0 when it changes.
    pub sign: i8,
    pub min_abs_rate: f64,
    pub min_rate: f64,
    pub max_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub strand: usize,
    pub start: f64,
    pub end: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PfibCertificate {
    pub pass: bool,
    /// Sampling resolution the verdict refers to.
    pub m: usize,
    pub tol_rate: f64,
    pub strands: Vec<StrandRate>,
    pub failing: Vec<Interval>,
    /// Agreement with the check at `2m`, when the loop could be resampled.
    pub stable: Option<bool>,
}

/// Finite-difference argument rates `Δ arg v_j / Δt` along every strand,
/// including the closing step.
pub fn arg_rates(cd: &CriticalData) -> Vec<Vec<f64>> {
    let dt = 2.0 * PI / cd.m as f64;
    (0..cd.values.len())
        .map(|j| {
            let v = &cd.values[j];
            (0..cd.m)
                .map(|k| {
                    let next = if k + 1 < cd.m { v[k + 1] } else { cd.values[cd.wrap[j]][0] };
                    (next / v[k]).arg() / dt
                })
                .collect()
        })
        .collect()
}

/// Checks that no critical value ever stops or reverses its winding about 0.
pub fn pfib_check(cd: &CriticalData, tol_rate: f64) -> PfibCertificate {
    let dt = 2.0 * PI / cd.m as f64;
    let rates = arg_rates(cd);
    let mut strands = Vec::new();
    let mut failing = Vec::new();
    for (j, r) in rates.iter().enumerate() {
        let pos = r.iter().filter(|&&x| x > tol_rate).count();
        let neg = r.iter().filter(|&&x| x < -tol_rate).count();
        let sign = if pos == r.len() {
            1
        } else if neg == r.len() {
            -1
        } else {
            0
        };
        strands.push(StrandRate {
            sign,
            min_abs_rate: r.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min),
            min_rate: r.iter().copied().fold(f64::INFINITY, f64::min),
            max_rate: r.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        });
        let mut bad: Vec<(f64, f64)> = Vec::new();
        for k in 0..cd.m {
            let t = k as f64 * dt;
            if r[k].abs() <= tol_rate {
                bad.push((t, t + dt));
            }
            let next = if k + 1 < cd.m { r[k + 1] } else { rates[cd.wrap[j]][0] };
            if r[k].abs() > tol_rate && next.abs() > tol_rate && (r[k] > 0.0) != (next > 0.0) {
                bad.push((t + dt / 2.0, t + 1.5 * dt));
            }
        }
        bad.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (s, e) in bad {
            match failing.last_mut() {
                Some(Interval { strand, end, .. }) if *strand == j && s <= *end + 1e-12 => {
                    *end = end.max(e)
                }
                _ => failing.push(Interval {
                    strand: j,
                    start: s,
                    end: e,
                }),
            }
        }
    }
    PfibCertificate {
        pass: strands.iter().all(|s| s.sign != 0),
        m: cd.m,
        tol_rate,
        strands,
        failing,
        stable: None,
    }
}

/// Samples `f` at `m` and at `2m` and reports the first certificate with the
/// stability verdict: equal signs and minimal rates within 5%.
pub fn pfib_check_source(
    n: usize,
    m: usize,
    f: &dyn Fn(f64) -> Vec<C>,
    tol: &Tolerances,
) -> Result<PfibCertificate> {
    let once = |m| -> Result<PfibCertificate> {
        let lp = SampledPolyLoop::sample_coeffs(n, m, f)?;
        Ok(pfib_check(&critical_data(&lp, tol)?, tol.tol_rate))
    };
    let mut a = once(m)?;
    let b = once(2 * m)?;
    let same = a.pass == b.pass
        && a.strands.len() == b.strands.len()
        && a.strands.iter().zip(&b.strands).all(|(x, y)| {
            x.sign == y.sign
                && (x.sign == 0
                    || (x.min_abs_rate - y.min_abs_rate).abs() < 0.05 * x.min_abs_rate)
        });
    a.stable = Some(same);
    Ok(a)
}

const PROJECTION_ATTEMPTS: usize = 8;

/// Reads the Artin word of the closed braid traced by the roots: crossings of
/// real parts in time order, positive when the strand coming from the left
/// passes with the smaller imaginary part.
pub fn extract_braid_word(lp: &SampledPolyLoop, tol: &Tolerances) -> Result<ArtinWord> {
    braid_projection(lp, tol).map(|(w, _)| w)
}

/// The word together with the projection used: positions are ordered by
/// `Re(e^{−iθ} z)`. The angle is perturbed away from 0 only when needed.
pub fn braid_projection(lp: &SampledPolyLoop, tol: &Tolerances) -> Result<(ArtinWord, f64)> {
    let (mut z, wrap) = lp.root_strands();
    z.push(wrap.iter().map(|&w| z[0][w]).collect());
    for attempt in 0..PROJECTION_ATTEMPTS {
        let theta = 0.137 * attempt as f64;
        let rot = C::from_polar(1.0, -theta);
        let p: Vec<Vec<C>> = z.iter().map(|s| s.iter().map(|&w| w * rot).collect()).collect();
        if let Some(letters) = read_projection(&p, tol) {
            return Ok((ArtinWord::new(lp.n, letters)?, theta));
        }
    }
    Err(Error::ProjectionDegenerate(PROJECTION_ATTEMPTS))
}

fn read_projection(z: &[Vec<C>], tol: &Tolerances) -> Option<Vec<i32>> {
    let n = z[0].len();
    let scale = 1.0 + z.iter().flatten().map(|w| w.norm()).fold(0.0, f64::max);
    let eps = tol.root_distinct * scale;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[0][a].re.total_cmp(&z[0][b].re));
    if order.windows(2).any(|w| (z[0][w[0]].re - z[0][w[1]].re).abs() < eps) {
        return None;
    }
    let mut events: Vec<(f64, usize, usize)> = Vec::new();
    for k in 0..z.len() - 1 {
        for i in 0..n {
            for j in 0..i {
                let d0 = z[k][i].re - z[k][j].re;
                let d1 = z[k + 1][i].re - z[k + 1][j].re;
                if d1.abs() < eps {
                    return None;
                }
                if d0 * d1 < 0.0 {
                    events.push((k as f64 + d0 / (d0 - d1), i, j));
                }
            }
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pos = vec![0; n];
    for (p, &s) in order.iter().enumerate() {
        pos[s] = p;
    }
    let mut letters = Vec::with_capacity(events.len());
    for (t, i, j) in events {
        let (left, right) = if pos[i] < pos[j] { (i, j) } else { (j, i) };
        if pos[right] != pos[left] + 1 {
            return None;
        }
        let k = t.floor() as usize;
        let s = t - k as f64;
        let y = |a: usize| z[k][a].im * (1.0 - s) + z[k + 1][a].im * s;
        let dy = y(left) - y(right);
        if dy.abs() < eps {
            return None;
        }
        let gen = pos[left] as i32 + 1;
        letters.push(if dy < 0.0 { gen } else { -gen });
        pos.swap(left, right);
    }
    Some(letters)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhReport {
    pub euler: i64,
    pub unknot_preimage: bool,
    pub warning: Option<String>,
}

/// Euler characteristic of the preimage of a disk under an `n`-fold simple
/// branched cover along a braid with `b` strands, and whether the branch
/// link lifts to the unknot.
pub fn riemann_hurwitz(n: usize, b: usize) -> RhReport {
    let warning = (n >= 1 && b + 1 < n).then(|| {
        format!("a connected {n}-fold cover needs at least {} branch strands", n - 1)
    });
    RhReport {
        euler: n as i64 - b as i64,
        unknot_preimage: n >= 1 && b + 1 == n,
        warning,
    }
}
