//! Concrete Rampichini diagrams on the `(φ, t)` torus.
//!
//! Curves are stored as closed polylines in lifted coordinates: `φ` grows by
//! `2π` per pass and `t` is measured in turns, so one full turn in `t` is `1`.
//! Every curve starts on the `φ = 0` line and has a vertex wherever it meets
//! that line again.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::heights::solve_heights;
use super::{apply_event, event_moves, script_valid, Event, MoveScript};
use crate::braid::{pair_rewrites, BandLetter, BandWord, Permutation};
use crate::cactus::{condition9, product, Condition9Report, Transposition};
use crate::error::{Error, Result};

const TOL: f64 = 1e-9;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Curve {
    /// `+1` for curves rising in `t`, `-1` for falling ones.
    pub sign: i8,
    /// Lifted `(φ, t)` vertices; the last one is the first shifted by whole periods.
    pub points: Vec<(f64, f64)>,
    /// One label per segment.
    pub labels: Vec<BandLetter>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Crossing {
    pub phi: f64,
    pub t: f64,
    pub curves: (usize, usize),
    /// Vertical reading `(upper, lower)` just before and just after.
    pub before: (BandLetter, BandLetter),
    pub after: (BandLetter, BandLetter),
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct EdgeCrossing {
    pub phi: f64,
    pub curve: usize,
    pub label: BandLetter,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Diagram {
    pub n: usize,
    /// Letters on every vertical line.
    pub letters: usize,
    pub curves: Vec<Curve>,
    pub crossings: Vec<Crossing>,
    pub edge_crossings: Vec<EdgeCrossing>,
}

/// A straight piece of a curve inside the fundamental square `[0,2π]×[0,1]`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Piece {
    pub curve: usize,
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub label: BandLetter,
}

impl Diagram {
    /// Curve segments cut at the square's edges.
    pub fn pieces(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        for (ci, c) in self.curves.iter().enumerate() {
            for (k, w) in c.points.windows(2).enumerate() {
                let (a, b) = (w[0], w[1]);
                let label = c.labels[k];
                let turn = (a.0 / TAU + TOL).floor();
                let phi0 = turn * TAU;
                let mut cuts = vec![0.0];
                let (lo, hi) = (a.1.min(b.1), a.1.max(b.1));
                let mut m = lo.floor() + 1.0;
                while m < hi {
                    cuts.push((m - a.1) / (b.1 - a.1));
                    m += 1.0;
                }
                cuts.push(1.0);
                cuts.sort_by(f64::total_cmp);
                for pair in cuts.windows(2) {
                    let at = |s: f64| (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
                    let (p, q) = (at(pair[0]), at(pair[1]));
                    let base = ((p.1 + q.1) / 2.0).floor();
                    out.push(Piece {
                        curve: ci,
                        from: (p.0 - phi0, p.1 - base),
                        to: (q.0 - phi0, q.1 - base),
                        label,
                    });
                }
            }
        }
        out
    }
}

fn shift_letter(l: BandLetter, n: usize, k: i64) -> BandLetter {
    let sh = |i: usize| ((i as i64 - 1 + k).rem_euclid(n as i64) + 1) as usize;
    let (a, b) = (sh(l.i), sh(l.j));
    BandLetter {
        i: a.min(b),
        j: a.max(b),
        sign: l.sign,
    }
}

/// Places the events of a valid script at `φ_k = 2π(k + ½)/K` and draws
/// every letter as a piecewise-linear monotone curve.
pub fn synthesize_diagram(s: &MoveScript) -> Result<Diagram> {
    let report = script_valid(s);
    if !report.valid {
        return Err(Error::InvalidInput(format!(
            "script fails validation: {}",
            serde_json::to_string(&report).unwrap_or_default()
        )));
    }
    let n = s.n;
    let len = s.start.len();
    if len == 0 {
        return Ok(Diagram {
            n,
            letters: 0,
            curves: vec![],
            crossings: vec![],
            edge_crossings: vec![],
        });
    }
    let mut words: Vec<BandWord> = vec![s.start.clone()];
    let mut steps = Vec::new();
    for &e in &s.events {
        let w = words.last().expect("nonempty");
        steps.push(event_moves(w, e));
        words.push(apply_event(w, e)?);
    }
    let h = solve_heights(len, &steps)
        .ok_or_else(|| Error::Realizability("valid script without height assignment".into()))?;
    let k_events = s.events.len();
    let phi = |k: usize| TAU * k as f64 / k_events as f64;

    // One pass per starting slot: lifted vertices relative to the pass start.
    struct Pass {
        points: Vec<(f64, f64)>,
        labels: Vec<BandLetter>,
        end_slot: usize,
    }
    let mut passes = Vec::with_capacity(len);
    let mut edge_rel: Vec<(usize, f64, BandLetter)> = Vec::new();
    for s0 in 0..len {
        let mut slot = s0;
        let mut lift = 0.0;
        let mut points = vec![(0.0, h[0][s0])];
        let mut labels = Vec::new();
        for (k, moves) in steps.iter().enumerate() {
            let m = moves.iter().find(|m| m.from == slot).expect("every slot moves");
            let before = words[k].letters[slot];
            let after = words[k + 1].letters[m.to];
            let end = (phi(k + 1), h[k + 1][m.to] + lift + m.wrap as f64);
            if let Event::Bkl { pos, .. } = s.events[k] {
                if slot == pos || slot == pos + 1 {
                    let other = if slot == pos { pos + 1 } else { pos };
                    let (a0, a1) = (h[k][slot], h[k + 1][m.to]);
                    let (b0, b1) = (h[k][other], h[k + 1][slot]);
                    let lam = (a0 - b0) / ((a0 - b0) - (a1 - b1));
                    let cp = (
                        phi(k) + lam * (phi(k + 1) - phi(k)),
                        a0 + lam * (a1 - a0) + lift,
                    );
                    labels.push(before);
                    points.push(cp);
                    labels.push(after);
                    points.push(end);
                    slot = m.to;
                    continue;
                }
            }
            if m.wrap != 0 {
                let start = *points.last().expect("nonempty");
                let target = if m.wrap > 0 { lift + 1.0 } else { lift };
                let lam = (target - start.1) / (end.1 - start.1);
                edge_rel.push((s0, start.0 + lam * (end.0 - start.0), before));
                lift += m.wrap as f64;
            }
            debug_assert_eq!(before, after);
            labels.push(before);
            points.push(end);
            slot = m.to;
        }
        passes.push(Pass {
            points,
            labels,
            end_slot: slot,
        });
    }

    // Chain passes into closed curves through the φ = 2π gluing.
    let mut curve_of = vec![(usize::MAX, 0usize); len];
    let mut curves = Vec::new();
    for s0 in 0..len {
        if curve_of[s0].0 != usize::MAX {
            continue;
        }
        let ci = curves.len();
        let mut points = vec![passes[s0].points[0]];
        let mut labels = Vec::new();
        let (mut x, mut turn, mut lift) = (s0, 0usize, 0.0);
        loop {
            curve_of[x] = (ci, turn);
            let p = &passes[x];
            for &(f, t) in &p.points[1..] {
                points.push((f + TAU * turn as f64, t + lift));
            }
            labels.extend_from_slice(&p.labels);
            let last = p.points.last().expect("nonempty").1;
            lift += (last - h[k_events][p.end_slot]).round();
            x = p.end_slot;
            turn += 1;
            if x == s0 {
                break;
            }
        }
        curves.push(Curve {
            sign: s.start.letters[s0].sign,
            points,
            labels,
        });
    }
    let mut crossings = Vec::new();
    let mut lineage: Vec<usize> = (0..len).collect();
    for (k, moves) in steps.iter().enumerate() {
        if let Event::Bkl { pos, .. } = s.events[k] {
            let (a0, a1) = (h[k][pos], h[k + 1][pos + 1]);
            let (b0, b1) = (h[k][pos + 1], h[k + 1][pos]);
            let lam = (a0 - b0) / ((a0 - b0) - (a1 - b1));
            let (w0, w1) = (&words[k].letters, &words[k + 1].letters);
            crossings.push(Crossing {
                phi: phi(k) + lam * (phi(k + 1) - phi(k)),
                t: a0 + lam * (a1 - a0),
                curves: (curve_of[lineage[pos]].0, curve_of[lineage[pos + 1]].0),
                before: (w0[pos], w0[pos + 1]),
                after: (w1[pos], w1[pos + 1]),
            });
        }
        let mut next = vec![0; len];
        for m in moves {
            next[m.to] = lineage[m.from];
        }
        lineage = next;
    }
    let mut edge_crossings: Vec<EdgeCrossing> = edge_rel
        .into_iter()
        .map(|(s0, phi, label)| EdgeCrossing {
            phi,
            curve: curve_of[s0].0,
            label,
        })
        .collect();
    edge_crossings.sort_by(|a, b| a.phi.total_cmp(&b.phi));
    Ok(Diagram {
        n,
        letters: len,
        curves,
        crossings,
        edge_crossings,
    })
}

#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct DiagramReport {
    /// 1: closed curves on the torus, vertices on the `φ = 0` line.
    pub closed: bool,
    /// 2: every curve strictly monotone with one slope sign.
    pub monotone: bool,
    /// 3: exactly `n − 1` crossings of the `t = 0` edge.
    pub edge_crossings: usize,
    pub edge_count_ok: bool,
    /// 4: finitely many crossings, all simple and transverse.
    pub crossings: usize,
    pub simple_transverse: bool,
    /// 5: every segment carries a letter matching its slope.
    pub labelled: bool,
    /// 6: labels change only at crossings and at `φ = 2π`.
    pub labels_change_at_crossings: bool,
    /// 7: each crossing is a legal BKL rewrite of the vertical reading.
    pub bkl_crossings: bool,
    /// 8: labels at `φ = 0` are those at `φ = 2π` plus one.
    pub edge_shift: bool,
    /// 9′: the `t = 0` row multiplies to `(1 n … 2)`.
    pub row: Vec<Transposition>,
    pub row_product_ok: bool,
    /// Literal row bullets, advisory.
    pub row_bullets: Option<Condition9Report>,
    /// Every sampled horizontal line meets the curves `n − 1` times.
    pub horizontal_count_ok: bool,
    /// Every vertical line meets the curves the same number of times.
    pub vertical_count: usize,
    pub vertical_count_ok: bool,
    pub failures: Vec<String>,
    pub normative_ok: bool,
}

/// A single pass of a curve over `φ ∈ [0, 2π]` in lifted `t`.
struct Strand {
    curve: usize,
    points: Vec<(f64, f64)>,
    labels: Vec<BandLetter>,
}

impl Strand {
    fn segment(&self, phi: f64, right: bool) -> usize {
        let k = self
            .points
            .windows(2)
            .position(|w| if right { phi < w[1].0 - TOL } else { phi <= w[1].0 + TOL })
            .unwrap_or(self.labels.len() - 1);
        if right {
            k
        } else {
            // Left side: the segment ending at or after `phi` and starting before it.
            let mut k = k;
            while k > 0 && self.points[k].0 >= phi - TOL {
                k -= 1;
            }
            k
        }
    }

    fn height(&self, phi: f64) -> f64 {
        for w in self.points.windows(2) {
            if phi <= w[1].0 + TOL {
                let span = w[1].0 - w[0].0;
                let s = if span > 0.0 { (phi - w[0].0) / span } else { 0.0 };
                return w[0].1 + s * (w[1].1 - w[0].1);
            }
        }
        self.points.last().expect("nonempty").1
    }

    fn slope(&self, k: usize) -> f64 {
        let (a, b) = (self.points[k], self.points[k + 1]);
        (b.1 - a.1) / (b.0 - a.0)
    }
}

fn near_multiple(x: f64, period: f64) -> bool {
    let r = x.rem_euclid(period);
    r < TOL || period - r < TOL
}

/// Checks the defining conditions of a Rampichini diagram.
pub fn validate_diagram(d: &Diagram) -> DiagramReport {
    let n = d.n;
    let mut r = DiagramReport {
        closed: true,
        monotone: true,
        simple_transverse: true,
        labelled: true,
        labels_change_at_crossings: true,
        bkl_crossings: true,
        edge_shift: true,
        horizontal_count_ok: true,
        vertical_count_ok: true,
        ..Default::default()
    };
    let fail = |r: &mut DiagramReport, msg: String| r.failures.push(msg);

    // 1, 2, 5 and the split into strands.
    let mut strands: Vec<Strand> = Vec::new();
    let mut curve_strands: Vec<Vec<usize>> = Vec::new();
    for (ci, c) in d.curves.iter().enumerate() {
        curve_strands.push(Vec::new());
        if c.points.len() < 2 || c.labels.len() + 1 != c.points.len() {
            r.closed = false;
            fail(&mut r, format!("curve {ci}: malformed polyline"));
            continue;
        }
        let (first, last) = (c.points[0], *c.points.last().expect("nonempty"));
        let dphi = last.0 - first.0;
        let dt = last.1 - first.1;
        if !near_multiple(first.0, TAU)
            || dphi < TAU - TOL
            || !near_multiple(dphi, TAU)
            || (dt - dt.round()).abs() > TOL
        {
            r.closed = false;
            fail(&mut r, format!("curve {ci}: not closed on the torus"));
            continue;
        }
        if c.sign != 1 && c.sign != -1 {
            r.monotone = false;
            fail(&mut r, format!("curve {ci}: slope sign {}", c.sign));
        }
        for (k, w) in c.points.windows(2).enumerate() {
            let (dp, dtk) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            if dp <= 0.0 || dtk == 0.0 || dtk.signum() as i8 != c.sign {
                r.monotone = false;
                fail(&mut r, format!("curve {ci}: segment {k} not monotone with sign {}", c.sign));
            }
        }
        for (k, l) in c.labels.iter().enumerate() {
            if l.sign != c.sign || l.j > n || l.i == 0 || l.i >= l.j {
                r.labelled = false;
                fail(&mut r, format!("curve {ci}: segment {k} label {l} does not fit"));
            }
        }
        // Cut at the φ = 2π lines, which must be vertices.
        let turns = (dphi / TAU).round() as usize;
        let base = first.0;
        let mut idx = 0;
        for turn in 0..turns {
            let lo = base + TAU * turn as f64;
            let hi = lo + TAU;
            let start = idx;
            while idx + 1 < c.points.len() && c.points[idx + 1].0 < hi - TOL {
                idx += 1;
            }
            idx += 1;
            if idx >= c.points.len() || (c.points[idx].0 - hi).abs() > TOL {
                r.closed = false;
                fail(&mut r, format!("curve {ci}: no vertex on the φ = 2π line"));
                break;
            }
            let points = c.points[start..=idx].iter().map(|&(f, t)| (f - lo, t)).collect();
            let labels = c.labels[start..idx].to_vec();
            curve_strands[ci].push(strands.len());
            strands.push(Strand {
                curve: ci,
                points,
                labels,
            });
        }
    }
    if !(r.closed && r.monotone && r.labelled) {
        r.normative_ok = false;
        return r;
    }

    // 8: label shift across the gluing line.
    for (ci, ids) in curve_strands.iter().enumerate() {
        for (k, &a) in ids.iter().enumerate() {
            let b = ids[(k + 1) % ids.len()];
            let out = *strands[a].labels.last().expect("nonempty");
            let inn = strands[b].labels[0];
            if inn != shift_letter(out, n, 1) {
                r.edge_shift = false;
                fail(&mut r, format!("curve {ci}: {out} at φ = 2π continues as {inn} at φ = 0"));
            }
        }
    }

    // Vertical lines: one point per strand.
    r.vertical_count = strands.len();
    if r.vertical_count != d.letters {
        r.vertical_count_ok = false;
        fail(&mut r, format!("{} strands for {} letters", strands.len(), d.letters));
    }

    // 3 and horizontal lines.
    let level_hits = |t0: f64, row: &mut Vec<(f64, BandLetter)>| {
        let mut count = 0;
        for s in &strands {
            for (k, w) in s.points.windows(2).enumerate() {
                let (a, b) = (w[0], w[1]);
                let (lo, hi) = (a.1.min(b.1), a.1.max(b.1));
                // Half-open in the direction of travel.
                let mut m = (lo - t0).ceil();
                while t0 + m <= hi {
                    let y = t0 + m;
                    let hit = if b.1 > a.1 { y > a.1 && y <= b.1 } else { y < a.1 && y >= b.1 };
                    if hit {
                        count += 1;
                        let lam = (y - a.1) / (b.1 - a.1);
                        row.push((a.0 + lam * (b.0 - a.0), s.labels[k]));
                    }
                    m += 1.0;
                }
            }
        }
        count
    };
    let mut row = Vec::new();
    r.edge_crossings = level_hits(0.0, &mut row);
    r.edge_count_ok = r.edge_crossings + 1 == n;
    if !r.edge_count_ok {
        let msg = format!(
            "{} crossings of the t = 0 edge, expected {}",
            r.edge_crossings,
            n.saturating_sub(1)
        );
        fail(&mut r, msg);
    }
    for k in 0..64 {
        let t0 = (0.5 + k as f64 * 0.618_033_988_749_895).fract();
        let hits = level_hits(t0, &mut Vec::new());
        if hits + 1 != n {
            r.horizontal_count_ok = false;
            fail(&mut r, format!("horizontal line t = {t0:.4} meets {hits} points"));
            break;
        }
    }
    row.sort_by(|a, b| a.0.total_cmp(&b.0));
    r.row = row
        .iter()
        .map(|&(_, l)| Transposition::new(l.i, l.j).expect("checked label"))
        .collect();
    r.row_product_ok = r.edge_count_ok && product(n, &r.row) == Permutation::descending_cycle(n);
    if !r.row_product_ok {
        fail(&mut r, "t = 0 row does not multiply to (1 n ... 2)".into());
    }
    if !r.row.is_empty() {
        r.row_bullets = Some(condition9(n, &r.row));
    }

    // 4 and 7: pairwise crossings between strands.
    let mut found: Vec<(f64, f64, usize, usize)> = Vec::new();
    for a in 0..strands.len() {
        for b in a + 1..strands.len() {
            let (sa, sb) = (&strands[a], &strands[b]);
            let mut cuts: Vec<f64> = sa.points.iter().chain(&sb.points).map(|p| p.0).collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|x, y| (*x - *y).abs() < TOL);
            let diff = |phi: f64| sa.height(phi) - sb.height(phi);
            for w in cuts.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let (dl, dh) = (diff(lo), diff(hi));
                let (mlo, mhi) = (dl.min(dh).floor() as i64, dl.max(dh).ceil() as i64);
                for m in mlo..=mhi {
                    let (el, eh) = (dl - m as f64, dh - m as f64);
                    let root = if el.abs() <= TOL && eh.abs() <= TOL {
                        r.simple_transverse = false;
                        fail(&mut r, format!("strands {a} and {b} overlap near φ = {lo:.4}"));
                        continue;
                    } else if el.abs() <= TOL {
                        continue;
                    } else if eh.abs() <= TOL {
                        hi
                    } else if el.signum() != eh.signum() {
                        lo + (hi - lo) * el / (el - eh)
                    } else {
                        continue;
                    };
                    if root > TAU - TOL {
                        r.labels_change_at_crossings = false;
                        fail(&mut r, format!("strands {a} and {b} cross on the φ = 0 line"));
                        continue;
                    }
                    let t = sa.height(root).rem_euclid(1.0);
                    if t < TOL || 1.0 - t < TOL {
                        r.simple_transverse = false;
                        fail(&mut r, format!("strands {a} and {b} cross on the t = 0 edge"));
                    }
                    let (ka, kb) = (sa.segment(root, false), sb.segment(root, false));
                    let (ra, rb) = (sa.segment(root, true), sb.segment(root, true));
                    let (sl, sr) = (sa.slope(ka) - sb.slope(kb), sa.slope(ra) - sb.slope(rb));
                    if sl.abs() < TOL || sr.abs() < TOL || sl.signum() != sr.signum() {
                        r.simple_transverse = false;
                        fail(&mut r, format!("strands {a} and {b} touch at φ = {root:.4}"));
                        continue;
                    }
                    // Before the crossing, the strand with the smaller relative slope is above.
                    let (ua, la) = (sa.labels[ka], sb.labels[kb]);
                    let (ua2, la2) = (sa.labels[ra], sb.labels[rb]);
                    let (before, after) = if sl > 0.0 {
                        ((la, ua), (ua2, la2))
                    } else {
                        ((ua, la), (la2, ua2))
                    };
                    let legal = !(before.0.is_positive() && !before.1.is_positive())
                        && pair_rewrites(before.0, before.1)
                            .iter()
                            .any(|rw| (rw.left, rw.right) == after);
                    if !legal {
                        r.bkl_crossings = false;
                        fail(
                            &mut r,
                            format!(
                                "crossing at φ = {root:.4}: {} {} -> {} {} is not a BKL rewrite",
                                before.0, before.1, after.0, after.1
                            ),
                        );
                    }
                    found.push((root, t, a, b));
                }
            }
        }
    }
    r.crossings = found.len();
    for (i, x) in found.iter().enumerate() {
        for y in &found[i + 1..] {
            if (x.0 - y.0).abs() < 1e-7 && (x.1 - y.1).abs() < 1e-7 {
                r.simple_transverse = false;
                fail(&mut r, format!("multiple point at φ = {:.4}", x.0));
            }
        }
    }

    // 6: label changes inside a pass happen only at crossings of that strand.
    for (si, s) in strands.iter().enumerate() {
        for k in 1..s.labels.len() {
            if s.labels[k] == s.labels[k - 1] {
                continue;
            }
            let phi = s.points[k].0;
            let at_crossing = found
                .iter()
                .any(|&(f, _, a, b)| (a == si || b == si) && (f - phi).abs() < 1e-7);
            if !at_crossing {
                r.labels_change_at_crossings = false;
                fail(
                    &mut r,
                    format!("curve {}: label changes away from a crossing at φ = {phi:.4}", s.curve),
                );
            }
        }
    }

    r.normative_ok = r.closed
        && r.monotone
        && r.edge_count_ok
        && r.simple_transverse
        && r.labelled
        && r.labels_change_at_crossings
        && r.bkl_crossings
        && r.edge_shift
        && r.row_product_ok
        && r.horizontal_count_ok
        && r.vertical_count_ok;
    r
}
