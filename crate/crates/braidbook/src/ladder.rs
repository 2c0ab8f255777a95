//! Ladder diagrams of banded surfaces and their over- and underpasses.
//!
//! Disk `x` is the vertical line `x`; rung `r` (the `r`-th letter, counted
//! from the bottom) is the horizontal line at height `r + 1` joining lines
//! `i < j`. Positions on a line are measured in half-rung steps, so rung `r`
//! sits at `2(r + 1)` and the gaps between rungs at odd positions.
//!
//! An overpass runs from the leftmost to the rightmost line. Its vertical
//! pieces never cross a rung and never contain the left endpoint of a rung,
//! except the rung it is about to traverse or has just traversed. Traversing a
//! rung left to right requires arriving in the direction of the rung's sign;
//! traversing it right to left requires leaving against the sign. An underpass
//! runs back from the rightmost line over rungs `(n−1,n), (n−2,n−1), …, (1,2)`
//! in that order. Both are simple and they share their endpoints.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::braid::{shift_indices, word_invariants, BandWord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Rung {
    pub left: usize,
    pub right: usize,
    pub sign: i8,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LadderDiagram {
    pub n: usize,
    /// Bottom to top.
    pub rungs: Vec<Rung>,
}

impl LadderDiagram {
    /// Height of rung `r` in half steps.
    pub fn height(r: usize) -> i64 {
        2 * (r as i64 + 1)
    }

    /// Highest position a path may use, one half step above the top rung.
    pub fn top(&self) -> i64 {
        2 * self.rungs.len() as i64 + 1
    }

    fn rung_at(&self, y: i64) -> Option<usize> {
        (y % 2 == 0 && y >= 2 && y <= 2 * self.rungs.len() as i64).then(|| (y / 2 - 1) as usize)
    }
}

pub fn ladder_from_word(w: &BandWord) -> LadderDiagram {
    LadderDiagram {
        n: w.n,
        rungs: w
            .letters
            .iter()
            .map(|l| Rung {
                left: l.i,
                right: l.j,
                sign: l.sign,
            })
            .collect(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    /// A whole rung, `o = +1` when traversed left to right.
    Horizontal { rung: usize, o: i8 },
    /// A piece of line `strand` between two positions (half steps).
    Vertical { strand: usize, from: i64, to: i64 },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LadderPath {
    /// Starting point `(line, position)`.
    pub start: (usize, i64),
    /// Alternating horizontal and vertical segments; a constant first
    /// horizontal or last vertical segment is left out.
    pub segments: Vec<Segment>,
}

impl LadderPath {
    pub fn end(&self, d: &LadderDiagram) -> (usize, i64) {
        let mut p = self.start;
        for s in &self.segments {
            p = match *s {
                Segment::Horizontal { rung, o } => {
                    let r = d.rungs[rung];
                    let x = if o > 0 { r.right } else { r.left };
                    (x, LadderDiagram::height(rung))
                }
                Segment::Vertical { strand, to, .. } => (strand, to),
            };
        }
        p
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PassCertificate {
    pub overpass: LadderPath,
    pub underpass: LadderPath,
    /// Point on the leftmost line shared by both paths.
    pub left_end: (usize, i64),
    /// Point on the rightmost line shared by both paths.
    pub right_end: (usize, i64),
    /// The overpass starts along a rung, where the arrival direction has no
    /// preceding segment to refer to.
    pub v0_relaxed: bool,
}

/// Points of a path on the half-step grid, including where rungs pass lines.
/// Grid points visited by a path, as (line, half-step height).
pub fn path_points(d: &LadderDiagram, p: &LadderPath) -> Vec<(usize, i64)> {
    let mut pts = vec![p.start];
    for s in &p.segments {
        match *s {
            Segment::Horizontal { rung, o } => {
                let r = d.rungs[rung];
                let y = LadderDiagram::height(rung);
                let xs: Vec<usize> = if o > 0 {
                    (r.left + 1..=r.right).collect()
                } else {
                    (r.left..r.right).rev().collect()
                };
                pts.extend(xs.iter().map(|&x| (x, y)));
            }
            Segment::Vertical { strand, from, to } => {
                let step = if to > from { 1 } else { -1 };
                let mut y = from;
                while y != to {
                    y += step;
                    pts.push((strand, y));
                }
            }
        }
    }
    pts
}

fn forbidden_for_overpass(d: &LadderDiagram, x: usize, y: i64, allowed: &[usize]) -> bool {
    let Some(r) = d.rung_at(y) else { return false };
    if allowed.contains(&r) {
        return false;
    }
    let rung = d.rungs[r];
    (rung.left < x && x < rung.right) || rung.left == x
}

/// Bullet-by-bullet check of a certificate, independent of the search.
pub fn verify_certificate(d: &LadderDiagram, c: &PassCertificate) -> std::result::Result<(), String> {
    let n = d.n;
    let (g1, g2) = (&c.overpass, &c.underpass);
    // Endpoints.
    if g1.start != c.left_end || g2.end(d) != c.left_end || c.left_end.0 != 1 {
        return Err("overpass start / underpass end not the shared leftmost point".into());
    }
    if g2.start != c.right_end || g1.end(d) != c.right_end || c.right_end.0 != n {
        return Err("underpass start / overpass end not the shared rightmost point".into());
    }
    for (name, p) in [("overpass", g1), ("underpass", g2)] {
        // Alternation and continuity.
        let mut cur = p.start;
        let mut last_h: Option<bool> = None;
        for (k, s) in p.segments.iter().enumerate() {
            let is_h = matches!(s, Segment::Horizontal { .. });
            if last_h == Some(is_h) {
                return Err(format!("{name}: segments {k} and {} do not alternate", k - 1));
            }
            last_h = Some(is_h);
            match *s {
                Segment::Horizontal { rung, o } => {
                    let r = *d.rungs.get(rung).ok_or(format!("{name}: no rung {rung}"))?;
                    let y = LadderDiagram::height(rung);
                    let (from, to) = if o > 0 { (r.left, r.right) } else { (r.right, r.left) };
                    if o.abs() != 1 || cur != (from, y) {
                        return Err(format!("{name}: rung {rung} does not start at the current point"));
                    }
                    cur = (to, y);
                }
                Segment::Vertical { strand, from, to } => {
                    if cur != (strand, from) || from == to || to < 1 || to > d.top() {
                        return Err(format!("{name}: vertical segment {k} is not continuous"));
                    }
                    cur = (strand, to);
                }
            }
        }
        // Simplicity.
        let pts = path_points(d, p);
        let mut seen = HashSet::new();
        for q in &pts {
            if !seen.insert(*q) {
                return Err(format!("{name}: passes through {q:?} twice"));
            }
        }
    }
    // Overpass vertical segments and orientations.
    let segs = &g1.segments;
    let mut v0_used = false;
    for (k, s) in segs.iter().enumerate() {
        match *s {
            Segment::Vertical { strand, from, to } => {
                let mut adjacent = Vec::new();
                if let Some(Segment::Horizontal { rung, .. }) = k.checked_sub(1).map(|i| segs[i]) {
                    adjacent.push(rung);
                }
                if let Some(Segment::Horizontal { rung, .. }) = segs.get(k + 1) {
                    adjacent.push(*rung);
                }
                let (lo, hi) = (from.min(to), from.max(to));
                for y in lo..=hi {
                    if forbidden_for_overpass(d, strand, y, &adjacent) {
                        return Err(format!("overpass: vertical segment {k} meets a rung at {y}"));
                    }
                }
            }
            Segment::Horizontal { rung, o } => {
                let sign = d.rungs[rung].sign;
                let dir = |i: Option<usize>| match i.and_then(|i| segs.get(i)) {
                    Some(Segment::Vertical { from, to, .. }) => Some((to - from).signum() as i8),
                    _ => None,
                };
                if o > 0 {
                    match dir(k.checked_sub(1)) {
                        Some(v) if v == sign => {}
                        Some(_) => return Err(format!("overpass: arrival at rung {rung} against its sign")),
                        None => v0_used = true,
                    }
                } else if dir(Some(k + 1)) != Some(-sign) {
                    return Err(format!("overpass: departure from rung {rung} with its sign"));
                }
            }
        }
    }
    if v0_used && !c.v0_relaxed {
        return Err("overpass starts along a rung without recording the relaxation".into());
    }
    // Underpass rungs.
    let hs: Vec<usize> = g2
        .segments
        .iter()
        .filter_map(|s| match s {
            Segment::Horizontal { rung, .. } => Some(*rung),
            _ => None,
        })
        .collect();
    if hs.len() + 1 != n {
        return Err(format!("underpass has {} rungs, expected {}", hs.len(), n - 1));
    }
    for (i, &r) in hs.iter().enumerate() {
        let rung = d.rungs[r];
        if (rung.left, rung.right) != (n - i - 1, n - i) {
            return Err(format!("underpass rung {} is ({},{})", i + 1, rung.left, rung.right));
        }
    }
    Ok(())
}

struct OverpassSearch<'a> {
    d: &'a LadderDiagram,
    target: (usize, i64),
    relaxed: bool,
}

impl OverpassSearch<'_> {
    fn run(&self, start: (usize, i64)) -> Option<LadderPath> {
        let mut visited = HashSet::from([start]);
        let mut used = vec![false; self.d.rungs.len()];
        let mut segs = Vec::new();
        // Strict: the first horizontal segment is constant.
        if self.vertical(start, None, &[], &mut visited, &mut used, &mut segs) {
            return Some(LadderPath { start, segments: segs });
        }
        if self.relaxed {
            if let Some(r) = self.d.rung_at(start.1) {
                if self.d.rungs[r].left == start.0 {
                    segs.clear();
                    if self.rung(start, r, &mut visited, &mut used, &mut segs) {
                        return Some(LadderPath { start, segments: segs });
                    }
                }
            }
        }
        None
    }

    /// Continues with a vertical segment from `p`, then a rung or the target.
    fn vertical(
        &self,
        p: (usize, i64),
        need: Option<i8>,
        adjacent: &[usize],
        visited: &mut HashSet<(usize, i64)>,
        used: &mut [bool],
        segs: &mut Vec<Segment>,
    ) -> bool {
        let d = self.d;
        let (x, y) = p;
        if p == self.target && need.is_none() {
            return true;
        }
        if forbidden_for_overpass(d, x, y, adjacent) {
            return false;
        }
        for dir in [1i64, -1] {
            if need.is_some_and(|n| n as i64 != dir) {
                continue;
            }
            let mut path = Vec::new();
            let mut y2 = y;
            loop {
                y2 += dir;
                if y2 < 1 || y2 > d.top() || visited.contains(&(x, y2)) {
                    break;
                }
                path.push((x, y2));
                let rung_here = d.rung_at(y2).filter(|&r| {
                    let g = d.rungs[r];
                    !used[r] && (g.left == x || g.right == x)
                });
                if (x, y2) == self.target {
                    visited.extend(path.iter().copied());
                    segs.push(Segment::Vertical { strand: x, from: y, to: y2 });
                    return true;
                }
                if let Some(r) = rung_here {
                    let g = d.rungs[r];
                    let ok_dir = g.left != x || g.sign as i64 == dir;
                    if ok_dir {
                        visited.extend(path.iter().copied());
                        segs.push(Segment::Vertical { strand: x, from: y, to: y2 });
                        if self.rung((x, y2), r, visited, used, segs) {
                            return true;
                        }
                        segs.pop();
                        for q in &path {
                            visited.remove(q);
                        }
                    }
                }
                if forbidden_for_overpass(d, x, y2, &[]) {
                    break;
                }
            }
        }
        false
    }

    fn rung(
        &self,
        p: (usize, i64),
        r: usize,
        visited: &mut HashSet<(usize, i64)>,
        used: &mut [bool],
        segs: &mut Vec<Segment>,
    ) -> bool {
        let g = self.d.rungs[r];
        let (o, to) = if p.0 == g.left { (1i8, g.right) } else { (-1, g.left) };
        let xs: Vec<usize> = if o > 0 {
            (g.left + 1..=g.right).collect()
        } else {
            (g.left..g.right).rev().collect()
        };
        if xs.iter().any(|&x| visited.contains(&(x, p.1))) {
            return false;
        }
        visited.extend(xs.iter().map(|&x| (x, p.1)));
        used[r] = true;
        segs.push(Segment::Horizontal { rung: r, o });
        let need = (o < 0).then_some(-g.sign);
        let end = (to, p.1);
        let found = if end == self.target && need.is_none() {
            true
        } else {
            self.vertical(end, need, &[r], visited, used, segs)
        };
        if !found {
            segs.pop();
            used[r] = false;
            for &x in &xs {
                visited.remove(&(x, p.1));
            }
        }
        found
    }
}

/// All underpasses in canonical order: lowest rungs first, then the end
/// position on the leftmost line from the bottom up.
fn underpasses(d: &LadderDiagram) -> Vec<LadderPath> {
    let n = d.n;
    let by_pair = |a: usize| -> Vec<usize> {
        (0..d.rungs.len())
            .filter(|&r| (d.rungs[r].left, d.rungs[r].right) == (a, a + 1))
            .collect()
    };
    let choices: Vec<Vec<usize>> = (1..n).rev().map(by_pair).collect();
    if choices.iter().any(|c| c.is_empty()) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let rungs: Vec<usize> = pick.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
        let mut segs = Vec::new();
        for (i, &r) in rungs.iter().enumerate() {
            segs.push(Segment::Horizontal { rung: r, o: -1 });
            if let Some(&next) = rungs.get(i + 1) {
                let x = d.rungs[r].left;
                segs.push(Segment::Vertical {
                    strand: x,
                    from: LadderDiagram::height(r),
                    to: LadderDiagram::height(next),
                });
            }
        }
        let last = *rungs.last().expect("n >= 2");
        let y_last = LadderDiagram::height(last);
        for y_end in 1..=d.top() {
            let mut s = segs.clone();
            if y_end != y_last {
                s.push(Segment::Vertical {
                    strand: 1,
                    from: y_last,
                    to: y_end,
                });
            }
            out.push(LadderPath {
                start: (n, LadderDiagram::height(rungs[0])),
                segments: s,
            });
        }
        // Odometer over rung choices.
        let mut k = 0;
        loop {
            if k == pick.len() {
                return out;
            }
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Searches for an overpass and an underpass; certificates that need the
/// `v₀` relaxation are only returned when no other exists.
pub fn find_passes(d: &LadderDiagram) -> Option<PassCertificate> {
    let n = d.n;
    if n == 1 {
        let p = LadderPath {
            start: (1, 1),
            segments: vec![],
        };
        return Some(PassCertificate {
            overpass: p.clone(),
            underpass: p,
            left_end: (1, 1),
            right_end: (1, 1),
            v0_relaxed: false,
        });
    }
    let unders = underpasses(d);
    for relaxed in [false, true] {
        let mut memo: HashMap<((usize, i64), (usize, i64)), Option<LadderPath>> = HashMap::new();
        for u in &unders {
            if path_points(d, u).len() != path_points(d, u).iter().collect::<HashSet<_>>().len() {
                continue;
            }
            let (left, right) = (u.end(d), u.start);
            let over = memo
                .entry((left, right))
                .or_insert_with(|| {
                    OverpassSearch {
                        d,
                        target: right,
                        relaxed,
                    }
                    .run(left)
                })
                .clone();
            if let Some(o) = over {
                let v0_relaxed = matches!(o.segments.first(), Some(Segment::Horizontal { .. }));
                return Some(PassCertificate {
                    overpass: o,
                    underpass: u.clone(),
                    left_end: left,
                    right_end: right,
                    v0_relaxed,
                });
            }
        }
    }
    None
}

/// Every `a_{i,i+1}` and `a_{1,n}` occurs, with either sign.
pub fn sufficient_condition(w: &BandWord) -> bool {
    let n = w.n;
    let has = |a: usize, b: usize| w.letters.iter().any(|l| l.pair() == (a, b));
    n >= 2 && (1..n).all(|i| has(i, i + 1)) && has(1, n)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Braid3Certificate {
    /// Indices shifted by `−shift` modulo `n`.
    pub shift: usize,
    /// Cyclic rotation: the word starts at its `rotation`-th letter.
    pub rotation: usize,
    /// Exponents negated, which is the mirror for words in `a_{1,2}`, `a_{2,3}`.
    pub mirrored: bool,
    pub word: BandWord,
    pub passes: PassCertificate,
}

/// Finds a representative of `w`, or of its mirror, whose ladder has passes.
pub fn braid3_decide(w: &BandWord) -> Result<Option<Braid3Certificate>> {
    if w.n > 3 {
        return Err(Error::InvalidInput(format!("braid index procedure needs n <= 3, got {}", w.n)));
    }
    if !word_invariants(w).1.connected {
        return Err(Error::DisconnectedSurface);
    }
    let artin_only = |v: &BandWord| v.letters.iter().all(|l| l.j == l.i + 1);
    for shift in 0..w.n.max(1) {
        let shifted = shift_indices(w, -(shift as i64));
        for rotation in 0..w.len().max(1) {
            let mut rotated = shifted.letters.clone();
            let k = rotation.min(rotated.len());
            rotated.rotate_left(k);
            for mirrored in [false, true] {
                if mirrored && !artin_only(&shifted) {
                    continue;
                }
                let letters = if mirrored {
                    rotated.iter().map(|l| l.inverse()).collect()
                } else {
                    rotated.clone()
                };
                let word = BandWord { n: w.n, letters };
                if let Some(passes) = find_passes(&ladder_from_word(&word)) {
                    return Ok(Some(Braid3Certificate {
                        shift,
                        rotation,
                        mirrored,
                        word,
                        passes,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> BandWord {
        s.parse().unwrap()
    }

    #[test]
    fn ladder_of_word() {
        let d = ladder_from_word(&word("n=4; 3:4 -1:3 -2:3 2:4 3:4"));
        assert_eq!(d.rungs.len(), 5);
        let signs: Vec<i8> = d.rungs.iter().map(|r| r.sign).collect();
        assert_eq!(signs, vec![1, -1, -1, 1, 1]);
        assert!(ladder_from_word(&BandWord::empty(3)).rungs.is_empty());
    }

    #[test]
    fn single_rung_has_passes() {
        let d = ladder_from_word(&word("n=2; 1:2"));
        let c = find_passes(&d).unwrap();
        assert!(!c.v0_relaxed);
        verify_certificate(&d, &c).unwrap();
    }

    #[test]
    fn artin_pair_needs_positive_second_letter() {
        for s in ["n=3; 1:2 2:3", "n=3; -1:2 2:3"] {
            let d = ladder_from_word(&word(s));
            verify_certificate(&d, &find_passes(&d).unwrap()).unwrap();
        }
        assert!(find_passes(&ladder_from_word(&word("n=3; 1:2 -2:3"))).is_none());
    }

    #[test]
    fn sufficient_condition_examples() {
        assert!(sufficient_condition(&word("n=4; 1:2 2:3 3:4 -1:4")));
        assert!(!sufficient_condition(&word("n=3; 1:2 2:3")));
        assert!(!sufficient_condition(&word("n=4; 3:4 -1:3 -2:3 2:4 3:4")));
    }

    #[test]
    fn braid3_examples() {
        let c = braid3_decide(&word("n=3; 1:2 2:3 1:2 2:3")).unwrap().unwrap();
        assert_eq!((c.shift, c.rotation, c.mirrored), (0, 0, false));
        let c = braid3_decide(&word("n=3; -1:2 -2:3")).unwrap().unwrap();
        assert!(c.mirrored);
        assert_eq!(c.word, word("n=3; 1:2 2:3"));
        assert_eq!(
            braid3_decide(&word("n=3; 1:2 1:2")),
            Err(Error::DisconnectedSurface)
        );
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let d = ladder_from_word(&word("n=3; 1:2 2:3"));
        let mut c = find_passes(&d).unwrap();
        c.underpass.segments.reverse();
        assert!(verify_certificate(&d, &c).is_err());
    }
}
