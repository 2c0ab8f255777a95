//! Strict difference constraints on curve heights.
//!
//! Heights live in lifted `t` coordinates scaled so that one turn is `1`.
//! A weight `(a, strict)` on the edge `u → v` encodes `x_v − x_u ≤ a`, or
//! `< a` when strict. Composition adds the integers and keeps strictness if
//! either part is strict, which is exact for deciding feasibility.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Weight {
    pub a: i32,
    /// `0` for `≤`, `-1` for `<`; ordering then matches tightness.
    pub s: i8,
}

impl Weight {
    pub const ZERO: Weight = Weight { a: 0, s: 0 };

    pub fn le(a: i32) -> Self {
        Weight { a, s: 0 }
    }

    pub fn lt(a: i32) -> Self {
        Weight { a, s: -1 }
    }

    fn add(self, o: Weight) -> Weight {
        Weight {
            a: self.a + o.a,
            s: self.s.min(o.s),
        }
    }

    fn negative(self) -> bool {
        self < Weight::ZERO
    }
}

/// A closed (all-pairs shortest path) constraint matrix; `None` is unbounded.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Closure {
    size: usize,
    m: Vec<Option<Weight>>,
}

impl Closure {
    pub fn new(size: usize) -> Self {
        let mut m = vec![None; size * size];
        for i in 0..size {
            m[i * size + i] = Some(Weight::ZERO);
        }
        Closure { size, m }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, u: usize, v: usize) -> Option<Weight> {
        self.m[u * self.size + v]
    }

    /// Adds `x_v − x_u ≤ w` (or `<`), keeping the tighter bound.
    pub fn constrain(&mut self, u: usize, v: usize, w: Weight) {
        let cell = &mut self.m[u * self.size + v];
        if cell.map_or(true, |c| w < c) {
            *cell = Some(w);
        }
    }

    /// Floyd–Warshall; returns false when a negative cycle exists.
    pub fn close(&mut self) -> bool {
        let n = self.size;
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = self.m[i * n + k] else { continue };
                for j in 0..n {
                    let Some(kj) = self.m[k * n + j] else { continue };
                    let s = ik.add(kj);
                    let cell = &mut self.m[i * n + j];
                    if cell.map_or(true, |c| s < c) {
                        *cell = Some(s);
                    }
                }
            }
        }
        (0..n).all(|i| !self.m[i * n + i].is_some_and(|w| w.negative()))
    }

    /// Restriction to the listed nodes, in that order.
    pub fn project(&self, keep: &[usize]) -> Closure {
        let k = keep.len();
        let mut m = Vec::with_capacity(k * k);
        for &u in keep {
            for &v in keep {
                m.push(self.get(u, v));
            }
        }
        Closure { size: k, m }
    }

    /// Copy with `extra` unconstrained nodes appended.
    pub fn extended(&self, extra: usize) -> Closure {
        let mut out = Closure::new(self.size + extra);
        for u in 0..self.size {
            for v in 0..self.size {
                out.m[u * out.size + v] = self.get(u, v);
            }
        }
        out
    }
}

/// How one slot moves across an event.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SlotMove {
    pub from: usize,
    pub to: usize,
    /// `+1` when the curve rises, `-1` when it falls.
    pub dir: i8,
    /// Turns added to the lifted height (`+1` over the top, `-1` under the bottom).
    pub wrap: i32,
}

/// Tracks the feasible heights of the slots at the start and at the current
/// step. Node 0 is the reference `t = 0`; slot 0 is the top of the line.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HeightState {
    len: usize,
    closure: Closure,
}

fn window(c: &mut Closure, base: usize, len: usize) {
    for s in 0..len {
        let v = base + s;
        c.constrain(v, 0, Weight::lt(0));
        c.constrain(0, v, Weight::lt(1));
        if s + 1 < len {
            // h_{s+1} < h_s
            c.constrain(v, v + 1, Weight::lt(0));
        }
    }
}

impl HeightState {
    pub fn new(len: usize) -> Self {
        let mut c = Closure::new(1 + 2 * len);
        window(&mut c, 1, len);
        window(&mut c, 1 + len, len);
        for s in 0..len {
            c.constrain(1 + s, 1 + len + s, Weight::ZERO);
            c.constrain(1 + len + s, 1 + s, Weight::ZERO);
        }
        let ok = c.close();
        debug_assert!(ok);
        HeightState { len, closure: c }
    }

    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    /// Applies one event; `None` when no monotone heights remain.
    pub fn step(&self, moves: &[SlotMove]) -> Option<HeightState> {
        let len = self.len;
        let mut c = self.closure.extended(len);
        let base = 1 + 2 * len;
        window(&mut c, base, len);
        for m in moves {
            let (u, v) = (1 + len + m.from, base + m.to);
            // dir > 0: h_new + wrap > h_old, i.e. x_u − x_v < wrap.
            if m.dir > 0 {
                c.constrain(v, u, Weight::lt(m.wrap));
            } else {
                c.constrain(u, v, Weight::lt(-m.wrap));
            }
        }
        if !c.close() {
            return None;
        }
        let keep: Vec<usize> = (0..=len).chain(base..base + len).collect();
        Some(HeightState {
            len,
            closure: c.project(&keep),
        })
    }

    /// True when the current heights can equal the initial ones slot by slot.
    pub fn closes(&self) -> bool {
        let len = self.len;
        let mut c = self.closure.clone();
        for s in 0..len {
            c.constrain(1 + s, 1 + len + s, Weight::ZERO);
            c.constrain(1 + len + s, 1 + s, Weight::ZERO);
        }
        c.close()
    }
}

/// Concrete heights for every step, `heights[k][s]` in `(0, 1)`, satisfying
/// all move constraints and the closing condition. `None` if infeasible.
pub fn solve_heights(len: usize, steps: &[Vec<SlotMove>]) -> Option<Vec<Vec<f64>>> {
    let k_steps = steps.len();
    let var = |k: usize, s: usize| 1 + k * len + s;
    let nodes = 1 + (k_steps + 1) * len;
    let mut edges: Vec<(usize, usize, Weight)> = Vec::new();
    for k in 0..=k_steps {
        for s in 0..len {
            let v = var(k, s);
            edges.push((v, 0, Weight::lt(0)));
            edges.push((0, v, Weight::lt(1)));
            if s + 1 < len {
                edges.push((v, v + 1, Weight::lt(0)));
            }
        }
    }
    for (k, moves) in steps.iter().enumerate() {
        for m in moves {
            let (u, v) = (var(k, m.from), var(k + 1, m.to));
            if m.dir > 0 {
                edges.push((v, u, Weight::lt(m.wrap)));
            } else {
                edges.push((u, v, Weight::lt(-m.wrap)));
            }
        }
    }
    for s in 0..len {
        edges.push((var(0, s), var(k_steps, s), Weight::ZERO));
        edges.push((var(k_steps, s), var(0, s), Weight::ZERO));
    }
    // Strict bounds become integer bounds on a grid finer than any simple cycle.
    let scale = nodes as i64 + 1;
    let w = |x: Weight| x.a as i64 * scale + x.s as i64;
    let upper = bellman_ford(nodes, edges.iter().map(|&(u, v, x)| (u, v, w(x))))?;
    let lower = bellman_ford(nodes, edges.iter().map(|&(u, v, x)| (v, u, w(x))))?;
    let mut out = vec![vec![0.0; len]; k_steps + 1];
    for (k, row) in out.iter_mut().enumerate() {
        for (s, h) in row.iter_mut().enumerate() {
            let v = var(k, s);
            *h = (upper[v] - lower[v]) as f64 / (2 * scale) as f64;
        }
    }
    Some(out)
}

/// Shortest distances from node 0; `None` on a negative cycle.
fn bellman_ford(nodes: usize, edges: impl Iterator<Item = (usize, usize, i64)>) -> Option<Vec<i64>> {
    let edges: Vec<_> = edges.collect();
    let mut d = vec![i64::MAX; nodes];
    d[0] = 0;
    for round in 0..=nodes {
        let mut changed = false;
        for &(u, v, w) in &edges {
            if d[u] != i64::MAX && d[u] + w < d[v] {
                d[v] = d[u] + w;
                changed = true;
            }
        }
        if !changed {
            return Some(d);
        }
        if round == nodes {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_cycle_is_infeasible() {
        let mut c = Closure::new(2);
        c.constrain(0, 1, Weight::lt(0));
        c.constrain(1, 0, Weight::le(0));
        assert!(!c.close());
        let mut c = Closure::new(2);
        c.constrain(0, 1, Weight::le(0));
        c.constrain(1, 0, Weight::le(0));
        assert!(c.close());
    }

    #[test]
    fn single_positive_wrap_closes() {
        // One rising curve passing over the top once.
        let st = HeightState::new(1);
        let next = st
            .step(&[SlotMove { from: 0, to: 0, dir: 1, wrap: 1 }])
            .unwrap();
        assert!(next.closes());
        let h = solve_heights(1, &[vec![SlotMove { from: 0, to: 0, dir: 1, wrap: 1 }]]).unwrap();
        assert!(h[0][0] > 0.0 && h[0][0] < 1.0);
        assert!((h[0][0] - h[1][0]).abs() < 1e-12);
    }

    #[test]
    fn rising_without_wrap_cannot_close() {
        let st = HeightState::new(1);
        let next = st.step(&[SlotMove { from: 0, to: 0, dir: 1, wrap: 0 }]).unwrap();
        assert!(!next.closes());
        assert!(solve_heights(1, &[vec![SlotMove { from: 0, to: 0, dir: 1, wrap: 0 }]]).is_none());
    }
}
