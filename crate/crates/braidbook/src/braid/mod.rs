//! Band-generator braid words.
//!
//! A band letter `a_{i,j}` expands in Artin generators as
//! `σ_i σ_{i+1} … σ_{j−2} σ_{j−1}^{±1} σ_{j−2}^{-1} … σ_i^{-1}`.
//! With this expansion the three equal positive products on strands
//! `p < q < r` are `a_{p,q} a_{q,r} = a_{p,r} a_{p,q} = a_{q,r} a_{p,r}`.

mod perm;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use perm::Permutation;
pub(crate) use text::split_header;

/// A signed band generator `a_{i,j}^{±1}` with `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "(usize, usize, i8)", try_from = "(usize, usize, i8)")]
pub struct BandLetter {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

impl BandLetter {
    /// Builds `a_{a,b}^{sign}`, storing the pair in increasing order.
    pub fn new(a: usize, b: usize, sign: i8) -> Result<Self> {
        if a == b || a == 0 || b == 0 {
            return Err(Error::InvalidInput(format!("bad strand pair {a}:{b}")));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidInput(format!("sign must be ±1, got {sign}")));
        }
        Ok(BandLetter {
            i: a.min(b),
            j: a.max(b),
            sign,
        })
    }

    pub fn pos(a: usize, b: usize) -> Self {
        Self::new(a, b, 1).expect("valid strand pair")
    }

    pub fn neg(a: usize, b: usize) -> Self {
        Self::new(a, b, -1).expect("valid strand pair")
    }

    pub fn inverse(self) -> Self {
        BandLetter {
            sign: -self.sign,
            ..self
        }
    }

    pub fn is_positive(self) -> bool {
        self.sign > 0
    }

    pub fn pair(self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn transposition(self, n: usize) -> Permutation {
        Permutation::transposition(n, self.i, self.j)
    }
}

impl From<BandLetter> for (usize, usize, i8) {
    fn from(l: BandLetter) -> Self {
        (l.i, l.j, l.sign)
    }
}

impl TryFrom<(usize, usize, i8)> for BandLetter {
    type Error = Error;
    fn try_from((a, b, s): (usize, usize, i8)) -> Result<Self> {
        BandLetter::new(a, b, s)
    }
}

impl fmt::Display for BandLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let minus = if self.sign < 0 { "-" } else { "" };
        write!(f, "{minus}{}:{}", self.i, self.j)
    }
}

/// A word in band generators on `n` strands, read left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BandWord {
    pub n: usize,
    pub letters: Vec<BandLetter>,
}

impl BandWord {
    pub fn new(n: usize, letters: Vec<BandLetter>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("strand count must be positive".into()));
        }
        if let Some(l) = letters.iter().find(|l| l.j > n) {
            return Err(Error::InvalidInput(format!("letter {l} exceeds n={n}")));
        }
        Ok(BandWord { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        BandWord { n, letters: vec![] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Left-to-right product of the letters' transpositions.
    pub fn permutation(&self) -> Permutation {
        self.letters
            .iter()
            .fold(Permutation::identity(self.n), |acc, l| {
                acc.then(&l.transposition(self.n))
            })
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign as i64).sum()
    }
}

/// A word in Artin generators; entry `k` stands for `σ_{|k|}^{sign k}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ArtinWord {
    pub n: usize,
    pub letters: Vec<i32>,
}

impl ArtinWord {
    pub fn new(n: usize, letters: Vec<i32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("strand count must be positive".into()));
        }
        if let Some(&k) = letters
            .iter()
            .find(|&&k| k == 0 || k.unsigned_abs() as usize >= n)
        {
            return Err(Error::InvalidInput(format!(
                "generator {k} out of range for n={n}"
            )));
        }
        Ok(ArtinWord { n, letters })
    }

    pub fn permutation(&self) -> Permutation {
        self.letters
            .iter()
            .fold(Permutation::identity(self.n), |acc, &k| {
                let k = k.unsigned_abs() as usize;
                acc.then(&Permutation::transposition(self.n, k, k + 1))
            })
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&k| k.signum() as i64).sum()
    }
}

/// Euler characteristic and component data of the banded surface of a word.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SurfaceStats {
    pub euler: i64,
    /// Components of the closed braid.
    pub components: usize,
    /// True when the letters' transposition graph spans all strands.
    pub connected: bool,
    /// Components of the banded surface.
    pub surface_components: usize,
    /// First Betti number of the banded surface.
    pub betti1: i64,
    /// `max(0, 1 − euler + (components − 1))`, kept for comparison.
    pub betti1_formula: i64,
}

/// How two band letters sit relative to each other.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linking {
    /// Strand pairs interlace; no relation applies.
    Interlaced,
    /// Strand pairs are disjoint and nested or side by side; the letters commute.
    Separated,
    /// The pairs share a strand.
    Adjacent,
}

/// Which template produced a rewrite.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewriteVariant {
    /// `(x, y) ↦ (y, x)`.
    Commute,
    /// `(x, y) ↦ (x y x⁻¹, x)`.
    ConjugateLeft,
    /// `(x, y) ↦ (y, y⁻¹ x y)`.
    ConjugateRight,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Rewrite {
    pub left: BandLetter,
    pub right: BandLetter,
    pub variant: RewriteVariant,
}

pub fn band_to_artin(w: &BandWord) -> ArtinWord {
    let mut out = Vec::new();
    for l in &w.letters {
        let (i, j) = (l.i as i32, l.j as i32);
        out.extend(i..j - 1);
        out.push(l.sign as i32 * (j - 1));
        out.extend((i..j - 1).rev().map(|k| -k));
    }
    ArtinWord {
        n: w.n,
        letters: out,
    }
}

pub fn artin_to_band(w: &ArtinWord) -> BandWord {
    let letters = w
        .letters
        .iter()
        .map(|&k| {
            let a = k.unsigned_abs() as usize;
            BandLetter {
                i: a,
                j: a + 1,
                sign: k.signum() as i8,
            }
        })
        .collect();
    BandWord { n: w.n, letters }
}

pub fn word_invariants(w: &BandWord) -> (Permutation, SurfaceStats) {
    let perm = w.permutation();
    let components = perm.cycle_count();
    let euler = w.n as i64 - w.len() as i64;

    let mut parent: Vec<usize> = (0..w.n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    for l in &w.letters {
        let (a, b) = (find(&mut parent, l.i - 1), find(&mut parent, l.j - 1));
        if a != b {
            parent[a] = b;
        }
    }
    let surface_components = (0..w.n)
        .filter(|&x| find(&mut parent, x) == x)
        .count();

    let stats = SurfaceStats {
        euler,
        components,
        connected: surface_components == 1,
        surface_components,
        betti1: surface_components as i64 - euler,
        betti1_formula: (1 - euler + (components as i64 - 1)).max(0),
    };
    (perm, stats)
}

pub fn interlaced(p: BandLetter, q: BandLetter) -> Linking {
    let (i, j, k, m) = (p.i as i64, p.j as i64, q.i as i64, q.j as i64);
    let prod = (i - k) * (i - m) * (j - k) * (j - m);
    match prod.signum() {
        1 => Linking::Separated,
        -1 => Linking::Interlaced,
        _ => Linking::Adjacent,
    }
}

/// True when `a_P a_Q` is one of the three equal positive products on the
/// union of two adjacent pairs.
fn forward(p: (usize, usize), q: (usize, usize)) -> bool {
    let mut s = [p.0, p.1, q.0, q.1];
    s.sort_unstable();
    let (a, b, c) = match s {
        [a, b, c, d] if b == c => (a, b, d),
        [a, b, c, d] if a == b => (a, c, d),
        [a, b, c, d] if c == d => (a, b, c),
        _ => return false,
    };
    let fw = [((a, b), (b, c)), ((a, c), (a, b)), ((b, c), (a, c))];
    fw.contains(&(p, q))
}

/// The pair on the two strands not shared by adjacent pairs `p` and `q`.
fn third(p: (usize, usize), q: (usize, usize)) -> (usize, usize) {
    let mut v: Vec<usize> = [p.0, p.1, q.0, q.1]
        .into_iter()
        .filter(|&x| !(x == p.0 || x == p.1) || !(x == q.0 || x == q.1))
        .collect();
    v.sort_unstable();
    (v[0], v[1])
}

/// `x y x⁻¹` as a single letter, if it is one.
pub fn conjugate(x: BandLetter, y: BandLetter) -> Option<BandLetter> {
    if x.pair() == y.pair() {
        return Some(y);
    }
    match interlaced(x, y) {
        Linking::Separated => Some(y),
        Linking::Interlaced => None,
        Linking::Adjacent => {
            let ok = (x.is_positive() && forward(x.pair(), y.pair()))
                || (!x.is_positive() && forward(y.pair(), x.pair()));
            ok.then(|| {
                let (i, j) = third(x.pair(), y.pair());
                BandLetter { i, j, sign: y.sign }
            })
        }
    }
}

/// All single-letter rewrites `(x′, y′)` of the pair `(x, y)` with `x′y′ = xy`.
///
/// Canonical order: the left template first, then the right one; duplicates
/// and the identity are dropped.
pub fn pair_rewrites(x: BandLetter, y: BandLetter) -> Vec<Rewrite> {
    let mut out: Vec<Rewrite> = Vec::new();
    let mut push = |left: BandLetter, right: BandLetter, variant| {
        if (left, right) == (x, y) || out.iter().any(|r| (r.left, r.right) == (left, right)) {
            return;
        }
        let variant = if (left, right) == (y, x) {
            RewriteVariant::Commute
        } else {
            variant
        };
        out.push(Rewrite {
            left,
            right,
            variant,
        });
    };
    if let Some(c) = conjugate(x, y) {
        push(c, x, RewriteVariant::ConjugateLeft);
    }
    if let Some(c) = conjugate(y.inverse(), x) {
        push(y, c, RewriteVariant::ConjugateRight);
    }
    out
}

pub fn shift_indices(w: &BandWord, k: i64) -> BandWord {
    let n = w.n as i64;
    let sh = |i: usize| ((i as i64 - 1 + k).rem_euclid(n) + 1) as usize;
    let letters = w
        .letters
        .iter()
        .map(|l| {
            let (a, b) = (sh(l.i), sh(l.j));
            BandLetter {
                i: a.min(b),
                j: a.max(b),
                sign: l.sign,
            }
        })
        .collect();
    BandWord { n: w.n, letters }
}

pub fn cyclic_conjugates(w: &BandWord) -> Vec<BandWord> {
    if w.is_empty() {
        return vec![w.clone()];
    }
    (0..w.len())
        .map(|r| {
            let mut letters = w.letters[r..].to_vec();
            letters.extend_from_slice(&w.letters[..r]);
            BandWord { n: w.n, letters }
        })
        .collect()
}

pub fn mirror(w: &ArtinWord) -> ArtinWord {
    ArtinWord {
        n: w.n,
        letters: w.letters.iter().map(|k| -k).collect(),
    }
}

/// Mirror of a band word through the Artin round trip.
pub fn mirror_band(w: &BandWord) -> BandWord {
    artin_to_band(&mirror(&band_to_artin(w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BandWord {
        s.parse().unwrap()
    }

    #[test]
    fn expansion_examples() {
        let a25 = BandWord::new(5, vec![BandLetter::pos(2, 5)]).unwrap();
        assert_eq!(band_to_artin(&a25).letters, vec![2, 3, 4, -3, -2]);
        let a12 = BandWord::new(3, vec![BandLetter::neg(1, 2)]).unwrap();
        assert_eq!(band_to_artin(&a12).letters, vec![-1]);
        let morton = w("n=4; 1:3 2:3 2:4");
        assert_eq!(band_to_artin(&morton).letters, vec![1, 2, -1, 2, 2, 3, -2]);
    }

    #[test]
    fn artin_to_band_letterwise() {
        let a = ArtinWord::new(3, vec![1, -2]).unwrap();
        assert_eq!(artin_to_band(&a), w("n=3; 1:2 -2:3"));
        assert!(artin_to_band(&ArtinWord::new(3, vec![]).unwrap()).is_empty());
        assert_eq!(
            artin_to_band(&ArtinWord::new(2, vec![1, 1, 1]).unwrap()),
            w("n=2; 1:2 1:2 1:2")
        );
    }

    #[test]
    fn invariants_examples() {
        let (p, s) = word_invariants(&w("n=4; 1:3 2:3 2:4"));
        assert_eq!(p.to_string(), "(1 4 2 3)");
        assert_eq!((s.components, s.euler, s.connected), (1, 1, true));
        assert_eq!(s.betti1, 0);

        let (p, s) = word_invariants(&BandWord::empty(1));
        assert!(p.is_identity());
        assert_eq!((s.components, s.euler), (1, 1));

        let (_, s) = word_invariants(&w("n=3; 1:2"));
        assert_eq!(s.components, 2);
        assert!(!s.connected);
    }

    #[test]
    fn betti_of_trefoil_fiber() {
        let (_, s) = word_invariants(&w("n=2; 1:2 1:2 1:2"));
        assert_eq!((s.euler, s.betti1, s.components), (-1, 2, 1));
    }

    #[test]
    fn linking_states() {
        assert_eq!(interlaced(BandLetter::pos(1, 3), BandLetter::pos(2, 4)), Linking::Interlaced);
        assert_eq!(interlaced(BandLetter::pos(1, 2), BandLetter::pos(3, 4)), Linking::Separated);
        assert_eq!(interlaced(BandLetter::pos(1, 4), BandLetter::pos(2, 3)), Linking::Separated);
        assert_eq!(interlaced(BandLetter::pos(1, 2), BandLetter::pos(2, 3)), Linking::Adjacent);
    }

    #[test]
    fn rewrites_of_triangle() {
        let r = pair_rewrites(BandLetter::pos(1, 2), BandLetter::pos(2, 3));
        let pairs: Vec<_> = r.iter().map(|r| (r.left, r.right)).collect();
        assert_eq!(
            pairs,
            vec![
                (BandLetter::pos(1, 3), BandLetter::pos(1, 2)),
                (BandLetter::pos(2, 3), BandLetter::pos(1, 3)),
            ]
        );
        assert!(pair_rewrites(BandLetter::pos(2, 3), BandLetter::pos(1, 2)).is_empty());
    }

    #[test]
    fn rewrites_commuting_and_interlaced() {
        let r = pair_rewrites(BandLetter::pos(1, 2), BandLetter::pos(3, 4));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].variant, RewriteVariant::Commute);
        assert_eq!((r[0].left, r[0].right), (BandLetter::pos(3, 4), BandLetter::pos(1, 2)));
        assert!(pair_rewrites(BandLetter::pos(1, 3), BandLetter::pos(2, 4)).is_empty());
        assert!(pair_rewrites(BandLetter::pos(1, 3), BandLetter::pos(1, 3)).is_empty());
        let r = pair_rewrites(BandLetter::pos(1, 3), BandLetter::neg(1, 3));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn shift_examples() {
        let m = w("n=4; 1:3 2:3 2:4");
        assert_eq!(shift_indices(&m, -1), w("n=4; 2:4 1:2 1:3"));
        assert_eq!(shift_indices(&m, 0), m);
        assert_eq!(shift_indices(&m, 4), m);
    }

    #[test]
    fn conjugates_and_mirror() {
        let m = w("n=4; 1:3 2:3 2:4");
        let c = cyclic_conjugates(&m);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1], w("n=4; 2:3 2:4 1:3"));
        assert_eq!(cyclic_conjugates(&BandWord::empty(2)).len(), 1);
        let a = ArtinWord::new(3, vec![1, -2]).unwrap();
        assert_eq!(mirror(&a).letters, vec![-1, 2]);
        assert_eq!(mirror(&mirror(&a)), a);
        assert_eq!(mirror_band(&w("n=3; 1:2 -2:3")), w("n=3; -1:2 2:3"));
    }
}
