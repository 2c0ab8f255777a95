//! Cacti of simple branched covers of the disk.
//!
//! A cactus of degree `n` is a list of transpositions whose left-to-right
//! product is `(1 n n−1 … 3 2)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::braid::Permutation;
use crate::error::{Error, Result};

/// Largest degree accepted by [`enumerate_cacti`].
pub const MAX_ENUMERATION_DEGREE: usize = 7;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Transposition {
    pub k: usize,
    pub l: usize,
}

impl Transposition {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b || a == 0 || b == 0 {
            return Err(Error::InvalidInput(format!("bad transposition ({a} {b})")));
        }
        Ok(Transposition {
            k: a.min(b),
            l: a.max(b),
        })
    }

    pub fn permutation(self, n: usize) -> Permutation {
        Permutation::transposition(n, self.k, self.l)
    }

    /// `σ τ σ⁻¹` for a transposition `σ`: relabel the points through `σ`.
    pub fn conjugated_by(self, s: Transposition) -> Transposition {
        let f = |x: usize| {
            if x == s.k {
                s.l
            } else if x == s.l {
                s.k
            } else {
                x
            }
        };
        let (a, b) = (f(self.k), f(self.l));
        Transposition {
            k: a.min(b),
            l: a.max(b),
        }
    }

    /// Indices shifted by `d` modulo `n`.
    pub fn shifted(self, d: i64, n: usize) -> Transposition {
        let sh = |x: usize| ((x as i64 - 1 + d).rem_euclid(n as i64) + 1) as usize;
        let (a, b) = (sh(self.k), sh(self.l));
        Transposition {
            k: a.min(b),
            l: a.max(b),
        }
    }

    fn contains(self, x: usize) -> bool {
        self.k == x || self.l == x
    }
}

impl From<Transposition> for [usize; 2] {
    fn from(t: Transposition) -> Self {
        [t.k, t.l]
    }
}

impl TryFrom<[usize; 2]> for Transposition {
    type Error = Error;
    fn try_from([a, b]: [usize; 2]) -> Result<Self> {
        Transposition::new(a, b)
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.k, self.l)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Cactus {
    pub n: usize,
    pub taus: Vec<Transposition>,
}

impl Cactus {
    pub fn new(n: usize, taus: Vec<Transposition>) -> Result<Self> {
        if let Some(t) = taus.iter().find(|t| t.l > n) {
            return Err(Error::InvalidInput(format!("{t} is not on 1..{n}")));
        }
        Ok(Cactus { n, taus })
    }

    pub fn product(&self) -> Permutation {
        product(self.n, &self.taus)
    }
}

impl FromStr for Cactus {
    type Err = Error;

    /// Accepts `n=4; (1,2) (3,4) (2,4)` or `{"n":4,"taus":[[1,2],[3,4],[2,4]]}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let c: Cactus = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return Cactus::new(c.n, c.taus).map_err(|e| Error::Parse(e.to_string()));
        }
        let (n, body) = crate::braid::split_header(s)?;
        let n = n.ok_or_else(|| Error::Parse("cactus needs an `n=<int>;` header".into()))?;
        let mut taus = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Parse(format!("expected `(k,l)` at `{rest}`")))?;
            let (pair, tail) = inner;
            let nums: Vec<usize> = pair
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad index `{t}`"))))
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::Parse(format!("`({pair})` is not a transposition")));
            }
            taus.push(Transposition::new(nums[0], nums[1]).map_err(|e| Error::Parse(e.to_string()))?);
            rest = tail.trim_start();
        }
        Cactus::new(n, taus).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Cactus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        for t in &self.taus {
            write!(f, " ({},{})", t.k, t.l)?;
        }
        Ok(())
    }
}

pub fn product(n: usize, taus: &[Transposition]) -> Permutation {
    taus.iter()
        .fold(Permutation::identity(n), |acc, t| acc.then(&t.permutation(n)))
}

pub fn validate_cactus(c: &Cactus) -> bool {
    c.taus.iter().all(|t| t.l <= c.n) && c.product() == Permutation::descending_cycle(c.n)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HurwitzDir {
    /// `(τ_i, τ_{i+1}) ↦ (τ_{i+1}, τ_{i+1} τ_i τ_{i+1}⁻¹)`.
    Under,
    /// `(τ_i, τ_{i+1}) ↦ (τ_i⁻¹ τ_{i+1} τ_i, τ_i)`.
    Over,
}

/// Hurwitz move at the 1-based position `i`, acting on entries `i` and `i+1`.
pub fn hurwitz_move(c: &Cactus, i: usize, dir: HurwitzDir) -> Result<Cactus> {
    if i == 0 || i >= c.taus.len() {
        return Err(Error::PositionOutOfRange {
            pos: i,
            len: c.taus.len(),
        });
    }
    let (a, b) = (c.taus[i - 1], c.taus[i]);
    let (x, y) = match dir {
        HurwitzDir::Under => (b, a.conjugated_by(b)),
        HurwitzDir::Over => (b.conjugated_by(a), a),
    };
    let mut taus = c.taus.clone();
    taus[i - 1] = x;
    taus[i] = y;
    Ok(Cactus { n: c.n, taus })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotateDir {
    Forward,
    Backward,
}

/// Forward: the last `(i j)` moves to the front as `(i+1 j+1)` mod n.
/// Backward undoes it.
pub fn boundary_rotate(c: &Cactus, dir: RotateDir) -> Result<Cactus> {
    if c.taus.is_empty() {
        return Err(Error::EmptyCactus);
    }
    let mut taus = c.taus.clone();
    match dir {
        RotateDir::Forward => {
            let last = taus.pop().expect("nonempty");
            taus.insert(0, last.shifted(1, c.n));
        }
        RotateDir::Backward => {
            let first = taus.remove(0);
            taus.push(first.shifted(-1, c.n));
        }
    }
    Ok(Cactus { n: c.n, taus })
}

/// All transpositions on `{1,…,n}` in lexicographic order.
pub fn all_transpositions(n: usize) -> Vec<Transposition> {
    let mut out = Vec::new();
    for k in 1..=n {
        for l in k + 1..=n {
            out.push(Transposition { k, l });
        }
    }
    out
}

/// Every `(n−1)`-tuple of transpositions with product `(1 n … 2)`, in
/// lexicographic order. Exhaustive over all tuples.
pub fn enumerate_cacti(n: usize) -> Result<Vec<Cactus>> {
    let mut out = Vec::new();
    for_each_cactus(n, |taus| out.push(Cactus { n, taus: taus.to_vec() }))?;
    Ok(out)
}

/// Number of cacti of degree `n`, without materializing them.
pub fn count_cacti(n: usize) -> Result<u64> {
    let mut count = 0u64;
    for_each_cactus(n, |_| count += 1)?;
    Ok(count)
}

fn for_each_cactus(n: usize, mut f: impl FnMut(&[Transposition])) -> Result<()> {
    if !(2..=MAX_ENUMERATION_DEGREE).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    let ts = all_transpositions(n);
    let perms: Vec<Permutation> = ts.iter().map(|t| t.permutation(n)).collect();
    let target = Permutation::descending_cycle(n);
    let len = n - 1;
    let mut idx = vec![0usize; len];
    let mut prefix: Vec<Permutation> = vec![Permutation::identity(n); len + 1];
    let mut taus = vec![ts[0]; len];
    // Odometer over all tuples, keeping prefix products.
    let mut depth = 0;
    loop {
        if depth == len {
            if prefix[len] == target {
                f(&taus);
            }
            loop {
                if depth == 0 {
                    return Ok(());
                }
                depth -= 1;
                idx[depth] += 1;
                if idx[depth] < ts.len() {
                    break;
                }
                idx[depth] = 0;
            }
        }
        taus[depth] = ts[idx[depth]];
        prefix[depth + 1] = prefix[depth].then(&perms[idx[depth]]);
        depth += 1;
    }
}

/// Edges of the transposition graph and whether it is a spanning tree.
pub fn transposition_graph(c: &Cactus) -> (Vec<(usize, usize)>, bool) {
    let edges: Vec<(usize, usize)> = c.taus.iter().map(|t| (t.k, t.l)).collect();
    let mut parent: Vec<usize> = (0..=c.n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut acyclic = true;
    for &(a, b) in &edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            acyclic = false;
        } else {
            parent[ra] = rb;
        }
    }
    let tree = acyclic && edges.len() + 1 == c.n;
    (edges, tree)
}

/// A bullet-3 finding: `first = (i j)` appears before `second = (i k)` with
/// `k` strictly between `i` and `j` in the cyclic order starting at `i`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OrderedFinding {
    pub first: usize,
    pub second: usize,
    pub shared: usize,
    /// Also a violation when `i < k < j` is read in the ordinary linear order.
    pub linear: bool,
}

/// The literal bullets of condition 9 (advisory) and the product condition 9′.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Condition9Report {
    /// 1-based position pairs holding equal transpositions.
    pub repeated: Vec<(usize, usize)>,
    /// 1-based position pairs holding interlaced transpositions.
    pub interlaced: Vec<(usize, usize)>,
    pub ordered_violation: Vec<OrderedFinding>,
    pub product_ok: bool,
}

impl Condition9Report {
    pub fn bullets_ok(&self) -> bool {
        self.repeated.is_empty() && self.interlaced.is_empty() && self.ordered_violation.is_empty()
    }
}

fn cyclically_between(n: usize, start: usize, mid: usize, end: usize) -> bool {
    let d = |x: usize| (x + n - start) % n;
    d(mid) > 0 && d(mid) < d(end)
}

pub fn condition9(n: usize, taus: &[Transposition]) -> Condition9Report {
    let mut repeated = Vec::new();
    let mut interlaced = Vec::new();
    let mut ordered_violation = Vec::new();
    for a in 0..taus.len() {
        for b in a + 1..taus.len() {
            let (s, t) = (taus[a], taus[b]);
            if s == t {
                repeated.push((a + 1, b + 1));
                continue;
            }
            let prod = (s.k as i64 - t.k as i64)
                * (s.k as i64 - t.l as i64)
                * (s.l as i64 - t.k as i64)
                * (s.l as i64 - t.l as i64);
            if prod < 0 {
                interlaced.push((a + 1, b + 1));
            }
            let shared = [s.k, s.l].into_iter().find(|&x| t.contains(x));
            if let Some(i) = shared {
                let j = if s.k == i { s.l } else { s.k };
                let k = if t.k == i { t.l } else { t.k };
                if cyclically_between(n, i, k, j) {
                    ordered_violation.push(OrderedFinding {
                        first: a + 1,
                        second: b + 1,
                        shared: i,
                        linear: i < k && k < j,
                    });
                }
            }
        }
    }
    Condition9Report {
        repeated,
        interlaced,
        ordered_violation,
        product_ok: product(n, taus) == Permutation::descending_cycle(n),
    }
}

/// Counts over all `(n−1)`-tuples of transpositions comparing the literal
/// condition-9 bullets with the product condition.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Condition9Comparison {
    pub n: usize,
    pub tuples: u64,
    pub bullets_only: u64,
    pub product_only: u64,
    pub both: u64,
}

pub fn compare_condition9(n: usize) -> Result<Condition9Comparison> {
    if !(2..=5).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    let ts = all_transpositions(n);
    let len = n - 1;
    let mut cmp = Condition9Comparison {
        n,
        tuples: 0,
        bullets_only: 0,
        product_only: 0,
        both: 0,
    };
    let total = ts.len().pow(len as u32);
    let mut taus = vec![ts[0]; len];
    for mut code in 0..total {
        for slot in taus.iter_mut() {
            *slot = ts[code % ts.len()];
            code /= ts.len();
        }
        let r = condition9(n, &taus);
        cmp.tuples += 1;
        match (r.bullets_ok(), r.product_ok) {
            (true, true) => cmp.both += 1,
            (true, false) => cmp.bullets_only += 1,
            (false, true) => cmp.product_only += 1,
            _ => {}
        }
    }
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Cactus {
        s.parse().unwrap()
    }

    #[test]
    fn validity_fixtures() {
        assert!(validate_cactus(&c("n=4; (1,2) (3,4) (2,4)")));
        assert!(validate_cactus(&c("n=4; (1,2) (2,4) (2,3)")));
        assert!(!validate_cactus(&c("n=3; (1,2) (1,3)")));
    }

    #[test]
    fn parse_forms() {
        let a = c(r#"{"n":4,"taus":[[1,2],[3,4],[2,4]]}"#);
        assert_eq!(a, c("n=4; (1,2) (3,4) (2,4)"));
        assert_eq!(a.to_string(), "n=4; (1,2) (3,4) (2,4)");
        assert!("n=3; (1,4)".parse::<Cactus>().is_err());
        assert!("n=3; (1,2".parse::<Cactus>().is_err());
    }

    #[test]
    fn hurwitz_examples() {
        let a = c("n=4; (1,2) (3,4) (2,4)");
        assert_eq!(hurwitz_move(&a, 1, HurwitzDir::Under).unwrap(), c("n=4; (3,4) (1,2) (2,4)"));
        let b = c("n=4; (1,2) (2,4) (2,3)");
        assert_eq!(hurwitz_move(&b, 2, HurwitzDir::Under).unwrap(), c("n=4; (1,2) (2,3) (3,4)"));
        for i in 1..3 {
            let x = hurwitz_move(&b, i, HurwitzDir::Over).unwrap();
            assert_eq!(hurwitz_move(&x, i, HurwitzDir::Under).unwrap(), b);
        }
        assert!(hurwitz_move(&b, 3, HurwitzDir::Under).is_err());
        assert!(hurwitz_move(&b, 0, HurwitzDir::Under).is_err());
    }

    #[test]
    fn rotation_examples() {
        let a = c("n=4; (1,2) (3,4) (2,4)");
        let f = boundary_rotate(&a, RotateDir::Forward).unwrap();
        assert_eq!(f, c("n=4; (1,3) (1,2) (3,4)"));
        assert!(validate_cactus(&f));
        assert_eq!(boundary_rotate(&f, RotateDir::Backward).unwrap(), a);
        let mut x = a.clone();
        for _ in 0..a.n * a.taus.len() {
            x = boundary_rotate(&x, RotateDir::Forward).unwrap();
        }
        assert_eq!(x, a);
        assert!(boundary_rotate(&Cactus::new(2, vec![]).unwrap(), RotateDir::Forward).is_err());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_cacti(2).unwrap(), vec![c("n=2; (1,2)")]);
        let three = enumerate_cacti(3).unwrap();
        assert_eq!(
            three,
            vec![c("n=3; (1,2) (2,3)"), c("n=3; (1,3) (1,2)"), c("n=3; (2,3) (1,3)")]
        );
        assert_eq!(count_cacti(4).unwrap(), 16);
        assert!(enumerate_cacti(1).is_err());
        assert!(enumerate_cacti(8).is_err());
    }

    #[test]
    fn graph_examples() {
        let (edges, tree) = transposition_graph(&c("n=4; (1,2) (3,4) (2,4)"));
        assert_eq!(edges, vec![(1, 2), (3, 4), (2, 4)]);
        assert!(tree);
        assert!(transposition_graph(&c("n=5; (1,2) (2,3) (3,4) (4,5)")).1);
        assert!(!transposition_graph(&c("n=4; (1,2) (1,2) (3,4)")).1);
    }

    #[test]
    fn condition9_examples() {
        let r = condition9(4, &c("n=4; (1,2) (2,4) (2,3)").taus);
        assert!(r.product_ok);
        assert!(r
            .ordered_violation
            .iter()
            .any(|f| (f.first, f.second, f.shared, f.linear) == (2, 3, 2, true)));
        let r = condition9(4, &c("n=4; (1,2) (1,2) (3,4)").taus);
        assert_eq!(r.repeated, vec![(1, 2)]);
        let r = condition9(4, &c("n=4; (1,3) (2,4) (1,2)").taus);
        assert_eq!(r.interlaced, vec![(1, 2)]);
    }

    #[test]
    fn comparison_runs() {
        let cmp = compare_condition9(3).unwrap();
        assert_eq!(cmp.tuples, 9);
        assert_eq!(cmp.both + cmp.product_only, 3);
    }
}
