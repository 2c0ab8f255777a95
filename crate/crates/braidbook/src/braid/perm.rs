use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{1, …, n}`.
///
/// Products are evaluated left to right: `p.then(&q)` applies `p` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// The transposition `(a b)`, 1-based.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    /// Builds a permutation from one-line notation with 1-based images.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidInput(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[v - 1] = true;
            out.push(v - 1);
        }
        Ok(Permutation { images: out })
    }

    /// The cycle `(c_1 c_2 … c_k)` on `{1, …, n}`.
    pub fn from_cycle(n: usize, cycle: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for w in 0..cycle.len() {
            let from = cycle[w];
            let to = cycle[(w + 1) % cycle.len()];
            p.images[from - 1] = to - 1;
        }
        p
    }

    /// The n-cycle `(1 n n−1 … 3 2)`.
    pub fn descending_cycle(n: usize) -> Self {
        let mut cycle = vec![1];
        cycle.extend((2..=n).rev());
        Self::from_cycle(n, &cycle)
    }

    /// The n-cycle `(1 2 … n)`.
    pub fn ascending_cycle(n: usize) -> Self {
        Self::from_cycle(n, &(1..=n).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// Left-to-right product: first `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// One-line notation, 1-based.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    /// All cycles including fixed points, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cycle.push(k + 1);
                k = self.images[k];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.one_line()
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::from_one_line(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_to_right_product() {
        let a = Permutation::transposition(3, 1, 2);
        let b = Permutation::transposition(3, 1, 3);
        // 1→2→2, 2→1→3, 3→3→1
        assert_eq!(a.then(&b), Permutation::from_cycle(3, &[1, 2, 3]));
    }

    #[test]
    fn descending_cycle_images() {
        let c = Permutation::descending_cycle(4);
        assert_eq!(c.one_line(), vec![4, 1, 2, 3]);
        assert_eq!(c.to_string(), "(1 4 3 2)");
        assert_eq!(Permutation::ascending_cycle(4).to_string(), "(1 2 3 4)");
    }

    #[test]
    fn inverse_and_cycles() {
        let p = Permutation::from_one_line(&[3, 1, 2, 4]).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.cycle_count(), 2);
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
    }
}
