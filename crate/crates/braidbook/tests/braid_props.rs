use braidbook::braid::{
    band_to_artin, pair_rewrites, shift_indices, word_invariants, ArtinWord, BandLetter, BandWord,
    Permutation,
};
use proptest::prelude::*;

/// Decides triviality of an Artin word by handle reduction.
fn is_trivial(word: &[i32]) -> bool {
    let mut w = word.to_vec();
    loop {
        free_reduce(&mut w);
        let Some((p, q)) = innermost_handle(&w) else {
            return w.is_empty();
        };
        let i = w[p].abs();
        let e = w[p].signum();
        let mut out = w[..p].to_vec();
        for &k in &w[p + 1..q] {
            if k.abs() == i + 1 {
                out.extend([-e * (i + 1), k.signum() * i, e * (i + 1)]);
            } else {
                out.push(k);
            }
        }
        out.extend_from_slice(&w[q + 1..]);
        w = out;
    }
}

fn free_reduce(w: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &k in w.iter() {
        if out.last() == Some(&-k) {
            out.pop();
        } else {
            out.push(k);
        }
    }
    *w = out;
}

/// Shortest subword `σ_i^e v σ_i^{-e}` with every letter of `v` of index above `i`.
fn innermost_handle(w: &[i32]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for p in 0..w.len() {
        let i = w[p].abs();
        for q in p + 1..w.len() {
            let k = w[q].abs();
            if k < i {
                break;
            }
            if k == i {
                if w[q] == -w[p] && best.map_or(true, |(a, b)| q - p < b - a) {
                    best = Some((p, q));
                }
                break;
            }
        }
    }
    best
}

fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|k| -k).collect()
}

fn braid_eq(n: usize, a: &[BandLetter], b: &[BandLetter]) -> bool {
    let wa = band_to_artin(&BandWord::new(n, a.to_vec()).unwrap()).letters;
    let wb = band_to_artin(&BandWord::new(n, b.to_vec()).unwrap()).letters;
    let mut w = wa;
    w.extend(inverse(&wb));
    is_trivial(&w)
}

fn all_letters(n: usize) -> Vec<BandLetter> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(BandLetter::pos(i, j));
            out.push(BandLetter::neg(i, j));
        }
    }
    out
}

#[test]
fn oracle_sanity() {
    assert!(is_trivial(&[1, 2, 1, -2, -1, -2]));
    assert!(!is_trivial(&[1, 2, -1, -2]));
    assert!(is_trivial(&[1, 3, -1, -3]));
    assert!(!is_trivial(&[1]));
}

#[test]
fn rewrites_match_oracle_exhaustively() {
    for n in 2..=4 {
        let letters = all_letters(n);
        for &x in &letters {
            for &y in &letters {
                let rewrites = pair_rewrites(x, y);
                for r in &rewrites {
                    assert!(
                        braid_eq(n, &[x, y], &[r.left, r.right]),
                        "unsound rewrite ({x} {y}) -> ({} {})",
                        r.left,
                        r.right
                    );
                }
                for &c in &letters {
                    let left = (c, x) != (x, y) && braid_eq(n, &[x, y], &[c, x]);
                    let found = rewrites.iter().any(|r| (r.left, r.right) == (c, x));
                    assert_eq!(left, found, "left template ({x} {y}) -> ({c} {x}), n={n}");
                    let right = (y, c) != (x, y) && braid_eq(n, &[x, y], &[y, c]);
                    let found = rewrites.iter().any(|r| (r.left, r.right) == (y, c));
                    assert_eq!(right, found, "right template ({x} {y}) -> ({y} {c}), n={n}");
                }
            }
        }
    }
}

#[test]
fn interlaced_pairs_have_no_rewrite_and_no_single_letter_conjugate() {
    let (x, y) = (BandLetter::pos(1, 3), BandLetter::pos(2, 4));
    assert!(pair_rewrites(x, y).is_empty());
    for &c in &all_letters(4) {
        assert!(!braid_eq(4, &[x, y], &[c, x]));
    }
}

fn letter(n: usize) -> impl Strategy<Value = BandLetter> {
    (1..=n, 1..=n, prop::bool::ANY)
        .prop_filter("distinct strands", |(a, b, _)| a != b)
        .prop_map(|(a, b, s)| BandLetter::new(a, b, if s { 1 } else { -1 }).unwrap())
}

fn word(max_n: usize, max_len: usize) -> impl Strategy<Value = BandWord> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(letter(n), 0..=max_len)
            .prop_map(move |letters| BandWord::new(n, letters).unwrap())
    })
}

/// Closure components by following strands through the Artin word.
fn traced_components(a: &ArtinWord) -> usize {
    let n = a.n;
    let mut pos: Vec<usize> = (0..n).collect();
    for &k in &a.letters {
        let k = k.unsigned_abs() as usize;
        for p in pos.iter_mut() {
            if *p == k - 1 {
                *p = k;
            } else if *p == k {
                *p = k - 1;
            }
        }
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if !seen[s] {
            count += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = pos[x];
            }
        }
    }
    count
}

proptest! {
    #[test]
    fn rewrites_preserve_product_and_exponent(n in 2usize..=6, seed in any::<u64>()) {
        let letters = all_letters(n);
        let x = letters[(seed as usize) % letters.len()];
        let y = letters[((seed >> 20) as usize) % letters.len()];
        let before = BandWord::new(n, vec![x, y]).unwrap();
        for r in pair_rewrites(x, y) {
            let after = BandWord::new(n, vec![r.left, r.right]).unwrap();
            prop_assert_eq!(after.permutation(), before.permutation());
            prop_assert_eq!(after.exponent_sum(), before.exponent_sum());
        }
    }

    #[test]
    fn artin_expansion_preserves_invariants(w in word(6, 8)) {
        let a = band_to_artin(&w);
        prop_assert_eq!(a.permutation(), w.permutation());
        prop_assert_eq!(a.exponent_sum(), w.exponent_sum());
    }

    #[test]
    fn shifts_compose(w in word(6, 8), a in -7i64..7, b in -7i64..7) {
        prop_assert_eq!(shift_indices(&shift_indices(&w, a), b), shift_indices(&w, a + b));
    }

    #[test]
    fn component_counts(w in word(6, 8)) {
        let (perm, stats) = word_invariants(&w);
        prop_assert_eq!(stats.components, traced_components(&band_to_artin(&w)));
        prop_assert_eq!(stats.components, perm.cycle_count());
        // Surface components are n minus the rank of a spanning forest of the letters.
        let mut forest = Permutation::identity(w.n).one_line();
        let mut rank = 0;
        for l in &w.letters {
            let (mut a, mut b) = (l.i, l.j);
            while forest[a - 1] != a { a = forest[a - 1]; }
            while forest[b - 1] != b { b = forest[b - 1]; }
            if a != b { forest[a - 1] = b; rank += 1; }
        }
        prop_assert_eq!(stats.surface_components, w.n - rank);
        prop_assert_eq!(stats.euler, w.n as i64 - w.len() as i64);
        prop_assert!(stats.betti1 >= 0);
    }

    #[test]
    fn rewrites_inside_words_are_braid_equal(w in word(3, 4), pos in 0usize..3) {
        prop_assume!(w.len() >= 2);
        let p = pos % (w.len() - 1);
        for r in pair_rewrites(w.letters[p], w.letters[p + 1]) {
            let mut v = w.letters.clone();
            v[p] = r.left;
            v[p + 1] = r.right;
            prop_assert!(braid_eq(w.n, &w.letters, &v));
        }
    }
}
