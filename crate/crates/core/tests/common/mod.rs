//! Shared helpers for the integration suites: corpus generation, seeded
//! random words and handle diagrams, and an independent exact nullspace
//! routine.

use num::{BigInt, BigRational, Signed, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use scl_core::word::reduced_word;
use scl_core::{CyclicWord, HandleDiagram, Letter};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every cyclically reduced word over {a, b} with vanishing exponent
/// sums, lengths 2..=max_len, in lexicographic order.
pub fn corpus(max_len: usize) -> Vec<String> {
    let alphabet = ['A', 'B', 'a', 'b'];
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for len in 2..=max_len {
        enumerate_words(&alphabet, len, &mut buf, &mut out);
    }
    out
}

fn enumerate_words(alphabet: &[char], len: usize, buf: &mut Vec<char>, out: &mut Vec<String>) {
    if buf.len() == len {
        let text: String = buf.iter().collect();
        if balanced(&text) && cyclically_reduced_text(&text) {
            out.push(text);
        }
        return;
    }
    for &c in alphabet {
        buf.push(c);
        enumerate_words(alphabet, len, buf, out);
        buf.pop();
    }
}

pub fn balanced(text: &str) -> bool {
    let count = |c: char| text.chars().filter(|&x| x == c).count();
    count('a') == count('A') && count('b') == count('B')
}

pub fn cyclically_reduced_text(text: &str) -> bool {
    let inv = |c: char| {
        if c.is_lowercase() {
            c.to_ascii_uppercase()
        } else {
            c.to_ascii_lowercase()
        }
    };
    let chars: Vec<char> = text.chars().collect();
    !chars.is_empty() && (0..chars.len()).all(|i| chars[(i + 1) % chars.len()] != inv(chars[i]))
}

/// Random cyclically reduced word of exactly the given length and rank
/// bound (exponent sums unconstrained).
pub fn random_reduced_word(rng: &mut ChaCha8Rng, len: usize, rank: u32) -> String {
    assert!(len >= 2 && rank >= 2);
    loop {
        let mut letters: Vec<char> = Vec::with_capacity(len);
        for i in 0..len {
            let choices: Vec<char> = all_letters(rank)
                .into_iter()
                .filter(|&c| {
                    (i == 0 || c != invert(letters[i - 1]))
                        && (i != len - 1 || c != invert(letters[0]))
                })
                .collect();
            letters.push(*choices.choose(rng).unwrap());
        }
        let text: String = letters.iter().collect();
        if cyclically_reduced_text(&text) {
            return text;
        }
    }
}

/// Random cyclically reduced word with vanishing exponent sums, by
/// rejection; lengths must be even.
pub fn random_balanced_word(rng: &mut ChaCha8Rng, len: usize, rank: u32) -> String {
    assert!(len.is_multiple_of(2));
    loop {
        let text = random_reduced_word(rng, len, rank);
        let (word, _) = reduced_word(&text).unwrap();
        if word.len() == len && scl_core::word::exponent_sums(&word).values().all(|&s| s == 0) {
            return text;
        }
    }
}

fn all_letters(rank: u32) -> Vec<char> {
    let mut v = Vec::new();
    for g in 0..rank {
        v.push((b'a' + g as u8) as char);
        v.push((b'A' + g as u8) as char);
    }
    v
}

fn invert(c: char) -> char {
    if c.is_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

/// Apply a generator renaming with optional inversion: generator g maps
/// to generator perm[g] (0-based), inverted when flip[g] is set.
pub fn rename_word(text: &str, perm: &[usize], flip: &[bool]) -> String {
    text.chars()
        .map(|c| {
            let lower = c.to_ascii_lowercase();
            let g = (lower as u8 - b'a') as usize;
            let target = (b'a' + perm[g] as u8) as char;
            let inverted = c.is_uppercase() ^ flip[g];
            if inverted {
                target.to_ascii_uppercase()
            } else {
                target
            }
        })
        .collect()
}

/// Seeded handle diagram over `word`: boundary circles realizing a random
/// partition of a random degree in `degrees`, with a random inverse-letter
/// matching.
pub fn random_handle_diagram(
    rng: &mut ChaCha8Rng,
    word: &CyclicWord,
    degrees: std::ops::RangeInclusive<u64>,
) -> HandleDiagram {
    let l = word.len();
    let n = rng.gen_range(degrees);
    let mut remaining = n;
    let mut parts: Vec<u64> = Vec::new();
    while remaining > 0 {
        let p = rng.gen_range(1..=remaining);
        parts.push(p);
        remaining -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));

    let mut positions: Vec<usize> = Vec::new();
    let mut succ: Vec<usize> = Vec::new();
    let mut base = 0usize;
    for &power in &parts {
        let size = power as usize * l;
        for t in 0..size {
            positions.push(t % l + 1);
            succ.push(if t + 1 == size { base } else { base + t + 1 });
        }
        base += size;
    }

    let count = positions.len();
    let mut matching = vec![usize::MAX; count];
    for g in 1..=word.rank() {
        let pos_instances: Vec<usize> = (0..count)
            .filter(|&p| word.letter(positions[p]) == Letter::new(g, false))
            .collect();
        let mut neg_instances: Vec<usize> = (0..count)
            .filter(|&p| word.letter(positions[p]) == Letter::new(g, true))
            .collect();
        assert_eq!(pos_instances.len(), neg_instances.len(), "word must be balanced");
        neg_instances.shuffle(rng);
        for (&a, &b) in pos_instances.iter().zip(&neg_instances) {
            matching[a] = b;
            matching[b] = a;
        }
    }

    HandleDiagram::new(word.clone(), positions, succ, matching).unwrap()
}

/// Basis of the exact nullspace of a rational matrix, by Gaussian
/// elimination. Independent of the library's own linear algebra.
pub fn kernel_basis(rows: &[Vec<BigRational>], width: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..width {
        let piv = (rank..m.len()).find(|&i| !m[i][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(rank, piv);
        let mut pivot_row = std::mem::take(&mut m[rank]);
        let p = pivot_row[col].clone();
        for x in &mut pivot_row {
            *x /= &p;
        }
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (slot, x) in row.iter_mut().zip(&pivot_row) {
                    *slot -= &f * x;
                }
            }
        }
        m[rank] = pivot_row;
        pivot_cols.push(col);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..width {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); width];
        v[free] = BigRational::from_integer(BigInt::from(1));
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Nonnegative random rational with small numerator and denominator.
pub fn random_small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(0i64..=6)),
        BigInt::from(rng.gen_range(1i64..=4)),
    )
}

#[allow(dead_code)]
pub fn assert_nonnegative(x: &BigRational) {
    assert!(!x.is_negative());
}
