//! Enumeration of reduced words over a dense letter encoding.
//!
//! Generator `i` of an alphabet is encoded as code `2i`, its inverse as
//! `2i + 1`, so the inverse of a code is `c ^ 1` and code order is
//! `g1, g1⁻¹, g2, g2⁻¹, …`. "Lexicographic" everywhere in the crate means
//! lexicographic in this order.

/// Work limit applied to exhaustive enumerations (word balls, exponent boxes)
/// when the caller does not supply one.
pub const DEFAULT_BUDGET: u128 = 1 << 27;

#[inline]
pub fn inverse_code(c: u32) -> u32 {
    c ^ 1
}

/// Number of reduced words of length exactly `len` in a free group of the
/// given rank.
pub fn sphere_size(rank: usize, len: usize) -> u128 {
    if len == 0 {
        return 1;
    }
    let letters = 2 * rank as u128;
    let mut n = letters;
    for _ in 1..len {
        n = n.saturating_mul(letters.saturating_sub(1));
    }
    n
}

/// Number of nonempty reduced words of length `1..=max_len`.
pub fn ball_size(rank: usize, max_len: usize) -> u128 {
    (1..=max_len).fold(0u128, |acc, l| acc.saturating_add(sphere_size(rank, l)))
}

/// Reduced code sequences of one fixed length, in lexicographic order.
#[derive(Debug, Clone)]
pub struct ReducedWords {
    letters: u32,
    current: Vec<u32>,
    done: bool,
}

impl ReducedWords {
    pub fn new(rank: usize, len: usize) -> Self {
        let letters = 2 * rank as u32;
        let mut current = Vec::with_capacity(len);
        let mut done = letters == 0 && len > 0;
        if !done {
            for i in 0..len {
                // Smallest letter not cancelling the previous one.
                let c = if i > 0 && current[i - 1] == 1 { 1 } else { 0 };
                if c >= letters {
                    done = true;
                    break;
                }
                current.push(c);
            }
        }
        ReducedWords {
            letters,
            current,
            done,
        }
    }

    fn advance(&mut self) {
        let len = self.current.len();
        let mut i = len;
        loop {
            if i == 0 {
                self.done = true;
                return;
            }
            i -= 1;
            let mut c = self.current[i] + 1;
            if i > 0 && c == inverse_code(self.current[i - 1]) {
                c += 1;
            }
            if c < self.letters {
                self.current[i] = c;
                for j in i + 1..len {
                    self.current[j] = if self.current[j - 1] == 1 { 1 } else { 0 };
                }
                return;
            }
        }
    }
}

impl Iterator for ReducedWords {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        if out.is_empty() {
            self.done = true;
        } else {
            self.advance();
        }
        Some(out)
    }
}

/// Depth-first walk over all nonempty reduced words of length `1..=max_len`
/// whose first letter lies in `first`, carrying a value folded along the
/// prefix: `step(parent_value, code, depth)` gives the child's value, and
/// `visit(codes, value)` sees every word once.
///
/// Prefix values are shared, so a ball of `N` words costs `N` steps.
pub fn walk<T, S, V>(
    rank: usize,
    max_len: usize,
    first: std::ops::Range<u32>,
    root: T,
    step: &S,
    visit: &mut V,
) where
    T: Clone,
    S: Fn(&T, u32, usize) -> T,
    V: FnMut(&[u32], &T),
{
    if max_len == 0 {
        return;
    }
    let letters = 2 * rank as u32;
    let mut codes = Vec::with_capacity(max_len);
    for c in first.start..first.end.min(letters) {
        let value = step(&root, c, 1);
        codes.push(c);
        visit(&codes, &value);
        walk_below(letters, max_len, &mut codes, &value, step, visit);
        codes.pop();
    }
}

fn walk_below<T, S, V>(
    letters: u32,
    max_len: usize,
    codes: &mut Vec<u32>,
    parent: &T,
    step: &S,
    visit: &mut V,
) where
    S: Fn(&T, u32, usize) -> T,
    V: FnMut(&[u32], &T),
{
    let depth = codes.len();
    if depth >= max_len {
        return;
    }
    let forbidden = inverse_code(codes[depth - 1]);
    for c in 0..letters {
        if c == forbidden {
            continue;
        }
        let value = step(parent, c, depth + 1);
        codes.push(c);
        visit(codes, &value);
        walk_below(letters, max_len, codes, &value, step, visit);
        codes.pop();
    }
}
