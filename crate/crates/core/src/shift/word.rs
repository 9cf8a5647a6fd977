use std::fmt;
use std::sync::Arc;

use crate::algebra::Group;
use crate::error::{Error, Result};

/// True when two handles denote the same alphabet.
pub fn same_group(a: &Group, b: &Group) -> bool {
    if Arc::ptr_eq(a, b) {
        return true;
    }
    if a.order() != b.order() || a.name() != b.name() {
        return false;
    }
    let n = a.order();
    n > 64 || (0..n).all(|x| (0..n).all(|y| a.mul(x, y) == b.mul(x, y)))
}

/// An eventually periodic bi-infinite word:
/// `f(n) = left[(n-start) mod |left|]` for `n < start`, `core[n-start]` on
/// `[start, end)` and `right[(n-end) mod |right|]` for `n ≥ end`.
///
/// Values are always kept in canonical form, so structural equality is
/// equality of words.
#[derive(Clone)]
pub struct EPWord {
    alphabet: Group,
    left: Vec<usize>,
    start: i64,
    core: Vec<usize>,
    right: Vec<usize>,
}

impl PartialEq for EPWord {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start
            && self.core == other.core
            && self.left == other.left
            && self.right == other.right
            && same_group(&self.alphabet, &other.alphabet)
    }
}

impl Eq for EPWord {}

impl std::hash::Hash for EPWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.start.hash(state);
        self.core.hash(state);
        self.left.hash(state);
        self.right.hash(state);
    }
}

fn primitive_root(w: &[usize]) -> Vec<usize> {
    let n = w.len();
    for d in 1..=n {
        if n % d == 0 && (d..n).all(|i| w[i] == w[i - d]) {
            return w[..d].to_vec();
        }
    }
    w.to_vec()
}

impl EPWord {
    pub fn new(alphabet: Group, left: Vec<usize>, start: i64, core: Vec<usize>, right: Vec<usize>) -> Result<EPWord> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::PreconditionFailed("periods must be nonempty".into()));
        }
        let n = alphabet.order();
        if left.iter().chain(&core).chain(&right).any(|&s| s >= n) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(Self::canonical(alphabet, left, start, core, right))
    }

    fn canonical(alphabet: Group, left: Vec<usize>, start: i64, core: Vec<usize>, right: Vec<usize>) -> EPWord {
        let mut u = primitive_root(&left);
        let mut w = primitive_root(&right);
        let mut c = core;
        let mut a = start;
        // Absorb the core into the right tail, then into the left tail.
        while let Some(&last) = c.last() {
            if last != w[w.len() - 1] {
                break;
            }
            c.pop();
            w.rotate_right(1);
        }
        let mut drop = 0;
        while drop < c.len() && c[drop] == u[0] {
            drop += 1;
            u.rotate_left(1);
        }
        c.drain(..drop);
        a += drop as i64;
        if c.is_empty() {
            if u == w {
                // Purely periodic: anchor at 0 with f(n) = w[n mod p].
                let p = w.len() as i64;
                let shift = a.rem_euclid(p) as usize;
                w.rotate_right(shift);
                return EPWord {
                    alphabet,
                    left: w.clone(),
                    start: 0,
                    core: c,
                    right: w,
                };
            }
            // Give any overlap of the two periodic regions to the right tail.
            let mut guard = 0;
            while u[u.len() - 1] == w[w.len() - 1] && guard < u.len() * w.len() + 1 {
                u.rotate_right(1);
                w.rotate_right(1);
                a -= 1;
                guard += 1;
            }
        }
        EPWord {
            alphabet,
            left: u,
            start: a,
            core: c,
            right: w,
        }
    }

    /// Builds the word with the given tail period lengths from a pointwise
    /// description, valid on the whole line.
    pub fn from_fn(alphabet: Group, left_len: usize, start: i64, end: i64, right_len: usize, f: impl Fn(i64) -> usize) -> EPWord {
        let left = (0..left_len as i64).map(|j| f(start - left_len as i64 + j)).collect();
        let core = (start..end).map(&f).collect();
        let right = (0..right_len as i64).map(|j| f(end + j)).collect();
        Self::canonical(alphabet, left, start, core, right)
    }

    pub fn identity(alphabet: &Group) -> EPWord {
        Self::canonical(alphabet.clone(), vec![0], 0, vec![], vec![0])
    }

    /// The constant word with value `s`.
    pub fn constant(alphabet: &Group, s: usize) -> EPWord {
        Self::canonical(alphabet.clone(), vec![s], 0, vec![], vec![s])
    }

    /// `[s]_pos`: the value `s` at `pos`, identity elsewhere.
    pub fn delta(alphabet: &Group, s: usize, pos: i64) -> EPWord {
        Self::canonical(alphabet.clone(), vec![0], pos, vec![s], vec![0])
    }

    /// The finitely supported word with `core` placed at `start`.
    pub fn finite(alphabet: &Group, start: i64, core: Vec<usize>) -> Result<EPWord> {
        Self::new(alphabet.clone(), vec![0], start, core, vec![0])
    }

    /// The periodic word `f(n) = word[n mod |word|]`.
    pub fn periodic(alphabet: &Group, word: Vec<usize>) -> Result<EPWord> {
        Self::new(alphabet.clone(), word.clone(), 0, vec![], word)
    }

    pub fn alphabet(&self) -> &Group {
        &self.alphabet
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn core(&self) -> &[usize] {
        &self.core
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.core.len() as i64
    }

    pub fn at(&self, n: i64) -> usize {
        if n < self.start {
            let p = self.left.len() as i64;
            self.left[(n - self.start).rem_euclid(p) as usize]
        } else if n < self.end() {
            self.core[(n - self.start) as usize]
        } else {
            let p = self.right.len() as i64;
            self.right[(n - self.end()).rem_euclid(p) as usize]
        }
    }

    /// Values on `[from, to)`.
    pub fn slice(&self, from: i64, to: i64) -> Vec<usize> {
        (from..to).map(|n| self.at(n)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.core.is_empty() && self.left == [0] && self.right == [0]
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.left == [0] && self.right == [0]
    }

    /// Both tails share the same period and phase.
    pub fn is_periodic(&self) -> bool {
        self.core.is_empty() && self.left == self.right && self.start == 0
    }

    /// Least and greatest support positions of a finitely supported
    /// non-identity word.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.is_finitely_supported() && !self.core.is_empty() {
            Some((self.start, self.end() - 1))
        } else {
            None
        }
    }

    fn check(&self, other: &EPWord) -> Result<()> {
        if same_group(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn multiply(&self, other: &EPWord) -> Result<EPWord> {
        self.check(other)?;
        let g = &self.alphabet;
        let ll = crate::algebra::lcm(self.left.len(), other.left.len());
        let rl = crate::algebra::lcm(self.right.len(), other.right.len());
        let a = self.start.min(other.start);
        let b = self.end().max(other.end());
        Ok(Self::from_fn(g.clone(), ll, a, b, rl, |n| g.mul(self.at(n), other.at(n))))
    }

    pub fn inverse(&self) -> EPWord {
        let g = &self.alphabet;
        let inv = |w: &[usize]| w.iter().map(|&s| g.inv(s)).collect::<Vec<_>>();
        Self::canonical(g.clone(), inv(&self.left), self.start, inv(&self.core), inv(&self.right))
    }

    /// `shift_by(f, k)(n) = f(n + k)`; `k = 1` is the shift `σ`.
    pub fn shift_by(&self, k: i64) -> EPWord {
        Self::canonical(
            self.alphabet.clone(),
            self.left.clone(),
            self.start - k,
            self.core.clone(),
            self.right.clone(),
        )
    }

    /// Applies a symbol map pointwise, landing in `target`.
    pub fn map_symbols(&self, target: &Group, f: impl Fn(usize) -> usize) -> EPWord {
        let m = |w: &[usize]| w.iter().map(|&s| f(s)).collect::<Vec<_>>();
        Self::canonical(target.clone(), m(&self.left), self.start, m(&self.core), m(&self.right))
    }

    /// Order of the word as a group element.
    pub fn order(&self) -> usize {
        let g = &self.alphabet;
        self.left
            .iter()
            .chain(&self.core)
            .chain(&self.right)
            .fold(1, |acc, &s| crate::algebra::lcm(acc, g.element_order(s)))
    }
}

impl fmt::Debug for EPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.alphabet;
        let show = |w: &[usize]| w.iter().map(|&s| g.label(s)).collect::<Vec<_>>().join(" ");
        write!(
            f,
            "({})* @{} [{}] ({})*",
            show(&self.left),
            self.start,
            show(&self.core),
            show(&self.right)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_cyclic, symmetric_group};

    #[test]
    fn canonical_forms() {
        let c2 = make_cyclic(2).unwrap();
        let f = EPWord::new(c2.clone(), vec![0, 0], -5, vec![0, 0, 1, 0], vec![0]).unwrap();
        assert_eq!(f, EPWord::delta(&c2, 1, -3));
        assert_eq!(f.support(), Some((-3, -3)));
        let p = EPWord::new(c2.clone(), vec![1, 0], 3, vec![1, 0, 1], vec![0, 1]).unwrap();
        assert!(p.is_periodic());
        assert_eq!(p.at(0), p.at(2));
        assert_eq!(p.at(3), 1);
        let q = EPWord::periodic(&c2, vec![1, 0]).unwrap().shift_by(1);
        assert_eq!(q.at(0), 0);
        assert_ne!(q, EPWord::periodic(&c2, vec![1, 0]).unwrap());
    }

    #[test]
    fn overlapping_tails_are_canonical() {
        let c2 = make_cyclic(2).unwrap();
        // ...000 | 1010... with the boundary written in two different places.
        let a = EPWord::new(c2.clone(), vec![0], 0, vec![], vec![1, 0]).unwrap();
        let b = EPWord::new(c2.clone(), vec![0], -1, vec![0], vec![1, 0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.start(), -1);
        for n in -5..5 {
            assert_eq!(a.at(n), if n >= 0 && n % 2 == 0 { 1 } else { 0 });
        }
    }

    #[test]
    fn group_operations() {
        let c2 = make_cyclic(2).unwrap();
        let d = EPWord::delta(&c2, 1, 0);
        assert!(d.multiply(&d).unwrap().is_identity());
        assert_eq!(d.shift_by(1), EPWord::delta(&c2, 1, -1));
        let s3 = symmetric_group(3).unwrap();
        let f = EPWord::new(s3.clone(), vec![1, 2], 0, vec![3, 4], vec![5]).unwrap();
        assert!(f.multiply(&f.inverse()).unwrap().is_identity());
        assert_eq!(d.multiply(&EPWord::identity(&s3)), Err(Error::AlphabetMismatch));
    }
}
