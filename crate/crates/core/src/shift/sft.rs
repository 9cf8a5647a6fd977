use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use super::word::{same_group, EPWord};
use crate::algebra::{code_space, decode, decode_into, encode, FiniteGroup, Group};
use crate::error::{Error, Result};

/// Largest block set stored explicitly.
pub const MAX_BLOCKS: usize = 1 << 22;

/// A group shift of finite type: the points `f ∈ F^Z` all of whose windows
/// `(f(n), ..., f(n+l-1))` lie in a subgroup `W ≤ F^l`.
///
/// Blocks are stored as sorted base-`|F|` codes, position 0 least significant.
#[derive(Clone)]
pub struct GroupShiftSFT {
    alphabet: Group,
    window: usize,
    blocks: Arc<Vec<u64>>,
    trimmed: OnceLock<Arc<Vec<u64>>>,
}

impl std::fmt::Debug for GroupShiftSFT {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GroupShiftSFT({}, window {}, {} blocks)",
            self.alphabet.name(),
            self.window,
            self.blocks.len()
        )
    }
}

pub(crate) fn block_mul(g: &FiniteGroup, a: u64, b: u64, len: usize) -> u64 {
    let q = g.order() as u64;
    let (mut x, mut y) = (a, b);
    let mut out = 0u64;
    let mut scale = 1u64;
    for _ in 0..len {
        let s = g.mul((x % q) as usize, (y % q) as usize) as u64;
        out += s * scale;
        scale = scale.wrapping_mul(q);
        x /= q;
        y /= q;
    }
    out
}

pub(crate) fn block_inv(g: &FiniteGroup, a: u64, len: usize) -> u64 {
    let q = g.order();
    let w: Vec<usize> = decode(a, q, len).into_iter().map(|s| g.inv(s)).collect();
    encode(&w, q)
}

/// Closes a set of blocks under pointwise products, failing when the closure
/// leaves `limit`.
pub(crate) fn close_blocks(g: &FiniteGroup, len: usize, gens: &[u64], limit: usize) -> Result<Vec<u64>> {
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut members = vec![0u64];
    let mut chosen: Vec<u64> = Vec::new();
    for &x in gens {
        if seen.contains(&x) {
            continue;
        }
        chosen.push(x);
        let mut i = 0;
        while i < members.len() {
            let m = members[i];
            for &s in &chosen {
                let y = block_mul(g, m, s, len);
                if seen.insert(y) {
                    members.push(y);
                    if members.len() > limit {
                        return Err(Error::Unsupported("block group too large".into()));
                    }
                }
            }
            i += 1;
        }
    }
    members.sort_unstable();
    Ok(members)
}

/// Greedy generating set of a sorted block subgroup.
pub(crate) fn block_generators(g: &FiniteGroup, len: usize, codes: &[u64]) -> Vec<u64> {
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut members = vec![0u64];
    let mut gens = Vec::new();
    for &x in codes {
        if seen.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut i = 0;
        while i < members.len() {
            let m = members[i];
            for &s in &gens {
                let y = block_mul(g, m, s, len);
                if seen.insert(y) {
                    members.push(y);
                }
            }
            i += 1;
        }
    }
    gens
}

fn contains_code(codes: &[u64], c: u64) -> bool {
    codes.binary_search(&c).is_ok()
}

impl GroupShiftSFT {
    /// Checks that the blocks form a subgroup of `F^window`.
    pub fn from_codes(alphabet: Group, window: usize, codes: Vec<u64>) -> Result<GroupShiftSFT> {
        if window == 0 {
            return Err(Error::InvalidBlocks("window must be at least 1".into()));
        }
        let space = code_space(alphabet.order(), window)
            .ok_or_else(|| Error::Unsupported("window too wide for block codes".into()))?;
        let mut codes = codes;
        codes.sort_unstable();
        codes.dedup();
        if codes.iter().any(|&c| c >= space) {
            return Err(Error::InvalidBlocks("block symbol out of range".into()));
        }
        if codes.first() != Some(&0) {
            return Err(Error::InvalidBlocks("identity block missing".into()));
        }
        let closure = close_blocks(&alphabet, window, &codes, codes.len())
            .map_err(|_| Error::InvalidBlocks("blocks are not closed under products".into()))?;
        if closure != codes {
            return Err(Error::InvalidBlocks("blocks are not closed under products".into()));
        }
        Ok(Self::from_codes_unchecked(alphabet, window, codes))
    }

    pub fn new(alphabet: Group, window: usize, blocks: &[Vec<usize>]) -> Result<GroupShiftSFT> {
        let q = alphabet.order();
        let mut codes = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.len() != window || b.iter().any(|&s| s >= q) {
                return Err(Error::InvalidBlocks(format!("bad block {b:?}")));
            }
            codes.push(encode(b, q));
        }
        Self::from_codes(alphabet, window, codes)
    }

    /// The group generated by the given blocks.
    pub fn generated(alphabet: Group, window: usize, gens: &[Vec<usize>]) -> Result<GroupShiftSFT> {
        let q = alphabet.order();
        let codes: Vec<u64> = gens.iter().map(|b| encode(b, q)).collect();
        let closed = close_blocks(&alphabet, window, &codes, MAX_BLOCKS)?;
        Ok(Self::from_codes_unchecked(alphabet, window, closed))
    }

    pub(crate) fn from_codes_unchecked(alphabet: Group, window: usize, codes: Vec<u64>) -> GroupShiftSFT {
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        GroupShiftSFT {
            alphabet,
            window,
            blocks: Arc::new(codes),
            trimmed: OnceLock::new(),
        }
    }

    fn trimmed_unchecked(alphabet: Group, window: usize, codes: Vec<u64>) -> GroupShiftSFT {
        let blocks = Arc::new(codes);
        let cell = OnceLock::new();
        let _ = cell.set(blocks.clone());
        GroupShiftSFT {
            alphabet,
            window,
            blocks,
            trimmed: cell,
        }
    }

    /// The full shift `F^Z`.
    pub fn full(alphabet: &Group) -> GroupShiftSFT {
        Self::trimmed_unchecked(alphabet.clone(), 1, (0..alphabet.order() as u64).collect())
    }

    /// The trivial subgroup.
    pub fn trivial(alphabet: &Group) -> GroupShiftSFT {
        Self::trimmed_unchecked(alphabet.clone(), 1, vec![0])
    }

    /// Constant words.
    pub fn constants(alphabet: &Group) -> GroupShiftSFT {
        let q = alphabet.order();
        let codes = (0..q).map(|s| encode(&[s, s], q)).collect::<Vec<_>>();
        let mut codes = codes;
        codes.sort_unstable();
        Self::trimmed_unchecked(alphabet.clone(), 2, codes)
    }

    /// `K^Z` for a subgroup `K` of the alphabet, given by its members.
    pub fn symbol_subgroup(alphabet: &Group, members: &[usize]) -> Result<GroupShiftSFT> {
        Self::from_codes(alphabet.clone(), 1, members.iter().map(|&s| s as u64).collect())
    }

    pub fn alphabet(&self) -> &Group {
        &self.alphabet
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn codes(&self) -> &[u64] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_words(&self) -> Vec<Vec<usize>> {
        let q = self.alphabet.order();
        self.blocks.iter().map(|&c| decode(c, q, self.window)).collect()
    }

    /// The bi-extendable blocks, computed once.
    pub fn trimmed_codes(&self) -> &Arc<Vec<u64>> {
        self.trimmed
            .get_or_init(|| Arc::new(trim_codes(self.alphabet.order(), self.window, &self.blocks)))
    }

    /// The same shift presented by its bi-extendable blocks.
    pub fn trim(&self) -> GroupShiftSFT {
        let t = self.trimmed_codes().clone();
        let cell = OnceLock::new();
        let _ = cell.set(t.clone());
        GroupShiftSFT {
            alphabet: self.alphabet.clone(),
            window: self.window,
            blocks: t,
            trimmed: cell,
        }
    }

    pub fn is_trimmed(&self) -> bool {
        self.trimmed_codes().len() == self.blocks.len()
    }

    /// Presentation at a wider window `w ≥ window`, already trimmed.
    pub fn lift(&self, w: usize) -> Result<GroupShiftSFT> {
        let w = w.max(self.window);
        let codes = lift_codes(self.alphabet.order(), self.window, self.trimmed_codes(), w)?;
        Ok(Self::trimmed_unchecked(self.alphabet.clone(), w, codes))
    }

    fn check(&self, other: &GroupShiftSFT) -> Result<()> {
        if same_group(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Equality of point sets.
    pub fn same_points(&self, other: &GroupShiftSFT) -> Result<bool> {
        self.check(other)?;
        let w = self.window.max(other.window);
        Ok(self.lift(w)?.blocks == other.lift(w)?.blocks)
    }

    /// Inclusion of point sets.
    pub fn is_subset_of(&self, other: &GroupShiftSFT) -> Result<bool> {
        self.check(other)?;
        let w = self.window.max(other.window);
        let a = self.lift(w)?;
        let b = other.lift(w)?;
        Ok(a.blocks.iter().all(|&c| contains_code(&b.blocks, c)))
    }

    pub fn intersect(&self, other: &GroupShiftSFT) -> Result<GroupShiftSFT> {
        self.check(other)?;
        let w = self.window.max(other.window);
        let a = self.lift(w)?;
        let b = other.lift(w)?;
        let codes: Vec<u64> = a.blocks.iter().copied().filter(|&c| contains_code(&b.blocks, c)).collect();
        Ok(Self::from_codes_unchecked(self.alphabet.clone(), w, codes).trim())
    }

    pub fn contains(&self, f: &EPWord) -> Result<bool> {
        if !same_group(&self.alphabet, f.alphabet()) {
            return Err(Error::AlphabetMismatch);
        }
        let l = self.window as i64;
        let q = self.alphabet.order();
        let from = f.start() - l - f.left().len() as i64;
        let to = f.end() + f.right().len() as i64;
        let mut buf = vec![0usize; self.window];
        for n in from..=to {
            for (i, slot) in buf.iter_mut().enumerate() {
                *slot = f.at(n + i as i64);
            }
            if !contains_code(&self.blocks, encode(&buf, q)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Symbols occurring in points.
    pub fn symbols(&self) -> Vec<usize> {
        let q = self.alphabet.order() as u64;
        let mut s: Vec<usize> = self.trimmed_codes().iter().map(|&c| (c % q) as usize).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn is_trivial(&self) -> bool {
        self.trimmed_codes().len() == 1
    }

    /// A group shift is finite exactly when every legal block has a unique
    /// legal successor.
    pub fn is_finite(&self) -> bool {
        let g = DeBruijn::new(self.alphabet.order(), self.window, self.trimmed_codes());
        g.out.iter().all(|e| e.len() <= 1)
    }

    /// Number of points when finite: each legal block extends to exactly one point.
    pub fn finite_order(&self) -> Option<usize> {
        self.is_finite().then(|| self.trimmed_codes().len())
    }

    /// Codes of words on `[0, s)` which, padded with the identity, are points.
    pub fn points_supported_in(&self, s: usize) -> Result<Vec<u64>> {
        let q = self.alphabet.order();
        let l = self.window;
        let lifted = self.lift(l.max(1))?;
        let codes = lifted.codes();
        code_space(q, s).ok_or_else(|| Error::Unsupported("support window too wide".into()))?;
        let mut out = Vec::new();
        // Words are built left to right; all windows overlapping [0, s) are checked.
        let pad = l - 1;
        let total = s + 2 * pad;
        let mut word = vec![0usize; total];
        let syms = self.symbols();
        fn rec(
            pos: usize,
            s: usize,
            pad: usize,
            l: usize,
            q: usize,
            word: &mut Vec<usize>,
            syms: &[usize],
            codes: &[u64],
            out: &mut Vec<u64>,
        ) {
            let window_ok = |word: &Vec<usize>, end: usize| -> bool {
                // window ending at `end` (inclusive)
                end + 1 < l || contains_code(codes, encode(&word[end + 1 - l..=end], q))
            };
            if pos == s + pad {
                for end in s + pad..s + 2 * pad {
                    if !window_ok(word, end) {
                        return;
                    }
                }
                out.push(encode(&word[pad..pad + s], q));
                return;
            }
            for &x in syms {
                word[pos] = x;
                if window_ok(word, pos) {
                    rec(pos + 1, s, pad, l, q, word, syms, codes, out);
                }
            }
            word[pos] = 0;
        }
        rec(pad, s, pad, l, q, &mut word, &syms, codes, &mut out);
        out.sort_unstable();
        Ok(out)
    }

    /// The group of points with period `q`, as a block group of length `q`.
    pub fn periodic_points(&self, period: usize) -> Result<Group> {
        let words = self.periodic_words(period)?;
        let q = self.alphabet.order();
        let mut codes: Vec<u64> = words.iter().map(|w| encode(w, q)).collect();
        codes.sort_unstable();
        Ok(Arc::new(FiniteGroup::blocks_unchecked(
            &format!("Per{}({})", period, self.alphabet.name()),
            self.alphabet.clone(),
            period,
            codes,
        )))
    }

    /// Words `w` of length `period` such that `n ↦ w[n mod period]` is a point.
    pub fn periodic_words(&self, period: usize) -> Result<Vec<Vec<usize>>> {
        if period == 0 {
            return Err(Error::PreconditionFailed("period must be positive".into()));
        }
        let q = self.alphabet.order();
        code_space(q, period).ok_or_else(|| Error::Unsupported("period too long".into()))?;
        let l = self.window;
        let codes = self.trimmed_codes().clone();
        let syms = self.symbols();
        let mut out = Vec::new();
        let mut word = vec![0usize; period];
        let mut buf = vec![0usize; l];
        let check = |word: &[usize], start: usize, buf: &mut Vec<usize>| -> bool {
            for (i, slot) in buf.iter_mut().enumerate() {
                *slot = word[(start + i) % period];
            }
            contains_code(&codes, encode(buf, q))
        };
        let mut stack: Vec<usize> = vec![0];
        // iterative DFS over positions; stack holds the next symbol index to try
        while let Some(&choice) = stack.last() {
            let pos = stack.len() - 1;
            if choice >= syms.len() {
                stack.pop();
                if let Some(top) = stack.last_mut() {
                    *top += 1;
                }
                continue;
            }
            word[pos] = syms[choice];
            let ok = pos + 1 < l || check(&word, pos + 1 - l, &mut buf);
            if !ok {
                *stack.last_mut().unwrap() += 1;
                continue;
            }
            if pos + 1 == period {
                let start = if period + 1 >= l { period + 1 - l } else { 0 };
                let wrap_ok = (start..period).all(|st| check(&word, st, &mut buf));
                if wrap_ok {
                    out.push(word.clone());
                }
                *stack.last_mut().unwrap() += 1;
            } else {
                stack.push(0);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Legal words of length `n`, as sorted codes.
    pub fn language(&self, n: usize) -> Result<Vec<u64>> {
        if n >= self.window {
            return Ok(self.lift(n)?.codes().to_vec());
        }
        let q = self.alphabet.order() as u64;
        let m = q.pow(n as u32);
        let mut out: Vec<u64> = self.trimmed_codes().iter().map(|&c| c % m).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Number of legal words of length `n ≥ 1`, counted without enumeration.
    pub fn count_words(&self, n: usize) -> u128 {
        if n < self.window {
            return self.language(n).map(|l| l.len() as u128).unwrap_or(0);
        }
        count_paths(self.alphabet.order(), self.window, self.trimmed_codes(), n)
    }

    /// Block-level product of two blocks at this window.
    pub fn mul_blocks(&self, a: u64, b: u64) -> u64 {
        block_mul(&self.alphabet, a, b, self.window)
    }

    /// Normality of `self` in `other` at a common window.
    pub fn is_normal_in(&self, other: &GroupShiftSFT) -> Result<bool> {
        self.check(other)?;
        let w = self.window.max(other.window);
        let k = self.lift(w)?;
        let h = other.lift(w)?;
        if !k.blocks.iter().all(|&c| contains_code(&h.blocks, c)) {
            return Ok(false);
        }
        let g = &self.alphabet;
        let kg = block_generators(g, w, &k.blocks);
        let hg = block_generators(g, w, &h.blocks);
        for &x in &kg {
            for &y in &hg {
                let c = block_mul(g, block_mul(g, y, x, w), block_inv(g, y, w), w);
                if !contains_code(&k.blocks, c) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Points whose symbols all commute with every legal symbol: the centre.
    pub fn centre(&self) -> GroupShiftSFT {
        let syms = self.symbols();
        let z = self.alphabet.centralizer(&syms);
        let q = self.alphabet.order();
        let codes: Vec<u64> = self
            .trimmed_codes()
            .iter()
            .copied()
            .filter(|&c| decode(c, q, self.window).iter().all(|s| z.binary_search(s).is_ok()))
            .collect();
        Self::from_codes_unchecked(self.alphabet.clone(), self.window, codes).trim()
    }

    /// Largest element order among points.
    pub fn exponent(&self) -> usize {
        let q = self.alphabet.order();
        self.trimmed_codes().iter().fold(1, |acc, &c| {
            decode(c, q, self.window)
                .iter()
                .fold(acc, |a, &s| crate::algebra::lcm(a, self.alphabet.element_order(s)))
        })
    }
}

/// Transition structure on `(l-1)`-blocks: each block is an edge from its
/// prefix to its suffix.
pub(crate) struct DeBruijn {
    pub nodes: Vec<u64>,
    pub index: HashMap<u64, usize>,
    /// `(target, block)` pairs.
    pub out: Vec<Vec<(usize, u64)>>,
    pub inn: Vec<Vec<(usize, u64)>>,
    pub identity: Option<usize>,
}

impl DeBruijn {
    pub fn new(q: usize, l: usize, codes: &[u64]) -> DeBruijn {
        let q = q as u64;
        let node_space = q.pow((l - 1) as u32);
        let mut index: HashMap<u64, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut out: Vec<Vec<(usize, u64)>> = Vec::new();
        let mut inn: Vec<Vec<(usize, u64)>> = Vec::new();
        let mut id_of = |n: u64, nodes: &mut Vec<u64>, out: &mut Vec<Vec<(usize, u64)>>, inn: &mut Vec<Vec<(usize, u64)>>| {
            *index.entry(n).or_insert_with(|| {
                nodes.push(n);
                out.push(Vec::new());
                inn.push(Vec::new());
                nodes.len() - 1
            })
        };
        for &c in codes {
            let (pre, suf) = if l == 1 { (0, 0) } else { (c % node_space, c / q) };
            let a = id_of(pre, &mut nodes, &mut out, &mut inn);
            let b = id_of(suf, &mut nodes, &mut out, &mut inn);
            out[a].push((b, c));
            inn[b].push((a, c));
        }
        let mut index2 = HashMap::new();
        for (i, &n) in nodes.iter().enumerate() {
            index2.insert(n, i);
        }
        let identity = index2.get(&0).copied();
        DeBruijn {
            nodes,
            index: index2,
            out,
            inn,
            identity,
        }
    }

    /// Nodes from which `target` is reachable, with distances.
    pub fn dist_to(&self, target: usize) -> Vec<Option<usize>> {
        let mut d = vec![None; self.nodes.len()];
        d[target] = Some(0);
        let mut queue = std::collections::VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            let dv = d[v].unwrap();
            for &(u, _) in &self.inn[v] {
                if d[u].is_none() {
                    d[u] = Some(dv + 1);
                    queue.push_back(u);
                }
            }
        }
        d
    }

    /// Nodes reachable from `source`, with distances.
    pub fn dist_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut d = vec![None; self.nodes.len()];
        d[source] = Some(0);
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let dv = d[v].unwrap();
            for &(u, _) in &self.out[v] {
                if d[u].is_none() {
                    d[u] = Some(dv + 1);
                    queue.push_back(u);
                }
            }
        }
        d
    }
}

/// Number of words of length `n ≥ l` all of whose `l`-windows lie in `codes`.
pub(crate) fn count_paths(q: usize, l: usize, codes: &[u64], n: usize) -> u128 {
    if n < l {
        return 0;
    }
    let qq = q as u64;
    if l == 1 {
        return (codes.len() as u128).pow(n as u32);
    }
    let node_space = qq.pow((l - 1) as u32);
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut edges = Vec::with_capacity(codes.len());
    for &c in codes {
        let k = index.len();
        let a = *index.entry(c % node_space).or_insert(k);
        let k = index.len();
        let b = *index.entry(c / qq).or_insert(k);
        edges.push((a, b));
    }
    let mut count = vec![0u128; index.len()];
    for &(_, b) in &edges {
        count[b] += 1;
    }
    for _ in l..n {
        let mut next = vec![0u128; count.len()];
        for &(a, b) in &edges {
            next[b] += count[a];
        }
        count = next;
    }
    count.iter().sum()
}

pub(crate) fn trim_codes(q: usize, l: usize, codes: &[u64]) -> Vec<u64> {
    if l == 1 {
        return codes.to_vec();
    }
    let qq = q as u64;
    let node_space = qq.pow((l - 1) as u32);
    let mut alive: Vec<u64> = codes.to_vec();
    loop {
        let mut has_in: HashSet<u64> = HashSet::new();
        let mut has_out: HashSet<u64> = HashSet::new();
        for &c in &alive {
            has_out.insert(c % node_space);
            has_in.insert(c / qq);
        }
        let before = alive.len();
        alive.retain(|&c| has_in.contains(&(c % node_space)) && has_out.contains(&(c / qq)));
        if alive.len() == before {
            return alive;
        }
    }
}

/// Legal words of length `w` for a trimmed block set at window `l`.
pub(crate) fn lift_codes(q: usize, l: usize, trimmed: &[u64], w: usize) -> Result<Vec<u64>> {
    if w == l {
        return Ok(trimmed.to_vec());
    }
    code_space(q, w).ok_or_else(|| Error::Unsupported("window too wide for block codes".into()))?;
    let qq = q as u64;
    // successors of each (l-1)-prefix
    let mut next: HashMap<u64, Vec<u64>> = HashMap::new();
    if l > 1 {
        let node_space = qq.pow((l - 1) as u32);
        for &c in trimmed {
            next.entry(c % node_space).or_default().push(c / node_space);
        }
    }
    let mut cur: Vec<u64> = trimmed.to_vec();
    let mut len = l;
    let mut digits = vec![0usize; w];
    while len < w {
        let scale = qq.pow(len as u32);
        let mut grown = Vec::new();
        for &c in &cur {
            if l == 1 {
                for &s in trimmed {
                    grown.push(c + s * scale);
                }
            } else {
                decode_into(c, q, &mut digits[..len]);
                let tail = encode(&digits[len + 1 - l..len], q);
                if let Some(ss) = next.get(&tail) {
                    for &s in ss {
                        grown.push(c + s * scale);
                    }
                }
            }
            if grown.len() > MAX_BLOCKS {
                return Err(Error::Unsupported(format!(
                    "more than {MAX_BLOCKS} blocks at window {}",
                    len + 1
                )));
            }
        }
        cur = grown;
        len += 1;
    }
    cur.sort_unstable();
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_cyclic, symmetric_group};

    #[test]
    fn trim_examples() {
        let c2 = make_cyclic(2).unwrap();
        let full = GroupShiftSFT::full(&c2);
        assert_eq!(full.trim().codes(), full.codes());
        let h = GroupShiftSFT::new(c2.clone(), 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(h.trim().block_words(), vec![vec![0, 0]]);
        assert!(GroupShiftSFT::new(c2.clone(), 2, &[vec![0, 0], vec![1, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn membership() {
        let c2 = make_cyclic(2).unwrap();
        let d = EPWord::delta(&c2, 1, 0);
        assert!(GroupShiftSFT::full(&c2).contains(&d).unwrap());
        let k = GroupShiftSFT::constants(&c2);
        assert!(!k.contains(&d).unwrap());
        assert!(k.contains(&EPWord::constant(&c2, 1)).unwrap());
        assert!(k.contains(&EPWord::identity(&c2)).unwrap());
    }

    #[test]
    fn periodic_point_counts() {
        let c2 = make_cyclic(2).unwrap();
        let full = GroupShiftSFT::full(&c2);
        assert_eq!(full.periodic_points(1).unwrap().order(), 2);
        assert_eq!(full.periodic_points(3).unwrap().order(), 8);
        assert_eq!(GroupShiftSFT::constants(&c2).periodic_points(2).unwrap().order(), 2);
        let s3 = symmetric_group(3).unwrap();
        assert_eq!(GroupShiftSFT::full(&s3).periodic_points(2).unwrap().order(), 36);
    }

    #[test]
    fn lifting_and_equality() {
        let c2 = make_cyclic(2).unwrap();
        let k = GroupShiftSFT::constants(&c2);
        let k3 = k.lift(3).unwrap();
        assert_eq!(k3.block_words(), vec![vec![0, 0, 0], vec![1, 1, 1]]);
        assert!(k.same_points(&k3).unwrap());
        assert!(k.is_subset_of(&GroupShiftSFT::full(&c2)).unwrap());
        assert!(k.is_finite());
        assert_eq!(k.finite_order(), Some(2));
        assert!(!GroupShiftSFT::full(&c2).is_finite());
        assert_eq!(GroupShiftSFT::full(&c2).points_supported_in(2).unwrap().len(), 4);
        assert_eq!(k.points_supported_in(3).unwrap(), vec![0]);
    }
}
