use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared handle to a finite group. Groups are immutable once built.
pub type Group = Arc<FiniteGroup>;

/// Encode a word over an alphabet of size `q` as a base-`q` integer, least
/// significant digit first.
pub fn encode(word: &[usize], q: usize) -> u64 {
    let q = q as u64;
    word.iter().rev().fold(0u64, |acc, &s| acc * q + s as u64)
}

/// Inverse of [`encode`].
pub fn decode(mut code: u64, q: usize, len: usize) -> Vec<usize> {
    let q = q as u64;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % q) as usize);
        code /= q;
    }
    out
}

pub(crate) fn decode_into(mut code: u64, q: usize, out: &mut [usize]) {
    let q = q as u64;
    for slot in out.iter_mut() {
        *slot = (code % q) as usize;
        code /= q;
    }
}

/// `q^len`, or `None` when it does not fit comfortably in a block code.
pub fn code_space(q: usize, len: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..len {
        acc = acc.checked_mul(q as u64)?;
    }
    if acc > (1u64 << 62) {
        None
    } else {
        Some(acc)
    }
}

#[derive(Clone, Debug)]
enum Law {
    Table { mult: Vec<u32>, inv: Vec<u32> },
    /// A subgroup of the pointwise power `base^len`. Elements are the sorted
    /// block codes; `None` means every block is present.
    Blocks {
        base: Group,
        len: usize,
        codes: Option<Vec<u64>>,
    },
}

/// A finite group given by its multiplication law. The identity is always
/// element 0.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    law: Law,
    names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Build a group from a full multiplication table, checking the group axioms.
    pub fn from_table(name: &str, rows: Vec<Vec<usize>>) -> Result<Group> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidOrder("empty table".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidTable(format!("entry {x} out of range")));
                }
                mult.push(x as u32);
            }
        }
        for i in 0..n {
            if mult[i] as usize != i || mult[i * n] as usize != i {
                return Err(Error::InvalidTable("element 0 is not the identity".into()));
            }
        }
        let mut seen = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                let x = mult[i * n + j] as usize;
                if seen[x] == 2 * i + 1 {
                    return Err(Error::InvalidTable(format!("row {i} is not a permutation")));
                }
                seen[x] = 2 * i + 1;
            }
        }
        for j in 0..n {
            let mut col = vec![false; n];
            for i in 0..n {
                let x = mult[i * n + j] as usize;
                if col[x] {
                    return Err(Error::InvalidTable(format!("column {j} is not a permutation")));
                }
                col[x] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a * n + b] as usize;
                for c in 0..n {
                    let bc = mult[b * n + c] as usize;
                    if mult[ab * n + c] != mult[a * n + bc] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Arc::new(Self::table_unchecked(name, n, mult)))
    }

    pub(crate) fn table_unchecked(name: &str, n: usize, mult: Vec<u32>) -> FiniteGroup {
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mult[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        FiniteGroup {
            name: name.to_string(),
            order: n,
            law: Law::Table { mult, inv },
            names: None,
        }
    }

    /// Build a group from a closure computing products; used for groups whose
    /// axioms hold by construction.
    pub(crate) fn from_fn(name: &str, n: usize, f: impl Fn(usize, usize) -> usize) -> FiniteGroup {
        let mut mult = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mult.push(f(a, b) as u32);
            }
        }
        Self::table_unchecked(name, n, mult)
    }

    /// The subgroup of `base^len` whose elements are the given block codes.
    /// Codes must be sorted, contain 0 and be closed under pointwise products.
    pub(crate) fn blocks_unchecked(name: &str, base: Group, len: usize, codes: Vec<u64>) -> FiniteGroup {
        debug_assert!(codes.first() == Some(&0));
        FiniteGroup {
            name: name.to_string(),
            order: codes.len(),
            law: Law::Blocks {
                base,
                len,
                codes: Some(codes),
            },
            names: None,
        }
    }

    /// The full power `base^len` with pointwise multiplication.
    pub fn power(base: &Group, len: usize) -> Result<Group> {
        let size = code_space(base.order(), len)
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or_else(|| Error::Unsupported(format!("{}^{} is too large", base.name(), len)))?;
        Ok(Arc::new(FiniteGroup {
            name: format!("{}^{}", base.name(), len),
            order: size as usize,
            law: Law::Blocks {
                base: base.clone(),
                len,
                codes: None,
            },
            names: None,
        }))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<FiniteGroup> {
        if names.len() != self.order {
            return Err(Error::InvalidTable(format!(
                "{} names for {} elements",
                names.len(),
                self.order
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn renamed(&self, name: &str) -> FiniteGroup {
        let mut g = self.clone();
        g.name = name.to_string();
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Human-readable label of an element.
    pub fn label(&self, a: usize) -> String {
        if let Some(names) = &self.names {
            return names[a].clone();
        }
        match &self.law {
            Law::Blocks { base, len, .. } => {
                let w = decode(self.code_of(a), base.order(), *len);
                let parts: Vec<String> = w.iter().map(|&s| base.label(s)).collect();
                format!("({})", parts.join(","))
            }
            Law::Table { .. } => a.to_string(),
        }
    }

    fn code_of(&self, a: usize) -> u64 {
        match &self.law {
            Law::Blocks { codes: Some(c), .. } => c[a],
            _ => a as u64,
        }
    }

    fn index_of_code(&self, code: u64) -> usize {
        match &self.law {
            Law::Blocks { codes: Some(c), .. } => c
                .binary_search(&code)
                .expect("block group is closed under products"),
            _ => code as usize,
        }
    }

    /// For block-backed groups, the base alphabet and the block length.
    pub fn block_structure(&self) -> Option<(&Group, usize)> {
        match &self.law {
            Law::Blocks { base, len, .. } => Some((base, *len)),
            Law::Table { .. } => None,
        }
    }

    /// For block-backed groups, the word over the base alphabet of element `a`.
    pub fn element_word(&self, a: usize) -> Option<Vec<usize>> {
        match &self.law {
            Law::Blocks { base, len, .. } => Some(decode(self.code_of(a), base.order(), *len)),
            Law::Table { .. } => None,
        }
    }

    /// For block-backed groups, the element whose word is `w`, if present.
    pub fn element_of_word(&self, w: &[usize]) -> Option<usize> {
        match &self.law {
            Law::Blocks { base, len, codes } => {
                if w.len() != *len || w.iter().any(|&s| s >= base.order()) {
                    return None;
                }
                let code = encode(w, base.order());
                match codes {
                    Some(c) => c.binary_search(&code).ok(),
                    None => Some(code as usize),
                }
            }
            Law::Table { .. } => None,
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.law {
            Law::Table { mult, .. } => mult[a * self.order + b] as usize,
            Law::Blocks { base, len, .. } => {
                let q = base.order();
                let (mut x, mut y) = (self.code_of(a), self.code_of(b));
                let mut out = 0u64;
                let mut scale = 1u64;
                for _ in 0..*len {
                    let s = base.mul((x % q as u64) as usize, (y % q as u64) as usize);
                    out += s as u64 * scale;
                    scale = scale.wrapping_mul(q as u64);
                    x /= q as u64;
                    y /= q as u64;
                }
                self.index_of_code(out)
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        match &self.law {
            Law::Table { inv, .. } => inv[a] as usize,
            Law::Blocks { base, len, .. } => {
                let q = base.order();
                let w: Vec<usize> = decode(self.code_of(a), q, *len)
                    .into_iter()
                    .map(|s| base.inv(s))
                    .collect();
                self.index_of_code(encode(&w, q))
            }
        }
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, a| lcm(acc, self.element_order(a)))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = generating_set(self);
        gens.iter()
            .enumerate()
            .all(|(i, &a)| gens[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    /// Conjugate `b a b⁻¹`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(b, a), self.inv(b))
    }

    /// The multiplication table as rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// A copy of this group backed by an explicit table.
    pub fn to_table(&self) -> Group {
        let n = self.order;
        let mut g = Self::from_fn(&self.name, n, |a, b| self.mul(a, b));
        g.names = Some((0..n).map(|a| self.label(a)).collect());
        Arc::new(g)
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer(&self, set: &[usize]) -> Vec<usize> {
        (0..self.order)
            .filter(|&a| set.iter().all(|&b| self.commute(a, b)))
            .collect()
    }

    pub fn center(&self) -> Vec<usize> {
        let gens = generating_set(self);
        self.centralizer(&gens)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A small generating set, chosen greedily: each new generator is the first
/// element outside the subgroup generated so far.
pub fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut members = vec![0usize];
    let mut gens = Vec::new();
    for x in 0..n {
        if inside[x] {
            continue;
        }
        gens.push(x);
        close_with(g, &gens, &mut inside, &mut members);
    }
    gens
}

/// Extend `members` (a subgroup, flagged in `inside`) to the subgroup generated
/// by it together with `gens`.
pub(crate) fn close_with(g: &FiniteGroup, gens: &[usize], inside: &mut [bool], members: &mut Vec<usize>) {
    let mut i = 0;
    // Every old member must be multiplied by the new generators as well.
    while i < members.len() {
        let x = members[i];
        for &s in gens {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                members.push(y);
            }
        }
        i += 1;
    }
}

/// The cyclic group `C_n`, element `i` being the residue `i`.
pub fn make_cyclic(n: usize) -> Result<Group> {
    if n == 0 {
        return Err(Error::InvalidOrder("cyclic group of order 0".into()));
    }
    Ok(Arc::new(FiniteGroup::from_fn(&format!("C{n}"), n, |a, b| (a + b) % n)))
}

/// The symmetric group on `n ≤ 6` points; elements are permutations in
/// lexicographic order, so the identity comes first.
pub fn symmetric_group(n: usize) -> Result<Group> {
    if n == 0 || n > 6 {
        return Err(Error::InvalidOrder(format!("symmetric group on {n} points")));
    }
    let perms = permutations(n);
    Ok(Arc::new(perm_group(&format!("S{n}"), perms)))
}

/// The alternating group on `n ≤ 6` points.
pub fn alternating_group(n: usize) -> Result<Group> {
    if n == 0 || n > 6 {
        return Err(Error::InvalidOrder(format!("alternating group on {n} points")));
    }
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| is_even(p)).collect();
    Ok(Arc::new(perm_group(&format!("A{n}"), perms)))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn perm_group(name: &str, perms: Vec<Vec<usize>>) -> FiniteGroup {
    let index: std::collections::HashMap<Vec<usize>, usize> =
        perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let n = perms.len();
    // (a·b)(x) = a(b(x))
    let g = FiniteGroup::from_fn(name, n, |a, b| {
        let c: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
        index[&c]
    });
    let names = perms
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    g.with_names(names).expect("one name per element")
}

/// Direct product `A × B`; the pair `(x, y)` has index `x·|B| + y`.
pub fn direct_product(a: &Group, b: &Group) -> Group {
    let nb = b.order();
    let n = a.order() * nb;
    let mut g = FiniteGroup::from_fn(&format!("{}x{}", a.name(), b.name()), n, |u, v| {
        a.mul(u / nb, v / nb) * nb + b.mul(u % nb, v % nb)
    });
    g.names = Some(
        (0..n)
            .map(|u| format!("({},{})", a.label(u / nb), b.label(u % nb)))
            .collect(),
    );
    Arc::new(g)
}

/// Look up a group by one of the short names used on the command line:
/// `C<n>`, `S<n>`, `A<n>`, products written `AxB`, and `Cn^k`.
pub fn group_by_name(name: &str) -> Result<Group> {
    let name = name.trim();
    if let Some((l, r)) = name.split_once('x') {
        let a = group_by_name(l)?;
        let b = group_by_name(r)?;
        return Ok(direct_product(&a, &b));
    }
    if let Some((base, e)) = name.split_once('^') {
        let g = group_by_name(base)?;
        let k: usize = e
            .parse()
            .map_err(|_| Error::InvalidOrder(format!("bad exponent in {name}")))?;
        return Ok(FiniteGroup::power(&g, k)?.to_table());
    }
    let (head, tail) = name.split_at(1.min(name.len()));
    let k: usize = tail
        .parse()
        .map_err(|_| Error::InvalidOrder(format!("unknown group name {name}")))?;
    match head {
        "C" => make_cyclic(k),
        "S" => symmetric_group(k),
        "A" => alternating_group(k),
        _ => Err(Error::InvalidOrder(format!("unknown group name {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_small_cases() {
        let c1 = make_cyclic(1).unwrap();
        assert_eq!(c1.order(), 1);
        let c2 = make_cyclic(2).unwrap();
        assert_eq!(c2.table(), vec![vec![0, 1], vec![1, 0]]);
        let c6 = make_cyclic(6).unwrap();
        assert_eq!(c6.mul(2, 5), 1);
        assert_eq!(make_cyclic(0).unwrap_err(), Error::InvalidOrder("cyclic group of order 0".into()));
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table("bad", vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table("bad", vec![vec![1, 0], vec![0, 1]]).is_err());
        let s3 = symmetric_group(3).unwrap();
        let again = FiniteGroup::from_table("S3", s3.table()).unwrap();
        assert_eq!(again.order(), 6);
        assert!(!again.is_abelian());
    }

    #[test]
    fn symmetric_and_alternating() {
        let s3 = symmetric_group(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.label(0), "012");
        assert_eq!(s3.exponent(), 6);
        assert_eq!(s3.center(), vec![0]);
        let a4 = alternating_group(4).unwrap();
        assert_eq!(a4.order(), 12);
        assert_eq!(alternating_group(5).unwrap().order(), 60);
    }

    #[test]
    fn power_groups_multiply_pointwise() {
        let c3 = make_cyclic(3).unwrap();
        let p = FiniteGroup::power(&c3, 2).unwrap();
        assert_eq!(p.order(), 9);
        let x = p.element_of_word(&[1, 2]).unwrap();
        let y = p.element_of_word(&[2, 2]).unwrap();
        assert_eq!(p.element_word(p.mul(x, y)).unwrap(), vec![0, 1]);
        assert_eq!(p.element_word(p.inv(x)).unwrap(), vec![2, 1]);
    }

    #[test]
    fn names_parse() {
        assert_eq!(group_by_name("C2xC3").unwrap().order(), 6);
        assert!(group_by_name("C2xC3").unwrap().is_abelian());
        assert_eq!(group_by_name("C2^3").unwrap().order(), 8);
        assert!(group_by_name("Q8").is_err());
    }

    #[test]
    fn codes_round_trip() {
        let w = vec![2, 0, 1, 1];
        assert_eq!(decode(encode(&w, 3), 3, 4), w);
    }
}
