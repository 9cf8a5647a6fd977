use serde::Serialize;

use super::sft::{block_generators, count_paths, GroupShiftSFT};
use super::word::{same_group, EPWord};
use crate::algebra::{code_space, decode, decode_into, direct_product, encode, FiniteHom, Group};
use crate::ctx::Ctx;
use crate::error::{Error, Result};

/// Largest rule table stored explicitly.
const MAX_RULE_TABLE: u64 = 1 << 24;

#[derive(Clone, Debug)]
enum Rule {
    /// Image of every word of `F^span`, indexed by block code.
    Full(Vec<u32>),
    /// Images of the words of a subgroup of `F^span`, sorted by code.
    Partial { codes: Vec<u64>, images: Vec<u32> },
}

/// A shift-commuting homomorphism `φ(f)(n) = rule(f(n+anchor), ..., f(n+anchor+span-1))`.
///
/// The rule is a homomorphism from `F^span` (or from a subgroup of it, for
/// maps defined only on the legal blocks of a shift) to `F'`.
#[derive(Clone, Debug)]
pub struct SlidingBlockHom {
    domain: Group,
    codomain: Group,
    span: usize,
    anchor: i64,
    rule: Rule,
}

/// Records how an image presentation was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ImageCertificate {
    /// Window of the returned presentation.
    pub window: usize,
    /// Word lengths up to which the presentation's language was checked
    /// against the true image language.
    pub verified_length: usize,
}

impl SlidingBlockHom {
    /// A rule on all of `F^span`, given as a table indexed by block code.
    pub fn new(domain: Group, codomain: Group, span: usize, anchor: i64, table: Vec<usize>) -> Result<SlidingBlockHom> {
        if span == 0 {
            return Err(Error::InvalidHom("span must be at least 1".into()));
        }
        let size = code_space(domain.order(), span)
            .filter(|&s| s <= MAX_RULE_TABLE)
            .ok_or_else(|| Error::Unsupported("rule table too large".into()))?;
        if table.len() as u64 != size {
            return Err(Error::InvalidHom(format!("rule table has {} entries, expected {size}", table.len())));
        }
        if table.iter().any(|&y| y >= codomain.order()) {
            return Err(Error::InvalidHom("rule image out of range".into()));
        }
        check_product_hom(&domain, &codomain, span, &table)?;
        Ok(SlidingBlockHom {
            domain,
            codomain,
            span,
            anchor,
            rule: Rule::Full(table.into_iter().map(|y| y as u32).collect()),
        })
    }

    pub fn from_fn(
        domain: Group,
        codomain: Group,
        span: usize,
        anchor: i64,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<SlidingBlockHom> {
        let size = code_space(domain.order(), span)
            .filter(|&s| s <= MAX_RULE_TABLE)
            .ok_or_else(|| Error::Unsupported("rule table too large".into()))?;
        let q = domain.order();
        let mut buf = vec![0usize; span];
        let table = (0..size)
            .map(|c| {
                decode_into(c, q, &mut buf);
                f(&buf)
            })
            .collect();
        Self::new(domain, codomain, span, anchor, table)
    }

    /// A rule defined on a subgroup `D ≤ F^span` given by sorted codes.
    pub fn partial(
        domain: Group,
        codomain: Group,
        span: usize,
        anchor: i64,
        codes: Vec<u64>,
        images: Vec<usize>,
    ) -> Result<SlidingBlockHom> {
        if span == 0 || codes.len() != images.len() || codes.first() != Some(&0) {
            return Err(Error::InvalidHom("malformed partial rule".into()));
        }
        if codes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidHom("domain codes must be sorted".into()));
        }
        if images[0] != 0 || images.iter().any(|&y| y >= codomain.order()) {
            return Err(Error::InvalidHom("rule images invalid".into()));
        }
        let find = |c: u64| codes.binary_search(&c).ok();
        for g in block_generators(&domain, span, &codes) {
            let gi = find(g).ok_or_else(|| Error::InvalidHom("domain is not a group".into()))?;
            for (i, &x) in codes.iter().enumerate() {
                let xg = super::sft::block_mul(&domain, x, g, span);
                let j = find(xg).ok_or_else(|| Error::InvalidHom("domain is not a group".into()))?;
                if images[j] != codomain.mul(images[i], images[gi]) {
                    return Err(Error::InvalidHom("rule is not multiplicative on its domain".into()));
                }
            }
        }
        Ok(SlidingBlockHom {
            domain,
            codomain,
            span,
            anchor,
            rule: Rule::Partial {
                codes,
                images: images.into_iter().map(|y| y as u32).collect(),
            },
        })
    }

    pub fn identity(g: &Group) -> SlidingBlockHom {
        SlidingBlockHom {
            domain: g.clone(),
            codomain: g.clone(),
            span: 1,
            anchor: 0,
            rule: Rule::Full((0..g.order() as u32).collect()),
        }
    }

    /// The symbolwise map induced by a homomorphism of alphabets.
    pub fn symbolwise(h: &FiniteHom) -> SlidingBlockHom {
        SlidingBlockHom {
            domain: h.domain().clone(),
            codomain: h.codomain().clone(),
            span: 1,
            anchor: 0,
            rule: Rule::Full(h.map().iter().map(|&y| y as u32).collect()),
        }
    }

    /// `φ(f)(n) = Σ_j coeffs[j]·f(n+anchor+j)` over `C_p`.
    pub fn linear(cp: &Group, coeffs: &[i64], anchor: i64) -> Result<SlidingBlockHom> {
        let p = cp.order() as i64;
        Self::from_fn(cp.clone(), cp.clone(), coeffs.len(), anchor, |w| {
            w.iter()
                .zip(coeffs)
                .map(|(&x, &c)| x as i64 * c)
                .sum::<i64>()
                .rem_euclid(p) as usize
        })
    }

    /// Projection of `A×B` (as built by `direct_product`) onto `A`.
    pub fn first_projection(a: &Group, b: &Group) -> SlidingBlockHom {
        let ab = direct_product(a, b);
        let nb = b.order();
        SlidingBlockHom {
            rule: Rule::Full((0..ab.order()).map(|x| (x / nb) as u32).collect()),
            domain: ab,
            codomain: a.clone(),
            span: 1,
            anchor: 0,
        }
    }

    /// Projection of `A×B` onto `B`.
    pub fn second_projection(a: &Group, b: &Group) -> SlidingBlockHom {
        let ab = direct_product(a, b);
        let nb = b.order();
        SlidingBlockHom {
            rule: Rule::Full((0..ab.order()).map(|x| (x % nb) as u32).collect()),
            domain: ab,
            codomain: b.clone(),
            span: 1,
            anchor: 0,
        }
    }

    /// The same rule reading its window from a different offset.
    pub fn with_anchor(&self, anchor: i64) -> SlidingBlockHom {
        SlidingBlockHom {
            anchor,
            ..self.clone()
        }
    }

    pub fn domain(&self) -> &Group {
        &self.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.codomain
    }

    pub fn span(&self) -> usize {
        self.span
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    pub fn is_partial(&self) -> bool {
        matches!(self.rule, Rule::Partial { .. })
    }

    /// Image of the window with the given code, if the window is in the domain.
    pub fn eval_code(&self, code: u64) -> Option<usize> {
        match &self.rule {
            Rule::Full(t) => t.get(code as usize).map(|&y| y as usize),
            Rule::Partial { codes, images } => codes.binary_search(&code).ok().map(|i| images[i] as usize),
        }
    }

    pub fn eval(&self, window: &[usize]) -> Option<usize> {
        self.eval_code(encode(window, self.domain.order()))
    }

    /// Images at every offset of a word of length `n + span - 1`, as a code of length `n`.
    pub(crate) fn map_code(&self, code: u64, len: usize) -> Option<u64> {
        let q = self.domain.order() as u64;
        let qc = self.codomain.order() as u64;
        let k = self.span;
        let sub = q.pow(k as u32);
        let mut out = 0u64;
        let mut scale = 1u64;
        let mut c = code;
        for _ in 0..=(len - k) {
            let y = self.eval_code(c % sub)? as u64;
            out += y * scale;
            scale *= qc;
            c /= q;
        }
        Some(out)
    }

    pub fn apply(&self, f: &EPWord) -> Result<EPWord> {
        if !same_group(f.alphabet(), &self.domain) {
            return Err(Error::AlphabetMismatch);
        }
        let k = self.span as i64;
        let a = f.start() - self.anchor - k + 1;
        let b = (f.end() - self.anchor).max(a);
        let mut bad = false;
        let mut buf = vec![0usize; self.span];
        let mut value = |n: i64| -> usize {
            for (i, slot) in buf.iter_mut().enumerate() {
                *slot = f.at(n + self.anchor + i as i64);
            }
            match self.eval(&buf) {
                Some(y) => y,
                None => {
                    bad = true;
                    0
                }
            }
        };
        let left_len = f.left().len();
        let right_len = f.right().len();
        let vals: Vec<(i64, usize)> = (a - left_len as i64..b + right_len as i64).map(|n| (n, value(n))).collect();
        if bad {
            return Err(Error::InvalidHom("word leaves the rule's domain".into()));
        }
        let lookup = |n: i64| vals[(n - (a - left_len as i64)) as usize].1;
        Ok(EPWord::from_fn(self.codomain.clone(), left_len, a, b, right_len, lookup))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SlidingBlockHom) -> Result<SlidingBlockHom> {
        if !same_group(other.codomain(), &self.domain) {
            return Err(Error::AlphabetMismatch);
        }
        if other.is_partial() {
            return Err(Error::Unsupported("composition with a partial rule".into()));
        }
        let span = self.span + other.span - 1;
        let inner = other.span;
        let q = other.domain.order();
        let composed = SlidingBlockHom::from_fn(other.domain.clone(), self.codomain.clone(), span, 0, |w| {
            let mid: Vec<usize> = (0..self.span)
                .map(|i| other.eval_code(encode(&w[i..i + inner], q)).unwrap_or(0))
                .collect();
            self.eval(&mid).unwrap_or(0)
        });
        composed.map(|c| c.with_anchor(self.anchor + other.anchor))
    }

    fn check_domain(&self, h: &GroupShiftSFT) -> Result<()> {
        if !same_group(h.alphabet(), &self.domain) {
            return Err(Error::AlphabetMismatch);
        }
        if let Rule::Partial { codes, .. } = &self.rule {
            for c in h.language(self.span)? {
                if codes.binary_search(&c).is_err() {
                    return Err(Error::PreconditionFailed("shift has windows outside the rule's domain".into()));
                }
            }
        }
        Ok(())
    }

    /// Legal `W`-blocks of `h` all of whose `span`-windows map to the identity,
    /// with `W = max(window, span)`. Not trimmed.
    fn kernel_blocks(&self, h: &GroupShiftSFT) -> Result<(usize, Vec<u64>)> {
        let w = h.window().max(self.span);
        let lifted = h.lift(w)?;
        let codes = lifted
            .codes()
            .iter()
            .copied()
            .filter(|&c| self.map_code(c, w) == Some(0))
            .collect();
        Ok((w, codes))
    }
}

/// Checks that a table on `F^k` is a homomorphism: each coordinate restriction
/// is a homomorphism, images of distinct coordinates commute, and the rule is
/// the product of its coordinate restrictions.
fn check_product_hom(domain: &Group, codomain: &Group, span: usize, table: &[usize]) -> Result<()> {
    let q = domain.order();
    let scale: Vec<u64> = (0..span).map(|i| (q as u64).pow(i as u32)).collect();
    let coord: Vec<Vec<usize>> = (0..span)
        .map(|i| (0..q).map(|a| table[(a as u64 * scale[i]) as usize]).collect())
        .collect();
    if table[0] != 0 {
        return Err(Error::InvalidHom("identity not preserved".into()));
    }
    for (i, r) in coord.iter().enumerate() {
        for a in 0..q {
            for b in 0..q {
                if r[domain.mul(a, b)] != codomain.mul(r[a], r[b]) {
                    return Err(Error::InvalidHom(format!("coordinate {i} is not multiplicative")));
                }
            }
        }
    }
    for i in 0..span {
        for j in i + 1..span {
            for a in 0..q {
                for b in 0..q {
                    if !codomain.commute(coord[i][a], coord[j][b]) {
                        return Err(Error::InvalidHom(format!("images of coordinates {i} and {j} do not commute")));
                    }
                }
            }
        }
    }
    let mut buf = vec![0usize; span];
    for (c, &y) in table.iter().enumerate() {
        decode_into(c as u64, q, &mut buf);
        let prod = buf.iter().enumerate().fold(0, |acc, (i, &a)| codomain.mul(acc, coord[i][a]));
        if prod != y {
            return Err(Error::InvalidHom("rule is not a product of coordinate maps".into()));
        }
    }
    Ok(())
}

pub fn apply_hom(phi: &SlidingBlockHom, f: &EPWord) -> Result<EPWord> {
    phi.apply(f)
}

/// `{f ∈ H : φ(f) = 1}`, presented at window `l + span - 1`.
pub fn kernel_sft(phi: &SlidingBlockHom, h: &GroupShiftSFT) -> Result<GroupShiftSFT> {
    phi.check_domain(h)?;
    let w = h.window() + phi.span - 1;
    let lifted = h.lift(w)?;
    let codes: Vec<u64> = lifted
        .codes()
        .iter()
        .copied()
        .filter(|&c| phi.map_code(c, w) == Some(0))
        .collect();
    Ok(GroupShiftSFT::from_codes_unchecked(h.alphabet().clone(), w, codes).trim())
}

/// `{f ∈ H : φ(f) ∈ S}`.
pub fn preimage_sft(phi: &SlidingBlockHom, h: &GroupShiftSFT, s: &GroupShiftSFT) -> Result<GroupShiftSFT> {
    phi.check_domain(h)?;
    if !same_group(s.alphabet(), &phi.codomain) {
        return Err(Error::AlphabetMismatch);
    }
    let m = s.window();
    let inner = phi.span + m - 1;
    let w = h.window().max(inner);
    let lifted = h.lift(w)?;
    let target = s.trimmed_codes();
    let q = h.alphabet().order() as u64;
    let sub = q.pow(inner as u32);
    let codes: Vec<u64> = lifted
        .codes()
        .iter()
        .copied()
        .filter(|&c| {
            let mut x = c;
            for _ in 0..=(w - inner) {
                match phi.map_code(x % sub, inner) {
                    Some(y) if target.binary_search(&y).is_ok() => {}
                    _ => return false,
                }
                x /= q;
            }
            true
        })
        .collect();
    Ok(GroupShiftSFT::from_codes_unchecked(h.alphabet().clone(), w, codes).trim())
}

pub fn image_sft(phi: &SlidingBlockHom, h: &GroupShiftSFT) -> Result<(GroupShiftSFT, ImageCertificate)> {
    image_sft_with(phi, h, &Ctx::default())
}

/// `φ(H)` presented by its legal `w`-words for the least `w` whose
/// presentation has the same language as the image at every length up to
/// the verification length `max(2(l+k), w+1)`. Languages are compared by
/// exact counts: the image language is the homomorphic image of
/// `Lang_{n+k-1}(H)` and its size is the quotient by the block-level kernel.
pub fn image_sft_with(phi: &SlidingBlockHom, h: &GroupShiftSFT, ctx: &Ctx) -> Result<(GroupShiftSFT, ImageCertificate)> {
    phi.check_domain(h)?;
    let l = h.window();
    let k = phi.span;
    let cap = ctx.cap_or(2 * (l + k));
    let (kw, kblocks) = phi.kernel_blocks(h)?;
    let q = h.alphabet().order();
    let image_count = |n: usize| -> u128 {
        let big = (n + k - 1).max(kw);
        // Words of length `big` map onto image words of length `big - k + 1`;
        // the count at length n follows because legal words extend.
        let total = h.count_words(big);
        let kern = count_paths(q, kw, &kblocks, big);
        let _ = n;
        total / kern
    };
    for w in 1..=cap {
        ctx.checkpoint()?;
        let lang = h.language(w + k - 1)?;
        let mut img: Vec<u64> = lang.iter().filter_map(|&c| phi.map_code(c, w + k - 1)).collect();
        img.sort_unstable();
        img.dedup();
        let y = GroupShiftSFT::from_codes_unchecked(phi.codomain.clone(), w, img).trim();
        let verify = (2 * (l + k)).max(w + 1);
        let mut ok = true;
        for n in w + 1..=verify {
            let big = (n + k - 1).max(kw);
            let image_len = big - k + 1;
            if y.count_words(image_len) != image_count(n) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok((
                y,
                ImageCertificate {
                    window: w,
                    verified_length: verify.max(kw - k + 1),
                },
            ));
        }
    }
    Err(Error::WidthExceeded { cap })
}

/// `{(φ(x), x)}` over the alphabet `F' × F`, for a rule defined on all of `F^span`.
pub fn graph_subgroup(phi: &SlidingBlockHom) -> Result<GroupShiftSFT> {
    if phi.is_partial() {
        return Err(Error::Unsupported("graph of a partial rule".into()));
    }
    let f = phi.domain.order();
    let alphabet = direct_product(&phi.codomain, &phi.domain);
    let lo = phi.anchor.min(0);
    let hi = (phi.anchor + phi.span as i64).max(1);
    let width = (hi - lo) as usize;
    let offset = (-lo) as usize;
    let x_at = (offset as i64 + phi.anchor) as usize;
    let qa = alphabet.order();
    code_space(qa, width).ok_or_else(|| Error::Unsupported("graph window too wide".into()))?;
    let nf = code_space(f, width).ok_or_else(|| Error::Unsupported("graph window too wide".into()))?;
    let ny = code_space(phi.codomain.order(), width - 1).unwrap_or(1);
    let mut codes = Vec::new();
    let mut word = vec![0usize; width];
    for xc in 0..nf {
        let x = decode(xc, f, width);
        let y0 = phi.eval(&x[x_at..x_at + phi.span]).expect("full rule");
        for yc in 0..ny {
            let others = decode(yc, phi.codomain.order(), width - 1);
            let mut it = others.into_iter();
            for (i, slot) in word.iter_mut().enumerate() {
                let y = if i == offset { y0 } else { it.next().unwrap() };
                *slot = y * f + x[i];
            }
            codes.push(encode(&word, qa));
        }
    }
    codes.sort_unstable();
    GroupShiftSFT::from_codes(alphabet, width, codes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_cyclic, symmetric_group};

    fn sum_rule(p: usize) -> SlidingBlockHom {
        SlidingBlockHom::linear(&make_cyclic(p).unwrap(), &[1, 1], 0).unwrap()
    }

    #[test]
    fn apply_sum_rule() {
        let c2 = make_cyclic(2).unwrap();
        let phi = sum_rule(2);
        assert!(phi.apply(&EPWord::constant(&c2, 1)).unwrap().is_identity());
        let img = phi.apply(&EPWord::delta(&c2, 1, 0)).unwrap();
        assert_eq!(img.support(), Some((-1, 0)));
    }

    #[test]
    fn kernel_and_image() {
        let c2 = make_cyclic(2).unwrap();
        let full = GroupShiftSFT::full(&c2);
        let phi = sum_rule(2);
        let k = kernel_sft(&phi, &full).unwrap();
        assert!(k.same_points(&GroupShiftSFT::constants(&c2)).unwrap());
        let (img, cert) = image_sft(&phi, &full).unwrap();
        assert!(img.same_points(&full).unwrap());
        assert_eq!(cert.window, 1);
    }

    #[test]
    fn non_homomorphic_rules_rejected() {
        let s3 = symmetric_group(3).unwrap();
        // Multiplying two neighbours is not a homomorphism of S_3 x S_3.
        let bad = SlidingBlockHom::from_fn(s3.clone(), s3.clone(), 2, 0, |w| s3.mul(w[0], w[1]));
        assert!(bad.is_err());
        let c2 = make_cyclic(2).unwrap();
        assert!(SlidingBlockHom::from_fn(c2.clone(), c2.clone(), 1, 0, |_| 1).is_err());
    }

    #[test]
    fn graph_of_sum_rule() {
        let phi = sum_rule(2);
        let g = graph_subgroup(&phi).unwrap();
        assert_eq!(g.window(), 2);
        assert_eq!(g.num_blocks(), 8);
        let c2 = make_cyclic(2).unwrap();
        let proj = SlidingBlockHom::second_projection(&c2, &c2);
        let (img, _) = image_sft(&proj, &g).unwrap();
        assert!(img.same_points(&GroupShiftSFT::full(&c2)).unwrap());
    }

    #[test]
    fn image_of_projection_is_constrained() {
        // Image of the graph under the first projection is again the full shift,
        // the image of a rule with a nontrivial kernel.
        let c3 = make_cyclic(3).unwrap();
        let phi = SlidingBlockHom::linear(&c3, &[1, -1], 0).unwrap();
        let (img, _) = image_sft(&phi, &GroupShiftSFT::full(&c3)).unwrap();
        assert!(img.same_points(&GroupShiftSFT::full(&c3)).unwrap());
        let k = kernel_sft(&phi, &GroupShiftSFT::full(&c3)).unwrap();
        assert_eq!(k.finite_order(), Some(3));
    }

    #[test]
    fn preimage_of_trivial_is_kernel() {
        let c2 = make_cyclic(2).unwrap();
        let full = GroupShiftSFT::full(&c2);
        let phi = sum_rule(2);
        let pre = preimage_sft(&phi, &full, &GroupShiftSFT::trivial(&c2)).unwrap();
        assert!(pre.same_points(&kernel_sft(&phi, &full).unwrap()).unwrap());
    }
}
