use serde::Serialize;

use crate::abelian::prime_field;
use crate::algebra::{all_homs, code_space, make_cyclic, SubgroupF};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::shift::{image_sft_with, kernel_sft, same_group, EPWord, GroupShiftSFT, SlidingBlockHom};
use crate::structure::{depth, nub};

/// Surjectivity and kernel data for one connector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectorCheck {
    pub onto: bool,
    pub image_window: usize,
    pub kernel_order: Option<usize>,
}

/// Levels `0..=N` of an inverse system with connectors
/// `connectors[n] : levels[n+1] → levels[n]`, each checked to be onto.
#[derive(Clone, Debug)]
pub struct InverseSystem {
    levels: Vec<GroupShiftSFT>,
    connectors: Vec<SlidingBlockHom>,
    checks: Vec<ConnectorCheck>,
}

/// A compatible tuple `(x_0, ..., x_N)` with `φ(x_{n+1}) = x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedElement {
    pub words: Vec<EPWord>,
}

impl InverseSystem {
    pub fn new(levels: Vec<GroupShiftSFT>, connectors: Vec<SlidingBlockHom>, ctx: &Ctx) -> Result<InverseSystem> {
        if levels.len() != connectors.len() + 1 || connectors.is_empty() {
            return Err(Error::PreconditionFailed("need N+1 levels and N ≥ 1 connectors".into()));
        }
        let mut checks = Vec::new();
        for (n, c) in connectors.iter().enumerate() {
            ctx.checkpoint()?;
            let (img, cert) = image_sft_with(c, &levels[n + 1], ctx)?;
            let onto = same_group(img.alphabet(), levels[n].alphabet()) && img.same_points(&levels[n])?;
            if !onto {
                return Err(Error::PreconditionFailed(format!("connector {} is not onto level {n}", n + 1)));
            }
            checks.push(ConnectorCheck {
                onto,
                image_window: cert.window,
                kernel_order: kernel_sft(c, &levels[n + 1])?.finite_order(),
            });
        }
        Ok(InverseSystem {
            levels,
            connectors,
            checks,
        })
    }

    pub fn levels(&self) -> &[GroupShiftSFT] {
        &self.levels
    }

    pub fn connectors(&self) -> &[SlidingBlockHom] {
        &self.connectors
    }

    pub fn checks(&self) -> &[ConnectorCheck] {
        &self.checks
    }

    /// Number of connectors `N`.
    pub fn depth_levels(&self) -> usize {
        self.connectors.len()
    }

    /// The tuple determined by its top coordinate.
    pub fn from_top(&self, top: &EPWord) -> Result<TruncatedElement> {
        if !self.levels.last().unwrap().contains(top)? {
            return Err(Error::PreconditionFailed("top word is not a point of the top level".into()));
        }
        let mut words = vec![top.clone()];
        for c in self.connectors.iter().rev() {
            let next = c.apply(words.last().unwrap())?;
            words.push(next);
        }
        words.reverse();
        Ok(TruncatedElement { words })
    }

    /// Checks membership and compatibility of a proposed tuple.
    pub fn element(&self, words: Vec<EPWord>) -> Result<TruncatedElement> {
        if words.len() != self.levels.len() {
            return Err(Error::PreconditionFailed("one word per level is required".into()));
        }
        for (n, w) in words.iter().enumerate() {
            if !self.levels[n].contains(w)? {
                return Err(Error::PreconditionFailed(format!("word at level {n} is not a point")));
            }
        }
        for (n, c) in self.connectors.iter().enumerate() {
            if c.apply(&words[n + 1])? != words[n] {
                return Err(Error::PreconditionFailed(format!("words at levels {n} and {} are not compatible", n + 1)));
            }
        }
        Ok(TruncatedElement { words })
    }

    pub fn level_depths(&self) -> Result<Vec<usize>> {
        self.levels.iter().map(|l| depth(l).map(|d| d.depth)).collect()
    }

    /// For each connector, whether the nub of the image is the image of the nub.
    pub fn ergquot_checks(&self, ctx: &Ctx) -> Result<Vec<bool>> {
        let mut out = Vec::new();
        for (n, c) in self.connectors.iter().enumerate() {
            let top = &self.levels[n + 1];
            let (image_of_nub, _) = image_sft_with(c, &nub(top)?.nub, ctx)?;
            let (img, _) = image_sft_with(c, top, ctx)?;
            out.push(nub(&img)?.nub.same_points(&image_of_nub)?);
        }
        Ok(out)
    }
}

/// `φ(f)(n) = f(n) − f(n+1)` over `C_p`.
pub fn difference_rule(p: u64) -> Result<SlidingBlockHom> {
    let cp = make_cyclic(p as usize)?;
    prime_field(&cp)?;
    SlidingBlockHom::linear(&cp, &[1, -1], 0)
}

pub fn build_example_5_6(p: u64, levels: usize) -> Result<InverseSystem> {
    build_example_5_6_with(p, levels, &Ctx::default())
}

/// `N + 1` copies of `C_p^Z` joined by the difference rule.
pub fn build_example_5_6_with(p: u64, n: usize, ctx: &Ctx) -> Result<InverseSystem> {
    if n == 0 {
        return Err(Error::PreconditionFailed("at least one connector is required".into()));
    }
    let phi = difference_rule(p)?;
    let full = GroupShiftSFT::full(phi.domain());
    InverseSystem::new(vec![full; n + 1], vec![phi; n], ctx)
}

/// Whether the support of `φ(f)` is exactly `[min supp f − 1, max supp f]`.
pub fn support_growth_check(f: &EPWord) -> Result<bool> {
    let p = prime_field(f.alphabet())?;
    let (lo, hi) = f
        .support()
        .ok_or_else(|| Error::PreconditionFailed("word must be finitely supported and nonidentity".into()))?;
    let image = difference_rule(p)?.apply(f)?;
    Ok(image.support() == Some((lo - 1, hi)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportGrowthReport {
    pub p: u64,
    pub max_width: usize,
    pub words_checked: u64,
    pub holds: bool,
}

/// Runs the support growth check on every word whose support is exactly
/// `[0, w)` for `w ≤ max_width`, evaluating the rule on windows directly.
pub fn support_growth_exhaustive(p: u64, max_width: usize) -> Result<SupportGrowthReport> {
    let phi = difference_rule(p)?;
    let q = p as usize;
    let mut checked = 0u64;
    let mut holds = true;
    for w in 1..=max_width {
        // word on [-1, w+1): identity padding on both sides
        let mut word = vec![0usize; w + 2];
        let mut digits = vec![0usize; w];
        loop {
            if digits[0] != 0 && digits[w - 1] != 0 {
                word[1..=w].copy_from_slice(&digits);
                let image: Vec<usize> = (0..=w).map(|i| phi.eval(&word[i..i + 2]).unwrap()).collect();
                // image[i] is φ(f)(i-1); expected support [-1, w-1]
                let first = image.iter().position(|&x| x != 0);
                let last = image.iter().rposition(|&x| x != 0);
                holds &= first == Some(0) && last == Some(w);
                checked += 1;
            }
            let mut i = 0;
            while i < w {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == w {
                break;
            }
        }
    }
    Ok(SupportGrowthReport {
        p,
        max_width,
        words_checked: checked,
        holds,
    })
}

/// Exhaustive bound behind the claim that the truncated limit has no
/// nonidentity element whose coordinates are all finitely supported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomoclinicCertificate {
    pub p: u64,
    pub depth_budget: usize,
    pub levels: usize,
    pub words_checked: u64,
    /// Longest chain of finitely supported preimages found from any word
    /// of support width at most the budget.
    pub longest_lift_chain: usize,
    pub issued: bool,
}

/// Finitely supported preimages of `y` (given on `[0, w)` with nonzero ends)
/// under `φ`, by exhaustive search over words on `[0, w)`. A preimage is
/// constant on each side of `[0, w)`, so a finitely supported one vanishes there.
fn finite_preimages(phi: &SlidingBlockHom, q: usize, y: &[usize], budget: &mut u64) -> Result<Vec<Vec<usize>>> {
    let w = y.len();
    let mut out = Vec::new();
    let mut x = vec![0usize; w];
    let mut padded = vec![0usize; w + 2];
    loop {
        if *budget == 0 {
            return Err(Error::WidthExceeded { cap: w });
        }
        *budget -= 1;
        padded[1..=w].copy_from_slice(&x);
        // φ(x) on [-1, w]: must equal y on [0, w) and vanish at -1 and w
        let ok = (0..=w).all(|i| {
            let v = phi.eval(&padded[i..i + 2]).unwrap();
            let target = if i == 0 { 0 } else { y[i - 1] };
            v == target
        }) && phi.eval(&[padded[w + 1], 0]).unwrap() == 0;
        if ok && x.iter().any(|&s| s != 0) {
            // trim to the support so the next level sees nonzero ends
            let lo = x.iter().position(|&s| s != 0).unwrap();
            let hi = x.iter().rposition(|&s| s != 0).unwrap();
            out.push(x[lo..=hi].to_vec());
        }
        let mut i = 0;
        while i < w {
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == w {
            break;
        }
    }
    Ok(out)
}

fn lift_chain(phi: &SlidingBlockHom, q: usize, y: &[usize], budget: &mut u64) -> Result<usize> {
    let mut best = 0;
    for x in finite_preimages(phi, q, y, budget)? {
        best = best.max(1 + lift_chain(phi, q, &x, budget)?);
    }
    Ok(best)
}

pub fn homoclinic_trivial_certificate(system: &InverseSystem, d: usize) -> Result<HomoclinicCertificate> {
    homoclinic_trivial_certificate_with(system, d, &Ctx::default())
}

/// For every nonzero word of support width at most `d`, finds the longest
/// chain of finitely supported preimages. When every chain is shorter than
/// `d` and the system has at least `d` connectors, a compatible tuple with
/// all coordinates finitely supported and level-0 width at most `d` must be
/// the identity.
pub fn homoclinic_trivial_certificate_with(system: &InverseSystem, d: usize, ctx: &Ctx) -> Result<HomoclinicCertificate> {
    let n = system.depth_levels();
    if n < d {
        return Err(Error::WidthExceeded { cap: n });
    }
    let phi = system.connectors()[0].clone();
    let q = phi.domain().order();
    let p = prime_field(phi.domain())?;
    if system.connectors().iter().any(|c| c.eval(&[0, 1]) != phi.eval(&[0, 1]) || c.span() != 2) {
        return Err(Error::PreconditionFailed("system must use the difference rule throughout".into()));
    }
    let mut budget = ctx.budget;
    let mut checked = 0u64;
    let mut longest = 0;
    for w in 1..=d {
        let mut digits = vec![0usize; w];
        loop {
            ctx.checkpoint()?;
            if digits[0] != 0 && digits[w - 1] != 0 {
                longest = longest.max(lift_chain(&phi, q, &digits, &mut budget)?);
                checked += 1;
            }
            let mut i = 0;
            while i < w {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == w {
                break;
            }
        }
    }
    Ok(HomoclinicCertificate {
        p,
        depth_budget: d,
        levels: n,
        words_checked: checked,
        longest_lift_chain: longest,
        issued: longest < d,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelExponents {
    pub level: usize,
    pub subgroup_exponent: usize,
    pub quotient_exponent: usize,
    pub total_exponent: usize,
    /// A point of order 4, the non-splitting witness.
    pub order_four_witness: String,
    pub subgroup_stable: bool,
}

impl LevelExponents {
    pub fn holds(&self) -> bool {
        self.subgroup_exponent == 2 && self.quotient_exponent == 2 && self.total_exponent == 4 && self.subgroup_stable
    }
}

/// `N + 1` copies of `C_4^Z` joined by the difference rule, with the
/// exponents of `(2C_4)^Z`, of the quotient by it and of the level.
pub fn build_example_c4(n: usize) -> Result<(InverseSystem, Vec<LevelExponents>)> {
    let ctx = Ctx::default();
    if n == 0 {
        return Err(Error::PreconditionFailed("at least one connector is required".into()));
    }
    let c4 = make_cyclic(4)?;
    let phi = SlidingBlockHom::linear(&c4, &[1, -1], 0)?;
    let full = GroupShiftSFT::full(&c4);
    let system = InverseSystem::new(vec![full; n + 1], vec![phi.clone(); n], &ctx)?;
    let two = SubgroupF::from_members(&c4, &[0, 2])?;
    let (_, reduce) = two.quotient("C2")?;
    let reduce = SlidingBlockHom::symbolwise(&reduce);
    let mut report = Vec::new();
    for (level, g) in system.levels().iter().enumerate() {
        let sub = g.intersect(&GroupShiftSFT::symbol_subgroup(&c4, two.members())?)?;
        let (quot, _) = image_sft_with(&reduce, g, &ctx)?;
        let (moved, _) = image_sft_with(&phi, &sub, &ctx)?;
        let witness = EPWord::delta(&c4, 1, 0);
        if !g.contains(&witness)? || witness.order() != 4 {
            return Err(Error::InternalInconsistency("order four witness missing".into()));
        }
        report.push(LevelExponents {
            level,
            subgroup_exponent: sub.exponent(),
            quotient_exponent: quot.exponent(),
            total_exponent: g.exponent(),
            order_four_witness: witness.to_string(),
            subgroup_stable: moved.is_subset_of(&sub)?,
        });
    }
    Ok((system, report))
}

#[derive(Clone, Debug)]
pub struct RightInverseSearch {
    pub max_span: usize,
    pub candidates: u64,
    /// A rule `ψ` with `φ ∘ ψ = id`, if one was found.
    pub found: Option<SlidingBlockHom>,
}

pub fn no_sliding_right_inverse(phi: &SlidingBlockHom, max_span: usize) -> Result<bool> {
    Ok(right_inverse_search(phi, max_span, &Ctx::default())?.found.is_none())
}

/// Tries every homomorphic rule `ψ : F'^k → F` with `k ≤ max_span`, built
/// from tuples of homomorphisms `F' → F` with commuting images, and checks
/// whether `φ ∘ ψ` is a coordinate projection on all words of its span.
pub fn right_inverse_search(phi: &SlidingBlockHom, max_span: usize, ctx: &Ctx) -> Result<RightInverseSearch> {
    let (f, fp) = (phi.domain().clone(), phi.codomain().clone());
    let (img, _) = image_sft_with(phi, &GroupShiftSFT::full(&f), ctx)?;
    if !img.same_points(&GroupShiftSFT::full(&fp))? {
        return Err(Error::PreconditionFailed("map is not onto the full shift".into()));
    }
    let homs: Vec<Vec<usize>> = all_homs(&fp, &f).into_iter().map(|h| h.map().to_vec()).collect();
    let commute = |a: &[usize], b: &[usize]| a.iter().all(|&x| b.iter().all(|&y| f.commute(x, y)));
    let q = fp.order();
    let mut candidates = 0u64;
    for k in 1..=max_span {
        let mut pick = vec![0usize; k];
        loop {
            ctx.checkpoint()?;
            candidates += 1;
            if candidates > ctx.budget {
                return Err(Error::WidthExceeded { cap: k });
            }
            let choice: Vec<&Vec<usize>> = pick.iter().map(|&i| &homs[i]).collect();
            let ok = (0..k).all(|i| (i + 1..k).all(|j| commute(choice[i], choice[j])));
            if ok {
                let psi = SlidingBlockHom::from_fn(fp.clone(), f.clone(), k, 0, |w| {
                    w.iter().zip(&choice).fold(0, |acc, (&x, h)| f.mul(acc, h[x]))
                })?;
                let comp = phi.compose(&psi)?;
                let span = comp.span();
                let size = code_space(q, span).ok_or_else(|| Error::Unsupported("composite span too wide".into()))?;
                for j in 0..span {
                    let scale = (q as u64).pow(j as u32);
                    if (0..size).all(|c| comp.eval_code(c) == Some(((c / scale) % q as u64) as usize)) {
                        let anchor = psi.anchor() - (comp.anchor() + j as i64);
                        return Ok(RightInverseSearch {
                            max_span,
                            candidates,
                            found: Some(psi.with_anchor(anchor)),
                        });
                    }
                }
            }
            let mut i = 0;
            while i < k {
                pick[i] += 1;
                if pick[i] < homs.len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    Ok(RightInverseSearch {
        max_span,
        candidates,
        found: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_5_6_levels() {
        let s = build_example_5_6(2, 4).unwrap();
        assert_eq!(s.connectors().len(), 4);
        assert!(s.checks().iter().all(|c| c.kernel_order == Some(2)));
        assert_eq!(s.level_depths().unwrap(), vec![2; 5]);
        let s3 = build_example_5_6(3, 2).unwrap();
        assert!(s3.checks().iter().all(|c| c.kernel_order == Some(3)));
        assert!(s3.ergquot_checks(&Ctx::default()).unwrap().iter().all(|&b| b));
    }

    #[test]
    fn support_growth() {
        let c2 = make_cyclic(2).unwrap();
        assert!(support_growth_check(&EPWord::delta(&c2, 1, 0)).unwrap());
        let c3 = make_cyclic(3).unwrap();
        let f = EPWord::finite(&c3, 2, vec![1, 0, 2, 1]).unwrap();
        assert!(support_growth_check(&f).unwrap());
        assert!(matches!(
            support_growth_check(&EPWord::constant(&c2, 1)),
            Err(Error::PreconditionFailed(_))
        ));
        let r = support_growth_exhaustive(3, 6).unwrap();
        assert!(r.holds);
        assert_eq!(r.words_checked, 2 + (2..=6).map(|w| 4 * 3u64.pow(w - 2)).sum::<u64>());
    }

    #[test]
    fn homoclinic_certificate() {
        let s = build_example_5_6(2, 6).unwrap();
        let c = homoclinic_trivial_certificate(&s, 4).unwrap();
        assert!(c.issued);
        assert!(c.longest_lift_chain < 4);
        let s = build_example_5_6(3, 5).unwrap();
        assert!(homoclinic_trivial_certificate(&s, 3).unwrap().issued);
        let short = build_example_5_6(2, 2).unwrap();
        assert!(matches!(homoclinic_trivial_certificate(&short, 4), Err(Error::WidthExceeded { .. })));
    }

    #[test]
    fn truncated_elements() {
        let s = build_example_5_6(2, 3).unwrap();
        let c2 = make_cyclic(2).unwrap();
        let top = EPWord::periodic(&c2, vec![1, 1, 0, 0]).unwrap();
        let e = s.from_top(&top).unwrap();
        assert_eq!(s.element(e.words.clone()).unwrap(), e);
        let mut bad = e.words.clone();
        bad[0] = EPWord::constant(&c2, 1);
        assert!(s.element(bad).is_err());
    }

    #[test]
    fn right_inverses() {
        let c2 = make_cyclic(2).unwrap();
        let sum = SlidingBlockHom::linear(&c2, &[1, 1], 0).unwrap();
        assert!(no_sliding_right_inverse(&sum, 4).unwrap());
        let id = SlidingBlockHom::identity(&c2);
        let r = right_inverse_search(&id, 1, &Ctx::default()).unwrap();
        assert!(r.found.is_some());
        let proj = SlidingBlockHom::first_projection(&c2, &c2);
        let r = right_inverse_search(&proj, 1, &Ctx::default()).unwrap();
        let psi = r.found.unwrap();
        let x = EPWord::periodic(&c2, vec![1, 0, 1, 1]).unwrap();
        assert_eq!(proj.apply(&psi.apply(&x).unwrap()).unwrap(), x);
        let shifted = SlidingBlockHom::linear(&c2, &[0, 1], -3).unwrap();
        let psi = right_inverse_search(&shifted, 1, &Ctx::default()).unwrap().found.unwrap();
        assert_eq!(shifted.apply(&psi.apply(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn c4_exponents() {
        let (_, report) = build_example_c4(3).unwrap();
        assert_eq!(report.len(), 4);
        assert!(report.iter().all(LevelExponents::holds));
    }
}
