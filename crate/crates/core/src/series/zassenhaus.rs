use std::collections::HashMap;

use super::opennormal::{find_quotient, first_stage};
use crate::algebra::{code_space, direct_product, encode, find_isomorphism, Group};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::shift::{
    block_generators, close_blocks, image_sft_with, kernel_sft, same_group, GroupShiftSFT, SlidingBlockHom,
};
use crate::structure::{is_topologically_transitive, nub_meet};

/// Largest product language built while certifying a product.
const MAX_PRODUCT_BLOCKS: usize = 1 << 20;

fn intersection_len(a: &[u64], b: &[u64]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub fn product_sft(a: &GroupShiftSFT, b: &GroupShiftSFT) -> Result<GroupShiftSFT> {
    product_sft_with(a, b, &Ctx::default())
}

/// `AB` for subgroups whose product is a group, presented at the least
/// window whose language agrees with `|X||Y|/|X∩Y|` (`X`, `Y` the languages
/// of `A` and `B`) at every length up to `2(l_A + l_B)`.
pub fn product_sft_with(a: &GroupShiftSFT, b: &GroupShiftSFT, ctx: &Ctx) -> Result<GroupShiftSFT> {
    if !same_group(a.alphabet(), b.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    let g = a.alphabet().clone();
    let expected = |n: usize| -> Result<u128> {
        let x = a.language(n)?;
        let y = b.language(n)?;
        Ok(x.len() as u128 * y.len() as u128 / intersection_len(&x, &y) as u128)
    };
    let verify_to = 2 * (a.window() + b.window());
    let cap = ctx.cap_or(verify_to);
    for w in 1..=cap {
        ctx.checkpoint()?;
        let mut gens = block_generators(&g, w, &a.language(w)?);
        gens.extend(block_generators(&g, w, &b.language(w)?));
        let lang = close_blocks(&g, w, &gens, MAX_PRODUCT_BLOCKS)?;
        if lang.len() as u128 != expected(w)? {
            return Err(Error::PreconditionFailed("product of the subgroups is not a subgroup".into()));
        }
        let y = GroupShiftSFT::from_codes_unchecked(g.clone(), w, lang).trim();
        let mut ok = true;
        for n in w + 1..=verify_to.max(w + 1) {
            if y.count_words(n) != expected(n)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(y);
        }
    }
    Err(Error::WidthExceeded { cap })
}

/// Two shift-commuting surjections with finite kernels from a common apex.
#[derive(Clone, Debug)]
pub struct CoCommWitness {
    pub apex: GroupShiftSFT,
    pub maps: [SlidingBlockHom; 2],
    pub targets: [GroupShiftSFT; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct WitnessCheck {
    pub kernel_orders: [Option<usize>; 2],
    pub onto: [bool; 2],
}

impl WitnessCheck {
    pub fn passes(&self) -> bool {
        self.kernel_orders.iter().all(Option::is_some) && self.onto.iter().all(|&b| b)
    }
}

impl CoCommWitness {
    /// Enumerates both kernels and compares both images with the targets.
    pub fn check(&self, ctx: &Ctx) -> Result<WitnessCheck> {
        let mut kernel_orders = [None, None];
        let mut onto = [false, false];
        for i in 0..2 {
            kernel_orders[i] = kernel_sft(&self.maps[i], &self.apex)?.finite_order();
            let (img, _) = image_sft_with(&self.maps[i], &self.apex, ctx)?;
            onto[i] = same_group(img.alphabet(), self.targets[i].alphabet()) && img.same_points(&self.targets[i])?;
        }
        Ok(WitnessCheck { kernel_orders, onto })
    }

    /// `{(x, y) : ψ_1(x) = ψ_2(y)}` joins two witnesses through their
    /// shared target.
    pub fn compose(&self, other: &CoCommWitness) -> Result<CoCommWitness> {
        let mid = &self.targets[1];
        if !same_group(mid.alphabet(), other.targets[0].alphabet()) || !mid.same_points(&other.targets[0])? {
            return Err(Error::PreconditionFailed("witnesses do not share a target".into()));
        }
        let apex = fibre_product(&self.maps[1], &self.apex, &other.maps[0], &other.apex)?;
        let (x, y) = (self.apex.alphabet(), other.apex.alphabet());
        let left = self.maps[0].compose(&SlidingBlockHom::first_projection(x, y))?;
        let right = other.maps[1].compose(&SlidingBlockHom::second_projection(x, y))?;
        Ok(CoCommWitness {
            apex,
            maps: [left, right],
            targets: [self.targets[0].clone(), other.targets[1].clone()],
        })
    }
}

/// `{(x, y) ∈ A × B : ψ_1(x) = ψ_2(y)}` over the product alphabet.
pub fn fibre_product(
    psi1: &SlidingBlockHom,
    a: &GroupShiftSFT,
    psi2: &SlidingBlockHom,
    b: &GroupShiftSFT,
) -> Result<GroupShiftSFT> {
    if !same_group(psi1.codomain(), psi2.codomain()) {
        return Err(Error::AlphabetMismatch);
    }
    let (a1, k1) = (psi1.anchor(), psi1.span() as i64);
    let (a2, k2) = (psi2.anchor(), psi2.span() as i64);
    let lo = a1.min(a2);
    let hi = (a1 + k1).max(a2 + k2);
    let reach = (hi - lo) as usize;
    let w = reach.max(a.window()).max(b.window());
    let qa = a.alphabet().order();
    let qb = b.alphabet().order();
    let alphabet: Group = direct_product(a.alphabet(), b.alphabet());
    code_space(alphabet.order(), w).ok_or_else(|| Error::Unsupported("fibre product window too wide".into()))?;
    let signature = |psi: &SlidingBlockHom, word: &[usize], off: i64| -> Option<Vec<usize>> {
        (0..=(w - reach))
            .map(|t| {
                let s = (t as i64 + off - lo) as usize;
                psi.eval(&word[s..s + psi.span()])
            })
            .collect()
    };
    let mut by_sig: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    for c in b.language(w)? {
        let v = crate::algebra::decode(c, qb, w);
        if let Some(sig) = signature(psi2, &v, a2) {
            by_sig.entry(sig).or_default().push(v);
        }
    }
    let mut codes = Vec::new();
    for c in a.language(w)? {
        let u = crate::algebra::decode(c, qa, w);
        let Some(sig) = signature(psi1, &u, a1) else { continue };
        if let Some(vs) = by_sig.get(&sig) {
            for v in vs {
                let z: Vec<usize> = u.iter().zip(v).map(|(&x, &y)| x * qb + y).collect();
                codes.push(encode(&z, alphabet.order()));
            }
        }
    }
    codes.sort_unstable();
    GroupShiftSFT::from_codes(alphabet, w, codes).map(|s| s.trim())
}

/// A witness for two irreducible pairs: both are images of `F^Z` under the
/// maps of their first opennormal stage, with isomorphic `F`.
pub fn irreducible_witness(y1: &GroupShiftSFT, y2: &GroupShiftSFT, ctx: &Ctx) -> Result<CoCommWitness> {
    let s1 = first_stage(y1, ctx)?;
    let s2 = first_stage(y2, ctx)?;
    let full = GroupShiftSFT::full(&s1.alphabet);
    for (s, y) in [(&s1, y1), (&s2, y2)] {
        let (img, _) = image_sft_with(&s.phi, &GroupShiftSFT::full(&s.alphabet), ctx)?;
        if !img.same_points(y)? {
            return Err(Error::Unsupported("co-commensurability witness for a reducible factor".into()));
        }
    }
    let iso = find_isomorphism(&s1.alphabet, &s2.alphabet, ctx.iso_bound.max(s1.alphabet.order()))?
        .ok_or_else(|| Error::InternalInconsistency("factors of a Zassenhaus pair are not co-commensurable".into()))?;
    let second = s2.phi.compose(&SlidingBlockHom::symbolwise(&iso))?;
    Ok(CoCommWitness {
        apex: full,
        maps: [s1.phi, second],
        targets: [y1.trim(), y2.trim()],
    })
}

#[derive(Clone, Debug)]
pub struct ZassenhausResult {
    /// `L_1(H_1 ∧ L_2)`.
    pub lower1: GroupShiftSFT,
    /// `L_1(H_1 ∧ H_2)`.
    pub upper1: GroupShiftSFT,
    /// `(L_1 ∧ H_2)L_2`.
    pub lower2: GroupShiftSFT,
    /// `(H_1 ∧ H_2)L_2`.
    pub upper2: GroupShiftSFT,
    /// Images of quotient maps presenting `upper_i / lower_i`; `None` for a
    /// trivial factor.
    pub factors: [Option<GroupShiftSFT>; 2],
    /// `None` exactly when both factors are trivial.
    pub witness: Option<CoCommWitness>,
}

fn factor(upper: &GroupShiftSFT, lower: &GroupShiftSFT, ctx: &Ctx) -> Result<Option<GroupShiftSFT>> {
    if lower.same_points(upper)? {
        return Ok(None);
    }
    if !lower.is_normal_in(upper)? {
        return Err(Error::InternalInconsistency("Zassenhaus lower group is not normal".into()));
    }
    if lower.is_trivial() {
        return Ok(Some(upper.clone()));
    }
    let rho = find_quotient(upper, lower, ctx)?;
    Ok(Some(image_sft_with(&rho, upper, ctx)?.0))
}

pub fn zassenhaus(h1: &GroupShiftSFT, l1: &GroupShiftSFT, h2: &GroupShiftSFT, l2: &GroupShiftSFT) -> Result<ZassenhausResult> {
    zassenhaus_with(h1, l1, h2, l2, &Ctx::default())
}

/// The four groups of the Zassenhaus lemma, built with `∧` in place of the
/// intersection, and a co-commensurability witness for the two factors.
pub fn zassenhaus_with(
    h1: &GroupShiftSFT,
    l1: &GroupShiftSFT,
    h2: &GroupShiftSFT,
    l2: &GroupShiftSFT,
    ctx: &Ctx,
) -> Result<ZassenhausResult> {
    let g = h1.alphabet();
    for x in [l1, h2, l2] {
        if !same_group(x.alphabet(), g) {
            return Err(Error::PreconditionFailed("all groups must share one alphabet".into()));
        }
    }
    for (h, l) in [(h1, l1), (h2, l2)] {
        if !l.is_subset_of(h)? || !l.is_normal_in(h)? {
            return Err(Error::PreconditionFailed("L_i must be normal in H_i".into()));
        }
        if !is_topologically_transitive(h) || !is_topologically_transitive(l) {
            return Err(Error::PreconditionFailed("H_i and L_i must be topologically transitive".into()));
        }
    }
    let m12 = nub_meet(h1, h2)?;
    let m1l2 = nub_meet(h1, l2)?;
    let ml12 = nub_meet(l1, h2)?;
    let lower1 = product_sft_with(l1, &m1l2, ctx)?;
    let upper1 = product_sft_with(l1, &m12, ctx)?;
    let lower2 = product_sft_with(&ml12, l2, ctx)?;
    let upper2 = product_sft_with(&m12, l2, ctx)?;
    let f1 = factor(&upper1, &lower1, ctx)?;
    let f2 = factor(&upper2, &lower2, ctx)?;
    let witness = match (&f1, &f2) {
        (None, None) => None,
        (Some(y1), Some(y2)) => Some(if y1.alphabet().order() == y2.alphabet().order()
            && same_group(y1.alphabet(), y2.alphabet())
            && y1.same_points(y2)?
        {
            CoCommWitness {
                apex: y1.clone(),
                maps: [SlidingBlockHom::identity(y1.alphabet()), SlidingBlockHom::identity(y2.alphabet())],
                targets: [y1.clone(), y2.clone()],
            }
        } else {
            irreducible_witness(y1, y2, ctx)?
        }),
        _ => {
            return Err(Error::InternalInconsistency(
                "one Zassenhaus factor is trivial and the other is not".into(),
            ))
        }
    };
    Ok(ZassenhausResult {
        lower1,
        upper1,
        lower2,
        upper2,
        factors: [f1, f2],
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_cyclic;
    use crate::shift::graph_subgroup;

    struct Klein {
        full: GroupShiftSFT,
        h1: GroupShiftSFT,
        h2: GroupShiftSFT,
        hphi: GroupShiftSFT,
        triv: GroupShiftSFT,
    }

    fn klein() -> Klein {
        let c2 = make_cyclic(2).unwrap();
        let g = direct_product(&c2, &c2);
        let phi = SlidingBlockHom::linear(&c2, &[1, 1], 0).unwrap();
        Klein {
            full: GroupShiftSFT::full(&g),
            h1: GroupShiftSFT::symbol_subgroup(&g, &[0, 2]).unwrap(),
            h2: GroupShiftSFT::symbol_subgroup(&g, &[0, 1]).unwrap(),
            hphi: graph_subgroup(&phi).unwrap(),
            triv: GroupShiftSFT::trivial(&g),
        }
    }

    #[test]
    fn products() {
        let k = klein();
        assert!(product_sft(&k.h1, &k.hphi).unwrap().same_points(&k.full).unwrap());
        assert!(product_sft(&k.h2, &k.hphi).unwrap().same_points(&k.full).unwrap());
        assert!(product_sft(&k.h1, &k.triv).unwrap().same_points(&k.h1).unwrap());
    }

    #[test]
    fn trivial_and_identity_cases() {
        let k = klein();
        let z = zassenhaus(&k.h1, &k.triv, &k.hphi, &k.triv).unwrap();
        assert!(z.factors[0].is_none() && z.factors[1].is_none());
        assert!(z.witness.is_none());
        let z = zassenhaus(&k.full, &k.triv, &k.full, &k.triv).unwrap();
        let w = z.witness.unwrap();
        assert!(w.check(&Ctx::default()).unwrap().passes());
    }

    #[test]
    fn nontrivial_factors_are_cocommensurable() {
        let k = klein();
        let z = zassenhaus(&k.h1, &k.triv, &k.full, &k.hphi).unwrap();
        assert!(z.upper1.same_points(&k.h1).unwrap());
        assert!(z.lower2.same_points(&k.hphi).unwrap());
        let w = z.witness.unwrap();
        let check = w.check(&Ctx::default()).unwrap();
        assert!(check.passes(), "{check:?}");
    }

    #[test]
    fn refuses_non_transitive_normal() {
        let k = klein();
        let c = GroupShiftSFT::constants(k.full.alphabet());
        assert!(matches!(
            zassenhaus(&k.full, &c, &k.full, &k.triv),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn witnesses_compose() {
        let c2 = make_cyclic(2).unwrap();
        let full = GroupShiftSFT::full(&c2);
        let a = SlidingBlockHom::linear(&c2, &[1, 1], 0).unwrap();
        let b = SlidingBlockHom::linear(&c2, &[1, 0, 1], -1).unwrap();
        let w1 = CoCommWitness {
            apex: full.clone(),
            maps: [SlidingBlockHom::identity(&c2), a],
            targets: [full.clone(), full.clone()],
        };
        let w2 = CoCommWitness {
            apex: full.clone(),
            maps: [b, SlidingBlockHom::identity(&c2)],
            targets: [full.clone(), full.clone()],
        };
        let w = w1.compose(&w2).unwrap();
        let check = w.check(&Ctx::default()).unwrap();
        assert!(check.passes());
        assert_eq!(check.kernel_orders, [Some(4), Some(2)]);
    }
}
