use std::sync::Arc;

use serde::Serialize;

use super::subnormal::{SeriesStep, SubnormalSeries};
use crate::abelian::{annihilator, kernel_lemma_check, prime_field, psi_equivalence, KernelLemmaReport};
use crate::algebra::{
    all_homs, composition_series_finite, find_isomorphism, is_simple, make_cyclic, normal_subgroups, FactorClass,
    FiniteGroup, Group, SubgroupF,
};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::shift::{image_sft_with, kernel_sft, preimage_sft, GroupShiftSFT, SlidingBlockHom};
use crate::structure::{depth, is_topologically_transitive, prodeq_k_with};

/// Largest span tried by the quotient search.
const MAX_QUOTIENT_SPAN: usize = 4;
/// Candidate rules visited by the abelian part of the quotient search.
const QUOTIENT_CANDIDATES: u64 = 20_000;
/// Largest block group handled by the block quotient.
const MAX_BLOCK_GROUP: usize = 4096;

/// How an irreducible factor `(F^Z, σ)` is presented.
#[derive(Clone, Debug)]
pub enum Presentation {
    DirectShift,
    /// A sliding block surjection from `F^Z` onto the factor with a finite
    /// central kernel. `psi` re-presents the kernel in the abelian case.
    QuotientWitness {
        rule: SlidingBlockHom,
        kernel_order: usize,
        psi: Option<SlidingBlockHom>,
    },
}

#[derive(Clone, Debug)]
pub struct FactorDescriptor {
    pub simple_alphabet: Group,
    pub presentation: Presentation,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorSummary {
    pub order: usize,
    pub abelian: bool,
    pub class: Option<String>,
    pub presentation: &'static str,
    pub kernel_order: usize,
}

impl FactorDescriptor {
    pub fn class(&self) -> FactorClass {
        FactorClass::of(self.simple_alphabet.clone())
    }

    pub fn summary(&self) -> FactorSummary {
        let c = self.class();
        let (presentation, kernel_order) = match &self.presentation {
            Presentation::DirectShift => ("direct", 1),
            Presentation::QuotientWitness { kernel_order, .. } => ("quotient", *kernel_order),
        };
        FactorSummary {
            order: c.order,
            abelian: c.abelian,
            class: c.class,
            presentation,
            kernel_order,
        }
    }
}

/// One step of the construction: the finite group `F` of points supported
/// in a window of width `width`, and `φ(f) = ∏_n σ^{-n}(f(n))` on `F^Z`.
#[derive(Clone, Debug)]
pub struct Stage {
    pub alphabet: Group,
    pub width: usize,
    pub phi: SlidingBlockHom,
    pub kernel: KernelLemmaReport,
}

/// Result of the opennormal construction. When `unsupported` is set the
/// series stops short of the host.
#[derive(Clone, Debug)]
pub struct OpennormalSeries {
    pub series: SubnormalSeries,
    pub factors: Vec<FactorDescriptor>,
    pub stages: Vec<Stage>,
    /// `quotients[j]` maps the `j`-th quotient host onto the next.
    pub quotients: Vec<SlidingBlockHom>,
    pub unsupported: Option<String>,
}

impl OpennormalSeries {
    pub fn is_complete(&self) -> bool {
        self.unsupported.is_none()
    }
}

fn check_host(h: &GroupShiftSFT) -> Result<GroupShiftSFT> {
    let h = h.trim();
    if h.is_finite() {
        return Err(Error::FiniteGroupShift);
    }
    if !is_topologically_transitive(&h) {
        return Err(Error::NotTransitive);
    }
    Ok(h)
}

/// Finds the least width `s` carrying a nontrivial finitely supported
/// point and builds the map from `F^Z` it induces.
pub fn first_stage(y: &GroupShiftSFT, ctx: &Ctx) -> Result<Stage> {
    let (k, _) = prodeq_k_with(y, ctx)?;
    let bound = k + y.window();
    for s in 1..=bound {
        ctx.checkpoint()?;
        let codes = y.points_supported_in(s)?;
        if codes.len() < 2 {
            continue;
        }
        let f = Arc::new(FiniteGroup::blocks_unchecked(
            &format!("Fin{}({})", s, y.alphabet().name()),
            y.alphabet().clone(),
            s,
            codes,
        ));
        let words: Vec<Vec<usize>> = (0..f.order()).map(|e| f.element_word(e).expect("block group")).collect();
        let a = y.alphabet().clone();
        let phi = SlidingBlockHom::from_fn(f.clone(), a.clone(), s, 1 - s as i64, |w| {
            w.iter().enumerate().fold(0, |acc, (i, &e)| a.mul(acc, words[e][s - 1 - i]))
        })
        .map_err(|e| match e {
            Error::InvalidHom(m) => Error::InternalInconsistency(format!("finitely supported points do not commute: {m}")),
            other => other,
        })?;
        let kernel = kernel_lemma_check(&phi)?;
        return Ok(Stage {
            alphabet: f,
            width: s,
            phi,
            kernel,
        });
    }
    Err(Error::WidthExceeded { cap: bound })
}

fn kernel_passes(k: &KernelLemmaReport) -> bool {
    k.homoclinic_trivial && k.finite == Some(true) && k.central == Some(true)
}

/// The `ψ` re-presentation of a map from `C_p^Z`: the linear rule of the
/// annihilator of its kernel. `None` unless the alphabet is cyclic of prime order.
fn abelian_psi(phi: &SlidingBlockHom) -> Result<Option<SlidingBlockHom>> {
    let f = phi.domain();
    if !f.is_abelian() || !is_simple(f)? {
        return Ok(None);
    }
    let p = f.order();
    let cp = make_cyclic(p)?;
    let iso = match find_isomorphism(&cp, f, p)? {
        Some(i) => i,
        None => return Ok(None),
    };
    let on_cp = phi.compose(&SlidingBlockHom::symbolwise(&iso))?;
    let kernel = kernel_sft(&on_cp, &GroupShiftSFT::full(&cp))?;
    if kernel.is_trivial() {
        return Ok(None);
    }
    let q = annihilator(&kernel)?;
    prime_field(&cp)?;
    Ok(Some(psi_equivalence(p as u64, &q)?))
}

fn descriptor_for(simple: Group, stage: &Stage) -> Result<FactorDescriptor> {
    let order = stage.kernel.order.unwrap_or(1);
    let presentation = if order > 1 && is_simple(&stage.alphabet)? {
        Presentation::QuotientWitness {
            rule: stage.phi.clone(),
            kernel_order: order,
            psi: abelian_psi(&stage.phi)?,
        }
    } else {
        Presentation::DirectShift
    };
    Ok(FactorDescriptor {
        simple_alphabet: simple,
        presentation,
    })
}

/// A sliding block map on `y` whose kernel is `k`: a symbolwise quotient by
/// a normal subgroup of the alphabet, then sums of homomorphisms into a
/// prime cyclic quotient, then the quotient of legal blocks, all with span
/// at most 4.
pub fn find_quotient(y: &GroupShiftSFT, k: &GroupShiftSFT, ctx: &Ctx) -> Result<SlidingBlockHom> {
    let a = y.alphabet().clone();
    if !k.is_subset_of(y)? || !k.is_normal_in(y)? {
        return Err(Error::PreconditionFailed("kernel must be a normal subgroup".into()));
    }
    let normals = normal_subgroups(&a);
    for m in normals.iter().rev().filter(|m| m.order() < a.order()) {
        ctx.checkpoint()?;
        let mz = GroupShiftSFT::symbol_subgroup(&a, m.members())?;
        if y.intersect(&mz)?.same_points(k)? {
            let (_, hom) = m.quotient(&format!("{}/M", a.name()))?;
            return Ok(SlidingBlockHom::symbolwise(&hom));
        }
    }
    let mut visited = 0u64;
    let limit = QUOTIENT_CANDIDATES.min(ctx.budget);
    for m in normals.iter().rev() {
        let index = a.order() / m.order();
        if index < 2 || !crate::algebra::is_prime(index as u64) {
            continue;
        }
        let (q, _) = m.quotient(&format!("C{index}"))?;
        let homs: Vec<Vec<usize>> = all_homs(&a, &q).into_iter().map(|h| h.map().to_vec()).collect();
        let nonzero: Vec<usize> = (0..homs.len()).filter(|&i| homs[i].iter().any(|&x| x != 0)).collect();
        for span in 2..=MAX_QUOTIENT_SPAN {
            let mut pick = vec![0usize; span];
            'tuples: loop {
                visited += 1;
                if visited > limit {
                    break;
                }
                ctx.checkpoint()?;
                let choice: Vec<&Vec<usize>> = (0..span)
                    .map(|i| {
                        if i == 0 || i == span - 1 {
                            &homs[nonzero[pick[i] % nonzero.len()]]
                        } else {
                            &homs[pick[i]]
                        }
                    })
                    .collect();
                let rule = SlidingBlockHom::from_fn(a.clone(), q.clone(), span, 0, |w| {
                    w.iter().zip(&choice).fold(0, |acc, (&x, h)| q.mul(acc, h[x]))
                })?;
                if kernel_sft(&rule, y)?.same_points(k)? {
                    return Ok(rule);
                }
                for i in 0..span {
                    let radix = if i == 0 || i == span - 1 { nonzero.len() } else { homs.len() };
                    pick[i] += 1;
                    if pick[i] < radix {
                        continue 'tuples;
                    }
                    pick[i] = 0;
                }
                break;
            }
        }
    }
    block_quotient(y, k)
}

/// The map sending each legal `s`-block of `y` to its coset modulo the
/// legal `s`-blocks of `k`.
fn block_quotient(y: &GroupShiftSFT, k: &GroupShiftSFT) -> Result<SlidingBlockHom> {
    let s = y.window().max(k.window());
    if s > MAX_QUOTIENT_SPAN {
        return Err(Error::UnsupportedQuotient(format!("no quotient rule of span at most {MAX_QUOTIENT_SPAN}")));
    }
    let a = y.alphabet().clone();
    let ycodes = y.language(s)?;
    let kcodes = k.language(s)?;
    if ycodes.len() > MAX_BLOCK_GROUP {
        return Err(Error::UnsupportedQuotient("block group too large".into()));
    }
    let blocks: Group = Arc::new(FiniteGroup::blocks_unchecked("Lang", a.clone(), s, ycodes.clone()));
    let members: Vec<usize> = kcodes
        .iter()
        .map(|c| ycodes.binary_search(c).map_err(|_| Error::InternalInconsistency("kernel block outside host".into())))
        .collect::<Result<_>>()?;
    let sub = SubgroupF::from_members(&blocks, &members)?;
    let (q, hom) = sub
        .quotient("BlockQuot")
        .map_err(|_| Error::UnsupportedQuotient("block kernel is not normal".into()))?;
    let rule = SlidingBlockHom::partial(a, q, s, 0, ycodes, hom.map().to_vec())?;
    if kernel_sft(&rule, y)?.same_points(k)? {
        Ok(rule)
    } else {
        Err(Error::UnsupportedQuotient(format!("no quotient rule of span at most {MAX_QUOTIENT_SPAN}")))
    }
}

/// Pulls a subgroup of the last quotient host back to the original host.
fn pull_back(hosts: &[GroupShiftSFT], maps: &[SlidingBlockHom], s: GroupShiftSFT) -> Result<GroupShiftSFT> {
    let mut s = s;
    for j in (0..maps.len()).rev() {
        s = preimage_sft(&maps[j], &hosts[j], &s)?;
    }
    Ok(s)
}

pub fn opennormal_series(h: &GroupShiftSFT) -> Result<OpennormalSeries> {
    opennormal_series_with(h, &Ctx::default())
}

/// Builds a composition series: at each stage the finite group `F_j` of
/// least-width finitely supported points of the current quotient maps onto
/// a normal subgroup, refined along a composition series of `F_j`, and the
/// construction continues on the quotient by it.
pub fn opennormal_series_with(h: &GroupShiftSFT, ctx: &Ctx) -> Result<OpennormalSeries> {
    let h = check_host(h)?;
    let total = depth(&h)?.depth;
    let a = h.alphabet().clone();
    let mut hosts = vec![h.clone()];
    let mut maps: Vec<SlidingBlockHom> = Vec::new();
    let mut chain = vec![GroupShiftSFT::trivial(&a)];
    let mut factors = Vec::new();
    let mut stages = Vec::new();
    let mut unsupported = None;
    let mut product = 1usize;
    loop {
        let y = hosts.last().unwrap().clone();
        let stage = first_stage(&y, ctx)?;
        let comp = composition_series_finite(&stage.alphabet);
        let mut top = GroupShiftSFT::trivial(y.alphabet());
        for (i, sub) in comp.chain.iter().enumerate().skip(1) {
            ctx.checkpoint()?;
            let kz = GroupShiftSFT::symbol_subgroup(&stage.alphabet, sub.members())?;
            top = image_sft_with(&stage.phi, &kz, ctx)?.0;
            chain.push(pull_back(&hosts, &maps, top.clone())?);
            factors.push(descriptor_for(comp.factors[i - 1].group.clone(), &stage)?);
        }
        product *= stage.alphabet.order();
        stages.push(stage);
        if product > total {
            return Err(Error::InternalInconsistency("factor orders exceed the depth".into()));
        }
        if !top.is_normal_in(&y)? {
            return Err(Error::InternalInconsistency("image of the finitely supported part is not normal".into()));
        }
        if top.same_points(&y)? {
            break;
        }
        match find_quotient(&y, &top, ctx) {
            Ok(rho) => {
                let (next, _) = image_sft_with(&rho, &y, ctx)?;
                maps.push(rho);
                hosts.push(next);
            }
            Err(Error::UnsupportedQuotient(m)) => {
                unsupported = Some(m);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if unsupported.is_none() && product != total {
        return Err(Error::InternalInconsistency(format!(
            "factor orders multiply to {product} but the depth is {total}"
        )));
    }
    let mut steps = Vec::new();
    for i in 0..factors.len() {
        steps.push(SeriesStep {
            contained: chain[i].is_subset_of(&chain[i + 1])?,
            normal: chain[i].is_normal_in(&chain[i + 1])?,
            transitive: is_topologically_transitive(&chain[i + 1]),
            factor: vec![factors[i].class()],
        });
    }
    let series = SubnormalSeries::from_parts(h, chain, steps, unsupported.is_none());
    Ok(OpennormalSeries {
        series,
        factors,
        stages,
        quotients: maps,
        unsupported,
    })
}

/// The composition factors, whose orders multiply to the depth.
pub fn composition_factors(h: &GroupShiftSFT) -> Result<Vec<FactorDescriptor>> {
    composition_factors_with(h, &Ctx::default())
}

pub fn composition_factors_with(h: &GroupShiftSFT, ctx: &Ctx) -> Result<Vec<FactorDescriptor>> {
    let s = opennormal_series_with(h, ctx)?;
    match s.unsupported {
        Some(m) => Err(Error::UnsupportedQuotient(m)),
        None => Ok(s.factors),
    }
}

#[derive(Clone, Debug)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    /// `F_0`, the group of least-width finitely supported points.
    pub alphabet: Group,
    pub alphabet_simple: bool,
    /// Whether `φ_0(F_0^Z)` is the whole host.
    pub image_is_host: bool,
    pub kernel: KernelLemmaReport,
    pub witness: Option<FactorDescriptor>,
}

pub fn is_irreducible(h: &GroupShiftSFT) -> Result<IrreducibilityReport> {
    is_irreducible_with(h, &Ctx::default())
}

/// One opennormal step: irreducible iff `φ_0(F_0^Z)` is the host, `F_0` is
/// simple and the kernel of `φ_0` is finite and central.
pub fn is_irreducible_with(h: &GroupShiftSFT, ctx: &Ctx) -> Result<IrreducibilityReport> {
    let h = check_host(h)?;
    let stage = first_stage(&h, ctx)?;
    let (img, _) = image_sft_with(&stage.phi, &GroupShiftSFT::full(&stage.alphabet), ctx)?;
    let image_is_host = img.same_points(&h)?;
    let alphabet_simple = is_simple(&stage.alphabet)?;
    let irreducible = image_is_host && alphabet_simple && kernel_passes(&stage.kernel);
    let witness = if irreducible {
        Some(descriptor_for(stage.alphabet.to_table(), &stage)?)
    } else {
        None
    };
    Ok(IrreducibilityReport {
        irreducible,
        alphabet: stage.alphabet,
        alphabet_simple,
        image_is_host,
        kernel: stage.kernel,
        witness,
    })
}

/// The descriptor of the irreducible pair presented as the image of `F^Z`
/// under `phi`, for simple `F` and a kernel passing the kernel checks.
pub fn quotient_witness(phi: &SlidingBlockHom) -> Result<FactorDescriptor> {
    let f = phi.domain();
    if f.order() < 2 || !is_simple(f)? {
        return Err(Error::PreconditionFailed("domain alphabet must be simple".into()));
    }
    let kernel = kernel_lemma_check(phi)?;
    if !kernel_passes(&kernel) {
        return Err(Error::PreconditionFailed("kernel is not finite and central".into()));
    }
    let order = kernel.order.unwrap_or(1);
    let presentation = if order == 1 {
        Presentation::DirectShift
    } else {
        Presentation::QuotientWitness {
            rule: phi.clone(),
            kernel_order: order,
            psi: abelian_psi(phi)?,
        }
    };
    Ok(FactorDescriptor {
        simple_alphabet: f.to_table(),
        presentation,
    })
}

/// Isomorphism of simple alphabets; groups above the context's bound are
/// refused unless abelian.
pub(crate) fn same_simple(a: &Group, b: &Group, ctx: &Ctx) -> Result<bool> {
    if a.order() != b.order() || a.is_abelian() != b.is_abelian() {
        return Ok(false);
    }
    if a.is_abelian() {
        return Ok(true);
    }
    Ok(find_isomorphism(a, b, ctx.iso_bound)?.is_some())
}

fn check_irreducible_descriptor(d: &FactorDescriptor) -> Result<()> {
    let g = &d.simple_alphabet;
    if g.order() < 2 || !is_simple(g)? {
        return Err(Error::PreconditionFailed("factor alphabet is not simple".into()));
    }
    if let Presentation::QuotientWitness { rule, .. } = &d.presentation {
        if !kernel_passes(&kernel_lemma_check(rule)?) {
            return Err(Error::PreconditionFailed("quotient witness kernel fails the kernel checks".into()));
        }
    }
    Ok(())
}

pub fn cocommensurable_irreducible(p1: &FactorDescriptor, p2: &FactorDescriptor) -> Result<bool> {
    cocommensurable_irreducible_with(p1, p2, &Ctx::default())
}

/// Irreducible pairs are co-commensurable exactly when their simple
/// alphabets are isomorphic.
pub fn cocommensurable_irreducible_with(p1: &FactorDescriptor, p2: &FactorDescriptor, ctx: &Ctx) -> Result<bool> {
    check_irreducible_descriptor(p1)?;
    check_irreducible_descriptor(p2)?;
    same_simple(&p1.simple_alphabet, &p2.simple_alphabet, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{direct_product, make_cyclic, symmetric_group};

    fn orders(f: &[FactorDescriptor]) -> Vec<usize> {
        let mut v: Vec<usize> = f.iter().map(|d| d.simple_alphabet.order()).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn full_shift_factors() {
        let s3 = symmetric_group(3).unwrap();
        let s = opennormal_series(&GroupShiftSFT::full(&s3)).unwrap();
        assert!(s.is_complete());
        assert_eq!(orders(&s.factors), vec![2, 3]);
        assert_eq!(s.factors[0].simple_alphabet.order(), 3);
        assert!(s.series.is_verified());
        let c3z = GroupShiftSFT::symbol_subgroup(&s3, &crate::algebra::normal_subgroups(&s3)[1].members().to_vec()).unwrap();
        assert!(s.series.chain()[1].same_points(&c3z).unwrap());
        let c2 = make_cyclic(2).unwrap();
        let c3 = make_cyclic(3).unwrap();
        let p = GroupShiftSFT::full(&direct_product(&c2, &c3));
        assert_eq!(orders(&composition_factors(&p).unwrap()), vec![2, 3]);
    }

    #[test]
    fn irreducibility() {
        let c5 = make_cyclic(5).unwrap();
        let r = is_irreducible(&GroupShiftSFT::full(&c5)).unwrap();
        assert!(r.irreducible);
        assert_eq!(r.witness.unwrap().simple_alphabet.order(), 5);
        let s3 = symmetric_group(3).unwrap();
        assert!(!is_irreducible(&GroupShiftSFT::full(&s3)).unwrap().irreducible);
        let c2 = make_cyclic(2).unwrap();
        let phi = SlidingBlockHom::linear(&c2, &[1, 1], 0).unwrap();
        let d = quotient_witness(&phi).unwrap();
        match &d.presentation {
            Presentation::QuotientWitness { kernel_order, psi, .. } => {
                assert_eq!(*kernel_order, 2);
                let psi = psi.as_ref().unwrap();
                let k1 = kernel_sft(psi, &GroupShiftSFT::full(&c2)).unwrap();
                let k2 = kernel_sft(&phi, &GroupShiftSFT::full(&c2)).unwrap();
                assert!(k1.same_points(&k2).unwrap());
            }
            _ => panic!("expected a quotient witness"),
        }
        let direct = is_irreducible(&GroupShiftSFT::full(&c2)).unwrap().witness.unwrap();
        assert!(cocommensurable_irreducible(&d, &direct).unwrap());
        let c3 = is_irreducible(&GroupShiftSFT::full(&make_cyclic(3).unwrap())).unwrap().witness.unwrap();
        assert!(!cocommensurable_irreducible(&d, &c3).unwrap());
    }

    #[test]
    fn non_transitive_is_refused() {
        let c2 = make_cyclic(2).unwrap();
        let g = direct_product(&c2, &c2);
        // second coordinate constant: index x·2 + y
        let blocks: Vec<Vec<usize>> = (0..8).map(|i| vec![(i & 1) * 2 + (i >> 2), ((i >> 1) & 1) * 2 + (i >> 2)]).collect();
        let h = GroupShiftSFT::new(g, 2, &blocks).unwrap();
        assert_eq!(opennormal_series(&h).unwrap_err(), Error::NotTransitive);
        assert_eq!(opennormal_series(&GroupShiftSFT::constants(&c2)).unwrap_err(), Error::FiniteGroupShift);
    }
}
