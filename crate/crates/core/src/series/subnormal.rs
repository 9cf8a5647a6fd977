use serde::Serialize;

use super::opennormal::{composition_factors_with, find_quotient, same_simple};
use crate::algebra::FactorClass;
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::shift::{image_sft_with, GroupShiftSFT};
use crate::structure::is_topologically_transitive;

/// Verified facts about one step `chain[i] ◁ chain[i+1]`.
#[derive(Clone, Debug)]
pub struct SeriesStep {
    pub contained: bool,
    pub normal: bool,
    /// The factor is topologically transitive.
    pub transitive: bool,
    /// Composition factors of the step's factor pair; empty when the factor is finite.
    pub factor: Vec<FactorClass>,
}

impl SeriesStep {
    fn ok(&self) -> bool {
        self.contained && self.normal && self.transitive && !self.factor.is_empty()
    }
}

/// A chain of closed shift-invariant subgroups from `{1}` to the host, with
/// per-step flags computed from the blocks.
#[derive(Clone, Debug)]
pub struct SubnormalSeries {
    host: GroupShiftSFT,
    chain: Vec<GroupShiftSFT>,
    steps: Vec<SeriesStep>,
    ends_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub window: usize,
    pub blocks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub normal: bool,
    pub transitive: bool,
    pub factor: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub host_window: usize,
    pub host_blocks: usize,
    pub length: usize,
    pub verified: bool,
    pub chain: Vec<EntryReport>,
    pub steps: Vec<StepReport>,
}

pub(crate) fn factor_label(c: &FactorClass) -> String {
    c.class.clone().unwrap_or_else(|| format!("simple({})", c.order))
}

impl SubnormalSeries {
    pub(crate) fn from_parts(host: GroupShiftSFT, chain: Vec<GroupShiftSFT>, steps: Vec<SeriesStep>, ends_ok: bool) -> Self {
        SubnormalSeries {
            host,
            chain,
            steps,
            ends_ok,
        }
    }

    pub fn new(host: &GroupShiftSFT, chain: Vec<GroupShiftSFT>) -> Result<SubnormalSeries> {
        Self::new_with(host, chain, &Ctx::default())
    }

    /// Checks a proposed chain, computing each factor as the image of a
    /// quotient rule and its composition factors.
    pub fn new_with(host: &GroupShiftSFT, chain: Vec<GroupShiftSFT>, ctx: &Ctx) -> Result<SubnormalSeries> {
        let host = host.trim();
        if chain.len() < 2 {
            return Err(Error::PreconditionFailed("a series needs at least two entries".into()));
        }
        let chain: Vec<GroupShiftSFT> = chain.iter().map(|c| c.trim()).collect();
        for c in &chain {
            if !crate::shift::same_group(c.alphabet(), host.alphabet()) {
                return Err(Error::AlphabetMismatch);
            }
        }
        let ends_ok = chain[0].is_trivial() && chain.last().unwrap().same_points(&host)?;
        let mut steps = Vec::new();
        for w in chain.windows(2) {
            ctx.checkpoint()?;
            let (a, b) = (&w[0], &w[1]);
            let contained = a.is_subset_of(b)?;
            let normal = contained && a.is_normal_in(b)?;
            let mut step = SeriesStep {
                contained,
                normal,
                transitive: false,
                factor: Vec::new(),
            };
            if normal && !a.same_points(b)? {
                let y = if a.is_trivial() {
                    b.clone()
                } else {
                    let rho = find_quotient(b, a, ctx)?;
                    image_sft_with(&rho, b, ctx)?.0
                };
                step.transitive = is_topologically_transitive(&y);
                if step.transitive && !y.is_finite() {
                    step.factor = composition_factors_with(&y, ctx)?.iter().map(|d| d.class()).collect();
                }
            }
            steps.push(step);
        }
        Ok(SubnormalSeries {
            host,
            chain,
            steps,
            ends_ok,
        })
    }

    pub fn host(&self) -> &GroupShiftSFT {
        &self.host
    }

    pub fn chain(&self) -> &[GroupShiftSFT] {
        &self.chain
    }

    pub fn steps(&self) -> &[SeriesStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every step is a normal inclusion with an infinite transitive factor,
    /// and the chain runs from `{1}` to the host.
    pub fn is_verified(&self) -> bool {
        self.ends_ok && self.steps.iter().all(SeriesStep::ok)
    }

    /// A composition series: verified with every factor irreducible.
    pub fn is_composition_series(&self) -> bool {
        self.is_verified() && self.steps.iter().all(|s| s.factor.len() == 1)
    }

    pub fn report(&self) -> SeriesReport {
        SeriesReport {
            host_window: self.host.window(),
            host_blocks: self.host.num_blocks(),
            length: self.len(),
            verified: self.is_verified(),
            chain: self
                .chain
                .iter()
                .map(|c| EntryReport {
                    window: c.window(),
                    blocks: c.num_blocks(),
                })
                .collect(),
            steps: self
                .steps
                .iter()
                .map(|s| StepReport {
                    normal: s.normal,
                    transitive: s.transitive,
                    factor: s.factor.iter().map(factor_label).collect(),
                })
                .collect(),
        }
    }
}

pub fn equivalent_series(s1: &SubnormalSeries, s2: &SubnormalSeries) -> Result<bool> {
    equivalent_series_with(s1, s2, &Ctx::default())
}

/// Equal length and the same multiset of factors, matched up to
/// isomorphism of the simple alphabets.
pub fn equivalent_series_with(s1: &SubnormalSeries, s2: &SubnormalSeries, ctx: &Ctx) -> Result<bool> {
    if !crate::shift::same_group(s1.host.alphabet(), s2.host.alphabet()) || !s1.host.same_points(&s2.host)? {
        return Err(Error::PreconditionFailed("series have different hosts".into()));
    }
    if !s1.is_verified() || !s2.is_verified() {
        return Err(Error::PreconditionFailed("series is not verified".into()));
    }
    if s1.len() != s2.len() {
        return Ok(false);
    }
    let mut unused: Vec<&SeriesStep> = s2.steps.iter().collect();
    for a in &s1.steps {
        let mut hit = None;
        for (j, b) in unused.iter().enumerate() {
            if same_signature(&a.factor, &b.factor, ctx)? {
                hit = Some(j);
                break;
            }
        }
        match hit {
            Some(j) => {
                unused.swap_remove(j);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

fn same_signature(a: &[FactorClass], b: &[FactorClass], ctx: &Ctx) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut unused: Vec<&FactorClass> = b.iter().collect();
    for x in a {
        let mut hit = None;
        for (j, y) in unused.iter().enumerate() {
            if same_simple(&x.group, &y.group, ctx)? {
                hit = Some(j);
                break;
            }
        }
        match hit {
            Some(j) => {
                unused.swap_remove(j);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{direct_product, make_cyclic, symmetric_group};
    use crate::series::opennormal_series;
    use crate::shift::{graph_subgroup, SlidingBlockHom};

    fn klein() -> (crate::Group, GroupShiftSFT) {
        let c2 = make_cyclic(2).unwrap();
        let g = direct_product(&c2, &c2);
        let full = GroupShiftSFT::full(&g);
        (g, full)
    }

    #[test]
    fn two_series_through_different_middles() {
        let (g, host) = klein();
        // first coordinate only, and the graph of (a, b) ↦ a + b
        let h1 = GroupShiftSFT::symbol_subgroup(&g, &[0, 2]).unwrap();
        let c2 = make_cyclic(2).unwrap();
        let phi = SlidingBlockHom::linear(&c2, &[1, 1], 0).unwrap();
        let hphi = graph_subgroup(&phi).unwrap();
        let triv = GroupShiftSFT::trivial(&g);
        let s1 = SubnormalSeries::new(&host, vec![triv.clone(), h1, host.clone()]).unwrap();
        let s2 = SubnormalSeries::new(&host, vec![triv, hphi, host.clone()]).unwrap();
        assert!(s1.is_composition_series());
        assert!(s2.is_composition_series());
        assert!(equivalent_series(&s1, &s2).unwrap());
        assert!(equivalent_series(&s1, &s1).unwrap());
    }

    #[test]
    fn unverified_and_mismatched() {
        let (g, host) = klein();
        let triv = GroupShiftSFT::trivial(&g);
        let consts = GroupShiftSFT::constants(&g);
        let bad = SubnormalSeries::new(&host, vec![triv.clone(), consts, host.clone()]).unwrap();
        assert!(!bad.is_verified());
        let good = SubnormalSeries::new(&host, vec![triv, host.clone()]).unwrap();
        assert!(good.is_verified());
        assert!(!good.is_composition_series());
        assert!(matches!(equivalent_series(&bad, &good), Err(Error::PreconditionFailed(_))));
        let s3 = symmetric_group(3).unwrap();
        let other = opennormal_series(&GroupShiftSFT::full(&s3)).unwrap().series;
        assert!(matches!(equivalent_series(&other, &good), Err(Error::PreconditionFailed(_))));
    }
}
