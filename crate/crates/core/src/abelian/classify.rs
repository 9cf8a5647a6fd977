use serde::Serialize;

use super::linear::{annihilator, prime_field, psi_equivalence, solve_recurrence};
use crate::algebra::{decode, make_cyclic, FpLaurent, Group};
use crate::error::{Error, Result};
use crate::shift::{kernel_sft, EPWord, GroupShiftSFT, SlidingBlockHom};
use crate::structure::homoclinic_points;

/// The closed `σ`-invariant subgroups of `C_p^Z` fall into five shapes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InvariantSubgroupDescriptor {
    Full,
    Trivial,
    /// `{h : h(j) = 0 for j ≥ n}`.
    RightTailTrivial(i64),
    /// Solutions of `q` on all of `Z`.
    TwoSidedRecurrence(FpLaurent),
    /// Points satisfying the recurrence `q` at every `r ≥ n`.
    EventualRecurrence(FpLaurent, i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// `σ(H) = H`.
    Stable,
    /// `σ(H) ⊆ H`.
    Invariant,
}

impl InvariantSubgroupDescriptor {
    pub fn case(&self) -> CaseTag {
        match self {
            Self::Full => CaseTag::I,
            Self::Trivial => CaseTag::II,
            Self::RightTailTrivial(_) => CaseTag::III,
            Self::TwoSidedRecurrence(_) => CaseTag::IV,
            Self::EventualRecurrence(..) => CaseTag::V,
        }
    }

    fn validate(&self, p: u64) -> Result<()> {
        match self {
            Self::TwoSidedRecurrence(q) | Self::EventualRecurrence(q, _) => {
                if q.p() != p {
                    Err(Error::InvalidDescriptor(format!("recurrence over F_{} for alphabet C_{p}", q.p())))
                } else if q.is_zero() || q.is_unit() {
                    Err(Error::InvalidDescriptor("recurrence must be nonzero and not a unit".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Membership of an eventually periodic word.
    pub fn contains(&self, f: &EPWord) -> Result<bool> {
        let tail_zero_from = |g: &EPWord, n: i64| g.right() == [0] && (n..g.end()).all(|j| g.at(j) == 0);
        Ok(match self {
            Self::Full => true,
            Self::Trivial => f.is_identity(),
            Self::RightTailTrivial(n) => tail_zero_from(f, *n),
            Self::TwoSidedRecurrence(q) => psi_equivalence(q.p(), q)?.apply(f)?.is_identity(),
            Self::EventualRecurrence(q, n) => tail_zero_from(&psi_equivalence(q.p(), q)?.apply(f)?, *n),
        })
    }

    /// Points of the subgroup used to probe invariance and stability.
    fn probes(&self, g: &Group) -> Result<Vec<EPWord>> {
        let deltas = |lo: i64, hi: i64| (lo..hi).map(|j| EPWord::delta(g, 1, j)).collect::<Vec<_>>();
        Ok(match self {
            Self::Full => deltas(-3, 4),
            Self::Trivial => vec![EPWord::identity(g)],
            Self::RightTailTrivial(n) => deltas(n - 4, *n),
            Self::TwoSidedRecurrence(q) => {
                let s = solve_recurrence(q.p(), q)?;
                let d = s.degree();
                (0..d)
                    .map(|i| {
                        let mut init = vec![0; d];
                        init[i] = 1;
                        s.solution(&init)
                    })
                    .collect::<Result<_>>()?
            }
            Self::EventualRecurrence(q, n) => {
                // Solutions on [n, ∞) with zero to the left, and deltas left of n.
                let s = solve_recurrence(q.p(), q)?;
                let d = s.degree();
                let mut out = deltas(n - 3, *n);
                for i in 0..d {
                    let mut init = vec![0; d];
                    init[i] = 1;
                    let period = s.solution(&init)?;
                    let tail = period.slice(0, period.right().len() as i64);
                    out.push(EPWord::new(g.clone(), vec![0], *n, vec![], tail)?);
                }
                out
            }
        })
    }

    /// `σ(h) ∈ H` and `σ⁻¹(h) ∈ H` on the probes.
    fn shift_closure(&self, g: &Group) -> Result<(bool, bool)> {
        let probes = self.probes(g)?;
        for h in &probes {
            if !self.contains(h)? {
                return Err(Error::InternalInconsistency("probe outside its subgroup".into()));
            }
        }
        let mut forward = true;
        let mut backward = true;
        for h in &probes {
            forward &= self.contains(&h.shift_by(1))?;
            backward &= self.contains(&h.shift_by(-1))?;
        }
        Ok((forward, backward))
    }
}

/// The descriptor of a linear shift, read off its annihilator.
pub fn descriptor_of(h: &GroupShiftSFT) -> Result<InvariantSubgroupDescriptor> {
    let q = annihilator(h)?;
    Ok(if q.is_zero() {
        InvariantSubgroupDescriptor::Full
    } else if q.is_unit() {
        InvariantSubgroupDescriptor::Trivial
    } else {
        InvariantSubgroupDescriptor::TwoSidedRecurrence(q)
    })
}

/// Checks a descriptor over `C_p` and returns its case. In stable mode only
/// subgroups with `σ(H) = H` are accepted.
pub fn classify_invariant(d: &InvariantSubgroupDescriptor, p: u64, mode: Mode) -> Result<CaseTag> {
    d.validate(p)?;
    let g = make_cyclic(p as usize)?;
    let (forward, backward) = d.shift_closure(&g)?;
    if !forward {
        return Err(Error::InvalidDescriptor("subgroup is not shift-invariant".into()));
    }
    let stable = backward;
    let case = d.case();
    let expect_stable = !matches!(case, CaseTag::III | CaseTag::V);
    if stable != expect_stable {
        return Err(Error::InternalInconsistency("stability disagrees with the case".into()));
    }
    if mode == Mode::Stable && !stable {
        return Err(Error::InvalidDescriptor("subgroup is invariant but not stable".into()));
    }
    Ok(case)
}

pub fn classify_shift(h: &GroupShiftSFT, mode: Mode) -> Result<(InvariantSubgroupDescriptor, CaseTag)> {
    let p = prime_field(h.alphabet())?;
    let d = descriptor_of(h)?;
    let tag = classify_invariant(&d, p, mode)?;
    Ok((d, tag))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelLemmaReport {
    /// No nonidentity finitely supported kernel point up to width `2·span`.
    pub homoclinic_trivial: bool,
    /// Whether the kernel is finite; only decided when the first verdict holds.
    pub finite: Option<bool>,
    pub order: Option<usize>,
    /// Whether every kernel symbol is central in the alphabet.
    pub central: Option<bool>,
}

/// Verdicts for the kernel `N` of a sliding block map on the full shift:
/// trivial intersection with the finitely supported points, finiteness, and
/// centrality.
pub fn kernel_lemma_check(phi: &SlidingBlockHom) -> Result<KernelLemmaReport> {
    let g = phi.domain();
    let n = kernel_sft(phi, &GroupShiftSFT::full(g))?;
    let width = 2 * phi.span();
    let homoclinic_trivial = homoclinic_points(&n, width)?.len() == 1;
    if !homoclinic_trivial {
        return Ok(KernelLemmaReport {
            homoclinic_trivial,
            finite: None,
            order: None,
            central: None,
        });
    }
    let order = n.finite_order();
    let centre = g.center();
    let q = g.order();
    let central = n
        .trimmed_codes()
        .iter()
        .all(|&c| decode(c, q, n.window()).iter().all(|s| centre.binary_search(s).is_ok()));
    Ok(KernelLemmaReport {
        homoclinic_trivial,
        finite: Some(order.is_some()),
        order,
        central: Some(central),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::symmetric_group;

    fn poly(p: u64, c: &[i64]) -> FpLaurent {
        FpLaurent::poly(p, c).unwrap()
    }

    #[test]
    fn classification_examples() {
        let c2 = make_cyclic(2).unwrap();
        let full = GroupShiftSFT::full(&c2);
        assert_eq!(classify_shift(&full, Mode::Stable).unwrap().1, CaseTag::I);
        let q = poly(2, &[1, 1]);
        assert_eq!(
            classify_invariant(&InvariantSubgroupDescriptor::TwoSidedRecurrence(q.clone()), 2, Mode::Stable).unwrap(),
            CaseTag::IV
        );
        let r = InvariantSubgroupDescriptor::RightTailTrivial(0);
        assert_eq!(classify_invariant(&r, 2, Mode::Invariant).unwrap(), CaseTag::III);
        assert!(matches!(classify_invariant(&r, 2, Mode::Stable), Err(Error::InvalidDescriptor(_))));
        let v = InvariantSubgroupDescriptor::EventualRecurrence(poly(3, &[1, 1, 1]), 2);
        assert_eq!(classify_invariant(&v, 3, Mode::Invariant).unwrap(), CaseTag::V);
        assert!(classify_invariant(&v, 3, Mode::Stable).is_err());
        let bad = InvariantSubgroupDescriptor::TwoSidedRecurrence(FpLaurent::one(2));
        assert!(matches!(classify_invariant(&bad, 2, Mode::Invariant), Err(Error::InvalidDescriptor(_))));
        let t = GroupShiftSFT::trivial(&c2);
        assert_eq!(classify_shift(&t, Mode::Stable).unwrap().1, CaseTag::II);
    }

    #[test]
    fn kernel_lemma_examples() {
        let c3 = make_cyclic(3).unwrap();
        let phi = SlidingBlockHom::linear(&c3, &[1, -1], 0).unwrap();
        let r = kernel_lemma_check(&phi).unwrap();
        assert_eq!(
            r,
            KernelLemmaReport {
                homoclinic_trivial: true,
                finite: Some(true),
                order: Some(3),
                central: Some(true)
            }
        );
        let id = kernel_lemma_check(&SlidingBlockHom::identity(&c3)).unwrap();
        assert_eq!(id.order, Some(1));
        let zero = SlidingBlockHom::from_fn(c3.clone(), c3.clone(), 1, 0, |_| 0).unwrap();
        let z = kernel_lemma_check(&zero).unwrap();
        assert!(!z.homoclinic_trivial);
        assert_eq!(z.finite, None);
        let s3 = symmetric_group(3).unwrap();
        let triv = kernel_lemma_check(&SlidingBlockHom::identity(&s3)).unwrap();
        assert_eq!(triv.central, Some(true));
    }
}
