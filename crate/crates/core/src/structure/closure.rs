use serde::Serialize;

use crate::algebra::decode;
use crate::error::{Error, Result};
use crate::shift::{DeBruijn, EPWord, GroupShiftSFT};

/// Which automorphism's contraction group is meant: `Forward` is `σ`,
/// `Backward` is `σ⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl TryFrom<i64> for Direction {
    type Error = Error;

    fn try_from(d: i64) -> Result<Direction> {
        match d {
            1 => Ok(Direction::Forward),
            -1 => Ok(Direction::Backward),
            _ => Err(Error::PreconditionFailed(format!("direction must be +1 or -1, got {d}"))),
        }
    }
}

/// Trimmed blocks split by identity reachability: blocks from which the
/// identity block can be reached, and blocks reachable from it.
pub(crate) struct Reach {
    pub all: Vec<u64>,
    pub to_identity: Vec<u64>,
    pub from_identity: Vec<u64>,
}

pub(crate) fn reach(h: &GroupShiftSFT) -> Reach {
    let all = h.trimmed_codes().to_vec();
    let l = h.window();
    if l == 1 {
        return Reach {
            to_identity: all.clone(),
            from_identity: all.clone(),
            all,
        };
    }
    let q = h.alphabet().order() as u64;
    let node_space = q.pow((l - 1) as u32);
    let g = DeBruijn::new(h.alphabet().order(), l, &all);
    let id = g.identity.expect("identity block is always legal");
    let to = g.dist_to(id);
    let from = g.dist_from(id);
    let to_identity = all.iter().copied().filter(|&c| to[g.index[&(c / q)]].is_some()).collect();
    let from_identity = all
        .iter()
        .copied()
        .filter(|&c| from[g.index[&(c % node_space)]].is_some())
        .collect();
    Reach {
        all,
        to_identity,
        from_identity,
    }
}

fn sft(h: &GroupShiftSFT, codes: Vec<u64>) -> GroupShiftSFT {
    GroupShiftSFT::from_codes_unchecked(h.alphabet().clone(), h.window(), codes).trim()
}

/// Closure of the contraction group of `σ` (identity right tails) or of
/// `σ⁻¹` (identity left tails) restricted to `h`.
pub fn contraction_closure(h: &GroupShiftSFT, direction: Direction) -> GroupShiftSFT {
    let r = reach(h);
    match direction {
        Direction::Forward => sft(h, r.to_identity),
        Direction::Backward => sft(h, r.from_identity),
    }
}

/// The nub together with its index in the host.
#[derive(Clone, Debug)]
pub struct NubResult {
    pub nub: GroupShiftSFT,
    pub index_in_host: u128,
}

/// The nub, computed as the closure of the contraction group and checked
/// against the closure of the reverse contraction group.
///
/// The nub contains every point of `h` that is the identity on a window of
/// length `l`, so its index is the block ratio at the presentation window.
pub fn nub(h: &GroupShiftSFT) -> Result<NubResult> {
    let r = reach(h);
    if r.to_identity != r.from_identity {
        return Err(Error::InternalInconsistency(
            "forward and backward contraction closures differ".into(),
        ));
    }
    let index = r.all.len() as u128 / r.to_identity.len() as u128;
    Ok(NubResult {
        nub: sft(h, r.to_identity),
        index_in_host: index,
    })
}

pub fn is_topologically_transitive(h: &GroupShiftSFT) -> bool {
    let r = reach(h);
    r.to_identity.len() == r.all.len()
}

/// All points of `h` supported in `[0, s)`, the identity included.
pub fn homoclinic_points(h: &GroupShiftSFT, s: usize) -> Result<Vec<EPWord>> {
    if s == 0 {
        return Err(Error::PreconditionFailed("width must be at least 1".into()));
    }
    let q = h.alphabet().order();
    h.points_supported_in(s)?
        .into_iter()
        .map(|c| EPWord::finite(h.alphabet(), 0, decode(c, q, s)))
        .collect()
}

/// Closure of the homoclinic group: blocks reachable from the identity block
/// and from which it is reachable.
pub fn homoclinic_closure(h: &GroupShiftSFT) -> GroupShiftSFT {
    let r = reach(h);
    let codes = r
        .to_identity
        .iter()
        .copied()
        .filter(|c| r.from_identity.binary_search(c).is_ok())
        .collect();
    sft(h, codes)
}

pub fn nub_meet(h1: &GroupShiftSFT, h2: &GroupShiftSFT) -> Result<GroupShiftSFT> {
    Ok(nub(&h1.intersect(h2)?)?.nub)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthReport {
    pub depth: usize,
    /// The open subgroup `V_m` used.
    pub window: usize,
    /// Values at `m-1` of points that are the identity left of `m-1`.
    pub boundary: Vec<usize>,
    /// The window at which the count was repeated.
    pub check_window: usize,
}

/// Values `f(m-1)` over points `f` of `h` with `f(n) = e` for `n < m-1`.
pub fn boundary_group(h: &GroupShiftSFT, m: usize) -> Result<Vec<usize>> {
    let l = h.window();
    if m < l {
        return Err(Error::PreconditionFailed(format!("window {m} is below the presentation window {l}")));
    }
    let q = h.alphabet().order() as u64;
    let lower = q.pow((m - 1) as u32);
    let mut r: Vec<usize> = h
        .language(m)?
        .into_iter()
        .filter(|c| c % lower == 0)
        .map(|c| (c / lower) as usize)
        .collect();
    r.sort_unstable();
    r.dedup();
    Ok(r)
}

/// `[σ(V_+) : V_+]` for `V = V_l`, recomputed with `V_{l+1}`.
pub fn depth(h: &GroupShiftSFT) -> Result<DepthReport> {
    let l = h.window();
    let r = boundary_group(h, l)?;
    let again = boundary_group(h, l + 1)?;
    if r != again {
        return Err(Error::InternalInconsistency("depth depends on the window".into()));
    }
    let finite = h.is_finite();
    if (r.len() == 1) != finite {
        return Err(Error::InternalInconsistency("depth disagrees with finiteness".into()));
    }
    if finite {
        return Err(Error::FiniteGroupShift);
    }
    Ok(DepthReport {
        depth: r.len(),
        window: l,
        boundary: r,
        check_window: l + 1,
    })
}
