use serde::Serialize;

use super::closure::is_topologically_transitive;
use crate::algebra::{decode, encode, lcm};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::shift::{EPWord, GroupShiftSFT};

/// `V_m = {f ∈ H : f(i) = e for 0 ≤ i < m}`.
#[derive(Clone, Debug)]
pub struct WindowSubgroup {
    pub host: GroupShiftSFT,
    pub m: usize,
}

impl WindowSubgroup {
    pub fn new(host: &GroupShiftSFT, m: usize) -> WindowSubgroup {
        WindowSubgroup {
            host: host.trim(),
            m,
        }
    }

    /// `V_l` for the presentation window `l`.
    pub fn canonical(host: &GroupShiftSFT) -> WindowSubgroup {
        Self::new(host, host.window())
    }
}

/// The widths at which a block-level decision was made.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WidthCertificate {
    pub width: usize,
    pub confirmed_at: usize,
}

/// Runs `decide` at margins `w` and `w+1` from `start` upward and returns the
/// first answer that agrees at two consecutive margins.
pub(crate) fn certify(
    ctx: &Ctx,
    start: usize,
    default_cap: usize,
    mut decide: impl FnMut(usize) -> Result<bool>,
) -> Result<(bool, WidthCertificate)> {
    let cap = ctx.cap_or(default_cap).max(start + 1);
    let mut prev = decide(start)?;
    for w in start + 1..=cap {
        ctx.checkpoint()?;
        let next = decide(w)?;
        if next == prev {
            return Ok((
                prev,
                WidthCertificate {
                    width: w - 1,
                    confirmed_at: w,
                },
            ));
        }
        prev = next;
    }
    Err(Error::WidthExceeded { cap })
}

/// Legal words on positions `[lo, lo + len)`, with the subsets that are the
/// identity on given position ranges.
struct Window {
    lo: i64,
    q: u64,
    words: Vec<u64>,
}

impl Window {
    fn new(h: &GroupShiftSFT, lo: i64, hi: i64) -> Result<Window> {
        Ok(Window {
            lo,
            q: h.alphabet().order() as u64,
            words: h.language((hi - lo) as usize)?,
        })
    }

    /// Mask selecting positions `[a, b)` as a digit range check.
    fn identity_on(&self, ranges: &[(i64, i64)]) -> Vec<u64> {
        let q = self.q;
        let spans: Vec<(u64, u64)> = ranges
            .iter()
            .filter(|(a, b)| a < b)
            .map(|&(a, b)| (q.pow((a - self.lo) as u32), q.pow((b - self.lo) as u32)))
            .collect();
        self.words
            .iter()
            .copied()
            .filter(|&c| spans.iter().all(|&(lo, hi)| (c % hi) / lo == 0))
            .collect()
    }
}

/// `|A·B|` for subgroups given as sorted code lists.
fn product_size(a: &[u64], b: &[u64]) -> u128 {
    let common = a.iter().filter(|c| b.binary_search(c).is_ok()).count() as u128;
    a.len() as u128 * b.len() as u128 / common
}

/// Does `V_m = V_+V_-` hold on the window `[-w, m+w)`?
fn ta_at(h: &GroupShiftSFT, m: usize, w: usize) -> Result<bool> {
    let m = m as i64;
    let w = w as i64;
    let win = Window::new(h, -w, m + w)?;
    let v = win.identity_on(&[(0, m)]);
    let plus = win.identity_on(&[(-w, m)]);
    let minus = win.identity_on(&[(0, m + w)]);
    Ok(product_size(&plus, &minus) == v.len() as u128)
}

pub fn check_ta(v: &WindowSubgroup) -> Result<bool> {
    check_ta_with(v, &Ctx::default()).map(|(b, _)| b)
}

/// Decides tidiness above for `V_m` by comparing `|V_+|·|V_-|/|V_+ ∩ V_-|`
/// with `|V|` on windows around the pinned coordinates.
pub fn check_ta_with(v: &WindowSubgroup, ctx: &Ctx) -> Result<(bool, WidthCertificate)> {
    let l = v.host.window();
    certify(ctx, 2 * l, 4 * l + 4, |w| ta_at(&v.host, v.m, w))
}

/// Least `n` such that `V ∩ σ(V) ∩ ... ∩ σ^n(V)` is tidy above. That
/// intersection is a translate of `V_{m+n}`.
pub fn tidy_above_exponent(v: &WindowSubgroup) -> Result<usize> {
    tidy_above_exponent_with(v, &Ctx::default())
}

pub fn tidy_above_exponent_with(v: &WindowSubgroup, ctx: &Ctx) -> Result<usize> {
    let l = v.host.window();
    for n in 0..=l {
        let vn = WindowSubgroup {
            host: v.host.clone(),
            m: v.m + n,
        };
        if check_ta_with(&vn, ctx)?.0 {
            return Ok(n);
        }
    }
    Err(Error::InternalInconsistency("V_m is tidy above once m ≥ l - 1".into()))
}

/// Does `σ^k(V_+)V_- = H` hold on a window around the gap between the two
/// identity regions?
fn prodeq_at(h: &GroupShiftSFT, m: usize, k: usize, w: usize) -> Result<bool> {
    let (m, k, w) = (m as i64, k as i64, w as i64);
    let lo = (m - k).min(0) - w;
    let hi = m.max(0) + w;
    let win = Window::new(h, lo, hi)?;
    let plus = win.identity_on(&[(lo, m - k)]);
    let minus = win.identity_on(&[(0, hi)]);
    Ok(product_size(&plus, &minus) == win.words.len() as u128)
}

pub fn prodeq_k(h: &GroupShiftSFT) -> Result<usize> {
    prodeq_k_with(h, &Ctx::default()).map(|(k, _)| k)
}

/// Least `k ≥ 1` with `σ^k(V_+)V_- = H` for the canonical `V = V_l`.
pub fn prodeq_k_with(h: &GroupShiftSFT, ctx: &Ctx) -> Result<(usize, WidthCertificate)> {
    if h.is_finite() {
        return Err(Error::FiniteGroupShift);
    }
    if !is_topologically_transitive(h) {
        return Err(Error::NotTransitive);
    }
    let h = h.trim();
    let l = h.window();
    let kmax = ctx.cap_or(4 * l + 8);
    for k in 1..=kmax {
        let (ok, cert) = certify(ctx, 2 * l, 4 * l + 4, |w| prodeq_at(&h, l, k, w))?;
        if ok {
            return Ok((k, cert));
        }
    }
    Err(Error::WidthExceeded { cap: kmax })
}

/// Checks that a finite, shift-stable, normal subgroup `N` of a transitive
/// shift is central, by testing commutation with all legal words on windows
/// covering a full period.
pub fn central_check_finite_stable(n: &[EPWord], h: &GroupShiftSFT) -> Result<bool> {
    if !is_topologically_transitive(h) {
        return Err(Error::NotTransitive);
    }
    let g = h.alphabet();
    for x in n {
        if !h.contains(x)? {
            return Err(Error::PreconditionFailed("element outside the host".into()));
        }
    }
    let member = |x: &EPWord| n.contains(x);
    if !n.iter().any(EPWord::is_identity) {
        return Err(Error::PreconditionFailed("identity missing".into()));
    }
    for x in n {
        if !member(&x.shift_by(1)) || !member(&x.inverse()) {
            return Err(Error::PreconditionFailed("not shift-stable or not closed under inverses".into()));
        }
        for y in n {
            if !member(&x.multiply(y)?) {
                return Err(Error::PreconditionFailed("not closed under products".into()));
            }
        }
        if !x.is_periodic() {
            return Err(Error::PreconditionFailed("a finite shift-stable subgroup consists of periodic points".into()));
        }
    }
    let period = n.iter().fold(1, |acc, x| lcm(acc, x.right().len()));
    let q = g.order();
    for w in [period.max(2 * h.window()), period.max(2 * h.window()) + 1] {
        let words = h.language(w)?;
        let slices: Vec<Vec<usize>> = n.iter().map(|x| x.slice(0, w as i64)).collect();
        let mut slice_codes: Vec<u64> = slices.iter().map(|s| encode(s, q)).collect();
        slice_codes.sort_unstable();
        for &c in &words {
            let u = decode(c, q, w);
            for s in &slices {
                let conj: Vec<usize> = (0..w).map(|i| g.mul(g.mul(u[i], s[i]), g.inv(u[i]))).collect();
                if slice_codes.binary_search(&encode(&conj, q)).is_err() {
                    return Err(Error::PreconditionFailed("not normal".into()));
                }
            }
        }
        for &c in &words {
            let u = decode(c, q, w);
            for s in &slices {
                if (0..w).any(|i| !g.commute(u[i], s[i])) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_cyclic, symmetric_group};
    use crate::shift::{graph_subgroup, SlidingBlockHom};

    #[test]
    fn full_shift_is_tidy_above() {
        let s3 = symmetric_group(3).unwrap();
        let v = WindowSubgroup::new(&GroupShiftSFT::full(&s3), 1);
        assert!(check_ta(&v).unwrap());
        assert_eq!(tidy_above_exponent(&v).unwrap(), 0);
        assert_eq!(prodeq_k(&GroupShiftSFT::full(&s3)).unwrap(), 1);
    }

    #[test]
    fn graph_shift() {
        let c2 = make_cyclic(2).unwrap();
        let phi = SlidingBlockHom::linear(&c2, &[1, 1], 0).unwrap();
        let h = graph_subgroup(&phi).unwrap();
        let v = WindowSubgroup::new(&h, 1);
        assert!(tidy_above_exponent(&v).unwrap() <= 1);
        assert!(prodeq_k(&h).unwrap() >= 1);
    }

    #[test]
    fn trivial_and_nontransitive() {
        let c2 = make_cyclic(2).unwrap();
        let v = WindowSubgroup::new(&GroupShiftSFT::trivial(&c2), 1);
        assert!(check_ta(&v).unwrap());
        assert_eq!(prodeq_k(&GroupShiftSFT::constants(&c2)), Err(Error::FiniteGroupShift));
    }

    #[test]
    fn constants_are_central() {
        let c3 = make_cyclic(3).unwrap();
        let full = GroupShiftSFT::full(&c3);
        let n: Vec<EPWord> = (0..3).map(|s| EPWord::constant(&c3, s)).collect();
        assert!(central_check_finite_stable(&n, &full).unwrap());
        assert!(central_check_finite_stable(&[EPWord::identity(&c3)], &full).unwrap());
        let bad = vec![EPWord::identity(&c3), EPWord::delta(&c3, 1, 0)];
        assert!(matches!(central_check_finite_stable(&bad, &full), Err(Error::PreconditionFailed(_))));
    }
}
