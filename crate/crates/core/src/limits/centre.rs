use std::collections::BTreeSet;

use serde::Serialize;

use super::system::{build_example_5_6_with, homoclinic_trivial_certificate_with, HomoclinicCertificate};
use crate::algebra::{
    decode, direct_product, make_cyclic, semidirect_product, FiniteHom, Group, SemidirectProduct,
};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::shift::{image_sft_with, EPWord, GroupShiftSFT, SlidingBlockHom};
use crate::structure::{homoclinic_closure, is_topologically_transitive};

/// Largest level handled.
pub const MAX_CENTRE_LEVEL: usize = 6;
/// Largest level whose block presentation fits the block budget.
const MAX_PRESENTED_LEVEL: usize = 5;

/// `A_n`: the support of `φ^n([1]_0)` for `φ(g)(s) = g(s) − g(s+1)` over `C_2`.
pub fn support_set(n: usize) -> Result<Vec<i64>> {
    let c2 = make_cyclic(2)?;
    let phi = SlidingBlockHom::linear(&c2, &[1, -1], 0)?;
    let mut g = EPWord::delta(&c2, 1, 0);
    for _ in 0..n {
        g = phi.apply(&g)?;
    }
    let (lo, hi) = g.support().expect("nonzero");
    Ok((lo..=hi).filter(|&r| g.at(r) != 0).collect())
}

/// The pair `G_n = C_3^Z ⋊ C_2^Z`, where `[1]_s` inverts the coordinates
/// in `s + A_n`, recoded as a pointwise group shift: `(f, g)` becomes
/// `r ↦ ((f(r), c(r)), g(r))` over `S_3 × C_2` with `S_3 = C_3 ⋊ C_2` and
/// `c(r) = Σ_{a ∈ A_n} g(r − a)`.
#[derive(Clone, Debug)]
pub struct FiniteCentreLevel {
    pub n: usize,
    pub a_n: Vec<i64>,
    pub s3: SemidirectProduct,
    pub alphabet: Group,
    pub shift: GroupShiftSFT,
}

fn s3() -> Result<SemidirectProduct> {
    let c3 = make_cyclic(3)?;
    let c2 = make_cyclic(2)?;
    let inv = FiniteHom::new(c3.clone(), c3.clone(), vec![0, 2, 1])?;
    semidirect_product(&c3, &c2, &[FiniteHom::identity(&c3), inv])
}

/// Symbol of `((f, c), g)`.
fn symbol(f: usize, c: usize, g: usize) -> usize {
    (f * 2 + c) * 2 + g
}

fn unsymbol(x: usize) -> (usize, usize, usize) {
    (x / 4, (x / 2) % 2, x % 2)
}

pub fn build_finite_centre(n: usize) -> Result<FiniteCentreLevel> {
    if n > MAX_CENTRE_LEVEL {
        return Err(Error::Unsupported(format!("finite centre level above {MAX_CENTRE_LEVEL}")));
    }
    if n > MAX_PRESENTED_LEVEL {
        return Err(Error::Unsupported(format!(
            "the window {} presentation of level {n} exceeds the block budget",
            n + 1
        )));
    }
    let a_n = support_set(n)?;
    let s3 = s3()?;
    let c2 = make_cyclic(2)?;
    let alphabet = direct_product(&s3.group, &c2);
    let w = n + 1;
    // A_n = {-i : binom(n, i) odd}, so c(r) reads g on [r, r + n].
    let offsets: Vec<usize> = a_n.iter().map(|&a| (-a) as usize).collect();
    let mut codes = Vec::new();
    let total = 12u64.pow(w as u32);
    for code in 0..total {
        let word = decode(code, 12, w);
        let (_, c0, _) = unsymbol(word[0]);
        let parity = offsets.iter().map(|&i| unsymbol(word[i]).2).sum::<usize>() % 2;
        if c0 == parity {
            codes.push(code);
        }
    }
    let shift = GroupShiftSFT::from_codes(alphabet.clone(), w, codes)?.trim();
    Ok(FiniteCentreLevel {
        n,
        a_n,
        s3,
        alphabet,
        shift,
    })
}

/// An element `(f, g)` of `G_n` given by its values; only the window of
/// coordinates that a computation touches is ever read.
trait Pair {
    fn f(&self, r: i64) -> usize;
    fn g(&self, r: i64) -> usize;
}

/// `(f, g)` with `f`, `g` periodic of period `f.len()`.
struct Periodic<'a> {
    f: &'a [usize],
    g: &'a [usize],
}

impl Pair for Periodic<'_> {
    fn f(&self, r: i64) -> usize {
        self.f[r.rem_euclid(self.f.len() as i64) as usize]
    }
    fn g(&self, r: i64) -> usize {
        self.g[r.rem_euclid(self.g.len() as i64) as usize]
    }
}

/// `([a]_s, 0)` or `(0, [1]_s)`.
enum Generator {
    C3(i64, usize),
    C2(i64),
}

impl Pair for Generator {
    fn f(&self, r: i64) -> usize {
        match *self {
            Generator::C3(s, a) if s == r => a,
            _ => 0,
        }
    }
    fn g(&self, r: i64) -> usize {
        match *self {
            Generator::C2(s) if s == r => 1,
            _ => 0,
        }
    }
}

/// Coordinate `r` of the twisted product `x·y = (f_x · χ_n(g_x)(f_y), g_x + g_y)`.
fn twisted_at(a_n: &[i64], x: &dyn Pair, y: &dyn Pair, r: i64) -> (usize, usize) {
    let c = a_n.iter().map(|&a| x.g(r - a)).sum::<usize>() % 2;
    let fy = if c == 1 { (3 - y.f(r)) % 3 } else { y.f(r) };
    ((x.f(r) + fy) % 3, x.g(r) ^ y.g(r))
}

/// The finitely supported elements generate a dense subgroup, so a
/// periodic `x` is central iff it commutes with every generator at `s` in
/// one period. The products can differ only at `s` and on `s + A_n`.
fn is_central(a_n: &[i64], x: &Periodic) -> bool {
    let q = x.f.len() as i64;
    let lo = a_n.first().copied().unwrap_or(0);
    for s in 0..q {
        for h in [Generator::C3(s, 1), Generator::C2(s)] {
            for r in s + lo - 1..=s + 1 {
                if twisted_at(a_n, x, &h, r) != twisted_at(a_n, &h, x, r) {
                    return false;
                }
            }
        }
    }
    true
}

type PeriodicKey = (Vec<usize>, Vec<usize>);

/// The pair of words of least period, as a set key.
fn key(f: &[usize], g: &[usize]) -> PeriodicKey {
    let q = f.len();
    let d = (1..=q)
        .find(|&d| q % d == 0 && (d..q).all(|i| f[i] == f[i - d] && g[i] == g[i - d]))
        .unwrap();
    (f[..d].to_vec(), g[..d].to_vec())
}

fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentreReport {
    pub n: usize,
    pub max_period: usize,
    pub candidates: u64,
    /// Central elements found among points of period at most `max_period`.
    pub centre_size: usize,
    /// Whether the centre is `{(0, g) : g is 2^n-periodic}` on the tested periods.
    pub matches_periodic_claim: bool,
    /// Whether the centre is `{(0, g) : φ^n(g) = 0}` on the tested periods.
    pub matches_kernel: bool,
    pub claim_size: usize,
    pub kernel_size: usize,
}

/// The centre of `G_n` among its periodic points of period at most
/// `max_period`, by exhaustive commutation tests with the twisted product.
pub fn centre_on_periodic_points(n: usize, max_period: usize, ctx: &Ctx) -> Result<CentreReport> {
    let a_n = support_set(n)?;
    let periods: Vec<usize> = (1..=max_period).filter(|&q| 2 * q > max_period).collect();
    let mut centre = BTreeSet::new();
    let mut claim = BTreeSet::new();
    let mut kernel = BTreeSet::new();
    let mut candidates = 0u64;
    for &q in &periods {
        ctx.checkpoint()?;
        let mut g = vec![0usize; q];
        loop {
            let mut f = vec![0usize; q];
            loop {
                candidates += 1;
                if is_central(&a_n, &Periodic { f: &f, g: &g }) {
                    centre.insert(key(&f, &g));
                }
                if !odometer(&mut f, 3) {
                    break;
                }
            }
            let zero = vec![0usize; q];
            let period = 1usize << n;
            if (0..q).all(|i| g[i] == g[(i + period) % q]) {
                claim.insert(key(&zero, &g));
            }
            let kills = (0..q as i64).all(|r| a_n.iter().map(|&a| g[(r - a).rem_euclid(q as i64) as usize]).sum::<usize>() % 2 == 0);
            if kills {
                kernel.insert(key(&zero, &g));
            }
            if !odometer(&mut g, 2) {
                break;
            }
        }
    }
    // 2^n-periodic words whose period exceeds the tested range are not points
    // of any tested period; the claim is compared on the tested range only.
    Ok(CentreReport {
        n,
        max_period,
        candidates,
        centre_size: centre.len(),
        matches_periodic_claim: centre == claim,
        matches_kernel: centre == kernel,
        claim_size: claim.len(),
        kernel_size: kernel.len(),
    })
}

/// The connector `G_{n+1} → G_n`, `(f, g) ↦ (f, φ(g))`, on the recoded alphabet.
pub fn centre_connector(upper: &FiniteCentreLevel, lower: &FiniteCentreLevel) -> Result<SlidingBlockHom> {
    SlidingBlockHom::from_fn(upper.alphabet.clone(), lower.alphabet.clone(), 2, 0, |w| {
        let (f, c, g0) = unsymbol(w[0]);
        let g1 = unsymbol(w[1]).2;
        symbol(f, c, g0 ^ g1)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectorReport {
    pub upper: usize,
    /// The recoding `(f, g) ↦ ((f, c), g)` turns twisted products into
    /// pointwise products, at both levels, on all pairs of tested periodic points.
    pub recoding_multiplicative: bool,
    /// `(f, g) ↦ (f, φ(g))` is multiplicative for the twisted products.
    pub twisted_hom: bool,
    /// The recoded connector maps `G_{n+1}` onto `G_n`.
    pub onto: bool,
    pub pairs_checked: u64,
}

impl ConnectorReport {
    pub fn holds(&self) -> bool {
        self.recoding_multiplicative && self.twisted_hom && self.onto
    }
}

fn periodic_pairs(q: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut g = vec![0usize; q];
    loop {
        let mut f = vec![0usize; q];
        loop {
            out.push((f.clone(), g.clone()));
            if !odometer(&mut f, 3) {
                break;
            }
        }
        if !odometer(&mut g, 2) {
            break;
        }
    }
    out
}

/// Checks the connector `G_{n+1} → G_n` exhaustively on pairs of points of
/// period `period`.
pub fn connector_check(n: usize, period: usize, ctx: &Ctx) -> Result<ConnectorReport> {
    let upper = build_finite_centre(n + 1)?;
    let lower = build_finite_centre(n)?;
    let conn = centre_connector(&upper, &lower)?;
    let (img, _) = image_sft_with(&conn, &upper.shift, ctx)?;
    let onto = img.same_points(&lower.shift)?;
    let s3 = &upper.s3.group;
    let q = period as i64;
    let elems = periodic_pairs(period);
    let recode = |lvl: &FiniteCentreLevel, f: &[usize], g: &[usize]| -> Vec<usize> {
        (0..q)
            .map(|r| {
                let c = lvl.a_n.iter().map(|&a| g[(r - a).rem_euclid(q) as usize]).sum::<usize>() % 2;
                symbol(f[r as usize], c, g[r as usize])
            })
            .collect()
    };
    let phi_g = |g: &[usize]| -> Vec<usize> { (0..period).map(|r| g[r] ^ g[(r + 1) % period]).collect() };
    let product = |a_n: &[i64], x: &(Vec<usize>, Vec<usize>), y: &(Vec<usize>, Vec<usize>)| -> (Vec<usize>, Vec<usize>) {
        let (px, py) = (Periodic { f: &x.0, g: &x.1 }, Periodic { f: &y.0, g: &y.1 });
        (0..q).map(|r| twisted_at(a_n, &px, &py, r)).unzip()
    };
    let pointwise = |u: &[usize], v: &[usize]| -> Vec<usize> {
        u.iter()
            .zip(v)
            .map(|(&a, &b)| {
                let (sa, sb) = (a / 2, b / 2);
                s3.mul(sa, sb) * 2 + ((a % 2) ^ (b % 2))
            })
            .collect()
    };
    let mut recoding_multiplicative = true;
    let mut twisted_hom = true;
    let mut pairs = 0u64;
    for x in &elems {
        ctx.checkpoint()?;
        for y in &elems {
            pairs += 1;
            let xy = product(&upper.a_n, x, y);
            for lvl in [&upper, &lower] {
                let p = product(&lvl.a_n, x, y);
                let lhs = recode(lvl, &p.0, &p.1);
                let rhs = pointwise(&recode(lvl, &x.0, &x.1), &recode(lvl, &y.0, &y.1));
                recoding_multiplicative &= lhs == rhs;
            }
            let down = |e: &(Vec<usize>, Vec<usize>)| (e.0.clone(), phi_g(&e.1));
            let lhs = down(&xy);
            let rhs = product(&lower.a_n, &down(x), &down(y));
            twisted_hom &= lhs == rhs;
        }
    }
    Ok(ConnectorReport {
        upper: n + 1,
        recoding_multiplicative,
        twisted_hom,
        onto,
        pairs_checked: pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BcgReport {
    pub n: usize,
    /// Homoclinic closure of a single level, which is the whole level.
    pub level_closure_is_level: bool,
    /// The `C_3` part `{((f, 0), 0)}` is fixed by every connector.
    pub c3_part_compatible: bool,
    pub c3_part_transitive: bool,
    /// No nonzero finitely supported `C_2` component lifts through the truncation.
    pub c2_certificate: HomoclinicCertificate,
    pub closure_is_c3: bool,
}

/// The homoclinic part of the truncated limit `G_n ← ... ← G_{n+levels}`:
/// the `C_3` part passes through every level unchanged, while the `C_2`
/// components form the difference-rule system, which has no nonidentity
/// finitely supported compatible tuples within the certified width.
pub fn truncated_bcg(n: usize, levels: usize, width: usize, ctx: &Ctx) -> Result<BcgReport> {
    let bottom = build_finite_centre(n)?;
    let level_closure_is_level = homoclinic_closure(&bottom.shift).same_points(&bottom.shift)?;
    let c3_symbols: Vec<usize> = (0..3).map(|f| symbol(f, 0, 0)).collect();
    let c3_part = |lvl: &FiniteCentreLevel| -> Result<GroupShiftSFT> {
        lvl.shift.intersect(&GroupShiftSFT::symbol_subgroup(&lvl.alphabet, &c3_symbols)?)
    };
    let mut compatible = true;
    let mut current = bottom;
    for m in n..(n + levels.min(2)).min(MAX_PRESENTED_LEVEL) {
        let upper = build_finite_centre(m + 1)?;
        let conn = centre_connector(&upper, &current)?;
        let part = c3_part(&upper)?;
        let (img, _) = image_sft_with(&conn, &part, ctx)?;
        compatible &= img.same_points(&c3_part(&current)?)?;
        compatible &= c3_symbols
            .iter()
            .all(|&s| conn.eval(&[s, 0]) == Some(s) && conn.eval(&[s, s]) == Some(s));
        current = upper;
    }
    let part = c3_part(&build_finite_centre(n)?)?;
    let c3_part_transitive = !part.is_finite() && is_topologically_transitive(&part);
    let system = build_example_5_6_with(2, levels, ctx)?;
    let cert = homoclinic_trivial_certificate_with(&system, width, ctx)?;
    let closure_is_c3 = compatible && c3_part_transitive && cert.issued;
    Ok(BcgReport {
        n,
        level_closure_is_level,
        c3_part_compatible: compatible,
        c3_part_transitive,
        c2_certificate: cert,
        closure_is_c3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::composition_factors;

    #[test]
    fn support_sets() {
        assert_eq!(support_set(0).unwrap(), vec![0]);
        assert_eq!(support_set(1).unwrap(), vec![-1, 0]);
        assert_eq!(support_set(2).unwrap(), vec![-2, 0]);
        assert_eq!(support_set(3).unwrap(), vec![-3, -2, -1, 0]);
    }

    #[test]
    fn level_zero_is_s3_shift() {
        let l = build_finite_centre(0).unwrap();
        assert_eq!(l.shift.count_words(3), 6u128.pow(3));
        let f = composition_factors(&l.shift).unwrap();
        let mut orders: Vec<usize> = f.iter().map(|d| d.simple_alphabet.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 3]);
        assert!(matches!(build_finite_centre(7), Err(Error::Unsupported(_))));
    }

    #[test]
    fn connectors_and_centre() {
        let ctx = Ctx::default();
        for n in 0..=1 {
            assert!(connector_check(n, 3, &ctx).unwrap().holds());
        }
        let r = centre_on_periodic_points(1, 4, &ctx).unwrap();
        assert!(r.matches_kernel);
        assert_eq!(r.centre_size, 2);
    }

    #[test]
    fn homoclinic_part() {
        let r = truncated_bcg(1, 4, 3, &Ctx::default()).unwrap();
        assert!(r.level_closure_is_level);
        assert!(r.closure_is_c3, "{r:?}");
    }
}
