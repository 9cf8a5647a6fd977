use crate::algebra::lcm;
use crate::error::{Error, Result};
use crate::shift::{EPWord, GroupShiftSFT};

use super::closure::is_topologically_transitive;

/// Longest period accepted for solutions with periodic data.
const MAX_PERIOD: usize = 1 << 20;

/// `η_k(x) = x⁻¹ σ^k(x)`.
pub fn eta(x: &EPWord, k: i64) -> Result<EPWord> {
    x.inverse().multiply(&x.shift_by(k))
}

/// Solves `x⁻¹ σ^k(x) = f`, i.e. `x(n+k) = x(n) f(n)` for all `n`, with
/// `x = e` on `[0, |k|)`.
///
/// Finitely supported `f` give solutions with `|k|`-periodic tails; periodic
/// `f` give periodic solutions. Other shapes are refused.
pub fn eta_solve(f: &EPWord, k: i64) -> Result<EPWord> {
    if k == 0 {
        return Err(Error::PreconditionFailed("k must be nonzero".into()));
    }
    let g = f.alphabet().clone();
    let j = k.unsigned_abs() as i64;
    let (lo, hi, left, right) = if f.is_finitely_supported() {
        let (s, t) = f.support().map(|(s, t)| (s, t + 1)).unwrap_or((0, 0));
        (s.min(0) - j, t.max(j) + j, j as usize, j as usize)
    } else if f.is_periodic() {
        let p = f.right().len();
        let qp = p / crate::algebra::gcd(p, j as usize);
        // Telescoped products along each residue class mod |k| over one period of f.
        let mut orders = 1usize;
        // Steps are f(n) for k > 0 and f(n+|k|)⁻¹ for k < 0, multiplied on the right.
        let step = |n: i64| if k > 0 { f.at(n) } else { g.inv(f.at(n + j)) };
        for r in 0..j {
            let prod = (0..qp as i64).fold(0, |acc, i| g.mul(acc, step(r + i * j)));
            orders = lcm(orders, g.element_order(prod));
        }
        let period = (j as usize)
            .checked_mul(qp)
            .and_then(|x| x.checked_mul(orders))
            .filter(|&x| x <= MAX_PERIOD)
            .ok_or_else(|| Error::Unsupported("solution period too long".into()))?;
        (0, period as i64, period, period)
    } else {
        return Err(Error::Unsupported("data must be finitely supported or periodic".into()));
    };
    let len = (hi - lo) as usize;
    let mut x = vec![0usize; len];
    let at = |n: i64| (n - lo) as usize;
    // Rightwards from the seed block [0, j).
    for n in j..hi {
        x[at(n)] = if k > 0 {
            g.mul(x[at(n - j)], f.at(n - j))
        } else {
            g.mul(x[at(n - j)], g.inv(f.at(n)))
        };
    }
    // Leftwards.
    for n in (lo..0).rev() {
        x[at(n)] = if k > 0 {
            g.mul(x[at(n + j)], g.inv(f.at(n)))
        } else {
            g.mul(x[at(n + j)], f.at(n + j))
        };
    }
    let sol = if f.is_finitely_supported() {
        let (a, b) = (lo + left as i64, hi - right as i64);
        EPWord::from_fn(g, left, a, b, right, |n| x[at(n)])
    } else {
        EPWord::periodic(&g, x)?
    };
    if eta(&sol, k)? != *f {
        return Err(Error::InternalInconsistency("η round trip failed".into()));
    }
    Ok(sol)
}

/// A shift-invariant point of the coset `xH`, for a transitive host `H`
/// with `x⁻¹σ(x) ∈ H`.
pub fn invariant_representative(x: &EPWord, h: &GroupShiftSFT) -> Result<EPWord> {
    if !is_topologically_transitive(h) {
        return Err(Error::PreconditionFailed("host is not topologically transitive".into()));
    }
    let d = eta(x, 1)?;
    if !h.contains(&d)? {
        return Err(Error::PreconditionFailed("x is not shift-invariant modulo the host".into()));
    }
    if d.is_identity() {
        return Ok(x.clone());
    }
    let z = eta_solve(&d, 1)?;
    if !h.contains(&z)? {
        return Err(Error::Unsupported("correction term leaves the host".into()));
    }
    let y = x.multiply(&z.inverse())?;
    if y.shift_by(1) != y {
        return Err(Error::InternalInconsistency("representative is not invariant".into()));
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{direct_product, make_cyclic, symmetric_group};

    #[test]
    fn delta_solution() {
        let c2 = make_cyclic(2).unwrap();
        let x = eta_solve(&EPWord::delta(&c2, 1, 0), 1).unwrap();
        for n in -4..6 {
            assert_eq!(x.at(n), usize::from(n >= 1));
        }
        assert!(eta_solve(&EPWord::identity(&c2), 3).unwrap().is_identity());
    }

    #[test]
    fn round_trips() {
        let s3 = symmetric_group(3).unwrap();
        for k in [-2, -1, 1, 2, 3] {
            let f = EPWord::finite(&s3, -2, vec![1, 3, 0, 5, 2]).unwrap();
            assert_eq!(eta(&eta_solve(&f, k).expect(&format!("finite {k}")), k).unwrap(), f);
            let p = EPWord::periodic(&s3, vec![1, 4, 2]).unwrap();
            assert_eq!(eta(&eta_solve(&p, k).expect(&format!("periodic {k}")), k).unwrap(), p);
        }
    }

    #[test]
    fn unsupported_shapes() {
        let c2 = make_cyclic(2).unwrap();
        let f = EPWord::new(c2.clone(), vec![0], 0, vec![], vec![1]).unwrap();
        assert!(matches!(eta_solve(&f, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn invariant_representatives() {
        let c2 = make_cyclic(2).unwrap();
        let g = direct_product(&c2, &c2);
        let h = GroupShiftSFT::symbol_subgroup(&g, &[0, 2]).unwrap();
        // ([1]_0, 0) in the encoding a*2 + b.
        let x = EPWord::delta(&g, 2, 0);
        let y = invariant_representative(&x, &h).unwrap();
        assert_eq!(y.shift_by(1), y);
        assert!(h.contains(&x.inverse().multiply(&y).unwrap()).unwrap());
        let c = EPWord::constant(&g, 1);
        assert_eq!(invariant_representative(&c, &h).unwrap(), c);
        let t = GroupShiftSFT::trivial(&c2);
        let z = EPWord::delta(&c2, 1, 0);
        assert!(matches!(invariant_representative(&z, &t), Err(Error::PreconditionFailed(_))));
    }
}
