use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{decode, encode, is_prime, make_cyclic, laurent_gcd_all, FiniteGroup, FpLaurent, Group};
use crate::error::{Error, Result};
use crate::shift::{block_generators, kernel_sft, EPWord, GroupShiftSFT, SlidingBlockHom};

/// The prime `p` when `g` is `C_p` with its standard labelling.
pub fn prime_field(g: &Group) -> Result<u64> {
    let p = g.order();
    if !is_prime(p as u64) || g.order() > 1 << 16 {
        return Err(Error::Unsupported(format!("{} is not a cyclic group of prime order", g.name())));
    }
    for a in 0..p {
        for b in 0..p {
            if g.mul(a, b) != (a + b) % p {
                return Err(Error::Unsupported(format!("{} is not labelled as C_{p}", g.name())));
            }
        }
    }
    Ok(p as u64)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero residue")
}

/// Reduced row echelon form over `F_p`; returns the nonzero rows and pivot columns.
pub(crate) fn row_reduce(mut rows: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let s = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + p - f * rows[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{c : r·c = 0 for every row r}` in `F_p^cols`.
pub(crate) fn null_space(rows: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let (rref, pivots) = row_reduce(rows, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in rref.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// A linear shift over `C_p` presented by parity checks: each check `Σ c_j x^j`
/// asserts `Σ c_j f(n+j) = 0` for all `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearShiftPresentation {
    pub p: u64,
    pub parity_checks: Vec<FpLaurent>,
    pub annihilator: FpLaurent,
}

impl LinearShiftPresentation {
    pub fn of(h: &GroupShiftSFT) -> Result<LinearShiftPresentation> {
        let p = prime_field(h.alphabet())?;
        let l = h.window();
        let q = p as usize;
        let blocks = h.trimmed_codes();
        // Subgroups of F_p^l are subspaces; the check guards against
        // presentations that bypassed validation.
        let gens = block_generators(h.alphabet(), l, blocks);
        for &g in &gens {
            for s in 2..p {
                let scaled: Vec<usize> = decode(g, q, l).iter().map(|&x| x * s as usize % q).collect();
                if blocks.binary_search(&encode(&scaled, q)).is_err() {
                    return Err(Error::NotLinear);
                }
            }
        }
        let rows: Vec<Vec<u64>> = gens
            .iter()
            .map(|&g| decode(g, q, l).into_iter().map(|x| x as u64).collect())
            .collect();
        let checks = if rows.is_empty() {
            (0..l)
                .map(|i| {
                    let mut v = vec![0u64; l];
                    v[i] = 1;
                    v
                })
                .collect()
        } else {
            null_space(rows, l, p)
        };
        let parity_checks: Vec<FpLaurent> = checks
            .into_iter()
            .map(|c| FpLaurent::new(p, 0, c.into_iter().map(|x| x as i64).collect()))
            .collect::<Result<_>>()?;
        let annihilator = laurent_gcd_all(p, &parity_checks)?;
        Ok(LinearShiftPresentation {
            p,
            parity_checks,
            annihilator,
        })
    }
}

/// Monic generator of the annihilator ideal of a linear shift over `C_p`:
/// `0` for the full shift, `1` for the trivial shift.
pub fn annihilator(h: &GroupShiftSFT) -> Result<FpLaurent> {
    Ok(LinearShiftPresentation::of(h)?.annihilator)
}

/// `ψ(f)(n) = Σ_j c_j f(n+j)` for `q = Σ c_j x^j` normalized to valuation 0.
/// Its kernel on the full shift is the solution set of `q`.
pub fn psi_equivalence(p: u64, q: &FpLaurent) -> Result<SlidingBlockHom> {
    if q.p() != p {
        return Err(Error::FieldMismatch);
    }
    if q.is_zero() {
        return Err(Error::NotFinite);
    }
    let cp = make_cyclic(p as usize)?;
    let coeffs: Vec<i64> = q.normalized().coeffs().iter().map(|&c| c as i64).collect();
    SlidingBlockHom::linear(&cp, &coeffs, 0)
}

/// The shift of all solutions of `q`.
pub fn linear_sft(p: u64, q: &FpLaurent) -> Result<GroupShiftSFT> {
    let cp = make_cyclic(p as usize)?;
    if q.is_zero() {
        return Ok(GroupShiftSFT::full(&cp));
    }
    kernel_sft(&psi_equivalence(p, q)?, &GroupShiftSFT::full(&cp))
}

/// Solutions of `Σ c_j f(n+j) = 0` for a nonzero non-unit `q`, indexed by
/// their values on `[0, d)`.
#[derive(Clone, Debug)]
pub struct RecurrenceSolutions {
    p: u64,
    q: FpLaurent,
    degree: usize,
}

impl RecurrenceSolutions {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The recurrence, normalized to valuation 0 and leading coefficient 1.
    pub fn poly(&self) -> &FpLaurent {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.degree as u32)
    }

    fn next(&self, state: &[usize]) -> usize {
        let p = self.p as usize;
        let c = self.q.coeffs();
        let s: usize = (0..self.degree).map(|j| c[j] as usize * state[j] % p).sum::<usize>() % p;
        (p - s) % p
    }

    /// The solution with initial values `init` on `[0, d)`; periodic since
    /// the constant term is a unit.
    pub fn solution(&self, init: &[usize]) -> Result<EPWord> {
        if init.len() != self.degree {
            return Err(Error::PreconditionFailed("initial state has the wrong length".into()));
        }
        let mut word: Vec<usize> = init.to_vec();
        loop {
            let n = word.len();
            if n > self.degree && word[n - self.degree..] == *init {
                word.truncate(n - self.degree);
                break;
            }
            let x = self.next(&word[n - self.degree..]);
            word.push(x);
        }
        EPWord::periodic(&make_cyclic(self.p as usize)?, word)
    }

    /// Every solution, in the order of their initial-state codes.
    pub fn solutions(&self) -> Result<Vec<EPWord>> {
        if self.order() > 1 << 16 {
            return Err(Error::Unsupported("too many solutions to list".into()));
        }
        let q = self.p as usize;
        (0..self.order() as u64)
            .map(|c| self.solution(&decode(c, q, self.degree)))
            .collect()
    }

    /// The solution group, isomorphic to `C_p^d` via initial states.
    pub fn group(&self) -> Result<Group> {
        let cp = make_cyclic(self.p as usize)?;
        let g = FiniteGroup::power(&cp, self.degree)?;
        Ok(Arc::new(g.renamed(&format!("Sol({})", self.q))))
    }
}

pub fn solve_recurrence(p: u64, q: &FpLaurent) -> Result<RecurrenceSolutions> {
    if q.p() != p {
        return Err(Error::FieldMismatch);
    }
    if q.is_zero() {
        return Err(Error::NotFinite);
    }
    if q.is_unit() {
        return Err(Error::TrivialKernel);
    }
    let q = q.normalized();
    Ok(RecurrenceSolutions {
        p,
        degree: q.span_degree(),
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> FpLaurent {
        FpLaurent::poly(p, c).unwrap()
    }

    #[test]
    fn annihilators() {
        let c2 = make_cyclic(2).unwrap();
        assert!(annihilator(&GroupShiftSFT::full(&c2)).unwrap().is_zero());
        assert_eq!(annihilator(&GroupShiftSFT::trivial(&c2)).unwrap(), FpLaurent::one(2));
        for p in [2, 3, 5] {
            let cp = make_cyclic(p).unwrap();
            let a = annihilator(&GroupShiftSFT::constants(&cp)).unwrap();
            assert_eq!(a, poly(p as u64, &[-1, 1]));
        }
        let rule = SlidingBlockHom::linear(&c2, &[1, 1, 1], 0).unwrap();
        let k = kernel_sft(&rule, &GroupShiftSFT::full(&c2)).unwrap();
        assert_eq!(annihilator(&k).unwrap(), poly(2, &[1, 1, 1]));
    }

    #[test]
    fn recurrences() {
        let s = solve_recurrence(2, &poly(2, &[1, 1, 1])).unwrap();
        assert_eq!(s.order(), 4);
        let sols = s.solutions().unwrap();
        assert!(sols[1..].iter().all(|w| w.right().len() == 3));
        assert_eq!(solve_recurrence(3, &poly(3, &[-1, 1])).unwrap().order(), 3);
        assert_eq!(solve_recurrence(2, &FpLaurent::one(2)).unwrap_err(), Error::TrivialKernel);
        assert_eq!(solve_recurrence(2, &FpLaurent::zero(2)).unwrap_err(), Error::NotFinite);
    }

    #[test]
    fn psi_examples() {
        let c2 = make_cyclic(2).unwrap();
        let psi = psi_equivalence(2, &poly(2, &[-1, 1])).unwrap();
        assert_eq!(psi.span(), 2);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(psi.eval(&[a, b]), Some((b + 2 - a) % 2));
            }
        }
        let id = psi_equivalence(2, &FpLaurent::one(2)).unwrap();
        assert_eq!(id.span(), 1);
        assert_eq!(id.eval(&[1]), Some(1));
        let k = linear_sft(2, &poly(2, &[1, 1, 1])).unwrap();
        assert_eq!(k.finite_order(), Some(4));
        assert!(GroupShiftSFT::full(&c2).same_points(&linear_sft(2, &FpLaurent::zero(2)).unwrap()).unwrap());
    }
}
