//! The restricted shift: words whose support is bounded above, modelled by
//! finitely supported words together with the lattice of level subgroups
//! `V_n = F^{(−∞,n]}`.
//!
//! Everything here is exact. Indices between level subgroups are found by
//! enumerating coset representatives on the displaced interval, so they are
//! small integer computations rather than formulas.

use serde::Serialize;

use crate::algebra::Group;
use crate::error::{Error, Result};
use crate::shift::EPWord;
use crate::structure::Direction;

/// A finitely supported word, standing in for a point of the restricted shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedPoint {
    word: EPWord,
}

impl RestrictedPoint {
    pub fn new(word: EPWord) -> Result<RestrictedPoint> {
        if !word.is_finitely_supported() {
            return Err(Error::PreconditionFailed("restricted points must be finitely supported".into()));
        }
        Ok(RestrictedPoint { word })
    }

    pub fn identity(f: &Group) -> RestrictedPoint {
        RestrictedPoint {
            word: EPWord::identity(f),
        }
    }

    /// The word with symbol `s` at `pos` and the identity elsewhere.
    pub fn delta(f: &Group, s: usize, pos: i64) -> RestrictedPoint {
        RestrictedPoint {
            word: EPWord::delta(f, s, pos),
        }
    }

    pub fn word(&self) -> &EPWord {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_identity()
    }

    /// Greatest support position, or `None` for the identity.
    pub fn top(&self) -> Option<i64> {
        self.word.support().map(|(_, hi)| hi)
    }

    /// `σ^k`.
    pub fn shift_by(&self, k: i64) -> RestrictedPoint {
        RestrictedPoint {
            word: self.word.shift_by(k),
        }
    }

    pub fn multiply(&self, other: &RestrictedPoint) -> Result<RestrictedPoint> {
        Ok(RestrictedPoint {
            word: self.word.multiply(&other.word)?,
        })
    }

    pub fn inverse(&self) -> RestrictedPoint {
        RestrictedPoint {
            word: self.word.inverse(),
        }
    }
}

/// The level subgroup `V_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSubgroupSym {
    pub level: i64,
}

impl LevelSubgroupSym {
    pub fn new(level: i64) -> LevelSubgroupSym {
        LevelSubgroupSym { level }
    }

    pub fn contains(&self, f: &RestrictedPoint) -> bool {
        f.top().map_or(true, |t| t <= self.level)
    }

    /// `σ^k(V_n) = V_{n−k}`.
    pub fn shift_by(&self, k: i64) -> LevelSubgroupSym {
        LevelSubgroupSym { level: self.level - k }
    }
}

/// Subgroups reachable from the levels by shifting, meeting and joining.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "level")]
pub enum SymSubgroup {
    Trivial,
    Level(i64),
    Whole,
}

impl SymSubgroup {
    fn rank(&self) -> (i8, i64) {
        match *self {
            SymSubgroup::Trivial => (0, 0),
            SymSubgroup::Level(n) => (1, n),
            SymSubgroup::Whole => (2, 0),
        }
    }

    /// The lattice is a chain, so meets and joins are minima and maxima.
    pub fn meet(self, other: SymSubgroup) -> SymSubgroup {
        if self.rank() <= other.rank() {
            self
        } else {
            other
        }
    }

    pub fn join(self, other: SymSubgroup) -> SymSubgroup {
        if self.rank() >= other.rank() {
            self
        } else {
            other
        }
    }

    pub fn shift_by(self, k: i64) -> SymSubgroup {
        match self {
            SymSubgroup::Level(n) => SymSubgroup::Level(n - k),
            s => s,
        }
    }

    pub fn contains(&self, f: &RestrictedPoint) -> bool {
        match *self {
            SymSubgroup::Trivial => f.is_identity(),
            SymSubgroup::Level(n) => LevelSubgroupSym::new(n).contains(f),
            SymSubgroup::Whole => true,
        }
    }

    /// Every subgroup in the lattice is closed in the restricted shift.
    pub fn is_closed(&self) -> bool {
        true
    }
}

fn step(direction: Direction) -> i64 {
    match direction {
        Direction::Forward => 1,
        Direction::Backward => -1,
    }
}

/// All points supported in `(lo, hi]`.
fn points_on(f: &Group, lo: i64, hi: i64) -> Vec<RestrictedPoint> {
    let mut out = vec![RestrictedPoint::identity(f)];
    for pos in lo + 1..=hi {
        let mut next = Vec::with_capacity(out.len() * f.order());
        for p in &out {
            for s in 0..f.order() {
                next.push(p.multiply(&RestrictedPoint::delta(f, s, pos)).expect("same alphabet"));
            }
        }
        out = next;
    }
    out
}

/// `[V_a : V_a ∩ V_b]`, found by listing the points of `V_a` supported on
/// the displaced interval `(min(a,b), a]` and counting their distinct cosets
/// modulo `V_b`.
pub fn level_index(f: &Group, a: i64, b: i64) -> usize {
    if a <= b {
        return 1;
    }
    let meet = LevelSubgroupSym::new(b);
    let reps = points_on(f, b, a);
    let mut classes: Vec<&RestrictedPoint> = Vec::new();
    for r in &reps {
        let new = classes
            .iter()
            .all(|c| !meet.contains(&c.inverse().multiply(r).expect("same alphabet")));
        if new {
            classes.push(r);
        }
    }
    classes.len()
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaleReport {
    pub direction: Direction,
    pub group_order: usize,
    /// `(n, [α(V_n) : α(V_n) ∩ V_n])` for each level examined.
    pub indices: Vec<(i64, usize)>,
    pub scale: usize,
    /// The minimum is attained at every examined level.
    pub uniformly_minimizing: bool,
}

/// Scale of `σ` or `σ⁻¹` over the level family, with the per-level indices.
pub fn scale_report(f: &Group, direction: Direction, levels: std::ops::RangeInclusive<i64>) -> ScaleReport {
    let d = step(direction);
    let indices: Vec<(i64, usize)> = levels
        .map(|n| {
            let v = LevelSubgroupSym::new(n);
            (n, level_index(f, v.shift_by(d).level, n))
        })
        .collect();
    let scale = indices.iter().map(|&(_, i)| i).min().unwrap_or(1);
    ScaleReport {
        direction,
        group_order: f.order(),
        uniformly_minimizing: indices.iter().all(|&(_, i)| i == scale),
        indices,
        scale,
    }
}

/// `1` for `σ` and `|F|` for `σ⁻¹`.
pub fn scale_of_shift(f: &Group, direction: Direction) -> usize {
    scale_report(f, direction, -2..=2).scale
}

#[derive(Clone, Debug, Serialize)]
pub struct TidyComponents {
    pub subgroup: LevelSubgroupSym,
    pub direction: Direction,
    /// `⋂_{k≥0} α^k(V)`.
    pub plus: SymSubgroup,
    /// `⋂_{k≥0} α^{−k}(V)`.
    pub minus: SymSubgroup,
    pub plus_plus: SymSubgroup,
    pub minus_minus: SymSubgroup,
    /// `V = V_+ V_−`.
    pub tidy_above: bool,
    /// `V_{++}` and `V_{−−}` are closed.
    pub tidy_below: bool,
    /// `[α(V_+) : V_+]`.
    pub index: usize,
    /// The index agrees with the scale.
    pub minimizing: bool,
}

/// Meet and join of the orbit `α^{k·d}(V_n)`, `k ≥ 0`, where `d = ±1`.
/// Levels running down meet to `{1}`; levels running up join to everything.
fn orbit_limits(n: i64, d: i64) -> (SymSubgroup, SymSubgroup) {
    if d > 0 {
        (SymSubgroup::Trivial, SymSubgroup::Level(n))
    } else {
        (SymSubgroup::Level(n), SymSubgroup::Whole)
    }
}

fn orbit_union(s: SymSubgroup, d: i64) -> SymSubgroup {
    match s {
        SymSubgroup::Level(n) => orbit_limits(n, d).1,
        other => other,
    }
}

pub fn tidy_components(f: &Group, v: LevelSubgroupSym, direction: Direction) -> TidyComponents {
    let d = step(direction);
    let n = v.level;
    let plus = orbit_limits(n, d).0;
    let minus = orbit_limits(n, -d).0;
    let plus_plus = orbit_union(plus, d);
    let minus_minus = orbit_union(minus, -d);
    let index = match plus {
        SymSubgroup::Level(m) => level_index(f, m - d, m),
        _ => 1,
    };
    TidyComponents {
        subgroup: v,
        direction,
        plus,
        minus,
        plus_plus,
        minus_minus,
        tidy_above: plus.join(minus) == SymSubgroup::Level(n),
        tidy_below: plus_plus.is_closed() && minus_minus.is_closed(),
        index,
        minimizing: index == scale_of_shift(f, direction),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub group_order: usize,
    /// Points supported in `[−bound, bound]` were checked exhaustively.
    pub support_bound: i64,
    pub points_checked: usize,
    /// Every checked point has `σ^k(f) ∈ V_0` from some `k` on.
    pub con_is_everything: bool,
    /// Largest entry time into `V_0` seen.
    pub max_entry_time: i64,
    /// No non-identity point has its two-sided orbit inside one level.
    pub bounded_orbits_trivial: bool,
    pub nub_trivial: bool,
}

/// For a non-identity point, the least `k ≥ 0` with `σ^{−k}(f) ∉ V_m`.
fn escape_time(f: &RestrictedPoint, m: i64) -> Option<i64> {
    f.top().map(|t| (m - t + 1).max(0))
}

pub fn contraction_report(f: &Group, bound: i64) -> ContractionReport {
    let v0 = LevelSubgroupSym::new(0);
    let points = points_on(f, -bound - 1, bound);
    let mut con = true;
    let mut max_entry = 0;
    let mut bounded = 0usize;
    for p in &points {
        let entry = p.top().map_or(0, |t| (t + 1).max(0));
        max_entry = max_entry.max(entry);
        // once inside V_0 the support only moves further left
        con &= (entry..entry + 3).all(|k| v0.contains(&p.shift_by(k)));
        if p.is_identity() {
            continue;
        }
        let escapes = (-bound..=bound).all(|m| {
            let k = escape_time(p, m).expect("non-identity");
            !LevelSubgroupSym::new(m).contains(&p.shift_by(-k))
        });
        if !escapes {
            bounded += 1;
        }
    }
    ContractionReport {
        group_order: f.order(),
        support_bound: bound,
        points_checked: points.len(),
        con_is_everything: con,
        max_entry_time: max_entry,
        bounded_orbits_trivial: bounded == 0,
        nub_trivial: bounded == 0,
    }
}

/// The two-sided orbit lies in a single level. Only the identity qualifies:
/// any other point has `σ^{−k}(f)` leaving `V_m` once `k > m − top`.
pub fn orbit_bounded(f: &RestrictedPoint) -> bool {
    match f.top() {
        None => true,
        Some(t) => !(t..t + 8).all(|m| {
            let k = escape_time(f, m).expect("non-identity");
            !LevelSubgroupSym::new(m).contains(&f.shift_by(-k))
        }),
    }
}

/// If the `σ`-orbit of `f ∈ V` is bounded then it lies in `V`.
pub fn criterion_check(v: LevelSubgroupSym, f: &RestrictedPoint) -> Result<bool> {
    if !v.contains(f) {
        return Err(Error::PreconditionFailed(format!("point is not in V_{}", v.level)));
    }
    if !orbit_bounded(f) {
        return Ok(true);
    }
    Ok((-4..=4).all(|k| v.contains(&f.shift_by(k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_cyclic, symmetric_group};

    #[test]
    fn scales() {
        let c2 = make_cyclic(2).unwrap();
        let s3 = symmetric_group(3).unwrap();
        assert_eq!(scale_of_shift(&c2, Direction::Forward), 1);
        assert_eq!(scale_of_shift(&c2, Direction::Backward), 2);
        assert_eq!(scale_of_shift(&s3, Direction::Backward), 6);
        let r = scale_report(&s3, Direction::Backward, -3..=3);
        assert!(r.uniformly_minimizing);
    }

    #[test]
    fn level_indices() {
        let c3 = make_cyclic(3).unwrap();
        assert_eq!(level_index(&c3, 1, 0), 3);
        assert_eq!(level_index(&c3, 2, 0), 9);
        assert_eq!(level_index(&c3, 0, 2), 1);
    }

    #[test]
    fn tidy() {
        let c2 = make_cyclic(2).unwrap();
        let v0 = LevelSubgroupSym::new(0);
        let t = tidy_components(&c2, v0, Direction::Forward);
        assert_eq!(t.plus, SymSubgroup::Trivial);
        assert_eq!(t.minus, SymSubgroup::Level(0));
        assert_eq!(t.minus_minus, SymSubgroup::Whole);
        assert!(t.tidy_above && t.tidy_below && t.minimizing);
        assert_eq!(t.index, 1);
        let t = tidy_components(&c2, v0, Direction::Backward);
        assert_eq!(t.plus, SymSubgroup::Level(0));
        assert_eq!(t.minus, SymSubgroup::Trivial);
        assert_eq!(t.index, 2);
        assert!(t.minimizing);
    }

    #[test]
    fn contraction() {
        let c2 = make_cyclic(2).unwrap();
        let r = contraction_report(&c2, 2);
        assert_eq!(r.points_checked, 32);
        assert!(r.con_is_everything && r.nub_trivial);
        let f = RestrictedPoint::delta(&c2, 1, 0);
        assert!((1..5).all(|k| LevelSubgroupSym::new(0).contains(&f.shift_by(k))));
    }

    #[test]
    fn criterion() {
        let c2 = make_cyclic(2).unwrap();
        let v0 = LevelSubgroupSym::new(0);
        assert!(criterion_check(v0, &RestrictedPoint::identity(&c2)).unwrap());
        let f = RestrictedPoint::delta(&c2, 1, 0);
        assert!(!orbit_bounded(&f));
        assert!(criterion_check(v0, &f).unwrap());
        assert!(matches!(
            criterion_check(LevelSubgroupSym::new(-1), &f),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
