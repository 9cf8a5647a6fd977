use proptest::prelude::*;

use nubshift_core::abelian::{annihilator, linear_sft, solve_recurrence};
use nubshift_core::algebra::{direct_product, make_cyclic, symmetric_group, FpLaurent};
use nubshift_core::limits::support_growth_check;
use nubshift_core::restricted::{level_index, LevelSubgroupSym, RestrictedPoint};
use nubshift_core::shift::kernel_sft;
use nubshift_core::structure::{depth, eta, eta_solve, is_topologically_transitive, nub};
use nubshift_core::{EPWord, Group, GroupShiftSFT, SlidingBlockHom};

fn group(i: usize) -> Group {
    match i {
        0 => make_cyclic(2).unwrap(),
        1 => make_cyclic(3).unwrap(),
        _ => symmetric_group(3).unwrap(),
    }
}

/// A finitely supported word over `g` from raw symbols.
fn word(g: &Group, start: i64, raw: &[usize]) -> EPWord {
    let core = raw.iter().map(|&s| s % g.order()).collect();
    EPWord::finite(g, start, core).unwrap()
}

fn raw() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..6, 0..8)
}

proptest! {
    #[test]
    fn words_form_a_group(gi in 0usize..3, a in raw(), b in raw(), c in raw(), s in -4i64..4) {
        let g = group(gi);
        let (a, b, c) = (word(&g, s, &a), word(&g, -s, &b), word(&g, 1, &c));
        let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(a.multiply(&a.inverse()).unwrap().is_identity());
        let shifted = a.multiply(&b).unwrap().shift_by(s);
        prop_assert_eq!(shifted, a.shift_by(s).multiply(&b.shift_by(s)).unwrap());
    }

    #[test]
    fn periodic_words_multiply(a in prop::collection::vec(0usize..6, 1..5), b in prop::collection::vec(0usize..6, 1..5), n in -20i64..20) {
        let g = group(2);
        let pa = EPWord::periodic(&g, a.iter().map(|x| x % 6).collect()).unwrap();
        let pb = EPWord::periodic(&g, b.iter().map(|x| x % 6).collect()).unwrap();
        let prod = pa.multiply(&pb).unwrap();
        prop_assert_eq!(prod.at(n), g.mul(pa.at(n), pb.at(n)));
    }

    #[test]
    fn linear_maps_commute_with_shift(
        pi in 0usize..3,
        coeffs in prop::collection::vec(0i64..5, 1..4),
        anchor in -3i64..3,
        f in raw(),
        g in raw(),
        s in -5i64..5,
    ) {
        let p = [2, 3, 5][pi];
        let cp = make_cyclic(p).unwrap();
        let phi = SlidingBlockHom::linear(&cp, &coeffs, anchor).unwrap();
        let (f, g) = (word(&cp, s, &f), word(&cp, 0, &g));
        prop_assert_eq!(phi.apply(&f.shift_by(1)).unwrap(), phi.apply(&f).unwrap().shift_by(1));
        let fg = phi.apply(&f.multiply(&g).unwrap()).unwrap();
        prop_assert_eq!(fg, phi.apply(&f).unwrap().multiply(&phi.apply(&g).unwrap()).unwrap());
    }

    #[test]
    fn kernel_membership(pi in 0usize..2, coeffs in prop::collection::vec(1i64..5, 2..4), f in raw()) {
        let p = [2, 3][pi];
        let cp = make_cyclic(p).unwrap();
        let phi = SlidingBlockHom::linear(&cp, &coeffs, 0).unwrap();
        let k = kernel_sft(&phi, &GroupShiftSFT::full(&cp)).unwrap();
        let f = word(&cp, 0, &f);
        prop_assert_eq!(k.contains(&f).unwrap(), phi.apply(&f).unwrap().is_identity());
    }

    #[test]
    fn eta_round_trip(gi in 0usize..3, f in raw(), s in -5i64..5, k in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])) {
        let g = group(gi);
        let f = word(&g, s, &f);
        let x = eta_solve(&f, k).unwrap();
        prop_assert_eq!(eta(&x, k).unwrap(), f);
    }

    #[test]
    fn level_lattice(gi in 0usize..3, n in -5i64..5, d in 0i64..3, f in raw(), s in -6i64..6) {
        let g = group(gi);
        prop_assert_eq!(level_index(&g, n + d, n), g.order().pow(d as u32));
        prop_assert_eq!(level_index(&g, n, n + d), 1);
        let v = LevelSubgroupSym::new(n);
        let f = RestrictedPoint::new(word(&g, s, &f)).unwrap();
        prop_assert_eq!(v.contains(&f), v.shift_by(1).contains(&f.shift_by(1)));
    }

    #[test]
    fn product_depth(a in 2usize..5, b in 2usize..4) {
        let g = direct_product(&make_cyclic(a).unwrap(), &make_cyclic(b).unwrap());
        let h = GroupShiftSFT::full(&g);
        prop_assert_eq!(depth(&h).unwrap().depth, a * b);
        prop_assert!(is_topologically_transitive(&h));
        prop_assert_eq!(nub(&h).unwrap().index_in_host, 1);
    }

    #[test]
    fn annihilator_recovers_recurrence(pi in 0usize..3, mid in prop::collection::vec(0i64..5, 0..3), ends in (1i64..5, 1i64..5)) {
        let p = [2u64, 3, 5][pi];
        let mut co = vec![ends.0 % p as i64];
        co.extend(mid.iter().map(|c| c % p as i64));
        co.push(ends.1 % p as i64);
        prop_assume!(co[0] != 0 && *co.last().unwrap() != 0);
        let q = FpLaurent::poly(p, &co).unwrap();
        let h = linear_sft(p, &q).unwrap();
        prop_assert_eq!(annihilator(&h).unwrap(), q.normalized());
        let sols = solve_recurrence(p, &q).unwrap();
        prop_assert_eq!(sols.order(), (p as u128).pow(co.len() as u32 - 1));
    }

    #[test]
    fn differences_grow_support(pi in 0usize..3, f in prop::collection::vec(0usize..5, 1..10), s in -4i64..4) {
        let p = [2usize, 3, 5][pi];
        let cp = make_cyclic(p).unwrap();
        let f = word(&cp, s, &f);
        prop_assume!(!f.is_identity());
        prop_assert!(support_growth_check(&f).unwrap());
    }
}
