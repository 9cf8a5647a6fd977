//! The eleven acceptance criteria, each checked exactly. Every criterion
//! prints one PASS or FAIL line; the test fails if any criterion does.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nubshift_core::abelian::{annihilator, solve_recurrence};
use nubshift_core::algebra::{direct_product, make_cyclic, normal_subgroups, symmetric_group, FpLaurent};
use nubshift_core::limits::{
    build_example_5_6, build_example_c4, centre_on_periodic_points, connector_check, homoclinic_trivial_certificate,
    no_sliding_right_inverse, support_growth_exhaustive, truncated_bcg,
};
use nubshift_core::restricted::scale_of_shift;
use nubshift_core::series::{composition_factors, equivalent_series, find_quotient, SubnormalSeries};
use nubshift_core::shift::{graph_subgroup, image_sft_with};
use nubshift_core::structure::{
    contraction_closure, depth, eta, eta_solve, homoclinic_closure, nub, nub_meet, Direction,
};
use nubshift_core::{Ctx, EPWord, Group, GroupShiftSFT, Result, SlidingBlockHom};

type Outcome = Result<(bool, String)>;

fn groups(names: &[&str]) -> Vec<(String, Group)> {
    names
        .iter()
        .map(|n| {
            let g = match *n {
                "S3" => symmetric_group(3).unwrap(),
                c => make_cyclic(c[1..].parse().unwrap()).unwrap(),
            };
            (n.to_string(), g)
        })
        .collect()
}

/// Values `f(0)` over the points of `h` supported in `[0, w)`, by listing
/// every word of length `w` and testing membership.
fn brute_boundary(h: &GroupShiftSFT, w: usize) -> usize {
    let g = h.alphabet();
    let q = g.order();
    let mut seen = BTreeSet::new();
    for c in 0..q.pow(w as u32) {
        let word: Vec<usize> = (0..w).map(|i| c / q.pow(i as u32) % q).collect();
        let f = EPWord::finite(g, 0, word.clone()).unwrap();
        if h.contains(&f).unwrap() {
            seen.insert(word[0]);
        }
    }
    seen.len()
}

fn klein() -> Group {
    let c2 = make_cyclic(2).unwrap();
    direct_product(&c2, &c2)
}

/// The graph of `(a, b) ↦ a + b` inside `C_2 × C_2`, first coordinate the image.
fn h_phi() -> GroupShiftSFT {
    let c2 = make_cyclic(2).unwrap();
    graph_subgroup(&SlidingBlockHom::linear(&c2, &[1, 1], 0).unwrap()).unwrap()
}

fn quotient_depth(host: &GroupShiftSFT, k: &GroupShiftSFT, ctx: &Ctx) -> Result<usize> {
    let rho = find_quotient(host, k, ctx)?;
    let (y, _) = image_sft_with(&rho, host, ctx)?;
    Ok(depth(&y)?.depth)
}

fn criterion_1() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, g) in groups(&["C2", "C3", "S3"]) {
        let fwd = scale_of_shift(&g, Direction::Forward);
        let rev = scale_of_shift(&g, Direction::Backward);
        ok &= fwd == 1 && rev == g.order();
        detail.push(format!("{name}: {fwd}/{rev}"));
    }
    Ok((ok, detail.join(", ")))
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, g) in groups(&["C2", "C3", "C4", "S3"]) {
        let h = GroupShiftSFT::full(&g);
        let r = depth(&h)?;
        let (b1, b2) = (brute_boundary(&h, 1), brute_boundary(&h, 2));
        ok &= r.depth == g.order() && b1 == g.order() && b2 == g.order() && r.window != r.check_window;
        detail.push(format!("{name}: {} (oracle {b1}, {b2})", r.depth));
    }
    Ok((ok, detail.join(", ")))
}

fn criterion_3() -> Outcome {
    let ctx = Ctx::default();
    let s3 = symmetric_group(3)?;
    let a3 = normal_subgroups(&s3).into_iter().find(|n| n.order() == 3).unwrap();
    let host = GroupShiftSFT::full(&s3);
    let k = GroupShiftSFT::symbol_subgroup(&s3, a3.members())?;
    let (dg, dk, dq) = (depth(&host)?.depth, depth(&k)?.depth, quotient_depth(&host, &k, &ctx)?);
    let mut ok = dg == 6 && dk == 3 && dq == 2;
    let mut detail = vec![format!("S3: {dg} = {dq}*{dk}")];

    let (c2, c3) = (make_cyclic(2)?, make_cyclic(3)?);
    let g = direct_product(&c2, &c3);
    let host = GroupShiftSFT::full(&g);
    // symbols are x*3 + y; kernels of the two coordinate projections
    let first_kernel = GroupShiftSFT::symbol_subgroup(&g, &[0, 1, 2])?;
    let second_kernel = GroupShiftSFT::symbol_subgroup(&g, &[0, 3])?;
    for (k, want) in [(first_kernel, (2, 3)), (second_kernel, (3, 2))] {
        let (dq, dk) = (quotient_depth(&host, &k, &ctx)?, depth(&k)?.depth);
        ok &= depth(&host)?.depth == 6 && (dq, dk) == want && dq * dk == 6;
        detail.push(format!("C2xC3: 6 = {dq}*{dk}"));
    }
    Ok((ok, detail.join(", ")))
}

fn factor_orders(h: &GroupShiftSFT) -> Result<Vec<usize>> {
    let mut o: Vec<usize> = composition_factors(h)?.iter().map(|d| d.simple_alphabet.order()).collect();
    o.sort_unstable();
    Ok(o)
}

fn criterion_4() -> Outcome {
    let s3 = GroupShiftSFT::full(&symmetric_group(3)?);
    let k4 = GroupShiftSFT::full(&klein());
    let (a, b) = (factor_orders(&s3)?, factor_orders(&k4)?);
    let pa: usize = a.iter().product();
    let pb: usize = b.iter().product();
    let ok = a == [2, 3] && pa == depth(&s3)?.depth && pa == 6 && b == [2, 2] && pb == 4 && depth(&k4)?.depth == 4;
    Ok((ok, format!("S3: {a:?} product {pa}, C2xC2: {b:?} product {pb}")))
}

fn criterion_5() -> Outcome {
    let g = klein();
    let host = GroupShiftSFT::full(&g);
    let triv = GroupShiftSFT::trivial(&g);
    let h1 = GroupShiftSFT::symbol_subgroup(&g, &[0, 2])?;
    let h2 = GroupShiftSFT::symbol_subgroup(&g, &[0, 1])?;
    let hphi = h_phi();
    let s1 = SubnormalSeries::new(&host, vec![triv.clone(), h1, host.clone()])?;
    let s2 = SubnormalSeries::new(&host, vec![triv, hphi.clone(), host.clone()])?;
    let orders = |s: &SubnormalSeries| -> Vec<Vec<usize>> {
        s.steps().iter().map(|st| st.factor.iter().map(|c| c.order).collect()).collect()
    };
    let equivalent = equivalent_series(&s1, &s2)?;
    let meet_trivial = nub_meet(&h2, &hphi)?.is_trivial();
    let meet_order = h2.intersect(&hphi)?.finite_order();
    let ok = s1.is_composition_series()
        && s2.is_composition_series()
        && equivalent
        && orders(&s1) == [[2], [2]]
        && orders(&s2) == [[2], [2]]
        && meet_trivial
        && meet_order == Some(2);
    Ok((
        ok,
        format!("equivalent {equivalent}, factors {:?}, H2 meet trivial {meet_trivial}, |H2 ∩ Hφ| {meet_order:?}", orders(&s1)),
    ))
}

/// Every polynomial over `F_p` of degree `1..=4` with a nonzero constant term.
fn recurrences(p: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for d in 1..=4usize {
        let total = (p as usize).pow(d as u32 + 1);
        for c in 0..total {
            let co: Vec<i64> = (0..=d).map(|i| (c / (p as usize).pow(i as u32) % p as usize) as i64).collect();
            if co[0] != 0 && co[d] != 0 {
                out.push(co);
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut checked = 0usize;
    let mut detail = Vec::new();
    for p in [2u64, 3, 5] {
        let cp = make_cyclic(p as usize)?;
        let ann = annihilator(&GroupShiftSFT::constants(&cp))?;
        let sols = solve_recurrence(p, &ann)?.solutions()?;
        ok &= ann == FpLaurent::poly(p, &[-1, 1])? && sols.len() == p as usize;
        detail.push(format!("p={p}: {ann}, {} solutions", sols.len()));
        for co in recurrences(p) {
            let d = co.len() - 1;
            let q = FpLaurent::poly(p, &co)?;
            let sols = solve_recurrence(p, &q)?.solutions()?;
            let mut starts = BTreeSet::new();
            for s in &sols {
                starts.insert(s.slice(0, d as i64));
                // the recurrence holds on a window well past the initial state
                ok &= (-3..(d as i64 + 6)).all(|n| {
                    let v: i64 = (0..=d).map(|j| co[j] * s.at(n + j as i64) as i64).sum();
                    v.rem_euclid(p as i64) == 0
                });
            }
            ok &= sols.len() == (p as usize).pow(d as u32) && starts.len() == sols.len();
            checked += 1;
        }
    }
    detail.push(format!("{checked} recurrences of degree <= 4"));
    Ok((ok, detail.join(", ")))
}

fn second_constant() -> Result<GroupShiftSFT> {
    let g = klein();
    let mut blocks = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                blocks.push(vec![a * 2 + c, b * 2 + c]);
            }
        }
    }
    GroupShiftSFT::new(g, 2, &blocks)
}

fn criterion_7() -> Outcome {
    let mut hosts: Vec<(String, GroupShiftSFT)> = groups(&["C2", "C3", "C4", "S3"])
        .into_iter()
        .map(|(n, g)| (n, GroupShiftSFT::full(&g)))
        .collect();
    hosts.push(("Hφ".into(), h_phi()));
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, h) in &hosts {
        let dense = contraction_closure(h, Direction::Forward).same_points(h)?
            && contraction_closure(h, Direction::Backward).same_points(h)?
            && homoclinic_closure(h).same_points(h)?;
        ok &= dense;
        detail.push(format!("{name}: {dense}"));
    }
    let sc = second_constant()?;
    let n = nub(&sc)?;
    let symmetric = contraction_closure(&sc, Direction::Forward).same_points(&contraction_closure(&sc, Direction::Backward))?;
    let proper = !n.nub.same_points(&sc)?;
    ok &= n.index_in_host == 2 && symmetric && proper;
    detail.push(format!("second-constant nub index {}, symmetric {symmetric}", n.index_in_host));
    Ok((ok, detail.join(", ")))
}

fn criterion_8() -> Outcome {
    let ctx = Ctx::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [2u64, 3, 5] {
        let g = support_growth_exhaustive(p, 10)?;
        let sys = build_example_5_6(p, 6)?;
        let cert = homoclinic_trivial_certificate(&sys, 4)?;
        let depths = sys.level_depths()?;
        let erg = sys.ergquot_checks(&ctx)?;
        let level_ok = depths.iter().all(|&d| d == p as usize);
        let erg_ok = !erg.is_empty() && erg.iter().all(|&b| b);
        ok &= g.holds && g.max_width == 10 && cert.issued && level_ok && erg_ok;
        detail.push(format!(
            "p={p}: growth {} ({} words), certificate {}, depths {depths:?}, ergquot {erg_ok}",
            g.holds, g.words_checked, cert.issued
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn criterion_9() -> Outcome {
    let (_, levels) = build_example_c4(3)?;
    let exps_ok = !levels.is_empty()
        && levels.iter().all(|l| {
            l.holds() && l.subgroup_exponent == 2 && l.quotient_exponent == 2 && l.total_exponent == 4
        });
    let c2 = make_cyclic(2)?;
    let sum = SlidingBlockHom::linear(&c2, &[1, 1], 0)?;
    let none = no_sliding_right_inverse(&sum, 4)?;
    let ident = no_sliding_right_inverse(&SlidingBlockHom::identity(&c2), 4)?;
    Ok((
        exps_ok && none && !ident,
        format!("{} levels with exponents 2/2/4: {exps_ok}, no right inverse up to span 4: {none}", levels.len()),
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ok = true;
    let mut trials = 0;
    for (_, g) in groups(&["C2", "C3", "S3"]) {
        for _ in 0..200 {
            let len = rng.gen_range(1..=8);
            let start = rng.gen_range(-6..=6);
            let core: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.order())).collect();
            let f = EPWord::finite(&g, start, core)?;
            for k in [1i64, -1, 2, -2, 3] {
                let x = eta_solve(&f, k)?;
                ok &= eta(&x, k)? == f;
                trials += 1;
            }
        }
    }
    Ok((ok, format!("{trials} round trips")))
}

fn criterion_11() -> Outcome {
    let ctx = Ctx::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in 0..=2 {
        let c = connector_check(n, 4, &ctx)?;
        ok &= c.holds();
        detail.push(format!("connector {}->{n}: {}", n + 1, c.holds()));
    }
    for n in 0..=2 {
        let r = centre_on_periodic_points(n, 8, &ctx)?;
        ok &= r.matches_periodic_claim;
        detail.push(format!(
            "n={n}: centre {} of {} candidates, 2^n-periodic {} ({}), ker φ^n {} ({})",
            r.centre_size, r.candidates, r.claim_size, r.matches_periodic_claim, r.kernel_size, r.matches_kernel
        ));
    }
    let b = truncated_bcg(1, 4, 3, &ctx)?;
    ok &= b.closure_is_c3;
    detail.push(format!("bcg closure is C3^Z: {}", b.closure_is_c3));
    Ok((ok, detail.join("; ")))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("restricted-shift scale", criterion_1),
        ("depth of full shifts", criterion_2),
        ("depth multiplicativity", criterion_3),
        ("composition factors", criterion_4),
        ("Jordan-Hölder equivalence", criterion_5),
        ("abelian recurrences", criterion_6),
        ("density of contraction and homoclinic groups", criterion_7),
        ("support growth inverse system", criterion_8),
        ("non-splitting witnesses", criterion_9),
        ("eta round trip", criterion_10),
        ("finite-centre example", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        println!("criterion {:>2} {}: {name}: {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
