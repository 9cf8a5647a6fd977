use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::group::{close_with, generating_set, FiniteGroup, Group};
use super::hom::{extend_to_hom, FiniteHom};
use crate::error::{Error, Result};

/// A subgroup of a finite group, stored as a sorted member list.
#[derive(Clone, Debug)]
pub struct SubgroupF {
    parent: Group,
    members: Vec<usize>,
}

impl PartialEq for SubgroupF {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl SubgroupF {
    /// The subgroup generated by `gens`.
    pub fn generated(parent: &Group, gens: &[usize]) -> SubgroupF {
        let mut inside = vec![false; parent.order()];
        inside[0] = true;
        let mut members = vec![0];
        close_with(parent, gens, &mut inside, &mut members);
        members.sort_unstable();
        SubgroupF {
            parent: parent.clone(),
            members,
        }
    }

    /// Checks closure and returns the subgroup with exactly these members.
    pub fn from_members(parent: &Group, members: &[usize]) -> Result<SubgroupF> {
        let mut m: Vec<usize> = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.first() != Some(&0) {
            return Err(Error::InvalidTable("subgroup must contain the identity".into()));
        }
        let generated = SubgroupF::generated(parent, &m);
        if generated.members != m {
            return Err(Error::InvalidTable("member set is not closed".into()));
        }
        Ok(generated)
    }

    pub fn trivial(parent: &Group) -> SubgroupF {
        SubgroupF {
            parent: parent.clone(),
            members: vec![0],
        }
    }

    pub fn whole(parent: &Group) -> SubgroupF {
        SubgroupF {
            parent: parent.clone(),
            members: (0..parent.order()).collect(),
        }
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn is_normal(&self) -> bool {
        let gens = generating_set(&self.parent);
        self.members
            .iter()
            .all(|&x| gens.iter().all(|&g| self.contains(self.parent.conj(x, g))))
    }

    /// The subgroup as a group in its own right, with the inclusion map.
    pub fn as_group(&self, name: &str) -> (Group, FiniteHom) {
        let idx = |a: usize| self.members.binary_search(&a).expect("closed");
        let g = FiniteGroup::from_fn(name, self.members.len(), |i, j| {
            idx(self.parent.mul(self.members[i], self.members[j]))
        });
        let names = self.members.iter().map(|&a| self.parent.label(a)).collect();
        let g = Arc::new(g.with_names(names).expect("one name per member"));
        let incl = FiniteHom::new_unchecked(g.clone(), self.parent.clone(), self.members.clone());
        (g, incl)
    }

    /// The quotient by this (normal) subgroup and the projection onto it.
    /// Cosets are ordered by their least element.
    pub fn quotient(&self, name: &str) -> Result<(Group, FiniteHom)> {
        if !self.is_normal() {
            return Err(Error::PreconditionFailed("quotient by a non-normal subgroup".into()));
        }
        let g = &self.parent;
        let n = g.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &m in &self.members {
                coset_of[g.mul(x, m)] = c;
            }
        }
        let q = FiniteGroup::from_fn(name, reps.len(), |i, j| coset_of[g.mul(reps[i], reps[j])]);
        let names = reps.iter().map(|&r| format!("{}N", g.label(r))).collect();
        let q = Arc::new(q.with_names(names)?);
        let proj = FiniteHom::new_unchecked(g.clone(), q.clone(), coset_of);
        Ok((q, proj))
    }
}

/// The smallest normal subgroup containing `x`.
pub fn normal_closure(g: &Group, elems: &[usize]) -> SubgroupF {
    let n = g.order();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut members = vec![0];
    let gens = generating_set(g);
    let mut all_gens: Vec<usize> = Vec::new();
    let mut frontier: Vec<usize> = elems.to_vec();
    while let Some(x) = frontier.pop() {
        if inside[x] {
            continue;
        }
        let before = members.len();
        // Add x and all its conjugates, then close.
        let mut conj_class = vec![x];
        let mut seen = BTreeSet::from([x]);
        let mut i = 0;
        while i < conj_class.len() {
            let y = conj_class[i];
            i += 1;
            for &s in &gens {
                let z = g.conj(y, s);
                if seen.insert(z) {
                    conj_class.push(z);
                }
            }
        }
        all_gens.extend_from_slice(&conj_class);
        close_with(g, &all_gens, &mut inside, &mut members);
        // Products of conjugates of old and new members stay normal once all
        // members' conjugates are present.
        for &m in &members[before..] {
            for &s in &gens {
                let z = g.conj(m, s);
                if !inside[z] {
                    frontier.push(z);
                }
            }
        }
    }
    members.sort_unstable();
    SubgroupF {
        parent: g.clone(),
        members,
    }
}

/// All normal subgroups, sorted by order then members.
pub fn normal_subgroups(g: &Group) -> Vec<SubgroupF> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut minimal = Vec::new();
    for x in 0..g.order() {
        let n = normal_closure(g, &[x]);
        if found.insert(n.members.clone()) {
            minimal.push(n);
        }
    }
    // Close under joins: the join of normal subgroups is their product.
    let mut all: Vec<SubgroupF> = minimal.clone();
    let mut i = 0;
    while i < all.len() {
        for m in &minimal {
            let mut gens = all[i].members.clone();
            gens.extend_from_slice(&m.members);
            let j = SubgroupF::generated(g, &gens);
            if found.insert(j.members.clone()) {
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    all
}

/// True iff `F` has no normal subgroups besides `{1}` and `F`.
pub fn is_simple(g: &Group) -> Result<bool> {
    if g.order() == 1 {
        return Err(Error::TrivialGroup);
    }
    Ok((1..g.order()).all(|x| normal_closure(g, &[x]).order() == g.order()))
}

/// Isomorphism-class descriptor of a simple composition factor.
#[derive(Clone, Debug, Serialize)]
pub struct FactorClass {
    pub order: usize,
    pub abelian: bool,
    /// Certified class name, available for orders up to 60.
    pub class: Option<String>,
    #[serde(skip)]
    pub group: Group,
}

impl FactorClass {
    pub fn of(group: Group) -> FactorClass {
        let order = group.order();
        let abelian = group.is_abelian();
        let class = if order <= 60 {
            if abelian {
                Some(format!("C{order}"))
            } else if order == 60 {
                // The only non-abelian simple group of order at most 60.
                Some("A5".to_string())
            } else {
                None
            }
        } else {
            None
        };
        FactorClass {
            order,
            abelian,
            class,
            group,
        }
    }

    /// Sort key used to compare factor multisets.
    pub fn key(&self) -> (usize, bool, String) {
        (self.order, self.abelian, self.class.clone().unwrap_or_default())
    }
}

impl PartialEq for FactorClass {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

/// A composition series `{1} = F_0 ◁ F_1 ◁ ... ◁ F_r = F` with its factors.
#[derive(Clone, Debug)]
pub struct CompositionSeries {
    pub chain: Vec<SubgroupF>,
    /// `factors[i]` is `chain[i+1] / chain[i]`.
    pub factors: Vec<FactorClass>,
}

impl CompositionSeries {
    pub fn factor_keys(&self) -> Vec<(usize, bool, String)> {
        let mut k: Vec<_> = self.factors.iter().map(|f| f.key()).collect();
        k.sort();
        k
    }
}

/// A composition series built top-down by repeatedly taking a largest proper
/// normal subgroup.
pub fn composition_series_finite(g: &Group) -> CompositionSeries {
    // members of each chain element, as subsets of g, from the top down
    let mut chain_desc: Vec<Vec<usize>> = vec![(0..g.order()).collect()];
    let mut factors_desc = Vec::new();
    let mut current = g.clone();
    let mut to_parent: Vec<usize> = (0..g.order()).collect();
    while current.order() > 1 {
        let normals = normal_subgroups(&current);
        let maximal = normals
            .iter()
            .rev()
            .find(|n| n.order() < current.order())
            .expect("trivial subgroup is proper")
            .clone();
        let (q, _) = maximal.quotient("factor").expect("normal");
        factors_desc.push(FactorClass::of(q));
        let (sub, incl) = maximal.as_group("step");
        to_parent = incl.map().iter().map(|&x| to_parent[x]).collect();
        let mut members = to_parent.clone();
        members.sort_unstable();
        chain_desc.push(members);
        current = sub;
    }
    chain_desc.reverse();
    factors_desc.reverse();
    CompositionSeries {
        chain: chain_desc
            .into_iter()
            .map(|members| SubgroupF {
                parent: g.clone(),
                members,
            })
            .collect(),
        factors: factors_desc,
    }
}

/// Brute-force isomorphism test, refusing groups larger than `bound`.
pub fn are_isomorphic(a: &Group, b: &Group, bound: usize) -> Result<bool> {
    Ok(find_isomorphism(a, b, bound)?.is_some())
}

/// An isomorphism `a → b`, if one exists, by generator-image backtracking.
pub fn find_isomorphism(a: &Group, b: &Group, bound: usize) -> Result<Option<FiniteHom>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    if order_profile(a) != order_profile(b) || a.is_abelian() != b.is_abelian() {
        return Ok(None);
    }
    if a.order() > bound {
        return Err(Error::Unsupported(format!(
            "isomorphism test above order {bound}"
        )));
    }
    let gens = generating_set(a);
    let orders: Vec<usize> = gens.iter().map(|&g| a.element_order(g)).collect();
    let mut images = Vec::new();
    Ok(iso_rec(a, b, &gens, &orders, &mut images).map(|m| FiniteHom::new_unchecked(a.clone(), b.clone(), m)))
}

fn iso_rec(a: &Group, b: &Group, gens: &[usize], orders: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
    if images.len() == gens.len() {
        let map = extend_to_hom(a, b, gens, images)?;
        let mut hit = vec![false; b.order()];
        for &y in &map {
            if hit[y] {
                return None;
            }
            hit[y] = true;
        }
        return Some(map);
    }
    let k = images.len();
    for y in 0..b.order() {
        if b.element_order(y) != orders[k] {
            continue;
        }
        images.push(y);
        if let Some(m) = iso_rec(a, b, gens, orders, images) {
            return Some(m);
        }
        images.pop();
    }
    None
}

fn order_profile(g: &FiniteGroup) -> Vec<usize> {
    let mut v: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    v.sort_unstable();
    v
}
