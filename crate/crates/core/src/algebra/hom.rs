use std::sync::Arc;

use super::group::{FiniteGroup, Group};
use crate::error::{Error, Result};

/// A homomorphism between finite groups given by its image table.
#[derive(Clone, Debug)]
pub struct FiniteHom {
    domain: Group,
    codomain: Group,
    map: Vec<usize>,
}

impl FiniteHom {
    /// Checks `map(xy) = map(x)map(y)` for all pairs.
    pub fn new(domain: Group, codomain: Group, map: Vec<usize>) -> Result<FiniteHom> {
        if map.len() != domain.order() {
            return Err(Error::InvalidHom(format!(
                "{} images for a domain of order {}",
                map.len(),
                domain.order()
            )));
        }
        if map.iter().any(|&y| y >= codomain.order()) {
            return Err(Error::InvalidHom("image out of range".into()));
        }
        if map[0] != 0 {
            return Err(Error::InvalidHom("identity not preserved".into()));
        }
        for a in 0..domain.order() {
            for b in 0..domain.order() {
                if map[domain.mul(a, b)] != codomain.mul(map[a], map[b]) {
                    return Err(Error::InvalidHom(format!("not multiplicative at ({a},{b})")));
                }
            }
        }
        Ok(FiniteHom {
            domain,
            codomain,
            map,
        })
    }

    pub(crate) fn new_unchecked(domain: Group, codomain: Group, map: Vec<usize>) -> FiniteHom {
        FiniteHom {
            domain,
            codomain,
            map,
        }
    }

    pub fn identity(g: &Group) -> FiniteHom {
        FiniteHom::new_unchecked(g.clone(), g.clone(), (0..g.order()).collect())
    }

    pub fn domain(&self) -> &Group {
        &self.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.codomain
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.domain.order()).filter(|&a| self.map[a] == 0).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.order() == self.codomain.order() && self.is_injective()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FiniteHom) -> Result<FiniteHom> {
        if !Arc::ptr_eq(&other.codomain, &self.domain) && other.codomain.order() != self.domain.order() {
            return Err(Error::InvalidHom("composition of incompatible maps".into()));
        }
        Ok(FiniteHom::new_unchecked(
            other.domain.clone(),
            self.codomain.clone(),
            other.map.iter().map(|&x| self.map[x]).collect(),
        ))
    }
}

/// The semidirect product `N ⋊ H` together with its structure maps.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: Group,
    pub embed_n: FiniteHom,
    pub embed_h: FiniteHom,
    pub project_h: FiniteHom,
}

/// Builds `N ⋊ H` with `(n1,h1)(n2,h2) = (n1·action[h1](n2), h1h2)`. The pair
/// `(n, h)` has index `n·|H| + h`. `action[h]` must be an automorphism of `N`
/// and `h ↦ action[h]` a homomorphism.
pub fn semidirect_product(n: &Group, h: &Group, action: &[FiniteHom]) -> Result<SemidirectProduct> {
    if action.len() != h.order() {
        return Err(Error::InvalidAction(format!(
            "{} automorphisms for a group of order {}",
            action.len(),
            h.order()
        )));
    }
    for (i, a) in action.iter().enumerate() {
        if a.domain().order() != n.order() || a.codomain().order() != n.order() {
            return Err(Error::InvalidAction(format!("entry {i} is not an endomorphism of N")));
        }
        if !a.is_bijective() {
            return Err(Error::InvalidAction(format!("entry {i} is not bijective")));
        }
        for x in 0..n.order() {
            for y in 0..n.order() {
                if a.apply(n.mul(x, y)) != n.mul(a.apply(x), a.apply(y)) {
                    return Err(Error::InvalidAction(format!("entry {i} is not multiplicative")));
                }
            }
        }
    }
    for h1 in 0..h.order() {
        for h2 in 0..h.order() {
            let prod = &action[h.mul(h1, h2)];
            for x in 0..n.order() {
                if prod.apply(x) != action[h1].apply(action[h2].apply(x)) {
                    return Err(Error::InvalidAction(format!(
                        "action is not a homomorphism at ({h1},{h2})"
                    )));
                }
            }
        }
    }
    let nh = h.order();
    let order = n.order() * nh;
    let mut g = FiniteGroup::from_fn(&format!("{}:{}", n.name(), h.name()), order, |u, v| {
        let (n1, h1) = (u / nh, u % nh);
        let (n2, h2) = (v / nh, v % nh);
        n.mul(n1, action[h1].apply(n2)) * nh + h.mul(h1, h2)
    });
    g = g.with_names(
        (0..order)
            .map(|u| format!("({},{})", n.label(u / nh), h.label(u % nh)))
            .collect(),
    )?;
    let group = Arc::new(g);
    Ok(SemidirectProduct {
        embed_n: FiniteHom::new_unchecked(n.clone(), group.clone(), (0..n.order()).map(|x| x * nh).collect()),
        embed_h: FiniteHom::new_unchecked(h.clone(), group.clone(), (0..nh).collect()),
        project_h: FiniteHom::new_unchecked(group.clone(), h.clone(), (0..order).map(|u| u % nh).collect()),
        group,
    })
}

/// All homomorphisms `A → B`, by generator-image backtracking.
pub fn all_homs(a: &Group, b: &Group) -> Vec<FiniteHom> {
    let gens = super::group::generating_set(a);
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    homs_rec(a, b, &gens, &mut images, &mut out);
    out
}

fn homs_rec(a: &Group, b: &Group, gens: &[usize], images: &mut Vec<usize>, out: &mut Vec<FiniteHom>) {
    if images.len() == gens.len() {
        if let Some(map) = extend_to_hom(a, b, gens, images) {
            out.push(FiniteHom::new_unchecked(a.clone(), b.clone(), map));
        }
        return;
    }
    let g = gens[images.len()];
    let ord = a.element_order(g);
    for y in 0..b.order() {
        if ord % b.element_order(y) != 0 {
            continue;
        }
        images.push(y);
        homs_rec(a, b, gens, images, out);
        images.pop();
    }
}

/// Tries to extend `gens[i] ↦ images[i]` to a homomorphism on the whole of `a`.
pub(crate) fn extend_to_hom(a: &Group, b: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut map = vec![UNSET; a.order()];
    map[0] = 0;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (k, &g) in gens.iter().enumerate() {
            let y = a.mul(x, g);
            let img = b.mul(map[x], images[k]);
            if map[y] == UNSET {
                map[y] = img;
                queue.push(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    if map.iter().any(|&m| m == UNSET) {
        return None;
    }
    for x in 0..a.order() {
        for y in 0..a.order() {
            if map[a.mul(x, y)] != b.mul(map[x], map[y]) {
                return None;
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::group::{direct_product, make_cyclic, symmetric_group};
    use crate::algebra::subgroup::are_isomorphic;

    fn inversion_action(c3: &Group, c2: &Group) -> Vec<FiniteHom> {
        vec![
            FiniteHom::identity(c3),
            FiniteHom::new(c3.clone(), c3.clone(), vec![0, 2, 1]).unwrap(),
        ]
        .into_iter()
        .take(c2.order())
        .collect()
    }

    #[test]
    fn c3_by_c2_is_s3() {
        let c3 = make_cyclic(3).unwrap();
        let c2 = make_cyclic(2).unwrap();
        let sd = semidirect_product(&c3, &c2, &inversion_action(&c3, &c2)).unwrap();
        assert_eq!(sd.group.order(), 6);
        assert!(!sd.group.is_abelian());
        let s3 = symmetric_group(3).unwrap();
        assert!(are_isomorphic(&sd.group, &s3, 24).unwrap());
        assert_eq!(sd.project_h.kernel().len(), 3);
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let c2 = make_cyclic(2).unwrap();
        let c3 = make_cyclic(3).unwrap();
        let act = vec![FiniteHom::identity(&c3); 2];
        let sd = semidirect_product(&c3, &c2, &act).unwrap();
        let g = &sd.group;
        for x in 0..3 {
            for y in 0..2 {
                assert!(g.commute(sd.embed_n.apply(x), sd.embed_h.apply(y)));
            }
        }
        assert!(are_isomorphic(g, &direct_product(&c3, &c2), 24).unwrap());
    }

    #[test]
    fn aut_c2_is_trivial() {
        let c2 = make_cyclic(2).unwrap();
        let autos: Vec<_> = all_homs(&c2, &c2).into_iter().filter(|h| h.is_bijective()).collect();
        assert_eq!(autos.len(), 1);
        let sd = semidirect_product(&c2, &c2, &[autos[0].clone(), autos[0].clone()]).unwrap();
        assert!(are_isomorphic(&sd.group, &direct_product(&c2, &c2), 24).unwrap());
    }

    #[test]
    fn bad_actions_rejected() {
        let c3 = make_cyclic(3).unwrap();
        let c2 = make_cyclic(2).unwrap();
        let c4 = make_cyclic(4).unwrap();
        let inv = FiniteHom::new(c3.clone(), c3.clone(), vec![0, 2, 1]).unwrap();
        // C4 cannot act by inversion through the generator of order 4 and
        // its square also acting by inversion.
        let act = vec![FiniteHom::identity(&c3), inv.clone(), inv.clone(), inv];
        assert!(matches!(semidirect_product(&c3, &c4, &act), Err(Error::InvalidAction(_))));
        let zero = FiniteHom::new(c3.clone(), c3.clone(), vec![0, 0, 0]).unwrap();
        let act = vec![FiniteHom::identity(&c3), zero];
        assert!(matches!(semidirect_product(&c3, &c2, &act), Err(Error::InvalidAction(_))));
    }

    #[test]
    fn hom_checks() {
        let c4 = make_cyclic(4).unwrap();
        let c2 = make_cyclic(2).unwrap();
        assert!(FiniteHom::new(c4.clone(), c2.clone(), vec![0, 1, 0, 1]).is_ok());
        assert!(FiniteHom::new(c4.clone(), c2.clone(), vec![0, 1, 1, 0]).is_err());
        assert_eq!(all_homs(&c4, &c2).len(), 2);
        assert_eq!(all_homs(&c2, &c4).len(), 2);
    }
}
