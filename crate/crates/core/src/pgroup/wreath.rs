//! The wreath product `Z_p ≀ Z_p`, isomorphism with it, and section search.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use super::small_group::{normal_subgroups, subgroups, SmallGroup, Subgroup};
use crate::element::{Ambient, GroupElement};
use crate::error::{GroupError, Result};
use crate::group::Group;
use crate::perm::Permutation;

/// `Z_p ≀ Z_p` on `p²` points: `base` cycles the first block, `top` permutes blocks.
#[derive(Clone, Debug)]
pub struct WreathModel {
    pub p: u64,
    pub group: Group,
    pub small: Arc<SmallGroup>,
    invariants: Invariants,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Invariants {
    order: usize,
    exponent: u64,
    center: usize,
    derived: usize,
    class_sizes: Vec<usize>,
    order_statistics: BTreeMap<u64, usize>,
}

impl Invariants {
    fn of(s: &SmallGroup) -> Self {
        Invariants {
            order: s.order(),
            exponent: s.exponent(),
            center: s.center().len(),
            derived: s.derived_subgroup().len(),
            class_sizes: s.class_sizes(),
            order_statistics: s.order_statistics(),
        }
    }
}

pub fn build_wreath(p: u64) -> Result<WreathModel> {
    if ![2, 3, 5].contains(&p) {
        return Err(GroupError::Unsupported(format!("wreath model for p = {p}")));
    }
    let n = (p * p) as usize;
    let base = Permutation::from_cycles(n, &[(0..p as u32).collect()])?;
    let top = Permutation::from_images((0..n as u32).map(|i| (i + p as u32) % n as u32).collect())?;
    let group = Group::new(
        format!("Z{p}wrZ{p}"),
        Ambient::Perm { degree: n },
        vec![GroupElement::Perm(base), GroupElement::Perm(top)],
    )?;
    let small = SmallGroup::from_group(&group, 20_000)?;
    let invariants = Invariants::of(&small);
    let pu = p as usize;
    assert_eq!(invariants.order, pu.pow(pu as u32 + 1), "wreath order");
    assert_eq!(invariants.center, pu, "wreath center");
    assert_eq!(invariants.derived, pu.pow(pu as u32 - 1), "wreath derived subgroup");
    Ok(WreathModel { p, group, small: Arc::new(small), invariants })
}

/// Cached models for p = 2, 3, 5.
pub fn wreath_model(p: u64) -> Result<&'static WreathModel> {
    static MODELS: [OnceLock<std::result::Result<WreathModel, String>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match p {
        2 => 0,
        3 => 1,
        5 => 2,
        _ => return Err(GroupError::Unsupported(format!("wreath model for p = {p}"))),
    };
    MODELS[slot]
        .get_or_init(|| build_wreath(p).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| GroupError::Invalid(e.clone()))
}

/// Does `a -> x`, `b -> y` (model generators) extend to an isomorphism onto `h`?
fn extends_to_isomorphism(model: &SmallGroup, h: &SmallGroup, images: &[u32]) -> bool {
    let n = model.order();
    let mut phi = vec![u32::MAX; n];
    let mut used = vec![false; n];
    phi[0] = 0;
    used[0] = true;
    let mut queue = vec![0u32];
    let mut head = 0;
    while head < queue.len() {
        let m = queue[head];
        head += 1;
        for (&g, &img) in model.generators().iter().zip(images) {
            let target = model.mul(m, g);
            let val = h.mul(phi[m as usize], img);
            match phi[target as usize] {
                u32::MAX => {
                    if used[val as usize] {
                        return false;
                    }
                    used[val as usize] = true;
                    phi[target as usize] = val;
                    queue.push(target);
                }
                existing if existing != val => return false,
                _ => {}
            }
        }
    }
    queue.len() == n
}

/// Whether `h ≅ Z_p ≀ Z_p`: invariant screen, then a search for images of the model's generators.
pub fn iso_to_wreath(h: &SmallGroup, p: u64) -> Result<bool> {
    let model = wreath_model(p)?;
    let m = &model.small;
    if h.order() != m.order() {
        return Ok(false);
    }
    if Invariants::of(h) != model.invariants {
        return Ok(false);
    }
    let gens = m.generators();
    let (a, b) = (gens[0], gens[1]);
    let oa = m.element_order(a);
    let ob = m.element_order(b);
    let oab = m.element_order(m.mul(a, b));
    let oc = m.element_order(m.comm(a, b));
    let orders = h.element_orders();
    // up to conjugation the image of `a` is a class representative
    for x in h.class_representatives() {
        if orders[x as usize] != oa {
            continue;
        }
        for y in 0..h.order() as u32 {
            if orders[y as usize] != ob
                || h.element_order(h.mul(x, y)) != oab
                || h.element_order(h.comm(x, y)) != oc
            {
                continue;
            }
            if extends_to_isomorphism(m, h, &[x, y]) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Quotient,
    Full,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionVerdict {
    pub found: bool,
    pub tier: Tier,
    /// Generators of `H ≤ Q` and normal generators of `N ⊴ H` with `H/N ≅ Z_p ≀ Z_p`, as indices into `Q`.
    pub witness: Option<(Vec<u32>, Vec<u32>)>,
    pub message: Option<String>,
}

pub const FULL_TIER_CAP_P2: usize = 1024;
pub const FULL_TIER_CAP_P3: usize = 729;
pub const QUOTIENT_TIER_CAP: usize = 2187;
pub const SUBGROUP_COUNT_CAP: usize = 200_000;

fn full_cap(p: u64) -> usize {
    match p {
        2 => FULL_TIER_CAP_P2,
        3 => FULL_TIER_CAP_P3,
        _ => 0,
    }
}

/// Look for `N ⊴ H` with `H/N ≅ Z_p ≀ Z_p`; returns generators of `N` in `H`'s numbering.
fn wreath_quotient_of(h: &SmallGroup, p: u64, target: usize) -> Result<Option<Vec<u32>>> {
    if h.order() < target || h.order() % target != 0 {
        return Ok(None);
    }
    for n in normal_subgroups(h, SUBGROUP_COUNT_CAP)? {
        if h.order() / n.order() != target {
            continue;
        }
        if iso_to_wreath(&h.quotient(&n.members)?, p)? {
            return Ok(Some(n.gens.clone()));
        }
    }
    Ok(None)
}

/// Search for a section of `q` isomorphic to `Z_p ≀ Z_p`.
///
/// `Tier::Quotient` looks at quotients of `q` itself; `Tier::Full` at quotients
/// of every subgroup. Inputs beyond the caps give `Tier::Indeterminate`.
pub fn wreath_section_detect(q: &SmallGroup, p: u64, tier: Tier) -> Result<SectionVerdict> {
    if !q.is_p_group(p) {
        return Err(GroupError::Invalid(format!("section search needs a {p}-group, got order {}", q.order())));
    }
    let target = wreath_model(p)?.small.order();
    let not_found = |tier| SectionVerdict { found: false, tier, witness: None, message: None };
    let indeterminate = |msg: String| SectionVerdict { found: false, tier: Tier::Indeterminate, witness: None, message: Some(msg) };
    if q.order() < target {
        return Ok(not_found(tier));
    }
    let run_quotient = || -> Result<SectionVerdict> {
        if q.order() > QUOTIENT_TIER_CAP {
            return Ok(indeterminate(format!("order {} exceeds the quotient-tier cap {QUOTIENT_TIER_CAP}", q.order())));
        }
        match wreath_quotient_of(q, p, target) {
            Ok(Some(n)) => Ok(SectionVerdict { found: true, tier: Tier::Quotient, witness: Some((q.generators().to_vec(), n)), message: None }),
            Ok(None) => Ok(not_found(Tier::Quotient)),
            Err(e) if e.is_overflow() => Ok(indeterminate(e.to_string())),
            Err(e) => Err(e),
        }
    };
    match tier {
        Tier::Indeterminate => Err(GroupError::Invalid("indeterminate is not a search tier".into())),
        Tier::Quotient => run_quotient(),
        Tier::Full => {
            // `Q` is one of its own subgroups; its quotients are the cheapest place to look
            if q.order() <= QUOTIENT_TIER_CAP {
                if let Some(n) = wreath_quotient_of(q, p, target)? {
                    return Ok(SectionVerdict { found: true, tier: Tier::Full, witness: Some((q.generators().to_vec(), n)), message: None });
                }
            }
            if q.order() > full_cap(p) {
                return Ok(indeterminate(format!("order {} exceeds the full-tier cap {} for p = {p}", q.order(), full_cap(p))));
            }
            let subs = match subgroups(q, full_cap(p), SUBGROUP_COUNT_CAP) {
                Ok(s) => s,
                Err(e) if e.is_overflow() => return Ok(indeterminate(e.to_string())),
                Err(e) => return Err(e),
            };
            // largest subgroups first: q itself is the likeliest witness
            for h in subs.iter().rev() {
                if h.order() < target || h.order() % target != 0 {
                    continue;
                }
                let sub = q.induced(h)?;
                if let Some(n_local) = wreath_quotient_of(&sub, p, target)? {
                    let members: Vec<u32> = h.members.iter().collect();
                    let n_global = n_local.iter().map(|&i| members[i as usize]).collect();
                    return Ok(SectionVerdict { found: true, tier: Tier::Full, witness: Some((h.gens.clone(), n_global)), message: None });
                }
            }
            Ok(not_found(Tier::Full))
        }
    }
}

/// Rebuild the section named by a witness and test it again.
pub fn replay_section(q: &SmallGroup, p: u64, witness: &(Vec<u32>, Vec<u32>)) -> Result<bool> {
    let (hg, ng) = witness;
    let h = Subgroup { members: q.subgroup_closure(hg), gens: hg.clone() };
    let sub = q.induced(&h)?;
    let members: Vec<u32> = h.members.iter().collect();
    let local: Vec<u32> = ng
        .iter()
        .map(|g| members.iter().position(|m| m == g).map(|i| i as u32))
        .collect::<Option<_>>()
        .ok_or_else(|| GroupError::Invalid("normal generators outside the subgroup".into()))?;
    let n = sub.normal_closure(&local);
    iso_to_wreath(&sub.quotient(&n)?, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::small;

    fn sg(g: &Group) -> SmallGroup {
        SmallGroup::from_group(g, 100_000).unwrap()
    }

    #[test]
    fn model_orders() {
        assert_eq!(wreath_model(2).unwrap().small.order(), 8);
        assert_eq!(wreath_model(3).unwrap().small.order(), 81);
        assert!(build_wreath(7).is_err());
    }

    #[test]
    fn p5_model() {
        let m = wreath_model(5).unwrap();
        assert_eq!(m.small.order(), 15625);
        assert!(iso_to_wreath(&m.small, 5).unwrap());
    }

    #[test]
    fn iso_accepts_model_and_d8() {
        assert!(iso_to_wreath(&wreath_model(2).unwrap().small, 2).unwrap());
        assert!(iso_to_wreath(&wreath_model(3).unwrap().small, 3).unwrap());
        assert!(iso_to_wreath(&sg(&small::dihedral(4).unwrap()), 2).unwrap());
        assert!(!iso_to_wreath(&sg(&small::quaternion8().unwrap()), 2).unwrap());
        assert!(!iso_to_wreath(&sg(&small::cyclic(9).unwrap()), 3).unwrap());
        assert!(!iso_to_wreath(&sg(&small::cyclic(8).unwrap()), 2).unwrap());
    }

    #[test]
    fn sections() {
        let d8 = sg(&small::dihedral(4).unwrap());
        let v = wreath_section_detect(&d8, 2, Tier::Quotient).unwrap();
        assert!(v.found);
        assert!(replay_section(&d8, 2, v.witness.as_ref().unwrap()).unwrap());
        let q8 = sg(&small::quaternion8().unwrap());
        let v = wreath_section_detect(&q8, 2, Tier::Full).unwrap();
        assert_eq!((v.found, v.tier), (false, Tier::Full));
        let w3 = &wreath_model(3).unwrap().small;
        assert!(wreath_section_detect(w3, 3, Tier::Quotient).unwrap().found);
        // D16 has D8 as a quotient
        let d16 = sg(&small::dihedral(8).unwrap());
        assert!(wreath_section_detect(&d16, 2, Tier::Quotient).unwrap().found);
        assert!(wreath_section_detect(&sg(&small::dihedral(3).unwrap()), 2, Tier::Full).is_err());
    }
}
