//! Checks on a normal set `C`: closure under commutators and the set `CC⁻¹`.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;

use super::plan::ScanPlan;
use super::verdict::{Status, Verdict, Witness};
use crate::catalog::classes::{is_p_element, ClassList, NormalSet};
use crate::element::GroupElement;
use crate::error::Result;
use crate::group::Group;

/// Pair scans above this size fall back to sampling.
pub const DEFAULT_PAIR_CAP: u64 = 25_000_000;

fn labels(list: &ClassList, set: &NormalSet) -> String {
    set.class_ids.iter().map(|&i| list.classes[i].label.as_str()).collect::<Vec<_>>().join(",")
}

/// Pairs to test: all of `C × C`, or a seeded sample when that is too many.
fn pair_indices(n: usize, pair_cap: u64, plan: &ScanPlan) -> (Vec<(usize, usize)>, bool) {
    if (n as u64).saturating_mul(n as u64) <= pair_cap {
        ((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(), false)
    } else {
        let mut rng = plan.rng();
        ((0..plan.samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect(), true)
    }
}

/// Whether `[c, d] ∈ C ∪ {1}` for all `c, d ∈ C`, with sub-reports on squares and inverses.
pub fn commutator_closed_check(group: &Group, list: &ClassList, set: &NormalSet, p: u64, pair_cap: u64, plan: &ScanPlan) -> Result<Verdict> {
    let scenario = format!("comm-closed {} C={}", group.name(), labels(list, set));
    let els = &set.elements;
    let in_set = |x: &GroupElement| x.is_identity() || set.contains(x);
    let (pairs, sampled) = pair_indices(els.len(), pair_cap, plan);
    let results: Vec<(GroupElement, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let k = els[i].commutator(&els[j]).expect("same ambient");
            let ok = in_set(&k);
            (k, ok)
        })
        .collect();
    let bad = results.iter().zip(&pairs).find(|((_, ok), _)| !ok).map(|(_, &(i, j))| (i, j));
    let status = match (bad, sampled) {
        (Some(_), _) => Status::Fails,
        (None, true) => Status::Indeterminate,
        (None, false) => Status::Holds,
    };
    let mut v = Verdict::new(scenario, status);
    v.sampled = sampled;
    v.count("pairs_scanned", pairs.len() as u64);
    if !sampled {
        let image: HashSet<&GroupElement> = results.iter().map(|(k, _)| k).collect();
        let identity = group.identity();
        let target: HashSet<&GroupElement> = els.iter().chain(std::iter::once(&identity)).collect();
        v.fact("image_size", image.len());
        v.fact("image_equals_set_and_identity", image == target);
    } else {
        v.note("pair count exceeds the cap: sampled, so a pass is indeterminate");
    }
    let squares = els.iter().all(|c| in_set(&c.mul(c)));
    let inverses = els.iter().all(|c| set.contains(&c.inverse()));
    let p_elements = els.iter().map(|c| is_p_element(c, p)).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b);
    v.fact("closed_under_squares", squares);
    v.fact("closed_under_inverses", inverses);
    v.fact("all_p_elements", p_elements);
    if !squares {
        v.note("not closed under squares");
    }
    if !inverses {
        v.note("not closed under inverses");
    }
    if let Some((i, j)) = bad {
        v.witnesses.push(
            Witness::new("commutator_outside_set")
                .ambient(group.ambient().header_text())
                .element("c", els[i].to_text())
                .element("d", els[j].to_text())
                .value("group", group.name())
                .value("set", labels(list, set)),
        );
    }
    Ok(v)
}

/// Whether every `c d⁻¹` with `c, d ∈ C` is a `p`-element.
pub fn cc_inverse_check(group: &Group, list: &ClassList, set: &NormalSet, p: u64, pair_cap: u64, plan: &ScanPlan) -> Result<Verdict> {
    let scenario = format!("cc-inverse {} C={} p={p}", group.name(), labels(list, set));
    let els = &set.elements;
    let (pairs, sampled) = pair_indices(els.len(), pair_cap, plan);
    let orders: Vec<u64> = pairs
        .par_iter()
        .map(|&(i, j)| els[i].mul(&els[j].inverse()).order(crate::element::DEFAULT_ORDER_CAP))
        .collect::<Result<_>>()?;
    let bad = orders
        .iter()
        .zip(&pairs)
        .find(|(&o, _)| !crate::group::is_power_of(&o.into(), p))
        .map(|(&o, &(i, j))| (i, j, o));
    let status = match (bad, sampled) {
        (Some(_), _) => Status::Fails,
        (None, true) => Status::Indeterminate,
        (None, false) => Status::Holds,
    };
    let mut v = Verdict::new(scenario, status);
    v.sampled = sampled;
    v.count("pairs_scanned", pairs.len() as u64);
    if sampled {
        v.note("pair count exceeds the cap: sampled, so a pass is indeterminate");
    }
    if let Some((i, j, o)) = bad {
        v.witnesses.push(
            Witness::new("product_not_p_element")
                .ambient(group.ambient().header_text())
                .element("c", els[i].to_text())
                .element("d", els[j].to_text())
                .value("group", group.name())
                .value("p", p)
                .value("order", o),
        );
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::blueprint::GroupBlueprint;
    use crate::catalog::classes::enumerate_classes;

    fn a5() -> (Group, ClassList) {
        let g = GroupBlueprint::alt(5).construct().unwrap();
        let l = enumerate_classes(&g).unwrap();
        (g, l)
    }

    #[test]
    fn a5_five_class() {
        let (g, l) = a5();
        let i = l.by_label("5a").unwrap();
        let set = NormalSet::from_classes(&l, &g, &[i], 1000).unwrap();
        let v = commutator_closed_check(&g, &l, &set, 5, DEFAULT_PAIR_CAP, &ScanPlan::exhaustive()).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.counters["pairs_scanned"], 144);
        assert_eq!(v.facts["image_equals_set_and_identity"], true);
        assert_eq!(v.facts["closed_under_squares"], false);
        assert_eq!(v.facts["closed_under_inverses"], true);
        let w = cc_inverse_check(&g, &l, &set, 5, DEFAULT_PAIR_CAP, &ScanPlan::exhaustive()).unwrap();
        assert_eq!(w.status, Status::Fails);
    }

    #[test]
    fn identity_set_holds() {
        let (g, l) = a5();
        let set = NormalSet::from_classes(&l, &g, &[0], 10).unwrap();
        assert!(commutator_closed_check(&g, &l, &set, 5, DEFAULT_PAIR_CAP, &ScanPlan::exhaustive()).unwrap().holds());
        assert!(cc_inverse_check(&g, &l, &set, 5, DEFAULT_PAIR_CAP, &ScanPlan::exhaustive()).unwrap().holds());
    }

    #[test]
    fn sampling_makes_a_pass_indeterminate() {
        let (g, l) = a5();
        let set = NormalSet::from_classes(&l, &g, &[0], 10).unwrap();
        let v = cc_inverse_check(&g, &l, &set, 5, 0, &ScanPlan::sampled(5, 1)).unwrap();
        assert_eq!(v.status, Status::Indeterminate);
    }
}
