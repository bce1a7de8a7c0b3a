//! Pair scans: fix `c` and let `d′` run over the class of `d`.
//!
//! Any pair `(c^h, d^g)` is simultaneously conjugate to `(c, d^{g h⁻¹})`, so
//! ranging over the class of `d` with `c` fixed covers all of `C × D`.

use num_bigint::BigUint;
use rayon::prelude::*;

use super::plan::ScanPlan;
use super::verdict::{Status, Verdict, Witness};
use crate::catalog::classes::is_p_element;
use crate::element::GroupElement;
use crate::error::{GroupError, Result};
use crate::group::{is_power_of, Group};
use crate::pgroup::{wreath_section_detect, SmallGroup, Tier};

/// Closures larger than this are not converted for section search.
pub const SECTION_CLOSURE_CAP: usize = 2187;
const CHUNK: usize = 256;

pub(crate) enum Outcome {
    Fine,
    Bad(Box<Witness>),
    Unknown(String),
}

/// Conjugates of `d` prescribed by the plan, in a deterministic order.
pub fn conjugates(group: &Group, d: &GroupElement, plan: &ScanPlan) -> Result<Vec<GroupElement>> {
    if plan.is_sampled() {
        let mut rng = plan.rng();
        (0..plan.samples)
            .map(|_| {
                let g = group.random_element(&mut rng)?;
                d.conjugate(&g)
            })
            .collect()
    } else {
        let mut orbit = group.conjugacy_orbit(d, plan.class_cap)?;
        orbit.sort();
        Ok(orbit)
    }
}

/// Run `check` over `items` in parallel chunks, stopping after the first chunk
/// with a failure. Results keep input order, so the first witness is stable.
pub(crate) fn scan<T: Sync>(items: &[T], check: impl Fn(&T) -> Outcome + Sync) -> (usize, Vec<Box<Witness>>, Vec<String>) {
    let mut scanned = 0;
    let mut bad = Vec::new();
    let mut unknown = Vec::new();
    for chunk in items.chunks(CHUNK) {
        let results: Vec<Outcome> = chunk.par_iter().map(&check).collect();
        scanned += chunk.len();
        for r in results {
            match r {
                Outcome::Fine => {}
                Outcome::Bad(w) => bad.push(w),
                Outcome::Unknown(m) => unknown.push(m),
            }
        }
        if !bad.is_empty() {
            break;
        }
    }
    (scanned, bad, unknown)
}

pub(crate) fn closure_order(gens: &[GroupElement]) -> Result<BigUint> {
    Group::generated_by(gens)?.order()
}

fn validate_pair(scenario: &str, c: &GroupElement, d: &GroupElement, p: u64) -> Result<Option<Verdict>> {
    if !is_p_element(c, p)? || !is_p_element(d, p)? {
        return Err(GroupError::Invalid(format!("c and d must be {p}-elements")));
    }
    if c.is_identity() {
        return Ok(Some(Verdict::skipped(scenario, "trivial c")));
    }
    if d.is_identity() {
        return Ok(Some(Verdict::skipped(scenario, "trivial d")));
    }
    Ok(None)
}

fn not_p_group_witness(group: &Group, c: &GroupElement, d: &GroupElement, p: u64, order: &BigUint) -> Witness {
    Witness::new("closure_not_p_group")
        .ambient(group.ambient().header_text())
        .element("c", c.to_text())
        .element("d", d.to_text())
        .value("group", group.name())
        .value("p", p)
        .value("order", order)
}

fn finish(scenario: String, plan: &ScanPlan, scanned: usize, bad: Vec<Box<Witness>>, unknown: Vec<String>) -> Verdict {
    let status = if !bad.is_empty() {
        Status::Fails
    } else if !unknown.is_empty() {
        Status::Indeterminate
    } else {
        Status::Holds
    };
    let mut v = Verdict::new(scenario, status);
    v.sampled = plan.is_sampled();
    v.count("pairs_scanned", scanned as u64);
    v.count("closures_computed", scanned as u64);
    if !unknown.is_empty() {
        v.count("closures_overflowed", unknown.len() as u64);
        v.note(unknown[0].clone());
    }
    v.witnesses.extend(bad.into_iter().map(|w| *w));
    v
}

/// Is `⟨c, d′⟩` a `p`-group for every `d′` in the class of `d`?
pub fn bf_pair_direct(group: &Group, c: &GroupElement, d: &GroupElement, p: u64, plan: &ScanPlan) -> Result<Verdict> {
    let scenario = format!("bf-pair {} p={p}", group.name());
    if let Some(v) = validate_pair(&scenario, c, d, p)? {
        return Ok(v);
    }
    let ds = conjugates(group, d, plan)?;
    let (scanned, bad, unknown) = scan(&ds, |d2| match closure_order(&[c.clone(), d2.clone()]) {
        Ok(n) if is_power_of(&n, p) => Outcome::Fine,
        Ok(n) => Outcome::Bad(Box::new(not_p_group_witness(group, c, d2, p, &n))),
        Err(e) => Outcome::Unknown(e.to_string()),
    });
    let mut v = finish(scenario, plan, scanned, bad, unknown);
    v.fact("class_size_scanned", ds.len());
    Ok(v)
}

/// Every `⟨c, d′⟩` is a `p`-group without a section `Z_p ≀ Z_p`.
pub fn wreath_free_pair_check(group: &Group, c: &GroupElement, d: &GroupElement, p: u64, plan: &ScanPlan) -> Result<Verdict> {
    let scenario = format!("wreath-free {} p={p}", group.name());
    if let Some(v) = validate_pair(&scenario, c, d, p)? {
        return Ok(v);
    }
    let ds = conjugates(group, d, plan)?;
    let (scanned, bad, unknown) = scan(&ds, |d2| {
        let pair = [c.clone(), d2.clone()];
        let n = match closure_order(&pair) {
            Ok(n) => n,
            Err(e) => return Outcome::Unknown(e.to_string()),
        };
        if !is_power_of(&n, p) {
            return Outcome::Bad(Box::new(not_p_group_witness(group, c, d2, p, &n)));
        }
        let small = match SmallGroup::from_generators(group.identity(), &pair, SECTION_CLOSURE_CAP) {
            Ok(s) => s,
            Err(e) => return Outcome::Unknown(e.to_string()),
        };
        match wreath_section_detect(&small, p, Tier::Full) {
            Ok(s) if s.found => Outcome::Bad(Box::new(
                Witness::new("wreath_section_found")
                    .ambient(group.ambient().header_text())
                    .element("c", c.to_text())
                    .element("d", d2.to_text())
                    .value("group", group.name())
                    .value("p", p)
                    .value("order", &n),
            )),
            Ok(s) if s.tier == Tier::Indeterminate => Outcome::Unknown(s.message.unwrap_or_default()),
            Ok(_) => Outcome::Fine,
            Err(e) => Outcome::Unknown(e.to_string()),
        }
    });
    let mut v = finish(scenario, plan, scanned, bad, unknown);
    if let Some(w) = v.witnesses.first() {
        let which = if w.claim == "closure_not_p_group" { "p-group" } else { "no wreath section" };
        v.note(format!("first failing hypothesis: {which}"));
    }
    Ok(v)
}
