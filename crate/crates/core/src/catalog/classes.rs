//! Conjugacy classes with deterministic labels, and normal subsets built from them.
//!
//! Labels are the element order followed by letters (`1a`, `2a`, `2b`, ...).
//! Classes are ordered by element order, then class size, then the smallest
//! serialized representative, so `1a` is always the identity class.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::element::{Ambient, GroupElement, DEFAULT_ORDER_CAP};
use crate::error::{GroupError, Result};
use crate::group::{is_power_of, Group};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub label: String,
    pub representative: GroupElement,
    pub size: BigUint,
    pub element_order: u64,
    pub centralizer_order: BigUint,
    /// Sorted members, present when the group was enumerated.
    pub elements: Option<Arc<Vec<GroupElement>>>,
}

impl ConjClass {
    pub fn size_u64(&self) -> Option<u64> {
        self.size.to_u64()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Source {
    Enumerated,
    /// Classes of Sym(n) or Alt(n) read off cycle types.
    CycleTypes { alternating: bool },
}

#[derive(Clone, Debug)]
pub struct ClassList {
    pub group_name: String,
    pub group_order: BigUint,
    pub classes: Vec<ConjClass>,
    ambient: Ambient,
    lookup: Option<HashMap<GroupElement, usize>>,
    source: Source,
}

/// `a`, `b`, ..., `z`, `aa`, `ab`, ...
fn letters(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

fn assign_labels(classes: &mut [ConjClass]) {
    let mut count: HashMap<u64, usize> = HashMap::new();
    for c in classes.iter_mut() {
        let k = count.entry(c.element_order).or_insert(0);
        c.label = format!("{}{}", c.element_order, letters(*k));
        *k += 1;
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |a, i| a * BigUint::from(i))
}

/// Partitions of `n` with parts in descending order.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// The smallest permutation (by image list) with the given cycle type:
/// cycles in ascending length on consecutive points.
fn canonical_rep(n: usize, parts: &[usize]) -> Permutation {
    let mut asc = parts.to_vec();
    asc.sort_unstable();
    let mut cycles = Vec::new();
    let mut start = 0u32;
    for &l in &asc {
        if l > 1 {
            cycles.push((start..start + l as u32).collect::<Vec<_>>());
        }
        start += l as u32;
    }
    Permutation::from_cycles(n, &cycles).unwrap()
}

fn centralizer_in_sym(parts: &[usize]) -> BigUint {
    let mut mult: HashMap<usize, usize> = HashMap::new();
    for &p in parts {
        *mult.entry(p).or_insert(0) += 1;
    }
    mult.iter().fold(BigUint::from(1u32), |acc, (&len, &m)| acc * BigUint::from(len).pow(m as u32) * factorial(m))
}

/// A permutation `s` with `s⁻¹ x s = y`, for `x`, `y` of equal cycle type.
fn conjugator(x: &Permutation, y: &Permutation) -> Permutation {
    let sorted = |p: &Permutation| {
        let mut c = p.cycles();
        let fixed: Vec<Vec<u32>> = (0..p.degree() as u32).filter(|&i| p.apply(i) == i).map(|i| vec![i]).collect();
        c.retain(|c| c.len() > 1);
        c.extend(fixed);
        c.sort_by_key(|c| c.len());
        c
    };
    let (cx, cy) = (sorted(x), sorted(y));
    let mut images = vec![0u32; x.degree()];
    // s maps the cycles of y onto the cycles of x pointwise
    for (a, b) in cx.iter().zip(&cy) {
        for (&pa, &pb) in a.iter().zip(b) {
            images[pb as usize] = pa;
        }
    }
    Permutation::from_images(images).unwrap()
}

impl ClassList {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_enumerated(&self) -> bool {
        self.source == Source::Enumerated
    }

    pub fn by_label(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// Index of the class containing `x`.
    pub fn class_of(&self, x: &GroupElement) -> Result<usize> {
        let x = self.ambient.lift(x.clone())?;
        if let Some(map) = &self.lookup {
            return map.get(&x).copied().ok_or_else(|| GroupError::Invalid(format!("{x} is not in {}", self.group_name)));
        }
        let p = x.as_perm().ok_or_else(|| GroupError::Incompatible("expected a permutation".into()))?;
        let alternating = matches!(self.source, Source::CycleTypes { alternating: true });
        if alternating && !p.is_even() {
            return Err(GroupError::Invalid(format!("{x} is odd, so not in {}", self.group_name)));
        }
        let ct = p.cycle_type();
        let candidates: Vec<usize> = (0..self.classes.len())
            .filter(|&i| self.classes[i].representative.as_perm().unwrap().cycle_type() == ct)
            .collect();
        match candidates.as_slice() {
            [i] => Ok(*i),
            [i, j] => {
                let rep = self.classes[*i].representative.as_perm().unwrap();
                if conjugator(rep, p).is_even() {
                    Ok(*i)
                } else {
                    Ok(*j)
                }
            }
            _ => Err(GroupError::Invalid("cycle type not found".into())),
        }
    }

    /// Resolve `order:k,size:m`, `order:k`, or a label.
    pub fn select(&self, selector: &str) -> Result<usize> {
        if let Some(i) = self.by_label(selector) {
            return Ok(i);
        }
        let mut order: Option<u64> = None;
        let mut size: Option<BigUint> = None;
        for part in selector.split(',') {
            let (k, v) = part
                .split_once(':')
                .ok_or_else(|| GroupError::Invalid(format!("unknown class selector '{selector}'")))?;
            let bad = || GroupError::Invalid(format!("bad value in class selector '{selector}'"));
            match k.trim() {
                "order" => order = Some(v.trim().parse().map_err(|_| bad())?),
                "size" => size = Some(v.trim().parse().map_err(|_| bad())?),
                _ => return Err(GroupError::Invalid(format!("unknown class selector '{selector}'"))),
            }
        }
        let hits: Vec<usize> = (0..self.classes.len())
            .filter(|&i| {
                order.is_none_or(|o| self.classes[i].element_order == o)
                    && size.as_ref().is_none_or(|s| &self.classes[i].size == s)
            })
            .collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            [] => Err(GroupError::Invalid(format!("no class matches '{selector}'"))),
            many => Err(GroupError::Invalid(format!(
                "selector '{selector}' is ambiguous: {}",
                many.iter().map(|&i| self.classes[i].label.as_str()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// Members of class `i`; cycle-type classes are expanded up to `cap`.
    pub fn class_elements(&self, group: &Group, i: usize, cap: usize) -> Result<Arc<Vec<GroupElement>>> {
        if let Some(e) = &self.classes[i].elements {
            return Ok(Arc::clone(e));
        }
        let mut els = group.conjugacy_orbit(&self.classes[i].representative, cap)?;
        els.sort();
        Ok(Arc::new(els))
    }
}

/// Enumerate the conjugacy classes of `group`.
///
/// Groups within the enumeration cap are split into conjugation orbits.
/// Larger full symmetric or alternating groups use cycle types. Anything
/// else reports an overflow.
pub fn enumerate_classes(group: &Group) -> Result<ClassList> {
    let order = group.order()?;
    let cap = group.caps().enumeration;
    if order <= BigUint::from(cap) {
        return enumerate_by_orbits(group, order);
    }
    if let Ambient::Perm { degree } = group.ambient() {
        let n = *degree;
        if order == factorial(n) {
            return Ok(cycle_type_classes(group, n, false));
        }
        if n >= 2 && order * BigUint::from(2u32) == factorial(n) {
            return Ok(cycle_type_classes(group, n, true));
        }
    }
    Err(GroupError::overflow("group order for class enumeration", cap as u64))
}

fn enumerate_by_orbits(group: &Group, order: BigUint) -> Result<ClassList> {
    let store = group.elements()?;
    let n = store.len();
    let mut class_id = vec![usize::MAX; n];
    let mut raw: Vec<Vec<GroupElement>> = Vec::new();
    // elements are sorted, so the first unassigned element is its class minimum
    for i in 0..n {
        if class_id[i] != usize::MAX {
            continue;
        }
        let mut orbit = group.conjugacy_orbit(&store.elements[i], n)?;
        orbit.sort();
        for y in &orbit {
            class_id[store.position(y).expect("conjugate outside the group")] = raw.len();
        }
        raw.push(orbit);
    }
    let mut classes: Vec<ConjClass> = raw
        .into_iter()
        .map(|els| {
            let rep = els[0].clone();
            let size = BigUint::from(els.len());
            Ok(ConjClass {
                label: String::new(),
                element_order: rep.order(DEFAULT_ORDER_CAP)?,
                centralizer_order: &order / &size,
                representative: rep,
                size,
                elements: Some(Arc::new(els)),
            })
        })
        .collect::<Result<_>>()?;
    classes.sort_by(|a, b| {
        (a.element_order, &a.size, &a.representative).cmp(&(b.element_order, &b.size, &b.representative))
    });
    assign_labels(&mut classes);
    let mut lookup = HashMap::with_capacity(n);
    for (ci, c) in classes.iter().enumerate() {
        for e in c.elements.as_ref().unwrap().iter() {
            lookup.insert(e.clone(), ci);
        }
    }
    Ok(ClassList {
        group_name: group.name().to_string(),
        group_order: order,
        classes,
        ambient: group.ambient().clone(),
        lookup: Some(lookup),
        source: Source::Enumerated,
    })
}

fn cycle_type_classes(group: &Group, n: usize, alternating: bool) -> ClassList {
    let group_order = if alternating { factorial(n) / BigUint::from(2u32) } else { factorial(n) };
    let mut classes = Vec::new();
    for parts in partitions(n) {
        let rep = canonical_rep(n, &parts);
        if alternating && !rep.is_even() {
            continue;
        }
        let cent = centralizer_in_sym(&parts);
        let sym_size = factorial(n) / &cent;
        let distinct_odd = {
            let mut seen = HashSet::new();
            parts.iter().all(|&p| p % 2 == 1 && seen.insert(p))
        };
        let order = rep.order();
        if alternating && distinct_odd && n > 1 {
            let t = Permutation::from_cycles(n, &[vec![n as u32 - 2, n as u32 - 1]]).unwrap();
            let other = t.compose(&rep).compose(&t);
            for r in [rep.clone(), other] {
                classes.push(ConjClass {
                    label: String::new(),
                    representative: GroupElement::Perm(r),
                    size: &sym_size / BigUint::from(2u32),
                    element_order: order,
                    centralizer_order: cent.clone(),
                    elements: None,
                });
            }
        } else {
            classes.push(ConjClass {
                label: String::new(),
                representative: GroupElement::Perm(rep),
                centralizer_order: if alternating { &cent / BigUint::from(2u32) } else { cent },
                size: sym_size,
                element_order: order,
                elements: None,
            });
        }
    }
    classes.sort_by(|a, b| {
        (a.element_order, &a.size, &a.representative).cmp(&(b.element_order, &b.size, &b.representative))
    });
    assign_labels(&mut classes);
    ClassList {
        group_name: group.name().to_string(),
        group_order,
        classes,
        ambient: group.ambient().clone(),
        lookup: None,
        source: Source::CycleTypes { alternating },
    }
}

pub fn is_p_element(x: &GroupElement, p: u64) -> Result<bool> {
    Ok(is_power_of(&BigUint::from(x.order(DEFAULT_ORDER_CAP)?), p))
}

/// A union of conjugacy classes together with its members.
#[derive(Clone, Debug)]
pub struct NormalSet {
    pub class_ids: Vec<usize>,
    pub elements: Vec<GroupElement>,
}

impl NormalSet {
    pub fn from_classes(list: &ClassList, group: &Group, ids: &[usize], cap: usize) -> Result<NormalSet> {
        let mut class_ids = ids.to_vec();
        class_ids.sort_unstable();
        class_ids.dedup();
        let mut elements = Vec::new();
        for &i in &class_ids {
            if i >= list.len() {
                return Err(GroupError::Invalid(format!("class index {i} out of range")));
            }
            elements.extend(list.class_elements(group, i, cap)?.iter().cloned());
            if elements.len() > cap {
                return Err(GroupError::overflow("normal set size", cap as u64));
            }
        }
        elements.sort();
        Ok(NormalSet { class_ids, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

pub fn inverse_set(list: &ClassList, group: &Group, set: &NormalSet, cap: usize) -> Result<NormalSet> {
    let ids = set
        .class_ids
        .iter()
        .map(|&i| list.class_of(&list.classes[i].representative.inverse()))
        .collect::<Result<Vec<_>>>()?;
    NormalSet::from_classes(list, group, &ids, cap)
}

fn check_pairs(a: usize, b: usize, cap: u64) -> Result<()> {
    if (a as u128) * (b as u128) > cap as u128 {
        return Err(GroupError::overflow("pair count", cap));
    }
    Ok(())
}

/// Multiset `{xy : x ∈ a, y ∈ b}`.
pub fn product_set(a: &NormalSet, b: &NormalSet, pair_cap: u64) -> Result<HashMap<GroupElement, u64>> {
    check_pairs(a.len(), b.len(), pair_cap)?;
    let mut out: HashMap<GroupElement, u64> = HashMap::new();
    for x in &a.elements {
        for y in &b.elements {
            *out.entry(x.mul(y)).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// `{[x, y] : x ∈ a, y ∈ b}`.
pub fn commutator_pairs_set(a: &NormalSet, b: &NormalSet, pair_cap: u64) -> Result<HashSet<GroupElement>> {
    check_pairs(a.len(), b.len(), pair_cap)?;
    let mut out = HashSet::new();
    for x in &a.elements {
        let xi = x.inverse();
        for y in &b.elements {
            out.insert(xi.mul(&y.inverse()).mul(x).mul(y));
        }
    }
    Ok(out)
}

pub fn largest_element_order(list: &ClassList, set: &NormalSet) -> u64 {
    set.class_ids.iter().map(|&i| list.classes[i].element_order).max().unwrap_or(1)
}
