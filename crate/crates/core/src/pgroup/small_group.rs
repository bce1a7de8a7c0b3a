//! Small groups with elements addressed by index, identity at 0.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_integer::Integer;

use crate::element::GroupElement;
use crate::error::{GroupError, Result};
use crate::group::{closure_from, Group};

/// Multiplication tables are built up to this order; larger groups multiply elements directly.
pub const TABLE_ORDER_CAP: usize = 2187;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    pub fn insert(&mut self, i: u32) -> bool {
        let (w, b) = (i as usize / 64, i % 64);
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn contains(&self, i: u32) -> bool {
        self.words[i as usize / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64u32).filter(move |b| w >> b & 1 == 1).map(move |b| wi as u32 * 64 + b)
        })
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
enum Backing {
    Table(Arc<Vec<u32>>),
    Elements { elements: Arc<Vec<GroupElement>>, index: Arc<HashMap<GroupElement, u32>> },
}

/// A group of explicit elements `0..n` with `0` the identity.
#[derive(Clone, Debug)]
pub struct SmallGroup {
    n: usize,
    backing: Backing,
    elements: Option<Arc<Vec<GroupElement>>>,
    inv: Vec<u32>,
    gens: Vec<u32>,
}

/// A subgroup given by its members and a generating list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub members: BitSet,
    pub gens: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }
}

impl SmallGroup {
    /// Enumerate `⟨gens⟩` by closure, failing beyond `cap` elements.
    pub fn from_generators(identity: GroupElement, gens: &[GroupElement], cap: usize) -> Result<SmallGroup> {
        let els = closure_from(identity, gens, cap)?;
        let index: HashMap<GroupElement, u32> = els.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        let n = els.len();
        let elements = Arc::new(els);
        let index = Arc::new(index);
        let backing = if n <= TABLE_ORDER_CAP {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = index[&elements[a].mul(&elements[b])];
                }
            }
            Backing::Table(Arc::new(t))
        } else {
            Backing::Elements { elements: Arc::clone(&elements), index: Arc::clone(&index) }
        };
        let inv = elements.iter().map(|e| index[&e.inverse()]).collect();
        Ok(SmallGroup { n, backing, elements: Some(elements), inv, gens: gen_idx })
    }

    pub fn from_group(g: &Group, cap: usize) -> Result<SmallGroup> {
        Self::from_generators(g.identity(), g.generators(), cap)
    }

    /// A group from a full multiplication table (row-major, identity 0).
    pub fn from_table(n: usize, table: Vec<u32>, gens: Vec<u32>) -> Result<SmallGroup> {
        if table.len() != n * n || n == 0 {
            return Err(GroupError::Invalid("multiplication table has wrong size".into()));
        }
        let inv = (0..n)
            .map(|a| (0..n as u32).find(|&b| table[a * n + b as usize] == 0).ok_or(GroupError::Invalid("element without inverse".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(SmallGroup { n, backing: Backing::Table(Arc::new(table)), elements: None, inv, gens })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn element(&self, i: u32) -> Option<&GroupElement> {
        self.elements.as_ref().map(|e| &e[i as usize])
    }

    pub fn index_of(&self, x: &GroupElement) -> Option<u32> {
        match &self.backing {
            Backing::Elements { index, .. } => index.get(x).copied(),
            Backing::Table(_) => self.elements.as_ref()?.iter().position(|e| e == x).map(|i| i as u32),
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.backing {
            Backing::Table(t) => t[a as usize * self.n + b as usize],
            Backing::Elements { elements, index } => index[&elements[a as usize].mul(&elements[b as usize])],
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `g⁻¹ x g`
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `x⁻¹ y⁻¹ x y`
    pub fn comm(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.n as u32).map(|a| self.element_order(a)).collect()
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        crate::group::is_power_of(&(self.n as u64).into(), p)
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders().into_iter().fold(1, |a, o| a.lcm(&o))
    }

    /// Number of elements of each order.
    pub fn order_statistics(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for o in self.element_orders() {
            *m.entry(o).or_insert(0) += 1;
        }
        m
    }

    /// Closure of `gens` inside this group.
    pub fn subgroup_closure(&self, gens: &[u32]) -> BitSet {
        let mut set = BitSet::new(self.n);
        set.insert(0);
        let mut queue = VecDeque::from([0u32]);
        let gens: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[u32]) -> BitSet {
        let mut conj_gens: Vec<u32> = Vec::new();
        let mut seen = HashSet::new();
        let mut queue: VecDeque<u32> = gens.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            if !seen.insert(x) {
                continue;
            }
            conj_gens.push(x);
            for &g in &self.gens {
                queue.push_back(self.conj(x, g));
            }
        }
        self.subgroup_closure(&conj_gens)
    }

    pub fn is_normal(&self, members: &BitSet) -> bool {
        members.iter().all(|x| self.gens.iter().all(|&g| members.contains(self.conj(x, g))))
    }

    pub fn center(&self) -> BitSet {
        let mut z = BitSet::new(self.n);
        for x in 0..self.n as u32 {
            if self.gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)) {
                z.insert(x);
            }
        }
        z
    }

    pub fn derived_subgroup(&self) -> BitSet {
        let mut comms = Vec::new();
        for (i, &a) in self.gens.iter().enumerate() {
            for &b in &self.gens[i + 1..] {
                comms.push(self.comm(a, b));
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_abelian(&self) -> bool {
        self.derived_subgroup().len() == 1
    }

    /// Sorted multiset of conjugacy class sizes.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut seen = BitSet::new(self.n);
        let mut sizes = Vec::new();
        for x in 0..self.n as u32 {
            if seen.contains(x) {
                continue;
            }
            seen.insert(x);
            let mut orbit = vec![x];
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head];
                head += 1;
                for &g in &self.gens {
                    let z = self.conj(y, g);
                    if seen.insert(z) {
                        orbit.push(z);
                    }
                }
            }
            sizes.push(orbit.len());
        }
        sizes.sort_unstable();
        sizes
    }

    /// One representative per conjugacy class (the smallest index).
    pub fn class_representatives(&self) -> Vec<u32> {
        let mut seen = BitSet::new(self.n);
        let mut reps = Vec::new();
        for x in 0..self.n as u32 {
            if !seen.insert(x) {
                continue;
            }
            reps.push(x);
            let mut stack = vec![x];
            while let Some(y) = stack.pop() {
                for &g in &self.gens {
                    let z = self.conj(y, g);
                    if seen.insert(z) {
                        stack.push(z);
                    }
                }
            }
        }
        reps
    }

    /// The subgroup as a group in its own right, with indices renumbered.
    pub fn induced(&self, sub: &Subgroup) -> Result<SmallGroup> {
        let members: Vec<u32> = sub.members.iter().collect();
        let pos: HashMap<u32, u32> = members.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
        let m = members.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                table[i * m + j] = pos[&self.mul(a, b)];
            }
        }
        let gens = sub.gens.iter().filter(|&&g| g != 0).map(|g| pos[g]).collect();
        let mut out = SmallGroup::from_table(m, table, gens)?;
        if let Some(els) = &self.elements {
            out.elements = Some(Arc::new(members.iter().map(|&i| els[i as usize].clone()).collect()));
        }
        Ok(out)
    }

    /// Coset group `S/N`; cosets are numbered by their smallest member, so `N` is 0.
    pub fn quotient(&self, normal: &BitSet) -> Result<SmallGroup> {
        if !normal.contains(0) || !self.is_normal(normal) || self.subgroup_closure(&normal.iter().collect::<Vec<_>>()) != *normal {
            return Err(GroupError::Invalid("quotient by a non-normal subset".into()));
        }
        let nmem: Vec<u32> = normal.iter().collect();
        let mut coset = vec![u32::MAX; self.n];
        let mut reps = Vec::new();
        for x in 0..self.n as u32 {
            if coset[x as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &k in &nmem {
                coset[self.mul(x, k) as usize] = id;
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * m + j] = coset[self.mul(a, b) as usize];
            }
        }
        let mut gens: Vec<u32> = self.gens.iter().map(|&g| coset[g as usize]).filter(|&c| c != 0).collect();
        gens.dedup();
        SmallGroup::from_table(m, table, gens)
    }
}

/// Every subgroup, by closing joins of cyclic subgroups.
///
/// Fails with an overflow when the group exceeds `order_cap` or the lattice
/// grows beyond `count_cap` subgroups.
pub fn subgroups(s: &SmallGroup, order_cap: usize, count_cap: usize) -> Result<Vec<Subgroup>> {
    if s.order() > order_cap {
        return Err(GroupError::overflow("group order for subgroup enumeration", order_cap as u64));
    }
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<BitSet> = HashSet::new();
    for x in 0..s.order() as u32 {
        let members = s.subgroup_closure(&[x]);
        if seen.insert(members.clone()) {
            cyclic.push(Subgroup { members, gens: vec![x] });
        }
    }
    let mut all: Vec<Subgroup> = cyclic.clone();
    let mut frontier: Vec<usize> = (0..all.len()).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &hi in &frontier {
            for c in &cyclic {
                let h = &all[hi];
                if c.members.is_subset(&h.members) {
                    continue;
                }
                let mut gens = h.gens.clone();
                gens.push(c.gens[0]);
                let members = s.subgroup_closure(&gens);
                if seen.insert(members.clone()) {
                    all.push(Subgroup { members, gens });
                    next.push(all.len() - 1);
                    if all.len() > count_cap {
                        return Err(GroupError::overflow("subgroup count", count_cap as u64));
                    }
                }
            }
        }
        frontier = next;
    }
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    Ok(all)
}

/// Every normal subgroup, as joins of normal closures of single elements.
pub fn normal_subgroups(s: &SmallGroup, count_cap: usize) -> Result<Vec<Subgroup>> {
    let mut basic: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<BitSet> = HashSet::new();
    for x in s.class_representatives() {
        let members = s.normal_closure(&[x]);
        if seen.insert(members.clone()) {
            basic.push(Subgroup { members, gens: vec![x] });
        }
    }
    let mut all = basic.clone();
    let mut frontier: Vec<usize> = (0..all.len()).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &hi in &frontier {
            for b in &basic {
                let h = &all[hi];
                if b.members.is_subset(&h.members) {
                    continue;
                }
                let mut gens = h.gens.clone();
                gens.push(b.gens[0]);
                let members = s.normal_closure(&gens);
                if seen.insert(members.clone()) {
                    all.push(Subgroup { members, gens });
                    next.push(all.len() - 1);
                    if all.len() > count_cap {
                        return Err(GroupError::overflow("normal subgroup count", count_cap as u64));
                    }
                }
            }
        }
        frontier = next;
    }
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::small;

    fn sg(g: &Group) -> SmallGroup {
        SmallGroup::from_group(g, 100_000).unwrap()
    }

    #[test]
    fn subgroup_counts() {
        let z4 = sg(&small::cyclic(4).unwrap());
        assert_eq!(subgroups(&z4, 1024, 1000).unwrap().len(), 3);
        let q8 = sg(&small::quaternion8().unwrap());
        assert_eq!(subgroups(&q8, 1024, 1000).unwrap().len(), 6);
        let d8 = sg(&small::dihedral(4).unwrap());
        assert_eq!(subgroups(&d8, 1024, 1000).unwrap().len(), 10);
        assert_eq!(normal_subgroups(&d8, 1000).unwrap().len(), 6);
        assert_eq!(normal_subgroups(&q8, 1000).unwrap().len(), 6);
    }

    #[test]
    fn quotients() {
        let d8 = sg(&small::dihedral(4).unwrap());
        let z = d8.center();
        assert_eq!(z.len(), 2);
        let k = d8.quotient(&z).unwrap();
        assert_eq!(k.order(), 4);
        assert!(k.is_abelian());
        assert_eq!(k.exponent(), 2);
        let all = d8.subgroup_closure(&[1, 2]);
        assert_eq!(d8.quotient(&all).unwrap().order(), 1);
        let mut triv = BitSet::new(8);
        triv.insert(0);
        let same = d8.quotient(&triv).unwrap();
        assert_eq!(same.order_statistics(), d8.order_statistics());
        // a non-normal reflection subgroup
        let refl = (0..8u32).find(|&x| d8.element_order(x) == 2 && !z.contains(x)).unwrap();
        assert!(d8.quotient(&d8.subgroup_closure(&[refl])).is_err());
    }

    #[test]
    fn invariants_of_d8_and_q8() {
        let d8 = sg(&small::dihedral(4).unwrap());
        let q8 = sg(&small::quaternion8().unwrap());
        assert_eq!(d8.order_statistics()[&2], 5);
        assert_eq!(q8.order_statistics()[&2], 1);
        assert_eq!(d8.class_sizes(), vec![1, 1, 2, 2, 2]);
        assert_eq!(d8.derived_subgroup().len(), 2);
    }

    #[test]
    fn element_backing_agrees_with_table() {
        let g = small::dihedral(5).unwrap();
        let t = sg(&g);
        let els = closure_from(g.identity(), g.generators(), 100).unwrap();
        let index: HashMap<GroupElement, u32> = els.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let e = SmallGroup {
            n: els.len(),
            backing: Backing::Elements { elements: Arc::new(els.clone()), index: Arc::new(index) },
            elements: Some(Arc::new(els)),
            inv: t.inv.clone(),
            gens: t.gens.clone(),
        };
        for a in 0..10 {
            for b in 0..10 {
                assert_eq!(t.mul(a, b), e.mul(a, b));
            }
        }
    }
}
