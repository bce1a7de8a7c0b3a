//! Groups given by generators, with a lazily built stabilizer chain.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::action::{default_seeds, matrix_action, PermAction, DEFAULT_ORBIT_CAP};
use crate::chain::StabChain;
use crate::element::{Ambient, GroupElement};
use crate::error::{GroupError, Result};
use crate::perm::Permutation;

/// Default cap for full element stores and closure enumeration.
pub const DEFAULT_ENUM_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub orbit: usize,
    pub enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { orbit: DEFAULT_ORBIT_CAP, enumeration: DEFAULT_ENUM_CAP }
    }
}

/// A faithful permutation image together with its stabilizer chain.
#[derive(Debug)]
pub struct PermImage {
    pub action: Option<PermAction>,
    pub generators: Vec<Permutation>,
    pub chain: StabChain,
}

/// All elements of a group with an index for lookups.
#[derive(Debug)]
pub struct ElementStore {
    pub elements: Vec<GroupElement>,
    pub index: HashMap<GroupElement, u32>,
}

impl ElementStore {
    pub fn from_elements(elements: Vec<GroupElement>) -> ElementStore {
        let index = elements.iter().enumerate().map(|(i, g)| (g.clone(), i as u32)).collect();
        ElementStore { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }
}

pub struct Group {
    name: String,
    ambient: Ambient,
    gens: Vec<GroupElement>,
    caps: Caps,
    image: OnceLock<Result<Arc<PermImage>>>,
    store: OnceLock<Result<Arc<ElementStore>>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("ambient", &self.ambient)
            .field("generators", &self.gens.len())
            .finish()
    }
}

impl Clone for Group {
    fn clone(&self) -> Self {
        let g = Group {
            name: self.name.clone(),
            ambient: self.ambient.clone(),
            gens: self.gens.clone(),
            caps: self.caps,
            image: OnceLock::new(),
            store: OnceLock::new(),
        };
        if let Some(img) = self.image.get() {
            let _ = g.image.set(img.clone());
        }
        if let Some(s) = self.store.get() {
            let _ = g.store.set(s.clone());
        }
        g
    }
}

impl Group {
    pub fn new(name: impl Into<String>, ambient: Ambient, gens: Vec<GroupElement>) -> Result<Group> {
        let gens = gens.into_iter().map(|g| ambient.lift(g)).collect::<Result<Vec<_>>>()?;
        Ok(Group {
            name: name.into(),
            ambient,
            gens,
            caps: Caps::default(),
            image: OnceLock::new(),
            store: OnceLock::new(),
        })
    }

    /// Group generated by a nonempty list of compatible elements.
    pub fn generated_by(gens: &[GroupElement]) -> Result<Group> {
        let first = gens
            .first()
            .ok_or_else(|| GroupError::Invalid("cannot infer the ambient of an empty generator list".into()))?;
        let ambient = match gens.iter().find(|g| matches!(g, GroupElement::Semilinear(_))) {
            Some(s) => s.ambient(),
            None => first.ambient(),
        };
        let name = format!("<{} generators>", gens.len());
        Group::new(name, ambient, gens.to_vec())
    }

    pub fn with_caps(mut self, caps: Caps) -> Group {
        self.caps = caps;
        self.image = OnceLock::new();
        self.store = OnceLock::new();
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Group {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn identity(&self) -> GroupElement {
        self.ambient.identity()
    }

    /// Stabilizer chain on the natural permutation domain, or on vector orbits for matrix groups.
    pub fn perm_image(&self) -> Result<Arc<PermImage>> {
        self.image
            .get_or_init(|| {
                let (action, generators, degree) = match &self.ambient {
                    Ambient::Perm { degree } => (
                        None,
                        self.gens.iter().map(|g| g.as_perm().unwrap().clone()).collect::<Vec<_>>(),
                        *degree,
                    ),
                    _ => {
                        let act = matrix_action(&self.ambient, &self.gens, &default_seeds(&self.ambient), self.caps.orbit)?;
                        let perms = act.permutations().to_vec();
                        let degree = act.degree();
                        (Some(act), perms, degree)
                    }
                };
                let chain = StabChain::new(degree, &generators);
                Ok(Arc::new(PermImage { action, generators, chain }))
            })
            .clone()
    }

    pub fn order(&self) -> Result<BigUint> {
        Ok(self.perm_image()?.chain.order())
    }

    pub fn order_u64(&self) -> Result<u64> {
        self.order()?.to_u64().ok_or_else(|| GroupError::overflow("group order", u64::MAX))
    }

    pub fn contains(&self, x: &GroupElement) -> Result<bool> {
        if !self.ambient.admits(x) {
            return Ok(false);
        }
        let x = self.ambient.lift(x.clone())?;
        let img = self.perm_image()?;
        match &img.action {
            None => Ok(img.chain.contains(x.as_perm().unwrap())),
            Some(act) => match act.perm_of(&x) {
                Some(p) => Ok(img.chain.contains(&p)),
                None => Ok(false),
            },
        }
    }

    fn from_perm(&self, img: &PermImage, p: Permutation) -> Result<GroupElement> {
        match &img.action {
            None => Ok(GroupElement::Perm(p)),
            Some(act) => act.element_of(&p, &self.ambient),
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<GroupElement> {
        let img = self.perm_image()?;
        let p = img.chain.random_element(rng);
        self.from_perm(&img, p)
    }

    /// The full element list, available when the order is within the enumeration cap.
    pub fn elements(&self) -> Result<Arc<ElementStore>> {
        self.store
            .get_or_init(|| {
                let img = self.perm_image()?;
                let order = img.chain.order();
                if order > BigUint::from(self.caps.enumeration) {
                    return Err(GroupError::overflow("group order for enumeration", self.caps.enumeration as u64));
                }
                let mut els = Vec::with_capacity(order.to_usize().unwrap());
                for p in img.chain.elements() {
                    els.push(self.from_perm(&img, p)?);
                }
                els.sort();
                Ok(Arc::new(ElementStore::from_elements(els)))
            })
            .clone()
    }

    pub fn is_enumerable(&self) -> bool {
        self.order().map(|o| o <= BigUint::from(self.caps.enumeration)).unwrap_or(false)
    }

    pub fn is_p_group(&self, p: u64) -> Result<bool> {
        Ok(is_power_of(&self.order()?, p))
    }

    /// Orbit of `x` under conjugation by the generators (its conjugacy class).
    pub fn conjugacy_orbit(&self, x: &GroupElement, cap: usize) -> Result<Vec<GroupElement>> {
        let x = self.ambient.lift(x.clone())?;
        let invs: Vec<GroupElement> = self.gens.iter().map(|g| g.inverse()).collect();
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut out = vec![x.clone()];
        seen.insert(x);
        let mut head = 0;
        while head < out.len() {
            let y = out[head].clone();
            head += 1;
            for (g, gi) in self.gens.iter().zip(&invs) {
                let z = gi.mul(&y).mul(g);
                if seen.insert(z.clone()) {
                    if out.len() >= cap {
                        return Err(GroupError::overflow("conjugacy class size", cap as u64));
                    }
                    out.push(z);
                }
            }
        }
        Ok(out)
    }
}

pub fn is_power_of(n: &BigUint, p: u64) -> bool {
    let mut n = n.clone();
    let p = BigUint::from(p);
    let zero = BigUint::from(0u32);
    while n > BigUint::one() {
        if &n % &p != zero {
            return false;
        }
        n /= &p;
    }
    n.is_one()
}

/// Breadth-first product closure of `gens`, the identity first.
pub fn closure_enumerate(gens: &[GroupElement], cap: usize) -> Result<Vec<GroupElement>> {
    let Some(first) = gens.first() else {
        return Err(GroupError::Invalid("closure of an empty generator list needs an ambient".into()));
    };
    for g in gens {
        if !first.compatible(g) {
            return Err(GroupError::Incompatible("closure generators differ in kind".into()));
        }
    }
    closure_from(first.identity_like(), gens, cap)
}

pub(crate) fn closure_from(identity: GroupElement, gens: &[GroupElement], cap: usize) -> Result<Vec<GroupElement>> {
    let mut seen: HashSet<GroupElement> = HashSet::new();
    seen.insert(identity.clone());
    let mut out = vec![identity];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let h = out[i].mul(g);
            if seen.insert(h.clone()) {
                if out.len() >= cap {
                    return Err(GroupError::overflow("closure size", cap as u64));
                }
                out.push(h);
                queue.push_back(out.len() - 1);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::matrix::SquareMatrix;

    fn perm(n: usize, cycles: &[&[u32]]) -> GroupElement {
        let c: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        GroupElement::Perm(Permutation::from_cycles(n, &c).unwrap())
    }

    #[test]
    fn closure_small_cases() {
        let t = perm(4, &[&[0, 1]]);
        assert_eq!(closure_enumerate(&[t], 10).unwrap().len(), 2);
        let r = perm(4, &[&[0, 1, 2, 3]]);
        let s = perm(4, &[&[0, 2]]);
        assert_eq!(closure_enumerate(&[r.clone(), s.clone()], 100).unwrap().len(), 8);
        assert!(closure_enumerate(&[r, s], 5).unwrap_err().is_overflow());
    }

    #[test]
    fn chain_order_matches_closure() {
        let g = Group::generated_by(&[perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1]])]).unwrap();
        assert_eq!(g.order().unwrap(), BigUint::from(120u32));
        assert_eq!(closure_enumerate(g.generators(), 1000).unwrap().len(), 120);
        assert_eq!(g.elements().unwrap().len(), 120);
    }

    #[test]
    fn sl2_3_on_nonzero_vectors() {
        let f = FieldSpec::shipped(3).unwrap();
        let a = GroupElement::matrix(SquareMatrix::from_int_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap()).unwrap();
        let b = GroupElement::matrix(SquareMatrix::from_int_rows(&f, &[vec![1, 0], vec![1, 1]]).unwrap()).unwrap();
        let g = Group::generated_by(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(g.order().unwrap(), BigUint::from(24u32));
        assert_eq!(g.perm_image().unwrap().chain.degree(), 8);
        // independent oracle: closure directly on matrices
        assert_eq!(closure_enumerate(&[a, b], 100).unwrap().len(), 24);
        let els = g.elements().unwrap();
        assert!(els.elements.iter().all(|x| x.as_matrix().unwrap().determinant() == f.one()));
    }

    #[test]
    fn trivial_group_has_order_one() {
        let g = Group::new("1", Ambient::Perm { degree: 0 }, vec![]).unwrap();
        assert_eq!(g.order().unwrap(), BigUint::from(1u32));
        let h = Group::new("1", Ambient::Perm { degree: 3 }, vec![perm(3, &[])]).unwrap();
        assert_eq!(h.order().unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn random_elements_are_members() {
        use rand::SeedableRng;
        let f = FieldSpec::shipped(5).unwrap();
        let a = GroupElement::matrix(SquareMatrix::from_int_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap()).unwrap();
        let b = GroupElement::matrix(SquareMatrix::from_int_rows(&f, &[vec![2, 0], vec![0, 1]]).unwrap()).unwrap();
        let g = Group::generated_by(&[a, b]).unwrap();
        assert_eq!(g.order().unwrap(), BigUint::from(20u32));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = g.random_element(&mut rng).unwrap();
            assert!(g.contains(&x).unwrap());
        }
    }
}
