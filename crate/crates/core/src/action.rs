//! Permutation representations of matrix and semilinear groups on vector orbits.

use std::collections::HashMap;
use std::sync::Arc;

use crate::element::{Ambient, GroupElement};
use crate::error::{GroupError, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{rank_of_rows, SemilinearElement, SquareMatrix, Vector};
use crate::perm::Permutation;

/// Default bound on the number of points in an orbit action.
pub const DEFAULT_ORBIT_CAP: usize = 200_000;

/// Action of a matrix group on the union of the orbits of some seed vectors.
#[derive(Clone, Debug)]
pub struct PermAction {
    field: Arc<FieldSpec>,
    dim: usize,
    points: Vec<Vector>,
    index: HashMap<Vector, u32>,
    perms: Vec<Permutation>,
    faithful: bool,
}

fn apply(x: &GroupElement, v: &[FieldElement]) -> Vector {
    match x {
        GroupElement::Matrix(m) => m.apply(v),
        GroupElement::Semilinear(s) => s.apply(v),
        GroupElement::Perm(_) => unreachable!("permutations have no vector action"),
    }
}

/// Standard basis vectors, plus `z·e_1` when field automorphisms may be present.
pub fn default_seeds(ambient: &Ambient) -> Vec<Vector> {
    let (field, dim, semilinear) = match ambient {
        Ambient::Perm { .. } => return Vec::new(),
        Ambient::Matrix { field, dim } => (field, *dim, false),
        Ambient::Semilinear { field, dim } => (field, *dim, true),
    };
    let mut seeds: Vec<Vector> = (0..dim)
        .map(|i| {
            let mut v = vec![FieldElement::ZERO; dim];
            v[i] = field.one();
            v
        })
        .collect();
    if semilinear && field.degree() > 1 && dim > 0 {
        let mut v = vec![FieldElement::ZERO; dim];
        v[0] = field.generator_z();
        seeds.push(v);
    }
    seeds
}

/// Build the permutation action of `gens` on the union of the seed orbits.
///
/// The action is flagged faithful when the seeds span the space and, for
/// groups containing field automorphisms, the orbit holds some `v` along with
/// `z·v`; otherwise it is only possibly faithful.
pub fn matrix_action(ambient: &Ambient, gens: &[GroupElement], seeds: &[Vector], cap: usize) -> Result<PermAction> {
    let (field, dim) = match ambient {
        Ambient::Perm { .. } => {
            return Err(GroupError::Incompatible("matrix_action needs matrix generators".into()))
        }
        Ambient::Matrix { field, dim } | Ambient::Semilinear { field, dim } => (Arc::clone(field), *dim),
    };
    for g in gens {
        if !ambient.admits(g) {
            return Err(GroupError::Incompatible(format!("generator {g} outside {}", ambient.header_text())));
        }
    }
    let mut points: Vec<Vector> = Vec::new();
    let mut index: HashMap<Vector, u32> = HashMap::new();
    for s in seeds {
        if s.len() != dim {
            return Err(GroupError::Invalid("seed vector has wrong length".into()));
        }
        if !index.contains_key(s) {
            index.insert(s.clone(), points.len() as u32);
            points.push(s.clone());
        }
    }
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut head = 0;
    while head < points.len() {
        for (gi, g) in gens.iter().enumerate() {
            let w = apply(g, &points[head]);
            let id = match index.get(&w) {
                Some(&id) => id,
                None => {
                    if points.len() >= cap {
                        return Err(GroupError::overflow("orbit size", cap as u64));
                    }
                    let id = points.len() as u32;
                    index.insert(w.clone(), id);
                    points.push(w);
                    id
                }
            };
            images[gi].push(id);
        }
        head += 1;
    }
    let perms = images.into_iter().map(Permutation::from_images_unchecked).collect();

    let spans = rank_of_rows(&field, dim, points.clone()) == dim;
    let has_frob = gens.iter().any(|g| matches!(g, GroupElement::Semilinear(s) if s.frob() != 0));
    let frob_visible = !has_frob || {
        let z = field.generator_z();
        points.iter().any(|v| {
            v.iter().any(|x| !x.is_zero()) && index.contains_key(&v.iter().map(|&x| field.mul(x, z)).collect::<Vector>())
        })
    };
    Ok(PermAction { field, dim, points, index, perms, faithful: spans && frob_visible })
}

impl PermAction {
    pub fn degree(&self) -> usize {
        self.points.len()
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn point_index(&self, v: &[FieldElement]) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    /// The permutation induced by `x`, or `None` if `x` does not preserve the point set.
    pub fn perm_of(&self, x: &GroupElement) -> Option<Permutation> {
        let mut images = Vec::with_capacity(self.points.len());
        for p in &self.points {
            images.push(*self.index.get(&apply(x, p))?);
        }
        Permutation::from_images(images).ok()
    }

    /// Recover the matrix (or semilinear map) inducing `perm`, using the
    /// standard basis points and, if present, `z·e_1`.
    pub fn element_of(&self, perm: &Permutation, ambient: &Ambient) -> Result<GroupElement> {
        let f = &self.field;
        let n = self.dim;
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![FieldElement::ZERO; n];
            e[i] = f.one();
            let pt = self
                .point_index(&e)
                .ok_or_else(|| GroupError::Invalid("standard basis vector missing from action".into()))?;
            cols.push(self.points[perm.apply(pt) as usize].clone());
        }
        let a = SquareMatrix::from_columns(f, &cols)?;
        match ambient {
            Ambient::Matrix { .. } => GroupElement::matrix(a),
            Ambient::Semilinear { .. } => {
                if f.degree() == 1 {
                    return GroupElement::semilinear(SemilinearElement::new(a, 0)?);
                }
                let mut ze = vec![FieldElement::ZERO; n];
                ze[0] = f.generator_z();
                let pt = self
                    .point_index(&ze)
                    .ok_or_else(|| GroupError::Invalid("z·e_1 missing from action".into()))?;
                let image = &self.points[perm.apply(pt) as usize];
                // image = σ^e(z) · A e_1
                let col0 = &cols[0];
                let j = (0..n).find(|&j| !col0[j].is_zero()).ok_or(GroupError::Singular)?;
                let sz = f.div(image[j], col0[j])?;
                let e = (0..f.degree())
                    .find(|&e| f.frobenius(f.generator_z(), e) == sz)
                    .ok_or_else(|| GroupError::Invalid("permutation is not induced by a semilinear map".into()))?;
                GroupElement::semilinear(SemilinearElement::new(a, e)?)
            }
            Ambient::Perm { .. } => Err(GroupError::Incompatible("not a matrix ambient".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn identity_generators_give_seed_count() {
        let f = FieldSpec::shipped(3).unwrap();
        let amb = Ambient::Matrix { field: Arc::clone(&f), dim: 3 };
        let id = amb.identity();
        let act = matrix_action(&amb, &[id], &default_seeds(&amb), 1000).unwrap();
        assert_eq!(act.degree(), 3);
        assert!(act.is_faithful());
    }

    #[test]
    fn non_spanning_seeds_are_flagged() {
        let f = FieldSpec::shipped(3).unwrap();
        let amb = Ambient::Matrix { field: Arc::clone(&f), dim: 2 };
        let d = GroupElement::matrix(SquareMatrix::from_int_rows(&f, &[vec![2, 0], vec![0, 1]]).unwrap()).unwrap();
        let seed = vec![vec![f.one(), f.zero()]];
        let act = matrix_action(&amb, &[d], &seed, 100).unwrap();
        assert_eq!(act.degree(), 2);
        assert!(!act.is_faithful());
    }

    #[test]
    fn orbit_cap_overflows() {
        let f = FieldSpec::shipped(3).unwrap();
        let amb = Ambient::Matrix { field: Arc::clone(&f), dim: 2 };
        let t = GroupElement::matrix(SquareMatrix::from_int_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap()).unwrap();
        let s = GroupElement::matrix(SquareMatrix::from_int_rows(&f, &[vec![0, 1], vec![2, 0]]).unwrap()).unwrap();
        assert!(matrix_action(&amb, &[t, s], &default_seeds(&amb), 4).unwrap_err().is_overflow());
    }
}
