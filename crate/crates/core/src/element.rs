//! The element type shared by every group in the crate.
//!
//! All three element kinds act on the left. `compose(a, b)` is the element
//! acting as `v -> a(b(v))`: the right factor acts first. Conjugation is
//! `x^g = g⁻¹ x g` and the commutator is `[x, y] = x⁻¹ y⁻¹ x y`.
//! Class-level statements do not depend on this choice.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{GroupError, Result};
use crate::field::FieldSpec;
use crate::matrix::{SemilinearElement, SquareMatrix};
use crate::perm::Permutation;

/// Default cap for [`GroupElement::order`].
pub const DEFAULT_ORDER_CAP: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Perm(Permutation),
    Matrix(SquareMatrix),
    Semilinear(SemilinearElement),
}

/// What a group's elements act on.
#[derive(Clone)]
pub enum Ambient {
    Perm { degree: usize },
    Matrix { field: Arc<FieldSpec>, dim: usize },
    Semilinear { field: Arc<FieldSpec>, dim: usize },
}

impl PartialEq for Ambient {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Ambient::Perm { degree: a }, Ambient::Perm { degree: b }) => a == b,
            (Ambient::Matrix { field: f, dim: a }, Ambient::Matrix { field: g, dim: b })
            | (Ambient::Semilinear { field: f, dim: a }, Ambient::Semilinear { field: g, dim: b }) => {
                a == b && **f == **g
            }
            _ => false,
        }
    }
}

impl fmt::Debug for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.header_text())
    }
}

impl Ambient {
    pub fn identity(&self) -> GroupElement {
        match self {
            Ambient::Perm { degree } => GroupElement::Perm(Permutation::identity(*degree)),
            Ambient::Matrix { field, dim } => GroupElement::Matrix(SquareMatrix::identity(field, *dim)),
            Ambient::Semilinear { field, dim } => {
                GroupElement::Semilinear(SemilinearElement::identity(field, *dim))
            }
        }
    }

    /// The generator-file header fragment describing this ambient.
    pub fn header_text(&self) -> String {
        match self {
            Ambient::Perm { degree } => format!("perm {degree}"),
            Ambient::Matrix { field, dim } => format!("mat {dim} over GF({})", field.order()),
            Ambient::Semilinear { field, dim } => format!("mat {dim} over GF({}) fieldauto", field.order()),
        }
    }

    pub fn field(&self) -> Option<&Arc<FieldSpec>> {
        match self {
            Ambient::Perm { .. } => None,
            Ambient::Matrix { field, .. } | Ambient::Semilinear { field, .. } => Some(field),
        }
    }

    /// Whether `x` lives in this ambient. Linear matrices are accepted in a semilinear ambient.
    pub fn admits(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (Ambient::Perm { degree }, GroupElement::Perm(p)) => p.degree() == *degree,
            (Ambient::Matrix { field, dim }, GroupElement::Matrix(m))
            | (Ambient::Semilinear { field, dim }, GroupElement::Matrix(m)) => {
                m.dim() == *dim && **m.field() == **field
            }
            (Ambient::Semilinear { field, dim }, GroupElement::Semilinear(s)) => {
                s.matrix().dim() == *dim && **s.matrix().field() == **field
            }
            _ => false,
        }
    }

    /// Bring `x` into the canonical representation for this ambient.
    pub fn lift(&self, x: GroupElement) -> Result<GroupElement> {
        if !self.admits(&x) {
            return Err(GroupError::Incompatible(format!(
                "{} does not live in {}",
                x.kind_name(),
                self.header_text()
            )));
        }
        Ok(match (self, x) {
            (Ambient::Semilinear { .. }, GroupElement::Matrix(m)) => {
                GroupElement::Semilinear(SemilinearElement::new(m, 0)?)
            }
            (_, x) => x,
        })
    }
}

impl GroupElement {
    /// Wrap an invertible matrix.
    pub fn matrix(m: SquareMatrix) -> Result<Self> {
        if m.determinant().is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(GroupElement::Matrix(m))
    }

    pub fn semilinear(s: SemilinearElement) -> Result<Self> {
        if s.matrix().determinant().is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(GroupElement::Semilinear(s))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupElement::Perm(_) => "permutation",
            GroupElement::Matrix(_) => "matrix",
            GroupElement::Semilinear(_) => "semilinear map",
        }
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            GroupElement::Perm(p) => Ambient::Perm { degree: p.degree() },
            GroupElement::Matrix(m) => Ambient::Matrix { field: Arc::clone(m.field()), dim: m.dim() },
            GroupElement::Semilinear(s) => Ambient::Semilinear {
                field: Arc::clone(s.matrix().field()),
                dim: s.matrix().dim(),
            },
        }
    }

    pub fn compatible(&self, other: &GroupElement) -> bool {
        match (self, other) {
            (GroupElement::Perm(a), GroupElement::Perm(b)) => a.degree() == b.degree(),
            (GroupElement::Matrix(a), GroupElement::Matrix(b)) => a.same_ambient(b),
            (GroupElement::Semilinear(a), GroupElement::Semilinear(b)) => a.matrix().same_ambient(b.matrix()),
            _ => false,
        }
    }

    fn check(&self, other: &GroupElement) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(GroupError::Incompatible(format!(
                "{} ({}) with {} ({})",
                self.kind_name(),
                self.ambient().header_text(),
                other.kind_name(),
                other.ambient().header_text()
            )))
        }
    }

    /// The product acting as `v -> self(other(v))`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    /// Unchecked [`compose`](Self::compose); panics on incompatible operands.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        match (self, other) {
            (GroupElement::Perm(a), GroupElement::Perm(b)) => GroupElement::Perm(a.compose(b)),
            (GroupElement::Matrix(a), GroupElement::Matrix(b)) => GroupElement::Matrix(a.mul(b)),
            (GroupElement::Semilinear(a), GroupElement::Semilinear(b)) => {
                GroupElement::Semilinear(a.compose(b))
            }
            _ => panic!("mul on incompatible group elements"),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Perm(p) => GroupElement::Perm(p.inverse()),
            GroupElement::Matrix(m) => GroupElement::Matrix(m.inverse().expect("group elements are invertible")),
            GroupElement::Semilinear(s) => {
                GroupElement::Semilinear(s.inverse().expect("group elements are invertible"))
            }
        }
    }

    /// `g⁻¹ x g`.
    pub fn conjugate(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(g.inverse().mul(self).mul(g))
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, y: &GroupElement) -> Result<GroupElement> {
        self.check(y)?;
        Ok(self.inverse().mul(&y.inverse()).mul(self).mul(y))
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Perm(p) => p.is_identity(),
            GroupElement::Matrix(m) => m.is_identity(),
            GroupElement::Semilinear(s) => s.is_identity(),
        }
    }

    pub fn identity_like(&self) -> GroupElement {
        self.ambient().identity()
    }

    pub fn pow(&self, mut e: u64) -> GroupElement {
        let mut result = self.identity_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Least `m >= 1` with `x^m = 1`; `Overflow` when `m` would exceed `cap`.
    pub fn order(&self, cap: u64) -> Result<u64> {
        let m = match self {
            GroupElement::Perm(p) => p.order(),
            _ => {
                let mut acc = self.clone();
                let mut m = 1u64;
                while !acc.is_identity() {
                    if m >= cap {
                        return Err(GroupError::overflow("element order", cap));
                    }
                    acc = acc.mul(self);
                    m += 1;
                }
                m
            }
        };
        if m > cap {
            return Err(GroupError::overflow("element order", cap));
        }
        Ok(m)
    }

    /// Canonical serialization: permutation images, or reduced matrix entries
    /// followed by the Frobenius exponent.
    pub fn key(&self) -> Vec<u32> {
        match self {
            GroupElement::Perm(p) => p.images().to_vec(),
            GroupElement::Matrix(m) => m.entries().iter().map(|e| e.0).collect(),
            GroupElement::Semilinear(s) => {
                let mut k: Vec<u32> = s.matrix().entries().iter().map(|e| e.0).collect();
                k.push(s.frob());
                k
            }
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.key().iter().flat_map(|x| x.to_be_bytes()).collect()
    }

    /// Text form accepted by the generator-file parser.
    pub fn to_text(&self) -> String {
        match self {
            GroupElement::Perm(p) => p.to_cycle_string(),
            GroupElement::Matrix(m) => m.to_text(),
            GroupElement::Semilinear(s) => format!("{} @ frob^{}", s.matrix().to_text(), s.frob()),
        }
    }

    pub fn as_perm(&self) -> Option<&Permutation> {
        match self {
            GroupElement::Perm(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&SquareMatrix> {
        match self {
            GroupElement::Matrix(m) => Some(m),
            GroupElement::Semilinear(s) if s.frob() == 0 => Some(s.matrix()),
            _ => None,
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl From<Permutation> for GroupElement {
    fn from(p: Permutation) -> Self {
        GroupElement::Perm(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn perm(n: usize, cycles: &[&[u32]]) -> GroupElement {
        let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        GroupElement::Perm(Permutation::from_cycles(n, &cycles).unwrap())
    }

    #[test]
    fn identity_laws() {
        let x = perm(5, &[&[0, 1, 2], &[3, 4]]);
        let id = x.identity_like();
        assert_eq!(id.compose(&x).unwrap(), x);
        assert_eq!(x.conjugate(&id).unwrap(), x);
        assert!(x.commutator(&x).unwrap().is_identity());
    }

    #[test]
    fn composition_convention_matches_point_action() {
        let a = perm(3, &[&[0, 1]]);
        let b = perm(3, &[&[1, 2]]);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab, perm(3, &[&[0, 1, 2]]));
        let (pa, pb, pab) = (a.as_perm().unwrap(), b.as_perm().unwrap(), ab.as_perm().unwrap());
        for i in 0..3 {
            assert_eq!(pab.apply(i), pa.apply(pb.apply(i)));
        }
    }

    #[test]
    fn matrix_orders() {
        let f = FieldSpec::shipped(7).unwrap();
        let s = f.primitive();
        let d = SquareMatrix::diagonal(&f, &[s, f.inv(s).unwrap()]);
        assert_eq!(GroupElement::matrix(d).unwrap().order(100).unwrap(), 6);
        let c = perm(5, &[&[0, 1, 2, 3, 4]]);
        assert_eq!(c.order(100).unwrap(), 5);
        assert!(c.order(4).is_err());
    }

    #[test]
    fn incompatible_elements_rejected() {
        let f = FieldSpec::shipped(3).unwrap();
        let m = GroupElement::matrix(SquareMatrix::identity(&f, 2)).unwrap();
        let p = perm(3, &[&[0, 1]]);
        assert!(matches!(m.compose(&p), Err(GroupError::Incompatible(_))));
        assert!(perm(4, &[]).compose(&p).is_err());
        let g = FieldSpec::shipped(5).unwrap();
        let m5 = GroupElement::matrix(SquareMatrix::identity(&g, 2)).unwrap();
        assert!(m.compose(&m5).is_err());
    }

    #[test]
    fn semilinear_product_over_gf9() {
        let f = FieldSpec::shipped(9).unwrap();
        let z = f.generator_z();
        let a = SquareMatrix::diagonal(&f, &[z, f.one()]);
        let mut b = SquareMatrix::identity(&f, 2);
        b.set(0, 1, z);
        let x = GroupElement::semilinear(SemilinearElement::new(a.clone(), 1).unwrap()).unwrap();
        let y = GroupElement::semilinear(SemilinearElement::new(b.clone(), 1).unwrap()).unwrap();
        let GroupElement::Semilinear(xy) = x.compose(&y).unwrap() else { panic!() };
        assert_eq!(xy.frob(), 0);
        assert_eq!(xy.matrix(), &a.mul(&b.frobenius(1)));
    }
}
