//! A few small named groups used as test subjects and table sources.

use crate::element::{Ambient, GroupElement};
use crate::error::Result;
use crate::field::FieldSpec;
use crate::group::Group;
use crate::matrix::SquareMatrix;
use crate::perm::Permutation;

/// Cyclic group of order `n` acting regularly on `n` points.
pub fn cyclic(n: usize) -> Result<Group> {
    let gens = if n > 1 { vec![GroupElement::Perm(Permutation::from_cycles(n, &[(0..n as u32).collect()])?)] } else { vec![] };
    Group::new(format!("Z{n}"), Ambient::Perm { degree: n.max(1) }, gens)
}

/// Dihedral group of order `2n` on the vertices of an `n`-gon.
pub fn dihedral(n: usize) -> Result<Group> {
    let rot = Permutation::from_cycles(n, &[(0..n as u32).collect()])?;
    let refl = Permutation::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect())?;
    Group::new(format!("D{}", 2 * n), Ambient::Perm { degree: n }, vec![GroupElement::Perm(rot), GroupElement::Perm(refl)])
}

/// The quaternion group as 2x2 matrices over GF(3).
pub fn quaternion8() -> Result<Group> {
    let f = FieldSpec::shipped(3)?;
    let i = SquareMatrix::from_int_rows(&f, &[vec![0, -1], vec![1, 0]])?;
    let j = SquareMatrix::from_int_rows(&f, &[vec![1, 1], vec![1, -1]])?;
    Group::new("Q8", Ambient::Matrix { field: f, dim: 2 }, vec![GroupElement::matrix(i)?, GroupElement::matrix(j)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn orders() {
        assert_eq!(cyclic(9).unwrap().order().unwrap(), BigUint::from(9u32));
        assert_eq!(dihedral(4).unwrap().order().unwrap(), BigUint::from(8u32));
        assert_eq!(quaternion8().unwrap().order().unwrap(), BigUint::from(8u32));
        assert_eq!(cyclic(1).unwrap().order().unwrap(), BigUint::from(1u32));
    }
}
