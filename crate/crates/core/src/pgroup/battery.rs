//! A fixed collection of small p-group modules exercising the fixed-space
//! bound and the direct-sum section check.

use std::sync::Arc;

use super::modrep::{cor22_check, lemma21_check, ModuleAction};
use super::small_group::SmallGroup;
use crate::error::{GroupError, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::SquareMatrix;
use crate::verify::verdict::Verdict;

pub struct ModuleCase {
    pub name: String,
    pub p: u64,
    pub module: ModuleAction,
}

pub struct CaseReport {
    pub name: String,
    pub bound: Verdict,
    pub section: Verdict,
}

impl ModuleCase {
    fn new(name: impl Into<String>, p: u64, matrices: Vec<SquareMatrix>) -> Result<ModuleCase> {
        Ok(ModuleCase { name: name.into(), p, module: ModuleAction::new(matrices)? })
    }

    pub fn group(&self) -> Result<SmallGroup> {
        self.module.image_group(10_000)
    }

    pub fn run(&self) -> Result<CaseReport> {
        let g = self.group()?;
        Ok(CaseReport {
            name: self.name.clone(),
            bound: lemma21_check(&self.name, &g, &self.module, self.p),
            section: cor22_check(&self.name, &g, &self.module, self.p),
        })
    }
}

fn field(q: u32) -> Result<Arc<FieldSpec>> {
    FieldSpec::shipped(q)
}

fn ints(f: &Arc<FieldSpec>, rows: &[Vec<i64>]) -> Result<SquareMatrix> {
    SquareMatrix::from_int_rows(f, rows)
}

fn perm_matrix(f: &Arc<FieldSpec>, images: &[usize]) -> SquareMatrix {
    let mut m = SquareMatrix::zero(f, images.len());
    for (j, &i) in images.iter().enumerate() {
        m.set(i, j, f.one());
    }
    m
}

/// An element of multiplicative order `n`.
fn root_of_unity(f: &FieldSpec, n: u64) -> Result<FieldElement> {
    let q1 = f.order() as u64 - 1;
    if q1 % n != 0 {
        return Err(GroupError::Unsupported(format!("GF({}) has no element of order {n}", f.order())));
    }
    Ok(f.pow(f.primitive(), q1 / n))
}

fn d8(q: u32) -> Result<ModuleCase> {
    let f = field(q)?;
    ModuleCase::new(format!("D8/GF({q}) reflections"), 2, vec![perm_matrix(&f, &[1, 0]), ints(&f, &[vec![-1, 0], vec![0, 1]])?])
}

/// `i`, `j` with `i² = j² = −1` and `ij = −ji`.
fn q8(q: u32) -> Result<ModuleCase> {
    let f = field(q)?;
    let minus_one = f.neg(f.one());
    let (a, b) = f
        .elements()
        .flat_map(|a| f.elements().map(move |b| (a, b)))
        .find(|&(a, b)| f.add(f.mul(a, a), f.mul(b, b)) == minus_one)
        .ok_or_else(|| GroupError::Unsupported("no sum of two squares equals -1".into()))?;
    let i = ints(&f, &[vec![0, -1], vec![1, 0]])?;
    let mut j = SquareMatrix::zero(&f, 2);
    j.set(0, 0, a);
    j.set(0, 1, b);
    j.set(1, 0, b);
    j.set(1, 1, f.neg(a));
    ModuleCase::new(format!("Q8/GF({q})"), 2, vec![i, j])
}

fn z4_wr_z2(q: u32) -> Result<ModuleCase> {
    let f = field(q)?;
    let i = root_of_unity(&f, 4)?;
    ModuleCase::new(format!("Z4wrZ2/GF({q})"), 2, vec![SquareMatrix::diagonal(&f, &[i, f.one()]), perm_matrix(&f, &[1, 0])])
}

/// The semidihedral Sylow 2-subgroup of GL_2(3).
fn sd16() -> Result<ModuleCase> {
    let f = field(3)?;
    let all: Vec<SquareMatrix> = (0..81u32)
        .map(|code| {
            let e: Vec<FieldElement> = (0..4).map(|k| FieldElement(code / 3u32.pow(k) % 3)).collect();
            SquareMatrix::from_entries(&f, 2, e)
        })
        .collect::<Result<_>>()?;
    let id = SquareMatrix::identity(&f, 2);
    let order = |m: &SquareMatrix| {
        let mut x = m.clone();
        (1..=8).find(|_| {
            let done = x == id;
            x = x.mul(m);
            done
        })
    };
    let a = all
        .iter()
        .find(|m| !m.determinant().is_zero() && order(m) == Some(8))
        .ok_or_else(|| GroupError::Invalid("no element of order 8 in GL_2(3)".into()))?;
    let a3 = a.mul(a).mul(a);
    let b = all
        .iter()
        .find(|b| !b.determinant().is_zero() && order(b) == Some(2) && b.mul(a).mul(b) == a3)
        .ok_or_else(|| GroupError::Invalid("no semidihedral involution".into()))?;
    ModuleCase::new("SD16/GF(3)", 2, vec![a.clone(), b.clone()])
}

/// Signed permutation matrices on 4 points, order 128.
fn signed_monomial(q: u32) -> Result<ModuleCase> {
    let f = field(q)?;
    let sign = SquareMatrix::diagonal(&f, &[f.neg(f.one()), f.one(), f.one(), f.one()]);
    ModuleCase::new(format!("2^4:D8/GF({q})"), 2, vec![sign, perm_matrix(&f, &[1, 0, 2, 3]), perm_matrix(&f, &[2, 3, 0, 1])])
}

fn z3_wr_z3(q: u32) -> Result<ModuleCase> {
    let f = field(q)?;
    let w = root_of_unity(&f, 3)?;
    ModuleCase::new(format!("Z3wrZ3/GF({q})"), 3, vec![perm_matrix(&f, &[1, 2, 0]), SquareMatrix::diagonal(&f, &[w, f.one(), f.one()])])
}

fn extraspecial27(q: u32) -> Result<ModuleCase> {
    let f = field(q)?;
    let w = root_of_unity(&f, 3)?;
    ModuleCase::new(
        format!("3^(1+2)/GF({q})"),
        3,
        vec![perm_matrix(&f, &[1, 2, 0]), SquareMatrix::diagonal(&f, &[f.one(), w, f.mul(w, w)])],
    )
}

fn restricted(case: ModuleCase) -> Result<ModuleCase> {
    let module = case.module.restrict_scalars()?;
    Ok(ModuleCase { name: format!("{} over GF({})", case.name, module.field.order()), p: case.p, module })
}

/// The standard battery: 22 cases with p ∈ {2, 3}, dimension ≤ 6, q ≤ 9.
pub fn module_battery() -> Result<Vec<ModuleCase>> {
    let f3 = field(3)?;
    let mut cases = Vec::new();
    for q in [3, 5, 7, 9] {
        cases.push(d8(q)?);
    }
    for q in [3, 5, 7] {
        cases.push(q8(q)?);
    }
    for q in [5, 9] {
        cases.push(z4_wr_z2(q)?);
    }
    cases.push(sd16()?);
    for q in [3, 5] {
        cases.push(signed_monomial(q)?);
    }
    cases.push(ModuleCase::new("D8/GF(3) reflection and rotation", 2, vec![perm_matrix(&f3, &[1, 0]), ints(&f3, &[vec![0, 1], vec![-1, 0]])?])?);
    cases.push(ModuleCase::new("Z4/GF(3) abelian", 2, vec![ints(&f3, &[vec![0, -1], vec![1, 0]])?])?);
    cases.push(ModuleCase::new(
        "D8+1/GF(3) reducible",
        2,
        vec![perm_matrix(&f3, &[1, 0, 2]), SquareMatrix::diagonal(&f3, &[f3.neg(f3.one()), f3.one(), f3.one()])],
    )?);
    for q in [4, 7] {
        cases.push(z3_wr_z3(q)?);
    }
    for q in [4, 7] {
        cases.push(extraspecial27(q)?);
    }
    cases.push(restricted(z3_wr_z3(4)?)?);
    cases.push(restricted(extraspecial27(4)?)?);
    let mut redundant = d8(3)?;
    redundant.name = "D8/GF(3) with -I".into();
    redundant.module.matrices.push(ints(&f3, &[vec![-1, 0], vec![0, -1]])?);
    cases.push(redundant);
    Ok(cases)
}

pub fn run_battery() -> Result<Vec<CaseReport>> {
    module_battery()?.iter().map(ModuleCase::run).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroup::modrep::fixed_dim;
    use crate::verify::verdict::Status;

    #[test]
    fn case_shapes() {
        let cases = module_battery().unwrap();
        assert_eq!(cases.len(), 22);
        let orders: Vec<usize> = cases.iter().map(|c| c.group().unwrap().order()).collect();
        assert_eq!(&orders[..4], &[8, 8, 8, 8]);
        assert_eq!(&orders[4..7], &[8, 8, 8]);
        assert_eq!(&orders[7..12], &[32, 32, 16, 128, 128]);
        assert_eq!(&orders[15..21], &[81, 81, 27, 27, 81, 27]);
        assert!(cases.iter().all(|c| c.module.dim <= 6 && c.module.field.order() <= 9));
    }

    #[test]
    fn extraspecial_fixed_dims() {
        let c = extraspecial27(4).unwrap();
        let dims: Vec<usize> = c.module.matrices.iter().map(fixed_dim).collect();
        assert_eq!(dims, vec![1, 1]);
        let r = c.group().unwrap();
        assert_eq!(lemma21_check("x", &r, &c.module, 3).status, Status::Holds);
    }

    #[test]
    fn no_case_fails() {
        for r in run_battery().unwrap() {
            assert_ne!(r.bound.status, Status::Fails, "{}", r.name);
            assert_ne!(r.section.status, Status::Fails, "{}", r.name);
            assert_ne!(r.bound.status, Status::Indeterminate, "{}", r.name);
        }
    }
}
