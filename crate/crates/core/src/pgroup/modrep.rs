//! Modules for p-groups in coprime characteristic: centralizer dimensions,
//! irreducibility by spinning, and the generator fixed-space bound.

use std::sync::Arc;

use super::small_group::SmallGroup;
use super::wreath::{wreath_section_detect, Tier};
use crate::element::GroupElement;
use crate::error::{GroupError, Result};
use crate::field::FieldSpec;
use crate::matrix::{echelon, rank_of_rows, SquareMatrix, Vector};
use crate::verify::verdict::{Status, Verdict, Witness};

pub const IRREDUCIBILITY_CAP: u64 = 100_000;

/// `dim C_V(x)`, the nullity of `x − I`.
pub fn fixed_dim(x: &SquareMatrix) -> usize {
    x.dim() - commutator_dim(x)
}

/// `dim [x, V]`, the rank of `x − I`.
pub fn commutator_dim(x: &SquareMatrix) -> usize {
    x.sub(&SquareMatrix::identity(x.field(), x.dim())).rank()
}

/// A representation of a group given by one matrix per generator.
#[derive(Clone, Debug)]
pub struct ModuleAction {
    pub field: Arc<FieldSpec>,
    pub dim: usize,
    pub matrices: Vec<SquareMatrix>,
}

impl ModuleAction {
    pub fn new(matrices: Vec<SquareMatrix>) -> Result<ModuleAction> {
        let first = matrices.first().ok_or_else(|| GroupError::Invalid("module needs at least one generator".into()))?;
        let (field, dim) = (Arc::clone(first.field()), first.dim());
        for m in &matrices {
            if !m.same_ambient(first) {
                return Err(GroupError::Incompatible("module matrices over different spaces".into()));
            }
            if m.determinant().is_zero() {
                return Err(GroupError::Singular);
            }
        }
        Ok(ModuleAction { field, dim, matrices })
    }

    /// The matrix group generated by the action, generators in order.
    pub fn image_group(&self, cap: usize) -> Result<SmallGroup> {
        let gens: Vec<GroupElement> = self.matrices.iter().cloned().map(GroupElement::Matrix).collect();
        SmallGroup::from_generators(GroupElement::Matrix(SquareMatrix::identity(&self.field, self.dim)), &gens, cap)
    }

    /// The same module viewed over the prime field, of dimension `dim · k`.
    pub fn restrict_scalars(&self) -> Result<ModuleAction> {
        let f = &self.field;
        let k = f.degree() as usize;
        if k == 1 {
            return Ok(self.clone());
        }
        let prime = Arc::new(FieldSpec::new(f.characteristic(), &[0, 1])?);
        let z = f.generator_z();
        let basis: Vec<_> = (0..k as u64).map(|j| f.pow(z, j)).collect();
        let n = self.dim * k;
        let mats = self
            .matrices
            .iter()
            .map(|m| {
                let mut out = SquareMatrix::zero(&prime, n);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        let a = m.get(i, j);
                        // block (i, j) is multiplication by `a` on GF(q) = GF(r)^k
                        for (bj, &b) in basis.iter().enumerate() {
                            for (bi, c) in f.coeffs(f.mul(a, b)).into_iter().enumerate() {
                                out.set(i * k + bi, j * k + bj, prime.from_int(c as i64));
                            }
                        }
                    }
                }
                out
            })
            .collect();
        ModuleAction::new(mats)
    }

    /// The submodule spanned by the orbit of `v`, as an echelon basis.
    pub fn spin(&self, v: Vector) -> Vec<Vector> {
        let mut basis = echelon(&self.field, self.dim, vec![v]);
        let mut frontier = basis.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for m in &self.matrices {
                    let img = m.apply(w);
                    let mut rows = basis.clone();
                    rows.push(img.clone());
                    if rank_of_rows(&self.field, self.dim, rows) > basis.len() {
                        basis.push(img.clone());
                        basis = echelon(&self.field, self.dim, basis);
                        next.push(img);
                    }
                }
            }
            frontier = next;
        }
        basis
    }

    /// Whether no proper nonzero subspace is invariant; `None` when the number
    /// of one-spaces exceeds `cap`.
    pub fn is_irreducible(&self, cap: u64) -> Option<bool> {
        let q = self.field.order() as u64;
        // 1 + q + ... + q^(d-1) one-spaces
        let points = (0..self.dim as u32).try_fold(0u64, |acc, _| acc.checked_mul(q)?.checked_add(1));
        match points {
            Some(n) if n <= cap => {}
            _ => return None,
        }
        let d = self.dim;
        // one-spaces as vectors whose leading nonzero entry is 1
        for lead in 0..d {
            let tail = d - lead - 1;
            let count = (q as u128).pow(tail as u32);
            for code in 0..count {
                let mut v = vec![self.field.zero(); d];
                v[lead] = self.field.one();
                let mut c = code;
                for slot in v.iter_mut().skip(lead + 1) {
                    *slot = crate::field::FieldElement((c % q as u128) as u32);
                    c /= q as u128;
                }
                if self.spin(v).len() < d {
                    return Some(false);
                }
            }
        }
        Some(true)
    }
}

/// Check that the module matrices define an action of `P` through its
/// generators, returning the matrix of each element.
fn action_images(p_group: &SmallGroup, module: &ModuleAction) -> std::result::Result<Vec<SquareMatrix>, String> {
    let gens = p_group.generators();
    if gens.len() != module.matrices.len() {
        return Err(format!("{} generators but {} matrices", gens.len(), module.matrices.len()));
    }
    let n = p_group.order();
    let mut phi: Vec<Option<SquareMatrix>> = vec![None; n];
    phi[0] = Some(SquareMatrix::identity(&module.field, module.dim));
    let mut queue = vec![0u32];
    let mut head = 0;
    while head < queue.len() {
        let m = queue[head];
        head += 1;
        let base = phi[m as usize].clone().expect("visited");
        for (&g, a) in gens.iter().zip(&module.matrices) {
            let target = p_group.mul(m, g) as usize;
            let val = base.mul(a);
            match &phi[target] {
                None => {
                    phi[target] = Some(val);
                    queue.push(target as u32);
                }
                Some(existing) if *existing != val => {
                    return Err("generator matrices do not satisfy the relations of P".into());
                }
                Some(_) => {}
            }
        }
    }
    if queue.len() != n {
        return Err("listed generators do not generate P".into());
    }
    Ok(phi.into_iter().map(|m| m.expect("visited")).collect())
}

/// The shared hypotheses: coprime characteristic, a p-group acting through
/// its generators, irreducibility, and nonabelian image.
fn hypotheses(scenario: &str, p_group: &SmallGroup, module: &ModuleAction, p: u64) -> Option<Verdict> {
    if module.field.characteristic() as u64 == p {
        return Some(Verdict::skipped(scenario, format!("field characteristic equals p = {p}")));
    }
    if !p_group.is_p_group(p) {
        return Some(Verdict::skipped(scenario, format!("P has order {}, not a power of {p}", p_group.order())));
    }
    if let Err(reason) = action_images(p_group, module) {
        return Some(Verdict::skipped(scenario, reason));
    }
    match module.is_irreducible(IRREDUCIBILITY_CAP) {
        Some(true) => {}
        Some(false) => return Some(Verdict::skipped(scenario, "module is reducible")),
        None => {
            let mut v = Verdict::new(scenario, Status::Indeterminate);
            v.note(format!("irreducibility test exceeds {IRREDUCIBILITY_CAP} one-spaces"));
            return Some(v);
        }
    }
    // the image of [P,P] is the derived subgroup of the image
    let m = &module.matrices;
    let commute = (0..m.len()).all(|i| (i + 1..m.len()).all(|j| m[i].mul(&m[j]) == m[j].mul(&m[i])));
    if commute {
        return Some(Verdict::skipped(scenario, "[P,P] acts trivially on V"));
    }
    None
}

fn generators_of_order_p(p_group: &SmallGroup, p: u64) -> bool {
    p_group.generators().iter().all(|&g| p_group.element_order(g) == p)
}

/// Some generator has `dim C_V(x_i) ≤ dim V / p`, with equality for some
/// generator when every generator has order `p`.
pub fn lemma21_check(name: &str, p_group: &SmallGroup, module: &ModuleAction, p: u64) -> Verdict {
    let scenario = format!("fixed-space bound {name} p={p}");
    if let Some(v) = hypotheses(&scenario, p_group, module, p) {
        return v;
    }
    let dims: Vec<usize> = module.matrices.iter().map(fixed_dim).collect();
    let d = module.dim;
    let pu = p as usize;
    let part_a = dims.iter().any(|&f| f * pu <= d);
    let check_b = generators_of_order_p(p_group, p);
    let part_b = !check_b || dims.iter().any(|&f| f * pu == d);
    let mut v = Verdict::new(&scenario, if part_a && part_b { Status::Holds } else { Status::Fails });
    v.fact("dim", d);
    v.fact("fixed_dims", dims.clone());
    v.fact("equality_case_checked", check_b);
    if p == 2 {
        v.note("p = 2 lies outside the odd-p setting of the bound; it is checked all the same");
    }
    let claim = if !part_a {
        Some("fixed_space_bound_violated")
    } else if !part_b {
        Some("fixed_space_equality_missing")
    } else {
        None
    };
    if let Some(claim) = claim {
        let mut w = Witness::new(claim)
            .ambient(format!("mat {d} over GF({})", module.field.order()))
            .value("fixed_dims", format!("{dims:?}"))
            .value("p", p);
        for (i, m) in module.matrices.iter().enumerate() {
            w = w.element(format!("x{}", i + 1), m.to_text());
        }
        v.witnesses.push(w);
    }
    v
}

/// Whether `V` is the direct sum of the spaces `[x_i, V]`.
pub fn commutator_spaces_direct(module: &ModuleAction) -> bool {
    let id = SquareMatrix::identity(&module.field, module.dim);
    let mut cols = Vec::new();
    let mut total = 0;
    for m in &module.matrices {
        let diff = m.sub(&id);
        total += diff.rank();
        cols.extend((0..module.dim).map(|j| diff.column(j)));
    }
    total == module.dim && rank_of_rows(&module.field, module.dim, cols) == module.dim
}

/// With generators of order `p` and `V = ⊕ [x_i, V]`, `P` must have a section
/// `Z_p ≀ Z_p`; the section search confirms it independently.
pub fn cor22_check(name: &str, p_group: &SmallGroup, module: &ModuleAction, p: u64) -> Verdict {
    let scenario = format!("direct-sum section {name} p={p}");
    if let Some(v) = hypotheses(&scenario, p_group, module, p) {
        return v;
    }
    if !generators_of_order_p(p_group, p) {
        return Verdict::skipped(&scenario, format!("some generator does not have order {p}"));
    }
    if !commutator_spaces_direct(module) {
        return Verdict::skipped(&scenario, "V is not the direct sum of the spaces [x_i, V]");
    }
    let section = match wreath_section_detect(p_group, p, Tier::Full) {
        Ok(s) => s,
        Err(e) => {
            let mut v = Verdict::new(&scenario, Status::Indeterminate);
            v.note(e.to_string());
            return v;
        }
    };
    let status = match (section.found, section.tier) {
        (true, _) => Status::Holds,
        (false, Tier::Indeterminate) => Status::Indeterminate,
        (false, _) => Status::Fails,
    };
    let mut v = Verdict::new(&scenario, status);
    v.fact("order", p_group.order());
    v.fact("tier", serde_json::to_value(section.tier).unwrap_or_default());
    if let Some((h, n)) = &section.witness {
        v.fact("section_subgroup_gens", h.clone());
        v.fact("section_normal_gens", n.clone());
    }
    if let Some(msg) = section.message {
        v.note(msg);
    }
    if status == Status::Fails {
        let mut w = Witness::new("direct_sum_without_section")
            .ambient(format!("mat {} over GF({})", module.dim, module.field.order()))
            .value("order", p_group.order())
            .value("p", p);
        for (i, m) in module.matrices.iter().enumerate() {
            w = w.element(format!("x{}", i + 1), m.to_text());
        }
        v.witnesses.push(w);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(q: u32, rows: &[Vec<i64>]) -> SquareMatrix {
        SquareMatrix::from_int_rows(&FieldSpec::shipped(q).unwrap(), rows).unwrap()
    }

    fn module(ms: Vec<SquareMatrix>) -> (SmallGroup, ModuleAction) {
        let m = ModuleAction::new(ms).unwrap();
        (m.image_group(10_000).unwrap(), m)
    }

    #[test]
    fn dims() {
        let f = FieldSpec::shipped(5).unwrap();
        let id = SquareMatrix::identity(&f, 4);
        assert_eq!((fixed_dim(&id), commutator_dim(&id)), (4, 0));
        let rot = mat(3, &[vec![0, -1], vec![1, 0]]);
        assert_eq!(fixed_dim(&rot), 0);
        let mut t = SquareMatrix::identity(&f, 4);
        t.set(0, 3, f.one());
        assert_eq!(fixed_dim(&t), 3);
    }

    #[test]
    fn irreducibility() {
        let d8 = ModuleAction::new(vec![mat(3, &[vec![0, -1], vec![1, 0]]), mat(3, &[vec![0, 1], vec![1, 0]])]).unwrap();
        assert_eq!(d8.is_irreducible(IRREDUCIBILITY_CAP), Some(true));
        let block = ModuleAction::new(vec![mat(3, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]])]).unwrap();
        assert_eq!(block.is_irreducible(IRREDUCIBILITY_CAP), Some(false));
        let one = ModuleAction::new(vec![mat(5, &[vec![2]])]).unwrap();
        assert_eq!(one.is_irreducible(IRREDUCIBILITY_CAP), Some(true));
        assert_eq!(d8.is_irreducible(3), None);
    }

    #[test]
    fn d8_bound_and_section() {
        let (p, m) = module(vec![mat(3, &[vec![0, 1], vec![1, 0]]), mat(3, &[vec![-1, 0], vec![0, 1]])]);
        let v = lemma21_check("d8", &p, &m, 2);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.facts["fixed_dims"], serde_json::json!([1, 1]));
        assert_eq!(cor22_check("d8", &p, &m, 2).status, Status::Holds);
    }

    #[test]
    fn hypothesis_failures_skip() {
        let (p, m) = module(vec![mat(3, &[vec![0, -1], vec![1, 0]])]);
        let v = lemma21_check("z4", &p, &m, 2);
        assert_eq!(v.status, Status::Skipped);
        assert!(v.notes[0].contains("[P,P]"));
        let (p, m) = module(vec![mat(3, &[vec![0, 1], vec![1, 0]]), mat(3, &[vec![-1, 0], vec![0, 1]])]);
        assert_eq!(lemma21_check("d8", &p, &m, 3).status, Status::Skipped);
    }

    #[test]
    fn q8_never_decomposes() {
        let i = mat(3, &[vec![0, -1], vec![1, 0]]);
        let j = mat(3, &[vec![1, 1], vec![1, -1]]);
        let (q8, _) = module(vec![i, j]);
        let els: Vec<SquareMatrix> = (0..8).map(|k| q8.element(k).unwrap().as_matrix().unwrap().clone()).collect();
        for a in &els {
            for b in &els {
                let m = ModuleAction::new(vec![a.clone(), b.clone()]).unwrap();
                if m.image_group(100).unwrap().order() == 8 {
                    assert!(!commutator_spaces_direct(&m));
                    assert_eq!(cor22_check("q8", &m.image_group(100).unwrap(), &m, 2).status, Status::Skipped);
                }
            }
        }
    }

    #[test]
    fn restriction_doubles_dimension() {
        let f4 = FieldSpec::shipped(4).unwrap();
        let w = f4.primitive();
        let m = ModuleAction::new(vec![SquareMatrix::diagonal(&f4, &[w, f4.one()])]).unwrap();
        let r = m.restrict_scalars().unwrap();
        assert_eq!(r.dim, 4);
        assert_eq!(fixed_dim(&r.matrices[0]), 2);
        assert_eq!(r.image_group(100).unwrap().order(), 3);
    }
}
