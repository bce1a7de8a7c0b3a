//! Constructors for the concrete groups the verifiers compute in.
//!
//! Form conventions (fixed, and printed by [`GroupBlueprint::form_description`]):
//! * `sp`: alternating Gram matrix with `+1` on the upper antidiagonal half and `-1` below.
//! * `go_plus`: antidiagonal all-ones Gram matrix (a sum of hyperbolic planes).
//! * `go_minus`: hyperbolic planes followed by the anisotropic block `diag(1, -ν)`, ν a non-square.
//! * `go_odd`: hyperbolic planes followed by the 1x1 block `[1]`.
//! * `gu`/`su`: the identity Hermitian form over GF(q²).
//! * `psl2`: fractional linear maps on the q+1 points of the projective line, `∞` last.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use crate::element::{Ambient, GroupElement};
use crate::error::{GroupError, Result};
use crate::field::{prime_power, FieldElement, FieldSpec};
use crate::group::Group;
use crate::matrix::{SquareMatrix, Vector};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Sym,
    Alt,
    Gl,
    Sl,
    Sp,
    Gu,
    Su,
    GoPlus,
    GoMinus,
    GoOdd,
    Psl2,
    File,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Sym => "sym",
            Family::Alt => "alt",
            Family::Gl => "gl",
            Family::Sl => "sl",
            Family::Sp => "sp",
            Family::Gu => "gu",
            Family::Su => "su",
            Family::GoPlus => "go_plus",
            Family::GoMinus => "go_minus",
            Family::GoOdd => "go_odd",
            Family::Psl2 => "psl2",
            Family::File => "file",
        }
    }

    pub fn all() -> [Family; 12] {
        [
            Family::Sym,
            Family::Alt,
            Family::Gl,
            Family::Sl,
            Family::Sp,
            Family::Gu,
            Family::Su,
            Family::GoPlus,
            Family::GoMinus,
            Family::GoOdd,
            Family::Psl2,
            Family::File,
        ]
    }

    fn is_matrix(self) -> bool {
        matches!(
            self,
            Family::Gl | Family::Sl | Family::Sp | Family::Gu | Family::Su | Family::GoPlus | Family::GoMinus | Family::GoOdd
        )
    }
}

impl FromStr for Family {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Family> {
        Family::all()
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| GroupError::Unsupported(format!("unknown group family '{s}'")))
    }
}

/// Outer elements that can be adjoined to `psl2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Psl2Extension {
    /// `t -> ν t`, giving PGL₂(q).
    Diagonal,
    /// `t -> t^r`.
    Frobenius,
    /// `t -> ν t^r`.
    DiagonalFrobenius,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupBlueprint {
    pub family: Family,
    /// Degree for sym/alt, dimension for matrix families, unused otherwise.
    pub n: usize,
    /// Field order (for gu/su the form lives over GF(q²)).
    pub q: u32,
    pub extensions: Vec<Psl2Extension>,
    pub path: Option<PathBuf>,
}

pub const MAX_PERM_DEGREE: usize = 12;
pub const MAX_MATRIX_DIM: usize = 8;
pub const MAX_MATRIX_Q: u32 = 27;

impl GroupBlueprint {
    pub fn sym(n: usize) -> Self {
        GroupBlueprint { family: Family::Sym, n, q: 0, extensions: vec![], path: None }
    }

    pub fn alt(n: usize) -> Self {
        GroupBlueprint { family: Family::Alt, n, q: 0, extensions: vec![], path: None }
    }

    pub fn matrix(family: Family, n: usize, q: u32) -> Self {
        GroupBlueprint { family, n, q, extensions: vec![], path: None }
    }

    pub fn psl2(q: u32, extensions: Vec<Psl2Extension>) -> Self {
        GroupBlueprint { family: Family::Psl2, n: 2, q, extensions, path: None }
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        GroupBlueprint { family: Family::File, n: 0, q: 0, extensions: vec![], path: Some(path.into()) }
    }

    pub fn validate(&self) -> Result<()> {
        let unsupported = |msg: String| Err(GroupError::Unsupported(msg));
        match self.family {
            Family::Sym | Family::Alt => {
                if self.n > MAX_PERM_DEGREE {
                    return unsupported(format!("degree {} exceeds {MAX_PERM_DEGREE}", self.n));
                }
            }
            Family::File => {
                if self.path.is_none() {
                    return unsupported("file blueprint without a path".into());
                }
            }
            Family::Psl2 => {
                if prime_power(self.q).is_none() {
                    return unsupported(format!("q = {} is not a prime power", self.q));
                }
                FieldSpec::shipped(self.q)?;
                if !self.extensions.is_empty() && self.q % 2 == 0 && self.extensions.contains(&Psl2Extension::Diagonal) {
                    return unsupported("PGL₂(q) = PSL₂(q) for even q".into());
                }
            }
            fam => {
                debug_assert!(fam.is_matrix());
                if self.n == 0 || self.n > MAX_MATRIX_DIM {
                    return unsupported(format!("dimension {} outside 1..={MAX_MATRIX_DIM}", self.n));
                }
                if self.q > MAX_MATRIX_Q {
                    return unsupported(format!("q = {} exceeds {MAX_MATRIX_Q}", self.q));
                }
                let field_q = match fam {
                    Family::Gu | Family::Su => self.q.checked_mul(self.q).unwrap_or(u32::MAX),
                    _ => self.q,
                };
                FieldSpec::shipped(field_q)?;
                match fam {
                    Family::Sp if self.n % 2 != 0 => return unsupported("sp needs even dimension".into()),
                    Family::GoPlus | Family::GoMinus if self.n % 2 != 0 => {
                        return unsupported("go_plus/go_minus need even dimension".into())
                    }
                    Family::GoOdd if self.n % 2 != 1 => return unsupported("go_odd needs odd dimension".into()),
                    Family::GoPlus | Family::GoMinus | Family::GoOdd if self.q % 2 == 0 => {
                        return unsupported("orthogonal groups are supported for odd q only".into())
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// The field the matrices live over.
    pub fn field(&self) -> Result<Arc<FieldSpec>> {
        match self.family {
            Family::Gu | Family::Su => FieldSpec::shipped(self.q * self.q),
            f if f.is_matrix() => FieldSpec::shipped(self.q),
            Family::Psl2 => FieldSpec::shipped(self.q),
            _ => Err(GroupError::Unsupported(format!("{} has no field", self.family.tag()))),
        }
    }

    /// Gram matrix of the preserved form, if any.
    pub fn form(&self) -> Result<Option<SquareMatrix>> {
        if !self.family.is_matrix() {
            return Ok(None);
        }
        let f = self.field()?;
        let n = self.n;
        let mut j = SquareMatrix::zero(&f, n);
        match self.family {
            Family::Sp => {
                for i in 0..n {
                    j.set(i, n - 1 - i, if i < n / 2 { f.one() } else { f.neg(f.one()) });
                }
            }
            Family::GoPlus => {
                for i in 0..n {
                    j.set(i, n - 1 - i, f.one());
                }
            }
            Family::GoMinus => {
                let h = n - 2;
                for i in 0..h {
                    j.set(i, h - 1 - i, f.one());
                }
                j.set(h, h, f.one());
                j.set(h + 1, h + 1, f.neg(f.primitive()));
            }
            Family::GoOdd => {
                let h = n - 1;
                for i in 0..h {
                    j.set(i, h - 1 - i, f.one());
                }
                j.set(h, h, f.one());
            }
            Family::Gu | Family::Su | Family::Gl | Family::Sl => {
                j = SquareMatrix::identity(&f, n);
            }
            _ => unreachable!(),
        }
        Ok(Some(j))
    }

    pub fn form_description(&self) -> String {
        match self.family {
            Family::Sp => "alternating antidiagonal Gram matrix (+1 upper half, -1 lower half)".into(),
            Family::GoPlus => "symmetric antidiagonal all-ones Gram matrix".into(),
            Family::GoMinus => "hyperbolic planes + anisotropic block diag(1,-ν), ν primitive".into(),
            Family::GoOdd => "hyperbolic planes + [1]".into(),
            Family::Gu | Family::Su => "identity Hermitian form over GF(q^2)".into(),
            Family::Gl | Family::Sl => "standard dot product (used for reflections only)".into(),
            Family::Psl2 => "projective line, points 0..q-1 are field elements, q is ∞".into(),
            _ => "none".into(),
        }
    }

    fn hermitian(&self) -> bool {
        matches!(self.family, Family::Gu | Family::Su)
    }

    /// `(x, y)` for the blueprint's form; Hermitian forms are conjugate-linear in `x`.
    pub fn pairing(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<FieldElement> {
        let j = self.form()?.ok_or_else(|| GroupError::Unsupported("no form".into()))?;
        let f = j.field().clone();
        let jy = j.apply(y);
        let conj = |a: FieldElement| if self.hermitian() { f.frobenius(a, f.degree() / 2) } else { a };
        Ok(x.iter().zip(&jy).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(conj(a), b))))
    }

    /// Checks `A^T J A = J` (or `A^* J A = J` for Hermitian forms).
    pub fn preserves_form(&self, a: &SquareMatrix) -> Result<bool> {
        let Some(j) = self.form()? else { return Ok(true) };
        if matches!(self.family, Family::Gl | Family::Sl) {
            return Ok(true);
        }
        let f = a.field();
        let at = if self.hermitian() { a.transpose().frobenius(f.degree() / 2) } else { a.transpose() };
        Ok(at.mul(&j).mul(a) == j)
    }

    fn unit_vector(f: &Arc<FieldSpec>, n: usize, i: usize) -> Vector {
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        v
    }

    /// `x -> x - 2(x,v)/(v,v)·v`, in matrix form.
    pub fn reflection_matrix(&self, v: &[FieldElement]) -> Result<SquareMatrix> {
        let f = self.field()?;
        let n = self.n;
        let vv = self.pairing(v, v)?;
        if vv.is_zero() {
            return Err(GroupError::Invalid("reflection vector is isotropic".into()));
        }
        let two = f.from_int(2);
        if two.is_zero() {
            return Err(GroupError::Unsupported("reflections need odd characteristic".into()));
        }
        let coef = f.div(two, vv)?;
        let mut m = SquareMatrix::identity(&f, n);
        for i in 0..n {
            let e = Self::unit_vector(&f, n, i);
            // column i is r(e_i) = e_i - coef (v, e_i) v
            let c = f.mul(coef, self.pairing(v, &e)?);
            for r in 0..n {
                let val = f.sub(m.get(r, i), f.mul(c, v[r]));
                m.set(r, i, val);
            }
        }
        Ok(m)
    }

    fn transvection_matrix(&self, v: &[FieldElement], a: FieldElement) -> Result<SquareMatrix> {
        // x -> x + a (x, v) v for the alternating form
        let f = self.field()?;
        let n = self.n;
        let mut m = SquareMatrix::identity(&f, n);
        for i in 0..n {
            let e = Self::unit_vector(&f, n, i);
            let c = f.mul(a, self.pairing(&e, v)?);
            for r in 0..n {
                let val = f.add(m.get(r, i), f.mul(c, v[r]));
                m.set(r, i, val);
            }
        }
        Ok(m)
    }

    /// `x -> x + (x,u) w - (x,w) u` for orthogonal singular `u`, `w`.
    fn siegel_matrix(&self, u: &[FieldElement], w: &[FieldElement]) -> Result<SquareMatrix> {
        let f = self.field()?;
        let n = self.n;
        let mut m = SquareMatrix::identity(&f, n);
        for i in 0..n {
            let e = Self::unit_vector(&f, n, i);
            let cu = self.pairing(&e, u)?;
            let cw = self.pairing(&e, w)?;
            for r in 0..n {
                let val = f.sub(f.add(m.get(r, i), f.mul(cu, w[r])), f.mul(cw, u[r]));
                m.set(r, i, val);
            }
        }
        Ok(m)
    }

    fn elementary(f: &Arc<FieldSpec>, n: usize, i: usize, j: usize, a: FieldElement) -> SquareMatrix {
        let mut m = SquareMatrix::identity(f, n);
        m.set(i, j, a);
        m
    }

    /// Additive generators of the field over its prime subfield.
    fn additive_basis(f: &FieldSpec) -> Vec<FieldElement> {
        let z = f.generator_z();
        (0..f.degree()).map(|j| if j == 0 { f.one() } else { f.pow(z, j as u64) }).collect()
    }

    fn sl_generators(f: &Arc<FieldSpec>, n: usize) -> Vec<SquareMatrix> {
        let mut gens = Vec::new();
        for a in Self::additive_basis(f) {
            for i in 0..n.saturating_sub(1) {
                gens.push(Self::elementary(f, n, i, i + 1, a));
                gens.push(Self::elementary(f, n, i + 1, i, a));
            }
        }
        gens
    }

    /// Unit vectors, then `e_i + c e_j` for `c` in {1, −1, primitive}.
    pub fn small_vectors(f: &Arc<FieldSpec>, n: usize) -> Vec<Vector> {
        let mut out = Vec::new();
        let w = f.primitive();
        for i in 0..n {
            out.push(Self::unit_vector(f, n, i));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for c in [f.one(), f.neg(f.one()), w] {
                    let mut v = vec![f.zero(); n];
                    v[i] = f.one();
                    v[j] = c;
                    out.push(v);
                }
            }
        }
        out
    }

    /// Vectors with at most three nonzero coordinates, the first equal to 1.
    fn vector_pool(f: &Arc<FieldSpec>, n: usize) -> Vec<Vector> {
        let coeffs: Vec<FieldElement> = if f.order() <= 9 {
            f.elements().skip(1).collect()
        } else {
            let w = f.primitive();
            vec![f.one(), f.neg(f.one()), w, f.inv(w).unwrap()]
        };
        let mut out = Self::small_vectors(f, n);
        let mut push = |v: Vector| {
            if !out.contains(&v) {
                out.push(v);
            }
        };
        for i in 0..n {
            for j in (i + 1)..n {
                for &c in &coeffs {
                    let mut v = vec![f.zero(); n];
                    v[i] = f.one();
                    v[j] = c;
                    push(v.clone());
                    for k in (j + 1)..n {
                        for &d in &coeffs {
                            let mut u = v.clone();
                            u[k] = d;
                            push(u);
                        }
                    }
                }
            }
        }
        out
    }

    /// `x -> x + (ζ-1)(v,x)/(v,v)·v`, determinant ζ.
    fn pseudo_reflection(&self, v: &[FieldElement], zeta: FieldElement) -> Result<SquareMatrix> {
        let f = self.field()?;
        let n = self.n;
        let coef = f.div(f.sub(zeta, f.one()), self.pairing(v, v)?)?;
        let mut m = SquareMatrix::identity(&f, n);
        for i in 0..n {
            let e = Self::unit_vector(&f, n, i);
            let c = f.mul(coef, self.pairing(v, &e)?);
            for r in 0..n {
                let val = f.add(m.get(r, i), f.mul(c, v[r]));
                m.set(r, i, val);
            }
        }
        Ok(m)
    }

    /// Extend `gens` by every pool element not already generated, in pool order.
    fn saturate(&self, mut gens: Vec<SquareMatrix>, pool: Vec<SquareMatrix>) -> Result<Vec<SquareMatrix>> {
        let ambient = self.ambient()?;
        let wrap = |ms: &[SquareMatrix]| -> Result<Group> {
            let els = ms.iter().cloned().map(GroupElement::matrix).collect::<Result<Vec<_>>>()?;
            Group::new("saturation", ambient.clone(), els)
        };
        let mut current = wrap(&gens)?;
        for m in pool {
            if !current.contains(&GroupElement::matrix(m.clone())?)? {
                gens.push(m);
                current = wrap(&gens)?;
            }
        }
        Ok(gens)
    }

    fn matrix_generators(&self) -> Result<Vec<SquareMatrix>> {
        let f = self.field()?;
        let n = self.n;
        let mut gens = Vec::new();
        match self.family {
            Family::Gl => {
                let mut d = SquareMatrix::identity(&f, n);
                d.set(0, 0, f.primitive());
                gens.push(d);
                gens.extend(Self::sl_generators(&f, n));
            }
            Family::Sl => gens.extend(Self::sl_generators(&f, n)),
            Family::Sp => {
                for v in Self::small_vectors(&f, n) {
                    for a in Self::additive_basis(&f) {
                        gens.push(self.transvection_matrix(&v, a)?);
                    }
                }
            }
            Family::GoPlus | Family::GoMinus | Family::GoOdd => {
                let mut pool = Vec::new();
                for v in Self::vector_pool(&f, n) {
                    if !self.pairing(&v, &v)?.is_zero() {
                        pool.push(self.reflection_matrix(&v)?);
                    }
                }
                gens = self.saturate(gens, pool)?;
            }
            Family::Gu | Family::Su => {
                let q = self.q as u64;
                // λ of multiplicative order q+1, i.e. norm 1
                let lambda = f.pow(f.primitive(), q - 1);
                let conj = |a: FieldElement| f.frobenius(a, f.degree() / 2);
                for i in 0..n.saturating_sub(1) {
                    let mut m = SquareMatrix::identity(&f, n);
                    m.set(i, i, f.zero());
                    m.set(i, i + 1, f.one());
                    m.set(i + 1, i, f.neg(conj(f.one())));
                    m.set(i + 1, i + 1, f.zero());
                    gens.push(m);
                    let mut d = SquareMatrix::identity(&f, n);
                    d.set(i, i, lambda);
                    d.set(i + 1, i + 1, f.inv(lambda)?);
                    gens.push(d);
                }
                let mut first = None;
                let mut pool = Vec::new();
                for v in Self::vector_pool(&f, n) {
                    if self.pairing(&v, &v)?.is_zero() {
                        continue;
                    }
                    let r = self.pseudo_reflection(&v, lambda)?;
                    if self.family == Family::Gu {
                        pool.push(r);
                    } else {
                        // r_v(λ) r_w(λ)⁻¹ has determinant 1
                        let w_inv = match &first {
                            None => {
                                let inv = r.inverse()?;
                                first = Some(inv.clone());
                                inv
                            }
                            Some(inv) => inv.clone(),
                        };
                        pool.push(r.mul(&w_inv));
                    }
                }
                gens = self.saturate(gens, pool)?;
            }
            _ => unreachable!(),
        }
        Ok(gens)
    }

    fn psl2_generators(&self) -> Result<Vec<Permutation>> {
        let f = self.field()?;
        let q = f.order();
        let inf = q;
        // a point is a field element or ∞; maps are given on points
        let make = |map: &dyn Fn(Option<FieldElement>) -> Option<FieldElement>| -> Permutation {
            let img = |p: u32| -> u32 {
                let x = if p == inf { None } else { Some(FieldElement(p)) };
                map(x).map(|e| e.0).unwrap_or(inf)
            };
            Permutation::from_images_unchecked((0..=q).map(img).collect())
        };
        let w = f.primitive();
        let mut gens = vec![
            make(&|x| x.map(|t| f.add(t, f.one()))),
            make(&|x| x.map(|t| f.mul(t, f.mul(w, w)))),
            make(&|x| match x {
                None => Some(f.zero()),
                Some(t) if t.is_zero() => None,
                Some(t) => Some(f.neg(f.inv(t).unwrap())),
            }),
        ];
        let r = f.characteristic();
        for ext in &self.extensions {
            gens.push(match ext {
                Psl2Extension::Diagonal => make(&|x| x.map(|t| f.mul(w, t))),
                Psl2Extension::Frobenius => make(&|x| x.map(|t| f.pow(t, r as u64))),
                Psl2Extension::DiagonalFrobenius => make(&|x| x.map(|t| f.mul(w, f.pow(t, r as u64)))),
            });
        }
        Ok(gens)
    }

    pub fn ambient(&self) -> Result<Ambient> {
        Ok(match self.family {
            Family::Sym | Family::Alt => Ambient::Perm { degree: self.n },
            Family::Psl2 => Ambient::Perm { degree: self.q as usize + 1 },
            Family::File => return Err(GroupError::Unsupported("file ambients come from the file".into())),
            _ => Ambient::Matrix { field: self.field()?, dim: self.n },
        })
    }

    /// Build the group. File blueprints go through the generator-file parser.
    pub fn construct(&self) -> Result<Group> {
        self.validate()?;
        let name = self.to_string();
        match self.family {
            Family::Sym => {
                let n = self.n;
                let mut gens = Vec::new();
                if n >= 2 {
                    gens.push(Permutation::from_cycles(n, &[vec![0, 1]])?);
                }
                if n >= 3 {
                    gens.push(Permutation::from_cycles(n, &[(0..n as u32).collect()])?);
                }
                Group::new(name, self.ambient()?, gens.into_iter().map(GroupElement::Perm).collect())
            }
            Family::Alt => {
                let n = self.n;
                let mut gens = Vec::new();
                if n >= 3 {
                    gens.push(Permutation::from_cycles(n, &[vec![0, 1, 2]])?);
                }
                if n >= 4 {
                    let cycle: Vec<u32> = if n % 2 == 1 { (0..n as u32).collect() } else { (1..n as u32).collect() };
                    gens.push(Permutation::from_cycles(n, &[cycle])?);
                }
                Group::new(name, self.ambient()?, gens.into_iter().map(GroupElement::Perm).collect())
            }
            Family::Psl2 => {
                let gens = self.psl2_generators()?;
                Group::new(name, self.ambient()?, gens.into_iter().map(GroupElement::Perm).collect())
            }
            Family::File => {
                let parsed = crate::catalog::genfile::parse_generator_file(self.path.as_ref().unwrap())
                    .map_err(|e| GroupError::Invalid(e.to_string()))?;
                parsed.group()
            }
            _ => {
                let gens = self
                    .matrix_generators()?
                    .into_iter()
                    .map(GroupElement::matrix)
                    .collect::<Result<Vec<_>>>()?;
                Group::new(name, self.ambient()?, gens)
            }
        }
    }

    /// A non-isotropic vector for the family's form, preferring `e_1`.
    pub fn default_nonisotropic(&self) -> Result<Vector> {
        let f = self.field()?;
        for v in Self::small_vectors(&f, self.n) {
            if !self.pairing(&v, &v)?.is_zero() {
                return Ok(v);
            }
        }
        Err(GroupError::Unsupported("no non-isotropic vector found".into()))
    }

    pub fn special_element(&self, kind: &SpecialKind) -> Result<GroupElement> {
        let fam = self.family;
        let unsupported = || Err(GroupError::Unsupported(format!("{kind} is not available in {self}")));
        match kind {
            SpecialKind::Transposition => {
                if fam != Family::Sym || self.n < 2 {
                    return unsupported();
                }
                Ok(GroupElement::Perm(Permutation::from_cycles(self.n, &[vec![0, 1]])?))
            }
            SpecialKind::FpfInvolution => {
                let ok = match fam {
                    Family::Sym => self.n % 2 == 0 && self.n >= 2,
                    Family::Alt => self.n % 4 == 0 && self.n >= 4,
                    _ => false,
                };
                if !ok {
                    return unsupported();
                }
                let cycles: Vec<Vec<u32>> = (0..self.n as u32 / 2).map(|i| vec![2 * i, 2 * i + 1]).collect();
                Ok(GroupElement::Perm(Permutation::from_cycles(self.n, &cycles)?))
            }
            SpecialKind::Transvection | SpecialKind::LongRootProxy
                if matches!(fam, Family::Gl | Family::Sl) && self.n >= 2 =>
            {
                let f = self.field()?;
                GroupElement::matrix(Self::elementary(&f, self.n, 0, 1, f.one()))
            }
            SpecialKind::Transvection | SpecialKind::LongRootProxy if fam == Family::Sp => {
                let f = self.field()?;
                GroupElement::matrix(self.transvection_matrix(&Self::unit_vector(&f, self.n, 0), f.one())?)
            }
            SpecialKind::LongRootProxy if matches!(fam, Family::GoPlus | Family::GoOdd | Family::GoMinus) => {
                let hyperbolic = match fam {
                    Family::GoPlus => self.n,
                    Family::GoOdd => self.n - 1,
                    _ => self.n - 2,
                };
                if hyperbolic < 4 {
                    return unsupported();
                }
                let f = self.field()?;
                let u = Self::unit_vector(&f, self.n, 0);
                let w = Self::unit_vector(&f, self.n, 1);
                GroupElement::matrix(self.siegel_matrix(&u, &w)?)
            }
            SpecialKind::Reflection(v) => {
                if matches!(fam, Family::Sl | Family::Su | Family::Sp) || !fam.is_matrix() {
                    return unsupported();
                }
                let v = match v {
                    Some(v) => v.clone(),
                    None => self.default_nonisotropic()?,
                };
                if v.len() != self.n {
                    return Err(GroupError::Invalid("reflection vector has wrong length".into()));
                }
                if self.hermitian() {
                    // unitary reflection with eigenvalue -1
                    let f = self.field()?;
                    let vv = self.pairing(&v, &v)?;
                    if vv.is_zero() {
                        return Err(GroupError::Invalid("reflection vector is isotropic".into()));
                    }
                    let coef = f.div(f.from_int(2), vv)?;
                    let mut m = SquareMatrix::identity(&f, self.n);
                    for i in 0..self.n {
                        let e = Self::unit_vector(&f, self.n, i);
                        let c = f.mul(coef, self.pairing(&v, &e)?);
                        for r in 0..self.n {
                            let val = f.sub(m.get(r, i), f.mul(c, v[r]));
                            m.set(r, i, val);
                        }
                    }
                    return GroupElement::matrix(m);
                }
                GroupElement::matrix(self.reflection_matrix(&v)?)
            }
            SpecialKind::Bireflection => {
                if !matches!(fam, Family::Gl | Family::GoPlus | Family::GoMinus | Family::GoOdd) || self.n < 2 {
                    return unsupported();
                }
                let vecs = Self::small_vectors(&self.field()?, self.n);
                for v in &vecs {
                    if self.pairing(v, v)?.is_zero() {
                        continue;
                    }
                    for w in &vecs {
                        if !self.pairing(w, w)?.is_zero() && self.pairing(v, w)?.is_zero() {
                            let m = self.reflection_matrix(v)?.mul(&self.reflection_matrix(w)?);
                            return GroupElement::matrix(m);
                        }
                    }
                }
                unsupported()
            }
            SpecialKind::PmIElement => {
                if !fam.is_matrix() || self.n % 2 != 0 {
                    return unsupported();
                }
                let f = self.field()?;
                let mut m = SquareMatrix::zero(&f, self.n);
                for b in 0..self.n / 2 {
                    m.set(2 * b, 2 * b + 1, f.one());
                    m.set(2 * b + 1, 2 * b, f.neg(f.one()));
                }
                if !self.preserves_form(&m)? {
                    return Err(GroupError::Unsupported(format!(
                        "the block form of {kind} does not preserve the form of {self}"
                    )));
                }
                GroupElement::matrix(m)
            }
            _ => unsupported(),
        }
    }
}

impl fmt::Display for GroupBlueprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Sym | Family::Alt => write!(f, "{}:{}", self.family.tag(), self.n),
            Family::Psl2 => {
                write!(f, "psl2:{}", self.q)?;
                for e in &self.extensions {
                    let tag = match e {
                        Psl2Extension::Diagonal => "diag",
                        Psl2Extension::Frobenius => "frob",
                        Psl2Extension::DiagonalFrobenius => "diagfrob",
                    };
                    write!(f, "+{tag}")?;
                }
                Ok(())
            }
            Family::File => write!(f, "file:{}", self.path.as_ref().map(|p| p.display().to_string()).unwrap_or_default()),
            fam => write!(f, "{}:{}:{}", fam.tag(), self.n, self.q),
        }
    }
}

impl FromStr for GroupBlueprint {
    type Err = GroupError;

    /// `sym:6`, `alt:5`, `gl:4:3`, `go_odd:3:5`, `psl2:9+diagfrob`, `file:path/to/gens`.
    fn from_str(s: &str) -> Result<GroupBlueprint> {
        let (tag, rest) = s
            .split_once(':')
            .ok_or_else(|| GroupError::Unsupported(format!("group spec '{s}' must look like family:params")))?;
        let family: Family = tag.parse()?;
        let num = |x: &str| -> Result<u32> {
            x.trim().parse::<u32>().map_err(|_| GroupError::Unsupported(format!("bad number '{x}' in '{s}'")))
        };
        let bp = match family {
            Family::File => GroupBlueprint::file(rest),
            Family::Sym | Family::Alt => {
                let n = num(rest)? as usize;
                if family == Family::Sym { GroupBlueprint::sym(n) } else { GroupBlueprint::alt(n) }
            }
            Family::Psl2 => {
                let mut parts = rest.split('+');
                let q = num(parts.next().unwrap_or(""))?;
                let exts = parts
                    .map(|p| match p {
                        "diag" => Ok(Psl2Extension::Diagonal),
                        "frob" => Ok(Psl2Extension::Frobenius),
                        "diagfrob" => Ok(Psl2Extension::DiagonalFrobenius),
                        other => Err(GroupError::Unsupported(format!("unknown psl2 extension '{other}'"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupBlueprint::psl2(q, exts)
            }
            _ => {
                let (n, q) = rest
                    .split_once(':')
                    .ok_or_else(|| GroupError::Unsupported(format!("'{s}' needs family:dim:q")))?;
                GroupBlueprint::matrix(family, num(n)? as usize, num(q)?)
            }
        };
        bp.validate()?;
        Ok(bp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecialKind {
    Transposition,
    FpfInvolution,
    Transvection,
    Reflection(Option<Vector>),
    Bireflection,
    PmIElement,
    LongRootProxy,
}

impl fmt::Display for SpecialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpecialKind::Transposition => "transposition",
            SpecialKind::FpfInvolution => "fpf_involution",
            SpecialKind::Transvection => "transvection",
            SpecialKind::Reflection(_) => "reflection",
            SpecialKind::Bireflection => "bireflection",
            SpecialKind::PmIElement => "pm_i_element",
            SpecialKind::LongRootProxy => "long_root_proxy",
        };
        f.write_str(s)
    }
}

impl FromStr for SpecialKind {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<SpecialKind> {
        Ok(match s {
            "transposition" => SpecialKind::Transposition,
            "fpf_involution" | "fpf2" => SpecialKind::FpfInvolution,
            "transvection" => SpecialKind::Transvection,
            "reflection" => SpecialKind::Reflection(None),
            "bireflection" => SpecialKind::Bireflection,
            "pm_i_element" => SpecialKind::PmIElement,
            "long_root_proxy" => SpecialKind::LongRootProxy,
            _ => return Err(GroupError::Unsupported(format!("unknown special element '{s}'"))),
        })
    }
}

/// |GL_n(q)|, |Sp_n(q)|, ... by the standard order formulas, for cross-checks.
pub fn order_formula(bp: &GroupBlueprint) -> Option<num_bigint::BigUint> {
    use num_bigint::BigUint;
    let q = BigUint::from(bp.q);
    let n = bp.n as u32;
    let pw = |e: u32| q.pow(e);
    let one = BigUint::from(1u32);
    let prod = |range: std::ops::RangeInclusive<u32>, f: &dyn Fn(u32) -> BigUint| -> BigUint {
        range.fold(BigUint::from(1u32), |acc, i| acc * f(i))
    };
    let fact = |k: usize| (1..=k as u32).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i));
    Some(match bp.family {
        Family::Sym => fact(bp.n),
        Family::Alt => {
            if bp.n < 2 {
                one
            } else {
                fact(bp.n) / BigUint::from(2u32)
            }
        }
        Family::Gl => prod(0..=n - 1, &|i| pw(n) - pw(i)),
        Family::Sl => prod(0..=n - 1, &|i| pw(n) - pw(i)) / (&q - &one),
        Family::Sp => {
            let m = n / 2;
            pw(m * m) * prod(1..=m, &|i| pw(2 * i) - &one)
        }
        Family::GoOdd => {
            let m = (n - 1) / 2;
            BigUint::from(2u32) * pw(m * m) * prod(1..=m, &|i| pw(2 * i) - &one)
        }
        Family::GoPlus | Family::GoMinus => {
            let m = n / 2;
            let base = BigUint::from(2u32) * pw(m * (m - 1)) * prod(1..=m.saturating_sub(1), &|i| pw(2 * i) - &one);
            if bp.family == Family::GoPlus {
                base * (pw(m) - &one)
            } else {
                base * (pw(m) + &one)
            }
        }
        Family::Gu | Family::Su => {
            let mut acc = pw(n * (n - 1) / 2);
            for i in 1..=n {
                acc *= if i % 2 == 0 { pw(i) - &one } else { pw(i) + &one };
            }
            if bp.family == Family::Su {
                acc / (&q + &one)
            } else {
                acc
            }
        }
        Family::Psl2 => {
            let base = &q * (&q * &q - &one);
            let d = if bp.q % 2 == 0 { 1u32 } else { 2 };
            let k = prime_power(bp.q)?.1;
            let index = match bp.extensions.as_slice() {
                [] => 1,
                [Psl2Extension::Diagonal] => 2,
                [Psl2Extension::Frobenius] => k,
                [Psl2Extension::DiagonalFrobenius] if k == 2 => 2,
                _ => return None,
            };
            base / BigUint::from(d) * BigUint::from(index)
        }
        Family::File => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn check_order(spec: &str) {
        let bp: GroupBlueprint = spec.parse().unwrap();
        let g = bp.construct().unwrap();
        assert_eq!(g.order().unwrap(), order_formula(&bp).unwrap(), "{spec}");
        for x in g.generators() {
            if let Some(m) = x.as_matrix() {
                assert!(bp.preserves_form(m).unwrap(), "{spec}: generator leaves the form");
            }
        }
    }

    #[test]
    fn permutation_families() {
        for s in ["sym:1", "sym:2", "sym:5", "sym:6", "alt:3", "alt:4", "alt:5", "alt:6", "alt:7"] {
            check_order(s);
        }
    }

    #[test]
    fn linear_and_symplectic_families() {
        for s in ["gl:2:3", "sl:2:7", "sl:2:9", "gl:3:2", "sl:3:3", "gl:4:3", "sp:2:5", "sp:4:2", "sp:4:3", "sl:2:4"] {
            check_order(s);
        }
    }

    #[test]
    fn orthogonal_families() {
        for s in ["go_odd:3:3", "go_odd:3:5", "go_odd:3:7", "go_odd:3:9", "go_plus:2:3", "go_minus:2:3", "go_plus:4:3", "go_minus:4:3", "go_odd:5:3"] {
            check_order(s);
        }
    }

    #[test]
    fn unitary_families() {
        for s in ["gu:2:2", "gu:2:3", "gu:3:2", "su:3:2", "su:2:3", "gu:3:3"] {
            check_order(s);
        }
    }

    #[test]
    fn projective_lines() {
        for s in ["psl2:7", "psl2:8", "psl2:11", "psl2:9", "psl2:9+diag", "psl2:9+frob", "psl2:9+diagfrob", "psl2:5"] {
            check_order(s);
        }
    }

    #[test]
    fn sl27_has_order_336() {
        let g = GroupBlueprint::matrix(Family::Sl, 2, 7).construct().unwrap();
        assert_eq!(g.order().unwrap(), BigUint::from(336u32));
    }

    #[test]
    fn special_elements_have_documented_shapes() {
        let sl43: GroupBlueprint = "sl:4:3".parse().unwrap();
        let c = sl43.special_element(&SpecialKind::PmIElement).unwrap();
        let minus_one = c.identity_like().as_matrix().unwrap().scale(sl43.field().unwrap().from_int(-1));
        assert_eq!(c.pow(2).as_matrix().unwrap(), &minus_one);

        let go: GroupBlueprint = "go_odd:3:5".parse().unwrap();
        let f = go.field().unwrap();
        let v = go.default_nonisotropic().unwrap();
        let r = go.special_element(&SpecialKind::Reflection(Some(v.clone()))).unwrap();
        assert!(r.pow(2).is_identity());
        let m = r.as_matrix().unwrap();
        // fixes v-perp pointwise and negates v
        for w in f.elements().flat_map(|a| f.elements().map(move |b| (a, b))) {
            let u = vec![w.0, w.1, f.zero()];
            let cand: Vec<_> = (0..3).map(|i| u[i]).collect();
            if go.pairing(&cand, &v).unwrap().is_zero() {
                assert_eq!(m.apply(&cand), cand);
            }
        }
        let neg_v: Vec<_> = v.iter().map(|&x| f.neg(x)).collect();
        assert_eq!(m.apply(&v), neg_v);

        let s6 = GroupBlueprint::sym(6);
        let fpf = s6.special_element(&SpecialKind::FpfInvolution).unwrap();
        assert_eq!(fpf.as_perm().unwrap().cycle_type(), vec![2, 2, 2]);
        let t = s6.special_element(&SpecialKind::Transvection);
        assert!(t.is_err());

        let gl = GroupBlueprint::matrix(Family::Gl, 3, 5);
        let tv = gl.special_element(&SpecialKind::Transvection).unwrap();
        let diff = tv.as_matrix().unwrap().sub(&SquareMatrix::identity(&gl.field().unwrap(), 3));
        assert_eq!(diff.entries().iter().filter(|e| !e.is_zero()).count(), 1);
    }

    #[test]
    fn isotropic_reflection_is_rejected() {
        let go: GroupBlueprint = "go_plus:2:3".parse().unwrap();
        let f = go.field().unwrap();
        let e1 = vec![f.one(), f.zero()];
        assert!(go.special_element(&SpecialKind::Reflection(Some(e1))).is_err());
    }

    #[test]
    fn siegel_and_symplectic_transvection_preserve_forms() {
        for (s, kind) in [("go_plus:4:3", SpecialKind::LongRootProxy), ("sp:4:3", SpecialKind::Transvection)] {
            let bp: GroupBlueprint = s.parse().unwrap();
            let g = bp.construct().unwrap();
            let x = bp.special_element(&kind).unwrap();
            assert!(bp.preserves_form(x.as_matrix().unwrap()).unwrap());
            assert!(g.contains(&x).unwrap());
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["sym:6", "gl:4:3", "psl2:9+diagfrob", "go_minus:4:5"] {
            let bp: GroupBlueprint = s.parse().unwrap();
            assert_eq!(bp.to_string(), s);
        }
        assert!("sym:13".parse::<GroupBlueprint>().is_err());
        assert!("gl:9:3".parse::<GroupBlueprint>().is_err());
        assert!("go_odd:4:3".parse::<GroupBlueprint>().is_err());
        assert!("foo:3".parse::<GroupBlueprint>().is_err());
    }
}
