//! Finite fields GF(r^k) in a polynomial basis.
//!
//! An element is stored as the integer `c_0 + c_1 r + ... + c_{k-1} r^{k-1}`
//! where `c_0 + c_1 z + ... + c_{k-1} z^{k-1}` is its residue modulo the
//! field's modulus. That integer doubles as the canonical serialization used
//! for hashing and ordering. Multiplication goes through discrete-log tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{GroupError, Result};

/// Largest field order accepted by [`FieldSpec::new`].
pub const MAX_FIELD_ORDER: u32 = 1 << 20;

/// Field orders with a shipped modulus, and that modulus (low to high, monic).
const SHIPPED_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[0, 1]),
    (3, 1, &[0, 1]),
    (4, 2, &[1, 1, 1]),
    (5, 1, &[0, 1]),
    (7, 1, &[0, 1]),
    (8, 3, &[1, 1, 0, 1]),
    (9, 2, &[2, 2, 1]),
    (11, 1, &[0, 1]),
    (13, 1, &[0, 1]),
    (16, 4, &[1, 1, 0, 0, 1]),
    (17, 1, &[0, 1]),
    (19, 1, &[0, 1]),
    (23, 1, &[0, 1]),
    (25, 2, &[2, 4, 1]),
    (27, 3, &[1, 2, 0, 1]),
    (49, 2, &[3, 6, 1]),
    (81, 4, &[2, 0, 0, 2, 1]),
];

/// The orders for which [`FieldSpec::shipped`] succeeds.
pub fn shipped_orders() -> Vec<u32> {
    SHIPPED_MODULI.iter().map(|(q, _, _)| *q).collect()
}

/// A field element, meaningful only together with the [`FieldSpec`] it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FieldSpec {
    characteristic: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    frob: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.characteristic == other.characteristic
            && self.degree == other.degree
            && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor `q = r^k` with `r` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut r = 2;
    while q % r != 0 {
        r += 1;
    }
    if !is_prime(r) {
        return None;
    }
    let (mut m, mut k) = (q, 0);
    while m % r == 0 {
        m /= r;
        k += 1;
    }
    (m == 1).then_some((r, k))
}

// Polynomials over Z_r as coefficient vectors, low degree first.

fn trim(mut p: Vec<u32>) -> Vec<u32> {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

fn poly_rem(a: &[u32], m: &[u32], r: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], r);
    while a.len() > dm && !(a.len() == 1 && a[0] == 0) {
        let da = a.len() - 1;
        let c = (a[da] as u64 * lead_inv as u64 % r as u64) as u32;
        if c != 0 {
            for i in 0..=dm {
                let idx = da - dm + i;
                a[idx] = (a[idx] + r - (c as u64 * m[i] as u64 % r as u64) as u32) % r;
            }
        }
        a.pop();
    }
    trim(a)
}

fn mod_inv(a: u32, r: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % r as u64;
    let mut e = r - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % r as u64;
        }
        base = base * base % r as u64;
        e >>= 1;
    }
    result as u32
}

fn has_root(m: &[u32], r: u32) -> bool {
    (0..r).any(|x| {
        let mut acc = 0u64;
        for &c in m.iter().rev() {
            acc = (acc * x as u64 + c as u64) % r as u64;
        }
        acc == 0
    })
}

/// True when the monic polynomial `m` of degree `k` has no monic factor of
/// degree between 1 and `k/2`.
fn is_irreducible(m: &[u32], r: u32) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    if has_root(m, r) {
        return false;
    }
    for d in 2..=k / 2 {
        let count = (r as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                f.push((x % r as u64) as u32);
                x /= r as u64;
            }
            f.push(1);
            let rem = poly_rem(m, &f, r);
            if rem.len() == 1 && rem[0] == 0 {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Build GF(r^k) from a monic modulus of degree k given low degree first.
    pub fn new(characteristic: u32, modulus: &[u32]) -> Result<FieldSpec> {
        let r = characteristic;
        if !is_prime(r) {
            return Err(GroupError::InvalidModulus(format!("characteristic {r} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(GroupError::InvalidModulus("modulus must have degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= r) {
            return Err(GroupError::InvalidModulus("coefficients must be reduced mod r".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(GroupError::InvalidModulus("modulus must be monic".into()));
        }
        let k = (modulus.len() - 1) as u32;
        let q = (r as u64).pow(k);
        if q > MAX_FIELD_ORDER as u64 {
            return Err(GroupError::UnsupportedField(format!("order {q} exceeds {MAX_FIELD_ORDER}")));
        }
        let q = q as u32;
        if !is_irreducible(modulus, r) {
            return Err(GroupError::InvalidModulus(format!("{modulus:?} is reducible over Z_{r}")));
        }

        let encode = |coeffs: &[u32]| -> u32 {
            coeffs.iter().rev().fold(0u32, |acc, &c| acc * r + c)
        };
        let decode = |mut v: u32| -> Vec<u32> {
            let mut out = vec![0; k as usize];
            for c in out.iter_mut() {
                *c = v % r;
                v /= r;
            }
            out
        };
        let mul_poly = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut prod = vec![0u32; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % r as u64) as u32;
                }
            }
            let mut rem = poly_rem(&prod, modulus, r);
            rem.resize(k as usize, 0);
            rem
        };

        let mut neg = vec![0u32; q as usize];
        for v in 0..q {
            let c: Vec<u32> = decode(v).into_iter().map(|c| (r - c) % r).collect();
            neg[v as usize] = encode(&c);
        }

        // Find a primitive element by brute force.
        let mut exp = vec![0u32; q as usize];
        let mut log = vec![0u32; q as usize];
        let mut found = false;
        for g in 1..q {
            let gc = decode(g);
            let mut cur = decode(1);
            let mut ok = true;
            exp[0] = 1;
            for i in 1..(q - 1) {
                cur = mul_poly(&cur, &gc);
                let e = encode(&cur);
                if e == 1 {
                    ok = false;
                    break;
                }
                exp[i as usize] = e;
            }
            if ok {
                found = true;
                break;
            }
        }
        if !found && q > 2 {
            return Err(GroupError::InvalidModulus("no primitive element".into()));
        }
        if q == 2 {
            exp[0] = 1;
        }
        exp[(q - 1) as usize] = 1;
        for i in 0..(q - 1) {
            log[exp[i as usize] as usize] = i;
        }

        let add = if q <= 1024 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let ac = decode(a);
                for b in 0..q {
                    let bc = decode(b);
                    let s: Vec<u32> = ac.iter().zip(&bc).map(|(x, y)| (x + y) % r).collect();
                    t[(a * q + b) as usize] = encode(&s);
                }
            }
            Some(t)
        } else {
            None
        };

        let mut field = FieldSpec {
            characteristic: r,
            degree: k,
            order: q,
            modulus: modulus.to_vec(),
            exp,
            log,
            add,
            neg,
            frob: Vec::new(),
        };
        let frob = (0..q).map(|v| field.pow(FieldElement(v), r as u64).0).collect();
        field.frob = frob;
        Ok(field)
    }

    /// The field of order `q` from the shipped table of moduli, shared process-wide.
    pub fn shipped(q: u32) -> Result<Arc<FieldSpec>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FieldSpec>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&q) {
            return Ok(Arc::clone(f));
        }
        let &(_, _, modulus) = SHIPPED_MODULI
            .iter()
            .find(|(order, _, _)| *order == q)
            .ok_or_else(|| GroupError::UnsupportedField(format!("no shipped modulus for q = {q}")))?;
        let (r, _) = prime_power(q).expect("shipped orders are prime powers");
        let field = Arc::new(FieldSpec::new(r, modulus)?);
        let mut guard = cache.lock().unwrap();
        Ok(Arc::clone(guard.entry(q).or_insert(field)))
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The residue class of `z`, i.e. a root of the modulus.
    pub fn generator_z(&self) -> FieldElement {
        if self.degree == 1 {
            FieldElement(0)
        } else {
            FieldElement(self.characteristic)
        }
    }

    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> FieldElement {
        FieldElement(self.exp[if self.order > 2 { 1 } else { 0 }])
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.characteristic as i64) as u32)
    }

    /// Element with the given polynomial-basis coefficients (low degree first).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.degree as usize {
            return Err(GroupError::Invalid(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.degree
            )));
        }
        let r = self.characteristic as i64;
        let v = coeffs.iter().rev().fold(0i64, |acc, &c| acc * r + c.rem_euclid(r));
        Ok(FieldElement(v as u32))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0;
        (0..self.degree)
            .map(|_| {
                let c = v % self.characteristic;
                v /= self.characteristic;
                c
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(t) = &self.add {
            return FieldElement(t[(a.0 * self.order + b.0) as usize]);
        }
        if self.degree == 1 {
            return FieldElement((a.0 + b.0) % self.order);
        }
        let r = self.characteristic;
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..self.degree {
            out += ((x % r + y % r) % r) * place;
            x /= r;
            y /= r;
            place *= r;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let n = self.order - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(GroupError::Singular);
        }
        let n = self.order - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement(1);
        }
        if a.0 == 0 {
            return FieldElement(0);
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % n)) % n) as usize])
    }

    /// `a^(r^e)`, the e-th power of the Frobenius automorphism.
    pub fn frobenius(&self, a: FieldElement, e: u32) -> FieldElement {
        let mut x = a;
        for _ in 0..(e % self.degree) {
            x = FieldElement(self.frob[x.0 as usize]);
        }
        x
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FieldElement) -> Result<u64> {
        if a.0 == 0 {
            return Err(GroupError::Singular);
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Ok(n / num_integer::gcd(n, l))
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        a.0 == 0 || self.characteristic == 2 || self.log[a.0 as usize] % 2 == 0
    }

    /// Element of the prime subfield as an integer in `0..r`, if it lies there.
    pub fn to_prime(&self, a: FieldElement) -> Option<u32> {
        (a.0 < self.characteristic).then_some(a.0)
    }

    /// Render as a polynomial in `z` (plain integer in prime fields).
    pub fn format(&self, a: FieldElement) -> String {
        if self.degree == 1 || a.0 < self.characteristic {
            return a.0.to_string();
        }
        let coeffs = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_fields_build() {
        for q in shipped_orders() {
            let f = FieldSpec::shipped(q).unwrap();
            assert_eq!(f.order(), q);
            // every nonzero element is invertible and the primitive element has full order
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            assert_eq!(f.mult_order(f.primitive()).unwrap(), (q - 1) as u64);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // z^2 + 1 = (z + 1)^2 over GF(2)
        assert!(FieldSpec::new(2, &[1, 0, 1]).is_err());
        // z^4 + z^2 + 1 = (z^2 + z + 1)^2 over GF(2): no roots, quadratic factor
        assert!(FieldSpec::new(2, &[1, 0, 1, 0, 1]).is_err());
        assert!(FieldSpec::new(4, &[0, 1]).is_err());
    }

    #[test]
    fn distributive_and_frobenius_is_additive() {
        let f = FieldSpec::shipped(9).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let fa = f.frobenius(a, 1);
                let fb = f.frobenius(b, 1);
                assert_eq!(f.frobenius(f.add(a, b), 1), f.add(fa, fb));
                assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(fa, fb));
                for c in f.elements() {
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
        }
        // frob^k is the identity
        for a in f.elements() {
            assert_eq!(f.frobenius(a, 2), a);
        }
    }

    #[test]
    fn z_is_root_of_modulus() {
        for q in [4u32, 8, 9, 16, 25, 27, 49, 81] {
            let f = FieldSpec::shipped(q).unwrap();
            let z = f.generator_z();
            let mut acc = f.zero();
            for &c in f.modulus().iter().rev() {
                acc = f.add(f.mul(acc, z), f.from_int(c as i64));
            }
            assert!(acc.is_zero(), "q = {q}");
        }
    }

    #[test]
    fn formatting() {
        let f = FieldSpec::shipped(9).unwrap();
        assert_eq!(f.format(f.generator_z()), "z");
        assert_eq!(f.format(f.from_coeffs(&[1, 2]).unwrap()), "2*z+1");
        assert_eq!(f.format(f.from_int(2)), "2");
    }
}
