//! Character tables of small enumerable groups from their class algebra.
//!
//! Central characters are the common eigenvectors of the class-sum
//! multiplication matrices, computed over a prime field F_p with
//! `p ≡ 1 (mod exponent)` and `p > 2√|G|`. Character values are lifted to
//! cyclotomics from eigenvalue multiplicities along power maps.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::cyclotomic::Cyclotomic;
use super::table::{CharacterTable, ClassInfo};
use crate::catalog::classes::enumerate_classes;
use crate::element::GroupElement;
use crate::error::{GroupError, Result};
use crate::group::Group;

/// Largest group order the generator accepts.
pub const MAX_TABLE_ORDER: u64 = 5000;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1)).unwrap()
}

/// Reduced row echelon basis of the row space; returns rows and pivot columns.
fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let width = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for cc in 0..width {
                    rows[i][cc] = (rows[i][cc] + p - f * rows[r][cc] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Null space of a square matrix (as column vectors).
fn null_space(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let (rows, pivots) = rref(m.to_vec(), p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Split `F_p^k` into common eigenspaces of the commuting matrices `mats`.
fn common_eigenvectors(mats: &[Vec<Vec<u64>>], k: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    let identity: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity];
    for m in mats {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let (basis, pivots) = rref(space, p);
            let d = basis.len();
            // restriction R with M b_r = Σ_s R[s][r] b_s, read off pivot coordinates
            let mut r = vec![vec![0u64; d]; d];
            for (col, b) in basis.iter().enumerate() {
                let mb: Vec<u64> = (0..k).map(|j| (0..k).map(|l| m[j][l] * b[l] % p).sum::<u64>() % p).collect();
                for (s, &pc) in pivots.iter().enumerate() {
                    r[s][col] = mb[pc];
                }
            }
            let mut found = 0;
            for lambda in 0..p {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|i| (0..d).map(|j| if i == j { (r[i][j] + p - lambda) % p } else { r[i][j] }).collect())
                    .collect();
                let ns = null_space(&shifted, p);
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                let sub: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|c| (0..k).map(|j| (0..d).map(|s| c[s] * basis[s][j] % p).sum::<u64>() % p).collect())
                    .collect();
                next.push(sub);
                if found == d {
                    break;
                }
            }
            if found != d {
                return Err(GroupError::Invalid("class matrix is not diagonalizable over the chosen prime".into()));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(GroupError::Invalid("class matrices do not separate the characters".into()));
    }
    Ok(spaces.into_iter().map(|mut s| s.remove(0)).collect())
}

/// Compute the character table of an enumerable group of order at most [`MAX_TABLE_ORDER`].
pub fn character_table(group: &Group, name: &str) -> Result<CharacterTable> {
    let order = group.order_u64()?;
    if order > MAX_TABLE_ORDER {
        return Err(GroupError::overflow("group order for table generation", MAX_TABLE_ORDER));
    }
    let list = enumerate_classes(group)?;
    let store = group.elements()?;
    let k = list.len();
    let class_of_el: Vec<usize> = store.elements.iter().map(|x| list.class_of(x)).collect::<Result<_>>()?;
    let reps: Vec<&GroupElement> = list.classes.iter().map(|c| &c.representative).collect();
    let sizes: Vec<u64> = list.classes.iter().map(|c| c.size.to_u64().unwrap()).collect();
    let orders: Vec<u64> = list.classes.iter().map(|c| c.element_order).collect();
    let exponent = orders.iter().fold(1u64, |a, &o| a.lcm(&o));

    let bound = 2.0 * (order as f64).sqrt();
    let p = (1..).map(|m| m * exponent + 1).find(|&p| is_prime(p) && p as f64 > bound).unwrap();

    // a[i][j][l] = #{x ∈ C_i : x⁻¹ z_l ∈ C_j}
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for (l, z) in reps.iter().enumerate() {
        for (xi, x) in store.elements.iter().enumerate() {
            let y = x.inverse().mul(z);
            let j = class_of_el[store.position(&y).unwrap()];
            a[class_of_el[xi]][j][l] += 1;
        }
    }
    let mats: Vec<Vec<Vec<u64>>> = (1..k).map(|i| (0..k).map(|j| (0..k).map(|l| a[i][j][l] % p).collect()).collect()).collect();
    let vectors = common_eigenvectors(&mats, k, p)?;

    let inverse: Vec<usize> = reps.iter().map(|r| list.class_of(&r.inverse())).collect::<Result<_>>()?;
    let root = primitive_root(p);
    let mut rows: Vec<(i64, bool, Vec<u64>, Vec<Cyclotomic>)> = Vec::new();
    let power_class = |j: usize, t: u64| -> Result<usize> { list.class_of(&reps[j].pow(t)) };
    let mut power_classes: Vec<Vec<usize>> = Vec::with_capacity(k);
    for j in 0..k {
        power_classes.push((0..orders[j]).map(|t| power_class(j, t)).collect::<Result<_>>()?);
    }
    for v in vectors {
        let w0inv = inv_mod(v[0], p);
        let w: Vec<u64> = v.iter().map(|&x| x * w0inv % p).collect();
        let s = (0..k).fold(0u64, |acc, j| (acc + w[j] * w[inverse[j]] % p * inv_mod(sizes[j] % p, p)) % p);
        let target = order % p * inv_mod(s, p) % p;
        let d = (1..=(order as f64).sqrt() as u64 + 1)
            .find(|&d| d * d % p == target && d * d <= order)
            .ok_or_else(|| GroupError::Invalid("no integer degree matches the central character".into()))?;
        let chi_p: Vec<u64> = (0..k).map(|j| w[j] * (d % p) % p * inv_mod(sizes[j] % p, p) % p).collect();
        let mut values = Vec::with_capacity(k);
        for j in 0..k {
            let o = orders[j];
            let zhat = pow_mod(root, (p - 1) / o, p);
            let oinv = inv_mod(o % p, p);
            let mut coeffs = Vec::with_capacity(o as usize);
            for l in 0..o {
                let mut acc = 0u64;
                for t in 0..o {
                    let e = (o - (l * t) % o) % o;
                    acc = (acc + chi_p[power_classes[j][t as usize]] * pow_mod(zhat, e, p)) % p;
                }
                let m = acc * oinv % p;
                if m > d {
                    return Err(GroupError::Invalid("eigenvalue multiplicity exceeds the degree".into()));
                }
                coeffs.push(m as i64);
            }
            values.push(Cyclotomic::new(o as u32, coeffs).unwrap().simplified());
        }
        let trivial = chi_p.iter().all(|&x| x == 1);
        rows.push((d as i64, !trivial, chi_p, values));
    }
    rows.sort_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)));

    let primes: Vec<u64> = (2..=order).filter(|&q| order % q == 0 && is_prime(q)).collect();
    let classes = (0..k)
        .map(|j| {
            let mut powermap = BTreeMap::new();
            for &q in &primes {
                powermap.insert(q, list.class_of(&reps[j].pow(q))?);
            }
            Ok(ClassInfo {
                size: sizes[j],
                element_order: orders[j],
                powermap,
                label: Some(list.classes[j].label.clone()),
                representative: Some(reps[j].to_text()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let table = CharacterTable {
        name: name.to_string(),
        order,
        classes,
        irreducibles: rows.into_iter().map(|r| r.3).collect(),
    };
    table.validate().map_err(|e| GroupError::Invalid(format!("generated table failed validation: {e}")))?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::blueprint::GroupBlueprint;

    #[test]
    fn a5_table_matches_textbook_values() {
        let g = GroupBlueprint::alt(5).construct().unwrap();
        let t = character_table(&g, "A5").unwrap();
        assert_eq!(t.degrees(), vec![1, 3, 3, 4, 5]);
        // columns 1a 2a 3a 5a 5b; textbook rows up to ordering of the 3-dimensional pair
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let expected_3 = [3.0, -1.0, 0.0];
        for row in &t.irreducibles[1..3] {
            for (c, e) in expected_3.iter().enumerate() {
                assert!((row[c].eval().re - e).abs() < 1e-9);
            }
            let five: Vec<f64> = row[3..].iter().map(|v| v.eval().re).collect();
            let mut sorted = five.clone();
            sorted.sort_by(f64::total_cmp);
            assert!((sorted[0] - (1.0 - golden)).abs() < 1e-9);
            assert!((sorted[1] - golden).abs() < 1e-9);
        }
        let four: Vec<i64> = t.irreducibles[3].iter().map(|v| v.as_integer().unwrap()).collect();
        assert_eq!(four, vec![4, 0, 1, -1, -1]);
        let five: Vec<i64> = t.irreducibles[4].iter().map(|v| v.as_integer().unwrap()).collect();
        assert_eq!(five, vec![5, 1, -1, 0, 0]);
    }

    #[test]
    fn cyclic_group_needs_roots_of_unity() {
        let x = crate::perm::Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let g = Group::generated_by(&[GroupElement::Perm(x)]).unwrap();
        let t = character_table(&g, "Z5").unwrap();
        assert_eq!(t.class_count(), 5);
        assert_eq!(t.degrees(), vec![1; 5]);
        assert!(t.irreducibles[1][1].as_integer().is_none());
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(primitive_root(7), 3);
        assert!(is_prime(61) && !is_prime(91));
        let m = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(null_space(&m, 7), vec![vec![5, 1]]);
    }
}
