//! Character tables and class multiplication coefficients.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::cyclotomic::Cyclotomic;
use crate::group::is_power_of;
use crate::verify::verdict::{Status, Verdict, Witness};

pub const TABLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed table: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid table: {0}")]
    Invalid(String),
    #[error("orthogonality violated for rows {0} and {1}: inner product {2}")]
    Orthogonality(usize, usize, String),
    #[error("class multiplication coefficient {value} is not within {TABLE_TOLERANCE} of an integer")]
    NotIntegral { value: f64 },
    #[error("class index {0} out of range")]
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub size: u64,
    pub element_order: u64,
    #[serde(default)]
    pub powermap: BTreeMap<u64, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub name: String,
    pub order: u64,
    pub classes: Vec<ClassInfo>,
    pub irreducibles: Vec<Vec<Cyclotomic>>,
}

/// Count of pairs with a rounding residue, from Burnside's formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassMult {
    pub count: u64,
    pub residue: f64,
}

pub fn parse_table(path: impl AsRef<Path>) -> Result<CharacterTable, TableError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
    parse_table_text(&text)
}

pub fn parse_table_text(text: &str) -> Result<CharacterTable, TableError> {
    let t: CharacterTable = serde_json::from_str(text)?;
    t.validate()?;
    Ok(t)
}

/// Look for `<name>.json` in `BFL_TABLE_DIR`, then `./tables`, then the source tree.
pub fn find_table(name: &str) -> Option<PathBuf> {
    let file = if name.ends_with(".json") { name.to_string() } else { format!("{name}.json") };
    let direct = PathBuf::from(&file);
    if direct.is_file() {
        return Some(direct);
    }
    let mut dirs: Vec<PathBuf> = Vec::new();
    if let Ok(d) = std::env::var("BFL_TABLE_DIR") {
        dirs.push(PathBuf::from(d));
    }
    dirs.push(PathBuf::from("tables"));
    dirs.push(shipped_table_dir());
    dirs.into_iter().map(|d| d.join(&file)).find(|p| p.is_file())
}

pub fn shipped_table_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../tables")
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.irreducibles.iter().map(|r| r[0].as_integer().unwrap_or(0)).collect()
    }

    fn values(&self) -> Vec<Vec<Complex64>> {
        self.irreducibles.iter().map(|r| r.iter().map(Cyclotomic::eval).collect()).collect()
    }

    pub fn validate(&self) -> Result<(), TableError> {
        let k = self.classes.len();
        let bad = |m: String| Err(TableError::Invalid(m));
        if k == 0 {
            return bad("no classes".into());
        }
        if self.irreducibles.len() != k {
            return bad(format!("{} characters for {k} classes", self.irreducibles.len()));
        }
        if self.irreducibles.iter().any(|r| r.len() != k) {
            return bad("character row of wrong length".into());
        }
        if self.classes[0].size != 1 || self.classes[0].element_order != 1 {
            return bad("class 0 must be the identity class".into());
        }
        let mut total = 0u64;
        for (i, c) in self.classes.iter().enumerate() {
            if c.size == 0 || self.order % c.size != 0 {
                return bad(format!("class {i} size {} does not divide {}", c.size, self.order));
            }
            if c.element_order == 0 || self.order % c.element_order != 0 {
                return bad(format!("class {i} element order {} does not divide {}", c.element_order, self.order));
            }
            for (&p, &img) in &c.powermap {
                if img >= k || p < 2 {
                    return bad(format!("class {i} power map entry {p} -> {img} out of range"));
                }
            }
            total += c.size;
        }
        if total != self.order {
            return bad(format!("class sizes sum to {total}, not {}", self.order));
        }
        let mut sum_sq = 0i64;
        for (i, row) in self.irreducibles.iter().enumerate() {
            match row[0].as_integer() {
                Some(d) if d > 0 => sum_sq += d * d,
                _ => return bad(format!("character {i} has no positive integer degree")),
            }
        }
        if sum_sq as u64 != self.order {
            return bad(format!("squared degrees sum to {sum_sq}, not {}", self.order));
        }
        let vals = self.values();
        let g = self.order as f64;
        for i in 0..k {
            for j in 0..k {
                let ip: Complex64 = (0..k).map(|c| vals[i][c] * vals[j][c].conj() * self.classes[c].size as f64).sum::<Complex64>() / g;
                let want = if i == j { 1.0 } else { 0.0 };
                if (ip.re - want).abs() > TABLE_TOLERANCE || ip.im.abs() > TABLE_TOLERANCE {
                    return Err(TableError::Orthogonality(i, j, format!("{:.6}{:+.6}i", ip.re, ip.im)));
                }
            }
        }
        Ok(())
    }

    fn check(&self, i: usize) -> Result<(), TableError> {
        if i >= self.classes.len() {
            return Err(TableError::Index(i));
        }
        Ok(())
    }

    /// `Σ_χ χ(a) conj(χ(b))` for columns `a`, `b`.
    pub fn column_product(&self, a: usize, b: usize) -> Complex64 {
        self.irreducibles.iter().map(|r| r[a].eval() * r[b].eval().conj()).sum()
    }

    /// The class of inverses, read off complex-conjugate columns.
    pub fn inverse_class(&self, j: usize) -> Result<usize, TableError> {
        self.check(j)?;
        let target: Vec<Complex64> = self.irreducibles.iter().map(|r| r[j].eval().conj()).collect();
        (0..self.classes.len())
            .find(|&c| self.irreducibles.iter().zip(&target).all(|(r, t)| (r[c].eval() - t).norm() < TABLE_TOLERANCE))
            .ok_or_else(|| TableError::Invalid(format!("no column conjugate to column {j}")))
    }

    /// Number of pairs `(c, d) ∈ C_i × C_j` with `cd` equal to a fixed element of class `e`.
    pub fn class_mult_count(&self, i: usize, j: usize, e: usize) -> Result<ClassMult, TableError> {
        self.check(i)?;
        self.check(j)?;
        self.check(e)?;
        let s: Complex64 = self
            .irreducibles
            .iter()
            .map(|r| r[i].eval() * r[j].eval() * r[e].eval().conj() / r[0].eval())
            .sum();
        let scale = self.classes[i].size as f64 * self.classes[j].size as f64 / self.order as f64;
        let v = s * scale;
        let rounded = v.re.round();
        let residue = (v.re - rounded).abs().max(v.im.abs());
        if residue >= TABLE_TOLERANCE || rounded < 0.0 {
            return Err(TableError::NotIntegral { value: v.re });
        }
        Ok(ClassMult { count: rounded as u64, residue })
    }

    /// Classes hit by `C_i · C_j`, with their per-element multiplicities.
    pub fn product_support(&self, i: usize, j: usize) -> Result<Vec<(usize, u64)>, TableError> {
        let mut out = Vec::new();
        for e in 0..self.classes.len() {
            let m = self.class_mult_count(i, j, e)?;
            if m.count > 0 {
                out.push((e, m.count));
            }
        }
        Ok(out)
    }

    fn class_name(&self, i: usize) -> String {
        self.classes[i].label.clone().unwrap_or_else(|| format!("#{i}"))
    }

    /// Class-level test: every class met by `C_i · C_j` has `p`-power order.
    ///
    /// Necessary for `(C_i, C_j)` to be a Baer–Fischer pair; it is also
    /// sufficient when `p = 2` and both classes consist of involutions.
    pub fn bf_pair_table(&self, i: usize, j: usize, p: u64) -> Result<Verdict, TableError> {
        let support = self.product_support(i, j)?;
        let offending: Vec<usize> = support
            .iter()
            .map(|&(e, _)| e)
            .filter(|&e| !is_power_of(&self.classes[e].element_order.into(), p))
            .collect();
        let status = if offending.is_empty() { Status::Holds } else { Status::Fails };
        let mut v = Verdict::new(format!("bf-pair-table {} {}x{} p={p}", self.name, self.class_name(i), self.class_name(j)), status);
        v.count("classes_in_support", support.len() as u64);
        v.fact(
            "support",
            support.iter().map(|&(e, m)| format!("{}:{m}", self.class_name(e))).collect::<Vec<_>>(),
        );
        let involutions = self.classes[i].element_order == 2 && self.classes[j].element_order == 2;
        if p == 2 && involutions {
            v.note("both classes are involutions: the table test is equivalent to the pair condition");
        } else {
            v.note("necessary-only: p-power product orders do not by themselves make <c,d> a p-group");
        }
        for e in offending {
            v.witnesses.push(
                Witness::new("product_class_not_p_power")
                    .value("table", &self.name)
                    .value("p", p)
                    .value("i", i)
                    .value("j", j)
                    .value("class", e)
                    .value("element_order", self.classes[e].element_order),
            );
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial() -> CharacterTable {
        CharacterTable {
            name: "1".into(),
            order: 1,
            classes: vec![ClassInfo { size: 1, element_order: 1, powermap: BTreeMap::new(), label: None, representative: None }],
            irreducibles: vec![vec![Cyclotomic::integer(1)]],
        }
    }

    #[test]
    fn trivial_table_validates() {
        let t = trivial();
        t.validate().unwrap();
        assert_eq!(t.class_mult_count(0, 0, 0).unwrap().count, 1);
    }

    #[test]
    fn z3_table_has_complex_values() {
        let w = Cyclotomic::new(3, vec![0, 1]).unwrap();
        let w2 = Cyclotomic::new(3, vec![0, 0, 1]).unwrap();
        let one = Cyclotomic::integer(1);
        let info = |o| ClassInfo { size: 1, element_order: o, powermap: BTreeMap::new(), label: None, representative: None };
        let t = CharacterTable {
            name: "Z3".into(),
            order: 3,
            classes: vec![info(1), info(3), info(3)],
            irreducibles: vec![
                vec![one.clone(), one.clone(), one.clone()],
                vec![one.clone(), w.clone(), w2.clone()],
                vec![one, w2, w],
            ],
        };
        t.validate().unwrap();
        assert_eq!(t.inverse_class(1).unwrap(), 2);
        assert_eq!(t.product_support(1, 1).unwrap(), vec![(2, 1)]);
    }

    #[test]
    fn corrupted_value_is_rejected() {
        let mut t = trivial();
        t.validate().unwrap();
        t.irreducibles[0][0] = Cyclotomic::integer(2);
        assert!(t.validate().is_err());
    }
}
