//! Identities checked element by element: the trace and Laurent computations
//! in `SL_2(q)` and the commutator and inversion identities in any group.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::pairs::{scan, Outcome};
use super::plan::ScanPlan;
use super::verdict::{Status, Verdict, Witness};
use crate::element::{GroupElement, DEFAULT_ORDER_CAP};
use crate::error::{GroupError, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::group::Group;
use crate::matrix::SquareMatrix;

fn odd_field(q: u32) -> Result<Arc<FieldSpec>> {
    if q % 2 == 0 {
        return Err(GroupError::Unsupported(format!("q = {q} must be odd")));
    }
    FieldSpec::shipped(q)
}

fn mat2(f: &Arc<FieldSpec>, a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> SquareMatrix {
    SquareMatrix::from_entries(f, 2, vec![a, b, c, d]).expect("2x2 entries")
}

/// `tr(x y x⁻¹ y⁻¹)` for `x = [[0,1],[−1,t]]`, `y = [[t,1],[−1,0]]`.
pub fn trace_commutator(f: &Arc<FieldSpec>, t: FieldElement) -> FieldElement {
    let (zero, one, m1) = (f.zero(), f.one(), f.neg(f.one()));
    let x = mat2(f, zero, one, m1, t);
    let y = mat2(f, t, one, m1, zero);
    let k = x.mul(&y).mul(&x.inverse().expect("det 1")).mul(&y.inverse().expect("det 1"));
    k.trace()
}

/// Checks `tr(x y x⁻¹ y⁻¹) = t + 3` for every `t ∈ GF(q)`.
pub fn l2q_trace_identity(q: u32) -> Result<Verdict> {
    let f = odd_field(q)?;
    let three = f.from_int(3);
    let mut mismatches = Vec::new();
    for t in f.elements() {
        let tr = trace_commutator(&f, t);
        let want = f.add(t, three);
        if tr != want {
            mismatches.push((t, tr, want));
        }
    }
    let status = if mismatches.is_empty() { Status::Holds } else { Status::Fails };
    let mut v = Verdict::new(format!("l2q-trace q={q}"), status);
    v.count("values_checked", q as u64);
    v.count("mismatches", mismatches.len() as u64);
    // the trace is a polynomial in t of degree at most 2; record it
    let at = |n: i64| trace_commutator(&f, f.from_int(n));
    let c0 = at(0);
    let (p1, m1) = (at(1), at(-1));
    let half = f.inv(f.from_int(2))?;
    let c2 = f.mul(f.sub(f.add(p1, m1), f.add(c0, c0)), half);
    let c1 = f.mul(f.sub(p1, m1), half);
    v.fact("observed_trace", format!("{}*t^2 + {}*t + {}", f.format(c2), f.format(c1), f.format(c0)));
    for (t, tr, want) in mismatches {
        v.witnesses.push(
            Witness::new("trace_mismatch")
                .value("q", q)
                .value("t", f.format(t))
                .value("t_code", t.0)
                .value("trace", f.format(tr))
                .value("expected", f.format(want)),
        );
    }
    Ok(v)
}

/// Coefficients `c_0 .. c_{q−2}` of the polynomial agreeing with
/// `s⁴ · tr[x, x^{g(s)}]` at every `s ≠ 0`, where `g(s) = diag(s, s⁻¹)`.
pub fn laurent_coefficients(x: &SquareMatrix) -> Result<Vec<FieldElement>> {
    let f = x.field();
    let q = f.order() as usize;
    let units: Vec<FieldElement> = f.elements().filter(|e| !e.is_zero()).collect();
    let xi = x.inverse()?;
    let values: Vec<FieldElement> = units
        .iter()
        .map(|&s| -> Result<FieldElement> {
            let g = SquareMatrix::diagonal(f, &[s, f.inv(s)?]);
            let gi = g.inverse()?;
            let xg = gi.mul(x).mul(&g);
            let xgi = gi.mul(&xi).mul(&g);
            let tr = xi.mul(&xgi).mul(x).mul(&xg).trace();
            Ok(f.mul(f.pow(s, 4), tr))
        })
        .collect::<Result<_>>()?;
    // c_k = −Σ_s P(s) s^{−k}, since Σ_{s≠0} s^j is −1 when (q−1) | j and 0 otherwise
    (0..q - 1)
        .map(|k| {
            let mut acc = f.zero();
            for (&s, &val) in units.iter().zip(&values) {
                let sk = f.pow(f.inv(s)?, k as u64);
                acc = f.add(acc, f.mul(val, sk));
            }
            Ok(f.neg(acc))
        })
        .collect()
}

pub fn laurent_degree(x: &SquareMatrix) -> Result<usize> {
    Ok(laurent_coefficients(x)?.iter().rposition(|c| !c.is_zero()).unwrap_or(0))
}

/// A uniform element of `SL_2(q)`.
pub fn random_sl2<R: Rng + ?Sized>(f: &Arc<FieldSpec>, rng: &mut R) -> SquareMatrix {
    let q = f.order();
    loop {
        let e: Vec<FieldElement> = (0..4).map(|_| FieldElement(rng.gen_range(0..q))).collect();
        let m = SquareMatrix::from_entries(f, 2, e).expect("2x2 entries");
        if m.determinant() == f.one() {
            return m;
        }
    }
}

/// `s⁴ · tr[x, x^{g(s)}]` has degree at most 8 for sampled `x ∈ SL_2(q)`.
pub fn l2q_laurent_scan(q: u32, plan: &ScanPlan) -> Result<Verdict> {
    if q < 11 {
        return Err(GroupError::Unsupported(format!("q = {q} is too small: need q ≥ 11 to see degree 9")));
    }
    let f = FieldSpec::shipped(q)?;
    let mut rng = plan.rng();
    let xs: Vec<SquareMatrix> = (0..plan.samples).map(|_| random_sl2(&f, &mut rng)).collect();
    let degrees: Vec<usize> = xs.par_iter().map(laurent_degree).collect::<Result<_>>()?;
    let bad: Vec<usize> = (0..xs.len()).filter(|&i| degrees[i] > 8).collect();
    let mut v = Verdict::new(format!("l2q-laurent q={q}"), if bad.is_empty() { Status::Holds } else { Status::Fails });
    v.sampled = true;
    v.count("samples", xs.len() as u64);
    v.fact("max_degree", degrees.iter().copied().max().unwrap_or(0));
    for i in bad {
        v.witnesses.push(
            Witness::new("laurent_degree_exceeded")
                .ambient(format!("mat 2 over GF({q})"))
                .element("x", xs[i].to_text())
                .value("degree", degrees[i]),
        );
    }
    Ok(v)
}

/// With `g` an involution and `c = [x, (x⁻¹)^g]`: `x⁻¹gx` inverts `c`, and `g` inverts `x c x⁻¹`.
pub fn inversion_holds(x: &GroupElement, g: &GroupElement) -> Result<bool> {
    let c = x.commutator(&x.inverse().conjugate(g)?)?;
    let h = x.inverse().mul(g).mul(x);
    let conj = x.mul(&c).mul(&x.inverse());
    Ok(c.conjugate(&h)? == c.inverse() && conj.conjugate(g)? == conj.inverse())
}

fn random_involution<R: Rng + ?Sized>(group: &Group, rng: &mut R, tries: usize) -> Result<Option<GroupElement>> {
    for _ in 0..tries {
        let r = group.random_element(rng)?;
        let o = r.order(DEFAULT_ORDER_CAP)?;
        if o % 2 == 0 {
            return Ok(Some(r.pow(o / 2)));
        }
    }
    Ok(None)
}

/// Test pairs for the element identities: sampled, or all of `G × J` when exhaustive.
fn test_pairs(group: &Group, plan: &ScanPlan, involutions: bool) -> Result<Vec<(GroupElement, GroupElement)>> {
    if !plan.is_sampled() {
        let els = group.elements()?;
        let ys: Vec<&GroupElement> = if involutions {
            els.elements.iter().filter(|e| !e.is_identity() && e.mul(e).is_identity()).collect()
        } else {
            els.elements.iter().collect()
        };
        return Ok(els.elements.iter().flat_map(|x| ys.iter().map(move |&y| (x.clone(), y.clone()))).collect());
    }
    let mut rng = plan.rng();
    let mut out = Vec::with_capacity(plan.samples);
    for _ in 0..plan.samples {
        let x = group.random_element(&mut rng)?;
        let y = if involutions {
            match random_involution(group, &mut rng, 64)? {
                Some(g) => g,
                None => break,
            }
        } else {
            group.random_element(&mut rng)?
        };
        out.push((x, y));
    }
    Ok(out)
}

fn identity_witness(claim: &str, group: &Group, x: &GroupElement, y: &GroupElement) -> Witness {
    Witness::new(claim)
        .ambient(group.ambient().header_text())
        .element("x", x.to_text())
        .element("y", y.to_text())
        .value("group", group.name())
}

fn identity_verdict(scenario: String, plan: &ScanPlan, scanned: usize, bad: Vec<Box<Witness>>) -> Verdict {
    let mut v = Verdict::new(scenario, if bad.is_empty() { Status::Holds } else { Status::Fails });
    v.sampled = plan.is_sampled();
    v.count("samples", scanned as u64);
    v.witnesses.extend(bad.into_iter().map(|w| *w));
    v
}

/// `[x, (x⁻¹)^g]` is inverted by `x⁻¹gx` for involutions `g`.
pub fn inversion_identity_scan(group: &Group, plan: &ScanPlan) -> Result<Verdict> {
    let pairs = test_pairs(group, plan, true)?;
    if pairs.is_empty() {
        return Ok(Verdict::skipped(format!("identity-scan inversion {}", group.name()), "no involutions found"));
    }
    let (scanned, bad, _) = scan(&pairs, |(x, g)| match inversion_holds(x, g) {
        Ok(true) => Outcome::Fine,
        Ok(false) => Outcome::Bad(Box::new(identity_witness("inversion_identity_broken", group, x, g))),
        Err(e) => Outcome::Unknown(e.to_string()),
    });
    Ok(identity_verdict(format!("identity-scan inversion {}", group.name()), plan, scanned, bad))
}

/// `[x, y][y, x] = 1`.
pub fn commutator_identity_scan(group: &Group, plan: &ScanPlan) -> Result<Verdict> {
    let pairs = test_pairs(group, plan, false)?;
    let (scanned, bad, _) = scan(&pairs, |(x, y)| {
        let ok = x.commutator(y).and_then(|a| Ok(a.mul(&y.commutator(x)?).is_identity()));
        match ok {
            Ok(true) => Outcome::Fine,
            Ok(false) => Outcome::Bad(Box::new(identity_witness("commutator_identity_broken", group, x, y))),
            Err(e) => Outcome::Unknown(e.to_string()),
        }
    });
    Ok(identity_verdict(format!("identity-scan commutator {}", group.name()), plan, scanned, bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::blueprint::GroupBlueprint;

    #[test]
    fn trace_is_four_t_squared_plus_two() {
        // direct expansion: x y x⁻¹ y⁻¹ = [[1, 2t], [2t, 4t² + 1]]
        for q in [3u32, 5, 7, 9, 11, 13] {
            let f = FieldSpec::shipped(q).unwrap();
            for t in f.elements() {
                let want = f.add(f.mul(f.from_int(4), f.mul(t, t)), f.from_int(2));
                assert_eq!(trace_commutator(&f, t), want);
            }
        }
    }

    #[test]
    fn trace_claim_is_checked_faithfully() {
        let v = l2q_trace_identity(7).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert_eq!(v.facts["observed_trace"], "4*t^2 + 0*t + 2");
        assert!(l2q_trace_identity(8).is_err());
    }

    #[test]
    fn laurent_special_cases() {
        let f = FieldSpec::shipped(11).unwrap();
        let diag = SquareMatrix::diagonal(&f, &[f.from_int(3), f.inv(f.from_int(3)).unwrap()]);
        let c = laurent_coefficients(&diag).unwrap();
        // f(s) = 2, so s⁴ f(s) = 2 s⁴
        for (k, ck) in c.iter().enumerate() {
            assert_eq!(*ck, if k == 4 { f.from_int(2) } else { f.zero() });
        }
        let minus = SquareMatrix::diagonal(&f, &[f.from_int(-1), f.from_int(-1)]);
        assert_eq!(laurent_degree(&minus).unwrap(), 4);
        assert!(l2q_laurent_scan(9, &ScanPlan::sampled(1, 0)).is_err());
    }

    #[test]
    fn laurent_bound_holds() {
        let v = l2q_laurent_scan(13, &ScanPlan::sampled(30, 3)).unwrap();
        assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn identities_in_s6_and_gl() {
        let s6 = GroupBlueprint::sym(6).construct().unwrap();
        assert!(inversion_identity_scan(&s6, &ScanPlan::sampled(200, 1)).unwrap().holds());
        assert!(commutator_identity_scan(&s6, &ScanPlan::sampled(200, 1)).unwrap().holds());
        let s4 = GroupBlueprint::sym(4).construct().unwrap();
        assert!(inversion_identity_scan(&s4, &ScanPlan::exhaustive()).unwrap().holds());
        let gl = GroupBlueprint::matrix(crate::catalog::Family::Gl, 3, 5).construct().unwrap();
        assert!(inversion_identity_scan(&gl, &ScanPlan::sampled(100, 2)).unwrap().holds());
    }
}
