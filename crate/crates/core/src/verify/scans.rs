//! Named instance scans: involution classes of `S_n`, reflections in `GO_3(q)`,
//! and the `pm_i` element against a reflection in `GL_4(3)`.

use super::pairs::{bf_pair_direct, conjugates, closure_order};
use super::plan::ScanPlan;
use super::verdict::{Status, Verdict, Witness};
use crate::catalog::blueprint::{Family, GroupBlueprint, SpecialKind};
use crate::catalog::classes::enumerate_classes;
use crate::element::GroupElement;
use crate::error::{GroupError, Result};
use crate::field::FieldElement;
use crate::group::is_power_of;

fn cycle_type_name(x: &GroupElement) -> String {
    let p = x.as_perm().expect("permutation");
    let twos = p.cycle_type().iter().filter(|&&l| l == 2).count();
    if twos * 2 == p.degree() {
        "fpf".into()
    } else if twos == 1 {
        "transposition".into()
    } else {
        format!("2^{twos}")
    }
}

/// Every unordered pair of involution classes of `S_n`; the pairs that hold
/// must be exactly {fixed-point-free involution, transposition}.
pub fn symmetric_bf_scan(n: usize, plan: Option<ScanPlan>) -> Result<Verdict> {
    if n % 2 == 1 || !(6..=10).contains(&n) {
        return Err(GroupError::Unsupported(format!("n = {n}: need n even with 6 ≤ n ≤ 10")));
    }
    let plan = plan.unwrap_or(if n <= 8 { ScanPlan::exhaustive() } else { ScanPlan::default() });
    let g = GroupBlueprint::sym(n).construct()?;
    let list = enumerate_classes(&g)?;
    let inv: Vec<usize> = (0..list.len()).filter(|&i| list.classes[i].element_order == 2).collect();
    let mut holding = Vec::new();
    let mut v = Verdict::new(format!("scan-sym n={n}"), Status::Holds);
    v.sampled = plan.is_sampled();
    let mut indeterminate = false;
    for (a, &i) in inv.iter().enumerate() {
        for &j in &inv[a..] {
            let c = &list.classes[i].representative;
            let d = &list.classes[j].representative;
            let pair = bf_pair_direct(&g, c, d, 2, &plan)?;
            v.count("pairs_scanned", pair.counters.get("pairs_scanned").copied().unwrap_or(0));
            v.count("class_pairs", 1);
            let name = format!("{}x{}", list.classes[i].label, list.classes[j].label);
            match pair.status {
                Status::Holds => {
                    let mut kinds = [cycle_type_name(c), cycle_type_name(d)];
                    kinds.sort();
                    holding.push((name, kinds));
                }
                Status::Indeterminate => indeterminate = true,
                _ => v.witnesses.extend(pair.witnesses.into_iter().take(1)),
            }
        }
    }
    let expected = ["fpf".to_string(), "transposition".to_string()];
    let exact = holding.len() == 1 && holding[0].1 == expected;
    v.status = if exact {
        Status::Holds
    } else if indeterminate {
        Status::Indeterminate
    } else {
        Status::Fails
    };
    v.fact("holding_pairs", holding.iter().map(|(n, k)| format!("{n} ({}, {})", k[0], k[1])).collect::<Vec<_>>());
    if v.status == Status::Fails {
        v.witnesses.insert(
            0,
            Witness::new("holding_set_mismatch")
                .value("n", n)
                .value("holding", holding.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>().join(";")),
        );
    }
    Ok(v)
}

fn is_square(f: &crate::field::FieldSpec, a: FieldElement) -> bool {
    a.is_zero() || f.pow(a, (f.order() as u64 - 1) / 2) == f.one()
}

/// Reflections `r_u`, `r_w` of `GO_3(q)` with `(u,u)` a square and `(w,w)` not.
pub fn o3_reflections(q: u32) -> Result<(crate::group::Group, GroupElement, GroupElement)> {
    let bp = GroupBlueprint::matrix(Family::GoOdd, 3, q);
    let f = bp.field()?;
    let g = bp.construct()?;
    let mut square = None;
    let mut nonsquare = None;
    for v in GroupBlueprint::small_vectors(&f, 3) {
        let n = bp.pairing(&v, &v)?;
        if n.is_zero() {
            continue;
        }
        let slot = if is_square(&f, n) { &mut square } else { &mut nonsquare };
        if slot.is_none() {
            *slot = Some(v);
        }
    }
    let (u, w) = square.zip(nonsquare).ok_or_else(|| GroupError::Invalid("missing reflection type".into()))?;
    let x = bp.special_element(&SpecialKind::Reflection(Some(u)))?;
    let y = bp.special_element(&SpecialKind::Reflection(Some(w)))?;
    Ok((g, x, y))
}

/// Non-conjugate reflections of `GO_3(q)` form a 2-pair exactly when `q = 3`.
pub fn reflections_o3_scan(q: u32) -> Result<Verdict> {
    if ![3, 5, 7, 9].contains(&q) {
        return Err(GroupError::Unsupported(format!("q = {q}: expected 3, 5, 7 or 9")));
    }
    let (g, x, y) = o3_reflections(q)?;
    let mut v = bf_pair_direct(&g, &x, &y, 2, &ScanPlan::exhaustive())?;
    v.scenario = format!("scan-o3 q={q}");
    let expected = if q == 3 { Status::Holds } else { Status::Fails };
    v.fact("matches_dichotomy", v.status == expected);
    v.fact("group_order", g.order()?.to_string());
    Ok(v)
}

/// In `GL_4(3)`, `⟨c, d^g⟩` is a 2-group for `c = pm_i` and `d` a reflection.
///
/// A second probe with `d′ = diag(−1,−1,1,1)` is reported as an observation only.
pub fn sl2n3_scan(n: usize, plan: &ScanPlan) -> Result<Verdict> {
    if n != 2 {
        return Err(GroupError::Unsupported(format!("n = {n}: only dimension 4 is supported")));
    }
    let bp = GroupBlueprint::matrix(Family::Gl, 2 * n, 3);
    let g = bp.construct()?;
    let c = bp.special_element(&SpecialKind::PmIElement)?;
    let d = bp.special_element(&SpecialKind::Reflection(None))?;
    let mut v = bf_pair_direct(&g, &c, &d, 2, plan)?;
    v.scenario = format!("scan-sl2n3 n={n}");
    let ident = closure_order(&[c.clone(), d.clone()])?;
    v.fact("identity_conjugate_order", ident.to_string());

    let f = bp.field()?;
    let m1 = f.neg(f.one());
    let d2 = GroupElement::matrix(crate::matrix::SquareMatrix::diagonal(&f, &[m1, m1, f.one(), f.one()]))?;
    let probe = ScanPlan { samples: plan.samples.min(200), ..ScanPlan::sampled(plan.samples, plan.seed ^ 0x5EED) };
    let mut hit = None;
    for d3 in conjugates(&g, &d2, &probe)? {
        let order = closure_order(&[c.clone(), d3.clone()])?;
        if !is_power_of(&order, 2) {
            hit = Some((d3, order));
            break;
        }
    }
    match hit {
        Some((d3, order)) => {
            v.fact("perturbation_probe", "non-2-group found");
            v.note(format!("observation: diag(-1,-1,1,1) conjugate {} gives a closure of order {order}", d3.to_text()));
        }
        None => {
            v.fact("perturbation_probe", "none found");
            v.note("observation: the diag(-1,-1,1,1) probe found no non-2-group closure");
        }
    }
    Ok(v)
}
