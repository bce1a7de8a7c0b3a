//! Re-check a serialized witness from its own contents.

use std::str::FromStr;

use super::identities::{inversion_holds, laurent_degree, trace_commutator};
use super::scans::symmetric_bf_scan;
use super::verdict::{Status, Witness};
use crate::catalog::blueprint::GroupBlueprint;
use crate::catalog::classes::{enumerate_classes, is_p_element};
use crate::catalog::genfile::{parse_generator_text, GeneratorFile};
use crate::class_algebra::table::{find_table, parse_table};
use crate::element::GroupElement;
use crate::error::{GroupError, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::group::is_power_of;
use crate::pgroup::{commutator_spaces_direct, fixed_dim, wreath_section_detect, ModuleAction, SmallGroup, Tier};

use super::pairs::{closure_order, SECTION_CLOSURE_CAP};

fn invalid(msg: impl Into<String>) -> GroupError {
    GroupError::Invalid(msg.into())
}

fn parse_elements(w: &Witness) -> Result<GeneratorFile> {
    let header = w.ambient.as_ref().ok_or_else(|| invalid("witness has no ambient"))?;
    let mut text = format!("group W {header}\n");
    for (name, e) in &w.elements {
        text.push_str(&format!("{name} = {e}\n"));
    }
    parse_generator_text(&text).map_err(|e| invalid(format!("witness elements: {e}")))
}

fn element<'a>(gf: &'a GeneratorFile, name: &str) -> Result<&'a GroupElement> {
    gf.get(name).ok_or_else(|| invalid(format!("witness lacks element {name}")))
}

fn value<T: FromStr>(w: &Witness, key: &str) -> Result<T> {
    w.values
        .get(key)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| invalid(format!("witness lacks a valid value '{key}'")))
}

fn matrices(gf: &GeneratorFile) -> Result<Vec<crate::matrix::SquareMatrix>> {
    gf.elements
        .iter()
        .map(|(_, e)| e.as_matrix().cloned().ok_or_else(|| invalid("expected matrices")))
        .collect()
}

/// Whether the witness still demonstrates its claim.
pub fn replay_witness(w: &Witness) -> Result<bool> {
    match w.claim.as_str() {
        "closure_not_p_group" => {
            let gf = parse_elements(w)?;
            let n = closure_order(&[element(&gf, "c")?.clone(), element(&gf, "d")?.clone()])?;
            Ok(!is_power_of(&n, value(w, "p")?) && n.to_string() == w.values["order"])
        }
        "wreath_section_found" => {
            let gf = parse_elements(w)?;
            let c = element(&gf, "c")?;
            let s = SmallGroup::from_generators(c.identity_like(), &[c.clone(), element(&gf, "d")?.clone()], SECTION_CLOSURE_CAP)?;
            Ok(wreath_section_detect(&s, value(w, "p")?, Tier::Full)?.found)
        }
        "commutator_outside_set" => {
            let gf = parse_elements(w)?;
            let bp = GroupBlueprint::from_str(&w.values["group"])?;
            let g = bp.construct()?;
            let list = enumerate_classes(&g)?;
            let labels: Vec<&str> = w.values["set"].split(',').collect();
            let (c, d) = (element(&gf, "c")?, element(&gf, "d")?);
            let in_set = |x: &GroupElement| -> Result<bool> { Ok(labels.contains(&list.classes[list.class_of(x)?].label.as_str())) };
            let k = c.commutator(d)?;
            Ok(in_set(c)? && in_set(d)? && !k.is_identity() && !in_set(&k)?)
        }
        "product_not_p_element" => {
            let gf = parse_elements(w)?;
            let x = element(&gf, "c")?.mul(&element(&gf, "d")?.inverse());
            Ok(!is_p_element(&x, value(w, "p")?)?)
        }
        "trace_mismatch" => {
            let f = FieldSpec::shipped(value(w, "q")?)?;
            let t = FieldElement(value(w, "t_code")?);
            Ok(trace_commutator(&f, t) != f.add(t, f.from_int(3)))
        }
        "laurent_degree_exceeded" => {
            let gf = parse_elements(w)?;
            let x = element(&gf, "x")?.as_matrix().ok_or_else(|| invalid("x must be a matrix"))?;
            Ok(laurent_degree(x)? > 8)
        }
        "inversion_identity_broken" => {
            let gf = parse_elements(w)?;
            Ok(!inversion_holds(element(&gf, "x")?, element(&gf, "y")?)?)
        }
        "commutator_identity_broken" => {
            let gf = parse_elements(w)?;
            let (x, y) = (element(&gf, "x")?, element(&gf, "y")?);
            Ok(!x.commutator(y)?.mul(&y.commutator(x)?).is_identity())
        }
        "holding_set_mismatch" => Ok(symmetric_bf_scan(value(w, "n")?, None)?.status == Status::Fails),
        "fixed_space_bound_violated" | "fixed_space_equality_missing" => {
            let module = ModuleAction::new(matrices(&parse_elements(w)?)?)?;
            let p: usize = value(w, "p")?;
            let dims: Vec<usize> = module.matrices.iter().map(fixed_dim).collect();
            Ok(if w.claim == "fixed_space_bound_violated" {
                dims.iter().all(|&f| f * p > module.dim)
            } else {
                dims.iter().all(|&f| f * p != module.dim)
            })
        }
        "direct_sum_without_section" => {
            let module = ModuleAction::new(matrices(&parse_elements(w)?)?)?;
            let g = module.image_group(SECTION_CLOSURE_CAP)?;
            let s = wreath_section_detect(&g, value(w, "p")?, Tier::Full)?;
            Ok(commutator_spaces_direct(&module) && !s.found && s.tier == Tier::Full)
        }
        "product_class_not_p_power" => {
            let name = &w.values["table"];
            let path = find_table(name).ok_or_else(|| invalid(format!("table {name} not found")))?;
            let t = parse_table(path).map_err(|e| invalid(e.to_string()))?;
            let (i, j, e): (usize, usize, usize) = (value(w, "i")?, value(w, "j")?, value(w, "class")?);
            let m = t.class_mult_count(i, j, e).map_err(|e| invalid(e.to_string()))?;
            Ok(m.count > 0 && !is_power_of(&t.classes[e].element_order.into(), value(w, "p")?))
        }
        other => Err(invalid(format!("unknown witness claim '{other}'"))),
    }
}
