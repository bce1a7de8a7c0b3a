//! One handler per subcommand.

use std::fmt::Write as _;
use std::path::Path;

use bfl_core::catalog::blueprint::{order_formula, Family};
use bfl_core::catalog::{parse_generator_file, SpecialKind};
use bfl_core::class_algebra::{character_table, find_table, generate_shipped, parse_table, CharacterTable, SHIPPED_TABLES};
use bfl_core::pgroup::{cor22_check, lemma21_check, module_battery, wreath_model, wreath_section_detect, ModuleAction, SmallGroup, Tier};
use bfl_core::verify::{
    bf_pair_direct, cc_inverse_check, commutator_closed_check, commutator_identity_scan, inversion_identity_scan, l2q_laurent_scan,
    l2q_trace_identity, reflections_o3_scan, replay_witness, sl2n3_scan, symmetric_bf_scan, wreath_free_pair_check, PlanMode,
    ScanPlan, Status, Verdict, Witness,
};
use bfl_core::catalog::NormalSet;
use serde_json::{json, Value};

use crate::resolve::Loaded;
use crate::{Cli, CliError, Command, Expect, IdentityArg, PairArgs, Report, SetArgs, TierArg};

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let dry = cli.global.dry_run;
    match &cli.command {
        Command::Catalog { group, special, list } => catalog(group.as_deref(), special, *list, dry),
        Command::Classes { group, reps } => classes(group, *reps, dry),
        Command::BfPair { pair } => pair_command(pair, false, dry),
        Command::WreathFree { pair } => pair_command(pair, true, dry),
        Command::CommClosed { set } => set_command(set, false, dry),
        Command::CcInverse { set } => set_command(set, true, dry),
        Command::Structconst { table, i, j, e, list_support, p } => structconst(table, i, j, e.as_deref(), *list_support, *p, dry),
        Command::WreathSection { group, p, tier, expect, closure_cap } => wreath_section(group, *p, *tier, *expect, *closure_cap, dry),
        Command::RepnCheck { file, p, battery } => repn_check(file.as_deref(), *p, *battery, dry),
        Command::ScanSym { n, plan } => {
            let explicit = plan.plan.map(|_| plan.build(PlanMode::Exhaustive));
            if dry {
                return Ok(plan_report("scan-sym", json!({ "n": n, "plan": explicit.map_or(json!("default"), |p| json!(p)) })));
            }
            Ok(Report::Verdicts(vec![symmetric_bf_scan(*n, explicit).map_err(domain)?]))
        }
        Command::ScanO3 { qs } => {
            if dry {
                return Ok(plan_report("scan-o3", json!({ "q": qs })));
            }
            Ok(Report::Verdicts(qs.iter().map(|&q| reflections_o3_scan(q).map_err(domain)).collect::<Result<_, _>>()?))
        }
        Command::ScanSl2n3 { n, plan } => {
            let plan = plan.build(PlanMode::Sample);
            if dry {
                return Ok(plan_report("scan-sl2n3", json!({ "n": n, "plan": plan })));
            }
            Ok(Report::Verdicts(vec![sl2n3_scan(*n, &plan).map_err(domain)?]))
        }
        Command::L2qTrace { qs } => {
            if dry {
                return Ok(plan_report("l2q-trace", json!({ "q": qs })));
            }
            Ok(Report::Verdicts(qs.iter().map(|&q| l2q_trace_identity(q).map_err(domain)).collect::<Result<_, _>>()?))
        }
        Command::L2qLaurent { qs, samples, seed } => {
            let plan = ScanPlan::sampled(*samples, *seed);
            if dry {
                return Ok(plan_report("l2q-laurent", json!({ "q": qs, "plan": plan })));
            }
            Ok(Report::Verdicts(qs.iter().map(|&q| l2q_laurent_scan(q, &plan).map_err(domain)).collect::<Result<_, _>>()?))
        }
        Command::IdentityScan { groups, identity, plan } => {
            let plan = plan.build(PlanMode::Sample);
            let loaded = groups.iter().map(|g| Loaded::new(g)).collect::<Result<Vec<_>, _>>()?;
            if dry {
                let names: Vec<&str> = loaded.iter().map(|l| l.group.name()).collect();
                return Ok(plan_report("identity-scan", json!({ "groups": names, "plan": plan })));
            }
            let mut out = Vec::new();
            for l in &loaded {
                if *identity != IdentityArg::Inversion {
                    out.push(commutator_identity_scan(&l.group, &plan)?);
                }
                if *identity != IdentityArg::Commutator {
                    out.push(inversion_identity_scan(&l.group, &plan)?);
                }
            }
            Ok(Report::Verdicts(out))
        }
        Command::GenTable { group, name, shipped, all_shipped, dir } => gen_table(group.as_deref(), name.as_deref(), shipped.as_deref(), *all_shipped, dir, dry),
        Command::Replay { report } => replay(report, dry),
    }
}

/// Parameter errors raised by a scan itself are usage errors.
fn domain(e: bfl_core::error::GroupError) -> CliError {
    use bfl_core::error::GroupError::*;
    match e {
        Unsupported(m) => CliError::Usage(m),
        other => other.into(),
    }
}

fn plan_report(command: &str, details: Value) -> Report {
    let json = json!({ "command": command, "dry_run": true, "resolved": details });
    let mut human = format!("dry run: {command}\n");
    if let Value::Object(map) = &json["resolved"] {
        for (k, v) in map {
            let _ = writeln!(human, "  {k}: {v}");
        }
    }
    Report::Text { human, json }
}

fn text(human: String, json: Value) -> Report {
    Report::Text { human, json }
}

fn catalog(group: Option<&str>, special: &[String], list: bool, dry: bool) -> Result<Report, CliError> {
    if list {
        let tags: Vec<&str> = Family::all().iter().map(|f| f.tag()).collect();
        let human = format!("families: {}\nsmall groups: d8, q8, zN, wreath:p\n", tags.join(", "));
        return Ok(text(human, json!({ "families": tags, "small": ["d8", "q8", "zN", "wreath:p"] })));
    }
    let spec = group.ok_or_else(|| CliError::Usage("--group is required".into()))?;
    let kinds = special
        .iter()
        .map(|s| s.parse::<SpecialKind>().map_err(domain))
        .collect::<Result<Vec<_>, _>>()?;
    let l = Loaded::new(spec)?;
    if dry {
        return Ok(plan_report("catalog", json!({ "group": l.group.name(), "special": special })));
    }
    let order = l.group.order()?;
    let mut human = format!("group {}\n  ambient: {}\n  order: {order}\n", l.group.name(), l.group.ambient().header_text());
    let mut j = json!({
        "group": l.group.name(),
        "ambient": l.group.ambient().header_text(),
        "order": order.to_string(),
        "generators": l.group.generators().iter().map(|g| g.to_text()).collect::<Vec<_>>(),
    });
    if let Some(bp) = &l.blueprint {
        let form = bp.form_description();
        let _ = writeln!(human, "  form: {form}");
        j["form"] = json!(form);
        if let Some(f) = order_formula(bp) {
            let _ = writeln!(human, "  order formula: {f} ({})", if f == order { "agrees" } else { "DISAGREES" });
            j["order_formula"] = json!(f.to_string());
        }
    }
    for g in l.group.generators() {
        let _ = writeln!(human, "  gen {}", g.to_text());
    }
    let mut specials = serde_json::Map::new();
    for kind in &kinds {
        let bp = l.blueprint.as_ref().ok_or_else(|| CliError::Usage("special elements need a catalog group".into()))?;
        let x = bp.special_element(kind).map_err(domain)?;
        let _ = writeln!(human, "  {kind} = {}", x.to_text());
        specials.insert(kind.to_string(), json!(x.to_text()));
    }
    if !specials.is_empty() {
        j["special"] = Value::Object(specials);
    }
    Ok(text(human, j))
}

fn classes(spec: &str, reps: bool, dry: bool) -> Result<Report, CliError> {
    let l = Loaded::new(spec)?;
    if dry {
        return Ok(plan_report("classes", json!({ "group": l.group.name() })));
    }
    let list = l.classes()?;
    let mut human = format!("{} classes of {} (order {})\n", list.len(), list.group_name, list.group_order);
    let mut rows = Vec::new();
    for c in &list.classes {
        let _ = write!(human, "  {:<6} order {:<4} size {:<10} centralizer {}", c.label, c.element_order, c.size, c.centralizer_order);
        if reps {
            let _ = write!(human, "  {}", c.representative.to_text());
        }
        human.push('\n');
        let mut row = json!({
            "label": c.label,
            "element_order": c.element_order,
            "size": c.size.to_string(),
            "centralizer_order": c.centralizer_order.to_string(),
        });
        if reps {
            row["representative"] = json!(c.representative.to_text());
        }
        rows.push(row);
    }
    Ok(text(human, json!({ "group": list.group_name, "order": list.group_order.to_string(), "classes": rows })))
}

fn pair_command(a: &PairArgs, wreath: bool, dry: bool) -> Result<Report, CliError> {
    if a.p < 2 {
        return Err(CliError::Usage("--p must be a prime".into()));
    }
    let l = Loaded::new(&a.group)?;
    let (c, c_name) = l.pick(a.c_class.as_deref(), a.c_elem.as_deref(), "c")?;
    let (d, d_name) = l.pick(a.d_class.as_deref(), a.d_elem.as_deref(), "d")?;
    let plan = a.plan.build(if l.group.is_enumerable() { PlanMode::Exhaustive } else { PlanMode::Sample });
    if dry {
        let command = if wreath { "wreath-free" } else { "bf-pair" };
        return Ok(plan_report(
            command,
            json!({ "group": l.group.name(), "c": c_name, "c_element": c.to_text(), "d": d_name, "d_element": d.to_text(), "p": a.p, "plan": plan }),
        ));
    }
    let v = if wreath {
        wreath_free_pair_check(&l.group, &c, &d, a.p, &plan)
    } else {
        bf_pair_direct(&l.group, &c, &d, a.p, &plan)
    };
    Ok(Report::Verdicts(vec![v.map_err(domain)?]))
}

fn set_command(a: &SetArgs, cc: bool, dry: bool) -> Result<Report, CliError> {
    if a.p < 2 {
        return Err(CliError::Usage("--p must be a prime".into()));
    }
    let l = Loaded::new(&a.group)?;
    let mut ids = a.classes.iter().map(|s| l.class_index(s)).collect::<Result<Vec<_>, _>>()?;
    ids.sort_unstable();
    ids.dedup();
    let list = l.classes()?;
    let plan = a.plan.build(PlanMode::Sample);
    if dry {
        let labels: Vec<&str> = ids.iter().map(|&i| list.classes[i].label.as_str()).collect();
        let sizes: Vec<String> = ids.iter().map(|&i| list.classes[i].size.to_string()).collect();
        return Ok(plan_report(
            if cc { "cc-inverse" } else { "comm-closed" },
            json!({ "group": l.group.name(), "classes": labels, "class_sizes": sizes, "p": a.p, "pair_cap": a.pair_cap, "plan": plan }),
        ));
    }
    let set = NormalSet::from_classes(list, &l.group, &ids, plan.class_cap)?;
    let v = if cc {
        cc_inverse_check(&l.group, list, &set, a.p, a.pair_cap, &plan)?
    } else {
        commutator_closed_check(&l.group, list, &set, a.p, a.pair_cap, &plan)?
    };
    Ok(Report::Verdicts(vec![v]))
}

fn load_table(name: &str) -> Result<CharacterTable, CliError> {
    let path = find_table(name).ok_or_else(|| CliError::Data(format!("table '{name}' not found")))?;
    Ok(parse_table(path)?)
}

/// Class index by position, by label, or `order:k,size:m`.
fn table_class(t: &CharacterTable, sel: &str) -> Result<usize, CliError> {
    if let Ok(i) = sel.parse::<usize>() {
        return if i < t.classes.len() {
            Ok(i)
        } else {
            Err(CliError::Usage(format!("class index {i} out of range (table has {})", t.classes.len())))
        };
    }
    if let Some(i) = t.classes.iter().position(|c| c.label.as_deref() == Some(sel)) {
        return Ok(i);
    }
    let mut order = None;
    let mut size = None;
    for part in sel.split(',') {
        match part.split_once(':') {
            Some(("order", v)) => order = v.parse::<u64>().ok(),
            Some(("size", v)) => size = v.parse::<u64>().ok(),
            _ => return Err(CliError::Usage(format!("unknown class selector '{sel}'"))),
        }
    }
    let hits: Vec<usize> = (0..t.classes.len())
        .filter(|&i| order.is_none_or(|o| t.classes[i].element_order == o) && size.is_none_or(|s| t.classes[i].size == s))
        .collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        [] => Err(CliError::Usage(format!("no class matches '{sel}'"))),
        _ => Err(CliError::Usage(format!("selector '{sel}' is ambiguous"))),
    }
}

fn class_name(t: &CharacterTable, i: usize) -> String {
    t.classes[i].label.clone().unwrap_or_else(|| format!("#{i}"))
}

fn structconst(table: &str, i: &str, j: &str, e: Option<&str>, list_support: bool, p: Option<u64>, dry: bool) -> Result<Report, CliError> {
    let t = load_table(table)?;
    let i = table_class(&t, i)?;
    let j = table_class(&t, j)?;
    let e = e.map(|s| table_class(&t, s)).transpose()?;
    if dry {
        return Ok(plan_report("structconst", json!({ "table": t.name, "i": i, "j": j, "e": e, "list_support": list_support, "p": p })));
    }
    let mut human = format!("{}: C{} x C{}\n", t.name, class_name(&t, i), class_name(&t, j));
    let mut j_out = json!({ "table": t.name, "i": i, "j": j });
    if let Some(e) = e {
        let m = t.class_mult_count(i, j, e)?;
        let _ = writeln!(human, "  a({}) = {} (residue {:.1e})", class_name(&t, e), m.count, m.residue);
        j_out["e"] = json!(e);
        j_out["count"] = json!(m.count);
    }
    if list_support || (e.is_none() && p.is_none()) {
        let support = t.product_support(i, j)?;
        let _ = writeln!(human, "  support ({} classes):", support.len());
        for &(k, m) in &support {
            let _ = writeln!(human, "    {:<6} order {:<4} multiplicity {m}", class_name(&t, k), t.classes[k].element_order);
        }
        j_out["support"] = json!(support
            .iter()
            .map(|&(k, m)| json!({ "class": k, "label": class_name(&t, k), "element_order": t.classes[k].element_order, "multiplicity": m }))
            .collect::<Vec<_>>());
    }
    match p {
        Some(p) => {
            let mut v = t.bf_pair_table(i, j, p)?;
            v.fact("structconst", j_out);
            Ok(Report::Verdicts(vec![v]))
        }
        None => Ok(text(human, j_out)),
    }
}

fn small_of(spec: &str, cap: usize) -> Result<(String, std::sync::Arc<SmallGroup>), CliError> {
    if let Some(p) = spec.strip_prefix("wreath:") {
        let p: u64 = p.parse().map_err(|_| CliError::Usage(format!("bad prime in '{spec}'")))?;
        let m = wreath_model(p).map_err(domain)?;
        return Ok((spec.to_string(), m.small.clone()));
    }
    let l = Loaded::new(spec)?;
    Ok((l.group.name().to_string(), std::sync::Arc::new(SmallGroup::from_group(&l.group, cap)?)))
}

fn wreath_section(spec: &str, p: u64, tier: TierArg, expect: Option<Expect>, cap: usize, dry: bool) -> Result<Report, CliError> {
    let tier = match tier {
        TierArg::Quotient => Tier::Quotient,
        TierArg::Full => Tier::Full,
    };
    if dry {
        return Ok(plan_report("wreath-section", json!({ "group": spec, "p": p, "tier": tier, "closure_cap": cap })));
    }
    let (name, q) = small_of(spec, cap)?;
    let s = wreath_section_detect(&q, p, tier).map_err(domain)?;
    let status = match (s.tier, expect) {
        (Tier::Indeterminate, _) => Status::Indeterminate,
        (_, Some(Expect::Found)) if !s.found => Status::Fails,
        (_, Some(Expect::Absent)) if s.found => Status::Fails,
        _ => Status::Holds,
    };
    let mut v = Verdict::new(format!("wreath-section {name} p={p}"), status);
    v.fact("found", s.found);
    v.fact("tier", serde_json::to_value(s.tier).expect("tier"));
    v.fact("order", q.order());
    if let Some(m) = &s.message {
        v.note(m.clone());
    }
    if let Some((h, n)) = &s.witness {
        let texts = |ix: &[u32]| ix.iter().map(|&k| q.element(k).map(|e| e.to_text()).unwrap_or_default()).collect::<Vec<_>>();
        v.fact("section_h_generators", texts(h));
        v.fact("section_n_normal_generators", texts(n));
        if expect == Some(Expect::Absent) {
            v.witnesses.push(Witness::new("wreath_section_found").value("group", &name).value("p", p));
        }
    }
    Ok(Report::Verdicts(vec![v]))
}

fn repn_check(file: Option<&Path>, p: Option<u64>, battery: bool, dry: bool) -> Result<Report, CliError> {
    match file {
        Some(path) if !battery => {
            let p = p.ok_or_else(|| CliError::Usage("--p is required with --file".into()))?;
            let gf = parse_generator_file(path).map_err(|e| CliError::Data(e.to_string()))?;
            let mats = gf
                .generators()
                .iter()
                .map(|g| g.as_matrix().cloned().ok_or_else(|| CliError::Data("repn-check needs a matrix generator file".into())))
                .collect::<Result<Vec<_>, _>>()?;
            if dry {
                return Ok(plan_report("repn-check", json!({ "file": path.display().to_string(), "generators": mats.len(), "p": p })));
            }
            let module = ModuleAction::new(mats)?;
            let g = module.image_group(20_000)?;
            Ok(Report::Verdicts(vec![lemma21_check(&gf.name, &g, &module, p), cor22_check(&gf.name, &g, &module, p)]))
        }
        _ => {
            let cases = module_battery()?;
            if dry {
                let names: Vec<&str> = cases.iter().map(|c| c.name.as_str()).collect();
                return Ok(plan_report("repn-check", json!({ "battery": names })));
            }
            let mut out = Vec::new();
            for c in &cases {
                let r = c.run()?;
                out.push(r.bound);
                out.push(r.section);
            }
            Ok(Report::Verdicts(out))
        }
    }
}

fn write_table(t: &CharacterTable, path: &Path) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(t).map_err(|e| CliError::Data(e.to_string()))? + "\n";
    std::fs::write(path, s).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn gen_table(group: Option<&str>, name: Option<&str>, shipped: Option<&str>, all: bool, dir: &Path, dry: bool) -> Result<Report, CliError> {
    if all {
        let stems: Vec<&str> = SHIPPED_TABLES.iter().map(|(s, _)| *s).collect();
        if dry {
            return Ok(plan_report("gen-table", json!({ "shipped": stems, "dir": dir.display().to_string() })));
        }
        std::fs::create_dir_all(dir).map_err(|e| CliError::Data(e.to_string()))?;
        let mut human = String::new();
        for stem in &stems {
            let t = generate_shipped(stem)?;
            let path = dir.join(format!("{stem}.json"));
            write_table(&t, &path)?;
            let _ = writeln!(human, "wrote {} ({} classes)", path.display(), t.classes.len());
        }
        return Ok(text(human, json!({ "written": stems })));
    }
    let t = match (group, shipped) {
        (Some(spec), None) => {
            let l = Loaded::new(spec)?;
            if dry {
                return Ok(plan_report("gen-table", json!({ "group": l.group.name() })));
            }
            character_table(&l.group, name.unwrap_or(l.group.name())).map_err(domain)?
        }
        (None, Some(stem)) => {
            if dry {
                return Ok(plan_report("gen-table", json!({ "shipped": stem })));
            }
            generate_shipped(stem).map_err(domain)?
        }
        _ => return Err(CliError::Usage("give --group, --shipped or --all-shipped".into())),
    };
    Ok(text(serde_json::to_string_pretty(&t).expect("table") + "\n", serde_json::to_value(&t).expect("table")))
}

fn replay(path: &Path, dry: bool) -> Result<Report, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&raw).map_err(|e| CliError::Data(e.to_string()))?;
    let verdicts = doc.as_array().ok_or_else(|| CliError::Data("report must be a JSON array of verdicts".into()))?;
    let mut witnesses: Vec<(String, Witness)> = Vec::new();
    for v in verdicts {
        let scenario = v["scenario"].as_str().unwrap_or("?").to_string();
        for w in v["witnesses"].as_array().into_iter().flatten() {
            let w: Witness = serde_json::from_value(w.clone()).map_err(|e| CliError::Data(e.to_string()))?;
            witnesses.push((scenario.clone(), w));
        }
    }
    if dry {
        return Ok(plan_report("replay", json!({ "report": path.display().to_string(), "witnesses": witnesses.len() })));
    }
    let mut out = Vec::new();
    for (scenario, w) in witnesses {
        let mut v = match replay_witness(&w) {
            Ok(true) => Verdict::new(format!("replay {scenario}: {}", w.claim), Status::Holds),
            Ok(false) => Verdict::new(format!("replay {scenario}: {}", w.claim), Status::Fails),
            Err(e) => {
                let mut v = Verdict::new(format!("replay {scenario}: {}", w.claim), Status::Indeterminate);
                v.note(e.to_string());
                v
            }
        };
        v.fact("claim", w.claim.clone());
        out.push(v);
    }
    Ok(Report::Verdicts(out))
}
