//! Turning command-line strings into groups, classes and elements.

use bfl_core::catalog::{enumerate_classes, parse_generator_file, small, ClassList, GeneratorFile, GroupBlueprint, SpecialKind};
use bfl_core::element::GroupElement;
use bfl_core::error::GroupError;
use bfl_core::group::{Caps, Group};
use bfl_core::pgroup::wreath_model;

use crate::CliError;

static CAPS: std::sync::OnceLock<Caps> = std::sync::OnceLock::new();

pub fn set_caps(caps: Caps) {
    let _ = CAPS.set(caps);
}

pub struct Loaded {
    pub spec: String,
    pub group: Group,
    pub blueprint: Option<GroupBlueprint>,
    pub file: Option<GeneratorFile>,
    classes: std::cell::OnceCell<ClassList>,
}

fn usage(e: GroupError) -> CliError {
    match e {
        GroupError::Overflow { .. } => CliError::Overflow(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

impl Loaded {
    pub fn new(spec: &str) -> Result<Loaded, CliError> {
        let (group, blueprint, file) = if let Some(path) = spec.strip_prefix("file:") {
            let gf = parse_generator_file(path).map_err(|e| CliError::Data(e.to_string()))?;
            let g = gf.group()?;
            (g, None, Some(gf))
        } else if let Some(p) = spec.strip_prefix("wreath:") {
            let p: u64 = p.parse().map_err(|_| CliError::Usage(format!("bad prime in '{spec}'")))?;
            let m = wreath_model(p).map_err(usage)?;
            (Group::new(spec, m.group.ambient().clone(), m.group.generators().to_vec())?, None, None)
        } else {
            match spec {
                "d8" => (small::dihedral(4)?.with_name("d8"), None, None),
                "q8" => (small::quaternion8()?.with_name("q8"), None, None),
                _ if spec.starts_with('z') && spec[1..].parse::<usize>().is_ok() => {
                    (small::cyclic(spec[1..].parse().expect("checked"))?.with_name(spec), None, None)
                }
                _ => {
                    let bp: GroupBlueprint = spec.parse().map_err(usage)?;
                    bp.validate().map_err(usage)?;
                    (bp.construct()?, Some(bp), None)
                }
            }
        };
        let group = group.with_caps(CAPS.get().copied().unwrap_or_default());
        Ok(Loaded { spec: spec.to_string(), group, blueprint, file, classes: std::cell::OnceCell::new() })
    }

    pub fn classes(&self) -> Result<&ClassList, CliError> {
        if let Some(l) = self.classes.get() {
            return Ok(l);
        }
        let l = enumerate_classes(&self.group)?;
        Ok(self.classes.get_or_init(|| l))
    }

    /// A representative for a class selector: label, `order:k,size:m`, or special element name.
    pub fn class_rep(&self, selector: &str) -> Result<(GroupElement, String), CliError> {
        if let Ok(kind) = selector.parse::<SpecialKind>() {
            let bp = self
                .blueprint
                .as_ref()
                .ok_or_else(|| CliError::Usage(format!("special element '{selector}' needs a catalog group")))?;
            let x = bp.special_element(&kind).map_err(usage)?;
            return Ok((x, kind.to_string()));
        }
        let list = self.classes()?;
        let i = list.select(selector).map_err(usage)?;
        Ok((list.classes[i].representative.clone(), list.classes[i].label.clone()))
    }

    /// Class index for a selector; special names resolve through their element.
    pub fn class_index(&self, selector: &str) -> Result<usize, CliError> {
        let list = self.classes()?;
        if let Ok(i) = list.select(selector) {
            return Ok(i);
        }
        let (x, _) = self.class_rep(selector)?;
        Ok(list.class_of(&x)?)
    }

    pub fn named(&self, name: &str) -> Result<GroupElement, CliError> {
        let gf = self
            .file
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("element '{name}' needs a file: group")))?;
        gf.get(name).cloned().ok_or_else(|| CliError::Usage(format!("no element named '{name}' in {}", self.spec)))
    }

    /// Element for either a class selector or a named file element.
    pub fn pick(&self, class: Option<&str>, elem: Option<&str>, which: &str) -> Result<(GroupElement, String), CliError> {
        match (class, elem) {
            (Some(s), None) => self.class_rep(s),
            (None, Some(n)) => Ok((self.named(n)?, n.to_string())),
            _ => Err(CliError::Usage(format!("give exactly one of --{which}-class or --{which}-elem"))),
        }
    }
}
