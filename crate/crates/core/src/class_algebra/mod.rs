//! Character tables, class multiplication coefficients and the table generator.

pub mod cyclotomic;
pub mod dixon;
pub mod table;

pub use cyclotomic::Cyclotomic;
pub use dixon::character_table;
pub use table::{find_table, parse_table, parse_table_text, CharacterTable, ClassInfo, ClassMult, TableError};

use crate::catalog::{small, GroupBlueprint};
use crate::error::Result;
use crate::group::Group;

/// File stems of the shipped tables with the group spec each is generated from.
pub const SHIPPED_TABLES: &[(&str, &str)] = &[
    ("s4", "sym:4"),
    ("d8", "d8"),
    ("q8", "q8"),
    ("a5", "alt:5"),
    ("s5", "sym:5"),
    ("a6", "alt:6"),
    ("s6", "sym:6"),
    ("pgl2_9", "psl2:9+diag"),
    ("m10", "psl2:9+diagfrob"),
    ("l2_7", "psl2:7"),
    ("l2_8", "psl2:8"),
    ("l2_11", "psl2:11"),
];

/// Build a group from a blueprint spec or one of the small names `d8`, `q8`, `zN`.
pub fn table_source(spec: &str) -> Result<Group> {
    match spec {
        "d8" => small::dihedral(4),
        "q8" => small::quaternion8(),
        _ => spec.parse::<GroupBlueprint>()?.construct(),
    }
}

/// Generate the table for a shipped stem.
pub fn generate_shipped(stem: &str) -> Result<CharacterTable> {
    let (_, spec) = SHIPPED_TABLES
        .iter()
        .find(|(s, _)| *s == stem)
        .ok_or_else(|| crate::error::GroupError::Unsupported(format!("no shipped table named '{stem}'")))?;
    character_table(&table_source(spec)?, stem)
}
