//! Finite p-groups: explicit small groups, the wreath product `Z_p ≀ Z_p`, and modules.

pub mod small_group;
pub mod battery;
pub mod modrep;
pub mod wreath;

pub use small_group::{normal_subgroups, subgroups, BitSet, SmallGroup, Subgroup};
pub use wreath::{build_wreath, iso_to_wreath, replay_section, wreath_model, wreath_section_detect, SectionVerdict, Tier, WreathModel};
pub use modrep::{commutator_dim, commutator_spaces_direct, cor22_check, fixed_dim, lemma21_check, ModuleAction, IRREDUCIBILITY_CAP};
pub use battery::{module_battery, run_battery, CaseReport, ModuleCase};
