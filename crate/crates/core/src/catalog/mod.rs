//! Concrete groups, their conjugacy classes and generator files.

pub mod blueprint;
pub mod classes;
pub mod genfile;
pub mod small;

pub use blueprint::{Family, GroupBlueprint, Psl2Extension, SpecialKind};
pub use classes::{enumerate_classes, ClassList, ConjClass, NormalSet};
pub use genfile::{parse_generator_file, parse_generator_text, GeneratorFile, ParseError};
