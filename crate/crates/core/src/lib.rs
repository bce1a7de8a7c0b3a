pub mod error;
pub mod field;
pub mod perm;
pub mod matrix;
pub mod element;
pub mod chain;
pub mod action;
pub mod group;
pub mod catalog;
pub mod class_algebra;
pub mod verify;
pub mod pgroup;
