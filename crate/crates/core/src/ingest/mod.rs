//! Problem ingestion: MPS reading, standard-form conversion and synthetic
//! generators.

pub mod generate;
pub mod mps;
pub mod standard_form;

pub use generate::{generate, GeneratedInstance, GeneratorSpec};
pub use mps::{parse_mps, read_mps_file, MpsModel};
pub use standard_form::{to_standard_form, StandardFormConversion, VariableMap};
