#![allow(clippy::needless_range_loop, clippy::large_enum_variant, clippy::result_large_err)]

pub mod algebra;
pub mod bilinear;
pub mod bimodule;
pub mod cli;
pub mod context;
pub mod error;
pub mod gallery;
pub mod linalg;
pub mod spec;
pub mod surgery;
pub mod tensor;
pub mod verify;

pub use algebra::Algebra;
pub use bilinear::BilinearMap;
pub use bimodule::Bimodule;
pub use error::{Error, Result};
pub use linalg::{FieldSpec, Matrix, Scalar};
pub use tensor::TensorSpace;
pub use verify::Report;
