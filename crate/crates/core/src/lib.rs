//! Exact linear algebra for noncommutative quadrics, geometric squares and
//! the blow-up of the Grassmannian of lines in P^3 along two disjoint lines.

pub mod binary_form;
pub mod blowup;
pub mod certify;
pub mod error;
pub mod grassmann;
pub mod io;
pub mod linalg;
pub mod quintuple;
pub mod scalar;
pub mod square;
pub mod tensor;

pub use binary_form::{binary_form_gcd, BinaryForm, FormGcd, ProjPoint, RootStructure};
pub use certify::{ext_table, full_pipeline, gram_of, sweep_type_a, Certificate, ExtTable, SweepReport, Verdict};
pub use error::{Error, Result};
pub use io::{input_digest, QuintupleFile, QuintupleSpec};
pub use linalg::{intersect_subspaces, same_span, sum_subspaces, IntMatrix, Matrix};
pub use quintuple::{build_linear_quadric, build_type_a, is_geometric, Quintuple};
pub use scalar::{Field, ModInt, Scalar};
pub use square::{Convention, GeometricSquare};
pub use tensor::Tensor;
