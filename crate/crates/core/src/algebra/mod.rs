//! Finite fields, polynomials, forms and projective linear algebra.

pub mod binary;
pub mod field;
pub mod form;
pub mod linalg;
pub mod poly;
pub mod proj;
pub mod series;

pub use binary::{normalize_p1, BinaryForm, P1};
pub use field::{field, Embedding, Fe, Field, FieldError};
pub use form::Form;
pub use proj::{Line, ProjPoint};
