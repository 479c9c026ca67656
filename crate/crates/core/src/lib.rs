//! Exact computations with codimension-one foliations over fields of positive
//! characteristic: p-curvature, degeneracy divisors, the Cartier operator,
//! pullbacks and differents, reductions of integral models and the search for
//! low-degree codimension-two subdistributions.

pub mod cartier;
pub mod distmin;
pub mod divisor;
pub mod document;
pub mod error;
pub mod field;
pub mod foliation;
pub mod forms;
pub mod linalg;
pub mod maps;
pub mod models;
pub mod poly;
pub mod text;

pub use divisor::{Ambient, Component, Divisor};
pub use document::Document;
pub use error::{Error, Result};
pub use field::{
    factor_mod_p, reduce_coefficient, Field, FpPoly, Fq, FqElem, Integers, NrElem, NumberRing, PerfectField,
    Rationals, Ring, RingSpec, Sampling,
};
pub use foliation::{Foliation, PCurvatureReport};
pub use forms::{DiffForm, RationalForm, VectorField};
pub use poly::{Monomial, MultiPoly, RationalFunction};
pub use maps::RationalMap;
pub use models::IntegralModel;
pub use text::Syntax;
