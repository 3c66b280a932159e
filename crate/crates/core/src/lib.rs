//! Hyperplane arrangements, their Salvetti complexes, Deligne groupoids and
//! curve complexes.

pub mod arrangement;
pub mod curveblowup;
pub mod deligne;
pub mod error;
pub mod exactlin;
pub mod generators;
pub mod salvetti;
pub mod zonotope;

pub use arrangement::{Arrangement, Flat, HyperplaneSet};
pub use deligne::{Garside, Letter, Morphism, Positive, Simple};
pub use error::{Error, Result};
pub use exactlin::{Field, Matrix, Rational, Scalar, Sign, SubspaceBasis};
pub use zonotope::{Covector, Zonotope};
