//! Fermat reals: a ring of little-oh equivalence classes of nilpotent
//! infinitesimals, extensions of smooth functions to it, the Fermat topology,
//! and the functors between Fermat spaces and diffeological spaces.

pub mod cli;
pub mod error;
pub mod json;
pub mod oracle;
pub mod ring;
pub mod scalar;
pub mod smooth;
pub mod space;
pub mod syntax;
pub mod topology;

pub use error::{Error, Result};
pub use oracle::{OracleReport, OracleSchedule};
pub use ring::{DParam, FermatPoint, FermatReal, IdealSpec, Term};
pub use scalar::{Backend, Rational, Scalar, ThetaCombo, ThetaLattice};
pub use smooth::{Expr, Prim, QuasiStandardMap, SmoothExpr};
pub use space::{Atlas, CardinalityWitness, Chart, SpaceCoord, SpacePoint, SpacePresentation};
pub use topology::{AffineMap, Bound, Interval, OpenSetDesc};
