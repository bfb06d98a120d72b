//! Computable Néron-model fibers for degenerating weight −1 variations of
//! Hodge structure over a punctured disk (and the bidisk pullback family).
//!
//! The crate is organised bottom-up:
//!
//! * [`exact_linalg`]: Smith/Hermite forms, integer kernels, abelian groups.
//! * [`monodromy`]: unipotency, logarithms, component groups, Koszul link
//!   cohomology of commuting monodromies.
//! * [`hodge_limits`]: monodromy weight filtrations and limit mixed Hodge data.
//! * [`fibers`]: quotients `Λ \ V` with discreteness classification.
//! * [`normal_functions`]: liftings, admissibility, classes and limits.
//! * [`neron_models`]: Zucker, Clemens, GGK and BPS fibers over the puncture.
//! * [`polydisk_lab`]: the bidisk family pulled back along `t1 * t2`.

pub mod exact_linalg;
pub mod fibers;
pub mod hodge_limits;
pub mod monodromy;
pub mod neron_models;
pub mod normal_functions;
pub(crate) mod numeric;
pub mod polydisk_lab;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
