//! Exact construction and axiom checking for the quasi-Hopf algebras
//! `A(H,s)` obtained from pointed Hopf algebras over `C_{m²}`, their
//! crossed products, and comodule algebras over them.
//!
//! All arithmetic is exact in cyclotomic fields. Verifiers never panic on a
//! failed identity; they return a [`VerificationReport`] naming a witness.

pub mod catalog;
pub mod comodalg;
pub mod crossed;
pub mod error;
pub mod exactnum;
pub mod pointed;
pub mod quasihopf;
pub mod report;
pub mod tensoralg;

pub use catalog::{build_family, build_hat_family, enumerate_compatible, validate_compat, QlsComodDatum};
pub use comodalg::{is_right_simple, verify_comodule_algebra, ComodAlgebra};
pub use crossed::{CrossedProduct, CrossedSystem};
pub use error::{Error, Result};
pub use exactnum::CycNum;
pub use pointed::{build_ahs, build_bosonization, build_js, build_twisted, Ahs, PointedDatum, PointedHopf};
pub use quasihopf::{verify_quasibialgebra, verify_quasihopf, QuasiBialgebra, QuasiHopf, Twist, TwistedHom};
pub use report::{CheckRecord, Status, VerificationReport};
pub use tensoralg::{BasisLabel, FinAlgebra, LinMap, Tensor};
