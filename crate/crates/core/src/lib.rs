//! Exact census machinery for Drinfeld modules over the rational function
//! field F_q(T).
//!
//! The crate is organised bottom-up:
//!
//! * [`gfq`] — arithmetic in the coefficient field F_q (q = p^e ≤ 2^20),
//!   with a deterministic modulus choice and a canonical element order;
//! * [`polyfq`] — dense polynomials over F_q, trial-division factorization,
//!   irreducible enumeration, places and valuations of F_q(T);
//! * [`wps`] — weighted projective points over F_q(T): normalization to a
//!   content-free integral model, canonical orbit representatives, heights,
//!   and exhaustive enumeration by height;
//! * [`drinfeld`] — rank-r Drinfeld modules as weighted projective points,
//!   reduction types at finite primes, and local density factors;
//! * [`asymptotics`] — exact-rational leading constants for the counting
//!   functions, evaluated through the zeta function of F_q(T);
//! * [`gon`] — geometry-of-numbers box counts that the asymptotic
//!   constants are calibrated against;
//! * [`census`] — end-to-end census runs comparing exact enumeration with
//!   the predicted asymptotics, plus CSV/JSON report serialization;
//! * [`text`] — the textual formats shared with the command-line tool.

pub mod asymptotics;
pub mod census;
pub mod drinfeld;
pub mod error;
pub mod gfq;
pub mod gon;
pub mod polyfq;
pub mod text;
pub mod wps;

pub use asymptotics::{AsymptoticPrediction, CurveParams};
pub use census::{CensusQuery, CensusReport, CensusRow, Population};
pub use drinfeld::{DrinfeldModule, LocalCondition, ReductionType};
pub use error::{Error, Result};
pub use gfq::{Field, FqElem};
pub use gon::{BoxSpec, Congruence};
pub use polyfq::{Degree, Place, Poly, Prime, RationalFunction, Valuation};
pub use wps::{WeightVector, WppPoint};
