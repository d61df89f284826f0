//! Exact computations with p-adic Schottky groups whose generators have
//! rational entries.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: valuations, exponents and Hensel square roots;
//! * [`proj`]: points of P¹, homographies and the chordal metric δ;
//! * [`disks`]: the ultrametric disk calculus on P¹;
//! * [`schottky`]: groups with good fundamental domains, words, limit-set
//!   covers, reduction and membership;
//! * [`heights`]: heights of rationals and matrices, counting scans;
//! * [`geodesy`]: flat subvarieties and commensurability probes;
//! * [`io`]: the JSON/CSV file formats.

pub mod disks;
pub mod error;
pub mod exec;
pub mod geodesy;
pub mod heights;
pub mod io;
pub mod padic;
pub mod proj;
pub mod schottky;

pub use disks::{Disk, DiskKind};
pub use error::{Error, Result};
pub use exec::Execution;
pub use padic::{ExtExp, PadicApprox, PadicScalar, PrimeContext};
pub use proj::{ElementClass, Homography, ProjPoint};
pub use schottky::{Letter, SchottkyGroup, Word};
