//! Dihedral branched covers of knots and the signature invariants built on them.
//!
//! The crate works from combinatorial input (PD codes and braid words) and keeps
//! every homological computation in exact integer arithmetic. Floating point
//! appears only in Hermitian signatures, where degeneracy is reported instead of
//! guessed.
//!
//! Module map:
//!
//! * [`diagram`]: PD codes, braid words, Wirtinger presentations.
//! * [`linalg`]: integer matrices, Smith normal form, kernels mod `p`, Hermitian signatures.
//! * [`coloring`]: Fox `p`-colorings and their dihedral permutation representations.
//! * [`surfaces`]: Goeritz and Seifert matrices, the double branched cover, linking forms, metabolizers.
//! * [`covers`]: coset tables, Reidemeister–Schreier, homology of irregular dihedral covers.
//! * [`xi`]: characteristic classes, Tristram–Levine signatures, the `Ξ_p` certificate and ribbon verdicts.
//! * [`coverarith`]: closed-form signature and Euler characteristic formulas for branched covers.
//! * [`table`] and [`report`]: the bundled knot table and the end-to-end report.

pub mod coloring;
pub mod coverarith;
pub mod covers;
pub mod diagram;
pub mod error;
pub mod group;
pub mod linalg;
pub mod modulus;
pub mod report;
pub mod surfaces;
pub mod table;
pub mod xi;

pub use coloring::{fox_colorings, Coloring, ColoringOrbit, PermutationRep};
pub use coverarith::CoverSpec;
pub use covers::{CosetTable, CoverHomology};
pub use diagram::{BraidWord, KnotDiagram};
pub use error::{Error, Result};
pub use group::GroupPresentation;
pub use linalg::{AbelianGroup, HermitianMatrix, IntMatrix, SmithForm};
pub use modulus::Modulus;
pub use surfaces::{LinkingForm, Metabolizer, SeifertData};
pub use table::{KnotRecord, KnotTable};
pub use xi::{CharacteristicClass, Verdict, XiCertificate};
