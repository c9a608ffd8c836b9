//! Exact-arithmetic computation of geometric parameterizations, multiplicity
//! matrices, Kazhdan-Lusztig type polynomials, and the Iwahori-Matsumoto
//! involution for graded Hecke algebras at real central characters.
//!
//! The pipeline, bottom to top:
//! * [`poly`], [`ratfun`], [`linalg`] — the scalar field Q(v) and exact
//!   dense linear algebra over it;
//! * [`rootsys`] — root systems, Weyl groups, subsystems;
//! * [`chevalley`], [`nilpotent`] — structure constants, sl2 triples, and
//!   weighted Dynkin diagram enumeration;
//! * [`kspace`] — the space K(chi) with its bilinear form and induction;
//! * [`orbits`] — the orbit parameter set E(chi);
//! * [`bases`] — the recursive basis construction, multiplicity matrices,
//!   polynomial matrices, and the involution pairing.

pub mod bases;
pub mod chevalley;
pub mod kspace;
pub mod linalg;
pub mod nilpotent;
pub mod orbits;
pub mod poly;
pub mod ratfun;
pub mod rootsys;

pub use bases::{BasisFamily, Engine, MultiplicityMatrix, MINUS, PLUS};
pub use kspace::{EMode, GradedContext, KVector};
pub use linalg::FieldMatrix;
pub use orbits::OrbitParam;
pub use poly::IntPoly;
pub use ratfun::{ExactFieldError, RationalFunction};
pub use rootsys::{CharacterVector, Rat, RootSystem, Subsystem, WeylGroup};
