//! Certified Dehn-filling verdicts for knot-group elements.
//!
//! The crate works with finitely presented knot groups carrying a peripheral
//! (meridian, longitude) pair. For an element `g` and a slope `p/q` it decides,
//! soundly but not always, whether `g` dies in the filled group
//! `G / ⟨⟨μᵖλ^q⟩⟩`. Alongside the oracles it provides exact normal forms for
//! torus-knot groups, builders for the standard element constructions,
//! PSL(2,ℂ) holonomy evaluation for the figure-eight knot, and Brooks
//! quasimorphism estimates.

pub mod constructions;
pub mod error;
pub mod fillings;
pub mod oracles;
pub mod presentations;
pub mod psl2;
pub mod quasimorphs;
pub mod torusnf;
pub mod words;

pub use error::{Error, Result};
pub use fillings::{fill, slope_distance, slope_element, Slope};
pub use presentations::{abelianization, figure_eight, homology_class, torus_knot, Presentation};
pub use words::{bmt_word, commutator, conjugate, cyclic_reduce, free_reduce, parse_word, Alphabet, Generator, Word};
