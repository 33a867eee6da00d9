//! Words, the surface group presentation, and automorphisms by generator images.

mod automorphism;
pub mod surface;
mod word;

pub use automorphism::{verify_surface_automorphism, GroupAutomorphism};
pub use surface::{surface_word_is_trivial, SurfacePresentation};
pub use word::{free_reduce, Alphabet, GroupWord, Letter};
