//! Exact weight combinatorics for the BGG category O of the rank <= 2
//! semisimple Lie algebras (types A1, A1xA1, A2).
//!
//! Conventions: weights are integer vectors in the basis of fundamental
//! weights. In type A2 the simple roots are `alpha = [2,-1]` and
//! `beta = [-1,2]`, `s` reflects `alpha`, `t` reflects `beta`, and the word
//! `st` acts as `s` after `t`. `L(st)` abbreviates `L(st . 0)`.

pub mod block_decomp;
pub mod category;
pub mod charlat;
pub mod coverage;
pub mod free_flag;
pub mod functors;
pub mod label;
pub mod root_data;
pub mod standard_chars;
pub mod table;
pub mod verify;

pub use block_decomp::{DecompError, DecompositionResult, LinkageClass};
pub use category::CategoryO;
pub use charlat::{Character, CharacterDump, Region, VirtualCharacter};
pub use free_flag::{FlagError, FreePresentation, GeneratorBlock};
pub use functors::FunctorResult;
pub use root_data::{ParabolicData, RootSystem, RootType, Weight, WeylElem, WeylGroup};
pub use standard_chars::{StandardError, StandardKind, StandardLabel, VermaExpansion};
pub use table::{Functor, GoldenTable, MultTable, TableSpec};
