//! Combinatorial monodromy of Lefschetz pencils and numerical checks of the
//! estimates used to build pencils adapted to a Lagrangian submanifold.
//!
//! * [`wordcore`]: free groups, braids and the Artin action.
//! * [`fiber`]: models of the fiber mapping class group and vanishing cycles.
//! * [`pencil`]: positive factorizations, Hurwitz moves, matching paths and
//!   the automorphism group `Γ(φ)`.
//! * [`transversal`]: the cutoff profile, deformed Morse functions and the
//!   estimated-transversality checks.
//! * [`io`]: JSON file formats.

pub mod fiber;
pub mod io;
pub mod pencil;
pub mod transversal;
pub mod wordcore;
