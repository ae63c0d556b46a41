//! Weyl-Heisenberg group H(n), its automorphism group, the hsp(2n) Lie
//! algebra and grid realizations of their unitary representations.

pub mod matrix;
pub mod scalar;
pub mod symplectic;
pub mod wh_group;
pub mod lie_algebra;
pub mod aut_group;
pub mod mackey;
pub mod hilbert_rep;
pub mod verify;
