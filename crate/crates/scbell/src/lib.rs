//! Nonlocality toolkit for Schmidt-correlated (SC) qubit states.
//!
//! An SC state is a mixture of pure states sharing one Schmidt basis,
//! ρ = Σ a_mn |m…m⟩⟨n…n|. For the two- and three-qubit families built here,
//! the maximum CHSH and Svetlichny expectation values have closed forms, and
//! this crate computes them three independent ways:
//!
//! * closed-form expressions ([`bell::fmax_sc2`], [`bell::smax_sc3`], …),
//! * a seeded multistart optimizer over explicit measurement angles
//!   ([`bell::maximize_chsh`], [`bell::maximize_svetlichny`]),
//! * the Horodecki correlation-matrix criterion for two qubits
//!   ([`bell::fmax_horodecki`]).
//!
//! On top of that sit entanglement measures (Wootters concurrence, von
//! Neumann and relative entropies, relative entropy of entanglement for the
//! three-qubit SC family, dense-coding capacity) and a transverse-noise
//! Kraus channel with time sweeps that trace how the violation maxima and
//! concurrence decay.
//!
//! Everything is deterministic: the only randomness flows from an explicit
//! `u64` seed through the counter-based [`rng::SplitMix64`] generator.

pub mod bell;
pub mod channels;
pub mod entanglement;
pub mod qmat;
pub mod rng;
pub mod sc_states;
pub mod verify;
