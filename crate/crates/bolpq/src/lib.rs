//! Construction, verification and classification of Bol and Bruck loops of
//! order pq (p > q odd primes), up to isomorphism and up to isotopism.
//!
//! The classification runs over the quadratic extension F_{p^2} = F_p(√t):
//! admissible q-periodic sequences u(γ) = γe₁ + (1−γ)e₋₁ are indexed by a
//! parameter set Γ of size p−q+1, loops arise from Θ = (u_i⁻¹) via an
//! explicit multiplication formula on F_q × F_p, and the isomorphism /
//! isotopism classes are the orbits of ⟨f⟩ / ⟨f,g⟩ acting on Γ, with
//!
//!   f: γ ↦ 1−γ,    g: γ ↦ γω / (γω + (1−γ)ω⁻¹).
//!
//! When q ∤ p²−1 the cyclic group is the only Bol loop of order pq.  The
//! closed-form counts are (p−q+4)/2 classes up to isomorphism and
//! ⌊(p−1+4q)/(2q)⌋ up to isotopism, and everything is cross-checked by
//! brute-force table oracles at small orders.

pub mod classify;
pub mod error;
pub mod field;
pub mod gamma;
pub mod iso;
pub mod seq;
pub mod table;

pub use classify::{
    classify, count_range, cross_verify, ClassificationReport, Counts, CountRow, UpTo,
    VerifyOptions, VerifySummary,
};
pub use error::{Error, Result};
pub use field::{find_nonsquare, find_primitive_qth_root, is_odd_prime, Branch, FieldParams, Fp2};
pub use gamma::{
    act_f, act_g_r, build_gamma_set, dihedral_check, fixed_points, orbit_partition,
    ActionElement, GammaSet, GeneratorSet, OrbitPartition,
};
pub use iso::{brute_isomorphic, brute_isotopic, fingerprint, principal_isotope, IsoWitness};
pub use seq::{
    circulant_apply, eigen_pair, find_isotopy_witness, is_bol_sequence, is_bruck_sequence,
    satisfies_recurrence, theta_from_gamma, transform_seq, u_from_gamma, PeriodicSequence,
    ThetaVector, WitnessMode,
};
pub use table::LoopTable;
