//! Exact twisted conjugacy invariants of group automorphisms.
//!
//! For an automorphism phi of a group G, elements x and y are twisted
//! conjugate when y = g x phi(g)^{-1} for some g. The number of classes is
//! the Reidemeister number R(phi). This crate computes R(phi) and related
//! invariants in exact arithmetic for two families of groups:
//!
//! * finite groups given by multiplication tables ([`group`]), including the
//!   fixed-point count on the unitary dual computed through mod-p central
//!   characters ([`dual`]) and the twisted Burnside-Frobenius comparison;
//! * free abelian groups Z^n, where automorphisms are unimodular integer
//!   matrices and everything reduces to Smith normal form ([`lattice`]),
//!   with separability witnesses and residually-finite certificates
//!   ([`separability`]).
//!
//! On top of the counts sit the dynamical generating functions ([`zeta`]):
//! Lefschetz and periodic-orbit zeta functions, Reidemeister zeta series,
//! Mobius congruence audits, and growth-rate estimation.

pub mod dual;
pub mod group;
pub mod lattice;
pub mod modp;
pub mod poly;
pub mod separability;
pub mod zeta;

pub use dual::{
    admissible_prime, central_characters, class_data, fixed_dual_count, verify_tbft,
    verify_tbft_with_prime, CentralCharacterTable, ClassData, DualError, TbftReport,
};
pub use group::{
    finite_reidemeister_sequence, Automorphism, FiniteDecision, FiniteGroup, GroupError,
    TwistedPartition,
};

pub use lattice::{
    lattice_reidemeister, lattice_twisted_decide, reidemeister_sequence, smith_normal_form,
    IntMatrix, LatticeDecision, LatticeError, Reidemeister, ReidemeisterSequence, SmithForm,
};
pub use poly::IntPoly;
pub use separability::{
    lattice_separation_search, rp_certificate, twisted_dehn_decide, verify_semidirect_bijection,
    RpCertificate, RpOutcome, SemidirectBijectionReport, SepError, SeparationOutcome,
    SeparationWitness, TwistedAnswer, TwistedProblem,
};
pub use zeta::{
    congruence_audit, divisors, growth_rate, lefschetz_zeta, mobius, periodic_floer_zeta,
    reidemeister_zeta_series, CongruenceAudit, GrowthEstimate, PowerSeries, ZetaError, ZetaForm,
};
