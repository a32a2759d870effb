//! Spaceability constructions.
//!
//! Starting from a witness `x ∈ E − A`, the zerofree version `x⁰` is copied
//! into the disjoint blocks of the partition, giving `y_1, y_2, …`. Finite
//! combinations `z = Σ a_i y_i` are checked against the embedding bound and
//! certified to stay outside `A`.

mod avoidance;
mod construction;
mod witness;

pub use avoidance::{
    c0_samples, check_proposition_conditions, lq_samples, AvoidanceSet, CustomAvoidance, Predicate,
    PropositionReport, PropositionSample,
};
pub use construction::{
    avoidance_check, build_basis, coefficient_battery, dominant_block, embedding_bound_check,
    independence_check, random_coefficients, AvoidanceReport, BasisFamily, EmbeddingReport,
    LpIdentity, COORDINATE_CHECK, CUSTOM_PREDICATE_DEPTH, IDENTITY_TOLERANCE,
};
pub use witness::{
    catalog_listing, partial_power_sums, rescale_witness, witness_catalog, CatalogEntry,
    CertificateParams, DivergenceProfile, LowerBound, MembershipCertificate, NotAvailable,
    ProfiledDivergence, Separation, SeparationCheck, SpaceParams, Witness, WitnessCertificate,
    SEPARATION_COUNT,
};
