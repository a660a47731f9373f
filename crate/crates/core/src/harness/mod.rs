//! Instance generation, golden fixtures and the randomized verification suite.

mod examples;
mod instance;
mod verify;

pub use examples::{
    four_sublattices, run_examples, sharpness_ratio, two_congruence_instance, Check, ExamplesReport, Fixture,
    SHARPNESS_PRIMES,
};
pub use instance::{generate, parse_instance, GeneratorParams, Instance};
pub use verify::{
    applicable_bounds, check_instance, torus_implication, verify, BoundSummary, Comparison, InstanceReport, Summary, TargetedBound, TorusCase, Verdict,
    VerificationReport, VerifyConfig, REPORT_SCHEMA_VERSION,
};
