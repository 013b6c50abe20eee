//! Sound triviality and nontriviality certification in finitely presented groups.

pub mod certificate;
pub mod coset;
pub mod groups;
pub mod pipeline;
pub mod quotient;
pub mod rewrite;

pub use certificate::{replay, Certificate};
pub use coset::{decide_in_finite, enumerate, todd_coxeter, CosetTable, Enumeration, EnumerationLimits, Exceeded};
pub use groups::{psl2_group, symmetric_group, target_ladder, FiniteGroup, Target};
pub use pipeline::{
    abelian_test, certify, run_all_stages, sk_scan, Budget, BudgetSpent, StageReport, Verdict, VerdictKind,
    DEFAULT_MAX_COSETS,
};
pub use quotient::{finite_quotient_search, for_each_homomorphism, FiniteQuotient, SearchLimits, SearchStats};
