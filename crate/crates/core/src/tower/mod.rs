//! Artin–Schreier towers over a tame base: equations, automorphisms, a
//! series-valuation oracle for lower jumps, and global invariants.

pub mod analytic;
pub mod invariants;
pub mod mpoly;
pub mod oracle;
pub mod quaternion;
pub mod series;
pub mod spec;

pub use analytic::{analytic_lower_jumps, analytic_step_conductors, lower_filtration_from_step_jumps};
pub use invariants::{genus_rh, p_rank_ds, DS_VARIANT};
pub use mpoly::MPoly;
pub use oracle::{oracle_lower_jumps, OracleReport, UniformizerStep};
pub use quaternion::{evaluate_quaternion_fiber, quaternion_tower, FamilyReport, FiberReport};
pub use series::TruncatedSeries;
pub use spec::{Automorphism, GeneratorAction, TowerJson, TowerSpec};
