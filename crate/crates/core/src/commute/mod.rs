//! Deciding commutativity of `H^I`: direct comparison of structure
//! constants, combinatorial noncommutativity certificates built from heaps
//! and Bruhat intervals, diagram automorphisms for the commutative side, and
//! a table-driven classification oracle.
//!
//! Every verifier returns a [`Certificate`] that serializes to JSON and can
//! be re-checked from its recorded inputs.

mod certificate;
mod classify;
mod lift;
mod scan;
mod symmetry;
mod table;
mod verify;

pub use certificate::{Certificate, Evidence, Method, Verdict};
pub use classify::{classify, Classification, Rule};
pub use lift::{lift_witness, LiftSource};
pub use scan::{direct_commutativity_scan, path_witness, ScanOptions};
pub use symmetry::{involution_report, opposition_commutativity, InvolutionReport, InvolutionRow};
pub use table::{embedded_table, parse_table, Family, StarPattern, Table, TableRow, WordSet};
pub use verify::{
    verify_heap_exclusion, verify_no_reverse_decomposition, verify_star_pattern, verify_table_row, verify_words,
    RowOptions,
};

/// Default state guard for Bruhat-interval searches.
pub const DEFAULT_GUARD: usize = 1_000_000;
