//! Exact enumeration of lozenge tilings of hexagons with central bowtie
//! holes.
//!
//! The crate builds triangular-lattice regions (hexagons `H(x, y, z)`,
//! bowtie-holed `B(x, y, z, k)` and disconnected-bowtie `B'(x, y, z, k)`),
//! counts their tilings and centrally symmetric tilings three independent
//! ways — brute-force matching enumeration, closed product formulas, and a
//! condensation recurrence — and machine-checks the condensation identities
//! relating the counts.
//!
//! ```
//! use lozenge::prelude::*;
//!
//! // a hexagon with 2-2-2 sides has 20 tilings, 4 of them centrally symmetric
//! let region = build_hexagon(2, 2, 2);
//! let graph = DualGraph::from_region(&region);
//! assert_eq!(count_matchings(&graph).to_string(), "20");
//! assert_eq!(count_symmetric_matchings(&graph).unwrap().to_string(), "4");
//! assert_eq!(macmahon(2, 2, 2).to_string(), "20");
//! assert_eq!(self_complementary(2, 2, 2).to_string(), "4");
//! ```
//!
//! The long-form guide lives in the `book/` directory of the repository and
//! is compiled into [`guide`] so its examples run under `cargo test`.

pub mod cell;
pub mod condensation;
pub mod count;
pub mod formulas;
pub mod graph;
pub mod guide;
pub mod region;
pub mod render;
pub mod superpose;

pub mod prelude {
    //! The commonly used surface in one import.
    pub use crate::cell::{Orientation, TriCell};
    pub use crate::condensation::{
        check_odd_path_hypothesis, forced_reduction, recurrence_count, reduces_to, shifted_params,
        standard_marks, verify_condensation, verify_symmetric_condensation, IdentityReport, Marks,
        RecurrenceSolver, SymMarks, SymmetricInstance, RECURRENCE_TARGETS,
    };
    pub use crate::count::{
        count_matchings, count_matchings_without, count_symmetric_matchings,
        count_symmetric_matchings_without, enumerate_matchings, enumerate_matchings_without,
        enumerate_symmetric_matchings_without, orbit_graph, sample_symmetric_matching, CountError,
        Matching, DEFAULT_ENUMERATION_CAP,
    };
    pub use crate::formulas::{
        bowtie, disconnected_bowtie, disconnected_bowtie_xparity, disconnected_bowtie_yparity,
        macmahon, pochhammer, self_complementary,
    };
    pub use crate::graph::{Color, DualGraph, GraphJson};
    pub use crate::region::{
        build_hexagon, build_region, carve_bowtie, carve_disconnected_bowtie,
        carve_separated_bowtie, Family, Region, RegionJson, RegionParams,
    };
    pub use crate::render::render_svg;
    pub use crate::superpose::{shift_along_path, superpose, AltPath, Side, Superposition};
}
