//! Hereditary König–Egerváry (hke) set collections and their graphs.
//!
//! A family F of α-element sets is hke when every non-empty subfamily Γ
//! satisfies |⋃Γ| + |⋂Γ| = 2α. The crate verifies the property in several
//! equivalent ways, extends and completes hke families, decides isomorphism,
//! connects families with graphs through G(F) and Ω(G), and counts the
//! largest hke families on a given ground set.
//!
//! ```
//! use hke::{parse_family, verify::check_hke_definition};
//!
//! let f = parse_family(b"1 3 5\n1 4 6\n2 3 5\n2 4 5\n2 4 6\n").unwrap();
//! let v = check_hke_definition(&f).unwrap();
//! assert!(v.holds);
//! assert_eq!(v.alpha, Some(3));
//! ```

pub mod cli;
pub mod counting;
pub mod error;
pub mod graph;
pub mod iso;
pub mod maximal;
pub mod sets;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{parse_graph, render_graph, Graph};
pub use sets::{
    enumerate_subcollections, parse_family, render_family, ElementSet, ElementTable, SetFamily,
    SubcollectionSelector,
};
