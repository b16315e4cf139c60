//! Combinatorics of stable maps to the classifying stack `BGL_r`.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`] and [`canon`]: graphs in the flag formalism, decorations,
//!   canonical forms and isomorphism witnesses.
//! * [`modular`]: genus-decorated graphs, stability, and enumeration of
//!   stable graphs of a given genus and tail set.
//! * [`chain`]: chain-types, GI-types, the map between them, its fibers and
//!   the poset of boundary strata.
//! * [`decorated`]: chain-graphs and GI-graphs and the map from the latter
//!   to the former.
//! * [`stable_map`]: graph-level stable maps, their stabilization and
//!   combinatorial type, and the clutching constructions.
//! * [`document`] and [`dot`]: the JSON document format and DOT export.
//! * [`sampling`]: seeded generators and the clutch/extract property suite.
//!
//! ```
//! use bglr::chain::{enumerate_gi_types, ChainType, chain_fiber};
//!
//! assert_eq!(enumerate_gi_types(3).len(), 20);
//! let fiber = chain_fiber(&ChainType::new(vec![1, 1]).unwrap(), 2).unwrap();
//! assert_eq!(fiber.len(), 3);
//! ```

pub mod canon;
pub mod chain;
pub mod decorated;
pub mod document;
pub mod dot;
pub mod graph;
pub mod modular;
pub mod sampling;
pub mod stable_map;

pub use canon::{CanonicalForm, Decorations, Isomorphism, Label};
pub use chain::{ChainType, GiType, RankSubset, StrataPoset};
pub use decorated::{ChainGraph, GiGraph, TargetSignature};
pub use graph::Graph;
pub use modular::ModularGraph;
pub use stable_map::{ContractionData, StableMapModel};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/chain-types.md")]
    mod chain_types {}
    #[doc = include_str!("../../../book/src/strata.md")]
    mod strata {}
    #[doc = include_str!("../../../book/src/decorated.md")]
    mod decorated {}
    #[doc = include_str!("../../../book/src/stable-maps.md")]
    mod stable_maps {}
    #[doc = include_str!("../../../book/src/documents.md")]
    mod documents {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
