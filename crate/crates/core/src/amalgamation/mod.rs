//! Amalgamation of embedding diagrams, separation, and property scans.

mod enumerate;
mod scans;
mod separation;

pub(crate) use enumerate::for_each_amalgam;
pub use enumerate::{enumerate_amalgamations, AmalgamationDiagram, Identification};
pub use scans::{
    amalgamation_property_scan, oddness_scan, strong_amalgamation_scan, DiagramWitness, ScanMode,
    ScanReport,
};
pub use separation::{is_separated, self_pair_class_count, SeparationQuery};
pub(crate) use separation::{self_pairs, separated};
