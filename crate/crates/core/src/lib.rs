//! Oriented colouring toolkit: exact oriented chromatic numbers, deeply
//! critical oriented cliques, the 2/4/6-extension constructions, circulant
//! scans and isomorph-free censuses of small oriented graphs.

pub mod canon;
pub mod circulant;
pub mod colouring;
pub mod enumeration;
pub mod error;
pub mod extension;
pub mod graph;
pub mod verify;

pub use canon::{canonical_code, CanonicalCode};
pub use colouring::{chi_o, exists_colouring, is_deeply_critical, ColouringCertificate};
pub use error::{Error, Result};
pub use graph::{Arc, OrientedGraph};
