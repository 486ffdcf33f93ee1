//! Desk-scale geometry of right-angled Artin groups.
//!
//! Everything is exact and truncated explicitly: balls in Cayley graphs,
//! extension graphs and buildings are generated to a radius and a word
//! length bound, and every certificate says which truncation it used.

pub mod blowup;
pub mod building;
pub mod coupling;
pub mod dictionary;
pub mod error;
pub mod ext;
pub mod flats;
pub mod graph;
pub mod lab;
pub mod projections;
pub mod words;

pub use blowup::{BlowupComplex, BlowupDatum, BranchedLine, TableSpec, YCell, YVertex};
pub use coupling::{CocycleTable, CylinderSpace, Generator, Support};
pub use building::{BuildingBall, Cube, FlagReport, FlagViolation, GeodesicCheck, HatElement, ProductSplit, VertexLink};
pub use dictionary::{PartialAutomorphism, PointMap, TableMap, Translation};
pub use error::{Error, Result};
pub use ext::{ExtBall, ExtVertex};
pub use flats::{ProductRegion, StandardCoset, StandardFlat};
pub use projections::{FactorTable, Gate, StraightenReport};
pub use lab::{LabeledDigraph, QEmbedding, TypeCocycleTable};
pub use graph::{SimplicialGraph, VertexSet};
pub use words::{Raag, Syllable, Word};
