//! Full-duplex many-antenna base-station simulator.
//!
//! The array is split into transmit and receive groups. The transmit group
//! projects its downlink onto the singular directions of the
//! self-interference channel that couple least into the receive group,
//! trading effective transmit antennas for self-interference suppression.
//! The crate provides the linear algebra, array geometry, channel models,
//! precoders, a dynamic-range receiver model, rate computation and the
//! experiment runners behind the `softnull` command-line tool.

pub mod channels;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod link;
pub mod numerics;
pub mod precoding;

pub use channels::ChannelSet;
pub use error::{Error, Result};
pub use geometry::{ArrayGeometry, Partition, PartitionKind};
pub use link::{LinkConfig, NoiseMode, RateReport, Scheme};
pub use numerics::{Complex64, ComplexMatrix};
pub use precoding::{SoftNullBasis, SoftNullPrecoder};
