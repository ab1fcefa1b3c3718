//! Consensus analysis for networks of damped second-order agents on ring
//! digraphs.
//!
//! Each agent obeys `x' = v`, `v' = -γ v + u` and observes the relative
//! positions of one or two ring neighbours. The crate covers:
//!
//! * [`topology`]: the alternating ring, the cyclic pursuit cycle and the
//!   bidirectional ring, with their Laplacians;
//! * [`spectra`]: closed-form Laplacian spectra, the Cassini-oval locus, and
//!   two independent oracles (an Aberth root finder and Faddeev–LeVerrier);
//! * [`consensus`]: the Ω-region test for `φ(s) = s² + γs`, closed-loop
//!   spectra, the damping threshold `γ > √(6/7)` and bisected consensus
//!   margins;
//! * [`sim`]: RK4 integration of the closed-loop network.

// `!(a < b)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod complex;
pub mod consensus;
mod error;
pub mod poly;
pub mod report;
pub mod rng;
pub mod roots;
pub mod sim;
pub mod spectra;
pub mod topology;

pub use complex::ComplexValue;
pub use consensus::{AgentModel, MarginResult};
pub use error::{Error, Result};
pub use poly::Polynomial;
pub use sim::{SimConfig, Trajectory};
pub use spectra::{Sign, SpectrumReport, SpectrumSource};
pub use topology::{Digraph, LaplacianMatrix, Network, Topology};
