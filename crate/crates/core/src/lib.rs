//! Circuits, simulation and universal circuit templates.

pub mod circuit;
pub mod depth_universal;
pub mod encoding;
pub mod gadgets;
pub mod grid;
pub mod random;
pub mod sim;
pub mod size_universal;

pub use circuit::{Circuit, CircuitBuilder, Gate, GateFamily, GateKind, Layer};
pub use encoding::{Encoding, RegisterLayout, SlotMap};
