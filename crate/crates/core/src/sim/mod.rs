//! Desk-scale layered codec simulator.

pub mod corpus;
pub mod image;
pub mod pipeline;
pub mod quant;
pub mod transform;
