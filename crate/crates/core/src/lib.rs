//! Exact and numerical verification toolkit for a rigid Calabi-Yau threefold
//! built as a quotient of a Siegel modular threefold.

pub mod arrangement;
pub mod config;
pub mod counting;
pub mod deform;
pub mod field;
pub mod fixloci;
pub mod k3fib;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod suite;
pub mod thetamod;
pub mod topology;
pub mod varieties;
