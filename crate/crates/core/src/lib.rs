//! Quantum and classical regression engine for bond dissociation energy
//! benchmarking: statevector simulation, parameterized circuits, five
//! quantum regressors, three classical baselines, a SMILES-subset parser,
//! dataset curation, and the evaluation metrics that tie them together.

pub mod chem;
pub mod circuits;
pub mod cmodels;
pub mod data;
pub mod metrics;
pub mod model;
pub mod optimize;
pub mod qmodels;
pub mod seeding;
pub mod statevector;

mod matrix;

pub use matrix::Matrix;
