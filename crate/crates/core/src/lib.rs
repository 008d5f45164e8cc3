pub mod cdga;
pub mod cli;
pub mod error;
pub mod gca;
pub mod homology;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod scalar;
