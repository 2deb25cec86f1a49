pub mod casimir;
pub mod charts;
pub mod cli;
pub mod darboux;
pub mod dynamics;
pub mod expr;
pub mod linalg;
pub mod models;
pub mod structure;
