pub mod algstruct;
pub mod chain;
pub mod cobar;
pub mod comod;
pub mod coring;
pub mod corpus;
pub mod error;
pub mod hopfgalois;
pub mod linalg;
pub mod postnikov;
pub mod relative;

pub use error::{Error, Result, Verdict, Violation};
