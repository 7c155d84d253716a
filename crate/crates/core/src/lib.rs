pub mod acceptance;
pub mod curve;
pub mod diagram;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod io;
pub mod pendulum;
pub mod real;
pub mod render;
pub mod uniformization;

pub use error::{Error, Result};
pub use real::{Point, Real};
