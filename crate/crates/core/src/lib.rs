pub mod annulus;
pub mod boundary;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod mesh;
pub mod minimality;
pub mod numerics;
pub mod plateau;
pub mod surfaces;

pub use error::{Error, Result};
