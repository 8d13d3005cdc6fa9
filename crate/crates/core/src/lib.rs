pub mod bincodes;
pub mod checks;
pub mod error;
pub mod f2;
pub mod intmat;
pub mod kleinian;
pub mod lattices;
pub mod qseries;
pub mod text;
pub mod voamod;

pub use error::{Error, Result};
