pub mod base;
pub mod bundle;
pub mod crossed;
pub mod error;
pub mod functorial;
pub mod gerbal;
pub mod group;
pub mod instance;
pub mod oracle;
pub mod presets;
pub mod quotient;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
pub use report::Report;
