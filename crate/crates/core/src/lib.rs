//! Core of the language-resource catalogue: the entry model and its rules,
//! BCP 47 tags, locations, the versioned store, second-reviewer validation
//! and the distribution reports.

pub mod analytics;
pub mod geo;
pub mod langtag;
pub mod review;
pub mod schema;
pub mod store;

#[cfg(any(test, feature = "testing"))]
pub mod testing;
