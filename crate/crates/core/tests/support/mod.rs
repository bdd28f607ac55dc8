#![allow(dead_code)]

pub mod abnf;
pub mod analytics_oracle;
