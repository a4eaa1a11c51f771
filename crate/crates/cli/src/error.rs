//! Mapping failures to process exit codes.

use crate::config::ConfigError;

/// Failure class reported through the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Other = 1,
    Config = 2,
    Io = 3,
    Data = 4,
    Numerical = 5,
    Check = 6,
}

impl Category {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn label(self) -> &'static str {
        match self {
            Category::Other => "error",
            Category::Config => "config",
            Category::Io => "io",
            Category::Data => "data",
            Category::Numerical => "numerical",
            Category::Check => "selftest",
        }
    }
}

/// At least one self-test check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure(pub usize);

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} self-test check(s) failed", self.0)
    }
}

impl std::error::Error for CheckFailure {}

/// Category of the innermost recognised cause.
pub fn categorize(err: &anyhow::Error) -> Category {
    let mut found = Category::Other;
    for cause in err.chain() {
        let c = if cause.is::<ConfigError>() || cause.is::<toml::de::Error>() {
            Category::Config
        } else if cause.is::<std::io::Error>() {
            Category::Io
        } else if cause.is::<CheckFailure>() {
            Category::Check
        } else if let Some(e) = cause.downcast_ref::<dsmap_core::Error>() {
            match e {
                dsmap_core::Error::Config(_) => Category::Config,
                dsmap_core::Error::Parse { .. }
                | dsmap_core::Error::DataIntegrity(_)
                | dsmap_core::Error::EmptySelection(_) => Category::Data,
                _ => Category::Numerical,
            }
        } else {
            continue;
        };
        found = c;
    }
    found
}
