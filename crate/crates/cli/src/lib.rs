//! Library side of the `minimax-bounds` binary: bound dispatch, the
//! reproduction manifest and output rendering.

pub mod compute;
pub mod manifest;
pub mod render;

pub use compute::{bound_specs, compute, parse_loss, BoundSpec, Outcome};
pub use manifest::{parse_manifest, run_manifest, ManifestEntry, Metric, ReproEntry, Tolerance, DEFAULT_MANIFEST};
pub use render::{fmt_sig, Format};

use minimax_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Usage(String),

    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },

    #[error("manifest has no entries")]
    EmptyManifest,

    #[error("cannot read `{path}`: {source}")]
    Read { path: String, source: std::io::Error },

    #[error("output failed: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for anything the caller got wrong, 3 for numerical trouble.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(CoreError::InvariantViolation(_)) => 3,
            CliError::Output(_) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
