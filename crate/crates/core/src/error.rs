use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register size {requested} outside supported range {min}..={max}")]
    Size {
        requested: usize,
        min: usize,
        max: usize,
    },

    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    Index { index: usize, num_qubits: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("histogram carries no probability mass in the decoded bins")]
    EmptyHistogram,

    /// Inversion for `sin δ` with a vanishing `2SC` denominator.
    #[error("singular configuration: 2SC = {two_sc:e} is below {min:e}")]
    Singular { two_sc: f64, min: f64 },

    #[error(
        "inconsistent estimate: sin(delta) = {value} exceeds [-1, 1] by more than {tolerance}"
    )]
    Inconsistent { value: f64, tolerance: f64 },

    #[error("branch error: {0}")]
    Branch(String),

    #[error("overlap magnitude {magnitude:e} too small, phase undefined")]
    UndefinedPhase { magnitude: f64 },
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Size { .. } => "size",
            Error::Index { .. } => "index",
            Error::Config(_) => "configuration",
            Error::EmptyHistogram => "empty_histogram",
            Error::Singular { .. } => "singular_configuration",
            Error::Inconsistent { .. } => "inconsistent_estimate",
            Error::Branch(_) => "branch",
            Error::UndefinedPhase { .. } => "undefined_phase",
        }
    }
}

/// Non-fatal diagnostics carried alongside results.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum Warning {
    /// Decoded windows hold less mass than the coverage threshold.
    Leakage {
        register: String,
        coverage: f64,
        threshold: f64,
    },
    /// `sin δ` estimate fell slightly outside `[-1, 1]` and was clamped.
    SinDeltaClamped { raw: f64 },
    /// `η` outside `(-π/2, π/2]`: nonnegative `C`, `S` roots may be the wrong branch.
    BranchAmbiguity { eta: f64 },
    /// `cos(η/2) <= 0`: the path-1 overlap argument sits on the `π` branch.
    Path1Branch { eta: f64 },
    /// Closed-form `θ` differs from the overlap argument by a multiple of `π`.
    ThetaBranchFolded { closed_form: f64, overlap_arg: f64 },
}

impl Warning {
    pub fn code(&self) -> &'static str {
        match self {
            Warning::Leakage { .. } => "leakage",
            Warning::SinDeltaClamped { .. } => "sin_delta_clamped",
            Warning::BranchAmbiguity { .. } => "branch_ambiguity",
            Warning::Path1Branch { .. } => "path1_branch",
            Warning::ThetaBranchFolded { .. } => "theta_branch_folded",
        }
    }
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::Leakage {
                register,
                coverage,
                threshold,
            } => write!(
                f,
                "{register}: decoded windows cover {coverage:.6} of the mass (threshold {threshold})"
            ),
            Warning::SinDeltaClamped { raw } => {
                write!(f, "sin(delta) estimate {raw} clamped into [-1, 1]")
            }
            Warning::BranchAmbiguity { eta } => write!(
                f,
                "eta = {eta} lies outside (-pi/2, pi/2]; C, S sign branch is ambiguous"
            ),
            Warning::Path1Branch { eta } => {
                write!(f, "cos(eta/2) <= 0 for eta = {eta}; path-1 overlap argument is pi")
            }
            Warning::ThetaBranchFolded {
                closed_form,
                overlap_arg,
            } => write!(
                f,
                "closed-form theta {closed_form} and overlap argument {overlap_arg} differ by a multiple of pi"
            ),
        }
    }
}
