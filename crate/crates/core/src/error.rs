use crate::symexpr::Generator;

/// Unified error type for the symbolic kernel and its numeric oracle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Partial derivatives are taken along coordinate generators only;
    /// parameters are constants of the problem.
    #[error("cannot differentiate with respect to parameter `{0}`")]
    ParameterDerivative(Generator),

    /// Coordinate generators carry non-negative exponents by construction.
    #[error("negative power of coordinate generator `{0}`")]
    NegativeCoordinatePower(Generator),

    /// Inversion is defined for single-term, parameter-only expressions with
    /// a nonzero coefficient (the exponential factor inverts by negation).
    #[error("expression is not invertible: {0}")]
    NonInvertible(String),

    /// Exponential arguments must stay polynomial; a substitution or
    /// construction tried to nest an exponential inside another.
    #[error("nested exponential factor in exponent argument")]
    NestedExponential,

    /// Textual expression could not be parsed.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Stress tensor and wavevector components live in 0..=3.
    #[error("spacetime index {0} out of range (expected 0..=3)")]
    IndexOutOfRange(usize),

    /// Hypersurface integration multiplies by a volume and is only sound for
    /// integrands that do not depend on the spatial coordinates.
    #[error("integrand depends on coordinate `{0}`; cannot integrate over a hypersurface")]
    SpacetimeDependentIntegrand(Generator),

    /// Volume fixing rewrites L^{3n} as V^n and requires the L exponent of
    /// every term to be divisible by three.
    #[error("L exponent {0} is not a multiple of 3; cannot rewrite in volume form")]
    VolumeNotCubed(i64),

    /// Hypersurface integration is defined only with the volume identified,
    /// i.e. in volume mode V.
    #[error("hypersurface integration requires volume mode V (L^3 identified with V)")]
    VolumeModeRequired,

    /// The numeric Klein-Gordon grid check needs a wavevector satisfying the
    /// dispersion relation.
    #[error("wavevector violates the dispersion relation (relative defect {defect:.3e})")]
    OffShellWavevector { defect: f64 },

    /// Numeric evaluation found a generator with no assigned value.
    #[error("no numeric assignment for generator `{0}`")]
    MissingAssignment(Generator),

    /// Eigenvalue extraction divides by the pulled-back state and the state
    /// choice must keep that denominator invertible.
    #[error("pulled-back state is not invertible: {0}")]
    StateNotInvertible(String),

    /// The normalization constant of a state profile must be nonzero.
    #[error("zero normalization constant")]
    ZeroNormalization,
}
