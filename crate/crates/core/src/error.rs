use thiserror::Error;

/// Failure modes of the numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A denominator factor vanished (modulus below the pole threshold).
    #[error("pole in {context}: denominator factor of modulus {modulus:e}")]
    Pole { context: String, modulus: f64 },
    /// The balancing condition `t^(2n-2) t0 t1 t2 t3 u0 u1 = pq` is violated.
    #[error("balancing condition violated (relative residual {residual:e})")]
    Balancing { residual: f64 },
    /// `t0 t1 = q^-m t^(1-n)` does not hold for the requested `m`.
    #[error("discrete specialization t0 t1 = q^-m t^(1-n) violated (relative residual {residual:e})")]
    Specialization { residual: f64 },
    /// An argument is outside the domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),
    /// A precondition on the combinatorial input does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An evaluation inside a small-p probe failed.
    #[error("probe evaluation failed at p = {p:e}: {message}")]
    Evaluation { p: f64, message: String },
    /// The valuation cannot be decided from first-order data.
    #[error("valuation undetermined: {0}")]
    Undetermined(String),
    /// A quadrature node came too close to a pole of the weight.
    #[error("quadrature pole guard tripped in {context} (modulus {modulus:e})")]
    PoleGuard { context: String, modulus: f64 },
    /// Requested problem size exceeds the supported range.
    #[error("size guard: {0}")]
    SizeGuard(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn pole(context: impl Into<String>, modulus: f64) -> Self {
        Error::Pole { context: context.into(), modulus }
    }
}

/// Rejects a denominator whose modulus is below the pole threshold.
pub(crate) fn guard<T: crate::scalar::Real>(
    x: crate::scalar::Cx<T>,
    context: impl Into<String>,
) -> Result<crate::scalar::Cx<T>> {
    let m = crate::scalar::modulus(x);
    if m < T::POLE {
        return Err(Error::pole(context, m));
    }
    Ok(x)
}
