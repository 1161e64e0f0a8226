use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),

    #[error("Y_{nu}({x}) overflows double precision")]
    Saturated { nu: f64, x: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("no sign change found while scanning [{from}, {to}]")]
    Bracketing { from: f64, to: f64 },

    #[error("invalid angular set: {0}")]
    InvalidSet(&'static str),

    #[error("S and T share the value {value}")]
    SetCollision { value: f64 },

    #[error("singular configuration: {0}")]
    Singular(&'static str),

    #[error("no admissible shifted set: {0}")]
    NoValidT(&'static str),

    #[error("phase map is inconsistent, imaginary residue {residue:e}")]
    Inconsistent { residue: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),

    #[error("resonant configuration: L(L+1) = l(l+1) for l = {ell}")]
    Resonant { ell: u32 },

    #[error("Fredholm determinant vanishes near r = {r}")]
    Inadmissible { r: f64 },

    #[error("asymptotic tail has not been fitted; increase the cutoff")]
    TailUnfitted,

    #[error(
        "phase fit residual {residual:e} exceeds tolerance; extend the window past r = {r_end}"
    )]
    WindowTooSmall { residual: f64, r_end: f64 },
}
