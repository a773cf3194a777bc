use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::galerkin::Trajectory;
use crate::minimize::MinimizeResult;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone)]
pub enum Error {
    /// A domain, parameter or tolerance violates its documented range.
    InvalidSpec(String),
    /// The L_q norm of the argument vanishes.
    ZeroDenominator,
    /// The seed bump has no mass left after Dirichlet zeroing.
    DegenerateSeed,
    /// The iteration budget ran out; carries the best iterate found.
    BudgetExceeded(Box<MinimizeResult>),
    InvalidTiling(String),
    /// The requested parities cannot close around some lattice vertex.
    Obstruction(String),
    /// Folding did not reach the fundamental domain within the cap.
    FoldCapExceeded,
    InvalidRadii,
    Precondition(String),
    InvalidGrid(String),
    ZeroMass,
    /// Non-finite state in an ODE integration.
    NumericalFailure { at: f64 },
    /// Same as [`Error::NumericalFailure`], keeping the trajectory computed so far.
    Diverged(Box<Trajectory>),
    Bracket(String),
    SingularMatrix,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid spec: {msg}"),
            Error::ZeroDenominator => f.write_str("zero denominator: field has vanishing L_q norm"),
            Error::DegenerateSeed => f.write_str("degenerate seed: bump vanishes on the free vertices"),
            Error::BudgetExceeded(best) => write!(
                f,
                "iteration budget exceeded after {} iterations (grad_sup {:e})",
                best.iterations, best.grad_sup
            ),
            Error::InvalidTiling(msg) => write!(f, "invalid tiling: {msg}"),
            Error::Obstruction(msg) => write!(f, "sign obstruction: {msg}"),
            Error::FoldCapExceeded => f.write_str("fold cap exceeded: pattern does not tile the plane"),
            Error::InvalidRadii => f.write_str("invalid radii: need rho_prime > rho > 0"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::ZeroMass => f.write_str("zero mass: field vanishes identically"),
            Error::NumericalFailure { at } => write!(f, "numerical failure: non-finite state at x = {at}"),
            Error::Diverged(traj) => write!(
                f,
                "numerical failure: non-finite state after {} samples",
                traj.samples.len()
            ),
            Error::Bracket(msg) => write!(f, "bracket error: {msg}"),
            Error::SingularMatrix => f.write_str("singular matrix in linear solve"),
        }
    }
}

impl Error {
    /// True for errors caused by invalid input rather than by a solver failing.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::BudgetExceeded(_)
                | Error::NumericalFailure { .. }
                | Error::Diverged(_)
                | Error::SingularMatrix
                | Error::FoldCapExceeded
        )
    }
}

impl core::error::Error for Error {}
