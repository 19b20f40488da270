// `!(x > 0)` guards must stay negated: they reject NaN, which `x <= 0`
// would accept. Index loops walk several tables in lockstep.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

//! Common best proximity points of mapping pairs on finite metric spaces.
//!
//! Given nonempty subsets `s1`, `s2` of a finite metric space and a pair of
//! mappings `phi, psi : s1 -> s2`, a common best proximity point is a single
//! point of `s1` whose distances to both of its images attain the set
//! distance `d(s1, s2)` — the simultaneous global minimum of the two error
//! functions `x -> d(x, phi x)` and `x -> d(x, psi x)`. This crate decides
//! that problem constructively:
//!
//! * [`space`] — finite metric spaces with exact axiom validation;
//! * [`problem`] — subset/mapping pairs, set distance, proximal cores, and
//!   the brute-force oracle;
//! * [`ffunc`] — the strictly increasing comparison functions driving the
//!   contraction-style conditions;
//! * [`certify`] — exhaustive certification of proximal domination, weak
//!   domination, and the weak-contraction condition, with maximal margins
//!   and deterministic witnesses;
//! * [`solver`] — hypothesis checks, the alternating iteration, the margin
//!   audit, and the fixed-point iteration, every result cross-checked
//!   against the oracle;
//! * [`gallery`] — built-in instances;
//! * [`fileio`] / [`report`] — the problem-file format and the report
//!   emitters.
//!
//! Everything is generic over the scalar type via `num-traits`; the aliases
//! below fix `f64`, the precision the file format is defined against.
//!
//! ```
//! use proximity_core::{certify, gallery, solver, Func};
//!
//! let problem = gallery::build_ex22::<f64>(&[])?;
//! let f = Func::log();
//!
//! // psi weakly dominates phi proximally, with maximal margin ln 2.
//! let report = certify::certify_f_weak_domination(&problem, &f)?;
//! assert!(report.holds);
//!
//! // The constructive pipeline finds the unique common best proximity
//! // point and cross-checks it against the brute-force oracle.
//! let trace = solver::solve(&problem, &f, None, 64)?;
//! assert_eq!(trace.result.as_deref(), Some("(-1,5)"));
//! # Ok::<(), proximity_core::Error>(())
//! ```

pub mod certify;
pub mod error;
pub mod ffunc;
pub mod fileio;
pub mod gallery;
pub mod problem;
pub mod real;
pub mod report;
pub mod solver;
pub mod space;

pub use error::{Error, ParseError, Result};
pub use real::Real;

/// `f64` metric space.
pub type Space = space::FiniteMetricSpace<f64>;
/// `f64` proximity problem.
pub type Problem = problem::ProximityProblem<f64>;
/// `f64` comparison function.
pub type Func = ffunc::FFunction<f64>;
/// `f64` certification report.
pub type Report = certify::CertificationReport<f64>;
/// `f64` solver trace.
pub type Trace = solver::SolverTrace<f64>;
