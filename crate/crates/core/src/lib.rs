//! Branch and prune for numerical constraint problems, parallelised with
//! lifeline-based work stealing.
//!
//! A [`Problem`](expr::Problem) is a box of real variables with equations
//! `f(x) = 0` and strict inequalities `g(x) < 0`. Solving it yields a
//! [`Paving`](search::Paving): boxes proven to hold exactly one solution,
//! boxes proven to lie inside the solution set, and undecided boxes narrower
//! than the requested precision. No solution is ever lost.
//!
//! ```
//! use ncsp::builtin::eco;
//! use ncsp::glb::{run_workers, Backend, GlbConfig};
//! use ncsp::search::solve_sequential;
//!
//! let p = eco(4);
//! let (paving, _) = solve_sequential(&p, 1e-8);
//! assert_eq!(paving.unique_count(), 2);
//!
//! let cfg = GlbConfig::preset(3, 4).unwrap();
//! let out = run_workers(&p, 1e-8, &cfg, Backend::simulation()).unwrap();
//! assert_eq!(out.paving().canonical(), paving.canonical());
//! ```
//!
//! Modules, bottom up:
//!
//! - [`interval`]: outward-rounded interval arithmetic and boxes.
//! - [`expr`]: expressions, constraints, problems and HC4Revise.
//! - [`contractor`]: the prune step (propagation, interval Newton,
//!   inner-box verification).
//! - [`search`]: the branch-and-prune task queue with split and merge.
//! - [`glb`]: the parallel scheduler on threads or in simulation.
//! - [`parse`], [`builtin`], [`report`]: problem text format, benchmark
//!   problems, and statistics output.

pub mod builtin;
pub mod contractor;
pub mod expr;
pub mod glb;
pub mod interval;
pub mod parse;
pub mod report;
pub mod search;
