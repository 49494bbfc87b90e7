//! First-order Marcum Q-function: a cross-checked reference evaluator,
//! closed-form upper and lower bounds, and the numerical checks around them.
//!
//! ```
//! use marcum_core::{q1_reference, ub1jp, QArgs};
//!
//! let args = QArgs::new(0.1, 0.5).unwrap();
//! let exact = q1_reference(args).unwrap().value;
//! let upper = ub1jp(args).unwrap();
//! assert!(upper.raw >= exact);
//! ```

pub mod analysis;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod specfun;

pub use bounds::{
    compute_zeta, eval_all, evaluate, lb1jp, lb1jp_direct, lb1jp_limit_branch, lb2a_with_form,
    lb2jp, literature_bound, regime_of, ub1jp, ub2jp, BoundEval, BoundId, BoundOutcome, Lb2aForm,
    Regime, Side, Zeta,
};
pub use error::{Error, Result};
pub use oracle::{
    q1_complement_quadrature, q1_quadrature, q1_reference, q1_series, q1_tail_quadrature, rice_pdf,
    OracleResult, QArgs,
};
