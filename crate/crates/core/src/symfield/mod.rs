//! Exact arithmetic in the field of rational functions over the integers.
//!
//! Variables are registered in a [`VarRegistry`]; polynomials store only
//! dense variable ids. [`Rf`] keeps fractions in a cheap normal form and
//! decides equality by cross-multiplication, so full GCD reduction is only
//! an expression-swell control.

mod gcd;
mod modgcd;
mod monomial;
mod parse;
mod poly;
mod ratfun;
mod registry;
mod render;

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use gcd::{content_in, gcd, gcd_cofactors};
pub use monomial::Monomial;
pub use parse::parse_rf;
pub use poly::Poly;
pub use ratfun::{Rf, Substitution};
pub use registry::{Var, VarKind, VarRegistry};
pub use render::{poly_json, poly_latex, poly_text};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("denominator vanishes identically")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("variable {0} has no value")]
    Unassigned(String),
    #[error("unknown variable id {0}")]
    UnknownVar(u32),
    #[error("variable {0} already registered with a different kind")]
    KindConflict(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Number types a rational function can be evaluated in.
pub trait Scalar:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_bigint(c: &BigInt) -> Self;

    /// False for NaN and infinities.
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for BigRational {
    fn from_bigint(c: &BigInt) -> Self {
        BigRational::from_integer(c.clone())
    }
}

impl Scalar for f64 {
    fn from_bigint(c: &BigInt) -> Self {
        c.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

static GCD_THRESHOLD: AtomicUsize = AtomicUsize::new(512);

/// Combined term count of numerator and denominator above which arithmetic
/// results are reduced by a full GCD.
pub fn gcd_threshold() -> usize {
    GCD_THRESHOLD.load(Ordering::Relaxed)
}

pub fn set_gcd_threshold(terms: usize) {
    GCD_THRESHOLD.store(terms, Ordering::Relaxed);
}
