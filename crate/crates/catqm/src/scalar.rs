//! Scalar carriers for the two evaluation backends: complex numbers and
//! booleans. Both are commutative semirings with an involutive conjugation.

use crate::term::{PrimData, ScalarLiteral};
use num_complex::Complex64;
use std::fmt::Debug;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendKind {
    FdHilb,
    Rel,
}

impl BackendKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BackendKind::FdHilb => "fdhilb",
            BackendKind::Rel => "rel",
        }
    }
}

impl std::str::FromStr for BackendKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fdhilb" => Ok(BackendKind::FdHilb),
            "rel" => Ok(BackendKind::Rel),
            other => Err(format!("unknown backend {other:?} (expected fdhilb or rel)")),
        }
    }
}

/// Evaluation backend selection plus the numeric tolerance used by
/// approximate comparisons. The relational backend compares exactly and
/// ignores the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backend {
    pub kind: BackendKind,
    pub tol: f64,
}

pub const DEFAULT_TOL: f64 = 1e-9;

impl Backend {
    pub fn fdhilb() -> Self {
        Backend { kind: BackendKind::FdHilb, tol: DEFAULT_TOL }
    }

    pub fn rel() -> Self {
        Backend { kind: BackendKind::Rel, tol: DEFAULT_TOL }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

impl Default for Backend {
    fn default() -> Self {
        Backend::fdhilb()
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LiteralError {
    #[error("scalar {re}{im:+}i is not a relational scalar (only 0 and 1 are)")]
    NotBoolean { re: f64, im: f64 },
}

/// Semiring of scalars together with the extra structure the backends share:
/// conjugation, a partial division used for up-to-scalar comparison, a
/// modulus for picking pivot entries, and conversions from syntax literals.
pub trait ScalarRing: Clone + PartialEq + Debug + 'static {
    const BACKEND: BackendKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;

    /// Modulus; used to pick the pivot entry for scalar extraction.
    fn abs(&self) -> f64;

    /// Tolerance comparison `|x - y| <= tol * max(1, |x|, |y|)`; exact for
    /// the boolean carrier.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// `self / other` when `other` divides; `None` otherwise.
    fn div(&self, other: &Self) -> Option<Self>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn from_literal(lit: ScalarLiteral) -> Result<Self, LiteralError>;
    fn to_literal(&self) -> ScalarLiteral;

    /// This backend's matrix literal of a primitive, if declared.
    fn prim_entries(p: &PrimData) -> Option<Vec<Self>>;
    /// This backend's declared inverse literal, if any.
    fn prim_inverse_entries(p: &PrimData) -> Option<Vec<Self>>;

    /// Store `entries` into the matching backend slot of a primitive.
    fn fill_prim(p: &mut PrimData, entries: Vec<Self>);
}

impl ScalarRing for Complex64 {
    const BACKEND: BackendKind = BackendKind::FdHilb;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn abs(&self) -> f64 {
        self.norm()
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = (self - other).norm();
        diff <= tol * 1f64.max(self.norm()).max(other.norm())
    }

    fn div(&self, other: &Self) -> Option<Self> {
        if other.norm() == 0.0 {
            None
        } else {
            Some(self / other)
        }
    }

    fn from_literal(lit: ScalarLiteral) -> Result<Self, LiteralError> {
        Ok(Complex64::new(lit.re, lit.im))
    }

    fn to_literal(&self) -> ScalarLiteral {
        ScalarLiteral::new(self.re, self.im)
    }

    fn prim_entries(p: &PrimData) -> Option<Vec<Self>> {
        p.fdhilb
            .as_ref()
            .map(|v| v.iter().map(|l| Complex64::new(l.re, l.im)).collect())
    }

    fn prim_inverse_entries(p: &PrimData) -> Option<Vec<Self>> {
        p.fdhilb_inv
            .as_ref()
            .map(|v| v.iter().map(|l| Complex64::new(l.re, l.im)).collect())
    }

    fn fill_prim(p: &mut PrimData, entries: Vec<Self>) {
        p.fdhilb = Some(entries.iter().map(|c| c.to_literal()).collect());
    }
}

impl ScalarRing for bool {
    const BACKEND: BackendKind = BackendKind::Rel;

    fn zero() -> Self {
        false
    }

    fn one() -> Self {
        true
    }

    fn add(&self, other: &Self) -> Self {
        *self || *other
    }

    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }

    fn conj(&self) -> Self {
        *self
    }

    fn abs(&self) -> f64 {
        if *self {
            1.0
        } else {
            0.0
        }
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn div(&self, other: &Self) -> Option<Self> {
        if *other {
            Some(*self)
        } else {
            None
        }
    }

    fn from_literal(lit: ScalarLiteral) -> Result<Self, LiteralError> {
        lit.as_bool().ok_or(LiteralError::NotBoolean { re: lit.re, im: lit.im })
    }

    fn to_literal(&self) -> ScalarLiteral {
        if *self {
            ScalarLiteral::one()
        } else {
            ScalarLiteral::zero()
        }
    }

    fn prim_entries(p: &PrimData) -> Option<Vec<Self>> {
        p.rel.clone()
    }

    fn prim_inverse_entries(p: &PrimData) -> Option<Vec<Self>> {
        p.rel_inv.clone()
    }

    fn fill_prim(p: &mut PrimData, entries: Vec<Self>) {
        p.rel = Some(entries);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_semiring_is_or_and() {
        assert!(true.add(&false));
        assert!(!false.add(&false));
        assert!(true.mul(&true));
        assert!(!true.mul(&false));
        assert!(true.add(&true), "addition is idempotent, not carrying");
    }

    #[test]
    fn rel_rejects_non_boolean_literals() {
        assert!(<bool as ScalarRing>::from_literal(ScalarLiteral::real(0.5)).is_err());
        assert!(<bool as ScalarRing>::from_literal(ScalarLiteral::new(0.0, 1.0)).is_err());
        assert_eq!(<bool as ScalarRing>::from_literal(ScalarLiteral::real(1.0)), Ok(true));
    }

    #[test]
    fn complex_tolerance_is_mixed_relative_absolute() {
        let a = Complex64::new(1e12, 0.0);
        let b = Complex64::new(1e12 + 1.0, 0.0);
        assert!(a.approx_eq(&b, 1e-9), "relative slack scales with magnitude");
        let c = Complex64::new(0.0, 0.0);
        let d = Complex64::new(1e-12, 0.0);
        assert!(c.approx_eq(&d, 1e-9), "absolute slack near zero");
        assert!(!c.approx_eq(&Complex64::new(1e-6, 0.0), 1e-9));
    }
}
