//! Protocol verification: teleportation (with normalisation and negative
//! controls), entanglement swapping, gate teleportation, and the composite
//! law every one of them relies on.

use crate::eval::{eval, EvalError};
use crate::matrix::{Matrix, ShapeError};
use crate::object::ObjectType;
use crate::ops::equal_up_to_scalar;
use crate::scalar::{BackendKind, ScalarRing};
use crate::term::{
    beta, biproduct_map, dist_left, dist_right, epr_name, qubit, ScalarLiteral, Term,
};
use crate::typecheck::{typecheck, TypeError};
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ProtocolError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("gate is not unitary within tolerance {tol}")]
    NotUnitary { tol: f64 },
    #[error("left and right sides have different judgments: {lhs} vs {rhs}")]
    JudgmentMismatch { lhs: String, rhs: String },
}

/// How the two sides of a protocol claim are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Exact,
    UpToScalar,
    /// Slice the codomain biproduct into branches and compare each branch up
    /// to its own scalar.
    PerBranchUpToScalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchResult {
    /// 1-based branch index, matching the protocol narration.
    pub index: usize,
    pub pass: bool,
    pub scalar: Option<ScalarLiteral>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub protocol: String,
    pub backend: BackendKind,
    pub branches: Vec<BranchResult>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "protocol": self.protocol,
            "backend": self.backend.as_str(),
            "branches": self.branches.iter().map(|b| json!({
                "i": b.index,
                "pass": b.pass,
                "scalar": b.scalar.map(|s| json!([s.re, s.im])),
            })).collect::<Vec<_>>(),
            "pass": self.pass,
        })
    }
}

/// The four Bell states as columns, the corresponding single-qubit
/// morphisms `beta_i` (whose names the states are, up to `sqrt(2)`), and
/// the corrections `gamma_i = beta_i^-1`.
pub struct BellConstants {
    pub b: [Matrix<Complex64>; 4],
    pub beta: [Term; 4],
    pub gamma: [Term; 4],
}

pub fn bell_constants() -> BellConstants {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let col = |v: [f64; 4]| Matrix::column(v.iter().map(|&x| Complex64::new(x, 0.0)).collect());
    BellConstants {
        b: [
            col([s, 0.0, 0.0, s]),
            col([0.0, s, s, 0.0]),
            col([s, 0.0, 0.0, -s]),
            col([0.0, s, -s, 0.0]),
        ],
        beta: [beta(1), beta(2), beta(3), beta(4)],
        gamma: [
            Term::inv(beta(1)),
            Term::inv(beta(2)),
            Term::inv(beta(3)),
            Term::inv(beta(4)),
        ],
    }
}

/// Which correction stage the teleportation pipeline applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionMode {
    /// `beta_i^-1` on branch i: the protocol as intended.
    Standard,
    /// No correction: branch i outputs `beta_i` itself.
    Uncorrected,
    /// The same fixed `beta_k^-1` on every branch, as if the measurement
    /// outcome were never communicated. Only branch k can survive.
    Fixed(usize),
}

fn frac_1_sqrt_2() -> ScalarLiteral {
    ScalarLiteral::real(std::f64::consts::FRAC_1_SQRT_2)
}

/// The teleportation pipeline `Q -> (+)_{i=1..4} Q`: entangled pair
/// preparation, relocation, Bell-coname measurement, distribution of the
/// outcome, and branchwise correction.
fn teleportation_pipeline(prep_label: Term, normalized: bool, correction: CorrectionMode) -> Term {
    let q = qubit();
    let i = ObjectType::Unit;
    let units = vec![i.clone(); 4];

    let mut prep_name = Term::name(prep_label);
    if normalized {
        prep_name = Term::scalar_mul(frac_1_sqrt_2(), prep_name);
    }
    let prepare = Term::compose(
        Term::tensor(Term::Id(q.clone()), prep_name),
        Term::Rho(q.clone()),
    );

    let relocate = Term::Alpha(q.clone(), q.clone().dual(), q.clone());

    let conames: Vec<Term> = (1..=4)
        .map(|k| {
            let c = Term::coname(beta(k));
            if normalized {
                Term::scalar_mul(frac_1_sqrt_2(), c)
            } else {
                c
            }
        })
        .collect();
    let measure = Term::tensor(Term::Pairing(conames), Term::Id(q.clone()));

    let distribute = dist_right(&units, &q);
    let unit_legs: Vec<ObjectType> = (0..4).map(|_| i.clone().tensor(q.clone())).collect();
    let drop_units = biproduct_map(&vec![Term::inv(Term::Lambda(q.clone())); 4], &unit_legs);

    let mut stages = vec![prepare, relocate, measure, distribute, drop_units];
    let qs = vec![q.clone(); 4];
    match correction {
        CorrectionMode::Standard => {
            let fixes: Vec<Term> = (1..=4).map(|k| Term::inv(beta(k))).collect();
            stages.push(biproduct_map(&fixes, &qs));
        }
        CorrectionMode::Uncorrected => {}
        CorrectionMode::Fixed(k) => {
            stages.push(biproduct_map(&vec![Term::inv(beta(k)); 4], &qs));
        }
    }
    Term::pipeline(&stages)
}

/// Teleportation against its target `<1_Q>_{i=1..4}`. Unnormalised, each
/// branch is exactly the identity; normalised, each branch carries a
/// scalar of squared modulus 1/4.
pub fn teleportation_spec(normalized: bool) -> ProtocolSpec {
    let q = qubit();
    ProtocolSpec {
        name: if normalized { "teleportation-normalized".into() } else { "teleportation".into() },
        lhs: Term::Pairing(vec![Term::Id(q.clone()); 4]),
        rhs: teleportation_pipeline(Term::Id(q), normalized, CorrectionMode::Standard),
        comparison: Comparison::PerBranchUpToScalar,
    }
}

/// Variant pipelines used as controls: uncorrected branches should equal
/// `beta_i`, and a fixed correction (no classical communication) should
/// break every branch except the chosen one.
pub fn teleportation_variant(correction: CorrectionMode) -> ProtocolSpec {
    let q = qubit();
    let (name, lhs) = match correction {
        CorrectionMode::Standard => (
            "teleportation".to_string(),
            Term::Pairing(vec![Term::Id(q.clone()); 4]),
        ),
        CorrectionMode::Uncorrected => (
            "teleportation-uncorrected".to_string(),
            Term::Pairing((1..=4).map(beta).collect()),
        ),
        CorrectionMode::Fixed(k) => (
            format!("teleportation-fixed-{k}"),
            Term::Pairing(vec![Term::Id(q.clone()); 4]),
        ),
    };
    ProtocolSpec {
        name,
        lhs,
        rhs: teleportation_pipeline(Term::Id(q), false, correction),
        comparison: Comparison::PerBranchUpToScalar,
    }
}

/// Entanglement swapping: two maximally correlated pairs, a Bell coname on
/// the middle legs, branchwise correction on the last leg. Every branch of
/// the result is the maximally correlated state across the outer pair.
pub fn entanglement_swap_spec() -> ProtocolSpec {
    let q = qubit();
    let qd = q.clone().dual();
    let pair = qd.clone().tensor(q.clone());
    let i = ObjectType::Unit;
    let units = vec![i.clone(); 4];

    let two_pairs = Term::compose(
        Term::tensor(epr_name(&q), epr_name(&q)),
        Term::Lambda(i.clone()),
    );
    let open_right = Term::inv(Term::Alpha(qd.clone(), q.clone(), pair.clone()));
    let regroup_middle = Term::tensor(
        Term::Id(qd.clone()),
        Term::Alpha(q.clone(), qd.clone(), q.clone()),
    );
    let conames: Vec<Term> = (1..=4).map(|k| Term::coname(beta(k))).collect();
    let measure = Term::tensor(
        Term::Id(qd.clone()),
        Term::tensor(Term::Pairing(conames), Term::Id(q.clone())),
    );
    let distribute_inner = Term::tensor(Term::Id(qd.clone()), dist_right(&units, &q));
    let unit_legs: Vec<ObjectType> = (0..4).map(|_| i.clone().tensor(q.clone())).collect();
    let distribute_outer = dist_left(&qd, &unit_legs);
    let wrapped: Vec<ObjectType> = unit_legs.iter().map(|l| qd.clone().tensor(l.clone())).collect();
    let drop_units = biproduct_map(
        &vec![Term::tensor(Term::Id(qd.clone()), Term::inv(Term::Lambda(q.clone()))); 4],
        &wrapped,
    );
    let pairs = vec![pair.clone(); 4];
    let corrections = biproduct_map(
        &(1..=4)
            .map(|k| Term::tensor(Term::Id(qd.clone()), Term::inv(beta(k))))
            .collect::<Vec<_>>(),
        &pairs,
    );

    ProtocolSpec {
        name: "entanglement-swap".into(),
        lhs: Term::Pairing(vec![epr_name(&q); 4]),
        rhs: Term::pipeline(&[
            two_pairs,
            open_right,
            regroup_middle,
            measure,
            distribute_inner,
            distribute_outer,
            drop_units,
            corrections,
        ]),
        comparison: Comparison::PerBranchUpToScalar,
    }
}

/// Gate teleportation: teleporting through the name of a unitary `g`
/// applies `g`, once each branch is fixed with `g . beta_i^-1 . g+`.
pub fn gate_teleportation_spec(g: &Term, tol: f64) -> Result<ProtocolSpec, ProtocolError> {
    let q = qubit();
    let j = typecheck(g)?;
    if j.dom != q || j.cod != q {
        return Err(ProtocolError::Type(TypeError::TypeMismatch {
            expected: q.clone(),
            found: if j.dom != q { j.dom } else { j.cod },
            context: "gate teleportation expects a qubit endomorphism".into(),
        }));
    }
    let m = eval::<Complex64>(g)?;
    let md = m.adjoint();
    let id2 = Matrix::<Complex64>::identity(2);
    if !m.mul(&md)?.approx_eq(&id2, tol) || !md.mul(&m)?.approx_eq(&id2, tol) {
        return Err(ProtocolError::NotUnitary { tol });
    }

    let pipeline = teleportation_pipeline(g.clone(), false, CorrectionMode::Uncorrected);
    let qs = vec![q.clone(); 4];
    let fixes: Vec<Term> = (1..=4)
        .map(|k| {
            Term::compose(
                g.clone(),
                Term::compose(Term::inv(beta(k)), Term::dagger(g.clone())),
            )
        })
        .collect();
    let corrected = Term::compose(biproduct_map(&fixes, &qs), pipeline);
    Ok(ProtocolSpec {
        name: "gate-teleportation".into(),
        lhs: Term::Pairing(vec![g.clone(); 4]),
        rhs: corrected,
        comparison: Comparison::PerBranchUpToScalar,
    })
}

/// `lambda^-1 . (coname(f1) (x) 1) . alpha . (1 (x) name(f2)) . rho` equals
/// `f2 . f1`: sliding boxes along the correlated pair composes them.
pub fn compositionality_term(f1: &Term, f2: &Term) -> Result<Term, ProtocolError> {
    let j1 = typecheck(f1)?;
    let j2 = typecheck(f2)?;
    if j2.dom != j1.cod {
        return Err(ProtocolError::Type(TypeError::TypeMismatch {
            expected: j1.cod,
            found: j2.dom,
            context: "compositionality (middle object)".into(),
        }));
    }
    let (a, b, c) = (j1.dom, j1.cod, j2.cod);
    Ok(Term::pipeline(&[
        Term::Rho(a.clone()),
        Term::tensor(Term::Id(a.clone()), Term::name(f2.clone())),
        Term::Alpha(a, b.dual(), c.clone()),
        Term::tensor(Term::coname(f1.clone()), Term::Id(c.clone())),
        Term::inv(Term::Lambda(c)),
    ]))
}

/// Evaluate both routes of the composite law and compare within `tol`.
pub fn compositionality_check<S: ScalarRing>(
    f1: &Term,
    f2: &Term,
    tol: f64,
) -> Result<bool, ProtocolError> {
    let lhs = eval::<S>(&Term::compose(f2.clone(), f1.clone()))?;
    let rhs = eval::<S>(&compositionality_term(f1, f2)?)?;
    Ok(lhs.approx_eq(&rhs, tol))
}

/// The composite law as a degenerate single-branch protocol spec.
pub fn compositionality_spec(f1: &Term, f2: &Term) -> Result<ProtocolSpec, ProtocolError> {
    Ok(ProtocolSpec {
        name: "compositionality".into(),
        lhs: Term::compose(f2.clone(), f1.clone()),
        rhs: compositionality_term(f1, f2)?,
        comparison: Comparison::Exact,
    })
}

/// Evaluate both sides of a protocol spec and compare according to its
/// comparison mode. Branch indices in the report are 1-based.
pub fn verify<S: ScalarRing>(spec: &ProtocolSpec, tol: f64) -> Result<Report, ProtocolError> {
    let jl = typecheck(&spec.lhs)?;
    let jr = typecheck(&spec.rhs)?;
    if jl != jr {
        return Err(ProtocolError::JudgmentMismatch {
            lhs: format!("{} -> {}", jl.dom, jl.cod),
            rhs: format!("{} -> {}", jr.dom, jr.cod),
        });
    }
    let ml = eval::<S>(&spec.lhs)?;
    let mr = eval::<S>(&spec.rhs)?;
    let mut branches = Vec::new();
    match spec.comparison {
        Comparison::Exact => {
            let pass = ml.approx_eq(&mr, tol);
            branches.push(BranchResult {
                index: 1,
                pass,
                scalar: pass.then(|| S::one().to_literal()),
            });
        }
        Comparison::UpToScalar => {
            let cmp = equal_up_to_scalar(&ml, &mr, tol)?;
            branches.push(BranchResult {
                index: 1,
                pass: cmp.equal,
                scalar: cmp.scalar.map(|s| s.to_literal()),
            });
        }
        Comparison::PerBranchUpToScalar => {
            let comps = jl.cod.biproduct_components();
            let mut offset = 0;
            for (k, comp) in comps.iter().enumerate() {
                let d = comp.dim();
                let bl = ml.row_block(offset, d);
                let br = mr.row_block(offset, d);
                let cmp = equal_up_to_scalar(&bl, &br, tol)?;
                branches.push(BranchResult {
                    index: k + 1,
                    pass: cmp.equal,
                    scalar: cmp.scalar.map(|s| s.to_literal()),
                });
                offset += d;
            }
        }
    }
    let pass = branches.iter().all(|b| b.pass);
    Ok(Report { protocol: spec.name.clone(), backend: S::BACKEND, branches, pass })
}
