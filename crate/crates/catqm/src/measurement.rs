//! Measurements from spectral decompositions: branch projectors, outcome
//! weights and the Born rule, density-style states built from names, and
//! the locality check for bipartite states.

use crate::eval::{eval, EvalError};
use crate::matrix::{Matrix, ShapeError};
use crate::object::ObjectType;
use crate::ops::{equal_up_to_scalar, unvec};
use crate::scalar::ScalarRing;
use crate::term::{biproduct_map, Term};
use crate::typecheck::{typecheck, TypeError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MeasureError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("not unitary: {context}")]
    NotUnitary { context: String },
    #[error("state is not normalised: <psi|psi> = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("destructive measurements need every component equal to I")]
    DestructiveNeedsUnitComponents,
    #[error("expected a term with dual domain A*, found domain {found}")]
    ExpectedDualDomain { found: ObjectType },
    #[error("a spectral decomposition needs at least one component")]
    EmptyDecomposition,
    #[error("decomposition codomain {found} is not the biproduct of the components")]
    ComponentMismatch { found: ObjectType },
}

/// A unitary `u : A -> (+)_i A_i` presenting `A` as a biproduct; the
/// branches of every measurement below are indexed by its components.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub u: Term,
    pub components: Vec<ObjectType>,
    pub dom: ObjectType,
}

impl SpectralDecomposition {
    pub fn new(u: Term, components: Vec<ObjectType>) -> Result<Self, MeasureError> {
        if components.is_empty() {
            return Err(MeasureError::EmptyDecomposition);
        }
        let j = typecheck(&u)?;
        let expected = ObjectType::biproduct_of(&components);
        if j.cod != expected {
            return Err(MeasureError::ComponentMismatch { found: j.cod });
        }
        Ok(SpectralDecomposition { u, components, dom: j.dom })
    }

    /// Check `U . U+ = 1` and `U+ . U = 1` in the chosen backend.
    pub fn validate_unitary<S: ScalarRing>(&self, tol: f64) -> Result<(), MeasureError> {
        let m = eval::<S>(&self.u)?;
        let d = m.adjoint();
        let left = m.mul(&d)?;
        let right = d.mul(&m)?;
        if !left.approx_eq(&Matrix::identity(left.rows()), tol)
            || !right.approx_eq(&Matrix::identity(right.rows()), tol)
        {
            return Err(MeasureError::NotUnitary { context: "spectral decomposition".into() });
        }
        Ok(())
    }

    /// Branch arrow `pi_j = p_j . u : A -> A_j`.
    pub fn branch(&self, j: usize) -> Term {
        Term::compose(Term::Proj(j, self.components.clone()), self.u.clone())
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// `Pairing([pi_i]) : A -> (+)_i I`; needs unit components.
    Destructive,
    /// `Pairing([P_i]) : A -> (+)_i A`.
    Nondestructive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub decomposition: SpectralDecomposition,
    pub kind: MeasureKind,
}

impl Measurement {
    pub fn new(decomposition: SpectralDecomposition, kind: MeasureKind) -> Result<Self, MeasureError> {
        if kind == MeasureKind::Destructive
            && decomposition.components.iter().any(|c| *c != ObjectType::Unit)
        {
            return Err(MeasureError::DestructiveNeedsUnitComponents);
        }
        Ok(Measurement { decomposition, kind })
    }

    pub fn dom(&self) -> &ObjectType {
        &self.decomposition.dom
    }
}

/// Branch projector `P_j = pi_j+ . pi_j : A -> A`.
pub fn projector(m: &Measurement, j: usize) -> Term {
    let pi = m.decomposition.branch(j);
    Term::compose(Term::dagger(pi.clone()), pi)
}

/// The measurement as a single arrow into the biproduct of branches.
pub fn measure_term(m: &Measurement) -> Term {
    let n = m.decomposition.len();
    let branches: Vec<Term> = match m.kind {
        MeasureKind::Destructive => (0..n).map(|i| m.decomposition.branch(i)).collect(),
        MeasureKind::Nondestructive => (0..n).map(|i| projector(m, i)).collect(),
    };
    Term::Pairing(branches)
}

/// Outcome weights `s_i+ . s_i` with `s_i = pi_i . psi`, in any backend.
/// In the boolean backend the weight is branch reachability.
pub fn branch_weights<S: ScalarRing>(
    m: &Measurement,
    psi: &Matrix<S>,
) -> Result<Vec<S>, MeasureError> {
    let d = m.dom().dim();
    if psi.cols() != 1 || psi.rows() != d {
        return Err(MeasureError::WrongDimension { expected: d, got: psi.rows() });
    }
    let mut out = Vec::with_capacity(m.decomposition.len());
    for i in 0..m.decomposition.len() {
        let pi = eval::<S>(&m.decomposition.branch(i))?;
        let v = pi.mul(psi)?;
        let w = v.adjoint().mul(&v)?;
        out.push(w.entries()[0].clone());
    }
    Ok(out)
}

/// Born weights of a normalised complex state: nonnegative reals summing to
/// one when the decomposition is unitary.
pub fn prob(
    m: &Measurement,
    psi: &Matrix<Complex64>,
    tol: f64,
) -> Result<Vec<f64>, MeasureError> {
    let d = m.dom().dim();
    if psi.cols() != 1 || psi.rows() != d {
        return Err(MeasureError::WrongDimension { expected: d, got: psi.rows() });
    }
    let norm_sq = psi.adjoint().mul(psi)?.entries()[0];
    if !norm_sq.approx_eq(&Complex64::new(1.0, 0.0), tol) {
        return Err(MeasureError::NotNormalized { norm_sq: norm_sq.re });
    }
    let weights = branch_weights(m, psi)?;
    Ok(weights.into_iter().map(|w| w.re).collect())
}

/// The Born rule two ways: `s_i+ . s_i` against `<psi| P_i psi>`, compared
/// branchwise within `tol`.
pub fn born_check(
    m: &Measurement,
    psi: &Matrix<Complex64>,
    tol: f64,
) -> Result<bool, MeasureError> {
    let via_scalars = prob(m, psi, tol)?;
    for (i, p) in via_scalars.iter().enumerate() {
        let proj = eval::<Complex64>(&projector(m, i))?;
        let inner = psi.adjoint().mul(&proj.mul(psi)?)?.entries()[0];
        if !inner.approx_eq(&Complex64::new(*p, 0.0), tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Completeness of a generalized measurement: `sum_i f_i+ . f_i = 1` on the
/// shared domain, within `tol`.
pub fn validate_generalized<S: ScalarRing>(fs: &[Term], tol: f64) -> Result<bool, MeasureError> {
    if fs.is_empty() {
        return Err(MeasureError::EmptyDecomposition);
    }
    let j0 = typecheck(&fs[0])?;
    let d = j0.dom.dim();
    let mut acc: Matrix<S> = Matrix::zeros(d, d);
    for f in fs {
        let j = typecheck(f)?;
        if j.dom != j0.dom {
            return Err(MeasureError::Type(TypeError::TypeMismatch {
                expected: j0.dom,
                found: j.dom,
                context: "generalized measurement (shared domain)".into(),
            }));
        }
        let m = eval::<S>(f)?;
        let term = m.adjoint().mul(&m)?;
        let mut next = Matrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                next.set(r, c, acc.get(r, c).add(term.get(r, c)));
            }
        }
        acc = next;
    }
    Ok(acc.approx_eq(&Matrix::identity(d), tol))
}

/// The name of `xi : A1* -> A2` as a state on `A1 (x) A2`, with the
/// `A1** = A1` isomorphism applied on the first leg.
pub fn ontic_density(xi: &Term) -> Result<Term, MeasureError> {
    let j = typecheck(xi)?;
    let a1 = match &j.dom {
        ObjectType::Dual(a) => (**a).clone(),
        other => return Err(MeasureError::ExpectedDualDomain { found: other.clone() }),
    };
    Ok(Term::compose(
        Term::tensor(Term::DualInvol(a1), Term::Id(j.cod)),
        Term::name(xi.clone()),
    ))
}

/// Measurement applied to a pure state, reshaped into a state on
/// `((+)_i I) (x) A`: measure, insert a unit leg on every branch, then pull
/// the biproduct out of the tensor.
pub fn epistemic_density(phi: &Term, m: &Measurement) -> Result<Term, MeasureError> {
    let j = typecheck(phi)?;
    if j.dom != ObjectType::Unit || j.cod != *m.dom() {
        return Err(MeasureError::WrongDimension {
            expected: m.dom().dim(),
            got: j.cod.dim(),
        });
    }
    let a = m.dom().clone();
    let n = m.decomposition.len();
    let measure = Term::Pairing((0..n).map(|i| projector(m, i)).collect());
    let lift = biproduct_map(
        &vec![Term::Lambda(a.clone()); n],
        &vec![a.clone(); n],
    );
    let units = vec![ObjectType::Unit; n];
    let undist = crate::term::undist_right(&units, &a);
    Ok(Term::pipeline(&[phi.clone(), measure, lift, undist]))
}

/// The epistemic state decomposes branchwise: reading the state as the name
/// of `omega : ((+)_i I)* -> A`, its conjugate is the copairing of
/// `s_i+ . (pi_i^T . u_I)` with `s_i = pi_i . phi`. Both routes are
/// evaluated and compared within `tol`.
pub fn epistemic_decomposition_check(
    phi: &Term,
    m: &Measurement,
    tol: f64,
) -> Result<bool, MeasureError> {
    let a_dim = m.dom().dim();
    let n = m.decomposition.len();
    let v = eval::<Complex64>(&epistemic_density(phi, m)?)?;
    let omega = unvec(&v, n, a_dim)?;
    let omega_conj = omega.conj();

    let mut columns = Vec::with_capacity(n);
    for i in 0..n {
        let pi = m.decomposition.branch(i);
        let s = eval::<Complex64>(&Term::compose(pi.clone(), phi.clone()))?.entries()[0];
        let col = Term::scalar_mul(
            s.conj().to_literal(),
            Term::compose(Term::transpose(pi), Term::inv(Term::UnitDual)),
        );
        columns.push(col);
    }
    let direct = eval::<Complex64>(&Term::Copairing(columns))?;
    Ok(direct.approx_eq(&omega_conj, tol))
}

/// Post-composing a bipartite name with a unitary on the second component
/// leaves the first component's reduced matrix `M+ . M` unchanged: the
/// second party's choice of unitary is invisible to the first.
pub fn no_signalling_check<S: ScalarRing>(
    xi: &Term,
    u: &Term,
    tol: f64,
) -> Result<bool, MeasureError> {
    let j = typecheck(xi)?;
    let a1 = match &j.dom {
        ObjectType::Dual(a) => (**a).clone(),
        other => return Err(MeasureError::ExpectedDualDomain { found: other.clone() }),
    };
    let a2 = j.cod.clone();
    let ju = typecheck(u)?;
    if ju.dom != a2 || ju.cod != a2 {
        return Err(MeasureError::WrongDimension { expected: a2.dim(), got: ju.dom.dim() });
    }
    let mu = eval::<S>(u)?;
    let mu_dag = mu.adjoint();
    if !mu.mul(&mu_dag)?.approx_eq(&Matrix::identity(a2.dim()), tol)
        || !mu_dag.mul(&mu)?.approx_eq(&Matrix::identity(a2.dim()), tol)
    {
        return Err(MeasureError::NotUnitary { context: "second-component action".into() });
    }

    let base = ontic_density(xi)?;
    let acted = Term::compose(Term::tensor(Term::Id(a1.clone()), u.clone()), base.clone());
    let m0 = unvec(&eval::<S>(&base)?, a1.dim(), a2.dim())?;
    let m1 = unvec(&eval::<S>(&acted)?, a1.dim(), a2.dim())?;
    let r0 = m0.adjoint().mul(&m0)?;
    let r1 = m1.adjoint().mul(&m1)?;
    Ok(r0.approx_eq(&r1, tol))
}

/// Measurement in the computational basis of an object: the canonical
/// basis bijection `A -> (+)_dim I` as a primitive with identity matrix.
pub fn computational_measurement(
    a: &ObjectType,
    kind: MeasureKind,
) -> Result<Measurement, MeasureError> {
    let d = a.dim();
    let comps = vec![ObjectType::Unit; d];
    let cod = ObjectType::biproduct_of(&comps);
    let ident = Matrix::<Complex64>::identity(d);
    let u = match crate::ops::morphism_prim("basis", a, &cod, &ident) {
        Term::Prim(mut p) => {
            p.rel = Some(Matrix::<bool>::identity(d).entries().to_vec());
            p.fdhilb_inv = p.fdhilb.clone();
            p.rel_inv = p.rel.clone();
            Term::Prim(p)
        }
        _ => unreachable!("morphism_prim returns a primitive"),
    };
    let dec = SpectralDecomposition::new(u, comps)?;
    Measurement::new(dec, kind)
}

/// Check of the up-to-scalar equality used when comparing density-style
/// states produced by different routes.
pub fn states_equal_up_to_scalar<S: ScalarRing>(
    x: &Term,
    y: &Term,
    tol: f64,
) -> Result<bool, MeasureError> {
    let mx = eval::<S>(x)?;
    let my = eval::<S>(y)?;
    Ok(equal_up_to_scalar(&mx, &my, tol)?.equal)
}
