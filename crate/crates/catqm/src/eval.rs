//! Evaluation of terms into matrices. The same structural recursion serves
//! both backends; only primitive literals and scalar literals are
//! backend-specific.

use crate::matrix::Matrix;
use crate::object::ObjectType;
use crate::scalar::{BackendKind, ScalarRing};
use crate::term::Term;
use crate::typecheck::{typecheck, TypeError};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("primitive {name} has no {} literal", backend.as_str())]
    MissingPrimitive { name: String, backend: BackendKind },
    #[error("scalar literal {re}{im:+}i is not valid in the {} backend", backend.as_str())]
    InvalidScalarLiteral { re: f64, im: f64, backend: BackendKind },
}

/// Delta column of `Eta(A)`: one at every index `i*d + i`.
fn eta_matrix<S: ScalarRing>(d: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(d * d, 1);
    for i in 0..d {
        m.set(i * d + i, 0, S::one());
    }
    m
}

fn sigma_matrix<S: ScalarRing>(da: usize, db: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(da * db, da * db);
    for a in 0..da {
        for b in 0..db {
            m.set(b * da + a, a * db + b, S::one());
        }
    }
    m
}

/// `A (x) (B1 (+) B2) -> (A (x) B1) (+) (A (x) B2)`:
/// `a*(b1+b2)+k` goes to `a*b1+k` when `k < b1`, else to
/// `dim(A)*b1 + a*b2 + (k - b1)`.
fn dist_matrix<S: ScalarRing>(da: usize, b1: usize, b2: usize) -> Matrix<S> {
    let n = da * (b1 + b2);
    let mut m = Matrix::zeros(n, n);
    for a in 0..da {
        for k in 0..(b1 + b2) {
            let src = a * (b1 + b2) + k;
            let dst = if k < b1 { a * b1 + k } else { da * b1 + a * b2 + (k - b1) };
            m.set(dst, src, S::one());
        }
    }
    m
}

fn block_offsets(comps: &[ObjectType]) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(comps.len());
    let mut total = 0;
    for c in comps {
        offsets.push(total);
        total += c.dim();
    }
    (offsets, total)
}

fn proj_matrix<S: ScalarRing>(i: usize, comps: &[ObjectType]) -> Matrix<S> {
    let (offsets, total) = block_offsets(comps);
    let di = comps[i].dim();
    let mut m = Matrix::zeros(di, total);
    for r in 0..di {
        m.set(r, offsets[i] + r, S::one());
    }
    m
}

/// Evaluate a term. Typechecks first, so shape errors surface as
/// `EvalError::Type` rather than panics.
pub fn eval<S: ScalarRing>(t: &Term) -> Result<Matrix<S>, EvalError> {
    typecheck(t)?;
    eval_unchecked(t)
}

fn eval_unchecked<S: ScalarRing>(t: &Term) -> Result<Matrix<S>, EvalError> {
    match t {
        Term::Id(a) => Ok(Matrix::identity(a.dim())),
        Term::Compose(g, f) => {
            let mf = eval_unchecked::<S>(f)?;
            let mg = eval_unchecked::<S>(g)?;
            Ok(mg.mul(&mf).expect("typecheck guarantees composability"))
        }
        Term::Tensor(f, g) => Ok(eval_unchecked::<S>(f)?.kron(&eval_unchecked::<S>(g)?)),
        Term::Dagger(f) => Ok(eval_unchecked::<S>(f)?.adjoint()),
        Term::Transpose(f) => Ok(eval_unchecked::<S>(f)?.transpose()),
        Term::Conjugate(f) => Ok(eval_unchecked::<S>(f)?.conj()),
        Term::Eta(a) => Ok(eta_matrix(a.dim())),
        Term::Eps(a) => Ok(eta_matrix::<S>(a.dim()).transpose()),
        Term::Name(f) => {
            // (1_{A*} (x) f) . eta_A
            let j = typecheck(f).expect("checked by eval");
            let mf = eval_unchecked::<S>(f)?;
            let da = j.dom.dim();
            let lifted = Matrix::<S>::identity(da).kron(&mf);
            Ok(lifted.mul(&eta_matrix(da)).expect("shape by construction"))
        }
        Term::Coname(f) => {
            // eps_B . (f (x) 1_{B*})
            let j = typecheck(f).expect("checked by eval");
            let mf = eval_unchecked::<S>(f)?;
            let db = j.cod.dim();
            let lifted = mf.kron(&Matrix::<S>::identity(db));
            Ok(eta_matrix::<S>(db).transpose().mul(&lifted).expect("shape by construction"))
        }
        Term::Proj(i, comps) => Ok(proj_matrix(*i, comps)),
        Term::Inj(i, comps) => Ok(proj_matrix::<S>(*i, comps).transpose()),
        Term::Pairing(fs) => {
            let blocks = fs
                .iter()
                .map(eval_unchecked::<S>)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::vstack(&blocks).expect("typecheck guarantees shared domain"))
        }
        Term::Copairing(fs) => {
            let blocks = fs
                .iter()
                .map(eval_unchecked::<S>)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::hstack(&blocks).expect("typecheck guarantees shared codomain"))
        }
        Term::Lambda(a) | Term::Rho(a) => Ok(Matrix::identity(a.dim())),
        Term::Sigma(a, b) => Ok(sigma_matrix(a.dim(), b.dim())),
        Term::Alpha(a, b, c) => Ok(Matrix::identity(a.dim() * b.dim() * c.dim())),
        Term::Dist(a, b1, b2) => Ok(dist_matrix(a.dim(), b1.dim(), b2.dim())),
        Term::DualInvol(a) => Ok(Matrix::identity(a.dim())),
        Term::DualTensor(a, b) => Ok(Matrix::identity(a.dim() * b.dim())),
        Term::UnitDual => Ok(Matrix::identity(1)),
        Term::Inv(f) => match &**f {
            Term::Prim(p) => match S::prim_inverse_entries(p) {
                Some(entries) => Ok(Matrix::from_vec(p.dom.dim(), p.cod.dim(), entries)
                    .expect("typecheck validates inverse literal shape")),
                None => Err(EvalError::MissingPrimitive {
                    name: format!("{}^-1", p.name),
                    backend: S::BACKEND,
                }),
            },
            // Structural isomorphisms evaluate to permutation matrices,
            // whose inverses are their transposes.
            iso => Ok(eval_unchecked::<S>(iso)?.transpose()),
        },
        Term::ScalarMul(lit, f) => {
            let s = S::from_literal(*lit).map_err(|_| EvalError::InvalidScalarLiteral {
                re: lit.re,
                im: lit.im,
                backend: S::BACKEND,
            })?;
            Ok(eval_unchecked::<S>(f)?.scale(&s))
        }
        Term::Prim(p) => match S::prim_entries(p) {
            Some(entries) => Ok(Matrix::from_vec(p.cod.dim(), p.dom.dim(), entries)
                .expect("typecheck validates literal shape")),
            None => Err(EvalError::MissingPrimitive { name: p.name.clone(), backend: S::BACKEND }),
        },
    }
}
