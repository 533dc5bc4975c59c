//! State/morphism correspondence (vec and unvec), comparison up to a global
//! scalar, and the scalar operations expressed categorically.

use crate::eval::{eval, EvalError};
use crate::matrix::{Matrix, ShapeError};
use crate::object::ObjectType;
use crate::scalar::ScalarRing;
use crate::term::{biproduct_map, codiag, diag, PrimData, Term};

/// Column on `A (x) B` corresponding to `m : A -> B`:
/// `vec(m)[i*dim(B)+j] = m[j, i]`, so the `(i, j)` amplitude is the
/// coefficient of `e_j` in `m(e_i)`. Matches `eval(Name(Prim(m)))` with dual
/// indices identified.
pub fn vec<S: ScalarRing>(m: &Matrix<S>) -> Matrix<S> {
    let (da, db) = (m.cols(), m.rows());
    let mut out = Vec::with_capacity(da * db);
    for i in 0..da {
        for j in 0..db {
            out.push(m.get(j, i).clone());
        }
    }
    Matrix::column(out)
}

/// Inverse of [`vec`]: rebuild the `dim_b x dim_a` matrix from a column on
/// `A (x) B`.
pub fn unvec<S: ScalarRing>(v: &Matrix<S>, dim_a: usize, dim_b: usize) -> Result<Matrix<S>, ShapeError> {
    if v.cols() != 1 || v.rows() != dim_a * dim_b {
        return Err(ShapeError::Mismatch {
            left_rows: v.rows(),
            left_cols: v.cols(),
            right_rows: dim_a * dim_b,
            right_cols: 1,
            op: "unvec".into(),
        });
    }
    let mut m = Matrix::zeros(dim_b, dim_a);
    for i in 0..dim_a {
        for j in 0..dim_b {
            m.set(j, i, v.get(i * dim_b + j, 0).clone());
        }
    }
    Ok(m)
}

/// Result of an up-to-scalar comparison: when `equal`, `scalar` holds the
/// `r` with `y = r * x` (one when both sides are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarComparison<S> {
    pub equal: bool,
    pub scalar: Option<S>,
}

/// Does `y` equal `r * x` for some nonzero scalar `r`? The candidate `r` is
/// read off at the max-modulus entry of `x`; two zero matrices compare equal
/// with scalar one. In the boolean backend the only nonzero scalar is one,
/// so this degenerates to exact equality.
pub fn equal_up_to_scalar<S: ScalarRing>(
    x: &Matrix<S>,
    y: &Matrix<S>,
    tol: f64,
) -> Result<ScalarComparison<S>, ShapeError> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(ShapeError::Mismatch {
            left_rows: x.rows(),
            left_cols: x.cols(),
            right_rows: y.rows(),
            right_cols: y.cols(),
            op: "up-to-scalar comparison".into(),
        });
    }
    let x_zero = x.is_zero();
    let y_zero = y.is_zero();
    if x_zero && y_zero {
        return Ok(ScalarComparison { equal: true, scalar: Some(S::one()) });
    }
    if x_zero != y_zero {
        return Ok(ScalarComparison { equal: false, scalar: None });
    }
    let mut pivot = 0;
    let mut best = -1.0;
    for (k, e) in x.entries().iter().enumerate() {
        let a = e.abs();
        if a > best {
            best = a;
            pivot = k;
        }
    }
    let r = match y.entries()[pivot].div(&x.entries()[pivot]) {
        Some(r) if !r.is_zero() => r,
        _ => return Ok(ScalarComparison { equal: false, scalar: None }),
    };
    let scaled = x.scale(&r);
    if scaled.approx_eq(y, tol) {
        Ok(ScalarComparison { equal: true, scalar: Some(r) })
    } else {
        Ok(ScalarComparison { equal: false, scalar: None })
    }
}

/// A declared state or scalar as a primitive term, with the literal stored
/// in this backend's slot.
pub fn state_prim<S: ScalarRing>(name: &str, a: &ObjectType, column: &Matrix<S>) -> Term {
    morphism_prim(name, &ObjectType::Unit, a, column)
}

/// Wrap a matrix as a primitive `dom -> cod` for this backend.
pub fn morphism_prim<S: ScalarRing>(
    name: &str,
    dom: &ObjectType,
    cod: &ObjectType,
    m: &Matrix<S>,
) -> Term {
    let mut p = PrimData {
        name: name.to_string(),
        dom: dom.clone(),
        cod: cod.clone(),
        fdhilb: None,
        rel: None,
        fdhilb_inv: None,
        rel_inv: None,
    };
    S::fill_prim(&mut p, m.entries().to_vec());
    Term::Prim(p)
}

fn scalar_term<S: ScalarRing>(name: &str, s: &S) -> Term {
    let m = Matrix::column(vec![s.clone()]);
    state_prim(name, &ObjectType::Unit, &m)
}

/// Sum of scalars by the biproduct formula: the codiagonal after
/// `s (+) s'` after the diagonal, all on `I`. Agrees with the carrier's own
/// addition; both routes are exercised by the tests.
pub fn scalar_add_categorical<S: ScalarRing>(s: &S, s2: &S) -> Result<S, EvalError> {
    let i = ObjectType::Unit;
    let block = biproduct_map(
        &[scalar_term("s", s), scalar_term("s'", s2)],
        &[i.clone(), i.clone()],
    );
    let term = Term::pipeline(&[diag(&i), block, codiag(&i)]);
    let m = eval::<S>(&term)?;
    Ok(m.entries()[0].clone())
}

/// Product of scalars as composition of endomorphisms of `I`.
pub fn scalar_mul_categorical<S: ScalarRing>(s: &S, s2: &S) -> Result<S, EvalError> {
    let term = Term::compose(scalar_term("s", s), scalar_term("s'", s2));
    let m = eval::<S>(&term)?;
    Ok(m.entries()[0].clone())
}

/// Scalar action `s . f = f . s_A` at `f = id_A`, computed by the
/// categorical composite `lambda^-1 . (s (x) 1_A) . lambda`; evaluates to
/// `s` times the identity on `A`.
pub fn scalar_action<S: ScalarRing>(s: &S, a: &ObjectType) -> Result<Matrix<S>, EvalError> {
    let term = Term::pipeline(&[
        Term::Lambda(a.clone()),
        Term::tensor(scalar_term("s", s), Term::Id(a.clone())),
        Term::inv(Term::Lambda(a.clone())),
    ]);
    eval::<S>(&term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{beta, qubit};
    use num_complex::Complex64 as C;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn vec_follows_the_column_reading() {
        // m maps e0 -> a e0 + b e1, e1 -> c e0 + d e1; amplitudes of |ij>
        // are the coefficients of m(e_i).
        let m = Matrix::from_vec(2, 2, vec![c(1.0), c(3.0), c(2.0), c(4.0)]).unwrap();
        let v = vec(&m);
        assert_eq!(v.entries(), &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        let back = unvec(&v, 2, 2).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn vec_of_identity_is_the_correlated_pair() {
        let id = Matrix::<C>::identity(2);
        assert_eq!(vec(&id).entries(), &[c(1.0), c(0.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn unvec_recovers_the_swap_from_its_state() {
        let v = Matrix::column(vec![c(0.0), c(1.0), c(1.0), c(0.0)]);
        let m = unvec(&v, 2, 2).unwrap();
        let b2: Matrix<C> = eval(&beta(2)).unwrap();
        assert_eq!(m, b2);
    }

    #[test]
    fn vec_matches_name_evaluation() {
        for i in 1..=4 {
            let f: Matrix<C> = eval(&beta(i)).unwrap();
            let named: Matrix<C> = eval(&Term::name(beta(i))).unwrap();
            assert_eq!(vec(&f), named);
        }
    }

    #[test]
    fn up_to_scalar_detects_scaling_and_rejects_others() {
        let x = Matrix::from_vec(2, 1, vec![c(1.0), c(2.0)]).unwrap();
        let y = x.scale(&C::new(0.0, 3.0));
        let r = equal_up_to_scalar(&x, &y, 1e-9).unwrap();
        assert!(r.equal);
        assert_eq!(r.scalar, Some(C::new(0.0, 3.0)));

        let z = Matrix::from_vec(2, 1, vec![c(1.0), c(3.0)]).unwrap();
        assert!(!equal_up_to_scalar(&x, &z, 1e-9).unwrap().equal);
    }

    #[test]
    fn both_zero_compare_equal_with_scalar_one() {
        let z = Matrix::<C>::zeros(2, 2);
        let r = equal_up_to_scalar(&z, &z, 1e-9).unwrap();
        assert!(r.equal);
        assert_eq!(r.scalar, Some(c(1.0)));
        let y = Matrix::<C>::identity(2);
        assert!(!equal_up_to_scalar(&z, &y, 1e-9).unwrap().equal);
    }

    #[test]
    fn rel_up_to_scalar_is_exact_equality() {
        let x = Matrix::from_vec(2, 1, vec![true, false]).unwrap();
        let y = Matrix::from_vec(2, 1, vec![true, true]).unwrap();
        assert!(!equal_up_to_scalar(&x, &y, 0.0).unwrap().equal);
        assert!(equal_up_to_scalar(&x, &x, 0.0).unwrap().equal);
    }

    #[test]
    fn categorical_scalar_sum_matches_ring_addition() {
        let a = C::new(0.25, -1.5);
        let b = C::new(2.0, 0.5);
        let cat = scalar_add_categorical(&a, &b).unwrap();
        assert!(cat.approx_eq(&a.add(&b), 1e-12));
    }

    #[test]
    fn rel_scalar_sum_is_idempotent_or() {
        assert!(scalar_add_categorical(&true, &true).unwrap());
        assert!(scalar_add_categorical(&true, &false).unwrap());
        assert!(!scalar_add_categorical(&false, &false).unwrap());
        assert!(scalar_mul_categorical(&true, &true).unwrap());
        assert!(!scalar_mul_categorical(&true, &false).unwrap());
    }

    #[test]
    fn scalar_action_scales_the_identity() {
        let m = scalar_action(&C::new(0.0, 0.0), &qubit()).unwrap();
        assert!(m.is_zero());
        let m = scalar_action(&C::new(2.0, 1.0), &qubit()).unwrap();
        assert_eq!(*m.get(0, 0), C::new(2.0, 1.0));
        assert_eq!(*m.get(1, 1), C::new(2.0, 1.0));
        assert_eq!(*m.get(0, 1), C::new(0.0, 0.0));
    }
}
