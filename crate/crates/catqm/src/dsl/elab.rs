//! Elaboration from syntax to core terms, and assertion running.

use super::ast::{AssertOp, OExpr, OKind, Pos, Program, Scalar, Stmt, StmtKind, TExpr, TKind};
use crate::eval::{eval, EvalError};
use crate::matrix::ShapeError;
use crate::object::ObjectType;
use crate::ops::equal_up_to_scalar;
use crate::scalar::{Backend, BackendKind, ScalarRing};
use crate::term::{PrimData, ScalarLiteral, Term};
use crate::typecheck::{typecheck, TypeError, TypeJudgment};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ElabError {
    #[error("line {line}:{col}: '{name}' is declared twice")]
    Duplicate { name: String, line: usize, col: usize },
    #[error("line {line}:{col}: unknown identifier '{name}'")]
    Unknown { name: String, line: usize, col: usize },
    #[error("line {line}:{col}: '{name}' names a term, but an object is required here")]
    TermAsObject { name: String, line: usize, col: usize },
    #[error("line {line}:{col}: '{name}' names an object, but a term is required here")]
    ObjectAsTerm { name: String, line: usize, col: usize },
    #[error(
        "line {line}:{col}: morphism '{name}' should be {expected_rows}x{expected_cols} \
         for its declared type, got {rows}x{cols}"
    )]
    MatrixShape {
        name: String,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
        line: usize,
        col: usize,
    },
    #[error(
        "line {line}:{col}: morphism '{name}' has entries outside 0/1 and cannot be \
         interpreted as a relation"
    )]
    RelLiteral { name: String, line: usize, col: usize },
    #[error("line {line}:{col}: component index {index} out of range (the biproduct has {len})")]
    ProjIndex { index: usize, len: usize, line: usize, col: usize },
    #[error("line {line}:{col}: in '{context}': {source}")]
    Type {
        context: String,
        line: usize,
        col: usize,
        source: TypeError,
    },
    #[error("line {line}:{col}: the two sides of the assertion have different types: {lhs} vs {rhs}")]
    AssertJudgment { line: usize, col: usize, lhs: String, rhs: String },
    #[error("line {line}:{col}: in '{context}': {source}")]
    Eval {
        context: String,
        line: usize,
        col: usize,
        source: EvalError,
    },
    #[error("line {line}:{col}: in '{context}': {source}")]
    Shape {
        context: String,
        line: usize,
        col: usize,
        source: ShapeError,
    },
}

#[derive(Debug, Clone)]
enum Sym {
    Object(ObjectType),
    TermSym(Term),
}

/// An elaborated program: named objects, typed named terms, and the
/// assertions ready to run.
#[derive(Debug, Clone, Default)]
pub struct Elaborated {
    pub objects: BTreeMap<String, ObjectType>,
    pub terms: BTreeMap<String, (Term, TypeJudgment)>,
    pub asserts: Vec<ElabAssert>,
}

#[derive(Debug, Clone)]
pub struct ElabAssert {
    pub lhs: Term,
    pub rhs: Term,
    pub op: AssertOp,
    pub pos: Pos,
}

struct Elaborator {
    backend: BackendKind,
    symbols: BTreeMap<String, Sym>,
}

/// Elaborate a parsed program for a backend. Relation runs reject matrix
/// literals with entries outside 0/1 at the declaration site. Every
/// declaration typechecks before any assertion is admitted.
pub fn elaborate(p: &Program, backend: BackendKind) -> Result<Elaborated, ElabError> {
    let mut e = Elaborator { backend, symbols: BTreeMap::new() };
    let mut out = Elaborated::default();
    for stmt in &p.stmts {
        e.stmt(stmt, &mut out)?;
    }
    Ok(out)
}

impl Elaborator {
    fn declare(&mut self, name: &str, pos: Pos, sym: Sym) -> Result<(), ElabError> {
        if self.symbols.contains_key(name) {
            return Err(ElabError::Duplicate {
                name: name.to_string(),
                line: pos.line,
                col: pos.col,
            });
        }
        self.symbols.insert(name.to_string(), sym);
        Ok(())
    }

    fn stmt(&mut self, stmt: &Stmt, out: &mut Elaborated) -> Result<(), ElabError> {
        match &stmt.kind {
            StmtKind::Object { name, def } => {
                let obj = self.object(def)?;
                self.declare(name, stmt.pos, Sym::Object(obj.clone()))?;
                out.objects.insert(name.clone(), obj);
            }
            StmtKind::Morph { name, dom, cod, rows } => {
                let dom = self.object(dom)?;
                let cod = self.object(cod)?;
                let term = self.morph(name, &dom, &cod, rows, stmt.pos)?;
                let judgment = self.typed(&term, name, stmt.pos)?;
                self.declare(name, stmt.pos, Sym::TermSym(term.clone()))?;
                out.terms.insert(name.clone(), (term, judgment));
            }
            StmtKind::TermDef { name, def } => {
                let term = self.term(def)?;
                let judgment = self.typed(&term, name, stmt.pos)?;
                self.declare(name, stmt.pos, Sym::TermSym(term.clone()))?;
                out.terms.insert(name.clone(), (term, judgment));
            }
            StmtKind::Assert { lhs, op, rhs } => {
                let l = self.term(lhs)?;
                let r = self.term(rhs)?;
                let jl = self.typed(&l, "assertion left side", stmt.pos)?;
                let jr = self.typed(&r, "assertion right side", stmt.pos)?;
                if jl != jr {
                    return Err(ElabError::AssertJudgment {
                        line: stmt.pos.line,
                        col: stmt.pos.col,
                        lhs: format!("{} -> {}", jl.dom, jl.cod),
                        rhs: format!("{} -> {}", jr.dom, jr.cod),
                    });
                }
                out.asserts.push(ElabAssert { lhs: l, rhs: r, op: *op, pos: stmt.pos });
            }
        }
        Ok(())
    }

    fn typed(&self, term: &Term, context: &str, pos: Pos) -> Result<TypeJudgment, ElabError> {
        typecheck(term).map_err(|source| ElabError::Type {
            context: context.to_string(),
            line: pos.line,
            col: pos.col,
            source,
        })
    }

    fn object(&self, o: &OExpr) -> Result<ObjectType, ElabError> {
        Ok(match &o.kind {
            OKind::Unit => ObjectType::Unit,
            OKind::Ident(name) => match self.symbols.get(name) {
                Some(Sym::Object(obj)) => obj.clone(),
                Some(Sym::TermSym(..)) => {
                    return Err(ElabError::TermAsObject {
                        name: name.clone(),
                        line: o.pos.line,
                        col: o.pos.col,
                    })
                }
                None => {
                    return Err(ElabError::Unknown {
                        name: name.clone(),
                        line: o.pos.line,
                        col: o.pos.col,
                    })
                }
            },
            OKind::Dual(a) => self.object(a)?.dual(),
            OKind::Tensor(a, b) => self.object(a)?.tensor(self.object(b)?),
            OKind::Biproduct(a, b) => self.object(a)?.biproduct(self.object(b)?),
        })
    }

    fn morph(
        &self,
        name: &str,
        dom: &ObjectType,
        cod: &ObjectType,
        rows: &[Vec<Scalar>],
        pos: Pos,
    ) -> Result<Term, ElabError> {
        let (er, ec) = (cod.dim(), dom.dim());
        if rows.len() != er || rows.iter().any(|r| r.len() != ec) {
            return Err(ElabError::MatrixShape {
                name: name.to_string(),
                expected_rows: er,
                expected_cols: ec,
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
                line: pos.line,
                col: pos.col,
            });
        }
        let literals: Vec<ScalarLiteral> = rows
            .iter()
            .flat_map(|r| r.iter().map(|s| ScalarLiteral::new(s.re, s.im)))
            .collect();
        let bools: Option<Vec<bool>> = literals.iter().map(ScalarLiteral::as_bool).collect();
        if self.backend == BackendKind::Rel && bools.is_none() {
            return Err(ElabError::RelLiteral {
                name: name.to_string(),
                line: pos.line,
                col: pos.col,
            });
        }
        Ok(Term::Prim(PrimData {
            name: name.to_string(),
            dom: dom.clone(),
            cod: cod.clone(),
            fdhilb: Some(literals),
            rel: bools,
            fdhilb_inv: None,
            rel_inv: None,
        }))
    }

    fn term(&self, t: &TExpr) -> Result<Term, ElabError> {
        Ok(match &t.kind {
            TKind::Ident(name) => match self.symbols.get(name) {
                Some(Sym::TermSym(term)) => term.clone(),
                Some(Sym::Object(_)) => {
                    return Err(ElabError::ObjectAsTerm {
                        name: name.clone(),
                        line: t.pos.line,
                        col: t.pos.col,
                    })
                }
                None => {
                    return Err(ElabError::Unknown {
                        name: name.clone(),
                        line: t.pos.line,
                        col: t.pos.col,
                    })
                }
            },
            TKind::Id(o) => Term::Id(self.object(o)?),
            TKind::Compose(g, f) => Term::compose(self.term(g)?, self.term(f)?),
            TKind::Tensor(f, g) => Term::tensor(self.term(f)?, self.term(g)?),
            TKind::Dagger(f) => Term::dagger(self.term(f)?),
            TKind::Transpose(f) => Term::transpose(self.term(f)?),
            TKind::Conj(f) => Term::conjugate(self.term(f)?),
            TKind::Eta(o) => Term::Eta(self.object(o)?),
            TKind::Eps(o) => Term::Eps(self.object(o)?),
            TKind::Name(f) => Term::name(self.term(f)?),
            TKind::Coname(f) => Term::coname(self.term(f)?),
            TKind::Pair(items) => Term::Pairing(
                items.iter().map(|i| self.term(i)).collect::<Result<Vec<_>, _>>()?,
            ),
            TKind::Copair(items) => Term::Copairing(
                items.iter().map(|i| self.term(i)).collect::<Result<Vec<_>, _>>()?,
            ),
            TKind::Proj(i, o) | TKind::Inj(i, o) => {
                let obj = self.object(o)?;
                let comps = obj.biproduct_components();
                if *i >= comps.len() {
                    return Err(ElabError::ProjIndex {
                        index: *i,
                        len: comps.len(),
                        line: t.pos.line,
                        col: t.pos.col,
                    });
                }
                if matches!(t.kind, TKind::Proj(..)) {
                    Term::Proj(*i, comps)
                } else {
                    Term::Inj(*i, comps)
                }
            }
            TKind::Lambda(o) => Term::Lambda(self.object(o)?),
            TKind::Rho(o) => Term::Rho(self.object(o)?),
            TKind::Sigma(a, b) => Term::Sigma(self.object(a)?, self.object(b)?),
            TKind::Alpha(a, b, c) => {
                Term::Alpha(self.object(a)?, self.object(b)?, self.object(c)?)
            }
            TKind::Dist(a, b1, b2) => {
                Term::Dist(self.object(a)?, self.object(b1)?, self.object(b2)?)
            }
            TKind::Inv(f) => Term::inv(self.term(f)?),
            TKind::Scal(s, f) => {
                Term::scalar_mul(ScalarLiteral::new(s.re, s.im), self.term(f)?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssertResult {
    pub line: usize,
    pub col: usize,
    pub op: AssertOp,
    pub pass: bool,
    pub scalar: Option<ScalarLiteral>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssertionReport {
    pub backend: BackendKind,
    pub results: Vec<AssertResult>,
    pub pass: bool,
}

impl AssertionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "backend": self.backend.as_str(),
            "assertions": self.results.iter().map(|r| json!({
                "line": r.line,
                "op": r.op.as_str(),
                "pass": r.pass,
                "scalar": r.scalar.map(|s| json!([s.re, s.im])),
            })).collect::<Vec<_>>(),
            "pass": self.pass,
        })
    }
}

pub fn run_in<S: ScalarRing>(e: &Elaborated, tol: f64) -> Result<AssertionReport, ElabError> {
    let mut results = Vec::new();
    for a in &e.asserts {
        let wrap_eval = |source: EvalError| ElabError::Eval {
            context: "assertion".into(),
            line: a.pos.line,
            col: a.pos.col,
            source,
        };
        let ml = eval::<S>(&a.lhs).map_err(wrap_eval)?;
        let mr = eval::<S>(&a.rhs).map_err(wrap_eval)?;
        let (pass, scalar) = match a.op {
            AssertOp::Exact => {
                let ok = ml.approx_eq(&mr, tol);
                (ok, ok.then(|| S::one().to_literal()))
            }
            AssertOp::UpToScalar => {
                let cmp = equal_up_to_scalar(&ml, &mr, tol).map_err(|source| {
                    ElabError::Shape {
                        context: "assertion".into(),
                        line: a.pos.line,
                        col: a.pos.col,
                        source,
                    }
                })?;
                (cmp.equal, cmp.scalar.map(|s| s.to_literal()))
            }
        };
        results.push(AssertResult {
            line: a.pos.line,
            col: a.pos.col,
            op: a.op,
            pass,
            scalar,
        });
    }
    let pass = results.iter().all(|r| r.pass);
    Ok(AssertionReport { backend: S::BACKEND, results, pass })
}

/// Elaborate and run every assertion of a parsed program under the given
/// backend; `==` compares within the backend tolerance, `~=` up to a
/// nonzero scalar, reported per assertion.
pub fn run_asserts(p: &Program, backend: Backend) -> Result<AssertionReport, ElabError> {
    let elaborated = elaborate(p, backend.kind)?;
    match backend.kind {
        BackendKind::FdHilb => run_in::<num_complex::Complex64>(&elaborated, backend.tol),
        BackendKind::Rel => run_in::<bool>(&elaborated, backend.tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parser::parse;

    fn fdhilb() -> Backend {
        Backend::fdhilb()
    }

    #[test]
    fn qubit_script_elaborates_and_passes() {
        let src = "\
object Q = I (+) I
morph b2 : Q -> Q = [[0, 1], [1, 0]]
term both = b2 . b2
assert both == id Q
assert name (id Q) == eta Q
";
        let p = parse(src).unwrap();
        let report = run_asserts(&p, fdhilb()).unwrap();
        assert!(report.pass, "{:?}", report);
        assert_eq!(report.results.len(), 2);
    }

    #[test]
    fn scalar_assertions_distinguish_exact_from_up_to_scalar() {
        let src = "\
object Q = I (+) I
assert id Q == scal 2 (id Q)
assert id Q ~= scal 2 (id Q)
";
        let p = parse(src).unwrap();
        let report = run_asserts(&p, fdhilb()).unwrap();
        assert!(!report.pass);
        assert!(!report.results[0].pass);
        assert!(report.results[1].pass);
        let s = report.results[1].scalar.unwrap();
        assert!((s.re - 2.0).abs() < 1e-12 && s.im.abs() < 1e-12);
    }

    #[test]
    fn rel_rejects_non_boolean_literals() {
        let src = "\
object Q = I (+) I
morph h : Q -> Q = [[0.5, 0.5], [0.5, 0.5]]
";
        let p = parse(src).unwrap();
        let err = run_asserts(&p, Backend::rel()).unwrap_err();
        assert!(matches!(err, ElabError::RelLiteral { line: 2, .. }));
        // The same program is fine on the matrix backend.
        assert!(run_asserts(&p, fdhilb()).is_ok());
    }

    #[test]
    fn duplicate_and_unknown_identifiers() {
        let p = parse("object Q = I (+) I\nobject Q = I").unwrap();
        assert!(matches!(
            elaborate(&p, BackendKind::FdHilb),
            Err(ElabError::Duplicate { line: 2, .. })
        ));
        let p = parse("term t = missing").unwrap();
        assert!(matches!(
            elaborate(&p, BackendKind::FdHilb),
            Err(ElabError::Unknown { .. })
        ));
        let p = parse("object Q = I (+) I\nterm t = Q").unwrap();
        assert!(matches!(
            elaborate(&p, BackendKind::FdHilb),
            Err(ElabError::ObjectAsTerm { .. })
        ));
    }

    #[test]
    fn assertion_sides_must_share_a_judgment() {
        let p = parse("object Q = I (+) I\nassert id Q == id I").unwrap();
        assert!(matches!(
            elaborate(&p, BackendKind::FdHilb),
            Err(ElabError::AssertJudgment { .. })
        ));
    }

    #[test]
    fn projection_index_bounds() {
        let p = parse("term t = p 2 of I (+) I").unwrap();
        assert!(matches!(
            elaborate(&p, BackendKind::FdHilb),
            Err(ElabError::ProjIndex { index: 2, len: 2, .. })
        ));
    }

    #[test]
    fn no_assertion_runs_when_a_declaration_fails() {
        // The bad declaration comes after a valid assertion in source
        // order; elaboration still fails before anything runs.
        let src = "\
object Q = I (+) I
assert id Q == id Q
morph bad : Q -> Q = [[1, 0], [0, 1], [0, 0]]
";
        let p = parse(src).unwrap();
        assert!(matches!(
            run_asserts(&p, fdhilb()),
            Err(ElabError::MatrixShape { .. })
        ));
    }

    #[test]
    fn relation_converse_law_script() {
        let src = "\
object X = I (+) I (+) I
morph r1 : X -> X = [[1, 0, 0], [1, 0, 1], [0, 0, 0]]
morph r2 : X -> X = [[0, 1, 0], [0, 0, 1], [1, 1, 0]]
assert dagger (r2 . r1) == (dagger r1) . (dagger r2)
assert transpose (r2 . r1) == (transpose r1) . (transpose r2)
";
        let p = parse(src).unwrap();
        let report = run_asserts(&p, Backend::rel()).unwrap();
        assert!(report.pass, "{:?}", report.to_json());
    }
}
