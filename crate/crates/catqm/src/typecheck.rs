//! Bidirectional-free typechecker: every term synthesises a unique judgment
//! `dom -> cod` or fails with a structural error.

use crate::object::ObjectType;
use crate::term::Term;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeJudgment {
    pub dom: ObjectType,
    pub cod: ObjectType,
}

impl TypeJudgment {
    fn new(dom: ObjectType, cod: ObjectType) -> Self {
        TypeJudgment { dom, cod }
    }
}

impl std::fmt::Display for TypeJudgment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} -> {}", self.dom, self.cod)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TypeError {
    #[error("type mismatch in {context}: expected {expected}, found {found}")]
    TypeMismatch {
        expected: ObjectType,
        found: ObjectType,
        context: String,
    },
    #[error("arity error in {context}")]
    ArityError { context: String },
    #[error("Inv applied to non-invertible term in {context}")]
    InvalidInverse { context: String },
    #[error("primitive {name}: {which} literal has {got} entries, expected {expected}")]
    PrimShape {
        name: String,
        which: String,
        got: usize,
        expected: usize,
    },
    #[error("object {name} has dimension zero")]
    ZeroDimBase { name: String },
}

fn check_object(o: &ObjectType) -> Result<(), TypeError> {
    match o {
        ObjectType::Unit => Ok(()),
        ObjectType::Base(name, d) => {
            if *d == 0 {
                Err(TypeError::ZeroDimBase { name: name.clone() })
            } else {
                Ok(())
            }
        }
        ObjectType::Dual(a) => check_object(a),
        ObjectType::Tensor(a, b) | ObjectType::Biproduct(a, b) => {
            check_object(a)?;
            check_object(b)
        }
    }
}

/// Synthesise the judgment of a closed term. Total and deterministic: the
/// same term always yields the same judgment or the same error.
pub fn typecheck(t: &Term) -> Result<TypeJudgment, TypeError> {
    match t {
        Term::Id(a) => {
            check_object(a)?;
            Ok(TypeJudgment::new(a.clone(), a.clone()))
        }
        Term::Compose(g, f) => {
            let jf = typecheck(f)?;
            let jg = typecheck(g)?;
            if jg.dom != jf.cod {
                return Err(TypeError::TypeMismatch {
                    expected: jf.cod,
                    found: jg.dom,
                    context: "composition".into(),
                });
            }
            Ok(TypeJudgment::new(jf.dom, jg.cod))
        }
        Term::Tensor(f, g) => {
            let jf = typecheck(f)?;
            let jg = typecheck(g)?;
            Ok(TypeJudgment::new(jf.dom.tensor(jg.dom), jf.cod.tensor(jg.cod)))
        }
        Term::Dagger(f) => {
            let j = typecheck(f)?;
            Ok(TypeJudgment::new(j.cod, j.dom))
        }
        Term::Transpose(f) => {
            let j = typecheck(f)?;
            Ok(TypeJudgment::new(j.cod.dual(), j.dom.dual()))
        }
        Term::Conjugate(f) => {
            let j = typecheck(f)?;
            Ok(TypeJudgment::new(j.dom.dual(), j.cod.dual()))
        }
        Term::Eta(a) => {
            check_object(a)?;
            Ok(TypeJudgment::new(
                ObjectType::Unit,
                a.clone().dual().tensor(a.clone()),
            ))
        }
        Term::Eps(a) => {
            check_object(a)?;
            Ok(TypeJudgment::new(
                a.clone().tensor(a.clone().dual()),
                ObjectType::Unit,
            ))
        }
        Term::Name(f) => {
            let j = typecheck(f)?;
            Ok(TypeJudgment::new(ObjectType::Unit, j.dom.dual().tensor(j.cod)))
        }
        Term::Coname(f) => {
            let j = typecheck(f)?;
            Ok(TypeJudgment::new(j.dom.tensor(j.cod.dual()), ObjectType::Unit))
        }
        Term::Proj(i, comps) => {
            if comps.is_empty() {
                return Err(TypeError::ArityError {
                    context: "projection from an empty biproduct".into(),
                });
            }
            if *i >= comps.len() {
                return Err(TypeError::ArityError {
                    context: format!("projection index {i} of {} components", comps.len()),
                });
            }
            for c in comps {
                check_object(c)?;
            }
            Ok(TypeJudgment::new(
                ObjectType::biproduct_of(comps),
                comps[*i].clone(),
            ))
        }
        Term::Inj(i, comps) => {
            if comps.is_empty() {
                return Err(TypeError::ArityError {
                    context: "injection into an empty biproduct".into(),
                });
            }
            if *i >= comps.len() {
                return Err(TypeError::ArityError {
                    context: format!("injection index {i} of {} components", comps.len()),
                });
            }
            for c in comps {
                check_object(c)?;
            }
            Ok(TypeJudgment::new(
                comps[*i].clone(),
                ObjectType::biproduct_of(comps),
            ))
        }
        Term::Pairing(fs) => {
            if fs.is_empty() {
                return Err(TypeError::ArityError {
                    context: "empty pairing".into(),
                });
            }
            let js: Vec<TypeJudgment> = fs.iter().map(typecheck).collect::<Result<_, _>>()?;
            for j in &js[1..] {
                if j.dom != js[0].dom {
                    return Err(TypeError::TypeMismatch {
                        expected: js[0].dom.clone(),
                        found: j.dom.clone(),
                        context: "pairing (shared domain)".into(),
                    });
                }
            }
            let cods: Vec<ObjectType> = js.iter().map(|j| j.cod.clone()).collect();
            Ok(TypeJudgment::new(
                js[0].dom.clone(),
                ObjectType::biproduct_of(&cods),
            ))
        }
        Term::Copairing(fs) => {
            if fs.is_empty() {
                return Err(TypeError::ArityError {
                    context: "empty copairing".into(),
                });
            }
            let js: Vec<TypeJudgment> = fs.iter().map(typecheck).collect::<Result<_, _>>()?;
            for j in &js[1..] {
                if j.cod != js[0].cod {
                    return Err(TypeError::TypeMismatch {
                        expected: js[0].cod.clone(),
                        found: j.cod.clone(),
                        context: "copairing (shared codomain)".into(),
                    });
                }
            }
            let doms: Vec<ObjectType> = js.iter().map(|j| j.dom.clone()).collect();
            Ok(TypeJudgment::new(
                ObjectType::biproduct_of(&doms),
                js[0].cod.clone(),
            ))
        }
        Term::Lambda(a) => {
            check_object(a)?;
            Ok(TypeJudgment::new(
                a.clone(),
                ObjectType::Unit.tensor(a.clone()),
            ))
        }
        Term::Rho(a) => {
            check_object(a)?;
            Ok(TypeJudgment::new(
                a.clone(),
                a.clone().tensor(ObjectType::Unit),
            ))
        }
        Term::Sigma(a, b) => {
            check_object(a)?;
            check_object(b)?;
            Ok(TypeJudgment::new(
                a.clone().tensor(b.clone()),
                b.clone().tensor(a.clone()),
            ))
        }
        Term::Alpha(a, b, c) => {
            check_object(a)?;
            check_object(b)?;
            check_object(c)?;
            Ok(TypeJudgment::new(
                a.clone().tensor(b.clone().tensor(c.clone())),
                a.clone().tensor(b.clone()).tensor(c.clone()),
            ))
        }
        Term::Dist(a, b1, b2) => {
            check_object(a)?;
            check_object(b1)?;
            check_object(b2)?;
            Ok(TypeJudgment::new(
                a.clone().tensor(b1.clone().biproduct(b2.clone())),
                (a.clone().tensor(b1.clone())).biproduct(a.clone().tensor(b2.clone())),
            ))
        }
        Term::DualInvol(a) => {
            check_object(a)?;
            Ok(TypeJudgment::new(a.clone().dual().dual(), a.clone()))
        }
        Term::DualTensor(a, b) => {
            check_object(a)?;
            check_object(b)?;
            Ok(TypeJudgment::new(
                a.clone().tensor(b.clone()).dual(),
                a.clone().dual().tensor(b.clone().dual()),
            ))
        }
        Term::UnitDual => Ok(TypeJudgment::new(ObjectType::Unit.dual(), ObjectType::Unit)),
        Term::Inv(f) => {
            let invertible = match &**f {
                Term::Prim(p) => p.has_inverse(),
                other => other.is_structural_iso(),
            };
            if !invertible {
                return Err(TypeError::InvalidInverse {
                    context: "Inv expects a structural isomorphism or an invertible primitive"
                        .into(),
                });
            }
            let j = typecheck(f)?;
            Ok(TypeJudgment::new(j.cod, j.dom))
        }
        Term::ScalarMul(_, f) => typecheck(f),
        Term::Prim(p) => {
            check_object(&p.dom)?;
            check_object(&p.cod)?;
            let expected = p.dom.dim() * p.cod.dim();
            let shapes: [(&str, Option<usize>); 4] = [
                ("fdhilb", p.fdhilb.as_ref().map(|v| v.len())),
                ("rel", p.rel.as_ref().map(|v| v.len())),
                ("fdhilb inverse", p.fdhilb_inv.as_ref().map(|v| v.len())),
                ("rel inverse", p.rel_inv.as_ref().map(|v| v.len())),
            ];
            for (which, got) in shapes {
                if let Some(got) = got {
                    if got != expected {
                        return Err(TypeError::PrimShape {
                            name: p.name.clone(),
                            which: which.into(),
                            got,
                            expected,
                        });
                    }
                }
            }
            Ok(TypeJudgment::new(p.dom.clone(), p.cod.clone()))
        }
    }
}
