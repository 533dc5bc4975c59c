//! Morphism terms over [`ObjectType`], plus the derived combinators that the
//! rest of the crate builds protocols and oracles from.

use crate::object::ObjectType;

/// Complex scalar literal carried by `ScalarMul` and primitive matrices.
/// The relational backend accepts only 0 and 1 (imaginary part zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarLiteral {
    pub re: f64,
    pub im: f64,
}

impl ScalarLiteral {
    pub fn new(re: f64, im: f64) -> Self {
        ScalarLiteral { re, im }
    }

    pub fn real(re: f64) -> Self {
        ScalarLiteral { re, im: 0.0 }
    }

    pub fn one() -> Self {
        ScalarLiteral::real(1.0)
    }

    pub fn zero() -> Self {
        ScalarLiteral::real(0.0)
    }

    /// Exactly 0 or 1, the only scalars meaningful to the boolean backend.
    pub fn as_bool(&self) -> Option<bool> {
        if self.im != 0.0 {
            return None;
        }
        if self.re == 0.0 {
            Some(false)
        } else if self.re == 1.0 {
            Some(true)
        } else {
            None
        }
    }
}

/// A declared generator morphism. Matrix literals are row-major with
/// `dim(cod)` rows and `dim(dom)` columns; a literal may be present for one
/// backend only, and evaluation in a backend without one is an error.
/// Inverse literals, when present, make the primitive usable under `Inv`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimData {
    pub name: String,
    pub dom: ObjectType,
    pub cod: ObjectType,
    pub fdhilb: Option<Vec<ScalarLiteral>>,
    pub rel: Option<Vec<bool>>,
    pub fdhilb_inv: Option<Vec<ScalarLiteral>>,
    pub rel_inv: Option<Vec<bool>>,
}

impl PrimData {
    pub fn has_inverse(&self) -> bool {
        self.fdhilb_inv.is_some() || self.rel_inv.is_some()
    }
}

/// Morphism syntax. `Compose(g, f)` is `g` after `f`. Structural
/// isomorphisms carry the objects they are instantiated at; their inverses
/// are taken with `Inv`, which is also allowed on primitives that declare an
/// inverse literal.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Id(ObjectType),
    Compose(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
    Dagger(Box<Term>),
    Transpose(Box<Term>),
    Conjugate(Box<Term>),
    /// `I -> A* (x) A`
    Eta(ObjectType),
    /// `A (x) A* -> I`
    Eps(ObjectType),
    /// Name of `f : A -> B`, typed `I -> A* (x) B`.
    Name(Box<Term>),
    /// Coname of `f : A -> B`, typed `A (x) B* -> I`.
    Coname(Box<Term>),
    /// Projection out of the right-nested biproduct of the components.
    Proj(usize, Vec<ObjectType>),
    /// Injection into the right-nested biproduct of the components.
    Inj(usize, Vec<ObjectType>),
    Pairing(Vec<Term>),
    Copairing(Vec<Term>),
    /// `A -> I (x) A`
    Lambda(ObjectType),
    /// `A -> A (x) I`
    Rho(ObjectType),
    /// `A (x) B -> B (x) A`
    Sigma(ObjectType, ObjectType),
    /// `A (x) (B (x) C) -> (A (x) B) (x) C`
    Alpha(ObjectType, ObjectType, ObjectType),
    /// `A (x) (B1 (+) B2) -> (A (x) B1) (+) (A (x) B2)`
    Dist(ObjectType, ObjectType, ObjectType),
    /// `A** -> A`
    DualInvol(ObjectType),
    /// `(A (x) B)* -> A* (x) B*`
    DualTensor(ObjectType, ObjectType),
    /// `I* -> I`
    UnitDual,
    Inv(Box<Term>),
    ScalarMul(ScalarLiteral, Box<Term>),
    Prim(PrimData),
}

impl Term {
    pub fn compose(g: Term, f: Term) -> Term {
        Term::Compose(Box::new(g), Box::new(f))
    }

    pub fn tensor(f: Term, g: Term) -> Term {
        Term::Tensor(Box::new(f), Box::new(g))
    }

    pub fn dagger(f: Term) -> Term {
        Term::Dagger(Box::new(f))
    }

    pub fn transpose(f: Term) -> Term {
        Term::Transpose(Box::new(f))
    }

    pub fn conjugate(f: Term) -> Term {
        Term::Conjugate(Box::new(f))
    }

    pub fn name(f: Term) -> Term {
        Term::Name(Box::new(f))
    }

    pub fn coname(f: Term) -> Term {
        Term::Coname(Box::new(f))
    }

    pub fn inv(f: Term) -> Term {
        Term::Inv(Box::new(f))
    }

    pub fn scalar_mul(s: ScalarLiteral, f: Term) -> Term {
        Term::ScalarMul(s, Box::new(f))
    }

    /// `stages[n-1] . ... . stages[1] . stages[0]`: the first listed stage is
    /// applied first. Panics on an empty slice.
    pub fn pipeline(stages: &[Term]) -> Term {
        let mut it = stages.iter();
        let mut acc = it.next().expect("pipeline of zero stages").clone();
        for s in it {
            acc = Term::compose(s.clone(), acc);
        }
        acc
    }

    /// True for the structural-isomorphism constructors that `Inv` accepts.
    pub fn is_structural_iso(&self) -> bool {
        matches!(
            self,
            Term::Lambda(_)
                | Term::Rho(_)
                | Term::Sigma(..)
                | Term::Alpha(..)
                | Term::Dist(..)
                | Term::DualInvol(_)
                | Term::DualTensor(..)
                | Term::UnitDual
        )
    }
}

// ─────────────────────────── derived builders ───────────────────────────

/// Diagonal `A -> A (+) A`.
pub fn diag(a: &ObjectType) -> Term {
    Term::Pairing(vec![Term::Id(a.clone()), Term::Id(a.clone())])
}

/// Codiagonal `A (+) A -> A`.
pub fn codiag(a: &ObjectType) -> Term {
    Term::Copairing(vec![Term::Id(a.clone()), Term::Id(a.clone())])
}

/// `f1 (+) ... (+) fn : (+)A_i -> (+)B_i` as the pairing of `f_i . p_i`.
/// `doms` lists each `f_i`'s domain (the biproduct components).
pub fn biproduct_map(fs: &[Term], doms: &[ObjectType]) -> Term {
    assert_eq!(fs.len(), doms.len(), "biproduct_map arity mismatch");
    let comps: Vec<ObjectType> = doms.to_vec();
    let branches = fs
        .iter()
        .enumerate()
        .map(|(i, f)| Term::compose(f.clone(), Term::Proj(i, comps.clone())))
        .collect();
    Term::Pairing(branches)
}

/// The qubit object `Q`, a named generator of dimension 2.
pub fn qubit() -> ObjectType {
    ObjectType::base("Q", 2)
}

/// Bell morphism `beta_i : Q -> Q` for `i` in `1..=4`, with a declared
/// inverse. `beta_1..beta_3` are self-inverse; `beta_4` has inverse
/// `-beta_4`. Only `beta_1` and `beta_2` carry relational literals (the
/// others have negative entries).
pub fn beta(i: usize) -> Term {
    let (entries, inv): (Vec<f64>, Vec<f64>) = match i {
        1 => (vec![1.0, 0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0, 1.0]),
        2 => (vec![0.0, 1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0, 0.0]),
        3 => (vec![1.0, 0.0, 0.0, -1.0], vec![1.0, 0.0, 0.0, -1.0]),
        4 => (vec![0.0, -1.0, 1.0, 0.0], vec![0.0, 1.0, -1.0, 0.0]),
        _ => panic!("beta index {i} outside 1..=4"),
    };
    let to_lits = |v: &[f64]| v.iter().map(|&x| ScalarLiteral::real(x)).collect();
    let to_rel = |v: &[f64]| {
        if v.iter().all(|&x| x == 0.0 || x == 1.0) {
            Some(v.iter().map(|&x| x == 1.0).collect())
        } else {
            None
        }
    };
    Term::Prim(PrimData {
        name: format!("beta{i}"),
        dom: qubit(),
        cod: qubit(),
        fdhilb: Some(to_lits(&entries)),
        rel: to_rel(&entries),
        fdhilb_inv: Some(to_lits(&inv)),
        rel_inv: to_rel(&inv),
    })
}

/// Name of the identity on `a`: the unnormalised maximally correlated state
/// `I -> a* (x) a`.
pub fn epr_name(a: &ObjectType) -> Term {
    Term::name(Term::Id(a.clone()))
}

/// Normalised Bell state `b_i = vec(beta_i)/sqrt(2)` as a term
/// `I -> Q* (x) Q`.
pub fn bell_state(i: usize) -> Term {
    Term::scalar_mul(
        ScalarLiteral::real(std::f64::consts::FRAC_1_SQRT_2),
        Term::name(beta(i)),
    )
}

/// Right distribution `((+)comps) (x) a -> (+)(comps_i (x) a)`, derived from
/// `Sigma` and `Dist` (which distributes over the right factor only).
pub fn dist_right(comps: &[ObjectType], a: &ObjectType) -> Term {
    assert!(!comps.is_empty(), "dist_right needs at least one component");
    if comps.len() == 1 {
        return Term::Id(comps[0].clone().tensor(a.clone()));
    }
    let head = comps[0].clone();
    let tail = ObjectType::biproduct_of(&comps[1..]);
    let whole = ObjectType::biproduct_of(comps);
    let swap_in = Term::Sigma(whole, a.clone());
    let dist = Term::Dist(a.clone(), head.clone(), tail.clone());
    let fix_head = Term::Sigma(a.clone(), head.clone());
    let fix_tail = Term::compose(dist_right(&comps[1..], a), Term::Sigma(a.clone(), tail.clone()));
    let doms = vec![a.clone().tensor(head), a.clone().tensor(tail)];
    Term::pipeline(&[swap_in, dist, biproduct_map(&[fix_head, fix_tail], &doms)])
}

/// Inverse of [`dist_right`]: `(+)(comps_i (x) a) -> ((+)comps) (x) a`.
pub fn undist_right(comps: &[ObjectType], a: &ObjectType) -> Term {
    assert!(!comps.is_empty(), "undist_right needs at least one component");
    if comps.len() == 1 {
        return Term::Id(comps[0].clone().tensor(a.clone()));
    }
    let head = comps[0].clone();
    let tail = ObjectType::biproduct_of(&comps[1..]);
    let whole = ObjectType::biproduct_of(comps);
    let unfix_head = Term::Sigma(head.clone(), a.clone());
    let unfix_tail = Term::compose(
        Term::Sigma(tail.clone(), a.clone()),
        undist_right(&comps[1..], a),
    );
    let doms = vec![
        head.clone().tensor(a.clone()),
        ObjectType::biproduct_of(
            &comps[1..]
                .iter()
                .map(|c| c.clone().tensor(a.clone()))
                .collect::<Vec<_>>(),
        ),
    ];
    Term::pipeline(&[
        biproduct_map(&[unfix_head, unfix_tail], &doms),
        Term::inv(Term::Dist(a.clone(), head, tail)),
        Term::Sigma(a.clone(), whole),
    ])
}

/// Left distribution `a (x) ((+)comps) -> (+)(a (x) comps_i)`, nesting the
/// binary `Dist` down the right spine.
pub fn dist_left(a: &ObjectType, comps: &[ObjectType]) -> Term {
    assert!(!comps.is_empty(), "dist_left needs at least one component");
    if comps.len() == 1 {
        return Term::Id(a.clone().tensor(comps[0].clone()));
    }
    let head = comps[0].clone();
    let tail = ObjectType::biproduct_of(&comps[1..]);
    let dist = Term::Dist(a.clone(), head.clone(), tail.clone());
    let keep_head = Term::Id(a.clone().tensor(head.clone()));
    let recurse = dist_left(a, &comps[1..]);
    let doms = vec![a.clone().tensor(head), a.clone().tensor(tail)];
    Term::pipeline(&[dist, biproduct_map(&[keep_head, recurse], &doms)])
}

// ────────────────────────── leg permutations ──────────────────────────
//
// Wire shuffles on a right-nested tensor of legs, expressed with Sigma and
// Alpha so that reindexing is itself checked by the evaluator.

/// Swap of adjacent legs `k, k+1` in the right-nested tensor of `legs`.
pub fn adjacent_swap(legs: &[ObjectType], k: usize) -> Term {
    assert!(k + 1 < legs.len(), "adjacent_swap out of range");
    fn build(legs: &[ObjectType], k: usize) -> Term {
        if k == 0 {
            if legs.len() == 2 {
                Term::Sigma(legs[0].clone(), legs[1].clone())
            } else {
                let rest = ObjectType::tensor_of(&legs[2..]);
                Term::pipeline(&[
                    Term::Alpha(legs[0].clone(), legs[1].clone(), rest.clone()),
                    Term::tensor(
                        Term::Sigma(legs[0].clone(), legs[1].clone()),
                        Term::Id(rest.clone()),
                    ),
                    Term::inv(Term::Alpha(legs[1].clone(), legs[0].clone(), rest)),
                ])
            }
        } else {
            Term::tensor(Term::Id(legs[0].clone()), build(&legs[1..], k - 1))
        }
    }
    build(legs, k)
}

/// Permutation term rearranging the right-nested tensor of `legs` so that
/// output position `j` carries input leg `order[j]`. Built by bubbling with
/// [`adjacent_swap`]; `order` must be a permutation of `0..legs.len()`.
pub fn leg_permutation(legs: &[ObjectType], order: &[usize]) -> Term {
    let n = legs.len();
    assert_eq!(order.len(), n, "leg_permutation arity mismatch");
    let mut seen = vec![false; n];
    for &o in order {
        assert!(o < n && !seen[o], "leg_permutation: not a permutation");
        seen[o] = true;
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut current_legs: Vec<ObjectType> = legs.to_vec();
    let mut term = Term::Id(ObjectType::tensor_of(legs));
    for j in 0..n {
        let p = current
            .iter()
            .position(|&x| x == order[j])
            .expect("leg present");
        for k in (j..p).rev() {
            term = Term::compose(adjacent_swap(&current_legs, k), term);
            current.swap(k, k + 1);
            current_legs.swap(k, k + 1);
        }
    }
    term
}
