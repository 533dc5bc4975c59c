//! Syntax trees for the protocol language. Every node keeps its source
//! position for diagnostics, but equality ignores positions so that a
//! pretty-printed program compares equal to its original parse.

/// 1-based line and column of a token.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct OExpr {
    pub kind: OKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OKind {
    Unit,
    Ident(String),
    Dual(Box<OExpr>),
    Tensor(Box<OExpr>, Box<OExpr>),
    Biproduct(Box<OExpr>, Box<OExpr>),
}

impl PartialEq for OExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

/// A scalar literal `re + im i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone)]
pub struct TExpr {
    pub kind: TKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TKind {
    Ident(String),
    Id(OExpr),
    Compose(Box<TExpr>, Box<TExpr>),
    Tensor(Box<TExpr>, Box<TExpr>),
    Dagger(Box<TExpr>),
    Transpose(Box<TExpr>),
    Conj(Box<TExpr>),
    Eta(OExpr),
    Eps(OExpr),
    Name(Box<TExpr>),
    Coname(Box<TExpr>),
    Pair(Vec<TExpr>),
    Copair(Vec<TExpr>),
    Proj(usize, OExpr),
    Inj(usize, OExpr),
    Lambda(OExpr),
    Rho(OExpr),
    Sigma(OExpr, OExpr),
    Alpha(OExpr, OExpr, OExpr),
    Dist(OExpr, OExpr, OExpr),
    Inv(Box<TExpr>),
    Scal(Scalar, Box<TExpr>),
}

impl PartialEq for TExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssertOp {
    /// `==`: entrywise equality within tolerance.
    Exact,
    /// `~=`: equality up to a nonzero scalar.
    UpToScalar,
}

impl AssertOp {
    pub fn as_str(&self) -> &'static str {
        match self {
            AssertOp::Exact => "==",
            AssertOp::UpToScalar => "~=",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Object {
        name: String,
        def: OExpr,
    },
    Morph {
        name: String,
        dom: OExpr,
        cod: OExpr,
        /// Row-major rows of the matrix literal; row count is the codomain
        /// dimension.
        rows: Vec<Vec<Scalar>>,
    },
    TermDef {
        name: String,
        def: TExpr,
    },
    Assert {
        lhs: TExpr,
        op: AssertOp,
        rhs: TExpr,
    },
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}
