//! Recursive-descent parser for the protocol language.
//!
//! Precedence: in object expressions the postfix dual `*` binds tightest,
//! then `(x)`, then `(+)`, both left-associative. In term expressions the
//! prefix keywords bind tightest, then `(x)`, then composition `.`, both
//! left-associative; `g . f` applies `f` first.

use super::ast::{AssertOp, OExpr, OKind, Pos, Program, Scalar, Stmt, StmtKind, TExpr, TKind};
use super::lexer::{lex, Tok};
use super::ParseError;

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

pub fn parse(src: &str) -> Result<Program, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let mut stmts = Vec::new();
    while !p.at_end() {
        stmts.push(p.stmt()?);
    }
    Ok(Program { stmts })
}

impl Parser {
    fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn peek_nth(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.at + n).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks
            .get(self.at)
            .or_else(|| self.toks.last())
            .map(|(_, p)| *p)
            .unwrap_or_default()
    }

    fn err(&self, expected: &str) -> ParseError {
        let (found, pos) = match self.toks.get(self.at) {
            Some((t, p)) => (t.describe(), *p),
            None => (
                "end of input".to_string(),
                self.toks.last().map(|(_, p)| *p).unwrap_or_default(),
            ),
        };
        ParseError { line: pos.line, col: pos.col, expected: expected.to_string(), found }
    }

    fn bump(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Pos, ParseError> {
        match self.peek() {
            Some(t) if t == tok => Ok(self.bump().expect("peeked").1),
            _ => Err(self.err(what)),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.bump() {
                Some((Tok::Ident(s), p)) => Ok((s, p)),
                _ => unreachable!(),
            },
            _ => Err(self.err(what)),
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::KwObject) => {
                self.bump();
                let (name, _) = self.ident("an object name")?;
                self.expect(&Tok::Equals, "'='")?;
                let def = self.oexpr()?;
                Ok(Stmt { kind: StmtKind::Object { name, def }, pos })
            }
            Some(Tok::KwMorph) => {
                self.bump();
                let (name, _) = self.ident("a morphism name")?;
                self.expect(&Tok::Colon, "':'")?;
                let dom = self.oexpr()?;
                self.expect(&Tok::Arrow, "'->'")?;
                let cod = self.oexpr()?;
                self.expect(&Tok::Equals, "'='")?;
                let rows = self.matrix()?;
                Ok(Stmt { kind: StmtKind::Morph { name, dom, cod, rows }, pos })
            }
            Some(Tok::KwTerm) => {
                self.bump();
                let (name, _) = self.ident("a term name")?;
                self.expect(&Tok::Equals, "'='")?;
                let def = self.texpr()?;
                Ok(Stmt { kind: StmtKind::TermDef { name, def }, pos })
            }
            Some(Tok::KwAssert) => {
                self.bump();
                let lhs = self.texpr()?;
                let op = match self.peek() {
                    Some(Tok::EqEq) => AssertOp::Exact,
                    Some(Tok::TildeEq) => AssertOp::UpToScalar,
                    _ => return Err(self.err("'==' or '~='")),
                };
                self.bump();
                let rhs = self.texpr()?;
                Ok(Stmt { kind: StmtKind::Assert { lhs, op, rhs }, pos })
            }
            _ => Err(self.err("'object', 'morph', 'term' or 'assert'")),
        }
    }

    // ── object expressions ──

    fn oexpr(&mut self) -> Result<OExpr, ParseError> {
        let mut lhs = self.oexpr_tensor()?;
        while matches!(self.peek(), Some(Tok::BiprodOp)) {
            let pos = self.bump().expect("peeked").1;
            let rhs = self.oexpr_tensor()?;
            lhs = OExpr { kind: OKind::Biproduct(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn oexpr_tensor(&mut self) -> Result<OExpr, ParseError> {
        let mut lhs = self.oexpr_post()?;
        while matches!(self.peek(), Some(Tok::TensorOp)) {
            let pos = self.bump().expect("peeked").1;
            let rhs = self.oexpr_post()?;
            lhs = OExpr { kind: OKind::Tensor(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn oexpr_post(&mut self) -> Result<OExpr, ParseError> {
        let mut e = self.oexpr_atom()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            let pos = self.bump().expect("peeked").1;
            e = OExpr { kind: OKind::Dual(Box::new(e)), pos };
        }
        Ok(e)
    }

    fn oexpr_atom(&mut self) -> Result<OExpr, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::KwUnit) => {
                self.bump();
                Ok(OExpr { kind: OKind::Unit, pos })
            }
            Some(Tok::Ident(_)) => {
                let (name, _) = self.ident("an object name")?;
                Ok(OExpr { kind: OKind::Ident(name), pos })
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.oexpr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(self.err("an object expression")),
        }
    }

    // ── term expressions ──

    fn texpr(&mut self) -> Result<TExpr, ParseError> {
        let mut lhs = self.texpr_tensor()?;
        while matches!(self.peek(), Some(Tok::Dot)) {
            let pos = self.bump().expect("peeked").1;
            let rhs = self.texpr_tensor()?;
            lhs = TExpr { kind: TKind::Compose(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn texpr_tensor(&mut self) -> Result<TExpr, ParseError> {
        let mut lhs = self.texpr_prefix()?;
        while matches!(self.peek(), Some(Tok::TensorOp)) {
            let pos = self.bump().expect("peeked").1;
            let rhs = self.texpr_prefix()?;
            lhs = TExpr { kind: TKind::Tensor(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn texpr_prefix(&mut self) -> Result<TExpr, ParseError> {
        let pos = self.pos();
        macro_rules! unary_term {
            ($k:ident) => {{
                self.bump();
                let inner = self.texpr_prefix()?;
                Ok(TExpr { kind: TKind::$k(Box::new(inner)), pos })
            }};
        }
        macro_rules! unary_object {
            ($k:ident) => {{
                self.bump();
                let o = self.oexpr()?;
                Ok(TExpr { kind: TKind::$k(o), pos })
            }};
        }
        match self.peek() {
            Some(Tok::KwId) => unary_object!(Id),
            Some(Tok::KwEta) => unary_object!(Eta),
            Some(Tok::KwEps) => unary_object!(Eps),
            Some(Tok::KwLambda) => unary_object!(Lambda),
            Some(Tok::KwRho) => unary_object!(Rho),
            Some(Tok::KwDagger) => unary_term!(Dagger),
            Some(Tok::KwTranspose) => unary_term!(Transpose),
            Some(Tok::KwConj) => unary_term!(Conj),
            Some(Tok::KwName) => unary_term!(Name),
            Some(Tok::KwConame) => unary_term!(Coname),
            Some(Tok::KwInv) => unary_term!(Inv),
            Some(Tok::KwPair) => {
                self.bump();
                let items = self.texpr_list()?;
                Ok(TExpr { kind: TKind::Pair(items), pos })
            }
            Some(Tok::KwCopair) => {
                self.bump();
                let items = self.texpr_list()?;
                Ok(TExpr { kind: TKind::Copair(items), pos })
            }
            Some(Tok::KwP) | Some(Tok::KwQ) => {
                let proj = matches!(self.peek(), Some(Tok::KwP));
                self.bump();
                let idx = self.index()?;
                self.expect(&Tok::KwOf, "'of'")?;
                let o = self.oexpr()?;
                let kind = if proj { TKind::Proj(idx, o) } else { TKind::Inj(idx, o) };
                Ok(TExpr { kind, pos })
            }
            Some(Tok::KwSigma) => {
                self.bump();
                let a = self.oexpr()?;
                self.expect(&Tok::Comma, "','")?;
                let b = self.oexpr()?;
                Ok(TExpr { kind: TKind::Sigma(a, b), pos })
            }
            Some(Tok::KwAlpha) | Some(Tok::KwDist) => {
                let alpha = matches!(self.peek(), Some(Tok::KwAlpha));
                self.bump();
                let a = self.oexpr()?;
                self.expect(&Tok::Comma, "','")?;
                let b = self.oexpr()?;
                self.expect(&Tok::Comma, "','")?;
                let c = self.oexpr()?;
                let kind = if alpha { TKind::Alpha(a, b, c) } else { TKind::Dist(a, b, c) };
                Ok(TExpr { kind, pos })
            }
            Some(Tok::KwScal) => {
                self.bump();
                let s = self.scalar()?;
                let inner = self.texpr_prefix()?;
                Ok(TExpr { kind: TKind::Scal(s, Box::new(inner)), pos })
            }
            Some(Tok::Ident(_)) => {
                let (name, _) = self.ident("a term name")?;
                Ok(TExpr { kind: TKind::Ident(name), pos })
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.texpr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(self.err("a term expression")),
        }
    }

    fn texpr_list(&mut self) -> Result<Vec<TExpr>, ParseError> {
        self.expect(&Tok::LBracket, "'['")?;
        let mut items = vec![self.texpr()?];
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.bump();
            items.push(self.texpr()?);
        }
        self.expect(&Tok::RBracket, "']'")?;
        Ok(items)
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Num { value, imaginary: false })
                if value.fract() == 0.0 && *value >= 0.0 =>
            {
                let v = *value as usize;
                self.bump();
                Ok(v)
            }
            _ => Err(self.err("a component index")),
        }
    }

    /// `num`, `num i`, or `num +- num i`, with an optional leading minus.
    fn scalar(&mut self) -> Result<Scalar, ParseError> {
        let neg = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            true
        } else {
            false
        };
        let (value, imaginary) = match self.peek() {
            Some(Tok::Num { value, imaginary }) => (*value, *imaginary),
            _ => return Err(self.err("a scalar literal")),
        };
        self.bump();
        let sign = if neg { -1.0 } else { 1.0 };
        if imaginary {
            return Ok(Scalar { re: 0.0, im: sign * value });
        }
        // Only consume a following +- when it introduces an imaginary part;
        // otherwise it belongs to the surrounding expression.
        let tail_sign = match (self.peek(), self.peek_nth(1)) {
            (Some(Tok::Plus), Some(Tok::Num { imaginary: true, .. })) => Some(1.0),
            (Some(Tok::Minus), Some(Tok::Num { imaginary: true, .. })) => Some(-1.0),
            _ => None,
        };
        if let Some(ts) = tail_sign {
            self.bump();
            if let Some((Tok::Num { value: im, .. }, _)) = self.bump() {
                return Ok(Scalar { re: sign * value, im: ts * im });
            }
            unreachable!("peeked imaginary number");
        }
        Ok(Scalar { re: sign * value, im: 0.0 })
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Scalar>>, ParseError> {
        self.expect(&Tok::LBracket, "'['")?;
        let mut rows = vec![self.matrix_row()?];
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.bump();
            rows.push(self.matrix_row()?);
        }
        self.expect(&Tok::RBracket, "']'")?;
        let width = rows[0].len();
        if let Some(bad) = rows.iter().position(|r| r.len() != width) {
            return Err(ParseError {
                line: self.pos().line,
                col: self.pos().col,
                expected: format!("{width} entries in matrix row {}", bad + 1),
                found: format!("{}", rows[bad].len()),
            });
        }
        Ok(rows)
    }

    fn matrix_row(&mut self) -> Result<Vec<Scalar>, ParseError> {
        self.expect(&Tok::LBracket, "'['")?;
        let mut row = vec![self.scalar()?];
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.bump();
            row.push(self.scalar()?);
        }
        self.expect(&Tok::RBracket, "']'")?;
        Ok(row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_ok(src: &str) -> Program {
        parse(src).unwrap_or_else(|e| panic!("parse failed: {e}"))
    }

    #[test]
    fn object_precedence_dual_tensor_biproduct() {
        let p = parse_ok("object A = I (+) I (x) I* (+) I");
        let StmtKind::Object { def, .. } = &p.stmts[0].kind else { panic!() };
        // ((I (+) (I (x) I*)) (+) I)
        let OKind::Biproduct(l, r) = &def.kind else { panic!("top should be (+)") };
        assert_eq!(r.kind, OKind::Unit);
        let OKind::Biproduct(ll, lr) = &l.kind else { panic!() };
        assert_eq!(ll.kind, OKind::Unit);
        let OKind::Tensor(tl, tr) = &lr.kind else { panic!() };
        assert_eq!(tl.kind, OKind::Unit);
        assert!(matches!(tr.kind, OKind::Dual(_)));
    }

    #[test]
    fn composition_is_left_associative_with_loose_binding() {
        let p = parse_ok("term t = f . g (x) h . k");
        let StmtKind::TermDef { def, .. } = &p.stmts[0].kind else { panic!() };
        // ((f . (g (x) h)) . k)
        let TKind::Compose(l, r) = &def.kind else { panic!() };
        assert_eq!(r.kind, TKind::Ident("k".into()));
        let TKind::Compose(f, gh) = &l.kind else { panic!() };
        assert_eq!(f.kind, TKind::Ident("f".into()));
        assert!(matches!(gh.kind, TKind::Tensor(_, _)));
    }

    #[test]
    fn prefix_binds_tighter_than_tensor() {
        let p = parse_ok("term t = dagger f (x) id I");
        let StmtKind::TermDef { def, .. } = &p.stmts[0].kind else { panic!() };
        let TKind::Tensor(l, r) = &def.kind else { panic!("top should be (x)") };
        assert!(matches!(l.kind, TKind::Dagger(_)));
        assert!(matches!(r.kind, TKind::Id(_)));
    }

    #[test]
    fn scalars_parse_all_forms() {
        let p = parse_ok(
            "term a = scal 2 f\n\
             term b = scal -0.5 f\n\
             term c = scal 3i f\n\
             term d = scal 1-2i f\n\
             term e = scal -1+0.5i f",
        );
        let got: Vec<Scalar> = p
            .stmts
            .iter()
            .map(|s| {
                let StmtKind::TermDef { def, .. } = &s.kind else { panic!() };
                let TKind::Scal(sc, _) = &def.kind else { panic!() };
                *sc
            })
            .collect();
        assert_eq!(got[0], Scalar { re: 2.0, im: 0.0 });
        assert_eq!(got[1], Scalar { re: -0.5, im: 0.0 });
        assert_eq!(got[2], Scalar { re: 0.0, im: 3.0 });
        assert_eq!(got[3], Scalar { re: 1.0, im: -2.0 });
        assert_eq!(got[4], Scalar { re: -1.0, im: 0.5 });
    }

    #[test]
    fn morph_matrix_and_assert() {
        let p = parse_ok(
            "object Q = I (+) I\n\
             morph b2 : Q -> Q = [[0, 1], [1, 0]]\n\
             assert b2 . b2 == id Q",
        );
        assert_eq!(p.stmts.len(), 3);
        let StmtKind::Morph { rows, .. } = &p.stmts[1].kind else { panic!() };
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0][1], Scalar { re: 1.0, im: 0.0 });
        let StmtKind::Assert { op, .. } = &p.stmts[2].kind else { panic!() };
        assert_eq!(*op, AssertOp::Exact);
    }

    #[test]
    fn projection_indices_and_structural_terms() {
        let p = parse_ok("term t = (p 0 of I (+) I) . sigma I, I . q 1 of I (+) I");
        let StmtKind::TermDef { def, .. } = &p.stmts[0].kind else { panic!() };
        let TKind::Compose(l, r) = &def.kind else { panic!() };
        assert!(matches!(r.kind, TKind::Inj(1, _)));
        let TKind::Compose(p0, s) = &l.kind else { panic!() };
        assert!(matches!(p0.kind, TKind::Proj(0, _)));
        assert!(matches!(s.kind, TKind::Sigma(_, _)));
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        let err = parse("morph m : I -> I (+) I = [[1], [0, 1]]").unwrap_err();
        assert!(err.expected.contains("entries in matrix row"));
    }

    #[test]
    fn error_carries_position() {
        let err = parse("term t = f .\n. g").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.col, 1);
    }
}
