//! Pretty-printer. Children are parenthesised whenever their form binds
//! looser than the parent requires, so printing then reparsing yields a
//! structurally identical program.
//!
//! One subtlety: keyword forms ending in an object expression (`id Q`,
//! `sigma I, I`, `p 0 of Q`, ...) are "open" — a following `(x)` would be
//! swallowed by the greedy object parser. Open forms get parenthesised
//! whenever the next printed token is a tensor operator.

use super::ast::{OExpr, OKind, Program, Scalar, Stmt, StmtKind, TExpr, TKind};
use std::fmt::Write;

pub fn pretty(p: &Program) -> String {
    let mut out = String::new();
    for stmt in &p.stmts {
        let _ = writeln!(out, "{}", pretty_stmt(stmt));
    }
    out
}

fn pretty_stmt(s: &Stmt) -> String {
    match &s.kind {
        StmtKind::Object { name, def } => format!("object {name} = {}", oexpr(def, 0)),
        StmtKind::Morph { name, dom, cod, rows } => {
            let body = rows
                .iter()
                .map(|r| {
                    let cells: Vec<String> = r.iter().map(scalar).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect::<Vec<_>>()
                .join(", ");
            format!("morph {name} : {} -> {} = [{}]", oexpr(dom, 0), oexpr(cod, 0), body)
        }
        StmtKind::TermDef { name, def } => format!("term {name} = {}", texpr(def, 0).text),
        StmtKind::Assert { lhs, op, rhs } => format!(
            "assert {} {} {}",
            texpr(lhs, 0).text,
            op.as_str(),
            texpr(rhs, 0).text
        ),
    }
}

pub fn scalar(s: &Scalar) -> String {
    if s.im == 0.0 {
        format!("{}", s.re)
    } else if s.re == 0.0 {
        format!("{}i", s.im)
    } else if s.im < 0.0 {
        format!("{}-{}i", s.re, -s.im)
    } else {
        format!("{}+{}i", s.re, s.im)
    }
}

// Binding strength for objects: 0 = biproduct, 1 = tensor, 2 = dual/atom.
fn oexpr(o: &OExpr, min_level: u8) -> String {
    let (text, level) = match &o.kind {
        OKind::Unit => ("I".to_string(), 2),
        OKind::Ident(name) => (name.clone(), 2),
        OKind::Dual(a) => (format!("{}*", oexpr(a, 2)), 2),
        OKind::Tensor(a, b) => (format!("{} (x) {}", oexpr(a, 1), oexpr(b, 2)), 1),
        OKind::Biproduct(a, b) => (format!("{} (+) {}", oexpr(a, 0), oexpr(b, 1)), 0),
    };
    if level < min_level {
        format!("({text})")
    } else {
        text
    }
}

/// An object argument of a keyword form, printed atomically. The greedy
/// object parser restarts after a parenthesised group, so a trailing
/// object argument is always open: `p 0 of (I (+) I) (x) g` still reads
/// the `(x) g` as part of the object.
fn oarg(o: &OExpr) -> (String, bool) {
    (oexpr(o, 2), true)
}

struct Rendered {
    text: String,
    /// The printed text ends in an object expression still hungry for
    /// tensor operators.
    open: bool,
}

// Binding strength for terms: 0 = composition, 1 = tensor, 2 = prefix/atom.
fn texpr(t: &TExpr, min_level: u8) -> Rendered {
    let closed = |text: String, level: u8| (text, level, false);
    let (text, level, open) = match &t.kind {
        TKind::Ident(name) => closed(name.clone(), 2),
        TKind::Id(o) => {
            let (a, open) = oarg(o);
            (format!("id {a}"), 2, open)
        }
        TKind::Compose(g, f) => {
            let l = texpr(g, 0);
            let r = texpr(f, 1);
            (format!("{} . {}", l.text, r.text), 0, r.open)
        }
        TKind::Tensor(f, g) => {
            let l = texpr(f, 1);
            let ltext = if l.open { format!("({})", l.text) } else { l.text };
            let r = texpr(g, 2);
            (format!("{ltext} (x) {}", r.text), 1, r.open)
        }
        TKind::Dagger(f) => prefix_term("dagger", f),
        TKind::Transpose(f) => prefix_term("transpose", f),
        TKind::Conj(f) => prefix_term("conj", f),
        TKind::Name(f) => prefix_term("name", f),
        TKind::Coname(f) => prefix_term("coname", f),
        TKind::Inv(f) => prefix_term("inv", f),
        TKind::Eta(o) => prefix_object("eta", o),
        TKind::Eps(o) => prefix_object("eps", o),
        TKind::Lambda(o) => prefix_object("lambda", o),
        TKind::Rho(o) => prefix_object("rho", o),
        TKind::Pair(items) => closed(keyword_list("pair", items), 2),
        TKind::Copair(items) => closed(keyword_list("copair", items), 2),
        TKind::Proj(i, o) => {
            let (a, open) = oarg(o);
            (format!("p {i} of {a}"), 2, open)
        }
        TKind::Inj(i, o) => {
            let (a, open) = oarg(o);
            (format!("q {i} of {a}"), 2, open)
        }
        TKind::Sigma(a, b) => {
            let (ta, _) = oarg(a);
            let (tb, open) = oarg(b);
            (format!("sigma {ta}, {tb}"), 2, open)
        }
        TKind::Alpha(a, b, c) => {
            let (ta, _) = oarg(a);
            let (tb, _) = oarg(b);
            let (tc, open) = oarg(c);
            (format!("alpha {ta}, {tb}, {tc}"), 2, open)
        }
        TKind::Dist(a, b1, b2) => {
            let (ta, _) = oarg(a);
            let (tb, _) = oarg(b1);
            let (tc, open) = oarg(b2);
            (format!("dist {ta}, {tb}, {tc}"), 2, open)
        }
        TKind::Scal(s, f) => {
            let inner = texpr(f, 2);
            (format!("scal {} {}", scalar(s), inner.text), 2, inner.open)
        }
    };
    if level < min_level {
        Rendered { text: format!("({text})"), open: false }
    } else {
        Rendered { text, open }
    }
}

fn prefix_term(kw: &str, f: &TExpr) -> (String, u8, bool) {
    let inner = texpr(f, 2);
    (format!("{kw} {}", inner.text), 2, inner.open)
}

fn prefix_object(kw: &str, o: &OExpr) -> (String, u8, bool) {
    let (a, open) = oarg(o);
    (format!("{kw} {a}"), 2, open)
}

fn keyword_list(kw: &str, items: &[TExpr]) -> String {
    let body: Vec<String> = items.iter().map(|t| texpr(t, 0).text).collect();
    format!("{kw} [{}]", body.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parser::parse;

    fn round_trip(src: &str) {
        let p1 = parse(src).unwrap_or_else(|e| panic!("first parse failed: {e}\n{src}"));
        let printed = pretty(&p1);
        let p2 = parse(&printed)
            .unwrap_or_else(|e| panic!("reparse failed: {e}\n--- printed ---\n{printed}"));
        assert_eq!(p1, p2, "round trip changed structure:\n{printed}");
    }

    #[test]
    fn round_trips_cover_precedence_corners() {
        round_trip("object A = (I (+) I) (x) I*");
        round_trip("object A = I (+) I (x) (I (+) I)**");
        round_trip("term t = f . (g . h)");
        round_trip("term t = (f . g) (x) h");
        round_trip("term t = dagger (f . g) (x) id (I (+) I)");
        round_trip("term t = scal -1+2i (f (x) g)");
        round_trip("term t = pair [f . g, h, id I]");
        round_trip("term t = p 0 of (I (+) I) . q 1 of (I (+) I)");
        round_trip("term t = sigma I, (I (x) I) . alpha I, I, I");
        round_trip("morph m : I (+) I -> I = [[1, 0.5]]");
        round_trip("assert inv (sigma I, I) ~= sigma I, I");
    }

    #[test]
    fn open_forms_are_shielded_from_following_tensors() {
        // All of these have a keyword form whose trailing object would
        // swallow the (x) if printed bare.
        round_trip("term t = (id I) (x) f");
        round_trip("term t = (sigma I, I) (x) g");
        round_trip("term t = f (x) (p 0 of I (+) I) (x) g");
        round_trip("term t = (dagger id I) (x) g");
        round_trip("term t = (scal 2 id I) (x) g");
        round_trip("term t = h . (eta I*) (x) g . k");
    }

    #[test]
    fn printed_form_is_stable() {
        for src in [
            "term t = (f . g) (x) h",
            "term t = (id I) (x) f",
            "term t = pair [sigma I, I, id I]",
        ] {
            let p = parse(src).unwrap();
            let once = pretty(&p);
            let twice = pretty(&parse(&once).unwrap());
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn scalar_rendering() {
        assert_eq!(scalar(&Scalar { re: 2.0, im: 0.0 }), "2");
        assert_eq!(scalar(&Scalar { re: 0.0, im: -1.5 }), "-1.5i");
        assert_eq!(scalar(&Scalar { re: 1.0, im: -2.0 }), "1-2i");
        assert_eq!(scalar(&Scalar { re: -1.0, im: 0.5 }), "-1+0.5i");
    }
}
