//! Tokenizer for `.cq` sources. Comments run from `#` to end of line.

use super::ast::Pos;
use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// A numeric literal; `imaginary` when suffixed with `i`.
    Num { value: f64, imaginary: bool },
    KwObject,
    KwMorph,
    KwTerm,
    KwAssert,
    KwUnit,
    KwId,
    KwDagger,
    KwTranspose,
    KwConj,
    KwEta,
    KwEps,
    KwName,
    KwConame,
    KwPair,
    KwCopair,
    KwP,
    KwQ,
    KwOf,
    KwLambda,
    KwRho,
    KwSigma,
    KwAlpha,
    KwDist,
    KwInv,
    KwScal,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Star,
    Plus,
    Minus,
    Colon,
    Arrow,
    Equals,
    EqEq,
    TildeEq,
    /// The tensor operator `(x)`.
    TensorOp,
    /// The biproduct operator `(+)`.
    BiprodOp,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Num { value, imaginary: false } => format!("number {value}"),
            Tok::Num { value, imaginary: true } => format!("number {value}i"),
            Tok::KwObject => "'object'".into(),
            Tok::KwMorph => "'morph'".into(),
            Tok::KwTerm => "'term'".into(),
            Tok::KwAssert => "'assert'".into(),
            Tok::KwUnit => "'I'".into(),
            Tok::KwId => "'id'".into(),
            Tok::KwDagger => "'dagger'".into(),
            Tok::KwTranspose => "'transpose'".into(),
            Tok::KwConj => "'conj'".into(),
            Tok::KwEta => "'eta'".into(),
            Tok::KwEps => "'eps'".into(),
            Tok::KwName => "'name'".into(),
            Tok::KwConame => "'coname'".into(),
            Tok::KwPair => "'pair'".into(),
            Tok::KwCopair => "'copair'".into(),
            Tok::KwP => "'p'".into(),
            Tok::KwQ => "'q'".into(),
            Tok::KwOf => "'of'".into(),
            Tok::KwLambda => "'lambda'".into(),
            Tok::KwRho => "'rho'".into(),
            Tok::KwSigma => "'sigma'".into(),
            Tok::KwAlpha => "'alpha'".into(),
            Tok::KwDist => "'dist'".into(),
            Tok::KwInv => "'inv'".into(),
            Tok::KwScal => "'scal'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Star => "'*'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Colon => "':'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Equals => "'='".into(),
            Tok::EqEq => "'=='".into(),
            Tok::TildeEq => "'~='".into(),
            Tok::TensorOp => "'(x)'".into(),
            Tok::BiprodOp => "'(+)'".into(),
        }
    }
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "object" => Tok::KwObject,
        "morph" => Tok::KwMorph,
        "term" => Tok::KwTerm,
        "assert" => Tok::KwAssert,
        "I" => Tok::KwUnit,
        "id" => Tok::KwId,
        "dagger" => Tok::KwDagger,
        "transpose" => Tok::KwTranspose,
        "conj" => Tok::KwConj,
        "eta" => Tok::KwEta,
        "eps" => Tok::KwEps,
        "name" => Tok::KwName,
        "coname" => Tok::KwConame,
        "pair" => Tok::KwPair,
        "copair" => Tok::KwCopair,
        "p" => Tok::KwP,
        "q" => Tok::KwQ,
        "of" => Tok::KwOf,
        "lambda" => Tok::KwLambda,
        "rho" => Tok::KwRho,
        "sigma" => Tok::KwSigma,
        "alpha" => Tok::KwAlpha,
        "dist" => Tok::KwDist,
        "inv" => Tok::KwInv,
        "scal" => Tok::KwScal,
        _ => return None,
    })
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1usize;
    let mut col = 1usize;

    let n = chars.len();
    while i < n {
        let c = chars[i];
        let pos = Pos { line, col };
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize, by: usize| {
            for k in 0..by {
                if chars[*i + k] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
            }
            *i += by;
        };

        match c {
            ' ' | '\t' | '\r' | '\n' => {
                advance(&mut i, &mut line, &mut col, 1);
            }
            '#' => {
                while i < n && chars[i] != '\n' {
                    advance(&mut i, &mut line, &mut col, 1);
                }
            }
            '(' => {
                if i + 2 < n && chars[i + 2] == ')' && (chars[i + 1] == 'x' || chars[i + 1] == '+')
                {
                    let t = if chars[i + 1] == 'x' { Tok::TensorOp } else { Tok::BiprodOp };
                    toks.push((t, pos));
                    advance(&mut i, &mut line, &mut col, 3);
                } else {
                    toks.push((Tok::LParen, pos));
                    advance(&mut i, &mut line, &mut col, 1);
                }
            }
            ')' => {
                toks.push((Tok::RParen, pos));
                advance(&mut i, &mut line, &mut col, 1);
            }
            '[' => {
                toks.push((Tok::LBracket, pos));
                advance(&mut i, &mut line, &mut col, 1);
            }
            ']' => {
                toks.push((Tok::RBracket, pos));
                advance(&mut i, &mut line, &mut col, 1);
            }
            ',' => {
                toks.push((Tok::Comma, pos));
                advance(&mut i, &mut line, &mut col, 1);
            }
            '.' => {
                toks.push((Tok::Dot, pos));
                advance(&mut i, &mut line, &mut col, 1);
            }
            '*' => {
                toks.push((Tok::Star, pos));
                advance(&mut i, &mut line, &mut col, 1);
            }
            '+' => {
                toks.push((Tok::Plus, pos));
                advance(&mut i, &mut line, &mut col, 1);
            }
            ':' => {
                toks.push((Tok::Colon, pos));
                advance(&mut i, &mut line, &mut col, 1);
            }
            '-' => {
                if i + 1 < n && chars[i + 1] == '>' {
                    toks.push((Tok::Arrow, pos));
                    advance(&mut i, &mut line, &mut col, 2);
                } else {
                    toks.push((Tok::Minus, pos));
                    advance(&mut i, &mut line, &mut col, 1);
                }
            }
            '=' => {
                if i + 1 < n && chars[i + 1] == '=' {
                    toks.push((Tok::EqEq, pos));
                    advance(&mut i, &mut line, &mut col, 2);
                } else {
                    toks.push((Tok::Equals, pos));
                    advance(&mut i, &mut line, &mut col, 1);
                }
            }
            '~' => {
                if i + 1 < n && chars[i + 1] == '=' {
                    toks.push((Tok::TildeEq, pos));
                    advance(&mut i, &mut line, &mut col, 2);
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        expected: "'~='".into(),
                        found: "'~'".into(),
                    });
                }
            }
            d if d.is_ascii_digit() => {
                let start = i;
                let mut j = i;
                while j < n && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < n && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < n && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                // An `i` suffix marks an imaginary literal, but only when it
                // does not start a longer identifier like `id`.
                let mut imaginary = false;
                if j < n
                    && chars[j] == 'i'
                    && !(j + 1 < n && (chars[j + 1].is_ascii_alphanumeric() || chars[j + 1] == '_'))
                {
                    imaginary = true;
                }
                let text: String = chars[start..j].iter().collect();
                let value: f64 = text.parse().map_err(|_| ParseError {
                    line,
                    col,
                    expected: "a number".into(),
                    found: format!("'{text}'"),
                })?;
                let len = j - start + usize::from(imaginary);
                toks.push((Tok::Num { value, imaginary }, pos));
                advance(&mut i, &mut line, &mut col, len);
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                let mut j = i;
                while j < n && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = keyword(&word).unwrap_or(Tok::Ident(word));
                toks.push((tok, pos));
                advance(&mut i, &mut line, &mut col, j - start);
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    expected: "a token".into(),
                    found: format!("'{other}'"),
                });
            }
        }
    }
    Ok(toks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_and_groupings_are_distinguished() {
        let toks = lex("(x) (+) ( x ) == ~= -> - = .").unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|(t, _)| t).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::TensorOp,
                Tok::BiprodOp,
                Tok::LParen,
                Tok::Ident("x".into()),
                Tok::RParen,
                Tok::EqEq,
                Tok::TildeEq,
                Tok::Arrow,
                Tok::Minus,
                Tok::Equals,
                Tok::Dot,
            ]
        );
    }

    #[test]
    fn numbers_with_imaginary_suffix() {
        let toks = lex("2 0.5i 3i 2id").unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|(t, _)| t).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Num { value: 2.0, imaginary: false },
                Tok::Num { value: 0.5, imaginary: true },
                Tok::Num { value: 3.0, imaginary: true },
                Tok::Num { value: 2.0, imaginary: false },
                Tok::KwId,
            ]
        );
    }

    #[test]
    fn dot_is_not_eaten_by_number_lexing() {
        let toks = lex("f . 2 . g").unwrap();
        assert_eq!(toks.len(), 5);
        assert_eq!(toks[1].0, Tok::Dot);
        assert_eq!(toks[3].0, Tok::Dot);
    }

    #[test]
    fn comments_and_positions() {
        let toks = lex("object Q # the qubit\nterm t").unwrap();
        assert_eq!(toks.len(), 4);
        assert_eq!(toks[2].1.line, 2);
        assert_eq!(toks[2].1.col, 1);
        assert_eq!(toks[3].1.col, 6);
    }

    #[test]
    fn rejects_stray_characters() {
        let err = lex("term t = f @ g").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 12);
    }
}
