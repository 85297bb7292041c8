//! Recursive-descent parser for identity text such as `J(x,y,x*z) = J(x,y,z)*x`.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! identity := expr '=' expr
//! expr     := ['+'|'-'] product (('+'|'-') product)*
//! product  := unary ('*' unary)*          -- left-associative
//! unary    := '-' unary | primary
//! primary  := number | letter | 'J' '(' expr ',' expr ',' expr ')' | '(' expr ')'
//! number   := digits ['/' digits]
//! ```
//!
//! Variables are single letters other than `J`.

use num_traits::{One, Zero};

use super::{IdentityDef, IdentityError, Poly, Term};
use crate::linalg::{parse_scalar, Scalar};

enum Factor {
    Scalar(Scalar),
    Term(Term),
}

struct Parser<'r> {
    chars: Vec<char>,
    pos: usize,
    resolve: &'r mut dyn FnMut(char) -> Option<usize>,
}

impl Parser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, IdentityError> {
        Err(IdentityError::Syntax { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), IdentityError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Factor, IdentityError> {
        let mut items: Vec<(Scalar, Factor)> = Vec::new();
        let mut sign = if self.eat('-') {
            -Scalar::one()
        } else {
            self.eat('+');
            Scalar::one()
        };
        loop {
            let f = self.product()?;
            items.push((sign, f));
            sign = if self.eat('+') {
                Scalar::one()
            } else if self.eat('-') {
                -Scalar::one()
            } else {
                break;
            };
        }
        if items.len() == 1 && items[0].0.is_one() {
            return Ok(items.pop().expect("one item").1);
        }
        if items.iter().all(|(_, f)| matches!(f, Factor::Scalar(_))) {
            let total = items
                .into_iter()
                .map(|(s, f)| match f {
                    Factor::Scalar(x) => s * x,
                    Factor::Term(_) => unreachable!(),
                })
                .fold(Scalar::zero(), |a, b| a + b);
            return Ok(Factor::Scalar(total));
        }
        let mut terms = Vec::new();
        for (s, f) in items {
            match f {
                Factor::Scalar(x) if x.is_zero() => {}
                Factor::Scalar(_) => return self.error("constant terms are not allowed (only 0)"),
                Factor::Term(t) => terms.push((s, t)),
            }
        }
        Ok(Factor::Term(Term::Sum(terms)))
    }

    fn product(&mut self) -> Result<Factor, IdentityError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            let rhs = self.unary()?;
            acc = match (acc, rhs) {
                (Factor::Scalar(a), Factor::Scalar(b)) => Factor::Scalar(a * b),
                (Factor::Scalar(c), Factor::Term(t)) | (Factor::Term(t), Factor::Scalar(c)) => {
                    Factor::Term(Term::Sum(vec![(c, t)]))
                }
                (Factor::Term(a), Factor::Term(b)) => Factor::Term(Term::product(a, b)),
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Factor, IdentityError> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Factor::Scalar(x) => Factor::Scalar(-x),
                Factor::Term(t) => Factor::Term(Term::Sum(vec![(-Scalar::one(), t)])),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Factor, IdentityError> {
        let Some(c) = self.peek() else {
            return self.error("unexpected end of input");
        };
        if c.is_ascii_digit() {
            return self.number().map(Factor::Scalar);
        }
        if c == '(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        if c == 'J' {
            self.pos += 1;
            if self.peek() != Some('(') {
                return self.error("`J` is reserved for the Jacobian J(t1,t2,t3)");
            }
            self.pos += 1;
            let a = self.term_arg()?;
            self.expect(',')?;
            let b = self.term_arg()?;
            self.expect(',')?;
            let c = self.term_arg()?;
            self.expect(')')?;
            return Ok(Factor::Term(Term::Jac(Box::new(a), Box::new(b), Box::new(c))));
        }
        if c.is_ascii_alphabetic() {
            return match (self.resolve)(c) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Factor::Term(Term::Var(i)))
                }
                None => self.error(format!("undeclared variable `{c}`")),
            };
        }
        self.error(format!("unexpected character `{c}`"))
    }

    fn term_arg(&mut self) -> Result<Term, IdentityError> {
        match self.expr()? {
            Factor::Term(t) => Ok(t),
            Factor::Scalar(x) if x.is_zero() => Ok(Term::zero()),
            Factor::Scalar(_) => self.error("Jacobian arguments must be terms or 0"),
        }
    }

    fn number(&mut self) -> Result<Scalar, IdentityError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.chars.get(p.pos).is_some_and(char::is_ascii_digit) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            digits(self);
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_scalar(&text).or_else(|_| {
            self.pos = start;
            self.error(format!("invalid number `{text}`"))
        })
    }

    fn finish(&mut self) -> Result<(), IdentityError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected `{c}`")),
        }
    }

    fn side(&mut self, f: Factor) -> Result<Term, IdentityError> {
        match f {
            Factor::Term(t) => Ok(t),
            Factor::Scalar(x) if x.is_zero() => Ok(Term::zero()),
            Factor::Scalar(_) => self.error("a side of an identity cannot be a nonzero constant"),
        }
    }
}

/// Parses `lhs = rhs`; variables are numbered in order of first appearance.
pub fn parse_identity(text: &str) -> Result<IdentityDef, IdentityError> {
    let mut variables: Vec<char> = Vec::new();
    let mut resolve = |c: char| {
        if c == 'J' {
            return None;
        }
        Some(variables.iter().position(|&v| v == c).unwrap_or_else(|| {
            variables.push(c);
            variables.len() - 1
        }))
    };
    let (lhs, rhs) = {
        let mut p = Parser { chars: text.chars().collect(), pos: 0, resolve: &mut resolve };
        let l = p.expr()?;
        let lhs = p.side(l)?;
        p.expect('=')?;
        let r = p.expr()?;
        let rhs = p.side(r)?;
        p.finish()?;
        (lhs, rhs)
    };
    let names = variables.iter().map(|c| c.to_string()).collect();
    IdentityDef::new(text.trim().to_string(), names, lhs, rhs)
}

/// Parses an element expression over named single-letter generators.
pub fn parse_word(text: &str, generators: &[String]) -> Result<Poly, IdentityError> {
    let mut resolve = |c: char| generators.iter().position(|g| g.len() == 1 && g.starts_with(c));
    let mut p = Parser { chars: text.chars().collect(), pos: 0, resolve: &mut resolve };
    let f = p.expr()?;
    let t = p.side(f)?;
    p.finish()?;
    Ok(t.to_poly())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::Word;

    #[test]
    fn parses_variety_identities() {
        let w = parse_identity("J(x,y,z*u) = 0").unwrap();
        assert_eq!(w.variables, ["x", "y", "z", "u"]);
        assert_eq!(w.total_degree(), 4);
        assert_eq!(w.poly().len(), 3);

        let sq = parse_identity("x*x = 0").unwrap();
        assert_eq!(sq.degree_profile(), &[2]);

        let malcev = parse_identity("J(x,y,x*z) = J(x,y,z)*x").unwrap();
        assert_eq!(malcev.degree_profile(), &[2, 1, 1]);
    }

    #[test]
    fn products_are_left_associative_and_scalars_commute_out() {
        let id = parse_identity("x*y*z = 3/1*(x*y)*z - x*y*z - 1*(x*y)*z").unwrap();
        assert!(id.poly().is_zero());
        let p = parse_word("a*b*c", &["a".into(), "b".into(), "c".into()]).unwrap();
        let ab = Word::node(Word::leaf(0), Word::leaf(1));
        assert_eq!(p, Poly::word(Word::node(ab, Word::leaf(2))));
    }

    #[test]
    fn reports_errors_with_columns() {
        assert!(matches!(parse_identity("x*y"), Err(IdentityError::Syntax { column: 4, .. })));
        assert!(matches!(parse_identity("x*y = x"), Err(IdentityError::NonHomogeneous(_))));
        assert!(matches!(parse_identity("x*y = 1"), Err(IdentityError::Syntax { .. })));
        assert!(matches!(parse_identity("x*y = x # y"), Err(IdentityError::Syntax { column: 9, .. })));
        assert!(matches!(parse_identity("J*x = 0"), Err(IdentityError::Syntax { .. })));
        assert!(matches!(parse_word("a*d", &["a".into(), "b".into()]), Err(IdentityError::Syntax { column: 3, .. })));
    }

    #[test]
    fn jacobian_macro_expands() {
        let id = parse_identity("J(x,y,z) = (x*y)*z + (y*z)*x + (z*x)*y").unwrap();
        assert!(id.poly().is_zero());
        assert!(!matches!(id.lhs, Term::Jac(..)));
    }
}
