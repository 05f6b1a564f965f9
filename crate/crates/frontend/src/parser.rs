//! Recursive-descent parser for `.catt` files.
//!
//! ```text
//! file    ::= decl*
//! decl    ::= 'coh' IDENT binder* ':' ty
//!           | 'let' IDENT binder* (':' ty)? '=' expr
//!           | 'check' (binder* (':' ty)? '=')? expr
//! binder  ::= '(' IDENT+ ':' ty ')'
//! ty      ::= '*' | expr '->' expr
//! expr    ::= atom arg*
//! arg     ::= atom | '[' expr ']'
//! atom    ::= IDENT | '(' expr ')' | builtin | 'comp' tree | 'coh' '[' binder* ':' ty ']'
//! builtin ::= ('cylcomp' | 'conecomp') '(' NUM ',' NUM ',' NUM ')' | 'cylstack' '(' NUM ')'
//! tree    ::= '{' tree* '}'
//! ```

use catt_core::pasting::PsTree;

use crate::ast::*;
use crate::error::{FrontendError, Result, Span};
use crate::lexer::{lex, Tok};

pub fn parse(src: &str) -> Result<SourceFile> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(SourceFile { decls })
}

/// Parses a single expression, used when reading back printed terms.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(e)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        self.toks[self.pos.saturating_sub(1)].1.end
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        Err(FrontendError::Syntax {
            span: self.span(),
            expected: format!("{expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, t: Tok, expected: &str) -> Result<Span> {
        if self.peek() == &t {
            Ok(self.bump().1)
        } else {
            self.error(expected)
        }
    }

    fn ident(&mut self) -> Result<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().1;
                Ok(Ident { name, span })
            }
            _ => self.error("an identifier"),
        }
    }

    fn num(&mut self) -> Result<usize> {
        match *self.peek() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.error("a number"),
        }
    }

    fn decl(&mut self) -> Result<Decl> {
        let start = self.span().start;
        match self.peek() {
            Tok::Coh => {
                self.bump();
                let name = self.ident()?;
                let tel = self.telescope()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                let span = Span::new(start, self.prev_end());
                Ok(Decl::Coh { name, tel, ty, span })
            }
            Tok::Let => {
                self.bump();
                let name = self.ident()?;
                let tel = self.telescope()?;
                let ty = self.annotation()?;
                self.expect(Tok::Eq, "`=`")?;
                let body = self.expr()?;
                let span = Span::new(start, self.prev_end());
                Ok(Decl::Let { name, tel, ty, body, span })
            }
            Tok::Check => {
                self.bump();
                let with_tel = matches!(self.peek(), Tok::LParen) && self.starts_binder()
                    || matches!(self.peek(), Tok::Colon | Tok::Eq);
                let (tel, ty) = if with_tel {
                    let tel = self.telescope()?;
                    let ty = self.annotation()?;
                    self.expect(Tok::Eq, "`=`")?;
                    (tel, ty)
                } else {
                    (Vec::new(), None)
                };
                let body = self.expr()?;
                let span = Span::new(start, self.prev_end());
                Ok(Decl::Check { tel, ty, body, span })
            }
            _ => self.error("`coh`, `let` or `check`"),
        }
    }

    fn annotation(&mut self) -> Result<Option<TyExpr>> {
        if self.peek() == &Tok::Colon {
            self.bump();
            Ok(Some(self.ty()?))
        } else {
            Ok(None)
        }
    }

    /// `(` followed by identifiers and a colon opens a binder.
    fn starts_binder(&self) -> bool {
        let mut k = 1;
        while matches!(self.peek_at(k), Tok::Ident(_)) {
            k += 1;
        }
        k > 1 && self.peek_at(k) == &Tok::Colon
    }

    fn telescope(&mut self) -> Result<Vec<Binder>> {
        let mut out = Vec::new();
        while self.peek() == &Tok::LParen && self.starts_binder() {
            self.bump();
            let mut names = Vec::new();
            while let Tok::Ident(_) = self.peek() {
                names.push(self.ident()?);
            }
            self.expect(Tok::Colon, "`:`")?;
            let ty = self.ty()?;
            self.expect(Tok::RParen, "`)`")?;
            out.push(Binder { names, ty });
        }
        Ok(out)
    }

    fn ty(&mut self) -> Result<TyExpr> {
        if self.peek() == &Tok::Star {
            return Ok(TyExpr::Star(self.bump().1));
        }
        let s = self.expr()?;
        self.expect(Tok::Arrow, "`->`")?;
        let t = self.expr()?;
        let span = s.span().join(t.span());
        Ok(TyExpr::Arrow(Box::new(s), Box::new(t), span))
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(_) | Tok::LParen | Tok::CylComp | Tok::CylStack | Tok::ConeComp => true,
            Tok::Coh => self.peek_at(1) == &Tok::LBracket,
            _ => false,
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let head = self.atom()?;
        let mut args = Vec::new();
        loop {
            if self.peek() == &Tok::LBracket {
                self.bump();
                let expr = self.expr()?;
                self.expect(Tok::RBracket, "`]`")?;
                args.push(Arg { expr, bracketed: true });
            } else if self.starts_atom() {
                args.push(Arg {
                    expr: self.atom()?,
                    bracketed: false,
                });
            } else {
                break;
            }
        }
        if args.is_empty() {
            return Ok(head);
        }
        let span = Span::new(head.span().start, self.prev_end());
        Ok(Expr::App {
            head: Box::new(head),
            args,
            span,
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.span().start;
        match self.peek().clone() {
            Tok::Ident(name) if name == "comp" && self.peek_at(1) == &Tok::LBrace => {
                self.bump();
                let tree = self.tree()?;
                Ok(Expr::Comp(tree, Span::new(start, self.prev_end())))
            }
            Tok::Ident(_) => Ok(Expr::Name(self.ident()?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::CylComp | Tok::ConeComp => {
                let cyl = self.bump().0 == Tok::CylComp;
                self.expect(Tok::LParen, "`(`")?;
                let m = self.num()?;
                self.expect(Tok::Comma, "`,`")?;
                let k = self.num()?;
                self.expect(Tok::Comma, "`,`")?;
                let n = self.num()?;
                self.expect(Tok::RParen, "`)`")?;
                let b = if cyl {
                    Builtin::CylComp { m, k, n }
                } else {
                    Builtin::ConeComp { m, k, n }
                };
                Ok(Expr::Builtin(b, Span::new(start, self.prev_end())))
            }
            Tok::CylStack => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let n = self.num()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Builtin(Builtin::CylStack { n }, Span::new(start, self.prev_end())))
            }
            Tok::Coh => {
                self.bump();
                self.expect(Tok::LBracket, "`[`")?;
                let tel = self.telescope()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Expr::Coh {
                    tel,
                    ty: Box::new(ty),
                    span: Span::new(start, self.prev_end()),
                })
            }
            _ => self.error("an expression"),
        }
    }

    fn tree(&mut self) -> Result<PsTree> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut children = Vec::new();
        while self.peek() == &Tok::LBrace {
            children.push(self.tree()?);
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(PsTree { children })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ASSOC_NAT: &str = "let assoc_nat (x y z w : *) (f_minus : x -> y)
  (f_plus : x -> y)
  (f_arrow : f_minus -> f_plus)
  (g : y -> z) (h : z -> w)
  = assoc [f_arrow] g h";

    #[test]
    fn naturality_listing() {
        let f = parse(ASSOC_NAT).unwrap();
        let [Decl::Let { name, tel, body, .. }] = f.decls.as_slice() else {
            panic!("one let expected")
        };
        assert_eq!(name.name, "assoc_nat");
        assert_eq!(tel.iter().map(|b| b.names.len()).sum::<usize>(), 9);
        let Expr::App { head, args, .. } = body else { panic!() };
        assert!(matches!(&**head, Expr::Name(i) if i.name == "assoc"));
        let marks: Vec<bool> = args.iter().map(|a| a.bracketed).collect();
        assert_eq!(marks, [true, false, false]);
    }

    #[test]
    fn check_builtin() {
        let f = parse("check conecomp(2,1,2)").unwrap();
        assert!(matches!(
            &f.decls[0],
            Decl::Check { tel, body: Expr::Builtin(Builtin::ConeComp { m: 2, k: 1, n: 2 }, _), .. } if tel.is_empty()
        ));
    }

    #[test]
    fn check_with_telescope() {
        let f = parse("check (x : *) (f : x -> x) = f").unwrap();
        assert!(matches!(&f.decls[0], Decl::Check { tel, .. } if tel.len() == 2));
    }

    #[test]
    fn unbalanced_bracket() {
        let e = parse("let a (x : *) = f [x").unwrap_err();
        assert!(matches!(e, FrontendError::Syntax { .. }));
    }

    #[test]
    fn composite_trees_and_anonymous_coherences() {
        let e = parse_expr("(comp{{}{}} f g)").unwrap();
        let Expr::App { head, .. } = e else { panic!() };
        assert!(matches!(&*head, Expr::Comp(t, _) if t.children.len() == 2));
        let e = parse_expr("coh[(x0 : *) (x1 : *) (x2 : x0 -> x1) : x0 -> x1]").unwrap();
        assert!(matches!(e, Expr::Coh { tel, .. } if tel.len() == 3));
    }
}
