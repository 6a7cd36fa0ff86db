//! Recursive descent over tokens into an untyped syntax tree. Sorts are
//! resolved afterwards in `elaborate`.

use super::lexer::{Tok, Token};
use super::{ErrorKind, ParseError, Pos};

#[derive(Clone, Debug)]
pub enum RawSort {
    Bool,
    Nat,
    List(Box<RawSort>),
    Named(String, Pos),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnOp {
    Not,
    Size,
    Head,
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Implies,
    Or,
    And,
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
    Snoc,
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub enum RawKind {
    Name(String),
    Call(String, Vec<Raw>),
    Num(u64),
    Bool(bool),
    EmptyList(Option<RawSort>),
    List(Vec<Raw>),
    Unary(UnOp, Box<Raw>),
    Binary(BinOp, Box<Raw>, Box<Raw>),
    Quant {
        forall: bool,
        vars: Vec<RawParam>,
        body: Box<Raw>,
    },
    Val(Box<Raw>),
}

#[derive(Clone, Debug)]
pub struct Raw {
    pub kind: RawKind,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct RawParam {
    pub name: String,
    pub sort: RawSort,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct RawSortDecl {
    pub name: String,
    pub constructors: Vec<(String, Pos)>,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct RawEquation {
    pub mu: bool,
    pub name: String,
    pub params: Vec<RawParam>,
    pub rhs: Raw,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct RawFile {
    pub sorts: Vec<RawSortDecl>,
    pub equations: Vec<RawEquation>,
    pub init_name: String,
    pub init_args: Vec<Raw>,
    pub init_pos: Pos,
}

const KEYWORDS: &[&str] = &[
    "sort", "pbes", "init", "mu", "nu", "forall", "exists", "val", "true", "false", "head", "tail",
    "Bool", "Nat", "List",
];

pub struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    pub fn new(tokens: Vec<Token>) -> Parser {
        Parser { tokens, at: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::single(
            self.pos(),
            ErrorKind::Syntax,
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            self.error(what)
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        if self.is_keyword(kw) {
            Ok(self.bump().pos)
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            _ => self.error(what),
        }
    }

    pub fn file(&mut self) -> Result<RawFile, ParseError> {
        let mut sorts = Vec::new();
        while self.is_keyword("sort") {
            sorts.push(self.sort_decl()?);
        }
        self.keyword("pbes")?;
        let mut equations = Vec::new();
        while self.is_keyword("mu") || self.is_keyword("nu") {
            equations.push(self.equation()?);
        }
        if equations.is_empty() {
            return self.error("an equation starting with `mu` or `nu`");
        }
        if !self.is_keyword("init") {
            return self.error("`mu`, `nu` or `init`");
        }
        self.bump();
        let (init_name, init_pos) = self.name("a predicate variable")?;
        self.expect(Tok::LParen, "`(`")?;
        let init_args = self.args()?;
        self.expect(Tok::Semi, "`;`")?;
        if *self.peek() != Tok::Eof {
            return self.error("end of input");
        }
        Ok(RawFile {
            sorts,
            equations,
            init_name,
            init_args,
            init_pos,
        })
    }

    fn sort_decl(&mut self) -> Result<RawSortDecl, ParseError> {
        self.keyword("sort")?;
        let (name, pos) = self.name("a sort name")?;
        self.expect(Tok::Assign, "`=`")?;
        let mut constructors = vec![self.name("a constructor name")?];
        while *self.peek() == Tok::Bar {
            self.bump();
            constructors.push(self.name("a constructor name")?);
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok(RawSortDecl {
            name,
            constructors,
            pos,
        })
    }

    fn equation(&mut self) -> Result<RawEquation, ParseError> {
        let mu = self.is_keyword("mu");
        self.bump();
        let (name, pos) = self.name("a predicate variable name")?;
        self.expect(Tok::LParen, "`(`")?;
        let params = if *self.peek() == Tok::RParen {
            Vec::new()
        } else {
            self.params()?
        };
        self.expect(Tok::RParen, "`)` or a parameter name")?;
        self.expect(Tok::Assign, "`=`")?;
        let rhs = self.expr()?;
        self.expect(Tok::Semi, "`;`")?;
        Ok(RawEquation {
            mu,
            name,
            params,
            rhs,
            pos,
        })
    }

    fn params(&mut self) -> Result<Vec<RawParam>, ParseError> {
        let mut out = Vec::new();
        loop {
            let (name, pos) = self.name("a parameter name")?;
            self.expect(Tok::Colon, "`:`")?;
            let sort = self.sort()?;
            out.push(RawParam { name, sort, pos });
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn sort(&mut self) -> Result<RawSort, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "Bool" => {
                self.bump();
                Ok(RawSort::Bool)
            }
            Tok::Ident(s) if s == "Nat" => {
                self.bump();
                Ok(RawSort::Nat)
            }
            Tok::Ident(s) if s == "List" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.sort()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(RawSort::List(Box::new(inner)))
            }
            _ => {
                let (name, pos) = self.name("a sort")?;
                Ok(RawSort::Named(name, pos))
            }
        }
    }

    fn args(&mut self) -> Result<Vec<Raw>, ParseError> {
        let mut out = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.error("`,` or `)`"),
            }
        }
    }

    pub fn expr(&mut self) -> Result<Raw, ParseError> {
        if self.is_keyword("forall") || self.is_keyword("exists") {
            return self.quantifier();
        }
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            let pos = self.bump().pos;
            let rhs = self.expr()?;
            return Ok(binary(BinOp::Implies, lhs, rhs, pos));
        }
        Ok(lhs)
    }

    fn quantifier(&mut self) -> Result<Raw, ParseError> {
        let forall = self.is_keyword("forall");
        let pos = self.bump().pos;
        let vars = self.params()?;
        self.expect(Tok::Dot, "`.`")?;
        let body = self.expr()?;
        Ok(Raw {
            kind: RawKind::Quant {
                forall,
                vars,
                body: Box::new(body),
            },
            pos,
        })
    }

    fn or(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::OrOr {
            let pos = self.bump().pos;
            let rhs = self.and()?;
            lhs = binary(BinOp::Or, lhs, rhs, pos);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.comparison()?;
        while *self.peek() == Tok::AndAnd {
            let pos = self.bump().pos;
            let rhs = self.comparison()?;
            lhs = binary(BinOp::And, lhs, rhs, pos);
        }
        Ok(lhs)
    }

    fn comparison(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.snoc()?;
        let op = match self.peek() {
            Tok::EqEq => BinOp::Eq,
            Tok::Neq => BinOp::Neq,
            Tok::Lt => BinOp::Lt,
            Tok::Leq => BinOp::Leq,
            Tok::Gt => BinOp::Gt,
            Tok::Geq => BinOp::Geq,
            _ => return Ok(lhs),
        };
        let pos = self.bump().pos;
        let rhs = self.snoc()?;
        Ok(binary(op, lhs, rhs, pos))
    }

    fn snoc(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.additive()?;
        while *self.peek() == Tok::Snoc {
            let pos = self.bump().pos;
            let rhs = self.additive()?;
            lhs = binary(BinOp::Snoc, lhs, rhs, pos);
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Plus,
                Tok::Minus => BinOp::Minus,
                _ => return Ok(lhs),
            };
            let pos = self.bump().pos;
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs, pos);
        }
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        let op = match self.peek() {
            Tok::Bang => UnOp::Not,
            Tok::Hash => UnOp::Size,
            _ => return self.primary(),
        };
        let pos = self.bump().pos;
        let arg = self.unary()?;
        Ok(Raw {
            kind: RawKind::Unary(op, Box::new(arg)),
            pos,
        })
    }

    fn primary(&mut self) -> Result<Raw, ParseError> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                RawKind::Num(n)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(inner);
            }
            Tok::LBrack => {
                self.bump();
                if *self.peek() == Tok::RBrack {
                    self.bump();
                    if *self.peek() == Tok::Colon {
                        self.bump();
                        RawKind::EmptyList(Some(self.sort()?))
                    } else {
                        RawKind::EmptyList(None)
                    }
                } else {
                    let mut items = vec![self.expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        items.push(self.expr()?);
                    }
                    self.expect(Tok::RBrack, "`,` or `]`")?;
                    RawKind::List(items)
                }
            }
            Tok::Ident(word) => match word.as_str() {
                "forall" | "exists" => return self.quantifier(),
                "true" | "false" => {
                    self.bump();
                    RawKind::Bool(word == "true")
                }
                "val" | "head" | "tail" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let inner = Box::new(self.expr()?);
                    self.expect(Tok::RParen, "`)`")?;
                    match word.as_str() {
                        "val" => RawKind::Val(inner),
                        "head" => RawKind::Unary(UnOp::Head, inner),
                        _ => RawKind::Unary(UnOp::Tail, inner),
                    }
                }
                _ => {
                    let (name, _) = self.name("an expression")?;
                    if *self.peek() == Tok::LParen && *self.peek_at(1) != Tok::Eof {
                        self.bump();
                        RawKind::Call(name, self.args()?)
                    } else {
                        RawKind::Name(name)
                    }
                }
            },
            _ => return self.error("an expression"),
        };
        Ok(Raw { kind, pos })
    }
}

fn binary(op: BinOp, lhs: Raw, rhs: Raw, pos: Pos) -> Raw {
    Raw {
        kind: RawKind::Binary(op, Box::new(lhs), Box::new(rhs)),
        pos,
    }
}
