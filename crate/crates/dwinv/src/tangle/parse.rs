use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tangle {
    Id,
    /// Positive generator: the strand from bottom left to top right passes over.
    Cross,
    CrossInv,
    Cup,
    Cap,
    Twist(i64),
    Rot(Box<Node>),
    Close(Box<Node>),
    /// `top * bottom`.
    Vert(Box<Node>, Box<Node>),
    Horiz(Box<Node>, Box<Node>),
}

/// AST node with its byte position and boundary point counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub kind: Tangle,
    pub pos: usize,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleExpr {
    pub root: Node,
}

impl Node {
    fn new(kind: Tangle, pos: usize) -> Result<Node> {
        let (source, target) = match &kind {
            Tangle::Id => (1, 1),
            Tangle::Cross | Tangle::CrossInv | Tangle::Twist(_) => (2, 2),
            Tangle::Cup => (0, 2),
            Tangle::Cap => (2, 0),
            Tangle::Rot(e) => {
                if e.source != 2 || e.target != 2 {
                    return Err(Error::Arity { pos, msg: format!("r() needs a 2 -> 2 tangle, got {} -> {}", e.source, e.target) });
                }
                (2, 2)
            }
            Tangle::Close(e) => {
                if e.source != e.target {
                    return Err(Error::Arity { pos, msg: format!("close() needs equal ends, got {} -> {}", e.source, e.target) });
                }
                (0, 0)
            }
            Tangle::Vert(top, bottom) => {
                if bottom.target != top.source {
                    return Err(Error::Arity {
                        pos,
                        msg: format!("lower factor has {} top points, upper factor has {} bottom points", bottom.target, top.source),
                    });
                }
                (bottom.source, top.target)
            }
            Tangle::Horiz(a, b) => (a.source + b.source, a.target + b.target),
        };
        Ok(Node { kind, pos, source, target })
    }

    pub fn id() -> Node {
        Node::new(Tangle::Id, 0).unwrap()
    }

    pub fn twist(n: i64) -> Node {
        Node::new(Tangle::Twist(n), 0).unwrap()
    }

    pub fn rot(e: Node) -> Result<Node> {
        Node::new(Tangle::Rot(Box::new(e)), 0)
    }

    pub fn close(e: Node) -> Result<Node> {
        Node::new(Tangle::Close(Box::new(e)), 0)
    }

    /// `top * bottom`.
    pub fn vert(top: Node, bottom: Node) -> Result<Node> {
        Node::new(Tangle::Vert(Box::new(top), Box::new(bottom)), 0)
    }

    pub fn horiz(a: Node, b: Node) -> Node {
        Node::new(Tangle::Horiz(Box::new(a), Box::new(b)), 0).unwrap()
    }

    pub fn is_closed(&self) -> bool {
        self.source == 0 && self.target == 0
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Tangle::Id => write!(f, "id"),
            Tangle::Cross => write!(f, "x"),
            Tangle::CrossInv => write!(f, "xi"),
            Tangle::Cup => write!(f, "cup"),
            Tangle::Cap => write!(f, "cap"),
            Tangle::Twist(n) => write!(f, "twist({n})"),
            Tangle::Rot(e) => write!(f, "r({e})"),
            Tangle::Close(e) => write!(f, "close({e})"),
            Tangle::Vert(a, b) => write!(f, "{a} * {b}"),
            Tangle::Horiz(a, b) => {
                let wrap = |n: &Node| matches!(n.kind, Tangle::Vert(..));
                let side = |n: &Node, f: &mut fmt::Formatter<'_>| if wrap(n) { write!(f, "({n})") } else { write!(f, "{n}") };
                side(a, f)?;
                write!(f, " | ")?;
                side(b, f)
            }
        }
    }
}

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Star,
    Bar,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '*' => Tok::Star,
            '|' => Tok::Bar,
            c if c.is_ascii_alphabetic() => {
                while i < b.len() && (b[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            c if c == '-' || c == '+' || c.is_ascii_digit() => {
                i += 1;
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let v = text[start..i].parse().map_err(|_| Error::Parse { pos: start, msg: format!("bad integer {:?}", &text[start..i]) })?;
                out.push((Tok::Int(v), start));
                continue;
            }
            other => return Err(Error::Parse { pos: start, msg: format!("unexpected character {other:?}") }),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<usize> {
        let (got, pos) = self.bump();
        if got == t {
            Ok(pos)
        } else {
            Err(Error::Parse { pos, msg: format!("expected {what}") })
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut acc = self.horiz()?;
        while self.peek().0 == Tok::Star {
            let (_, pos) = self.bump();
            let rhs = self.horiz()?;
            acc = Node::new(Tangle::Vert(Box::new(acc), Box::new(rhs)), pos)?;
        }
        Ok(acc)
    }

    fn horiz(&mut self) -> Result<Node> {
        let mut acc = self.atom()?;
        while self.peek().0 == Tok::Bar {
            let (_, pos) = self.bump();
            let rhs = self.atom()?;
            acc = Node::new(Tangle::Horiz(Box::new(acc), Box::new(rhs)), pos)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Node> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "id" => Node::new(Tangle::Id, pos),
                "x" => Node::new(Tangle::Cross, pos),
                "xi" => Node::new(Tangle::CrossInv, pos),
                "cup" => Node::new(Tangle::Cup, pos),
                "cap" => Node::new(Tangle::Cap, pos),
                "twist" => {
                    self.expect(Tok::LParen, "'(' after twist")?;
                    let (t, p) = self.bump();
                    let Tok::Int(n) = t else {
                        return Err(Error::Parse { pos: p, msg: "expected an integer".into() });
                    };
                    self.expect(Tok::RParen, "')'")?;
                    Node::new(Tangle::Twist(n), pos)
                }
                "r" | "close" => {
                    self.expect(Tok::LParen, "'('")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    let kind = if name == "r" { Tangle::Rot(Box::new(e)) } else { Tangle::Close(Box::new(e)) };
                    Node::new(kind, pos)
                }
                other => Err(Error::Parse { pos, msg: format!("unknown generator {other:?}") }),
            },
            Tok::End => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
            _ => Err(Error::Parse { pos, msg: "expected a tangle".into() }),
        }
    }
}

pub fn parse(text: &str) -> Result<TangleExpr> {
    let mut lx = Lexer { toks: lex(text)?, at: 0 };
    let root = lx.expr()?;
    let (t, pos) = lx.peek().clone();
    if t != Tok::End {
        return Err(Error::Parse { pos, msg: "trailing input".into() });
    }
    Ok(TangleExpr { root })
}

impl std::str::FromStr for TangleExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arities() {
        let t = parse("id").unwrap();
        assert_eq!((t.root.source, t.root.target), (1, 1));
        let t = parse("close(twist(3))").unwrap();
        assert!(t.root.is_closed());
        let t = parse("(cap | id) * (id | x) * (cup | id)").unwrap();
        assert_eq!((t.root.source, t.root.target), (1, 1));
        assert_eq!(parse("x | id * id | x").unwrap().root.source, 3);
        assert_eq!(parse("r(twist(-2))").unwrap().root.source, 2);
    }

    #[test]
    fn errors_carry_positions() {
        match parse("id * x") {
            Err(Error::Arity { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match parse("x * (id | foo)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("close(cup)"), Err(Error::Arity { pos: 0, .. })));
        assert!(matches!(parse("r(id)"), Err(Error::Arity { .. })));
        assert!(matches!(parse("twist(a)"), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(parse("x )"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse(""), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn display_reparses() {
        for s in ["close(r(twist(3)) * r(twist(-1)))", "(x * xi) | id", "cap * (id | id)", "close(x * x * x)"] {
            let t = parse(s).unwrap();
            assert_eq!(parse(&t.to_string()).unwrap().to_string(), t.to_string());
        }
    }
}
