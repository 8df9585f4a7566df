//! Parser for the straight-line input format.
//!
//! ```text
//! # comments run to end of line
//! INPUTS  { x fl64 : (0.0, 1.0); y fl32 : (-1.0, 1.0) +- 1e-18; }
//! OUTPUTS { s; }
//! EXPRS   { v1 = x + y; s rnd64 = (v1 * x + y) * 3.5; }
//! ```
//!
//! Constants are parsed with correctly rounded decimal conversion and
//! stored as exact binary64 literals carrying no local error. An
//! assignment without an explicit `rnd32`/`rnd64` tag rounds at the
//! precision of its widest operand (constants are neutral).

use crate::interval::Interval;
use crate::ir::{ExprDag, InputVar, Node, NodeId, Op, Precision};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Punct(char),
    PlusMinus, // "+-"
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> PResult<Vec<Lexed>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    let err = |line, col, msg: String| ParseError { line, col, msg };
    while i < bytes.len() {
        let c = bytes[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => advance(1, &mut i, &mut col),
            '#' => {
                while i < bytes.len() && bytes[i] != '\n' {
                    i += 1;
                }
            }
            '{' | '}' | '(' | ')' | ':' | ';' | ',' | '=' | '*' | '/' => {
                out.push(Lexed {
                    tok: Tok::Punct(c),
                    line: tl,
                    col: tc,
                });
                advance(1, &mut i, &mut col);
            }
            '+' | '-' => {
                if c == '+' && i + 1 < bytes.len() && bytes[i + 1] == '-' {
                    out.push(Lexed {
                        tok: Tok::PlusMinus,
                        line: tl,
                        col: tc,
                    });
                    advance(2, &mut i, &mut col);
                } else {
                    out.push(Lexed {
                        tok: Tok::Punct(c),
                        line: tl,
                        col: tc,
                    });
                    advance(1, &mut i, &mut col);
                }
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                    advance(1, &mut i, &mut col);
                }
                if i < bytes.len() && (bytes[i] == 'e' || bytes[i] == 'E') {
                    advance(1, &mut i, &mut col);
                    if i < bytes.len() && (bytes[i] == '+' || bytes[i] == '-') {
                        advance(1, &mut i, &mut col);
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        advance(1, &mut i, &mut col);
                    }
                }
                let s: String = bytes[start..i].iter().collect();
                let v: f64 = s
                    .parse()
                    .map_err(|_| err(tl, tc, format!("bad numeric literal `{s}`")))?;
                out.push(Lexed {
                    tok: Tok::Number(v),
                    line: tl,
                    col: tc,
                });
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_')
                {
                    advance(1, &mut i, &mut col);
                }
                let s: String = bytes[start..i].iter().collect();
                out.push(Lexed {
                    tok: Tok::Ident(s),
                    line: tl,
                    col: tc,
                });
            }
            _ => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    dag: ExprDag,
    names: HashMap<String, NodeId>,
}

impl Parser {
    fn peek(&self) -> Option<&Lexed> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map(|t| (t.line, t.col))
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|t| (t.line, t.col + 1))
                    .unwrap_or((1, 1))
            })
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn eat_punct(&mut self, c: char) -> PResult<()> {
        match self.peek() {
            Some(Lexed {
                tok: Tok::Punct(p), ..
            }) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{c}`")),
        }
    }

    fn try_punct(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Lexed { tok: Tok::Punct(p), .. }) if *p == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_ident(&mut self) -> PResult<String> {
        match self.peek().cloned() {
            Some(Lexed {
                tok: Tok::Ident(s), ..
            }) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected identifier"),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Some(Lexed {
                tok: Tok::Ident(s), ..
            }) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{kw}`")),
        }
    }

    fn eat_number(&mut self) -> PResult<f64> {
        // Allow a leading sign on numeric positions (interval bounds).
        let neg = self.try_punct('-');
        if !neg {
            let _ = self.try_punct('+');
        }
        match self.peek().cloned() {
            Some(Lexed {
                tok: Tok::Number(v),
                ..
            }) => {
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.fail("expected number"),
        }
    }

    fn parse_inputs(&mut self) -> PResult<()> {
        self.eat_keyword("INPUTS")?;
        self.eat_punct('{')?;
        while !self.try_punct('}') {
            let (line, col) = self.here();
            let name = self.eat_ident()?;
            let prec = match self.eat_ident()?.as_str() {
                "fl32" => Precision::Fl32,
                "fl64" => Precision::Fl64,
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        msg: format!("expected fl32 or fl64, found `{other}`"),
                    })
                }
            };
            self.eat_punct(':')?;
            self.eat_punct('(')?;
            let lo = self.eat_number()?;
            self.eat_punct(',')?;
            let hi = self.eat_number()?;
            self.eat_punct(')')?;
            let mut incoming = 0.0;
            if matches!(self.peek(), Some(Lexed { tok: Tok::PlusMinus, .. })) {
                self.pos += 1;
                incoming = self.eat_number()?;
            }
            self.eat_punct(';')?;
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("empty or reversed interval ({lo}, {hi}) for `{name}`"),
                });
            }
            if incoming < 0.0 {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("negative incoming error for `{name}`"),
                });
            }
            if self.names.contains_key(&name) {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("duplicate definition of `{name}`"),
                });
            }
            let id = self.dag.add_input(InputVar {
                name: name.clone(),
                range: Interval::new(lo, hi),
                precision: prec,
                incoming_error: incoming,
                is_abstract: false,
            });
            self.names.insert(name, id);
        }
        Ok(())
    }

    fn parse_outputs(&mut self) -> PResult<Vec<(String, usize, usize)>> {
        self.eat_keyword("OUTPUTS")?;
        self.eat_punct('{')?;
        let mut out = Vec::new();
        while !self.try_punct('}') {
            let (line, col) = self.here();
            let name = self.eat_ident()?;
            self.eat_punct(';')?;
            out.push((name, line, col));
        }
        Ok(out)
    }

    fn parse_exprs(&mut self) -> PResult<()> {
        self.eat_keyword("EXPRS")?;
        self.eat_punct('{')?;
        while !self.try_punct('}') {
            let (line, col) = self.here();
            let name = self.eat_ident()?;
            let rnd = match self.peek() {
                Some(Lexed {
                    tok: Tok::Ident(s), ..
                }) if s == "rnd32" => {
                    self.pos += 1;
                    Some(Precision::Fl32)
                }
                Some(Lexed {
                    tok: Tok::Ident(s), ..
                }) if s == "rnd64" => {
                    self.pos += 1;
                    Some(Precision::Fl64)
                }
                _ => None,
            };
            self.eat_punct('=')?;
            let ast = self.parse_add()?;
            self.eat_punct(';')?;
            if self.names.contains_key(&name) {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("duplicate definition of `{name}`"),
                });
            }
            let prec = rnd.unwrap_or_else(|| widest_operand(&ast).unwrap_or(Precision::Fl64));
            let id = self.lower(&ast, prec)?;
            self.names.insert(name, id);
        }
        Ok(())
    }

    fn parse_add(&mut self) -> PResult<Ast> {
        let mut lhs = self.parse_mul()?;
        loop {
            if self.try_punct('+') {
                let rhs = self.parse_mul()?;
                lhs = Ast::Bin(Op::Add, Box::new(lhs), Box::new(rhs));
            } else if self.try_punct('-') {
                let rhs = self.parse_mul()?;
                lhs = Ast::Bin(Op::Sub, Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_mul(&mut self) -> PResult<Ast> {
        let mut lhs = self.parse_unary()?;
        loop {
            if self.try_punct('*') {
                let rhs = self.parse_unary()?;
                lhs = Ast::Bin(Op::Mul, Box::new(lhs), Box::new(rhs));
            } else if self.try_punct('/') {
                let (line, col) = self.here();
                let rhs = self.parse_unary()?;
                if matches!(rhs, Ast::Lit(v) if v == 0.0) {
                    return Err(ParseError {
                        line,
                        col,
                        msg: "division by literal zero".into(),
                    });
                }
                lhs = Ast::Bin(Op::Div, Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_unary(&mut self) -> PResult<Ast> {
        if self.try_punct('-') {
            let inner = self.parse_unary()?;
            // Fold sign into literals so constants stay exact.
            if let Ast::Lit(v) = inner {
                return Ok(Ast::Lit(-v));
            }
            return Ok(Ast::Un(Op::Neg, Box::new(inner)));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> PResult<Ast> {
        match self.peek().cloned() {
            Some(Lexed {
                tok: Tok::Number(v),
                ..
            }) => {
                self.pos += 1;
                Ok(Ast::Lit(v))
            }
            Some(Lexed {
                tok: Tok::Punct('('),
                ..
            }) => {
                self.pos += 1;
                let e = self.parse_add()?;
                self.eat_punct(')')?;
                Ok(e)
            }
            Some(Lexed {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                self.pos += 1;
                let func = match name.as_str() {
                    "sqrt" => Some(Op::Sqrt),
                    "exp" => Some(Op::Exp),
                    "log" => Some(Op::Log),
                    "sin" => Some(Op::Sin),
                    "cos" => Some(Op::Cos),
                    _ => None,
                };
                if let Some(op) = func {
                    self.eat_punct('(')?;
                    let arg = self.parse_add()?;
                    self.eat_punct(')')?;
                    return Ok(Ast::Un(op, Box::new(arg)));
                }
                match self.names.get(&name) {
                    Some(&id) => Ok(Ast::Ref(id, self.dag.node(id).precision)),
                    None => Err(ParseError {
                        line,
                        col,
                        msg: format!("undefined identifier `{name}`"),
                    }),
                }
            }
            _ => self.fail("expected expression"),
        }
    }

    fn lower(&mut self, ast: &Ast, prec: Precision) -> PResult<NodeId> {
        Ok(match ast {
            Ast::Lit(v) => self.dag.add_const(*v, Precision::Fl64),
            Ast::Ref(id, _) => *id,
            Ast::Un(op, a) => {
                let a = self.lower(a, prec)?;
                self.dag.add_op(*op, vec![a], prec)
            }
            Ast::Bin(op, a, b) => {
                let a = self.lower(a, prec)?;
                let b = self.lower(b, prec)?;
                self.dag.add_op(*op, vec![a, b], prec)
            }
        })
    }
}

#[derive(Debug, Clone)]
enum Ast {
    Lit(f64),
    Ref(NodeId, Precision),
    Un(Op, Box<Ast>),
    Bin(Op, Box<Ast>, Box<Ast>),
}

fn widest_operand(ast: &Ast) -> Option<Precision> {
    match ast {
        Ast::Lit(_) => None,
        Ast::Ref(_, p) => Some(*p),
        Ast::Un(_, a) => widest_operand(a),
        Ast::Bin(_, a, b) => match (widest_operand(a), widest_operand(b)) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        },
    }
}

pub fn parse_program(text: &str) -> PResult<ExprDag> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        dag: ExprDag::new(),
        names: HashMap::new(),
    };
    p.parse_inputs()?;
    let outputs = p.parse_outputs()?;
    p.parse_exprs()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input after EXPRS section");
    }
    let mut resolved = Vec::new();
    for (name, line, col) in outputs {
        match p.names.get(&name) {
            Some(&id) => resolved.push((name, id)),
            None => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("undefined output `{name}`"),
                })
            }
        }
    }
    if resolved.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: "program declares no outputs".into(),
        });
    }
    let mut dag = p.dag;
    dag.set_outputs(resolved);
    dag.finalize();
    Ok(dag)
}

/// Emit the DAG back as program text, one assignment per arithmetic
/// node. Reparsing yields a structurally identical DAG.
pub fn unparse(dag: &ExprDag) -> String {
    let mut s = String::new();
    s.push_str("INPUTS {\n");
    for v in &dag.inputs {
        let prec = match v.precision {
            Precision::Fl32 => "fl32",
            Precision::Fl64 => "fl64",
        };
        write!(s, "  {} {} : ({:?}, {:?})", v.name, prec, v.range.lo, v.range.hi).unwrap();
        if v.incoming_error > 0.0 {
            write!(s, " +- {:?}", v.incoming_error).unwrap();
        }
        s.push_str(";\n");
    }
    s.push_str("}\nOUTPUTS {\n");
    for (name, _) in &dag.outputs {
        writeln!(s, "  {name};").unwrap();
    }
    s.push_str("}\nEXPRS {\n");

    let mut names: HashMap<NodeId, String> = HashMap::new();
    for (i, node) in dag.nodes.iter().enumerate() {
        if node.op == Op::Input {
            names.insert(NodeId(i as u32), dag.inputs[node.input_idx.unwrap()].name.clone());
        }
    }
    let out_name: HashMap<NodeId, &str> = dag
        .outputs
        .iter()
        .map(|(n, id)| (*id, n.as_str()))
        .collect();

    let atom = |names: &HashMap<NodeId, String>, node: &Node, id: NodeId| -> String {
        match node.op {
            Op::Const => format!("{:?}", node.literal.unwrap()),
            _ => names[&id].clone(),
        }
    };
    for (i, node) in dag.nodes.iter().enumerate() {
        if !node.op.is_arith() {
            continue;
        }
        let id = NodeId(i as u32);
        let name = out_name
            .get(&id)
            .map(|n| n.to_string())
            .unwrap_or_else(|| format!("_t{i}"));
        let rnd = match node.precision {
            Precision::Fl32 => "rnd32",
            Precision::Fl64 => "rnd64",
        };
        let body = match node.op {
            Op::Add | Op::Sub | Op::Mul | Op::Div => {
                let a = atom(&names, dag.node(node.children[0]), node.children[0]);
                let b = atom(&names, dag.node(node.children[1]), node.children[1]);
                let sym = match node.op {
                    Op::Add => "+",
                    Op::Sub => "-",
                    Op::Mul => "*",
                    _ => "/",
                };
                format!("{a} {sym} {b}")
            }
            Op::Neg => format!("-{}", atom(&names, dag.node(node.children[0]), node.children[0])),
            op => format!(
                "{}({})",
                op.name(),
                atom(&names, dag.node(node.children[0]), node.children[0])
            ),
        };
        writeln!(s, "  {name} {rnd} = {body};").unwrap();
        names.insert(id, name);
    }
    // Outputs that alias inputs or constants still need an assignment.
    for (name, id) in &dag.outputs {
        let node = dag.node(*id);
        if !node.op.is_arith() {
            let body = atom(&names, node, *id);
            writeln!(s, "  {name} = {body};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}
