use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{ErrorKind, ParseError};

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, t: &Token, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(t.pos, ErrorKind::Syntax, msg))
    }

    fn expected<T>(&self, what: &str) -> PResult<T> {
        let t = self.peek().clone();
        self.error(&t, format!("expected {what}, found {}", t.tok.describe()))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            self.expected(&tok.describe())
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match &self.peek().tok {
            Tok::Ident(name) if name != "_" => {
                let name = name.clone();
                let pos = self.bump().pos;
                Ok(Ident { name, pos })
            }
            _ => self.expected(what),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Pos> {
        match &self.peek().tok {
            Tok::Ident(name) if name == kw => Ok(self.bump().pos),
            _ => self.expected(&format!("'{kw}'")),
        }
    }

    fn assignment(&mut self, kw: &str) -> PResult<()> {
        self.keyword(kw)?;
        self.expect(Tok::Equals)?;
        Ok(())
    }

    fn integer(&mut self, what: &str) -> PResult<u64> {
        match self.peek().tok {
            Tok::Number(x) if x.fract() == 0.0 && (0.0..9.0e15).contains(&x) => {
                self.bump();
                Ok(x as u64)
            }
            _ => self.expected(what),
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek().tok {
            Tok::Newline | Tok::Eof => {
                self.bump();
                Ok(())
            }
            _ => self.expected("end of line"),
        }
    }

    fn port_list(&mut self) -> PResult<Vec<PortRef>> {
        self.expect(Tok::LBracket)?;
        let mut ports = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(ports);
        }
        loop {
            match &self.peek().tok {
                Tok::Ident(n) if n == "_" => {
                    self.bump();
                    ports.push(None);
                }
                Tok::Ident(_) => ports.push(Some(self.ident("port name")?)),
                _ => return self.expected("port name or '_'"),
            }
            if self.eat(&Tok::RBracket) {
                return Ok(ports);
            }
            if !self.eat(&Tok::Comma) {
                return self.expected("',' or ']'");
            }
        }
    }

    fn angle(&mut self) -> PResult<Angle> {
        let neg = self.eat(&Tok::Minus);
        let sign = if neg { -1 } else { 1 };
        match self.peek().tok.clone() {
            Tok::Number(x) => {
                let t = self.bump();
                if !self.eat(&Tok::Star) {
                    return Ok(Angle::Radians(if neg { -x } else { x }));
                }
                if x.fract() != 0.0 || x.abs() > 9.0e15 {
                    return self.error(&t, "multiplier of pi must be an integer");
                }
                self.keyword("pi")?;
                let den = self.pi_denominator()?;
                Ok(Angle::Pi { num: sign * x as i64, den })
            }
            Tok::Ident(ref s) if s == "pi" => {
                self.bump();
                let den = self.pi_denominator()?;
                Ok(Angle::Pi { num: sign, den })
            }
            _ => self.expected("angle"),
        }
    }

    fn pi_denominator(&mut self) -> PResult<u64> {
        if !self.eat(&Tok::Slash) {
            return Ok(1);
        }
        let t = self.peek().clone();
        let d = self.integer("integer denominator")?;
        if d == 0 {
            return self.error(&t, "denominator must be positive");
        }
        Ok(d)
    }

    fn kind(&mut self) -> PResult<ComponentKind> {
        let t = self.peek().clone();
        let name = match &t.tok {
            Tok::Ident(n) => n.clone(),
            _ => return self.expected("component kind"),
        };
        self.bump();
        let param = |p: &mut Parser, want: &str| -> PResult<Angle> {
            p.expect(Tok::LParen)?;
            p.assignment(want)?;
            let a = p.angle()?;
            p.expect(Tok::RParen)?;
            Ok(a)
        };
        let kind = match name.as_str() {
            "cpbs" => ComponentKind::Cpbs,
            "bs" => ComponentKind::Bs,
            "mirror" => ComponentKind::Mirror,
            "cavity" => ComponentKind::Cavity,
            "hwp" => ComponentKind::Hwp { theta: param(self, "theta")? },
            "phase" => ComponentKind::Phase { phi: param(self, "phi")? },
            other => return self.error(&t, format!("unknown component kind '{other}'")),
        };
        if self.peek().tok == Tok::LParen {
            let t = self.peek().clone();
            return self.error(&t, format!("component kind '{name}' takes no parameters"));
        }
        Ok(kind)
    }

    fn number_signed(&mut self) -> PResult<(f64, Token)> {
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        match self.peek().tok {
            Tok::Number(x) => {
                let t = self.bump();
                Ok((if neg { -x } else { x }, t))
            }
            _ => self.expected("number"),
        }
    }

    fn imag_unit(&mut self) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == "i") && {
            self.bump();
            true
        }
    }

    fn complex(&mut self) -> PResult<ComplexLit> {
        let (x, _) = self.number_signed()?;
        if self.imag_unit() {
            return Ok(ComplexLit { re: 0.0, im: x });
        }
        let neg = match self.peek().tok {
            Tok::Plus => false,
            Tok::Minus => true,
            _ => return Ok(ComplexLit { re: x, im: 0.0 }),
        };
        self.bump();
        let y = match self.peek().tok {
            Tok::Number(y) => {
                self.bump();
                y
            }
            _ => return self.expected("number"),
        };
        if !self.imag_unit() {
            return self.expected("'i'");
        }
        Ok(ComplexLit { re: x, im: if neg { -y } else { y } })
    }

    fn state_expr(&mut self) -> PResult<StateExpr> {
        if self.peek().tok == Tok::LParen {
            let pos = self.bump().pos;
            let first = self.complex()?;
            self.expect(Tok::Comma)?;
            let second = self.complex()?;
            self.expect(Tok::RParen)?;
            return Ok(StateExpr::Amps { first, second, pos });
        }
        let mut id = self.ident("state name or '('")?;
        if self.eat(&Tok::Plus) {
            id.name.push('+');
        } else if self.eat(&Tok::Minus) {
            id.name.push('-');
        }
        Ok(StateExpr::Named(id))
    }

    fn statement(&mut self, ast: &mut CircuitAst) -> PResult<()> {
        let head = self.peek().clone();
        let kw = match &head.tok {
            Tok::Ident(s) => s.clone(),
            _ => return self.expected("statement"),
        };
        self.bump();
        match kw.as_str() {
            "modes" => {
                ast.modes.push(self.ident("mode name")?);
                while let Tok::Ident(_) = self.peek().tok {
                    ast.modes.push(self.ident("mode name")?);
                }
            }
            "component" => {
                let name = self.ident("component name")?;
                let kind = self.kind()?;
                self.assignment("in")?;
                let inputs = self.port_list()?;
                self.assignment("out")?;
                let outputs = self.port_list()?;
                let loss = if matches!(&self.peek().tok, Tok::Ident(s) if s == "loss") {
                    self.assignment("loss")?;
                    Some(self.port_list()?)
                } else {
                    None
                };
                ast.components.push(ComponentDecl { name, kind, inputs, outputs, loss });
            }
            "sequence" => {
                ast.sequence.push(self.ident("component name")?);
                while let Tok::Ident(_) = self.peek().tok {
                    ast.sequence.push(self.ident("component name")?);
                }
            }
            "input" => {
                let which = self.peek().clone();
                match &which.tok {
                    Tok::Ident(s) if s == "photon" => {
                        self.bump();
                        let id = self.integer("photon number")? as usize;
                        self.assignment("port")?;
                        let port = self.ident("port name")?;
                        self.assignment("state")?;
                        let state = self.state_expr()?;
                        ast.inputs.push(InputDecl::Photon { id, port, state, pos: head.pos });
                    }
                    Tok::Ident(s) if s == "photons" => {
                        self.bump();
                        let a = self.integer("photon number")? as usize;
                        let b = self.integer("photon number")? as usize;
                        self.assignment("port")?;
                        let port = self.ident("port name")?;
                        self.assignment("state")?;
                        let state = self.state_expr()?;
                        ast.inputs.push(InputDecl::Pair { ids: (a, b), port, state, pos: head.pos });
                    }
                    Tok::Ident(s) if s == "spin" => {
                        self.bump();
                        self.assignment("state")?;
                        let state = self.state_expr()?;
                        ast.inputs.push(InputDecl::Spin { state, pos: head.pos });
                    }
                    _ => return self.expected("'photon', 'photons' or 'spin'"),
                }
            }
            "measure" => {
                let which = self.peek().clone();
                match &which.tok {
                    Tok::Ident(s) if s == "photon" => {
                        self.bump();
                        let id = self.integer("photon number")? as usize;
                        self.assignment("basis")?;
                        let basis = self.ident("basis name")?;
                        ast.measurements.push(MeasureDecl::Photon { id, basis, pos: head.pos });
                    }
                    Tok::Ident(s) if s == "spin" => {
                        self.bump();
                        self.assignment("basis")?;
                        let basis = self.ident("basis name")?;
                        ast.measurements.push(MeasureDecl::Spin { basis, pos: head.pos });
                    }
                    _ => return self.expected("'photon' or 'spin'"),
                }
            }
            other => return self.error(&head, format!("unknown statement '{other}'")),
        }
        self.end_of_statement()
    }
}

/// Parses without semantic checks.
pub fn parse_syntax(src: &str) -> Result<CircuitAst, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let mut ast = CircuitAst::default();
    let mut statements = 0;
    loop {
        while p.eat(&Tok::Newline) {}
        if p.peek().tok == Tok::Eof {
            break;
        }
        p.statement(&mut ast)?;
        statements += 1;
    }
    if statements == 0 {
        return Err(ParseError::new(Pos::new(1, 1), ErrorKind::Syntax, "empty circuit: expected a statement"));
    }
    Ok(ast)
}
