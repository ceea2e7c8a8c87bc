//! OpenQASM 2.0 ingestion and emission for the supported gate subset.
//!
//! One quantum register and at most one classical register are accepted.
//! `barrier` statements are skipped; gate definitions, `reset`, `opaque` and
//! classical control are rejected. Parameters may use `pi`, numeric literals,
//! `+ - * /` and parentheses; dyadic multiples of π are kept exact.

use std::fmt::Write as _;

use super::angle::{Angle, DEFAULT_ANGLE_TOL};
use super::circuit::Circuit;
use super::gate::{Gate, GateKind};
use super::IrError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unsupported gate or statement `{name}`")]
    Unsupported { line: usize, col: usize, name: String },
    #[error("{line}:{col}: qubit index {index} out of range for register of size {size}")]
    QubitOutOfRange {
        line: usize,
        col: usize,
        index: usize,
        size: usize,
    },
    #[error("{line}:{col}: only one quantum register is supported")]
    MultipleQuantumRegisters { line: usize, col: usize },
    #[error("{line}:{col}: only one classical register is supported")]
    MultipleClassicalRegisters { line: usize, col: usize },
    #[error("{line}:{col}: {source}")]
    Invalid {
        line: usize,
        col: usize,
        #[source]
        source: IrError,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Real(f64),
    Str(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
    /// `// @name` / `// @meta` annotations collected from comments.
    annotations: Vec<String>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            src: text.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
            annotations: Vec::new(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn tokens(mut self) -> Result<(Vec<Token>, Vec<String>), ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = if c == b'/' && self.src.get(self.pos + 1) == Some(&b'/') {
                let start = self.pos;
                while !matches!(self.peek(), None | Some(b'\n')) {
                    self.bump();
                }
                let comment = String::from_utf8_lossy(&self.src[start + 2..self.pos]);
                let comment = comment.trim();
                if comment.starts_with('@') {
                    self.annotations.push(comment.to_string());
                }
                continue;
            } else if c.is_ascii_alphabetic() || c == b'_' {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.bump();
                }
                Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            } else if c.is_ascii_digit() || c == b'.' {
                self.number()?
            } else if c == b'"' {
                self.bump();
                let start = self.pos;
                while !matches!(self.peek(), None | Some(b'"')) {
                    self.bump();
                }
                if self.bump().is_none() {
                    return Err(self.error("unterminated string"));
                }
                Tok::Str(String::from_utf8_lossy(&self.src[start..self.pos - 1]).into_owned())
            } else if c == b'-' && self.src.get(self.pos + 1) == Some(&b'>') {
                self.bump();
                self.bump();
                Tok::Sym("->")
            } else {
                let sym = match c {
                    b';' => ";",
                    b',' => ",",
                    b'[' => "[",
                    b']' => "]",
                    b'(' => "(",
                    b')' => ")",
                    b'{' => "{",
                    b'}' => "}",
                    b'+' => "+",
                    b'-' => "-",
                    b'*' => "*",
                    b'/' => "/",
                    b'^' => "^",
                    _ => return Err(self.error(format!("unexpected character `{}`", c as char))),
                };
                self.bump();
                Tok::Sym(sym)
            };
            out.push(Token { tok, line, col });
        }
        Ok((out, self.annotations))
    }

    fn number(&mut self) -> Result<Tok, ParseError> {
        let start = self.pos;
        let mut is_real = false;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.peek() == Some(b'.') {
            is_real = true;
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            is_real = true;
            self.bump();
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.bump();
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if is_real {
            text.parse::<f64>()
                .map(Tok::Real)
                .map_err(|_| self.error(format!("bad number `{text}`")))
        } else {
            text.parse::<i64>()
                .map(Tok::Int)
                .map_err(|_| self.error(format!("bad integer `{text}`")))
        }
    }
}

/// Intermediate value of a parameter expression.
#[derive(Clone, Copy, Debug)]
enum Value {
    Int(i64),
    /// `num·π / 2^exp`
    Pi(i64, u32),
    Real(f64),
}

impl Value {
    fn to_f64(self) -> f64 {
        match self {
            Value::Int(i) => i as f64,
            Value::Pi(n, e) => n as f64 * std::f64::consts::PI / (1u64 << e) as f64,
            Value::Real(x) => x,
        }
    }

    fn neg(self) -> Value {
        match self {
            Value::Int(i) => Value::Int(-i),
            Value::Pi(n, e) => Value::Pi(-n, e),
            Value::Real(x) => Value::Real(-x),
        }
    }

    fn add(self, other: Value) -> Value {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.checked_add(b).map_or(Value::Real(a as f64 + b as f64), Value::Int),
            (Value::Pi(a, ea), Value::Pi(b, eb)) => {
                let e = ea.max(eb);
                match (a.checked_shl(e - ea), b.checked_shl(e - eb)) {
                    (Some(x), Some(y)) if x.checked_add(y).is_some() => Value::Pi(x + y, e),
                    _ => Value::Real(self.to_f64() + other.to_f64()),
                }
            }
            _ => Value::Real(self.to_f64() + other.to_f64()),
        }
    }

    fn mul(self, other: Value) -> Value {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.checked_mul(b).map_or(Value::Real(a as f64 * b as f64), Value::Int),
            (Value::Pi(n, e), Value::Int(k)) | (Value::Int(k), Value::Pi(n, e)) => n
                .checked_mul(k)
                .map_or(Value::Real(self.to_f64() * other.to_f64()), |m| Value::Pi(m, e)),
            _ => Value::Real(self.to_f64() * other.to_f64()),
        }
    }

    fn div(self, other: Value) -> Value {
        match (self, other) {
            (Value::Pi(n, e), Value::Int(k)) if k != 0 && (k.unsigned_abs()).is_power_of_two() => {
                let shift = k.unsigned_abs().trailing_zeros();
                let n = if k < 0 { -n } else { n };
                if e + shift < 60 {
                    Value::Pi(n, e + shift)
                } else {
                    Value::Real(self.to_f64() / other.to_f64())
                }
            }
            (Value::Int(a), Value::Int(b)) if b != 0 && a % b == 0 => Value::Int(a / b),
            _ => Value::Real(self.to_f64() / other.to_f64()),
        }
    }

    fn to_angle(self, tol: f64) -> Angle {
        match self {
            Value::Pi(n, e) => Angle::dyadic(n, e),
            Value::Int(0) => Angle::ZERO,
            other => Angle::radians_with_tol(other.to_f64(), tol),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    tol: f64,
    qreg: Option<(String, usize)>,
    creg: Option<(String, usize)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or((1, 1), |t| (t.line, t.col))
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .map(|t| t.tok.clone())
            .ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_sym(&mut self, sym: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == sym => {
                self.pos += 1;
                Ok(())
            }
            other => Err(self.err(format!("expected `{sym}`, found {other:?}"))),
        }
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            other => {
                self.pos -= 1;
                Err(self.err(format!("expected identifier, found {other:?}")))
            }
        }
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        match self.next()? {
            Tok::Int(i) if i >= 0 => Ok(i as usize),
            other => {
                self.pos -= 1;
                Err(self.err(format!("expected non-negative integer, found {other:?}")))
            }
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym("+") {
                v = v.add(self.term()?);
            } else if self.eat_sym("-") {
                v = v.add(self.term()?.neg());
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym("*") {
                v = v.mul(self.unary()?);
            } else if self.eat_sym("/") {
                v = v.div(self.unary()?);
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if self.eat_sym("-") {
            return Ok(self.unary()?.neg());
        }
        if self.eat_sym("+") {
            return self.unary();
        }
        match self.next()? {
            Tok::Int(i) => Ok(Value::Int(i)),
            Tok::Real(x) => Ok(Value::Real(x)),
            Tok::Ident(s) if s == "pi" => Ok(Value::Pi(1, 0)),
            Tok::Sym("(") => {
                let v = self.expr()?;
                self.expect_sym(")")?;
                Ok(v)
            }
            other => {
                self.pos -= 1;
                Err(self.err(format!("unexpected {other:?} in expression")))
            }
        }
    }

    /// A register reference: `q[i]` (Some(i)) or the bare register `q` (None).
    fn reg_arg(&mut self, quantum: bool) -> Result<Option<usize>, ParseError> {
        let (line, col) = self.here();
        let name = self.ident()?;
        let reg = if quantum { &self.qreg } else { &self.creg };
        let Some((reg_name, size)) = reg.clone() else {
            return Err(ParseError::Syntax {
                line,
                col,
                msg: format!("`{name}` used before register declaration"),
            });
        };
        if name != reg_name {
            return Err(ParseError::Syntax {
                line,
                col,
                msg: format!("unknown register `{name}`"),
            });
        }
        if self.eat_sym("[") {
            let idx = self.uint()?;
            self.expect_sym("]")?;
            if idx >= size {
                return Err(ParseError::QubitOutOfRange {
                    line,
                    col,
                    index: idx,
                    size,
                });
            }
            Ok(Some(idx))
        } else {
            Ok(None)
        }
    }

    fn statement(&mut self, circuit: &mut Option<Circuit>) -> Result<(), ParseError> {
        let (line, col) = self.here();
        let head = self.ident()?;
        match head.as_str() {
            "OPENQASM" => {
                match self.next()? {
                    Tok::Real(_) | Tok::Int(_) => {}
                    _ => return Err(self.err("expected version number")),
                }
                self.expect_sym(";")
            }
            "include" => {
                match self.next()? {
                    Tok::Str(_) => {}
                    _ => return Err(self.err("expected include path")),
                }
                self.expect_sym(";")
            }
            "qreg" | "creg" => {
                let name = self.ident()?;
                self.expect_sym("[")?;
                let size = self.uint()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                if head == "qreg" {
                    if self.qreg.is_some() {
                        return Err(ParseError::MultipleQuantumRegisters { line, col });
                    }
                    self.qreg = Some((name, size));
                    let clbits = self.creg.as_ref().map_or(0, |c| c.1);
                    *circuit = Some(Circuit::with_clbits(size, clbits));
                } else {
                    if self.creg.is_some() {
                        return Err(ParseError::MultipleClassicalRegisters { line, col });
                    }
                    self.creg = Some((name, size));
                    if let Some(c) = circuit.as_mut() {
                        let mut fresh = Circuit::with_clbits(c.num_qubits(), size);
                        for g in c.gates() {
                            fresh.push(g.clone()).expect("re-pushing valid gates");
                        }
                        *c = fresh;
                    }
                }
                Ok(())
            }
            "barrier" => {
                loop {
                    self.reg_arg(true)?;
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.expect_sym(";")
            }
            "measure" => {
                let q = self.reg_arg(true)?;
                self.expect_sym("->")?;
                let c = self.reg_arg(false)?;
                self.expect_sym(";")?;
                let circ = circuit.as_mut().ok_or_else(|| self.err("no qreg declared"))?;
                let pairs: Vec<(usize, usize)> = match (q, c) {
                    (Some(q), Some(c)) => vec![(q, c)],
                    (None, None) => {
                        let n = circ.num_qubits().min(self.creg.as_ref().map_or(0, |c| c.1));
                        (0..n).map(|i| (i, i)).collect()
                    }
                    _ => return Err(self.err("mismatched measure arguments")),
                };
                for (q, c) in pairs {
                    circ.push(Gate::measure(q, c))
                        .map_err(|source| ParseError::Invalid { line, col, source })?;
                }
                Ok(())
            }
            "gate" | "opaque" | "reset" | "if" => Err(ParseError::Unsupported {
                line,
                col,
                name: head,
            }),
            name => self.gate_call(name.to_string(), line, col, circuit),
        }
    }

    fn gate_call(
        &mut self,
        name: String,
        line: usize,
        col: usize,
        circuit: &mut Option<Circuit>,
    ) -> Result<(), ParseError> {
        let unsupported = || ParseError::Unsupported {
            line,
            col,
            name: name.clone(),
        };
        let kind = match name.as_str() {
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "h" => GateKind::H,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "cx" | "CX" => GateKind::CX,
            "cz" => GateKind::CZ,
            "swap" => GateKind::Swap,
            "ccx" => GateKind::CCX,
            "cp" | "cu1" => GateKind::CP,
            "rz" | "u1" | "p" => GateKind::RZ,
            "rx" => GateKind::RX,
            "ry" => GateKind::RY,
            "u3" | "u" | "U" => GateKind::U3,
            _ => return Err(unsupported()),
        };
        let mut params = Vec::new();
        if self.eat_sym("(") {
            if !self.eat_sym(")") {
                loop {
                    params.push(self.expr()?.to_angle(self.tol));
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.expect_sym(")")?;
            }
        }
        let mut args = Vec::new();
        loop {
            args.push(self.reg_arg(true)?);
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(";")?;
        let circ = circuit.as_mut().ok_or_else(|| self.err("no qreg declared"))?;
        let invalid = |source| ParseError::Invalid { line, col, source };

        let targets: Vec<Vec<usize>> = if args.iter().all(Option::is_some) {
            vec![args.into_iter().map(Option::unwrap).collect()]
        } else if args.len() == 1 && kind.num_qubits() == 1 {
            (0..circ.num_qubits()).map(|q| vec![q]).collect()
        } else {
            return Err(self.err("register broadcast is only supported for single-qubit gates"));
        };
        for qubits in targets {
            let gate = Gate::new(kind, qubits, params.clone()).map_err(invalid)?;
            let gate = if kind == GateKind::RX {
                Gate::rx(gate.qubit(), gate.params[0])
            } else {
                gate
            };
            circ.push(gate).map_err(invalid)?;
        }
        Ok(())
    }
}

/// Parses OpenQASM 2.0 text with the default angle tolerance.
pub fn parse_qasm(text: &str) -> Result<Circuit, ParseError> {
    parse_qasm_with_tol(text, DEFAULT_ANGLE_TOL)
}

pub fn parse_qasm_with_tol(text: &str, tol: f64) -> Result<Circuit, ParseError> {
    let (toks, annotations) = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        tol,
        qreg: None,
        creg: None,
    };
    let mut circuit: Option<Circuit> = None;
    while p.pos < p.toks.len() {
        p.statement(&mut circuit)?;
    }
    let mut circuit = circuit.ok_or(ParseError::Syntax {
        line: 1,
        col: 1,
        msg: "missing qreg declaration".into(),
    })?;
    for a in annotations {
        if let Some(name) = a.strip_prefix("@name ") {
            circuit.name = Some(name.to_string());
        } else if let Some(kv) = a.strip_prefix("@meta ") {
            if let Some((k, v)) = kv.split_once('=') {
                circuit.metadata.insert(k.to_string(), v.to_string());
            }
        }
    }
    Ok(circuit)
}

/// Evaluates a standalone parameter expression such as `3*pi/8` or `0.25`.
pub fn parse_angle_expr(text: &str) -> Result<Angle, ParseError> {
    let (toks, _) = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        tol: DEFAULT_ANGLE_TOL,
        qreg: None,
        creg: None,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(v.to_angle(DEFAULT_ANGLE_TOL))
}

/// Emits OpenQASM 2.0. Name and metadata travel as `// @name` and
/// `// @meta key=value` comments so that parsing the output reproduces the
/// circuit exactly.
pub fn emit_qasm(c: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if let Some(name) = &c.name {
        let _ = writeln!(out, "// @name {}", name.replace('\n', " "));
    }
    for (k, v) in &c.metadata {
        let _ = writeln!(out, "// @meta {}={}", k.replace(['\n', '='], "_"), v.replace('\n', " "));
    }
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits());
    if c.num_clbits() > 0 {
        let _ = writeln!(out, "creg c[{}];", c.num_clbits());
    }
    for g in c.gates() {
        let qargs = g
            .qubits
            .iter()
            .map(|q| format!("q[{q}]"))
            .collect::<Vec<_>>()
            .join(",");
        let params = g.params.iter().map(Angle::to_string).collect::<Vec<_>>().join(",");
        let line = match g.kind {
            GateKind::MeasureZ => format!("measure {} -> c[{}];", qargs, g.clbit.unwrap_or(g.qubits[0])),
            GateKind::RxPi4 => format!("rx(pi/4) {qargs};"),
            GateKind::RxPi4Dg => format!("rx(-pi/4) {qargs};"),
            k if k.num_params() > 0 => format!("{}({}) {};", k.name(), params, qargs),
            k => format!("{} {};", k.name(), qargs),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
