//! Text format for circuits with cut markers.
//!
//! A program is a list of `;`-terminated statements:
//!
//! ```text
//! qreg q[3];
//! creg c[3];
//! h q[0];
//! rz(pi/2) q[1];
//! cx q[0],q[1];
//! u1q(0.6,0,0.8,0,-0.8,0,0.6,0) q[2];
//! prepare(plus) q[2];
//! cut q[1]; // id=0
//! barrier q[0],q[1];
//! measure q[0] -> c[0];
//! reset q[2];
//! ```
//!
//! Rotation angles are arithmetic expressions over floats and `pi` with
//! `+ - * /` and parentheses. `u1q` takes the row-major unitary as eight
//! floats (real, imaginary alternating). A `cut` statement may carry a
//! trailing `// id=K` annotation pinning its id; unannotated cuts receive
//! the smallest ids not taken by annotated ones, in source order. All other
//! `//` comments are ignored.
//!
//! [`emit_program`] writes the canonical form (registers named `q` and `c`,
//! one statement per line, shortest round-trip float formatting), and
//! `parse_program(emit_program(c))` reproduces `c` exactly.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, Mat2, Operation, PrepState, C64};

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("semantic error at line {line}, column {col}: {msg}")]
    Semantic { line: usize, col: usize, msg: String },
}

impl ParseError {
    fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    fn semantic(pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError::Semantic {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Float(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    /// Trailing `// id=K` annotation.
    IdAnnotation(u64),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::Float(v) => format!("number `{v}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::IdAnnotation(v) => format!("`// id={v}`"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' {
            // Either a comment or the division operator; look ahead one char.
            let mut ahead = chars.clone();
            ahead.next();
            if ahead.peek() == Some(&'/') {
                bump!();
                bump!();
                let mut body = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    body.push(c2);
                    bump!();
                }
                let trimmed = body.trim();
                if let Some(rest) = trimmed.strip_prefix("id=") {
                    if let Ok(v) = rest.trim().parse::<u64>() {
                        toks.push((Tok::IdAnnotation(v), pos));
                        continue;
                    }
                }
                continue;
            }
            bump!();
            toks.push((Tok::Slash, pos));
            continue;
        }
        if c.is_ascii_digit() {
            let mut text = String::new();
            let mut is_float = false;
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_digit() {
                    text.push(c2);
                    bump!();
                } else if c2 == '.' {
                    is_float = true;
                    text.push(c2);
                    bump!();
                } else if c2 == 'e' || c2 == 'E' {
                    is_float = true;
                    text.push(c2);
                    bump!();
                    if let Some(&sign) = chars.peek() {
                        if sign == '+' || sign == '-' {
                            text.push(sign);
                            bump!();
                        }
                    }
                } else {
                    break;
                }
            }
            if is_float {
                let v: f64 = text
                    .parse()
                    .map_err(|_| ParseError::syntax(pos, format!("malformed number `{text}`")))?;
                toks.push((Tok::Float(v), pos));
            } else {
                let v: u64 = text
                    .parse()
                    .map_err(|_| ParseError::syntax(pos, format!("integer `{text}` out of range")))?;
                toks.push((Tok::Int(v), pos));
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut text = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_alphanumeric() || c2 == '_' {
                    text.push(c2);
                    bump!();
                } else {
                    break;
                }
            }
            toks.push((Tok::Ident(text), pos));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    toks.push((Tok::Arrow, pos));
                } else {
                    toks.push((Tok::Minus, pos));
                }
                continue;
            }
            other => {
                return Err(ParseError::syntax(
                    pos,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        bump!();
        toks.push((tok, pos));
    }
    Ok(toks)
}

/// A parsed statement before register resolution.
enum Stmt {
    Qreg { name: String, size: u64 },
    Creg { name: String, size: u64 },
    Gate { name: String, args: Vec<f64>, qubits: Vec<(String, u64)> },
    Measure { qubit: (String, u64), clbit: (String, u64) },
    Reset { qubit: (String, u64) },
    Prepare { state: PrepState, qubit: (String, u64) },
    Cut { qubit: (String, u64), id: Option<u64> },
    Barrier { qubits: Vec<(String, u64)> },
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.at)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn end_pos(&self) -> Pos {
        self.toks
            .last()
            .map(|(_, p)| *p)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<Pos, ParseError> {
        match self.next() {
            Some((tok, pos)) if tok == *want => Ok(pos),
            Some((tok, pos)) => Err(ParseError::syntax(
                pos,
                format!("expected {what}, found {}", tok.describe()),
            )),
            None => Err(ParseError::syntax(
                self.end_pos(),
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.next() {
            Some((Tok::Ident(s), pos)) => Ok((s, pos)),
            Some((tok, pos)) => Err(ParseError::syntax(
                pos,
                format!("expected {what}, found {}", tok.describe()),
            )),
            None => Err(ParseError::syntax(
                self.end_pos(),
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(u64, Pos), ParseError> {
        match self.next() {
            Some((Tok::Int(v), pos)) => Ok((v, pos)),
            Some((tok, pos)) => Err(ParseError::syntax(
                pos,
                format!("expected {what}, found {}", tok.describe()),
            )),
            None => Err(ParseError::syntax(
                self.end_pos(),
                format!("expected {what}, found end of input"),
            )),
        }
    }

    /// `name[index]`
    fn bit_ref(&mut self, what: &str) -> Result<((String, u64), Pos), ParseError> {
        let (name, pos) = self.expect_ident(what)?;
        self.expect(&Tok::LBracket, "`[`")?;
        let (idx, _) = self.expect_int("register index")?;
        self.expect(&Tok::RBracket, "`]`")?;
        Ok(((name, idx), pos))
    }

    fn angle_expr(&mut self) -> Result<f64, ParseError> {
        let v = self.angle_sum()?;
        Ok(v)
    }

    fn angle_sum(&mut self) -> Result<f64, ParseError> {
        let mut acc = self.angle_product()?;
        loop {
            match self.peek() {
                Some((Tok::Plus, _)) => {
                    self.next();
                    acc += self.angle_product()?;
                }
                Some((Tok::Minus, _)) => {
                    self.next();
                    acc -= self.angle_product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn angle_product(&mut self) -> Result<f64, ParseError> {
        let mut acc = self.angle_atom()?;
        loop {
            match self.peek() {
                Some((Tok::Star, _)) => {
                    self.next();
                    acc *= self.angle_atom()?;
                }
                Some((Tok::Slash, _)) => {
                    self.next();
                    acc /= self.angle_atom()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn angle_atom(&mut self) -> Result<f64, ParseError> {
        match self.next() {
            Some((Tok::Minus, _)) => Ok(-self.angle_atom()?),
            Some((Tok::Plus, _)) => self.angle_atom(),
            Some((Tok::Int(v), _)) => Ok(v as f64),
            Some((Tok::Float(v), _)) => Ok(v),
            Some((Tok::Ident(word), pos)) => {
                if word == "pi" {
                    Ok(std::f64::consts::PI)
                } else {
                    Err(ParseError::syntax(
                        pos,
                        format!("unknown constant `{word}` in angle expression"),
                    ))
                }
            }
            Some((Tok::LParen, _)) => {
                let v = self.angle_sum()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(v)
            }
            Some((tok, pos)) => Err(ParseError::syntax(
                pos,
                format!("expected angle expression, found {}", tok.describe()),
            )),
            None => Err(ParseError::syntax(
                self.end_pos(),
                "expected angle expression, found end of input",
            )),
        }
    }

    /// Parses one statement; returns it with the position of its first token.
    fn statement(&mut self) -> Result<(Stmt, Pos), ParseError> {
        let (word, pos) = self.expect_ident("statement keyword or gate name")?;
        let stmt = match word.as_str() {
            "qreg" | "creg" => {
                let (name, _) = self.expect_ident("register name")?;
                self.expect(&Tok::LBracket, "`[`")?;
                let (size, _) = self.expect_int("register size")?;
                self.expect(&Tok::RBracket, "`]`")?;
                self.expect(&Tok::Semi, "`;`")?;
                if word == "qreg" {
                    Stmt::Qreg { name, size }
                } else {
                    Stmt::Creg { name, size }
                }
            }
            "measure" => {
                let (qubit, _) = self.bit_ref("qubit reference")?;
                self.expect(&Tok::Arrow, "`->`")?;
                let (clbit, _) = self.bit_ref("classical bit reference")?;
                self.expect(&Tok::Semi, "`;`")?;
                Stmt::Measure { qubit, clbit }
            }
            "reset" => {
                let (qubit, _) = self.bit_ref("qubit reference")?;
                self.expect(&Tok::Semi, "`;`")?;
                Stmt::Reset { qubit }
            }
            "prepare" => {
                self.expect(&Tok::LParen, "`(`")?;
                let (state_name, spos) = self.expect_ident("preparation state")?;
                let state = PrepState::from_name(&state_name).ok_or_else(|| {
                    ParseError::semantic(
                        spos,
                        format!(
                            "unknown preparation state `{state_name}` \
                             (expected zero, one, plus, or i_state)"
                        ),
                    )
                })?;
                self.expect(&Tok::RParen, "`)`")?;
                let (qubit, _) = self.bit_ref("qubit reference")?;
                self.expect(&Tok::Semi, "`;`")?;
                Stmt::Prepare { state, qubit }
            }
            "cut" => {
                let (qubit, _) = self.bit_ref("qubit reference")?;
                self.expect(&Tok::Semi, "`;`")?;
                let id = match self.peek() {
                    Some((Tok::IdAnnotation(v), _)) => {
                        let v = *v;
                        self.next();
                        Some(v)
                    }
                    _ => None,
                };
                Stmt::Cut { qubit, id }
            }
            "barrier" => {
                let mut qubits = Vec::new();
                loop {
                    let (q, _) = self.bit_ref("qubit reference")?;
                    qubits.push(q);
                    match self.next() {
                        Some((Tok::Comma, _)) => continue,
                        Some((Tok::Semi, _)) => break,
                        Some((tok, p)) => {
                            return Err(ParseError::syntax(
                                p,
                                format!("expected `,` or `;`, found {}", tok.describe()),
                            ))
                        }
                        None => {
                            return Err(ParseError::syntax(
                                self.end_pos(),
                                "expected `,` or `;`, found end of input",
                            ))
                        }
                    }
                }
                Stmt::Barrier { qubits }
            }
            _ => {
                // Gate statement: optional parenthesized args, then qubits.
                let mut args = Vec::new();
                if matches!(self.peek(), Some((Tok::LParen, _))) {
                    self.next();
                    if matches!(self.peek(), Some((Tok::RParen, _))) {
                        self.next();
                    } else {
                        loop {
                            args.push(self.angle_expr()?);
                            match self.next() {
                                Some((Tok::Comma, _)) => continue,
                                Some((Tok::RParen, _)) => break,
                                Some((tok, p)) => {
                                    return Err(ParseError::syntax(
                                        p,
                                        format!("expected `,` or `)`, found {}", tok.describe()),
                                    ))
                                }
                                None => {
                                    return Err(ParseError::syntax(
                                        self.end_pos(),
                                        "expected `,` or `)`, found end of input",
                                    ))
                                }
                            }
                        }
                    }
                }
                let mut qubits = Vec::new();
                loop {
                    let (q, _) = self.bit_ref("qubit reference")?;
                    qubits.push(q);
                    match self.next() {
                        Some((Tok::Comma, _)) => continue,
                        Some((Tok::Semi, _)) => break,
                        Some((tok, p)) => {
                            return Err(ParseError::syntax(
                                p,
                                format!("expected `,` or `;`, found {}", tok.describe()),
                            ))
                        }
                        None => {
                            return Err(ParseError::syntax(
                                self.end_pos(),
                                "expected `,` or `;`, found end of input",
                            ))
                        }
                    }
                }
                Stmt::Gate {
                    name: word,
                    args,
                    qubits,
                }
            }
        };
        Ok((stmt, pos))
    }
}

fn build_gate(name: &str, args: &[f64], qubits: &[usize], pos: Pos) -> Result<Gate, ParseError> {
    let want = |n_args: usize, n_qubits: usize| -> Result<(), ParseError> {
        if args.len() != n_args {
            return Err(ParseError::semantic(
                pos,
                format!(
                    "gate `{name}` takes {n_args} parameter(s), found {}",
                    args.len()
                ),
            ));
        }
        if qubits.len() != n_qubits {
            return Err(ParseError::semantic(
                pos,
                format!(
                    "gate `{name}` acts on {n_qubits} qubit(s), found {}",
                    qubits.len()
                ),
            ));
        }
        Ok(())
    };
    let gate = match name {
        "h" => {
            want(0, 1)?;
            Gate::H(qubits[0])
        }
        "x" => {
            want(0, 1)?;
            Gate::X(qubits[0])
        }
        "y" => {
            want(0, 1)?;
            Gate::Y(qubits[0])
        }
        "z" => {
            want(0, 1)?;
            Gate::Z(qubits[0])
        }
        "rx" => {
            want(1, 1)?;
            Gate::Rx(qubits[0], args[0])
        }
        "ry" => {
            want(1, 1)?;
            Gate::Ry(qubits[0], args[0])
        }
        "rz" => {
            want(1, 1)?;
            Gate::Rz(qubits[0], args[0])
        }
        "cx" => {
            want(0, 2)?;
            Gate::Cx(qubits[0], qubits[1])
        }
        "u1q" => {
            want(8, 1)?;
            let m = Mat2::new(
                C64::new(args[0], args[1]),
                C64::new(args[2], args[3]),
                C64::new(args[4], args[5]),
                C64::new(args[6], args[7]),
            );
            Gate::U1q(qubits[0], m)
        }
        _ => {
            return Err(ParseError::semantic(
                pos,
                format!("unknown gate `{name}`"),
            ))
        }
    };
    Ok(gate)
}

/// Parses a program into a [`Circuit`].
pub fn parse_program(src: &str) -> Result<Circuit, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, at: 0 };
    let mut stmts = Vec::new();
    while parser.peek().is_some() {
        if let Some((Tok::IdAnnotation(_), pos)) = parser.peek() {
            return Err(ParseError::syntax(
                *pos,
                "`// id=K` annotation is only allowed right after a cut statement",
            ));
        }
        stmts.push(parser.statement()?);
    }

    let mut qreg: Option<(String, u64)> = None;
    let mut creg: Option<(String, u64)> = None;
    for (stmt, pos) in &stmts {
        match stmt {
            Stmt::Qreg { name, size } => {
                if qreg.is_some() {
                    return Err(ParseError::semantic(
                        *pos,
                        "a program declares at most one quantum register",
                    ));
                }
                qreg = Some((name.clone(), *size));
            }
            Stmt::Creg { name, size } => {
                if creg.is_some() {
                    return Err(ParseError::semantic(
                        *pos,
                        "a program declares at most one classical register",
                    ));
                }
                creg = Some((name.clone(), *size));
            }
            _ => {}
        }
    }

    let resolve = |reg: &Option<(String, u64)>,
                   kind: &str,
                   bit: &(String, u64),
                   pos: Pos|
     -> Result<usize, ParseError> {
        let (declared_name, size) = reg.as_ref().ok_or_else(|| {
            ParseError::semantic(pos, format!("no {kind} register declared"))
        })?;
        if bit.0 != *declared_name {
            return Err(ParseError::semantic(
                pos,
                format!("unknown register `{}` (declared: `{declared_name}`)", bit.0),
            ));
        }
        if bit.1 >= *size {
            return Err(ParseError::semantic(
                pos,
                format!(
                    "index {} out of range for register `{}` of size {size}",
                    bit.1, bit.0
                ),
            ));
        }
        Ok(bit.1 as usize)
    };

    // Assign ids to unannotated cuts: smallest ids not claimed explicitly,
    // in source order. Explicit duplicates are rejected here; duplicates
    // against nothing else can arise.
    let mut explicit_ids = std::collections::HashSet::new();
    for (stmt, pos) in &stmts {
        if let Stmt::Cut { id: Some(v), .. } = stmt {
            if !explicit_ids.insert(*v) {
                return Err(ParseError::semantic(
                    *pos,
                    format!("duplicate cut id {v}"),
                ));
            }
        }
    }
    let mut next_auto = 0u64;
    let mut take_auto = move || {
        let mut v = next_auto;
        while explicit_ids.contains(&v) {
            v += 1;
        }
        next_auto = v + 1;
        v
    };

    let num_qubits = qreg.as_ref().map(|(_, s)| *s as usize).unwrap_or(0);
    let num_clbits = creg.as_ref().map(|(_, s)| *s as usize).unwrap_or(0);
    let mut circuit = Circuit::new(num_qubits, num_clbits);
    for (stmt, pos) in &stmts {
        let op = match stmt {
            Stmt::Qreg { .. } | Stmt::Creg { .. } => continue,
            Stmt::Gate { name, args, qubits } => {
                let resolved: Vec<usize> = qubits
                    .iter()
                    .map(|q| resolve(&qreg, "quantum", q, *pos))
                    .collect::<Result<_, _>>()?;
                Operation::Gate(build_gate(name, args, &resolved, *pos)?)
            }
            Stmt::Measure { qubit, clbit } => Operation::Measure {
                qubit: resolve(&qreg, "quantum", qubit, *pos)?,
                clbit: resolve(&creg, "classical", clbit, *pos)?,
            },
            Stmt::Reset { qubit } => Operation::Reset {
                qubit: resolve(&qreg, "quantum", qubit, *pos)?,
            },
            Stmt::Prepare { state, qubit } => Operation::Prepare {
                qubit: resolve(&qreg, "quantum", qubit, *pos)?,
                state: *state,
            },
            Stmt::Cut { qubit, id } => Operation::Cut {
                cut_id: id.map(|v| v as usize).unwrap_or_else(|| take_auto() as usize),
                qubit: resolve(&qreg, "quantum", qubit, *pos)?,
            },
            Stmt::Barrier { qubits } => Operation::Barrier {
                qubits: qubits
                    .iter()
                    .map(|q| resolve(&qreg, "quantum", q, *pos))
                    .collect::<Result<_, _>>()?,
            },
        };
        circuit
            .push(op)
            .map_err(|e| ParseError::semantic(*pos, e.to_string()))?;
    }
    Ok(circuit)
}

/// Writes the canonical text form of `circuit`.
pub fn emit_program(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits());
    if circuit.num_clbits() > 0 {
        let _ = writeln!(out, "creg c[{}];", circuit.num_clbits());
    }
    for op in circuit.ops() {
        match op {
            Operation::Gate(g) => match g {
                Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => {
                    let _ = writeln!(out, "{} q[{q}];", g.name());
                }
                Gate::Rx(q, a) | Gate::Ry(q, a) | Gate::Rz(q, a) => {
                    let _ = writeln!(out, "{}({a}) q[{q}];", g.name());
                }
                Gate::Cx(c, t) => {
                    let _ = writeln!(out, "cx q[{c}],q[{t}];");
                }
                Gate::U1q(q, m) => {
                    let e = &m.0;
                    let _ = writeln!(
                        out,
                        "u1q({},{},{},{},{},{},{},{}) q[{q}];",
                        e[0][0].re,
                        e[0][0].im,
                        e[0][1].re,
                        e[0][1].im,
                        e[1][0].re,
                        e[1][0].im,
                        e[1][1].re,
                        e[1][1].im
                    );
                }
            },
            Operation::Measure { qubit, clbit } => {
                let _ = writeln!(out, "measure q[{qubit}] -> c[{clbit}];");
            }
            Operation::Reset { qubit } => {
                let _ = writeln!(out, "reset q[{qubit}];");
            }
            Operation::Prepare { qubit, state } => {
                let _ = writeln!(out, "prepare({}) q[{qubit}];", state.name());
            }
            Operation::Cut { cut_id, qubit } => {
                let _ = writeln!(out, "cut q[{qubit}]; // id={cut_id}");
            }
            Operation::Barrier { qubits } => {
                let refs: Vec<String> = qubits.iter().map(|q| format!("q[{q}]")).collect();
                let _ = writeln!(out, "barrier {};", refs.join(","));
            }
        }
    }
    out
}

/// Reads a program from a file, wrapping IO and parse failures.
pub fn read_program(path: &std::path::Path) -> Result<Circuit, ReadError> {
    let src = std::fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_program(&src).map_err(|source| ReadError::Parse {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: ParseError,
    },
}
