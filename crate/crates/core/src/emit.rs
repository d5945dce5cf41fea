//! Text renderings of hammered programs: Datalog and clausal TPTP.
//!
//! Numbers become plain symbols (`c2000`, `n1`, `q1_2`, `nq1_2`) and finite-sort
//! constants are double-quoted; the arithmetic is already compiled away, so
//! only distinctness matters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::engine::{DAtom, DTerm, GroundAtom, Program, Rule};
use crate::hammer::{HammeredProgram, GOAL};
use crate::model::Problem;
use crate::num::{Scalar, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("TPTP output cannot express negation; use the clause encoding")]
    NegationNotRepresentable,
}

/// Lower-cased predicate names, with `_1`, `_2`, … appended on collision.
fn name_map<C: Ord>(program: &Program<C>) -> BTreeMap<String, String> {
    let mut used = BTreeSet::new();
    let mut out = BTreeMap::new();
    for p in program.predicates() {
        let base = p.to_lowercase();
        let mut name = base.clone();
        let mut k = 0;
        while used.contains(&name) {
            k += 1;
            name = format!("{base}_{k}");
        }
        used.insert(name.clone());
        out.insert(p.to_string(), name);
    }
    out
}

/// Assigns `X`, `X1`, `X2`, … to a rule's variables in order of appearance.
struct VarNames(Vec<String>);

impl VarNames {
    fn of<C>(rule: &Rule<C>) -> Self {
        let mut seen: Vec<String> = Vec::new();
        for a in std::iter::once(&rule.head).chain(&rule.pos).chain(&rule.neg) {
            for x in a.vars() {
                if !seen.iter().any(|s| s == x) {
                    seen.push(x.to_string());
                }
            }
        }
        VarNames(seen)
    }

    fn get(&self, x: &str) -> String {
        match self.0.iter().position(|s| s == x) {
            Some(0) => "X".to_string(),
            Some(k) => format!("X{k}"),
            None => unreachable!("variable of the rule"),
        }
    }
}

fn render_args(args: &[String]) -> String {
    if args.is_empty() {
        String::new()
    } else {
        format!("({})", args.join(","))
    }
}

fn render_fact<S: Scalar>(f: &GroundAtom<Value<S>>, pred: &str) -> String {
    let args: Vec<String> = f.args.iter().map(Value::mangled).collect();
    format!("{pred}{}", render_args(&args))
}

fn render_atom<S: Scalar>(a: &DAtom<Value<S>>, pred: &str, vars: &VarNames) -> String {
    let args: Vec<String> = a
        .args
        .iter()
        .map(|t| match t {
            DTerm::Var(x) => vars.get(x),
            DTerm::Const(c) => c.mangled(),
        })
        .collect();
    format!("{pred}{}", render_args(&args))
}

fn header<S: Scalar>(hp: &HammeredProgram<S>, problem: Option<&Problem<S>>, comment: &str) -> String {
    let mut out = String::new();
    let s = &hp.stats;
    let _ = writeln!(out, "{comment} rules: {}", s.rules);
    let _ = writeln!(out, "{comment} facts: {}", s.facts);
    let _ = writeln!(out, "{comment} max_testpoints: {}", s.max_testpoints);
    let _ = writeln!(out, "{comment} conjecture_body: {}", s.conjecture_body);
    if !hp.catalog.theory.is_empty() {
        let _ = writeln!(out, "{comment} theory predicates:");
        for tp in hp.catalog.theory.values() {
            let _ = writeln!(out, "{comment}   {}({}): {}", tp.name, tp.vars.join(","), tp.atom);
        }
    }
    if !hp.catalog.sorts.is_empty() {
        let _ = writeln!(out, "{comment} sort predicates:");
        for sp in hp.catalog.sorts.values() {
            let sort = problem.map_or_else(|| format!("#{}", sp.sort.0), |p| p.sort(sp.sort).name.clone());
            let _ = writeln!(out, "{comment}   {}: {} in {}", sp.name, sp.pos, sort);
        }
    }
    out
}

/// `head :- b1, ..., not bn.` rules in program order after sorted facts.
pub fn emit_datalog<S: Scalar>(hp: &HammeredProgram<S>, problem: Option<&Problem<S>>) -> String {
    let names = name_map(&hp.program);
    let mut out = header(hp, problem, "%");
    let mut facts: Vec<String> = hp.program.facts.iter().map(|f| render_fact(f, &names[&f.pred])).collect();
    facts.sort();
    for f in facts {
        let _ = writeln!(out, "{f}.");
    }
    for rule in &hp.program.rules {
        let vars = VarNames::of(rule);
        let head = render_atom(&rule.head, &names[&rule.head.pred], &vars);
        let body: Vec<String> = rule
            .pos
            .iter()
            .map(|a| render_atom(a, &names[&a.pred], &vars))
            .chain(rule.neg.iter().map(|a| format!("not {}", render_atom(a, &names[&a.pred], &vars))))
            .collect();
        if body.is_empty() {
            let _ = writeln!(out, "{head}.");
        } else {
            let _ = writeln!(out, "{head} :- {}.", body.join(", "));
        }
    }
    out
}

fn tptp_pred(name: &str) -> String {
    if name.starts_with(|c: char| c.is_ascii_lowercase()) {
        name.to_string()
    } else {
        format!("'{name}'")
    }
}

/// One `cnf` clause per fact and rule; goal rules become negative clauses.
pub fn emit_tptp<S: Scalar>(hp: &HammeredProgram<S>, problem: Option<&Problem<S>>) -> Result<String, EmitError> {
    if hp.program.has_negation() {
        return Err(EmitError::NegationNotRepresentable);
    }
    let names: BTreeMap<String, String> = name_map(&hp.program).into_iter().map(|(k, v)| (k, tptp_pred(&v))).collect();
    let mut out = header(hp, problem, "%");
    let mut facts: Vec<String> = hp.program.facts.iter().map(|f| render_fact(f, &names[&f.pred])).collect();
    facts.sort();
    for (k, f) in facts.iter().enumerate() {
        let _ = writeln!(out, "cnf(f{}, axiom, {f}).", k + 1);
    }
    for (k, rule) in hp.program.rules.iter().enumerate() {
        let vars = VarNames::of(rule);
        let mut lits: Vec<String> = rule.pos.iter().map(|a| format!("~{}", render_atom(a, &names[&a.pred], &vars))).collect();
        if rule.head.pred != GOAL {
            lits.push(render_atom(&rule.head, &names[&rule.head.pred], &vars));
        }
        let clause = match lits.len() {
            0 => "$false".to_string(),
            1 => lits.pop().unwrap(),
            _ => format!("({})", lits.join(" | ")),
        };
        let _ = writeln!(out, "cnf(r{}, axiom, {clause}).", k + 1);
    }
    Ok(out)
}

/// A constant read back from Datalog text.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Constant {
    Ident(String),
    Str(String),
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Ident(s) => f.write_str(s),
            Constant::Str(s) => write!(f, "\"{s}\""),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct DatalogParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
}

fn lex_datalog(text: &str) -> Result<Vec<(Tok, usize)>, DatalogParseError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let err = |msg: String| DatalogParseError { line: n + 1, msg };
        let mut chars = line.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            match c {
                '%' => break,
                c if c.is_whitespace() => {}
                '(' => out.push((Tok::LParen, n + 1)),
                ')' => out.push((Tok::RParen, n + 1)),
                ',' => out.push((Tok::Comma, n + 1)),
                '.' => out.push((Tok::Dot, n + 1)),
                ':' => match chars.next() {
                    Some((_, '-')) => out.push((Tok::If, n + 1)),
                    _ => return Err(err("expected `:-`".into())),
                },
                '"' => {
                    let mut s = String::new();
                    loop {
                        match chars.next() {
                            Some((_, '"')) => break,
                            Some((_, c)) => s.push(c),
                            None => return Err(err("unterminated string".into())),
                        }
                    }
                    out.push((Tok::Str(s), n + 1));
                }
                c if c.is_alphanumeric() || c == '_' => {
                    let mut end = i + c.len_utf8();
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_alphanumeric() || d == '_' {
                            end = j + d.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Ident(line[i..end].to_string()), n + 1));
                }
                c => return Err(err(format!("unexpected character `{c}`"))),
            }
        }
    }
    Ok(out)
}

struct DatalogParser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl DatalogParser {
    fn line(&self) -> usize {
        self.toks.get(self.at).or(self.toks.last()).map_or(0, |t| t.1)
    }

    fn err<T>(&self, msg: &str) -> Result<T, DatalogParseError> {
        Err(DatalogParseError { line: self.line(), msg: msg.to_string() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<DAtom<Constant>, DatalogParseError> {
        let Some(Tok::Ident(pred)) = self.peek().cloned() else { return self.err("expected a predicate") };
        self.at += 1;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let term = match self.peek().cloned() {
                    Some(Tok::Ident(s)) if s.starts_with(|c: char| c.is_uppercase()) => DTerm::Var(s),
                    Some(Tok::Ident(s)) => DTerm::Const(Constant::Ident(s)),
                    Some(Tok::Str(s)) => DTerm::Const(Constant::Str(s)),
                    _ => return self.err("expected a term"),
                };
                self.at += 1;
                args.push(term);
                if self.eat(&Tok::RParen) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return self.err("expected `,` or `)`");
                }
            }
        }
        Ok(DAtom::new(pred, args))
    }
}

/// Reads the Datalog dialect written by [`emit_datalog`]. Identifiers starting
/// with an upper-case letter are variables.
pub fn parse_datalog(text: &str) -> Result<Program<Constant>, DatalogParseError> {
    let mut p = DatalogParser { toks: lex_datalog(text)?, at: 0 };
    let mut program = Program::default();
    while p.peek().is_some() {
        let head = p.atom()?;
        let mut rule = Rule { head, pos: vec![], neg: vec![] };
        if p.eat(&Tok::If) {
            loop {
                let negated = matches!(p.peek(), Some(Tok::Ident(s)) if s == "not")
                    && matches!(p.toks.get(p.at + 1).map(|t| &t.0), Some(Tok::Ident(_)));
                if negated {
                    p.at += 1;
                }
                let atom = p.atom()?;
                if negated {
                    rule.neg.push(atom);
                } else {
                    rule.pos.push(atom);
                }
                if !p.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        if !p.eat(&Tok::Dot) {
            return p.err("expected `.`");
        }
        let ground: Option<Vec<Constant>> = rule
            .head
            .args
            .iter()
            .map(|t| match t {
                DTerm::Const(c) => Some(c.clone()),
                DTerm::Var(_) => None,
            })
            .collect();
        match ground {
            Some(args) if rule.pos.is_empty() && rule.neg.is_empty() => {
                program.facts.insert(GroundAtom { pred: rule.head.pred, args });
            }
            _ => program.rules.push(rule),
        }
    }
    Ok(program)
}
