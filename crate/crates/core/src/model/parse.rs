//! Parser for the problem language.
//!
//! ```text
//! sort Gear = { low, high }.
//! pred SpeedTable(Real, Real, Real).
//! clause SpeedTable(0, 2000, 1350).
//! clause x1 <= xp, xp < x2 || Speed(xp), SpeedTable(x1, x2, y) -> IgnDeg(xp, y).
//! clause xp < 0 || -> false.
//! conjecture forall xp. Conj(xp).
//! ```

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{
    is_reserved, Atom, Conjecture, HornClause, LinearAtom, Problem, Quantifier, Rel, Sort,
    SortId, SortKind, Term, INT, REAL,
};
use crate::num::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    Lexical(char),
    #[error("{0}")]
    Syntax(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{pred}` expects {expected} arguments, found {found}")]
    ArityMismatch { pred: String, expected: usize, found: usize },
    #[error("ill-sorted: {0}")]
    IllSorted(String),
    #[error("arithmetic positions only admit numbers, found constant `{0}`")]
    Impure(String),
    #[error("name `{0}` uses a reserved prefix")]
    Reserved(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
    #[error("finite sort `{0}` has no members")]
    EmptySort(String),
    #[error("only single-atom conjectures are supported; define the conjunction by a clause over a fresh predicate and conjecture that predicate instead")]
    CompoundConjecture,
    #[error("{0}")]
    Conjecture(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Bar2,
    Arrow,
    Plus,
    Minus,
    Star,
    Rel(Rel),
    Assign,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned { tok, line: l0, col: c0 });
            *i += len;
            *col += len;
        };
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '|' if next == Some('|') => push(Tok::Bar2, 2, &mut i, &mut col),
            '-' if next == Some('>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '<' if next == Some('=') => push(Tok::Rel(Rel::Le), 2, &mut i, &mut col),
            '<' => push(Tok::Rel(Rel::Lt), 1, &mut i, &mut col),
            '>' if next == Some('=') => push(Tok::Rel(Rel::Ge), 2, &mut i, &mut col),
            '>' => push(Tok::Rel(Rel::Gt), 1, &mut i, &mut col),
            '!' if next == Some('=') => push(Tok::Rel(Rel::Ne), 2, &mut i, &mut col),
            '=' => push(Tok::Assign, 1, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned { tok: Tok::Number(s), line: l0, col: c0 });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned { tok: Tok::Ident(s), line: l0, col: c0 });
            }
            other => {
                return Err(ParseError { line, col, kind: ParseErrorKind::Lexical(other) });
            }
        }
    }
    Ok(out)
}

/// Raw atom argument before it is resolved to a variable or constant.
#[derive(Clone, Debug)]
enum RawArg {
    Ident(String),
    Number(String, bool),
}

#[derive(Clone, Debug)]
struct RawAtom {
    pred: String,
    args: Vec<(RawArg, usize, usize)>,
    line: usize,
    col: usize,
}

/// Sort and (line, column) of every occurrence of a variable in a clause.
type VarUses = BTreeMap<String, Vec<(SortId, (usize, usize))>>;

struct Parser<'a, S> {
    toks: &'a [Spanned],
    at: usize,
    problem: Problem<S>,
    end: (usize, usize),
}

type PResult<T> = Result<T, ParseError>;

/// Parses problem text into a sorted, validated [`Problem`].
///
/// Theory atoms are brought into normal form (`Σ cᵢxᵢ rel k`, leading
/// coefficient positive); no abstraction or repair happens here.
pub fn parse_problem<S: Scalar>(text: &str) -> Result<Problem<S>, ParseError> {
    let toks = lex(text)?;
    let end = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    let mut parser = Parser { toks: &toks, at: 0, problem: Problem::default(), end };
    while parser.at < toks.len() {
        parser.statement()?;
    }
    Ok(parser.problem)
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.at).map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn err_at<T>(&self, (line, col): (usize, usize), kind: ParseErrorKind) -> PResult<T> {
        Err(ParseError { line, col, kind })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let found = match self.peek() {
            Some(t) => format!("{t:?}"),
            None => "end of input".to_string(),
        };
        self.err_at(self.here(), ParseErrorKind::Syntax(format!("{}, found {found}", msg.into())))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, (usize, usize))> {
        let pos = self.here();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok((s, pos))
            }
            _ => self.syntax(format!("expected {what}")),
        }
    }

    fn unreserved(&self, name: &str, pos: (usize, usize)) -> PResult<()> {
        if is_reserved(name) {
            self.err_at(pos, ParseErrorKind::Reserved(name.to_string()))
        } else {
            Ok(())
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let (kw, pos) = self.ident("`sort`, `pred`, `clause` or `conjecture`")?;
        match kw.as_str() {
            "sort" => self.sort_decl(),
            "pred" => self.pred_decl(),
            "clause" => self.clause(),
            "conjecture" => self.conjecture(pos),
            _ => {
                self.at -= 1;
                self.syntax("expected `sort`, `pred`, `clause` or `conjecture`")
            }
        }
    }

    fn sort_decl(&mut self) -> PResult<()> {
        let (name, pos) = self.ident("sort name")?;
        self.unreserved(&name, pos)?;
        if self.problem.sort_id(&name).is_some() {
            return self.err_at(pos, ParseErrorKind::Duplicate(name));
        }
        self.expect(Tok::Assign, "`=`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut members = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                let (m, mpos) = self.ident("sort member")?;
                self.unreserved(&m, mpos)?;
                let taken = self.problem.sorts.iter().any(|s| s.members.contains(&m))
                    || members.contains(&m);
                if taken {
                    return self.err_at(mpos, ParseErrorKind::Duplicate(m));
                }
                members.push(m);
                if self.eat(&Tok::RBrace) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `}`")?;
            }
        }
        self.expect(Tok::Dot, "`.`")?;
        if members.is_empty() {
            return self.err_at(pos, ParseErrorKind::EmptySort(name));
        }
        self.problem.sorts.push(Sort { name, kind: SortKind::Finite, members });
        Ok(())
    }

    fn pred_decl(&mut self) -> PResult<()> {
        let (name, pos) = self.ident("predicate name")?;
        self.unreserved(&name, pos)?;
        if self.problem.pred(&name).is_some() {
            return self.err_at(pos, ParseErrorKind::Duplicate(name));
        }
        let mut sorts = Vec::new();
        if self.eat(&Tok::LParen) && !self.eat(&Tok::RParen) {
            loop {
                let (s, spos) = self.ident("sort name")?;
                match self.problem.sort_id(&s) {
                    Some(id) => sorts.push(id),
                    None => return self.err_at(spos, ParseErrorKind::UnknownSort(s)),
                }
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `)`")?;
            }
        }
        self.expect(Tok::Dot, "`.`")?;
        self.problem.declare_pred(name, sorts);
        Ok(())
    }

    fn find_top_level(&self, tok: &Tok) -> Option<usize> {
        self.toks[self.at..]
            .iter()
            .take_while(|t| t.tok != Tok::Dot)
            .position(|t| &t.tok == tok)
            .map(|k| self.at + k)
    }

    fn clause(&mut self) -> PResult<()> {
        let bar = self.find_top_level(&Tok::Bar2);
        let arrow = self.find_top_level(&Tok::Arrow);
        let mut theory = Vec::new();
        let mut body = Vec::new();
        let head;
        if bar.is_some() || arrow.is_some() {
            if bar.is_some() {
                if self.peek() != Some(&Tok::Bar2) {
                    loop {
                        theory.push(self.theory_atom()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::Bar2, "`||`")?;
            }
            if self.peek() != Some(&Tok::Arrow) {
                loop {
                    body.push(self.raw_atom()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            self.expect(Tok::Arrow, "`->`")?;
            if matches!(self.peek(), Some(Tok::Ident(s)) if s == "false") {
                self.at += 1;
                head = None;
            } else {
                head = Some(self.raw_atom()?);
            }
        } else {
            head = Some(self.raw_atom()?);
        }
        self.expect(Tok::Dot, "`.`")?;
        let clause = self.resolve_clause(theory, body, head)?;
        self.problem.clauses.push(clause);
        Ok(())
    }

    fn raw_atom(&mut self) -> PResult<RawAtom> {
        let (pred, pos) = self.ident("atom")?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) && !self.eat(&Tok::RParen) {
            loop {
                let apos = self.here();
                let negative = self.eat(&Tok::Minus);
                match self.peek().cloned() {
                    Some(Tok::Number(n)) => {
                        self.at += 1;
                        args.push((RawArg::Number(n, negative), apos.0, apos.1));
                    }
                    Some(Tok::Ident(s)) if !negative => {
                        self.at += 1;
                        args.push((RawArg::Ident(s), apos.0, apos.1));
                    }
                    _ => return self.syntax("expected term"),
                }
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `)`")?;
            }
        }
        Ok(RawAtom { pred, args, line: pos.0, col: pos.1 })
    }

    fn number(&self, text: &str, pos: (usize, usize)) -> PResult<S> {
        match S::parse_decimal(text) {
            Some(v) => Ok(v),
            None => self.err_at(pos, ParseErrorKind::Syntax(format!("malformed number `{text}`"))),
        }
    }

    /// `lin rel lin` in normal form, with the position where it starts.
    fn theory_atom(&mut self) -> PResult<(LinearAtom<S>, (usize, usize))> {
        let pos = self.here();
        let (lhs, lk) = self.lin_term()?;
        let rel = match self.peek() {
            Some(Tok::Rel(r)) => *r,
            Some(Tok::Assign) => Rel::Eq,
            _ => return self.syntax("expected relation"),
        };
        self.at += 1;
        let (rhs, rk) = self.lin_term()?;
        let mut combo = lhs;
        for (x, c) in rhs {
            let e = combo.entry(x).or_insert_with(S::zero);
            *e = e.clone() - c;
        }
        Ok((LinearAtom::new(combo, rel, rk - lk).normalized(), pos))
    }

    fn lin_term(&mut self) -> PResult<(BTreeMap<String, S>, S)> {
        let mut combo: BTreeMap<String, S> = BTreeMap::new();
        let mut constant = S::zero();
        let mut negative = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        loop {
            let pos = self.here();
            let sign = if negative { -S::one() } else { S::one() };
            match self.peek().cloned() {
                Some(Tok::Number(n)) => {
                    self.at += 1;
                    let v = self.number(&n, pos)?;
                    if self.eat(&Tok::Star) {
                        let (x, xpos) = self.ident("variable after `*`")?;
                        self.unreserved(&x, xpos)?;
                        let e = combo.entry(x).or_insert_with(S::zero);
                        *e = e.clone() + sign * v;
                    } else {
                        constant = constant + sign * v;
                    }
                }
                Some(Tok::Ident(x)) => {
                    self.at += 1;
                    self.unreserved(&x, pos)?;
                    let e = combo.entry(x).or_insert_with(S::zero);
                    *e = e.clone() + sign;
                }
                _ => return self.syntax("expected number or variable"),
            }
            negative = if self.eat(&Tok::Minus) {
                true
            } else if self.eat(&Tok::Plus) {
                false
            } else {
                break;
            };
        }
        Ok((combo, constant))
    }

    fn conjecture(&mut self, start: (usize, usize)) -> PResult<()> {
        if self.problem.conjecture.is_some() {
            return self.err_at(start, ParseErrorKind::Conjecture("only one conjecture is allowed".into()));
        }
        let (q, _) = self.ident("`forall` or `exists`")?;
        let quantifier = match q.as_str() {
            "forall" => Quantifier::Forall,
            "exists" => Quantifier::Exists,
            _ => {
                self.at -= 1;
                return self.syntax("expected `forall` or `exists`");
            }
        };
        let mut vars: Vec<String> = Vec::new();
        if !self.eat(&Tok::Dot) {
            loop {
                let (v, vpos) = self.ident("variable")?;
                self.unreserved(&v, vpos)?;
                if vars.contains(&v) {
                    return self.err_at(vpos, ParseErrorKind::Conjecture(format!("variable `{v}` quantified twice")));
                }
                vars.push(v);
                if self.eat(&Tok::Dot) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `.`")?;
            }
        }
        let raw = self.raw_atom()?;
        match self.peek() {
            Some(Tok::Dot) => self.at += 1,
            Some(Tok::Comma | Tok::Arrow | Tok::Bar2) => {
                return self.err_at(self.here(), ParseErrorKind::CompoundConjecture)
            }
            _ => return self.syntax("expected `.`"),
        }
        let mut seen = BTreeSet::new();
        for (arg, line, col) in &raw.args {
            if let RawArg::Ident(name) = arg {
                if self.member_sort(name).is_none() {
                    if !vars.contains(name) {
                        return self.err_at((*line, *col), ParseErrorKind::Conjecture(format!("variable `{name}` is not quantified")));
                    }
                    if !seen.insert(name.clone()) {
                        return self.err_at((*line, *col), ParseErrorKind::Conjecture("conjecture variables must be distinct".into()));
                    }
                    continue;
                }
            }
            if quantifier == Quantifier::Forall {
                return self.err_at((*line, *col), ParseErrorKind::Conjecture("universal conjectures take distinct variables only".into()));
            }
        }
        if let Some(unused) = vars.iter().find(|v| !seen.contains(*v)) {
            return self.err_at(start, ParseErrorKind::Conjecture(format!("quantified variable `{unused}` does not occur in the atom")));
        }
        let mut uses = BTreeMap::new();
        let atom = self.resolve_atom(&raw, &mut uses)?;
        self.problem.conjecture = Some(Conjecture { quantifier, vars, atom });
        Ok(())
    }

    fn member_sort(&self, name: &str) -> Option<SortId> {
        self.problem
            .sorts
            .iter()
            .position(|s| s.members.iter().any(|m| m == name))
            .map(SortId)
    }

    /// Resolves arguments and records, per variable, the sorts of its positions.
    fn resolve_atom(
        &self,
        raw: &RawAtom,
        uses: &mut VarUses,
    ) -> PResult<Atom<S>> {
        let Some(sig) = self.problem.pred(&raw.pred) else {
            return self.err_at((raw.line, raw.col), ParseErrorKind::UnknownPredicate(raw.pred.clone()));
        };
        if sig.arity() != raw.args.len() {
            return self.err_at(
                (raw.line, raw.col),
                ParseErrorKind::ArityMismatch { pred: raw.pred.clone(), expected: sig.arity(), found: raw.args.len() },
            );
        }
        let mut args = Vec::new();
        for ((arg, line, col), &sort_id) in raw.args.iter().zip(&sig.arg_sorts) {
            let pos = (*line, *col);
            let sort = self.problem.sort(sort_id);
            let term = match arg {
                RawArg::Number(text, negative) => {
                    let mut v = self.number(text, pos)?;
                    if *negative {
                        v = -v;
                    }
                    match sort.kind {
                        SortKind::Finite => {
                            return self.err_at(pos, ParseErrorKind::IllSorted(format!("number {text} at a `{}` position", sort.name)))
                        }
                        SortKind::Int if !v.is_integer() => {
                            return self.err_at(pos, ParseErrorKind::IllSorted(format!("non-integer {v} at an Int position")))
                        }
                        _ => Term::Num(v),
                    }
                }
                RawArg::Ident(name) => match self.member_sort(name) {
                    Some(member_of) => {
                        if sort.kind != SortKind::Finite {
                            return self.err_at(pos, ParseErrorKind::Impure(name.clone()));
                        }
                        if member_of != sort_id {
                            return self.err_at(pos, ParseErrorKind::IllSorted(format!("`{name}` is not a member of `{}`", sort.name)));
                        }
                        Term::Fo(name.clone())
                    }
                    None => {
                        self.unreserved(name, pos)?;
                        uses.entry(name.clone()).or_default().push((sort_id, pos));
                        Term::Var(name.clone())
                    }
                },
            };
            args.push(term);
        }
        Ok(Atom { pred: raw.pred.clone(), args })
    }

    fn resolve_clause(
        &self,
        theory: Vec<(LinearAtom<S>, (usize, usize))>,
        body: Vec<RawAtom>,
        head: Option<RawAtom>,
    ) -> PResult<HornClause<S>> {
        let mut uses: VarUses = BTreeMap::new();
        let body = body
            .iter()
            .map(|a| self.resolve_atom(a, &mut uses))
            .collect::<PResult<Vec<_>>>()?;
        let head = head.as_ref().map(|a| self.resolve_atom(a, &mut uses)).transpose()?;
        let mut var_sorts = BTreeMap::new();
        for (var, occurrences) in &uses {
            let finite: BTreeSet<SortId> = occurrences
                .iter()
                .map(|(s, _)| *s)
                .filter(|s| self.problem.sort(*s).kind == SortKind::Finite)
                .collect();
            let sort = if let Some(&f) = finite.iter().next() {
                if finite.len() > 1 || occurrences.len() != occurrences.iter().filter(|(s, _)| *s == f).count() {
                    let pos = occurrences[0].1;
                    return self.err_at(pos, ParseErrorKind::IllSorted(format!("variable `{var}` is used at positions of different sorts")));
                }
                f
            } else if occurrences.iter().any(|(s, _)| *s == INT) {
                INT
            } else {
                REAL
            };
            var_sorts.insert(var.clone(), sort);
        }
        let mut atoms = Vec::new();
        for (atom, pos) in theory {
            for x in atom.vars() {
                if self.member_sort(x).is_some() {
                    return self.err_at(pos, ParseErrorKind::Impure(x.to_string()));
                }
                match var_sorts.get(x) {
                    Some(&s) if self.problem.sort(s).kind == SortKind::Finite => {
                        return self.err_at(pos, ParseErrorKind::IllSorted(format!("variable `{x}` of sort `{}` in a theory atom", self.problem.sort(s).name)));
                    }
                    Some(_) => {}
                    None => {
                        var_sorts.insert(x.to_string(), REAL);
                    }
                }
            }
            atoms.push(atom);
        }
        Ok(HornClause { theory: atoms, body, head, var_sorts })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Pos;
    use num_rational::Rational64;

    type P = Problem<Rational64>;

    fn q(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    const HEADER: &str = "pred SpeedTable(Real, Real, Real). pred Speed(Real).\n";

    #[test]
    fn fact_clause() {
        let p: P = parse_problem(&format!("{HEADER}clause SpeedTable(0,2000,1350).")).unwrap();
        let c = &p.clauses[0];
        assert!(c.theory.is_empty() && c.body.is_empty());
        let head = c.head.as_ref().unwrap();
        assert_eq!(head.args, vec![Term::Num(q(0)), Term::Num(q(2000)), Term::Num(q(1350))]);
    }

    #[test]
    fn theory_only_clause() {
        let p: P = parse_problem(&format!("{HEADER}clause 0 <= xp, xp < 8000 || -> Speed(xp).")).unwrap();
        let c = &p.clauses[0];
        assert_eq!(c.theory.len(), 2);
        // 0 <= xp normalizes to xp >= 0
        assert_eq!(c.theory[0], LinearAtom::simple("xp", Rel::Ge, q(0)));
        assert_eq!(c.theory[1], LinearAtom::simple("xp", Rel::Lt, q(8000)));
        assert!(c.body.is_empty());
        assert_eq!(c.var_sorts["xp"], REAL);
    }

    #[test]
    fn empty_problem() {
        let p: P = parse_problem("% nothing\npred P(Int).").unwrap();
        assert!(p.clauses.is_empty());
        assert_eq!(p.positions().collect::<Vec<_>>(), vec![Pos::new("P", 0)]);
    }

    #[test]
    fn linear_terms_collect_coefficients() {
        let p: P = parse_problem("pred P(Real, Real). clause x + x - 3 < y + 1.5 || P(x, y) -> false.").unwrap();
        let atom = &p.clauses[0].theory[0];
        assert_eq!(atom.combo["x"], q(2));
        assert_eq!(atom.combo["y"], q(-1));
        assert_eq!(atom.bound, Rational64::new(9, 2));
        assert_eq!(atom.rel, Rel::Lt);
    }

    #[test]
    fn negative_leading_coefficient_flips() {
        let p: P = parse_problem("pred P(Real). clause -2*x < 6 || P(x) -> false.").unwrap();
        let atom = &p.clauses[0].theory[0];
        assert_eq!(atom.combo["x"], q(2));
        assert_eq!(atom.rel, Rel::Gt);
        assert_eq!(atom.bound, q(-6));
    }

    #[test]
    fn sort_inference() {
        let p: P = parse_problem(
            "sort F = {a, b}. pred P(Int, F). pred Q(Real). clause P(x, u), Q(x) -> Q(y).",
        )
        .unwrap();
        let c = &p.clauses[0];
        assert_eq!(c.var_sorts["x"], INT);
        assert_eq!(c.var_sorts["y"], REAL);
        assert_eq!(p.sort(c.var_sorts["u"]).name, "F");
    }

    fn err(text: &str) -> ParseErrorKind {
        parse_problem::<Rational64>(text).unwrap_err().kind
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(err("pred P(Real). clause Q(1)."), ParseErrorKind::UnknownPredicate(_)));
        assert!(matches!(err("pred P(Real). clause P(1, 2)."), ParseErrorKind::ArityMismatch { .. }));
        assert!(matches!(err("pred P(Foo)."), ParseErrorKind::UnknownSort(_)));
        assert!(matches!(err("pred P(Int). clause P(0.5)."), ParseErrorKind::IllSorted(_)));
        assert!(matches!(err("sort F = {a}. pred P(Real). clause P(a)."), ParseErrorKind::Impure(_)));
        assert!(matches!(err("pred __goal(Real)."), ParseErrorKind::Reserved(_)));
        assert!(matches!(err("pred P(Real). clause P(__abs1)."), ParseErrorKind::Reserved(_)));
        assert!(matches!(err("sort F = {}."), ParseErrorKind::EmptySort(_)));
        assert!(matches!(err("sort F = {a}. sort G = {a}."), ParseErrorKind::Duplicate(_)));
        assert!(matches!(
            err("pred P(Real). pred Q(Real). conjecture forall x. P(x), Q(x)."),
            ParseErrorKind::CompoundConjecture
        ));
        assert!(matches!(err("pred P(Real, Real). conjecture forall x. P(x, x)."), ParseErrorKind::Conjecture(_)));
        assert!(matches!(err("pred P(Real). conjecture forall x. P(3)."), ParseErrorKind::Conjecture(_)));
        assert!(matches!(err("sort F = {a}. pred P(F). clause u < 1 || P(u) -> false."), ParseErrorKind::IllSorted(_)));
        assert!(matches!(err("pred P(Real). clause P(1) @"), ParseErrorKind::Lexical('@')));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_problem::<Rational64>("pred P(Real).\nclause P(1,\n  2).").unwrap_err();
        assert_eq!((e.line, e.col), (2, 8));
        let e = parse_problem::<Rational64>("pred P(Real).\nclause P(1)").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn conjectures() {
        let p: P = parse_problem("pred P(Real). conjecture forall x. P(x).").unwrap();
        let c = p.conjecture.unwrap();
        assert_eq!(c.quantifier, Quantifier::Forall);
        assert_eq!(c.vars, vec!["x".to_string()]);
        let p: P = parse_problem("pred P(Real, Real). conjecture exists x. P(x, 2).").unwrap();
        assert_eq!(p.conjecture.unwrap().atom.args[1], Term::Num(q(2)));
        let p: P = parse_problem("pred G(). conjecture exists . G().").unwrap();
        assert!(p.conjecture.unwrap().atom.args.is_empty());
    }

    #[test]
    fn nullary_atoms_without_parens() {
        let p: P = parse_problem("pred G(). pred P(Real). clause x > 0 || P(x) -> G.").unwrap();
        assert_eq!(p.clauses[0].head.as_ref().unwrap().pred, "G");
    }
}
