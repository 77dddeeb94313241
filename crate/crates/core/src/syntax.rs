//! Formula and query syntax: the proposition alphabet, the two ASTs
//! (`Formula` without the placeholder, `Query` with it), a concrete-text
//! parser/printer, positive normal form, polarity analysis, the
//! empty-stream projection, and placeholder substitution.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::prop::PropClass;

/// Keywords of the concrete grammar; proposition names must avoid them.
const RESERVED: [&str; 9] = ["true", "false", "var", "X", "WX", "U", "R", "F", "G"];

/// Engine-wide ceiling on alphabet size: classes are 2^|AP|-bit tables.
pub const MAX_PROPS: usize = 26;

/// Ordered set of proposition names. Indices are stable and shared by
/// assignments, classes, and streams built over the same alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_prop_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Arc<Alphabet>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_PROPS {
            return Err(Error::TooManyProps { len: names.len(), cap: MAX_PROPS });
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_prop_name(name) {
                return Err(Error::InvalidPropName {
                    name: name.clone(),
                    reason: "must match [A-Za-z_][A-Za-z0-9_]*",
                });
            }
            if RESERVED.contains(&name.as_str()) {
                return Err(Error::InvalidPropName {
                    name: name.clone(),
                    reason: "collides with a grammar keyword",
                });
            }
            if names[..i].contains(name) {
                return Err(Error::DuplicateProp(name.clone()));
            }
        }
        Ok(Arc::new(Alphabet { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of distinct assignments, `2^|AP|`.
    pub fn assignment_count(&self) -> usize {
        1usize << self.names.len()
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> {
        (0..self.assignment_count() as u32).map(Assignment::from_bits)
    }
}

/// One observation: the set of propositions that hold at an instant,
/// packed as a bit per alphabet index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(u32);

impl Assignment {
    pub const EMPTY: Assignment = Assignment(0);

    pub fn from_bits(bits: u32) -> Assignment {
        Assignment(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Row index of this assignment in a truth table over its alphabet.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, prop: usize) -> bool {
        self.0 >> prop & 1 == 1
    }

    pub fn with(self, prop: usize) -> Assignment {
        Assignment(self.0 | 1 << prop)
    }

    /// Re-encodes the assignment over a sub-alphabet. Every name of `to`
    /// must exist in `from`.
    pub fn project(self, from: &Alphabet, to: &Alphabet) -> Result<Assignment> {
        let mut bits = 0u32;
        for (j, name) in to.names().iter().enumerate() {
            let i = from
                .index_of(name)
                .ok_or_else(|| Error::UnknownProp(name.clone()))?;
            if self.contains(i) {
                bits |= 1 << j;
            }
        }
        Ok(Assignment(bits))
    }

    /// `{a, c}`-style rendering used in state tags and error messages.
    pub fn render(self, alphabet: &Alphabet) -> String {
        let held: Vec<&str> = (0..alphabet.len())
            .filter(|&i| self.contains(i))
            .map(|i| alphabet.name(i))
            .collect();
        format!("{{{}}}", held.join(","))
    }
}

/// Temporal query over finite streams. `Var` is the single solution
/// placeholder; a query without it is convertible to [`Formula`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Query {
    True,
    False,
    Atom(Arc<str>),
    Var,
    Not(Arc<Query>),
    And(Arc<Query>, Arc<Query>),
    Or(Arc<Query>, Arc<Query>),
    Next(Arc<Query>),
    WeakNext(Arc<Query>),
    Until(Arc<Query>, Arc<Query>),
    Release(Arc<Query>, Arc<Query>),
}

/// Occurrence parity of the placeholder inside a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
    Mixed,
    Absent,
}

impl Polarity {
    fn join(self, other: Polarity) -> Polarity {
        use Polarity::*;
        match (self, other) {
            (Absent, p) | (p, Absent) => p,
            (a, b) if a == b => a,
            _ => Mixed,
        }
    }
}

impl Query {
    pub fn atom(name: &str) -> Query {
        Query::Atom(Arc::from(name))
    }

    pub fn not(q: Query) -> Query {
        Query::Not(Arc::new(q))
    }

    pub fn and(l: Query, r: Query) -> Query {
        Query::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Query, r: Query) -> Query {
        Query::Or(Arc::new(l), Arc::new(r))
    }

    pub fn next(q: Query) -> Query {
        Query::Next(Arc::new(q))
    }

    pub fn weak_next(q: Query) -> Query {
        Query::WeakNext(Arc::new(q))
    }

    pub fn until(l: Query, r: Query) -> Query {
        Query::Until(Arc::new(l), Arc::new(r))
    }

    pub fn release(l: Query, r: Query) -> Query {
        Query::Release(Arc::new(l), Arc::new(r))
    }

    /// `l -> r` is `!l | r`.
    pub fn implies(l: Query, r: Query) -> Query {
        Query::or(Query::not(l), r)
    }

    /// `F q` is `true U q`.
    pub fn eventually(q: Query) -> Query {
        Query::until(Query::True, q)
    }

    /// `G q` is `!(true U !q)`.
    pub fn always(q: Query) -> Query {
        Query::not(Query::until(Query::True, Query::not(q)))
    }

    pub fn has_var(&self) -> bool {
        match self {
            Query::Var => true,
            Query::True | Query::False | Query::Atom(_) => false,
            Query::Not(q) | Query::Next(q) | Query::WeakNext(q) => q.has_var(),
            Query::And(l, r)
            | Query::Or(l, r)
            | Query::Until(l, r)
            | Query::Release(l, r) => l.has_var() || r.has_var(),
        }
    }

    /// True when no temporal operator occurs.
    pub fn is_propositional(&self) -> bool {
        match self {
            Query::True | Query::False | Query::Atom(_) | Query::Var => true,
            Query::Not(q) => q.is_propositional(),
            Query::And(l, r) | Query::Or(l, r) => {
                l.is_propositional() && r.is_propositional()
            }
            Query::Next(_) | Query::WeakNext(_) | Query::Until(_, _) | Query::Release(_, _) => {
                false
            }
        }
    }

    /// True when negation is applied to atoms and `var` only.
    pub fn is_pnf(&self) -> bool {
        match self {
            Query::True | Query::False | Query::Atom(_) | Query::Var => true,
            Query::Not(q) => matches!(**q, Query::Atom(_) | Query::Var),
            Query::Next(q) | Query::WeakNext(q) => q.is_pnf(),
            Query::And(l, r)
            | Query::Or(l, r)
            | Query::Until(l, r)
            | Query::Release(l, r) => l.is_pnf() && r.is_pnf(),
        }
    }

    /// Distinct atom names, sorted.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        fn collect(q: &Query, out: &mut BTreeSet<Arc<str>>) {
            match q {
                Query::Atom(name) => {
                    out.insert(name.clone());
                }
                Query::True | Query::False | Query::Var => {}
                Query::Not(q) | Query::Next(q) | Query::WeakNext(q) => collect(q, out),
                Query::And(l, r)
                | Query::Or(l, r)
                | Query::Until(l, r)
                | Query::Release(l, r) => {
                    collect(l, out);
                    collect(r, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        collect(self, &mut out);
        out
    }

    /// Errors with the first atom not present in `alphabet`.
    pub fn check_atoms(&self, alphabet: &Alphabet) -> Result<()> {
        for name in self.atoms() {
            if alphabet.index_of(&name).is_none() {
                return Err(Error::UnknownProp(name.to_string()));
            }
        }
        Ok(())
    }

    /// Positive normal form: negation pushed onto atoms and `var` via the
    /// dualities `!X = WX !`, `!(p U q) = !p R !q` and De Morgan.
    pub fn to_pnf(&self) -> Query {
        fn go(q: &Query, negated: bool) -> Query {
            match q {
                Query::True => {
                    if negated {
                        Query::False
                    } else {
                        Query::True
                    }
                }
                Query::False => {
                    if negated {
                        Query::True
                    } else {
                        Query::False
                    }
                }
                Query::Atom(_) | Query::Var => {
                    if negated {
                        Query::not(q.clone())
                    } else {
                        q.clone()
                    }
                }
                Query::Not(inner) => go(inner, !negated),
                Query::And(l, r) => {
                    if negated {
                        Query::or(go(l, true), go(r, true))
                    } else {
                        Query::and(go(l, false), go(r, false))
                    }
                }
                Query::Or(l, r) => {
                    if negated {
                        Query::and(go(l, true), go(r, true))
                    } else {
                        Query::or(go(l, false), go(r, false))
                    }
                }
                Query::Next(inner) => {
                    if negated {
                        Query::weak_next(go(inner, true))
                    } else {
                        Query::next(go(inner, false))
                    }
                }
                Query::WeakNext(inner) => {
                    if negated {
                        Query::next(go(inner, true))
                    } else {
                        Query::weak_next(go(inner, false))
                    }
                }
                Query::Until(l, r) => {
                    if negated {
                        Query::release(go(l, true), go(r, true))
                    } else {
                        Query::until(go(l, false), go(r, false))
                    }
                }
                Query::Release(l, r) => {
                    if negated {
                        Query::until(go(l, true), go(r, true))
                    } else {
                        Query::release(go(l, false), go(r, false))
                    }
                }
            }
        }
        go(self, false)
    }

    /// Placeholder occurrence parity; `->` contributes its left-side
    /// negation because it is desugared before this runs.
    pub fn polarity(&self) -> Polarity {
        fn go(q: &Query, odd: bool) -> Polarity {
            match q {
                Query::Var => {
                    if odd {
                        Polarity::Negative
                    } else {
                        Polarity::Positive
                    }
                }
                Query::True | Query::False | Query::Atom(_) => Polarity::Absent,
                Query::Not(inner) => go(inner, !odd),
                Query::Next(inner) | Query::WeakNext(inner) => go(inner, odd),
                Query::And(l, r)
                | Query::Or(l, r)
                | Query::Until(l, r)
                | Query::Release(l, r) => go(l, odd).join(go(r, odd)),
            }
        }
        go(self, false)
    }

    /// Propositional query equivalent to `self` on the empty stream:
    /// `X _` becomes `false`, `WX _` becomes `true`, `U`/`R` keep only
    /// their right argument. Requires positive normal form.
    pub fn eps_projection(&self) -> Result<Query> {
        match self {
            Query::True | Query::False | Query::Atom(_) | Query::Var => Ok(self.clone()),
            Query::Not(inner) => match **inner {
                Query::Atom(_) | Query::Var => Ok(self.clone()),
                _ => Err(Error::NotInPnf),
            },
            Query::And(l, r) => Ok(Query::and(l.eps_projection()?, r.eps_projection()?)),
            Query::Or(l, r) => Ok(Query::or(l.eps_projection()?, r.eps_projection()?)),
            Query::Next(_) => Ok(Query::False),
            Query::WeakNext(_) => Ok(Query::True),
            Query::Until(_, r) | Query::Release(_, r) => r.eps_projection(),
        }
    }

    /// Replaces every `var` with the canonical disjunctive normal form of
    /// `class`. Errors if an atom of `self` is outside the class alphabet.
    pub fn substitute(&self, class: &PropClass) -> Result<Formula> {
        self.check_atoms(class.alphabet())?;
        let replacement = class.to_formula();
        fn go(q: &Query, replacement: &Query) -> Query {
            match q {
                Query::Var => replacement.clone(),
                Query::True | Query::False | Query::Atom(_) => q.clone(),
                Query::Not(inner) => Query::not(go(inner, replacement)),
                Query::And(l, r) => Query::and(go(l, replacement), go(r, replacement)),
                Query::Or(l, r) => Query::or(go(l, replacement), go(r, replacement)),
                Query::Next(inner) => Query::next(go(inner, replacement)),
                Query::WeakNext(inner) => Query::weak_next(go(inner, replacement)),
                Query::Until(l, r) => Query::until(go(l, replacement), go(r, replacement)),
                Query::Release(l, r) => Query::release(go(l, replacement), go(r, replacement)),
            }
        }
        let out = go(self, replacement.as_query());
        Ok(Formula(out))
    }

    pub fn into_formula(self) -> Result<Formula> {
        if self.has_var() {
            Err(Error::VarNotAllowed)
        } else {
            Ok(Formula(self))
        }
    }
}

/// Temporal formula: a [`Query`] guaranteed to contain no placeholder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula(Query);

impl Formula {
    pub const TRUE: Formula = Formula(Query::True);
    pub const FALSE: Formula = Formula(Query::False);

    pub fn as_query(&self) -> &Query {
        &self.0
    }

    pub fn into_query(self) -> Query {
        self.0
    }

    pub fn to_pnf(&self) -> Formula {
        Formula(self.0.to_pnf())
    }

    pub fn is_pnf(&self) -> bool {
        self.0.is_pnf()
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        self.0.atoms()
    }
}

impl TryFrom<Query> for Formula {
    type Error = Error;

    fn try_from(q: Query) -> Result<Formula> {
        q.into_formula()
    }
}

impl From<Formula> for Query {
    fn from(f: Formula) -> Query {
        f.0
    }
}

// ---------------------------------------------------------------------------
// Printing. Binding strength: unary > U = R > & > | ; `U`/`R` associate to
// the right, `&`/`|` to the left. `->`, `F`, `G` never occur in an AST.

fn prec(q: &Query) -> u8 {
    match q {
        Query::Or(_, _) => 1,
        Query::And(_, _) => 2,
        Query::Until(_, _) | Query::Release(_, _) => 3,
        Query::Not(_) | Query::Next(_) | Query::WeakNext(_) => 4,
        Query::True | Query::False | Query::Atom(_) | Query::Var => 5,
    }
}

fn write_query(q: &Query, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(q);
    if p < min {
        write!(f, "(")?;
    }
    match q {
        Query::True => write!(f, "true")?,
        Query::False => write!(f, "false")?,
        Query::Var => write!(f, "var")?,
        Query::Atom(name) => write!(f, "{name}")?,
        Query::Not(inner) => {
            write!(f, "!")?;
            write_query(inner, 4, f)?;
        }
        Query::Next(inner) => {
            write!(f, "X ")?;
            write_query(inner, 4, f)?;
        }
        Query::WeakNext(inner) => {
            write!(f, "WX ")?;
            write_query(inner, 4, f)?;
        }
        Query::Until(l, r) => {
            write_query(l, 4, f)?;
            write!(f, " U ")?;
            write_query(r, 3, f)?;
        }
        Query::Release(l, r) => {
            write_query(l, 4, f)?;
            write!(f, " R ")?;
            write_query(r, 3, f)?;
        }
        Query::And(l, r) => {
            write_query(l, 2, f)?;
            write!(f, " & ")?;
            write_query(r, 3, f)?;
        }
        Query::Or(l, r) => {
            write_query(l, 1, f)?;
            write!(f, " | ")?;
            write_query(r, 2, f)?;
        }
    }
    if p < min {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_query(self, 0, f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_query(&self.0, 0, f)
    }
}

// ---------------------------------------------------------------------------
// Parsing.

#[derive(Debug, Clone, PartialEq)]
enum Token {
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    True,
    False,
    Var,
    Next,
    WeakNext,
    Until,
    Release,
    Finally,
    Globally,
    Ident(String),
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            b'!' => {
                tokens.push((i, Token::Bang));
                i += 1;
            }
            b'&' => {
                tokens.push((i, Token::Amp));
                i += 1;
            }
            b'|' => {
                tokens.push((i, Token::Pipe));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    tokens.push((i, Token::Arrow));
                    i += 2;
                } else {
                    return Err(Error::Syntax {
                        position: i,
                        message: "expected `->`".into(),
                    });
                }
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let token = match word {
                    "true" => Token::True,
                    "false" => Token::False,
                    "var" => Token::Var,
                    "X" => Token::Next,
                    "WX" => Token::WeakNext,
                    "U" => Token::Until,
                    "R" => Token::Release,
                    "F" => Token::Finally,
                    "G" => Token::Globally,
                    _ => Token::Ident(word.to_string()),
                };
                tokens.push((start, token));
            }
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character `{}`", char::from(b)),
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    alphabet: &'a Alphabet,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.position(),
            message: message.into(),
        }
    }

    // implies := or ("->" implies)?   right-associative
    fn parse_implies(&mut self) -> Result<Query> {
        let left = self.parse_or()?;
        if self.peek() == Some(&Token::Arrow) {
            self.bump();
            let right = self.parse_implies()?;
            Ok(Query::implies(left, right))
        } else {
            Ok(left)
        }
    }

    // or := and ("|" and)*   left-associative
    fn parse_or(&mut self) -> Result<Query> {
        let mut acc = self.parse_and()?;
        while self.peek() == Some(&Token::Pipe) {
            self.bump();
            let rhs = self.parse_and()?;
            acc = Query::or(acc, rhs);
        }
        Ok(acc)
    }

    // and := until ("&" until)*   left-associative
    fn parse_and(&mut self) -> Result<Query> {
        let mut acc = self.parse_until()?;
        while self.peek() == Some(&Token::Amp) {
            self.bump();
            let rhs = self.parse_until()?;
            acc = Query::and(acc, rhs);
        }
        Ok(acc)
    }

    // until := unary (("U" | "R") until)?   right-associative
    fn parse_until(&mut self) -> Result<Query> {
        let left = self.parse_unary()?;
        match self.peek() {
            Some(Token::Until) => {
                self.bump();
                let right = self.parse_until()?;
                Ok(Query::until(left, right))
            }
            Some(Token::Release) => {
                self.bump();
                let right = self.parse_until()?;
                Ok(Query::release(left, right))
            }
            _ => Ok(left),
        }
    }

    fn parse_unary(&mut self) -> Result<Query> {
        match self.peek() {
            Some(Token::Bang) => {
                self.bump();
                Ok(Query::not(self.parse_unary()?))
            }
            Some(Token::Next) => {
                self.bump();
                Ok(Query::next(self.parse_unary()?))
            }
            Some(Token::WeakNext) => {
                self.bump();
                Ok(Query::weak_next(self.parse_unary()?))
            }
            Some(Token::Finally) => {
                self.bump();
                Ok(Query::eventually(self.parse_unary()?))
            }
            Some(Token::Globally) => {
                self.bump();
                Ok(Query::always(self.parse_unary()?))
            }
            _ => self.parse_primary(),
        }
    }

    fn parse_primary(&mut self) -> Result<Query> {
        let position = self.position();
        match self.bump() {
            Some(Token::True) => Ok(Query::True),
            Some(Token::False) => Ok(Query::False),
            Some(Token::Var) => Ok(Query::Var),
            Some(Token::Ident(name)) => {
                if self.alphabet.index_of(&name).is_none() {
                    return Err(Error::UnknownProp(name));
                }
                Ok(Query::atom(&name))
            }
            Some(Token::LParen) => {
                let inner = self.parse_implies()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Syntax {
                        position,
                        message: "unclosed parenthesis".into(),
                    }),
                }
            }
            Some(_) => Err(Error::Syntax {
                position,
                message: "expected a formula".into(),
            }),
            None => Err(Error::Syntax {
                position,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parses query text. `->`, `F`, and `G` are desugared during parsing,
/// so `parse(print(q))` reproduces `q` exactly.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Query> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        alphabet,
        end: text.len(),
    };
    let q = parser.parse_implies()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input after formula"));
    }
    Ok(q)
}

/// Parses a plain formula; rejects text containing `var`.
pub fn parse_formula(text: &str, alphabet: &Alphabet) -> Result<Formula> {
    parse(text, alphabet)?.into_formula()
}

/// Proposition names appearing in query text, in first-appearance order.
/// Lets a caller build an alphabet from the query itself when no stream
/// declares one; the text is only lexed, not parsed.
pub fn scan_atoms(text: &str) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for (_, token) in lex(text)? {
        if let Token::Ident(name) = token {
            if !names.contains(&name) {
                names.push(name);
            }
        }
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(names: &[&str]) -> Arc<Alphabet> {
        Alphabet::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert!(matches!(
            Alphabet::new(["ok", "2bad"]),
            Err(Error::InvalidPropName { .. })
        ));
        assert!(matches!(
            Alphabet::new(["U"]),
            Err(Error::InvalidPropName { .. })
        ));
        assert!(matches!(
            Alphabet::new(["a", "a"]),
            Err(Error::DuplicateProp(_))
        ));
    }

    #[test]
    fn parse_desugars_derived_operators() {
        let ab = alpha(&["a", "b"]);
        let q = parse("G(a -> F(var & X true))", &ab).unwrap();
        let expected = Query::always(Query::implies(
            Query::atom("a"),
            Query::eventually(Query::and(Query::Var, Query::next(Query::True))),
        ));
        assert_eq!(q, expected);
    }

    #[test]
    fn parse_reports_unknown_atom() {
        let ab = alpha(&["a"]);
        assert_eq!(parse("a & c", &ab), Err(Error::UnknownProp("c".into())));
    }

    #[test]
    fn parse_reports_position() {
        let ab = alpha(&["a"]);
        match parse("a &", &ab) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parse_precedence_and_associativity() {
        let ab = alpha(&["a", "b", "c"]);
        assert_eq!(
            parse("a | b & c", &ab).unwrap(),
            Query::or(Query::atom("a"), Query::and(Query::atom("b"), Query::atom("c")))
        );
        assert_eq!(
            parse("a U b U c", &ab).unwrap(),
            Query::until(Query::atom("a"), Query::until(Query::atom("b"), Query::atom("c")))
        );
        assert_eq!(
            parse("!a U b", &ab).unwrap(),
            Query::until(Query::not(Query::atom("a")), Query::atom("b"))
        );
        assert_eq!(
            parse("a & b & c", &ab).unwrap(),
            Query::and(Query::and(Query::atom("a"), Query::atom("b")), Query::atom("c"))
        );
    }

    #[test]
    fn print_parse_round_trip_examples() {
        let ab = alpha(&["a", "b"]);
        for text in [
            "G(a -> F(var & X true))",
            "a U (b R !var)",
            "(a U b) U a",
            "WX (a | b) & X !a",
            "!(a & WX var)",
            "a | (b & var) | !b",
        ] {
            let q = parse(text, &ab).unwrap();
            let printed = q.to_string();
            assert_eq!(parse(&printed, &ab).unwrap(), q, "through {printed}");
        }
    }

    #[test]
    fn pnf_pushes_negation_to_leaves() {
        let ab = alpha(&["a", "b"]);
        let q = parse("!(a U (b & var))", &ab).unwrap();
        let pnf = q.to_pnf();
        assert_eq!(pnf, parse("!a R (!b | !var)", &ab).unwrap());
        assert!(pnf.is_pnf());
    }

    #[test]
    fn pnf_swaps_strong_and_weak_next() {
        let ab = alpha(&["a"]);
        assert_eq!(
            parse("!X a", &ab).unwrap().to_pnf(),
            parse("WX !a", &ab).unwrap()
        );
        assert_eq!(
            parse("!WX a", &ab).unwrap().to_pnf(),
            parse("X !a", &ab).unwrap()
        );
    }

    #[test]
    fn polarity_examples() {
        let ab = alpha(&["a"]);
        assert_eq!(
            parse("G(a -> F var)", &ab).unwrap().polarity(),
            Polarity::Positive
        );
        assert_eq!(
            parse("!var & F var", &ab).unwrap().polarity(),
            Polarity::Mixed
        );
        assert_eq!(parse("a U a", &ab).unwrap().polarity(), Polarity::Absent);
        assert_eq!(parse("!var", &ab).unwrap().polarity(), Polarity::Negative);
    }

    #[test]
    fn eps_projection_examples() {
        let ab = alpha(&["a", "b", "c"]);
        let cases = [
            ("a & X b", "a & false"),
            ("!var R b", "b"),
            ("var | WX c", "var | true"),
            ("a U (b & var)", "b & var"),
        ];
        for (input, expected) in cases {
            let q = parse(input, &ab).unwrap();
            assert_eq!(
                q.eps_projection().unwrap(),
                parse(expected, &ab).unwrap(),
                "projection of {input}"
            );
        }
        let not_pnf = parse("!(a & b)", &ab).unwrap();
        assert_eq!(not_pnf.eps_projection(), Err(Error::NotInPnf));
    }

    #[test]
    fn formula_conversion_guards_var() {
        let ab = alpha(&["a"]);
        assert!(parse("a U var", &ab).unwrap().into_formula().is_err());
        assert!(parse("a U a", &ab).unwrap().into_formula().is_ok());
    }
}
