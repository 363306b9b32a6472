//! Scalar values, node identifiers and domains.

use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

use num::rational::Ratio;
use num::Zero;

/// Exact rational used for `Value::Rational` payloads.
pub type Rational = Ratio<i64>;

/// A scalar a node can take.
///
/// Rationals are kept in canonical form: a ratio whose denominator is one is
/// always stored as [`Value::Int`], so every number has exactly one
/// representation and the derived equality is exact. Values of different
/// tags are never equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bool(bool),
    Int(i64),
    /// Invariant: denominator > 1.
    Rational(Rational),
    Symbol(Arc<str>),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Int(n)
    }

    pub fn symbol(s: impl AsRef<str>) -> Self {
        Value::Symbol(Arc::from(s.as_ref()))
    }

    /// Builds a numeric value, collapsing integral ratios to `Int`.
    pub fn rational(r: Rational) -> Self {
        if *r.denom() == 1 {
            Value::Int(*r.numer())
        } else {
            Value::Rational(r)
        }
    }

    /// Numeric view of `Int` and `Rational` values.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Value::Int(n) => Some(Rational::from_integer(*n)),
            Value::Rational(r) => Some(*r),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Rational(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Value::Bool(_) => "boolean",
            Value::Int(_) => "integer",
            Value::Rational(_) => "rational",
            Value::Symbol(_) => "symbol",
        }
    }

    /// Truth value used by the logical operators and `if`.
    pub fn truthiness(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            Value::Int(n) => Some(*n != 0),
            Value::Rational(r) => Some(!r.is_zero()),
            Value::Symbol(_) => None,
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::symbol(s)
    }
}

/// Words that cannot appear as bare identifiers in the scenario language.
pub const KEYWORDS: &[&str] = &[
    "model", "node", "exo", "endo", "parents", "domain", "expr", "table", "real", "default",
    "actual", "tweak", "vfi", "csp", "known", "targets", "expect", "cause", "effect", "answer",
    "include", "if", "then", "else", "true", "false", "fd", "holds",
];

/// True if `s` lexes as a single identifier token that is not a keyword.
pub fn is_bare_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&s)
}

/// Renders a symbol as it would be written in the scenario language.
pub fn quote_symbol(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Symbol(s) if is_bare_ident(s) => f.write_str(s),
            Value::Symbol(s) => f.write_str(&quote_symbol(s)),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Name of a node. Ordering and equality are by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(Arc<str>);

impl NodeId {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "node names must be nonempty");
        NodeId(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s)
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId::new(s)
    }
}

impl std::ops::Deref for NodeId {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The set of values a node may take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Nonempty, duplicate-free, in declaration order.
    Finite(Vec<Value>),
    /// Exact numbers (integers and rationals); never enumerated.
    Real,
}

impl Domain {
    pub fn finite<I, V>(values: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<Value>,
    {
        Domain::Finite(values.into_iter().map(Into::into).collect())
    }

    pub fn binary() -> Self {
        Domain::finite([0i64, 1])
    }

    pub fn int_range(lo: i64, hi: i64) -> Self {
        Domain::Finite((lo..=hi).map(Value::Int).collect())
    }

    pub fn contains(&self, v: &Value) -> bool {
        match self {
            Domain::Finite(vs) => vs.contains(v),
            Domain::Real => v.is_numeric(),
        }
    }

    pub fn values(&self) -> Option<&[Value]> {
        match self {
            Domain::Finite(vs) => Some(vs),
            Domain::Real => None,
        }
    }

    pub fn size(&self) -> Option<usize> {
        self.values().map(<[Value]>::len)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Domain::Finite(_))
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Real => f.write_str("real"),
            Domain::Finite(vs) => {
                f.write_str("{")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_ratios_collapse_to_int() {
        assert_eq!(Value::rational(Rational::new(6, 3)), Value::Int(2));
        assert_eq!(
            Value::rational(Rational::new(2, 6)),
            Value::Rational(Rational::new(1, 3))
        );
    }

    #[test]
    fn cross_tag_values_differ() {
        assert_ne!(Value::Int(1), Value::Bool(true));
        assert_ne!(Value::symbol("1"), Value::Int(1));
    }

    #[test]
    fn display_quotes_keywords_and_odd_symbols() {
        assert_eq!(Value::symbol("hello").to_string(), "hello");
        assert_eq!(Value::symbol("then").to_string(), "\"then\"");
        assert_eq!(Value::symbol("a b").to_string(), "\"a b\"");
        assert_eq!(Value::rational(Rational::new(-1, 3)).to_string(), "-1/3");
    }

    #[test]
    fn real_domain_admits_numbers_only() {
        assert!(Domain::Real.contains(&Value::Int(3)));
        assert!(Domain::Real.contains(&Value::rational(Rational::new(1, 2))));
        assert!(!Domain::Real.contains(&Value::Bool(true)));
    }
}
