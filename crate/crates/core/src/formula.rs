//! Formula syntax: atoms, S-elements, the formula tree and unit chains.
//!
//! A formula is an immutable tree with shared (`Arc`) children, so cloning
//! is cheap and replacing a subterm only copies the spine above it.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// Words that denote the nullary connectives and can never name an atom.
pub const RESERVED: [&str; 2] = ["top", "bot"];

/// Name of a propositional atom: letters, digits and underscores.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomName(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtomNameError {
    #[error("atom name is empty")]
    Empty,
    #[error("`{0}` is reserved and cannot name an atom")]
    Reserved(String),
    #[error("`{0}` contains a character outside [A-Za-z0-9_]")]
    BadChar(String),
}

impl AtomName {
    pub fn new(name: &str) -> Result<Self, AtomNameError> {
        if name.is_empty() {
            return Err(AtomNameError::Empty);
        }
        if RESERVED.contains(&name) {
            return Err(AtomNameError::Reserved(name.to_string()));
        }
        if !name.chars().all(is_ident_char) {
            return Err(AtomNameError::BadChar(name.to_string()));
        }
        Ok(AtomName(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl fmt::Display for AtomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for AtomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// An element of 𝒮: a literal with polarity, ⊤ or ⊥.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SElem {
    Top,
    Bot,
    Lit { name: AtomName, polarity: Polarity },
}

impl SElem {
    pub fn pos(name: AtomName) -> Self {
        SElem::Lit { name, polarity: Polarity::Positive }
    }

    pub fn neg(name: AtomName) -> Self {
        SElem::Lit { name, polarity: Polarity::Negative }
    }

    /// `s^c`. Involutive; swaps ⊤ and ⊥.
    pub fn complement(&self) -> SElem {
        match self {
            SElem::Top => SElem::Bot,
            SElem::Bot => SElem::Top,
            SElem::Lit { name, polarity } => SElem::Lit { name: name.clone(), polarity: polarity.flip() },
        }
    }

    pub fn atom(&self) -> Option<&AtomName> {
        match self {
            SElem::Lit { name, .. } => Some(name),
            _ => None,
        }
    }
}

impl fmt::Display for SElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SElem::Top => f.write_str("top"),
            SElem::Bot => f.write_str("bot"),
            SElem::Lit { name, polarity: Polarity::Positive } => write!(f, "{name}"),
            SElem::Lit { name, polarity: Polarity::Negative } => write!(f, "{name}'"),
        }
    }
}

/// Formula tree. `Grad(object, attribute)` is the gradual connective ⋗.
///
/// Equality is purely structural: `a & b` and `b & a` are different values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Elem(SElem),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Not(Arc<Formula>),
    Grad(Arc<Formula>, Arc<Formula>),
}

impl From<SElem> for Formula {
    fn from(s: SElem) -> Self {
        Formula::Elem(s)
    }
}

impl Formula {
    pub fn top() -> Self {
        Formula::Elem(SElem::Top)
    }

    pub fn bot() -> Self {
        Formula::Elem(SElem::Bot)
    }

    /// Positive literal. Panics on an invalid name; meant for tests and literals in code.
    pub fn atom(name: &str) -> Self {
        Formula::Elem(SElem::pos(AtomName::new(name).expect("valid atom name")))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn grad(object: Formula, attribute: Formula) -> Self {
        Formula::Grad(Arc::new(object), Arc::new(attribute))
    }

    /// Right-nested chain `f₀ ⋗ (f₁ ⋗ (… ⋗ f_k))`. Panics on an empty iterator.
    pub fn chain<I: IntoIterator<Item = Formula>>(parts: I) -> Self
    where
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = parts.into_iter().rev();
        let last = it.next().expect("chain needs at least one element");
        it.fold(last, |acc, f| Formula::grad(f, acc))
    }

    pub fn as_elem(&self) -> Option<&SElem> {
        match self {
            Formula::Elem(s) => Some(s),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Elem(_) => vec![],
            Formula::Not(x) => vec![x],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Grad(l, r) => vec![l, r],
        }
    }

    /// Subterm at a child-index path (0 = left or only child, 1 = right).
    pub fn subterm(&self, path: &[usize]) -> Option<&Formula> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Copy of `self` with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: Formula) -> Result<Formula, Error> {
        let Some((&first, rest)) = path.split_first() else {
            return Ok(new);
        };
        let bad = || Error::BadPosition(path.to_vec());
        let rebuilt = match (self, first) {
            (Formula::Not(x), 0) => Formula::Not(Arc::new(x.replace_at(rest, new)?)),
            (Formula::And(l, r), 0) => Formula::And(Arc::new(l.replace_at(rest, new)?), r.clone()),
            (Formula::And(l, r), 1) => Formula::And(l.clone(), Arc::new(r.replace_at(rest, new)?)),
            (Formula::Or(l, r), 0) => Formula::Or(Arc::new(l.replace_at(rest, new)?), r.clone()),
            (Formula::Or(l, r), 1) => Formula::Or(l.clone(), Arc::new(r.replace_at(rest, new)?)),
            (Formula::Grad(l, r), 0) => Formula::Grad(Arc::new(l.replace_at(rest, new)?), r.clone()),
            (Formula::Grad(l, r), 1) => Formula::Grad(l.clone(), Arc::new(r.replace_at(rest, new)?)),
            _ => return Err(bad()),
        };
        Ok(rebuilt)
    }

    /// Number of nodes.
    pub fn f_size(&self) -> usize {
        match self {
            Formula::Elem(_) => 1,
            Formula::Not(x) => x.f_size() + 1,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Grad(l, r) => l.f_size() + r.f_size() + 1,
        }
    }

    /// Maximal number of nested `Not` nodes on any root-to-leaf path.
    pub fn neg_max(&self) -> usize {
        match self {
            Formula::Elem(_) => 0,
            Formula::Not(x) => 1 + x.neg_max(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Grad(l, r) => l.neg_max().max(r.neg_max()),
        }
    }

    /// True when the formula is a right-nested chain of S-element leaves
    /// with at least two elements.
    pub fn is_unit_chain(&self) -> bool {
        match self {
            Formula::Grad(l, r) => {
                matches!(**l, Formula::Elem(_)) && (matches!(**r, Formula::Elem(_)) || r.is_unit_chain())
            }
            _ => false,
        }
    }

    /// Every chain is a unit chain and no `Not` occurs.
    pub fn is_unit_chain_expansion(&self) -> bool {
        match self {
            Formula::Elem(_) => true,
            Formula::And(l, r) | Formula::Or(l, r) => l.is_unit_chain_expansion() && r.is_unit_chain_expansion(),
            Formula::Not(_) => false,
            Formula::Grad(..) => self.is_unit_chain(),
        }
    }

    pub(crate) fn ensure_uce(&self) -> Result<(), Error> {
        if self.is_unit_chain_expansion() {
            Ok(())
        } else {
            Err(Error::NotUce)
        }
    }

    /// Highest position index of any S-element over all unit chains.
    pub fn max_object_level(&self) -> Result<usize, Error> {
        self.ensure_uce()?;
        Ok(self.max_level_unchecked())
    }

    fn max_level_unchecked(&self) -> usize {
        match self {
            Formula::Elem(_) | Formula::Not(_) => 0,
            Formula::And(l, r) | Formula::Or(l, r) => l.max_level_unchecked().max(r.max_level_unchecked()),
            Formula::Grad(_, r) => 1 + r.max_level_unchecked(),
        }
    }

    /// Distinct atom names, polarity collapsed, ⊤/⊥ excluded.
    pub fn atoms(&self) -> BTreeSet<AtomName> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<AtomName>) {
        match self {
            Formula::Elem(s) => {
                if let Some(n) = s.atom() {
                    out.insert(n.clone());
                }
            }
            Formula::Not(x) => x.collect_atoms(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Grad(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn has_grad(&self) -> bool {
        match self {
            Formula::Elem(_) => false,
            Formula::Grad(..) => true,
            Formula::Not(x) => x.has_grad(),
            Formula::And(l, r) | Formula::Or(l, r) => l.has_grad() || r.has_grad(),
        }
    }
}

/// `s₀ ⋗ s₁ ⋗ … ⋗ s_k`, stored flat.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitChain(Vec<SElem>);

impl UnitChain {
    pub fn new(elems: Vec<SElem>) -> Option<Self> {
        if elems.is_empty() {
            None
        } else {
            Some(UnitChain(elems))
        }
    }

    pub fn elems(&self) -> &[SElem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn head(&self) -> &SElem {
        &self.0[0]
    }

    pub fn to_formula(&self) -> Formula {
        Formula::chain(self.0.iter().cloned().map(Formula::Elem))
    }

    /// Inverse of [`UnitChain::to_formula`]; `None` unless `f` is a leaf or a unit chain.
    pub fn from_formula(f: &Formula) -> Option<Self> {
        let mut elems = Vec::new();
        let mut cur = f;
        loop {
            match cur {
                Formula::Elem(s) => {
                    elems.push(s.clone());
                    return Some(UnitChain(elems));
                }
                Formula::Grad(l, r) => {
                    elems.push(l.as_elem()?.clone());
                    cur = r;
                }
                _ => return None,
            }
        }
    }
}

/// A possibly empty sequence of S-elements (ε when empty).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Prefix(pub Vec<SElem>);

impl Prefix {
    pub fn epsilon() -> Self {
        Prefix(Vec::new())
    }

    pub fn is_epsilon(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom("a")
    }
    fn b() -> Formula {
        Formula::atom("b")
    }
    fn c() -> Formula {
        Formula::atom("c")
    }

    #[test]
    fn complement_examples() {
        let p = AtomName::new("p").unwrap();
        assert_eq!(SElem::pos(p.clone()).complement(), SElem::neg(p));
        assert_eq!(SElem::Top.complement(), SElem::Bot);
        assert_eq!(SElem::Bot.complement(), SElem::Top);
        let q = SElem::neg(AtomName::new("q").unwrap());
        assert_eq!(q.complement().complement(), q);
    }

    #[test]
    fn atom_names() {
        assert_eq!(AtomName::new(""), Err(AtomNameError::Empty));
        assert!(matches!(AtomName::new("top"), Err(AtomNameError::Reserved(_))));
        assert!(matches!(AtomName::new("bot"), Err(AtomNameError::Reserved(_))));
        assert!(matches!(AtomName::new("a-b"), Err(AtomNameError::BadChar(_))));
        assert!(AtomName::new("Top").is_ok());
        assert!(AtomName::new("x_1").is_ok());
    }

    #[test]
    fn sizes() {
        assert_eq!(Formula::top().f_size(), 1);
        assert_eq!(Formula::and(a(), b()).f_size(), 3);
        assert_eq!(Formula::not(a()).f_size(), 2);
    }

    #[test]
    fn negation_depth() {
        assert_eq!(a().neg_max(), 0);
        assert_eq!(Formula::not(Formula::not(a())).neg_max(), 2);
        let f = Formula::and(Formula::not(a()), Formula::not(Formula::not(b())));
        assert_eq!(f.neg_max(), 2);
    }

    #[test]
    fn uce_recognition() {
        assert!(Formula::chain([a(), b(), c()]).is_unit_chain_expansion());
        assert!(!Formula::grad(Formula::and(a(), b()), c()).is_unit_chain_expansion());
        assert!(Formula::or(a(), Formula::grad(b(), c())).is_unit_chain_expansion());
        assert!(!Formula::not(a()).is_unit_chain_expansion());
        assert!(!Formula::grad(a(), Formula::not(b())).is_unit_chain_expansion());
        // left-nested chain is not a unit chain
        assert!(!Formula::grad(Formula::grad(a(), b()), c()).is_unit_chain_expansion());
    }

    #[test]
    fn object_levels() {
        assert_eq!(Formula::or(a(), b()).max_object_level(), Ok(0));
        assert_eq!(Formula::chain([a(), b(), c()]).max_object_level(), Ok(2));
        assert_eq!(Formula::and(Formula::grad(a(), b()), c()).max_object_level(), Ok(1));
        assert_eq!(Formula::not(a()).max_object_level(), Err(Error::NotUce));
    }

    #[test]
    fn chain_view() {
        let f = Formula::chain([a(), b(), c()]);
        let u = UnitChain::from_formula(&f).unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(u.to_formula(), f);
        let leaf = UnitChain::from_formula(&a()).unwrap();
        assert_eq!(leaf.len(), 1);
        assert_eq!(leaf.to_formula(), a());
        assert!(UnitChain::from_formula(&Formula::grad(Formula::grad(a(), b()), c())).is_none());
        assert!(UnitChain::new(vec![]).is_none());
    }

    #[test]
    fn epsilon_prefix_is_distinct() {
        let e = Prefix::epsilon();
        assert!(e.is_epsilon());
        assert_ne!(e, Prefix(vec![SElem::Top]));
    }

    #[test]
    fn replace_and_lookup() {
        let f = Formula::and(a(), Formula::grad(b(), c()));
        assert_eq!(f.subterm(&[1, 0]), Some(&b()));
        let g = f.replace_at(&[1, 0], Formula::top()).unwrap();
        assert_eq!(g, Formula::and(a(), Formula::grad(Formula::top(), c())));
        assert!(f.replace_at(&[0, 0], Formula::top()).is_err());
        assert_eq!(f.subterm(&[2]), None);
    }
}
