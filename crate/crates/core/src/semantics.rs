//! Valuation frames, evaluation of UCE formulas and the exhaustive oracle.
//!
//! The local interpretation only depends on the length of the prefix and the
//! element, so a frame is a table indexed by object level. ⊤ and ⊥ are forced
//! and negative literals are read as the complement of the stored positive
//! value; neither is ever stored.
//!
//! Atoms outside a formula cannot influence its value, so quantifying over
//! frames restricted to the formula's own atoms decides validity over all
//! frames.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::error::Error;
use crate::formula::{AtomName, Formula, Polarity, SElem, UnitChain};
use crate::reduce::normalize;

/// Cap on `|atoms| · (depth + 1)` for exhaustive enumeration.
pub const ENUMERATION_CAP: usize = 24;

/// Maximum number of distinct atoms a single frame can hold.
pub const MAX_FRAME_ATOMS: usize = 64;

/// Level-indexed local interpretation over a sorted atom universe.
///
/// Level `ℓ` assigns every universe atom a bit; bit `i` of `levels[ℓ]` is the
/// value of the `i`-th atom. Atoms outside the universe read as 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationFrame {
    atoms: Arc<[AtomName]>,
    levels: Vec<u64>,
}

impl ValuationFrame {
    /// Builds a frame; `atoms` must be sorted, unique and at most 64 long.
    pub fn from_bits(atoms: Arc<[AtomName]>, levels: Vec<u64>) -> Self {
        assert!(atoms.len() <= MAX_FRAME_ATOMS);
        assert!(atoms.windows(2).all(|w| w[0] < w[1]), "atom universe must be sorted and unique");
        assert!(!levels.is_empty(), "a frame has at least level 0");
        ValuationFrame { atoms, levels }
    }

    /// Frame from explicit per-level assignments; unmentioned atoms are 0.
    pub fn from_maps(levels: &[BTreeMap<AtomName, bool>]) -> Result<Self, Error> {
        if levels.is_empty() {
            return Err(Error::FrameFormat("a frame needs at least one level".into()));
        }
        let universe: BTreeSet<AtomName> = levels.iter().flat_map(|m| m.keys().cloned()).collect();
        if universe.len() > MAX_FRAME_ATOMS {
            return Err(Error::FrameFormat(format!("more than {MAX_FRAME_ATOMS} atoms")));
        }
        let atoms: Arc<[AtomName]> = universe.into_iter().collect();
        let bits = levels
            .iter()
            .map(|m| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| m.get(*a).copied().unwrap_or(false))
                    .fold(0u64, |acc, (i, _)| acc | (1 << i))
            })
            .collect();
        Ok(ValuationFrame { atoms, levels: bits })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn atoms(&self) -> &[AtomName] {
        &self.atoms
    }

    pub fn level_bits(&self) -> &[u64] {
        &self.levels
    }

    /// Stored value of the positive literal `atom` at `level`.
    pub fn value(&self, level: usize, atom: &AtomName) -> bool {
        match self.atoms.binary_search(atom) {
            Ok(i) => self.levels.get(level).is_some_and(|bits| bits >> i & 1 == 1),
            Err(_) => false,
        }
    }

    /// `I(prefix of length level, s)`.
    pub fn interpret(&self, level: usize, s: &SElem) -> bool {
        match s {
            SElem::Top => true,
            SElem::Bot => false,
            SElem::Lit { name, polarity } => self.value(level, name) == (*polarity == Polarity::Positive),
        }
    }

    pub fn to_maps(&self) -> Vec<BTreeMap<AtomName, bool>> {
        (0..self.levels.len()).map(|l| self.atoms.iter().map(|a| (a.clone(), self.value(l, a))).collect()).collect()
    }

    /// `{"levels":[{"hat":true},{"yellow":false}]}`
    pub fn to_json(&self) -> Value {
        let levels = self
            .to_maps()
            .into_iter()
            .map(|m| {
                Value::Object(
                    m.into_iter().map(|(k, v)| (k.as_str().to_string(), Value::Bool(v))).collect::<Map<_, _>>(),
                )
            })
            .collect();
        let mut root = Map::new();
        root.insert("levels".into(), Value::Array(levels));
        Value::Object(root)
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let bad = |m: String| Error::FrameFormat(m);
        let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let levels = v
            .get("levels")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("expected an object with a `levels` array".into()))?;
        let mut maps = Vec::with_capacity(levels.len());
        for (i, level) in levels.iter().enumerate() {
            let obj = level.as_object().ok_or_else(|| bad(format!("level {i} is not an object")))?;
            let mut m = BTreeMap::new();
            for (k, val) in obj {
                if k.ends_with('\'') {
                    return Err(bad(format!("level {i}: negative literal `{k}` cannot be assigned")));
                }
                let name = AtomName::new(k).map_err(|e| bad(format!("level {i}: {e}")))?;
                let b = val.as_bool().ok_or_else(|| bad(format!("level {i}: value of `{k}` is not a boolean")))?;
                m.insert(name, b);
            }
            maps.push(m);
        }
        Self::from_maps(&maps)
    }
}

/// `J(s₀.….s_k)`: 1 iff every position is 1 at its own level.
pub fn eval_chain(frame: &ValuationFrame, chain: &UnitChain) -> Result<bool, Error> {
    let needed = chain.len() - 1;
    if needed > frame.depth() {
        return Err(Error::Depth { needed, depth: frame.depth() });
    }
    Ok(chain.elems().iter().enumerate().all(|(level, s)| frame.interpret(level, s)))
}

/// Value of a UCE formula; ∧ and ∨ are evaluated homomorphically.
pub fn eval(frame: &ValuationFrame, f: &Formula) -> Result<bool, Error> {
    let needed = f.max_object_level()?;
    if needed > frame.depth() {
        return Err(Error::Depth { needed, depth: frame.depth() });
    }
    Ok(eval_unchecked(frame, f, 0))
}

fn eval_unchecked(frame: &ValuationFrame, f: &Formula, level: usize) -> bool {
    match f {
        Formula::Elem(s) => frame.interpret(level, s),
        Formula::And(l, r) => eval_unchecked(frame, l, level) && eval_unchecked(frame, r, level),
        Formula::Or(l, r) => eval_unchecked(frame, l, level) || eval_unchecked(frame, r, level),
        Formula::Grad(s, tail) => eval_unchecked(frame, s, level) && eval_unchecked(frame, tail, level + 1),
        Formula::Not(_) => unreachable!("checked UCE"),
    }
}

/// Lexicographic stream of all frames over `atoms` and levels `0..=depth`.
///
/// The frame is read as the bit sequence `(level 0: atoms in order), (level 1:
/// …), …` with 0 < 1 and the first bit most significant, so the all-zero
/// frame comes first.
#[derive(Debug, Clone)]
pub struct FrameIter {
    atoms: Arc<[AtomName]>,
    depth: usize,
    next: u64,
    end: u64,
}

impl FrameIter {
    pub fn len(&self) -> u64 {
        self.end - self.next
    }

    pub fn is_empty(&self) -> bool {
        self.next == self.end
    }

    /// Frame number `n` in the enumeration order.
    pub fn frame_at(&self, n: u64) -> ValuationFrame {
        ValuationFrame { atoms: self.atoms.clone(), levels: split_bits(n, self.atoms.len(), self.depth) }
    }
}

fn split_bits(n: u64, width: usize, depth: usize) -> Vec<u64> {
    let total = width * (depth + 1);
    (0..=depth)
        .map(|level| {
            (0..width).fold(0u64, |acc, i| {
                let pos = total - 1 - (level * width + i);
                acc | (((n >> pos) & 1) << i)
            })
        })
        .collect()
}

impl Iterator for FrameIter {
    type Item = ValuationFrame;

    fn next(&mut self) -> Option<ValuationFrame> {
        if self.next >= self.end {
            return None;
        }
        let f = self.frame_at(self.next);
        self.next += 1;
        Some(f)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

pub fn enumerate_frames(atoms: &BTreeSet<AtomName>, depth: usize) -> Result<FrameIter, Error> {
    let bits = atoms.len() * (depth + 1);
    if bits > ENUMERATION_CAP {
        return Err(Error::TooLarge { bits, cap: ENUMERATION_CAP });
    }
    Ok(FrameIter { atoms: atoms.iter().cloned().collect(), depth, next: 0, end: 1u64 << bits })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictClass {
    Valid,
    Unsatisfiable,
    Contingent,
}

impl VerdictClass {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictClass::Valid => "valid",
            VerdictClass::Unsatisfiable => "unsatisfiable",
            VerdictClass::Contingent => "contingent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub class: VerdictClass,
    pub witness_true: Option<ValuationFrame>,
    pub witness_false: Option<ValuationFrame>,
}

/// Ground truth: reduce deterministically, then evaluate under every frame
/// of the formula's atoms up to its maximal object level.
pub fn classify_oracle(f: &Formula) -> Result<Verdict, Error> {
    let uce = normalize(f);
    classify_uce(&uce)
}

/// [`classify_oracle`] for a formula already in unit chain expansion.
pub fn classify_uce(uce: &Formula) -> Result<Verdict, Error> {
    let depth = uce.max_object_level()?;
    let frames = enumerate_frames(&uce.atoms(), depth)?;
    let compiled = Compiled::new(uce, frames.atoms.clone());
    let (mut first_true, mut first_false) = (None, None);
    for n in 0..frames.end {
        let levels = split_bits(n, frames.atoms.len(), depth);
        let slot = if compiled.eval(&levels) { &mut first_true } else { &mut first_false };
        if slot.is_none() {
            *slot = Some(n);
            if first_true.is_some() && first_false.is_some() {
                break;
            }
        }
    }
    let class = match (first_true, first_false) {
        (Some(_), None) => VerdictClass::Valid,
        (None, Some(_)) => VerdictClass::Unsatisfiable,
        _ => VerdictClass::Contingent,
    };
    Ok(Verdict {
        class,
        witness_true: first_true.map(|n| frames.frame_at(n)),
        witness_false: first_false.map(|n| frames.frame_at(n)),
    })
}

/// UCE formula with atoms resolved to universe indices, for tight loops.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Const(bool),
    Lit { level: usize, index: usize, positive: bool },
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub(crate) fn new(uce: &Formula, atoms: Arc<[AtomName]>) -> Self {
        Self::build(uce, &atoms, 0)
    }

    fn build(f: &Formula, atoms: &[AtomName], level: usize) -> Self {
        match f {
            Formula::Elem(SElem::Top) => Compiled::Const(true),
            Formula::Elem(SElem::Bot) => Compiled::Const(false),
            Formula::Elem(SElem::Lit { name, polarity }) => match atoms.binary_search(name) {
                Ok(index) => Compiled::Lit { level, index, positive: *polarity == Polarity::Positive },
                Err(_) => Compiled::Const(*polarity == Polarity::Negative),
            },
            Formula::And(l, r) => {
                Compiled::And(Box::new(Self::build(l, atoms, level)), Box::new(Self::build(r, atoms, level)))
            }
            Formula::Or(l, r) => {
                Compiled::Or(Box::new(Self::build(l, atoms, level)), Box::new(Self::build(r, atoms, level)))
            }
            Formula::Grad(s, tail) => {
                Compiled::And(Box::new(Self::build(s, atoms, level)), Box::new(Self::build(tail, atoms, level + 1)))
            }
            Formula::Not(_) => unreachable!("compiled formulas are in UCE"),
        }
    }

    pub(crate) fn eval(&self, levels: &[u64]) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Lit { level, index, positive } => (levels[*level] >> index & 1 == 1) == *positive,
            Compiled::And(l, r) => l.eval(levels) && r.eval(levels),
            Compiled::Or(l, r) => l.eval(levels) || r.eval(levels),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::reduce::recursive_reduce;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn name(s: &str) -> AtomName {
        AtomName::new(s).unwrap()
    }

    fn frame(levels: &[&[(&str, bool)]]) -> ValuationFrame {
        let maps: Vec<BTreeMap<AtomName, bool>> =
            levels.iter().map(|l| l.iter().map(|(k, v)| (name(k), *v)).collect()).collect();
        ValuationFrame::from_maps(&maps).unwrap()
    }

    fn chain(s: &str) -> UnitChain {
        UnitChain::from_formula(&p(s)).unwrap()
    }

    #[test]
    fn chain_examples() {
        let m = frame(&[&[("hat", true)], &[("yellow", true)]]);
        assert_eq!(eval_chain(&m, &chain("hat > yellow")), Ok(true));
        let m = frame(&[&[("hat", true)], &[("yellow", false)]]);
        assert_eq!(eval(&m, &p("hat > yellow")), Ok(false));
        for m in enumerate_frames(&[name("a")].into(), 1).unwrap() {
            assert_eq!(eval_chain(&m, &chain("bot > a")), Ok(false));
            assert_eq!(eval_chain(&m, &chain("a > bot")), Ok(false));
        }
    }

    #[test]
    fn depth_errors() {
        let m = frame(&[&[("a", true)]]);
        assert_eq!(eval_chain(&m, &chain("a > b")), Err(Error::Depth { needed: 1, depth: 0 }));
        assert_eq!(eval(&m, &p("a | (a > b > c)")), Err(Error::Depth { needed: 2, depth: 0 }));
        assert_eq!(eval(&m, &p("!a")), Err(Error::NotUce));
    }

    #[test]
    fn constants_and_complements() {
        for m in enumerate_frames(&[name("a")].into(), 0).unwrap() {
            assert_eq!(eval(&m, &Formula::top()), Ok(true));
            assert_eq!(eval(&m, &p("a | a'")), Ok(true));
            assert_eq!(eval(&m, &p("a & a'")), Ok(false));
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_frames(&[name("a")].into(), 0).unwrap().count(), 2);
        assert_eq!(enumerate_frames(&[name("a"), name("b")].into(), 1).unwrap().count(), 16);
        let empty: Vec<_> = enumerate_frames(&BTreeSet::new(), 0).unwrap().collect();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].depth(), 0);

        let frames: Vec<_> = enumerate_frames(&[name("a"), name("b")].into(), 1).unwrap().collect();
        // all-zero first; last bit (level 1, b) varies fastest
        assert_eq!(frames[0].level_bits(), &[0, 0]);
        assert_eq!(frames[1].level_bits(), &[0, 0b10]);
        assert_eq!(frames[4].level_bits(), &[0b10, 0]);
        assert_eq!(frames[8].level_bits(), &[0b01, 0]);
        let distinct: std::collections::HashSet<_> = frames.iter().collect();
        assert_eq!(distinct.len(), 16);

        let many: BTreeSet<AtomName> = (0..13).map(|i| name(&format!("x{i}"))).collect();
        assert!(matches!(enumerate_frames(&many, 1), Err(Error::TooLarge { bits: 26, .. })));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(classify_oracle(&Formula::top()).unwrap().class, VerdictClass::Valid);
        assert_eq!(classify_oracle(&p("bot > bot")).unwrap().class, VerdictClass::Unsatisfiable);
        let f = p("a > b");
        let g = Formula::or(f.clone(), recursive_reduce(&f).unwrap());
        assert_eq!(classify_oracle(&g).unwrap().class, VerdictClass::Valid);
        let v = classify_oracle(&p("hat > yellow")).unwrap();
        assert_eq!(v.class, VerdictClass::Contingent);
        assert_eq!(v.witness_false.unwrap().level_bits(), &[0, 0]);
        let t = v.witness_true.unwrap();
        assert_eq!(eval(&t, &p("hat > yellow")), Ok(true));
    }

    #[test]
    fn frame_file_format() {
        let m = ValuationFrame::from_json(r#"{"levels":[{"hat":true},{"yellow":false}]}"#).unwrap();
        assert!(m.value(0, &name("hat")));
        assert!(!m.value(1, &name("yellow")));
        assert!(!m.value(1, &name("hat")));
        assert_eq!(m.depth(), 1);
        assert_eq!(ValuationFrame::from_json(&m.to_json().to_string()).unwrap(), m);

        for bad in [
            r#"{"levels":[{"hat'":true}]}"#,
            r#"{"levels":[{"top":true}]}"#,
            r#"{"levels":[{"bot":false}]}"#,
            r#"{"levels":[{"a":1}]}"#,
            r#"{"levels":[]}"#,
            r#"{"lvls":[]}"#,
            "not json",
        ] {
            assert!(matches!(ValuationFrame::from_json(bad), Err(Error::FrameFormat(_))), "{bad}");
        }
    }

    #[test]
    fn compiled_agrees_with_tree_eval() {
        let f = p("(a > b' > top) | (b & (a' > a)) | bot");
        let atoms: Arc<[AtomName]> = f.atoms().into_iter().collect();
        let c = Compiled::new(&f, atoms);
        for m in enumerate_frames(&f.atoms(), 2).unwrap() {
            assert_eq!(c.eval(m.level_bits()), eval(&m, &f).unwrap());
        }
    }
}
