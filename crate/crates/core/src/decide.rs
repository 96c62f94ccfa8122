//! Level-by-level validity decision.
//!
//! Both engines project the formula onto one object level (`squash`),
//! enumerate interpretations of the atoms at that level, reject as soon as
//! one falsifies the projection, and otherwise recurse on what the
//! interpretation leaves for deeper levels (`residual`).
//!
//! * [`Engine::Faithful`] computes the residual by deleting non-chains,
//!   resolved chains and falsified chains, keeping ⊤ in place of resolved
//!   heads. Deleting a satisfied disjunct keeps its sibling as an
//!   obligation, so formulas such as `top | (b > c)` are wrongly rejected.
//!   Kept for comparison only.
//! * [`Engine::Levelwise`] substitutes truth values instead of deleting and
//!   simplifies ⊤/⊥ through ∧/∨, then drops the resolved level from every
//!   surviving chain. It agrees with [`classify_oracle`](crate::semantics::classify_oracle).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::formula::{AtomName, Formula, Polarity, SElem};
use crate::reduce::normalize;

/// One level of a local interpretation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelInterpretation {
    pub level: usize,
    pub assignment: BTreeMap<AtomName, bool>,
}

impl LevelInterpretation {
    pub fn new(level: usize, assignment: BTreeMap<AtomName, bool>) -> Self {
        LevelInterpretation { level, assignment }
    }

    /// ⊤ ↦ 1, ⊥ ↦ 0, `a^c` ↦ 1 − `a`; unassigned atoms read as 0.
    pub fn interpret(&self, s: &SElem) -> bool {
        match s {
            SElem::Top => true,
            SElem::Bot => false,
            SElem::Lit { name, polarity } => {
                self.assignment.get(name).copied().unwrap_or(false) == (*polarity == Polarity::Positive)
            }
        }
    }

    /// All `2^n` assignments of `atoms`, lexicographic with the first atom most significant.
    pub fn all(level: usize, atoms: &[AtomName]) -> impl Iterator<Item = LevelInterpretation> + '_ {
        let n = atoms.len();
        (0u64..1 << n).map(move |bits| {
            let assignment = atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> (n - 1 - i) & 1 == 1)).collect();
            LevelInterpretation { level, assignment }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Faithful,
    Levelwise,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Faithful => "faithful",
            Engine::Levelwise => "levelwise",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideReport {
    pub result: bool,
    pub engine: Engine,
    /// Level interpretations tried, summed over all recursive calls.
    pub frames_examined: u64,
    /// Deepest nesting of calls; the top-level call counts as 1.
    pub recursion_depth_max: usize,
    /// Number of calls made at each object level.
    pub calls_per_level: Vec<u64>,
}

/// Distinct atom names occurring at each chain position; a leaf sits at level 0.
pub fn atoms_by_level(f: &Formula) -> Vec<std::collections::BTreeSet<AtomName>> {
    fn walk(f: &Formula, level: usize, out: &mut Vec<std::collections::BTreeSet<AtomName>>) {
        if out.len() <= level {
            out.resize_with(level + 1, Default::default);
        }
        match f {
            Formula::Elem(s) => {
                if let Some(a) = s.atom() {
                    out[level].insert(a.clone());
                }
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                walk(l, level, out);
                walk(r, level, out);
            }
            Formula::Grad(s, tail) => {
                walk(s, level, out);
                walk(tail, level + 1, out);
            }
            Formula::Not(x) => walk(x, level, out),
        }
    }
    let mut out = Vec::new();
    walk(f, 0, &mut out);
    out
}

/// Σ over levels of 2^(atoms at that level).
pub fn level_cost_bound(f: &Formula) -> u128 {
    atoms_by_level(f).iter().map(|a| 1u128 << a.len().min(127)).sum()
}

/// Truncates every unit chain to its first `level + 1` elements.
pub fn squash(f: &Formula, level: usize) -> Result<Formula, Error> {
    f.ensure_uce()?;
    Ok(truncate(f, level))
}

fn truncate(f: &Formula, keep_after: usize) -> Formula {
    match f {
        Formula::Elem(_) => f.clone(),
        Formula::And(l, r) => Formula::and(truncate(l, keep_after), truncate(r, keep_after)),
        Formula::Or(l, r) => Formula::or(truncate(l, keep_after), truncate(r, keep_after)),
        Formula::Grad(s, tail) => {
            if keep_after == 0 {
                (**s).clone()
            } else {
                Formula::Grad(s.clone(), truncate(tail, keep_after - 1).into())
            }
        }
        Formula::Not(x) => Formula::not(truncate(x, keep_after)),
    }
}

/// Number of distinct atom names, polarity collapsed.
pub fn count_distinct(f: &Formula) -> usize {
    f.atoms().len()
}

/// True iff `f` is 0 when every S-element in it is read through `interp`.
pub fn falsified_at(f: &Formula, interp: &LevelInterpretation) -> bool {
    !value_under(f, interp)
}

fn value_under(f: &Formula, interp: &LevelInterpretation) -> bool {
    match f {
        Formula::Elem(s) => interp.interpret(s),
        Formula::And(l, r) | Formula::Grad(l, r) => value_under(l, interp) && value_under(r, interp),
        Formula::Or(l, r) => value_under(l, interp) || value_under(r, interp),
        Formula::Not(x) => !value_under(x, interp),
    }
}

/// What remains to be checked at deeper levels; `None` means nothing (EMPTY).
///
/// Faithful mode reads chain heads at position `interp.level` of the
/// original chains. Levelwise mode expects the suffix view in which position
/// 0 is the current level, and returns a suffix view for the next level.
pub fn residual(f: &Formula, interp: &LevelInterpretation, engine: Engine) -> Result<Option<Formula>, Error> {
    f.ensure_uce()?;
    Ok(match engine {
        Engine::Levelwise => match substitute(f, interp) {
            Formula::Elem(SElem::Top) => None,
            other => Some(other),
        },
        Engine::Faithful => rewrite(f, interp),
    })
}

fn substitute(f: &Formula, interp: &LevelInterpretation) -> Formula {
    match f {
        Formula::Elem(s) => constant(interp.interpret(s)),
        Formula::Grad(s, tail) => {
            let head = s.as_elem().expect("UCE chain head");
            if interp.interpret(head) {
                (**tail).clone()
            } else {
                Formula::bot()
            }
        }
        Formula::And(l, r) => {
            let (l, r) = (substitute(l, interp), substitute(r, interp));
            match (l.as_elem(), r.as_elem()) {
                (Some(SElem::Bot), _) | (_, Some(SElem::Bot)) => Formula::bot(),
                (Some(SElem::Top), _) => r,
                (_, Some(SElem::Top)) => l,
                _ => Formula::and(l, r),
            }
        }
        Formula::Or(l, r) => {
            let (l, r) = (substitute(l, interp), substitute(r, interp));
            match (l.as_elem(), r.as_elem()) {
                (Some(SElem::Top), _) | (_, Some(SElem::Top)) => Formula::top(),
                (Some(SElem::Bot), _) => r,
                (_, Some(SElem::Bot)) => l,
                _ => Formula::or(l, r),
            }
        }
        Formula::Not(_) => unreachable!("checked UCE"),
    }
}

fn constant(b: bool) -> Formula {
    if b {
        Formula::top()
    } else {
        Formula::bot()
    }
}

/// Deletes every maximal component for which `doomed` holds, collapsing the
/// enclosing ∧/∨ onto the sibling. Deleting everything yields `None`.
fn prune(f: &Formula, doomed: &dyn Fn(&Formula) -> bool) -> Option<Formula> {
    match f {
        Formula::And(l, r) | Formula::Or(l, r) => match (prune(l, doomed), prune(r, doomed)) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => {
                Some(if matches!(f, Formula::And(..)) { Formula::and(x, y) } else { Formula::or(x, y) })
            }
        },
        _ if doomed(f) => None,
        _ => Some(f.clone()),
    }
}

fn chain_last_position(f: &Formula) -> usize {
    match f {
        Formula::Grad(_, tail) => 1 + chain_last_position(tail),
        _ => 0,
    }
}

fn chain_element(f: &Formula, position: usize) -> Option<&SElem> {
    match (f, position) {
        (Formula::Elem(s), 0) => Some(s),
        (Formula::Grad(s, _), 0) => s.as_elem(),
        (Formula::Grad(_, tail), p) => chain_element(tail, p - 1),
        _ => None,
    }
}

fn replace_chain_element(f: &Formula, position: usize, with: SElem) -> Formula {
    match (f, position) {
        (Formula::Grad(_, tail), 0) => Formula::Grad(Formula::Elem(with).into(), tail.clone()),
        (Formula::Grad(s, tail), p) => Formula::Grad(s.clone(), replace_chain_element(tail, p - 1, with).into()),
        (Formula::Elem(_), 0) => Formula::Elem(with),
        _ => f.clone(),
    }
}

fn map_chains(f: &Formula, g: &dyn Fn(&Formula) -> Formula) -> Formula {
    match f {
        Formula::And(l, r) => Formula::and(map_chains(l, g), map_chains(r, g)),
        Formula::Or(l, r) => Formula::or(map_chains(l, g), map_chains(r, g)),
        _ => g(f),
    }
}

/// Literal REWRITE: drop non-chains and chains ending at or before this
/// level, then drop chains whose element at this level is 0 and replace
/// that element with ⊤ in the rest.
fn rewrite(f: &Formula, interp: &LevelInterpretation) -> Option<Formula> {
    let level = interp.level;
    let kept = prune(f, &|g| !g.is_unit_chain() || chain_last_position(g) <= level)?;
    let head_false = |g: &Formula| chain_element(g, level).is_some_and(|s| !interp.interpret(s));
    let kept = prune(&kept, &head_false)?;
    Some(map_chains(&kept, &|g| replace_chain_element(g, level, SElem::Top)))
}

#[derive(Default)]
struct Counters {
    frames: u64,
    depth_max: usize,
    calls_per_level: Vec<u64>,
}

impl Counters {
    fn enter(&mut self, level: usize) {
        self.depth_max = self.depth_max.max(level + 1);
        if self.calls_per_level.len() <= level {
            self.calls_per_level.resize(level + 1, 0);
        }
        self.calls_per_level[level] += 1;
    }
}

/// Decides validity of `f` with the chosen engine.
pub fn decide_valid(f: &Formula, engine: Engine) -> DecideReport {
    let uce = if f.is_unit_chain_expansion() { f.clone() } else { normalize(f) };
    let mut counters = Counters::default();
    let result = match engine {
        Engine::Levelwise => levelwise(&uce, 0, &mut counters),
        Engine::Faithful => faithful(&uce, 0, &mut counters),
    };
    DecideReport {
        result,
        engine,
        frames_examined: counters.frames,
        recursion_depth_max: counters.depth_max,
        calls_per_level: counters.calls_per_level,
    }
}

fn sorted_atoms(f: &Formula) -> Vec<AtomName> {
    f.atoms().into_iter().collect()
}

fn levelwise(f: &Formula, level: usize, counters: &mut Counters) -> bool {
    counters.enter(level);
    let projection = truncate(f, 0);
    let atoms = sorted_atoms(&projection);
    for interp in LevelInterpretation::all(level, &atoms) {
        counters.frames += 1;
        if falsified_at(&projection, &interp) {
            return false;
        }
        match substitute(f, &interp) {
            Formula::Elem(SElem::Top) => {}
            Formula::Elem(SElem::Bot) => return false,
            rest => {
                if !levelwise(&rest, level + 1, counters) {
                    return false;
                }
            }
        }
    }
    true
}

fn faithful(f: &Formula, level: usize, counters: &mut Counters) -> bool {
    counters.enter(level);
    let projection = truncate(f, level);
    let atoms = sorted_atoms(&projection);
    let has_chains = f.has_grad();
    for interp in LevelInterpretation::all(level, &atoms) {
        counters.frames += 1;
        if falsified_at(&projection, &interp) {
            return false;
        }
        if !has_chains {
            continue;
        }
        if let Some(next) = rewrite(f, &interp) {
            if !faithful(&next, level + 1, counters) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn interp(level: usize, pairs: &[(&str, bool)]) -> LevelInterpretation {
        LevelInterpretation::new(level, pairs.iter().map(|(k, v)| (AtomName::new(k).unwrap(), *v)).collect())
    }

    #[test]
    fn squash_examples() {
        assert_eq!(squash(&p("a > b > c"), 0).unwrap(), p("a"));
        assert_eq!(squash(&p("a | (b > c)"), 0).unwrap(), p("a | b"));
        assert_eq!(squash(&p("a > b"), 5).unwrap(), p("a > b"));
        assert_eq!(squash(&p("a > b > c > d"), 1).unwrap(), p("a > b"));
        assert_eq!(squash(&p("!a"), 0), Err(Error::NotUce));
    }

    #[test]
    fn count_distinct_examples() {
        assert_eq!(count_distinct(&p("a | a'")), 1);
        assert_eq!(count_distinct(&p("top | bot")), 0);
        assert_eq!(count_distinct(&p("(a > b) & c")), 3);
    }

    #[test]
    fn falsified_examples() {
        assert!(falsified_at(&p("a | b"), &interp(0, &[("a", false), ("b", false)])));
        assert!(!falsified_at(&Formula::top(), &interp(0, &[])));
        for v in [false, true] {
            assert!(falsified_at(&p("a & a'"), &interp(0, &[("a", v)])));
        }
    }

    #[test]
    fn residual_examples() {
        let f = p("top | (b > c)");
        let i = interp(0, &[("b", true)]);
        assert_eq!(residual(&f, &i, Engine::Faithful).unwrap(), Some(p("top > c")));
        assert_eq!(residual(&f, &i, Engine::Levelwise).unwrap(), None);
        let g = p("a & (b > c)");
        let i = interp(0, &[("a", true), ("b", false)]);
        assert_eq!(residual(&g, &i, Engine::Levelwise).unwrap(), Some(Formula::bot()));
        let h = p("(a > b > c) & (d | (e > f))");
        let i = interp(0, &[("a", true), ("d", false), ("e", true)]);
        assert_eq!(residual(&h, &i, Engine::Levelwise).unwrap(), Some(p("(b > c) & f")));
        assert_eq!(residual(&h, &i, Engine::Faithful).unwrap(), Some(p("(top > b > c) & (top > f)")));
        assert_eq!(residual(&p("a > b"), &interp(0, &[("a", false)]), Engine::Faithful).unwrap(), None);
    }

    #[test]
    fn decide_examples() {
        assert!(decide_valid(&p("a | a'"), Engine::Levelwise).result);
        assert!(decide_valid(&p("a | a'"), Engine::Faithful).result);
        assert!(!decide_valid(&p("hat > yellow"), Engine::Levelwise).result);
        assert!(!decide_valid(&p("hat > yellow"), Engine::Faithful).result);
        let f = p("top | (b > c)");
        assert!(decide_valid(&f, Engine::Levelwise).result);
        assert!(!decide_valid(&f, Engine::Faithful).result);
    }

    #[test]
    fn recursion_depth_bounded_by_object_level() {
        for s in ["(a > b > c) | !(a > b > c)", "a | a'", "(x > y) | (x > y') | x'", "a > b > c > d"] {
            let f = normalize(&p(s));
            let max = f.max_object_level().unwrap();
            for e in [Engine::Levelwise, Engine::Faithful] {
                let r = decide_valid(&f, e);
                assert!(r.recursion_depth_max <= max + 1, "{s} {e}: {r:?}");
            }
        }
    }
}
