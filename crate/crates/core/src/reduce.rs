//! The nine reduction rules, normalization to unit chain expansion (UCE),
//! the canonical negation of a UCE formula, and DNF/CNF over unit chains.
//!
//! | rule  | redex            | contractum                                 |
//! |-------|------------------|--------------------------------------------|
//! | NEG1  | `¬s`             | `s^c`                                      |
//! | NEG2  | `¬(F₁ ∧ F₂)`     | `¬F₁ ∨ ¬F₂`                                |
//! | NEG3  | `¬(F₁ ∨ F₂)`     | `¬F₁ ∧ ¬F₂`                                |
//! | NEG4  | `¬(s ⋗ F₂)`      | `s^c ∨ (s ⋗ ¬F₂)`                          |
//! | GRAD1 | `(F₁ ⋗ F₂) ⋗ F₃` | `(F₁ ⋗ F₃) ∧ ((F₁ ⋗ F₂) ∨ (F₁ ⋗ F₂ ⋗ F₃))` |
//! | GRAD2 | `(F₁ ∧ F₂) ⋗ F₃` | `(F₁ ⋗ F₃) ∧ (F₂ ⋗ F₃)`                    |
//! | GRAD3 | `(F₁ ∨ F₂) ⋗ F₃` | `(F₁ ⋗ F₃) ∨ (F₂ ⋗ F₃)`                    |
//! | GRAD4 | `F₁ ⋗ (F₂ ∧ F₃)` | `(F₁ ⋗ F₂) ∧ (F₁ ⋗ F₃)`                    |
//! | GRAD5 | `F₁ ⋗ (F₂ ∨ F₃)` | `(F₁ ⋗ F₂) ∨ (F₁ ⋗ F₃)`                    |
//!
//! Reducts are kept verbatim: no idempotence, absorption or constant folding.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::formula::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Neg1,
    Neg2,
    Neg3,
    Neg4,
    Grad1,
    Grad2,
    Grad3,
    Grad4,
    Grad5,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::Neg1,
        Rule::Neg2,
        Rule::Neg3,
        Rule::Neg4,
        Rule::Grad1,
        Rule::Grad2,
        Rule::Grad3,
        Rule::Grad4,
        Rule::Grad5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Neg1 => "NEG1",
            Rule::Neg2 => "NEG2",
            Rule::Neg3 => "NEG3",
            Rule::Neg4 => "NEG4",
            Rule::Grad1 => "GRAD1",
            Rule::Grad2 => "GRAD2",
            Rule::Grad3 => "GRAD3",
            Rule::Grad4 => "GRAD4",
            Rule::Grad5 => "GRAD5",
        }
    }

    /// Right-hand side of the rule for `redex`, or `None` when `redex` does not match.
    pub fn contract(self, redex: &Formula) -> Option<Formula> {
        use Formula::*;
        let out = match (self, redex) {
            (Rule::Neg1, Not(x)) => Elem(x.as_elem()?.complement()),
            (Rule::Neg2, Not(x)) => match &**x {
                And(l, r) => Formula::or(Formula::Not(l.clone()), Formula::Not(r.clone())),
                _ => return None,
            },
            (Rule::Neg3, Not(x)) => match &**x {
                Or(l, r) => Formula::and(Formula::Not(l.clone()), Formula::Not(r.clone())),
                _ => return None,
            },
            (Rule::Neg4, Not(x)) => match &**x {
                Grad(s, rest) => {
                    let s_elem = s.as_elem()?;
                    Formula::or(Elem(s_elem.complement()), Formula::Grad(s.clone(), Formula::Not(rest.clone()).into()))
                }
                _ => return None,
            },
            (Rule::Grad1, Grad(obj, f3)) => match &**obj {
                Grad(f1, f2) => Formula::and(
                    Grad(f1.clone(), f3.clone()),
                    Formula::or(Grad(f1.clone(), f2.clone()), Grad(f1.clone(), Grad(f2.clone(), f3.clone()).into())),
                ),
                _ => return None,
            },
            (Rule::Grad2, Grad(obj, f3)) => match &**obj {
                And(f1, f2) => Formula::and(Grad(f1.clone(), f3.clone()), Grad(f2.clone(), f3.clone())),
                _ => return None,
            },
            (Rule::Grad3, Grad(obj, f3)) => match &**obj {
                Or(f1, f2) => Formula::or(Grad(f1.clone(), f3.clone()), Grad(f2.clone(), f3.clone())),
                _ => return None,
            },
            (Rule::Grad4, Grad(f1, attr)) => match &**attr {
                And(f2, f3) => Formula::and(Grad(f1.clone(), f2.clone()), Grad(f1.clone(), f3.clone())),
                _ => return None,
            },
            (Rule::Grad5, Grad(f1, attr)) => match &**attr {
                Or(f2, f3) => Formula::or(Grad(f1.clone(), f2.clone()), Grad(f1.clone(), f3.clone())),
                _ => return None,
            },
            _ => return None,
        };
        Some(out)
    }

    pub fn matches(self, f: &Formula) -> bool {
        use Formula::*;
        match (self, f) {
            (Rule::Neg1, Not(x)) => matches!(**x, Elem(_)),
            (Rule::Neg2, Not(x)) => matches!(**x, And(..)),
            (Rule::Neg3, Not(x)) => matches!(**x, Or(..)),
            (Rule::Neg4, Not(x)) => matches!(&**x, Grad(s, _) if matches!(**s, Elem(_))),
            (Rule::Grad1, Grad(o, _)) => matches!(**o, Grad(..)),
            (Rule::Grad2, Grad(o, _)) => matches!(**o, And(..)),
            (Rule::Grad3, Grad(o, _)) => matches!(**o, Or(..)),
            (Rule::Grad4, Grad(_, a)) => matches!(**a, And(..)),
            (Rule::Grad5, Grad(_, a)) => matches!(**a, Or(..)),
            _ => false,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every `(rule, position)` redex in `f`, in pre-order (root first, left before right).
pub fn applicable_rules(f: &Formula) -> Vec<(Rule, Vec<usize>)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_redexes(f, &mut path, &mut out);
    out
}

fn collect_redexes(f: &Formula, path: &mut Vec<usize>, out: &mut Vec<(Rule, Vec<usize>)>) {
    for rule in Rule::ALL {
        if rule.matches(f) {
            out.push((rule, path.clone()));
        }
    }
    for (i, child) in f.children().into_iter().enumerate() {
        path.push(i);
        collect_redexes(child, path, out);
        path.pop();
    }
}

/// Rewrites the redex at `position` with `rule`.
pub fn apply_rule(f: &Formula, rule: Rule, position: &[usize]) -> Result<Formula, Error> {
    let sub = f.subterm(position).ok_or_else(|| Error::BadPosition(position.to_vec()))?;
    let new = rule.contract(sub).ok_or_else(|| Error::NotARedex { rule, position: position.to_vec() })?;
    f.replace_at(position, new)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub rule: Rule,
    pub position: Vec<usize>,
    pub before: Formula,
    pub after: Formula,
}

impl ReductionStep {
    /// `<rule> @ <path>: <before-subterm> => <after-subterm>`
    pub fn render(&self) -> String {
        let before = self.before.subterm(&self.position).expect("step position is valid");
        let after = self.after.subterm(&self.position).expect("step position is valid");
        format!("{} @ {}: {} => {}", self.rule, render_path(&self.position), before, after)
    }
}

pub fn render_path(path: &[usize]) -> String {
    let inner: Vec<String> = path.iter().map(usize::to_string).collect();
    format!("[{}]", inner.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: Formula,
    pub steps: Vec<ReductionStep>,
    pub final_formula: Formula,
}

impl Trace {
    pub fn render(&self) -> Vec<String> {
        self.steps.iter().map(ReductionStep::render).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Innermost-leftmost; arguments of `¬` and `⋗` are normalized first.
    Deterministic,
    /// Uniform choice among all redexes, driven by a seeded generator.
    Random(u64),
}

/// Reduces `f` to unit chain expansion, recording every step.
pub fn reduce_to_uce(f: &Formula, strategy: Strategy) -> Trace {
    match strategy {
        Strategy::Deterministic => {
            let mut n = Normalizer { current: f.clone(), steps: Some(Vec::new()) };
            let out = n.norm(f, &mut Vec::new());
            debug_assert_eq!(out, n.current);
            Trace { initial: f.clone(), steps: n.steps.unwrap_or_default(), final_formula: out }
        }
        Strategy::Random(seed) => {
            let mut steps = Vec::new();
            let out = random_walk(f, seed, |s| steps.push(s));
            Trace { initial: f.clone(), steps, final_formula: out }
        }
    }
}

/// Deterministic normal form without keeping a trace.
pub fn normalize(f: &Formula) -> Formula {
    Normalizer { current: Formula::top(), steps: None }.norm(f, &mut Vec::new())
}

/// Normal form under `strategy` without keeping a trace.
pub fn normalize_with(f: &Formula, strategy: Strategy) -> Formula {
    match strategy {
        Strategy::Deterministic => normalize(f),
        Strategy::Random(seed) => random_walk(f, seed, |_| {}),
    }
}

fn random_walk(f: &Formula, seed: u64, mut on_step: impl FnMut(ReductionStep)) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut root = WNode::from_formula(f);
    while root.total > 0 {
        let (rule, position) = root.nth_redex(rng.gen_range(0..root.total));
        let next = root.rewrite_at(&position, rule);
        on_step(ReductionStep { rule, position, before: root.f.clone(), after: next.f.clone() });
        root = next;
    }
    root.f.clone()
}

/// Working tree for the random walk: each node carries its formula and the
/// number of redexes in its subtree, so a uniformly chosen redex is located
/// and rewritten in time proportional to its depth.
#[derive(Debug)]
struct WNode {
    f: Formula,
    own: Vec<Rule>,
    total: usize,
    kids: Vec<Arc<WNode>>,
}

#[derive(Clone, Copy)]
enum Shape {
    And,
    Or,
    Not,
    Grad,
}

impl WNode {
    fn from_formula(f: &Formula) -> Arc<WNode> {
        match f {
            Formula::Elem(s) => Self::leaf(s.clone()),
            Formula::Not(x) => Self::node(Shape::Not, vec![Self::from_formula(x)]),
            Formula::And(l, r) => Self::node(Shape::And, vec![Self::from_formula(l), Self::from_formula(r)]),
            Formula::Or(l, r) => Self::node(Shape::Or, vec![Self::from_formula(l), Self::from_formula(r)]),
            Formula::Grad(l, r) => Self::node(Shape::Grad, vec![Self::from_formula(l), Self::from_formula(r)]),
        }
    }

    fn leaf(s: crate::formula::SElem) -> Arc<WNode> {
        Arc::new(WNode { f: Formula::Elem(s), own: Vec::new(), total: 0, kids: Vec::new() })
    }

    fn node(shape: Shape, kids: Vec<Arc<WNode>>) -> Arc<WNode> {
        let arc = |i: usize| Arc::new(kids[i].f.clone());
        let f = match shape {
            Shape::Not => Formula::Not(arc(0)),
            Shape::And => Formula::And(arc(0), arc(1)),
            Shape::Or => Formula::Or(arc(0), arc(1)),
            Shape::Grad => Formula::Grad(arc(0), arc(1)),
        };
        let own: Vec<Rule> = Rule::ALL.into_iter().filter(|r| r.matches(&f)).collect();
        let total = own.len() + kids.iter().map(|k| k.total).sum::<usize>();
        Arc::new(WNode { f, own, total, kids })
    }

    fn bin(shape: Shape, l: Arc<WNode>, r: Arc<WNode>) -> Arc<WNode> {
        Self::node(shape, vec![l, r])
    }

    fn not(x: Arc<WNode>) -> Arc<WNode> {
        Self::node(Shape::Not, vec![x])
    }

    /// The `n`-th redex in the same pre-order as [`applicable_rules`].
    fn nth_redex(&self, mut n: usize) -> (Rule, Vec<usize>) {
        let mut path = Vec::new();
        let mut cur = self;
        loop {
            if n < cur.own.len() {
                return (cur.own[n], path);
            }
            n -= cur.own.len();
            let (i, kid) = cur
                .kids
                .iter()
                .enumerate()
                .find(|(_, k)| {
                    if n < k.total {
                        true
                    } else {
                        n -= k.total;
                        false
                    }
                })
                .expect("redex index within subtree total");
            path.push(i);
            cur = kid;
        }
    }

    fn rewrite_at(self: &Arc<WNode>, path: &[usize], rule: Rule) -> Arc<WNode> {
        let Some((&i, rest)) = path.split_first() else {
            return self.contract(rule);
        };
        let mut kids = self.kids.clone();
        kids[i] = kids[i].rewrite_at(rest, rule);
        let shape = match &self.f {
            Formula::Not(_) => Shape::Not,
            Formula::And(..) => Shape::And,
            Formula::Or(..) => Shape::Or,
            Formula::Grad(..) => Shape::Grad,
            Formula::Elem(_) => unreachable!("leaves have no children"),
        };
        Self::node(shape, kids)
    }

    fn contract(self: &Arc<WNode>, rule: Rule) -> Arc<WNode> {
        use Shape::*;
        let k = |n: &Arc<WNode>, i: usize| n.kids[i].clone();
        let x = || k(self, 0);
        let y = || k(self, 1);
        match rule {
            Rule::Neg1 => Self::leaf(x().f.as_elem().expect("NEG1 redex").complement()),
            Rule::Neg2 => Self::bin(Or, Self::not(k(&x(), 0)), Self::not(k(&x(), 1))),
            Rule::Neg3 => Self::bin(And, Self::not(k(&x(), 0)), Self::not(k(&x(), 1))),
            Rule::Neg4 => {
                let (s, rest) = (k(&x(), 0), k(&x(), 1));
                let sc = Self::leaf(s.f.as_elem().expect("NEG4 redex").complement());
                Self::bin(Or, sc, Self::bin(Grad, s, Self::not(rest)))
            }
            Rule::Grad1 => {
                let (obj, f3) = (x(), y());
                let (f1, f2) = (k(&obj, 0), k(&obj, 1));
                let tail = Self::bin(Grad, f2, f3.clone());
                Self::bin(And, Self::bin(Grad, f1.clone(), f3), Self::bin(Or, obj, Self::bin(Grad, f1, tail)))
            }
            Rule::Grad2 | Rule::Grad3 => {
                let (obj, f3) = (x(), y());
                let shape = if rule == Rule::Grad2 { And } else { Or };
                Self::bin(shape, Self::bin(Grad, k(&obj, 0), f3.clone()), Self::bin(Grad, k(&obj, 1), f3))
            }
            Rule::Grad4 | Rule::Grad5 => {
                let (f1, attr) = (x(), y());
                let shape = if rule == Rule::Grad4 { And } else { Or };
                Self::bin(shape, Self::bin(Grad, f1.clone(), k(&attr, 0)), Self::bin(Grad, f1, k(&attr, 1)))
            }
        }
    }
}

/// Recursive deterministic normalizer. When tracing, `current` mirrors the
/// whole formula so each step can be recorded with full before/after views.
struct Normalizer {
    current: Formula,
    steps: Option<Vec<ReductionStep>>,
}

impl Normalizer {
    fn record(&mut self, rule: Rule, path: &[usize], contractum: &Formula) {
        if let Some(steps) = &mut self.steps {
            let after = self.current.replace_at(path, contractum.clone()).expect("normalizer path is valid");
            let before = std::mem::replace(&mut self.current, after.clone());
            steps.push(ReductionStep { rule, position: path.to_vec(), before, after });
        }
    }

    fn with_child<T>(
        &mut self,
        path: &mut Vec<usize>,
        idx: &[usize],
        f: impl FnOnce(&mut Self, &mut Vec<usize>) -> T,
    ) -> T {
        let depth = path.len();
        path.extend_from_slice(idx);
        let out = f(self, path);
        path.truncate(depth);
        out
    }

    fn norm(&mut self, f: &Formula, path: &mut Vec<usize>) -> Formula {
        match f {
            Formula::Elem(_) => f.clone(),
            Formula::And(l, r) | Formula::Or(l, r) => {
                let l = self.with_child(path, &[0], |n, p| n.norm(l, p));
                let r = self.with_child(path, &[1], |n, p| n.norm(r, p));
                if matches!(f, Formula::And(..)) {
                    Formula::and(l, r)
                } else {
                    Formula::or(l, r)
                }
            }
            Formula::Not(x) => {
                let x = self.with_child(path, &[0], |n, p| n.norm(x, p));
                self.negate(x, path)
            }
            Formula::Grad(l, r) => {
                let l = self.with_child(path, &[0], |n, p| n.norm(l, p));
                let r = self.with_child(path, &[1], |n, p| n.norm(r, p));
                self.link(l, r, path)
            }
        }
    }

    /// Node at `path` is `¬g` with `g` in UCE.
    fn negate(&mut self, g: Formula, path: &mut Vec<usize>) -> Formula {
        let is_and = matches!(g, Formula::And(..));
        match g {
            Formula::Elem(s) => {
                let out = Formula::Elem(s.complement());
                self.record(Rule::Neg1, path, &out);
                out
            }
            Formula::And(x, y) | Formula::Or(x, y) => {
                let (rule, mid) = if is_and {
                    (Rule::Neg2, Formula::or(Formula::Not(x.clone()), Formula::Not(y.clone())))
                } else {
                    (Rule::Neg3, Formula::and(Formula::Not(x.clone()), Formula::Not(y.clone())))
                };
                self.record(rule, path, &mid);
                let a = self.with_child(path, &[0], |n, p| n.negate((*x).clone(), p));
                let b = self.with_child(path, &[1], |n, p| n.negate((*y).clone(), p));
                if is_and {
                    Formula::or(a, b)
                } else {
                    Formula::and(a, b)
                }
            }
            Formula::Grad(s, t) => {
                let head = s.as_elem().expect("UCE chain head is an S-element").clone();
                let mid = Formula::or(
                    Formula::Elem(head.complement()),
                    Formula::Grad(s.clone(), Formula::Not(t.clone()).into()),
                );
                self.record(Rule::Neg4, path, &mid);
                let t = self.with_child(path, &[1, 1], |n, p| n.negate((*t).clone(), p));
                let linked = self.with_child(path, &[1], |n, p| n.link((*s).clone(), t, p));
                Formula::or(Formula::Elem(head.complement()), linked)
            }
            _ => unreachable!("negate expects a formula in unit chain expansion"),
        }
    }

    /// Node at `path` is `a ⋗ b` with `a` and `b` in UCE.
    fn link(&mut self, a: Formula, b: Formula, path: &mut Vec<usize>) -> Formula {
        match (&a, &b) {
            (Formula::And(a1, a2) | Formula::Or(a1, a2), _) => {
                let is_and = matches!(a, Formula::And(..));
                let l = Formula::Grad(a1.clone(), b.clone().into());
                let r = Formula::Grad(a2.clone(), b.clone().into());
                let (rule, mid) =
                    if is_and { (Rule::Grad2, Formula::and(l, r)) } else { (Rule::Grad3, Formula::or(l, r)) };
                self.record(rule, path, &mid);
                let x = self.with_child(path, &[0], |n, p| n.link((**a1).clone(), b.clone(), p));
                let y = self.with_child(path, &[1], |n, p| n.link((**a2).clone(), b.clone(), p));
                if is_and {
                    Formula::and(x, y)
                } else {
                    Formula::or(x, y)
                }
            }
            (_, Formula::And(b1, b2) | Formula::Or(b1, b2)) => {
                let is_and = matches!(b, Formula::And(..));
                let l = Formula::Grad(a.clone().into(), b1.clone());
                let r = Formula::Grad(a.clone().into(), b2.clone());
                let (rule, mid) =
                    if is_and { (Rule::Grad4, Formula::and(l, r)) } else { (Rule::Grad5, Formula::or(l, r)) };
                self.record(rule, path, &mid);
                let x = self.with_child(path, &[0], |n, p| n.link(a.clone(), (**b1).clone(), p));
                let y = self.with_child(path, &[1], |n, p| n.link(a.clone(), (**b2).clone(), p));
                if is_and {
                    Formula::and(x, y)
                } else {
                    Formula::or(x, y)
                }
            }
            (Formula::Grad(a1, a2), _) => {
                let mid = Rule::Grad1.contract(&Formula::grad(a.clone(), b.clone())).expect("GRAD1 redex");
                self.record(Rule::Grad1, path, &mid);
                // tail first: a2 ⋗ b, then a1 ⋗ (that)
                let inner = self.with_child(path, &[1, 1, 1], |n, p| n.link((**a2).clone(), b.clone(), p));
                let outer = self.with_child(path, &[1, 1], |n, p| n.link((**a1).clone(), inner, p));
                Formula::and(Formula::Grad(a1.clone(), b.clone().into()), Formula::or(a.clone(), outer))
            }
            _ => Formula::grad(a, b),
        }
    }
}

/// Canonical negation of a UCE formula: swap ∧/∨, complement non-chain
/// elements, and turn each chain `s ⋗ T` into `s^c ∨ (s ⋗ rr(T))` pushed
/// through ∧/∨ with ⋗ reductions 4 and 5.
pub fn recursive_reduce(f: &Formula) -> Result<Formula, Error> {
    f.ensure_uce()?;
    Ok(rr(f))
}

fn rr(f: &Formula) -> Formula {
    match f {
        Formula::Elem(s) => Formula::Elem(s.complement()),
        Formula::And(l, r) => Formula::or(rr(l), rr(r)),
        Formula::Or(l, r) => Formula::and(rr(l), rr(r)),
        Formula::Grad(s, tail) => {
            let head = s.as_elem().expect("UCE chain head").clone();
            Formula::or(Formula::Elem(head.complement()), distribute(s, rr(tail)))
        }
        Formula::Not(_) => unreachable!("checked UCE"),
    }
}

fn distribute(head: &Arc<Formula>, g: Formula) -> Formula {
    match g {
        Formula::And(x, y) => Formula::and(distribute(head, (*x).clone()), distribute(head, (*y).clone())),
        Formula::Or(x, y) => Formula::or(distribute(head, (*x).clone()), distribute(head, (*y).clone())),
        other => Formula::Grad(head.clone(), other.into()),
    }
}

/// Leaves and unit chains: the atoms of DNF/CNF.
fn is_nf_atom(f: &Formula) -> bool {
    matches!(f, Formula::Elem(_)) || f.is_unit_chain()
}

fn clauses(f: &Formula, outer_is_or: bool) -> Vec<Vec<Formula>> {
    match f {
        Formula::Or(l, r) | Formula::And(l, r) => {
            let is_or = matches!(f, Formula::Or(..));
            let mut a = clauses(l, outer_is_or);
            let b = clauses(r, outer_is_or);
            if is_or == outer_is_or {
                a.extend(b);
                a
            } else {
                let mut out = Vec::with_capacity(a.len() * b.len());
                for x in &a {
                    for y in &b {
                        let mut c = x.clone();
                        c.extend(y.iter().cloned());
                        out.push(c);
                    }
                }
                out
            }
        }
        _ => vec![vec![f.clone()]],
    }
}

fn assemble(
    cls: Vec<Vec<Formula>>,
    outer: fn(Formula, Formula) -> Formula,
    inner: fn(Formula, Formula) -> Formula,
) -> Formula {
    cls.into_iter()
        .map(|c| c.into_iter().reduce(inner).expect("clause is non-empty"))
        .reduce(outer)
        .expect("at least one clause")
}

/// `⋁ᵢ ⋀ⱼ fᵢⱼ` with every `fᵢⱼ` a leaf or unit chain.
pub fn to_dnf(f: &Formula) -> Result<Formula, Error> {
    f.ensure_uce()?;
    Ok(assemble(clauses(f, true), Formula::or, Formula::and))
}

/// `⋀ᵢ ⋁ⱼ fᵢⱼ` with every `fᵢⱼ` a leaf or unit chain.
pub fn to_cnf(f: &Formula) -> Result<Formula, Error> {
    f.ensure_uce()?;
    Ok(assemble(clauses(f, false), Formula::and, Formula::or))
}

fn is_flat(f: &Formula, outer_or: bool) -> bool {
    let is_inner = |g: &Formula| is_junction_of(g, !outer_or);
    match f {
        Formula::Or(l, r) if outer_or => is_flat(l, outer_or) && is_flat(r, outer_or),
        Formula::And(l, r) if !outer_or => is_flat(l, outer_or) && is_flat(r, outer_or),
        g => is_inner(g),
    }
}

fn is_junction_of(f: &Formula, or: bool) -> bool {
    match f {
        Formula::Or(l, r) if or => is_junction_of(l, or) && is_junction_of(r, or),
        Formula::And(l, r) if !or => is_junction_of(l, or) && is_junction_of(r, or),
        g => is_nf_atom(g),
    }
}

pub fn is_dnf(f: &Formula) -> bool {
    is_flat(f, true)
}

pub fn is_cnf(f: &Formula) -> bool {
    is_flat(f, false)
}
