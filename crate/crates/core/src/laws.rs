//! Randomized law checks behind `check-laws`.
//!
//! Every suite draws its instances from one seeded generator, runs `iters`
//! cases and counts passes and failures. A failing case keeps a short
//! description of the first counterexample.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decide::{self, decide_valid, Engine, LevelInterpretation};
use crate::formula::{AtomName, Formula, SElem};
use crate::gen::{self, atom_names, GenConfig};
use crate::reduce::{is_cnf, is_dnf, normalize, normalize_with, recursive_reduce, to_cnf, to_dnf, Strategy};
use crate::semantics::{classify_oracle, enumerate_frames, eval, ValuationFrame, VerdictClass};

/// Frames are enumerated exhaustively up to this many bits, sampled above it.
pub const EXHAUSTIVE_FRAME_BITS: usize = 16;
pub const SAMPLED_FRAMES: usize = 64;
/// Random reduction orders compared against the deterministic one.
pub const RANDOM_ORDERS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawConfig {
    pub iters: usize,
    pub seed: u64,
    pub max_atoms: usize,
    /// Maximal object level of generated instances.
    pub max_depth: usize,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig { iters: 200, seed: 0, max_atoms: 3, max_depth: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, passed: 0, failed: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

type Suite = fn(&mut ChaCha8Rng, &LawConfig) -> SuiteResult;

pub const SUITES: [(&str, Suite); 15] = [
    ("termination", termination),
    ("value-normalization", value_normalization),
    ("negation-canonicity", negation_canonicity),
    ("bisimulation", bisimulation),
    ("normal-forms", normal_forms),
    ("elementary-complementation", elementary_complementation),
    ("boolean-algebra", boolean_algebra),
    ("double-negation", double_negation),
    ("non-paraconsistency", non_paraconsistency),
    ("classical-fragment", classical_fragment),
    ("decide-agreement", decide_agreement),
    ("depth-bound", depth_bound),
    ("cost-bound-per-call", cost_bound_per_call),
    ("shared-early-exit", shared_early_exit),
    ("witnesses", witnesses),
];

/// Runs every suite in order with one generator seeded from `cfg.seed`.
pub fn run_all(cfg: &LawConfig) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    SUITES.iter().map(|(_, suite)| suite(&mut rng, cfg)).collect()
}

/// Runs the named suite alone, seeded from `cfg.seed`.
pub fn run_suite(name: &str, cfg: &LawConfig) -> Option<SuiteResult> {
    let (_, suite) = SUITES.iter().find(|(n, _)| *n == name)?;
    Some(suite(&mut ChaCha8Rng::seed_from_u64(cfg.seed), cfg))
}

// ---- instance generation ----

fn atoms_of(cfg: &LawConfig) -> Vec<AtomName> {
    atom_names(cfg.max_atoms.max(1))
}

/// Random formula whose deterministic reduct stays within `max_depth`.
fn bounded_formula(rng: &mut ChaCha8Rng, cfg: &LawConfig, max_neg: usize, grad: bool) -> Formula {
    let gc = GenConfig { atoms: cfg.max_atoms.max(1), max_size: 12, max_neg, grad };
    loop {
        let f = gen::random_formula(rng, &gc);
        if normalize(&f).max_object_level().is_ok_and(|l| l <= cfg.max_depth) {
            return f;
        }
    }
}

fn random_uce(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> Formula {
    gen::random_uce(rng, &atoms_of(cfg), cfg.max_depth, 4)
}

fn random_frame(rng: &mut ChaCha8Rng, atoms: &BTreeSet<AtomName>, depth: usize) -> ValuationFrame {
    let universe: Arc<[AtomName]> = atoms.iter().cloned().collect();
    let mask = if universe.len() >= 64 { u64::MAX } else { (1u64 << universe.len()) - 1 };
    let levels = (0..=depth).map(|_| rng.gen::<u64>() & mask).collect();
    ValuationFrame::from_bits(universe, levels)
}

/// Every frame over `atoms` up to `depth` when small enough, a random sample otherwise.
pub fn frames_for(rng: &mut ChaCha8Rng, atoms: &BTreeSet<AtomName>, depth: usize) -> Vec<ValuationFrame> {
    if atoms.len() * (depth + 1) <= EXHAUSTIVE_FRAME_BITS {
        enumerate_frames(atoms, depth).expect("below the enumeration cap").collect()
    } else {
        (0..SAMPLED_FRAMES).map(|_| random_frame(rng, atoms, depth)).collect()
    }
}

fn level(f: &Formula) -> usize {
    f.max_object_level().expect("UCE formula")
}

fn value(frame: &ValuationFrame, f: &Formula) -> bool {
    eval(frame, f).expect("frame covers the formula")
}

fn all_reducts(rng: &mut ChaCha8Rng, f: &Formula) -> Vec<Formula> {
    let mut out = vec![normalize(f)];
    for _ in 0..RANDOM_ORDERS {
        out.push(normalize_with(f, Strategy::Random(rng.gen())));
    }
    out
}

// ---- reduce ----

fn termination(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("termination");
    let gc = GenConfig { atoms: cfg.max_atoms.max(1), max_size: 25, max_neg: 3, grad: true };
    for _ in 0..cfg.iters {
        let f = gen::random_formula(rng, &gc);
        let reducts = all_reducts(rng, &f);
        res.record(reducts.iter().all(Formula::is_unit_chain_expansion), || f.to_string());
    }
    res
}

fn value_normalization(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("value-normalization");
    for _ in 0..cfg.iters {
        let f = bounded_formula(rng, cfg, 3, true);
        let reducts = all_reducts(rng, &f);
        let depth = reducts.iter().map(level).max().unwrap_or(0);
        let frames = frames_for(rng, &f.atoms(), depth);
        let ok = frames.iter().all(|m| reducts.iter().all(|r| value(m, r) == value(m, &reducts[0])));
        res.record(ok, || f.to_string());
    }
    res
}

fn negation_canonicity(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("negation-canonicity");
    for _ in 0..cfg.iters {
        let f = random_uce(rng, cfg);
        let expected = recursive_reduce(&f).expect("generated UCE");
        let reducts = all_reducts(rng, &Formula::not(f.clone()));
        res.record(reducts.iter().all(|r| *r == expected), || f.to_string());
    }
    res
}

/// A random leaf position of `host`, used as the hole of a context.
fn random_hole(rng: &mut ChaCha8Rng, host: &Formula) -> Vec<usize> {
    let mut paths = Vec::new();
    leaf_paths(host, &mut Vec::new(), &mut paths);
    paths.swap_remove(rng.gen_range(0..paths.len()))
}

fn leaf_paths(f: &Formula, here: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let kids = f.children();
    if kids.is_empty() {
        out.push(here.clone());
    }
    for (i, k) in kids.into_iter().enumerate() {
        here.push(i);
        leaf_paths(k, here, out);
        here.pop();
    }
}

fn bisimulation_pair(rng: &mut ChaCha8Rng, cfg: &LawConfig, kind: usize) -> (Formula, Formula) {
    let atoms = atoms_of(cfg);
    let small = |rng: &mut ChaCha8Rng, neg: usize| {
        let gc = GenConfig { atoms: atoms.len(), max_size: 4, max_neg: neg, grad: true };
        gen::random_formula(rng, &gc)
    };
    let neg = if kind < 5 { 0 } else { 1 };
    let (a, b, c) = (small(rng, neg), small(rng, neg), small(rng, neg));
    let s = Formula::Elem(gen::random_selem(rng, &atoms));
    use Formula as F;
    match kind {
        0 => (F::grad(F::and(a.clone(), b.clone()), c.clone()), F::and(F::grad(a, c.clone()), F::grad(b, c))),
        1 => (F::grad(F::or(a.clone(), b.clone()), c.clone()), F::or(F::grad(a, c.clone()), F::grad(b, c))),
        2 => (F::grad(a.clone(), F::and(b.clone(), c.clone())), F::and(F::grad(a.clone(), b), F::grad(a, c))),
        3 => (F::grad(a.clone(), F::or(b.clone(), c.clone())), F::or(F::grad(a.clone(), b), F::grad(a, c))),
        4 => {
            let rhs = F::and(
                F::grad(a.clone(), c.clone()),
                F::or(F::grad(a.clone(), b.clone()), F::grad(a.clone(), F::grad(b.clone(), c.clone()))),
            );
            (F::grad(F::grad(a, b), c), rhs)
        }
        5 => (F::not(F::and(a.clone(), b.clone())), F::or(F::not(a), F::not(b))),
        6 => (F::not(F::or(a.clone(), b.clone())), F::and(F::not(a), F::not(b))),
        7 => (F::or(s.clone(), s.clone()), s),
        8 => (F::or(F::or(s.clone(), a.clone()), s.clone()), F::or(s, a)),
        9 => (F::and(s.clone(), s.clone()), s),
        10 => (F::and(F::and(s.clone(), a.clone()), s.clone()), F::and(s, a)),
        _ => {
            let e = s.as_elem().expect("leaf").clone();
            (F::Elem(e.complement()), F::not(F::Elem(e)))
        }
    }
}

/// Pairs that differ by one listed sub-formula have reducts of equal value.
fn bisimulation(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("bisimulation");
    let host_cfg = GenConfig { atoms: cfg.max_atoms.max(1), max_size: 5, max_neg: 0, grad: true };
    for i in 0..cfg.iters {
        let kind = i % 12;
        let (l, r) = bisimulation_pair(rng, cfg, kind);
        let host = gen::random_formula(rng, &host_cfg);
        let hole = random_hole(rng, &host);
        let fl = host.replace_at(&hole, l).expect("hole exists");
        let fr = host.replace_at(&hole, r).expect("hole exists");
        let mut reducts = all_reducts(rng, &fl);
        reducts.extend(all_reducts(rng, &fr));
        let depth = reducts.iter().map(level).max().unwrap_or(0);
        let mut atoms = fl.atoms();
        atoms.extend(fr.atoms());
        if atoms.len() * (depth + 1) > EXHAUSTIVE_FRAME_BITS + 8 {
            continue;
        }
        let frames = frames_for(rng, &atoms, depth);
        let ok = frames.iter().all(|m| reducts.iter().all(|x| value(m, x) == value(m, &reducts[0])));
        res.record(ok, || format!("{fl}  vs  {fr}"));
    }
    res
}

fn normal_forms(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("normal-forms");
    for _ in 0..cfg.iters {
        let f = random_uce(rng, cfg);
        let (d, c) = (to_dnf(&f).expect("UCE"), to_cnf(&f).expect("UCE"));
        let frames = frames_for(rng, &f.atoms(), level(&f));
        let ok = is_dnf(&d)
            && is_cnf(&c)
            && frames.iter().all(|m| value(m, &d) == value(m, &f) && value(m, &c) == value(m, &f));
        res.record(ok, || f.to_string());
    }
    res
}

// ---- semantics ----

fn elementary_complementation(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("elementary-complementation");
    for _ in 0..cfg.iters {
        let u = gen::random_unit_chain(rng, &atoms_of(cfg), cfg.max_depth);
        let n = recursive_reduce(&u).expect("unit chain");
        let frames = frames_for(rng, &u.atoms(), level(&u));
        let ok = frames.iter().all(|m| u8::from(value(m, &u)) + u8::from(value(m, &n)) == 1);
        res.record(ok, || u.to_string());
    }
    res
}

/// ∧/∨ laws at the value level, over arbitrary formulas reduced first.
fn boolean_algebra(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("boolean-algebra");
    for _ in 0..cfg.iters {
        let (f1, f2, f3) = (
            bounded_formula(rng, cfg, 2, true),
            bounded_formula(rng, cfg, 2, true),
            bounded_formula(rng, cfg, 2, true),
        );
        for (law, l, r) in boolean_laws(&f1, &f2, &f3) {
            let (nl, nr) = (normalize(&l), normalize(&r));
            let mut atoms = l.atoms();
            atoms.extend(r.atoms());
            let m = random_frame(rng, &atoms, level(&nl).max(level(&nr)));
            res.record(value(&m, &nl) == value(&m, &nr), || format!("{law}: {l}  vs  {r}"));
        }
    }
    res
}

/// Each law as (name, left side, right side), instantiated with `a`, `b`, `c`.
pub fn boolean_laws(a: &Formula, b: &Formula, c: &Formula) -> Vec<(&'static str, Formula, Formula)> {
    use Formula as F;
    let (a, b, c) = (a.clone(), b.clone(), c.clone());
    vec![
        ("complementation-or", F::or(a.clone(), F::not(a.clone())), F::top()),
        ("complementation-and", F::and(a.clone(), F::not(a.clone())), F::bot()),
        ("double-negation", F::not(F::not(a.clone())), a.clone()),
        (
            "associativity-and",
            F::and(F::and(a.clone(), b.clone()), c.clone()),
            F::and(a.clone(), F::and(b.clone(), c.clone())),
        ),
        (
            "associativity-or",
            F::or(F::or(a.clone(), b.clone()), c.clone()),
            F::or(a.clone(), F::or(b.clone(), c.clone())),
        ),
        ("commutativity-and", F::and(a.clone(), b.clone()), F::and(b.clone(), a.clone())),
        ("commutativity-or", F::or(a.clone(), b.clone()), F::or(b.clone(), a.clone())),
        (
            "distributivity-and",
            F::and(a.clone(), F::or(b.clone(), c.clone())),
            F::or(F::and(a.clone(), b.clone()), F::and(a.clone(), c.clone())),
        ),
        (
            "distributivity-or",
            F::or(a.clone(), F::and(b.clone(), c.clone())),
            F::and(F::or(a.clone(), b.clone()), F::or(a.clone(), c.clone())),
        ),
        ("idempotence-and", F::and(a.clone(), a.clone()), a.clone()),
        ("idempotence-or", F::or(a.clone(), a.clone()), a.clone()),
        ("absorption-and", F::and(a.clone(), F::or(a.clone(), b.clone())), a.clone()),
        ("absorption-or", F::or(a.clone(), F::and(a.clone(), b.clone())), a.clone()),
        ("annihilation-or", F::or(a.clone(), F::top()), F::top()),
        ("annihilation-and", F::and(a.clone(), F::bot()), F::bot()),
        ("identity-and", F::and(a.clone(), F::top()), a.clone()),
        ("identity-or", F::or(a.clone(), F::bot()), a),
    ]
}

fn double_negation(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("double-negation");
    for _ in 0..cfg.iters {
        let f = random_uce(rng, cfg);
        let back = recursive_reduce(&recursive_reduce(&f).expect("UCE")).expect("UCE");
        let frames = frames_for(rng, &f.atoms(), level(&f));
        res.record(frames.iter().all(|m| value(m, &back) == value(m, &f)), || f.to_string());
    }
    res
}

fn non_paraconsistency(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("non-paraconsistency");
    for _ in 0..cfg.iters {
        let f = random_uce(rng, cfg);
        let n = recursive_reduce(&f).expect("UCE");
        let frames = frames_for(rng, &f.atoms(), level(&f));
        res.record(frames.iter().all(|m| value(m, &f) != value(m, &n)), || f.to_string());
    }
    res
}

/// Plain propositional value with `a'` read as the negation of `a`.
fn truth_value(f: &Formula, assignment: &dyn Fn(&AtomName) -> bool) -> bool {
    match f {
        Formula::Elem(SElem::Top) => true,
        Formula::Elem(SElem::Bot) => false,
        Formula::Elem(s @ SElem::Lit { name, .. }) => assignment(name) == (s == &SElem::pos(name.clone())),
        Formula::And(l, r) => truth_value(l, assignment) && truth_value(r, assignment),
        Formula::Or(l, r) => truth_value(l, assignment) || truth_value(r, assignment),
        Formula::Not(x) => !truth_value(x, assignment),
        Formula::Grad(..) => unreachable!("classical fragment is Grad-free"),
    }
}

fn classical_fragment(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("classical-fragment");
    let gc = GenConfig { atoms: cfg.max_atoms.max(1), max_size: 15, max_neg: 3, grad: false };
    for _ in 0..cfg.iters {
        let f = gen::random_formula(rng, &gc);
        let atoms: Vec<AtomName> = f.atoms().into_iter().collect();
        let (mut any_true, mut any_false) = (false, false);
        for bits in 0u64..1 << atoms.len() {
            let v = truth_value(&f, &|a| bits >> atoms.iter().position(|x| x == a).expect("own atom") & 1 == 1);
            any_true |= v;
            any_false |= !v;
        }
        let expected = match (any_true, any_false) {
            (true, false) => VerdictClass::Valid,
            (false, true) => VerdictClass::Unsatisfiable,
            _ => VerdictClass::Contingent,
        };
        let got = classify_oracle(&f).map(|v| v.class);
        res.record(got == Ok(expected), || f.to_string());
    }
    res
}

// ---- decide ----

/// A formula that is valid about half the time: `g ∨ ¬g` mixed with plain `g`.
fn decide_instance(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> Formula {
    let g = bounded_formula(rng, cfg, 2, true);
    match rng.gen_range(0..3) {
        0 => g,
        1 => Formula::or(g.clone(), Formula::not(g)),
        _ => {
            let h = bounded_formula(rng, cfg, 1, true);
            Formula::or(Formula::and(g.clone(), h), Formula::not(g))
        }
    }
}

fn decide_agreement(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("decide-agreement");
    for _ in 0..cfg.iters {
        let f = decide_instance(rng, cfg);
        let Ok(verdict) = classify_oracle(&f) else { continue };
        let got = decide_valid(&f, Engine::Levelwise).result;
        res.record(got == (verdict.class == VerdictClass::Valid), || f.to_string());
    }
    res
}

fn depth_bound(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("depth-bound");
    for _ in 0..cfg.iters {
        let f = normalize(&decide_instance(rng, cfg));
        let max = level(&f) + 1;
        let ok = [Engine::Levelwise, Engine::Faithful].iter().all(|e| decide_valid(&f, *e).recursion_depth_max <= max);
        res.record(ok, || f.to_string());
    }
    res
}

/// Each call examines at most 2^(atoms at its level) interpretations.
fn cost_bound_per_call(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("cost-bound-per-call");
    for _ in 0..cfg.iters {
        let f = normalize(&decide_instance(rng, cfg));
        let per_level = decide::atoms_by_level(&f);
        let ok = [Engine::Levelwise, Engine::Faithful].iter().all(|e| {
            let r = decide_valid(&f, *e);
            let bound: u128 = r
                .calls_per_level
                .iter()
                .enumerate()
                .map(|(l, calls)| u128::from(*calls) << per_level.get(l).map_or(0, BTreeSet::len))
                .sum();
            u128::from(r.frames_examined) <= bound
        });
        res.record(ok, || f.to_string());
    }
    res
}

/// A level-0 interpretation falsifying the level-0 projection forces 0 in both engines.
fn shared_early_exit(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("shared-early-exit");
    for _ in 0..cfg.iters {
        let f = normalize(&decide_instance(rng, cfg));
        let projection = decide::squash(&f, 0).expect("UCE");
        let atoms: Vec<AtomName> = projection.atoms().into_iter().collect();
        let falsifiable = LevelInterpretation::all(0, &atoms).any(|i| decide::falsified_at(&projection, &i));
        let ok =
            !falsifiable || (!decide_valid(&f, Engine::Levelwise).result && !decide_valid(&f, Engine::Faithful).result);
        res.record(ok, || f.to_string());
    }
    res
}

/// Oracle witnesses really evaluate as claimed.
fn witnesses(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> SuiteResult {
    let mut res = SuiteResult::new("witnesses");
    for _ in 0..cfg.iters {
        let f = decide_instance(rng, cfg);
        let Ok(v) = classify_oracle(&f) else { continue };
        let n = normalize(&f);
        let shape_ok = match v.class {
            VerdictClass::Valid => v.witness_false.is_none() && v.witness_true.is_some(),
            VerdictClass::Unsatisfiable => v.witness_true.is_none() && v.witness_false.is_some(),
            VerdictClass::Contingent => v.witness_true.is_some() && v.witness_false.is_some(),
        };
        let ok = shape_ok
            && v.witness_true.as_ref().is_none_or(|m| value(m, &n))
            && v.witness_false.as_ref().is_none_or(|m| !value(m, &n));
        res.record(ok, || f.to_string());
    }
    res
}
