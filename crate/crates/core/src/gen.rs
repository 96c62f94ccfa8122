//! Seeded random and exhaustive formula generation.

use rand::Rng;

use crate::formula::{AtomName, Formula, Polarity, SElem};

/// Atom names used by generators: `a`, `b`, … then `x10`, `x11`, ….
pub fn atom_names(n: usize) -> Vec<AtomName> {
    (0..n)
        .map(|i| {
            let name = if i < 10 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") };
            AtomName::new(&name).expect("generated names are valid")
        })
        .collect()
}

/// Every S-element over `atoms`: ⊤, ⊥, then each atom positive and negative.
pub fn all_selems(atoms: &[AtomName]) -> Vec<SElem> {
    let mut out = vec![SElem::Top, SElem::Bot];
    for a in atoms {
        out.push(SElem::pos(a.clone()));
        out.push(SElem::neg(a.clone()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub atoms: usize,
    pub max_size: usize,
    pub max_neg: usize,
    /// Allow the gradual connective.
    pub grad: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { atoms: 3, max_size: 15, max_neg: 2, grad: true }
    }
}

pub fn random_selem<R: Rng + ?Sized>(rng: &mut R, atoms: &[AtomName]) -> SElem {
    // ⊤ and ⊥ each with probability 1/10
    let roll = rng.gen_range(0..10);
    if atoms.is_empty() || roll == 0 {
        return if rng.gen() { SElem::Top } else { SElem::Bot };
    }
    if roll == 1 {
        return SElem::Top;
    }
    if roll == 2 {
        return SElem::Bot;
    }
    let name = atoms[rng.gen_range(0..atoms.len())].clone();
    let polarity = if rng.gen() { Polarity::Positive } else { Polarity::Negative };
    SElem::Lit { name, polarity }
}

/// Random formula with `f_size` uniform in `1..=max_size` and `neg_max ≤ max_neg`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula {
    let atoms = atom_names(cfg.atoms);
    let size = rng.gen_range(1..=cfg.max_size.max(1));
    sized(rng, &atoms, size, cfg.max_neg, cfg.grad)
}

fn sized<R: Rng + ?Sized>(rng: &mut R, atoms: &[AtomName], size: usize, negs: usize, grad: bool) -> Formula {
    if size == 1 {
        return Formula::Elem(random_selem(rng, atoms));
    }
    // size 2 can only be a negation; fall back to a leaf without budget
    if size == 2 {
        return if negs > 0 {
            Formula::not(sized(rng, atoms, 1, negs - 1, grad))
        } else {
            Formula::Elem(random_selem(rng, atoms))
        };
    }
    let choices = if grad { 3 } else { 2 };
    let pick = rng.gen_range(0..choices + usize::from(negs > 0));
    if pick == choices {
        return Formula::not(sized(rng, atoms, size - 1, negs - 1, grad));
    }
    let left = rng.gen_range(1..size - 1);
    let l = sized(rng, atoms, left, negs, grad);
    let r = sized(rng, atoms, size - 1 - left, negs, grad);
    match pick {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        _ => Formula::grad(l, r),
    }
}

/// Random unit chain with between 1 and `max_level + 1` elements.
pub fn random_unit_chain<R: Rng + ?Sized>(rng: &mut R, atoms: &[AtomName], max_level: usize) -> Formula {
    let len = rng.gen_range(1..=max_level + 1);
    Formula::chain((0..len).map(|_| Formula::Elem(random_selem(rng, atoms))).collect::<Vec<_>>())
}

/// Random ∧/∨ combination of `1..=max_parts` leaves and unit chains.
pub fn random_uce<R: Rng + ?Sized>(rng: &mut R, atoms: &[AtomName], max_level: usize, max_parts: usize) -> Formula {
    let parts = rng.gen_range(1..=max_parts.max(1));
    uce_parts(rng, atoms, max_level, parts)
}

fn uce_parts<R: Rng + ?Sized>(rng: &mut R, atoms: &[AtomName], max_level: usize, parts: usize) -> Formula {
    if parts == 1 {
        return random_unit_chain(rng, atoms, max_level);
    }
    let left = rng.gen_range(1..parts);
    let l = uce_parts(rng, atoms, max_level, left);
    let r = uce_parts(rng, atoms, max_level, parts - left);
    if rng.gen() {
        Formula::and(l, r)
    } else {
        Formula::or(l, r)
    }
}

/// All formulas of each size `1..=max_size` over the given leaves, indexed by size.
pub fn exhaustive(leaves: &[SElem], max_size: usize, grad: bool) -> Vec<Vec<Formula>> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return by_size;
    }
    by_size[1] = leaves.iter().cloned().map(Formula::Elem).collect();
    for n in 2..=max_size {
        let mut out: Vec<Formula> = by_size[n - 1].iter().cloned().map(Formula::not).collect();
        for left in 1..n - 1 {
            let right = n - 1 - left;
            for l in &by_size[left] {
                for r in &by_size[right] {
                    out.push(Formula::and(l.clone(), r.clone()));
                    out.push(Formula::or(l.clone(), r.clone()));
                    if grad {
                        out.push(Formula::grad(l.clone(), r.clone()));
                    }
                }
            }
        }
        by_size[n] = out;
    }
    by_size
}
