//! The fundamental category of a truncated simplicial set, presented by
//! generators (non-degenerate edges) and relations (2-simplices), computed by
//! Knuth-Bendix completion of the typed path rewriting system.

use std::collections::{HashMap, VecDeque};

use super::{FinCat, Morphism};
use crate::error::{Error, Result};
use crate::sset::TruncSSet;

/// Default number of rewriting steps before giving up.
pub const DEFAULT_BUDGET: usize = 10_000;

/// Reads the budget override from `SDKIT_BUDGET`, falling back to
/// [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var("SDKIT_BUDGET").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug)]
pub struct FundamentalCategory {
    pub cat: FinCat,
    /// The morphism represented by each edge of the simplicial set.
    pub edge_class: Vec<usize>,
}

type Word = Vec<u32>;

fn shortlex_greater(a: &Word, b: &Word) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a > b)
}

struct Rewriter {
    rules: Vec<(Word, Word)>,
}

impl Rewriter {
    fn find_redex(&self, w: &[u32]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            for (ri, (l, _)) in self.rules.iter().enumerate() {
                if w.len() - start >= l.len() && w[start..start + l.len()] == l[..] {
                    return Some((start, ri));
                }
            }
        }
        None
    }

    fn reduce(&self, mut w: Word, steps: &mut usize, budget: usize) -> Result<Word> {
        while let Some((start, ri)) = self.find_redex(&w) {
            *steps += 1;
            if *steps > budget {
                return Err(budget_error(*steps));
            }
            let (l, r) = &self.rules[ri];
            w.splice(start..start + l.len(), r.iter().copied());
        }
        Ok(w)
    }

    fn has_suffix_redex(&self, w: &[u32]) -> bool {
        self.rules.iter().any(|(l, _)| w.ends_with(l))
    }
}

fn budget_error(steps: usize) -> Error {
    Error::BudgetExceeded {
        steps,
        what: "fundamental category presentation does not saturate".into(),
    }
}

/// Objects are the vertices of `x`; morphisms are normal forms of paths.
pub fn fundamental_category(x: &TruncSSet, budget: usize) -> Result<FundamentalCategory> {
    if x.dim() < 2 {
        return Err(Error::OutOfTruncation("the fundamental category needs 2-simplices".into()));
    }
    let nedges = x.level_len(1);
    let mut letter = vec![u32::MAX; nedges];
    let mut gens = Vec::new();
    for e in 0..nedges {
        if !x.is_degenerate(1, e) {
            letter[e] = gens.len() as u32;
            gens.push(e);
        }
    }
    let src = |g: u32| x.face(1, 1, gens[g as usize]);
    let tgt = |g: u32| x.face(1, 0, gens[g as usize]);
    let word_of = |e: usize| -> Word { if letter[e] == u32::MAX { Vec::new() } else { vec![letter[e]] } };

    let mut pending: VecDeque<(Word, Word)> = VecDeque::new();
    for t in 0..x.level_len(2) {
        let mut lhs = word_of(x.face(2, 2, t));
        lhs.extend(word_of(x.face(2, 0, t)));
        pending.push_back((lhs, word_of(x.face(2, 1, t))));
    }

    let mut rw = Rewriter { rules: Vec::new() };
    let mut steps = 0usize;
    while let Some((a, b)) = pending.pop_front() {
        steps += 1;
        if steps > budget {
            return Err(budget_error(steps));
        }
        let a = rw.reduce(a, &mut steps, budget)?;
        let b = rw.reduce(b, &mut steps, budget)?;
        if a == b {
            continue;
        }
        let (l, r) = if shortlex_greater(&a, &b) { (a, b) } else { (b, a) };
        // rules whose left side contains the new one are retired and re-queued
        let mut kept = Vec::with_capacity(rw.rules.len());
        for (rl, rr) in rw.rules.drain(..) {
            if rl.windows(l.len()).any(|w| w == &l[..]) {
                pending.push_back((rl, rr));
            } else {
                kept.push((rl, rr));
            }
        }
        rw.rules = kept;
        rw.rules.push((l, r));
        for i in 0..rw.rules.len() {
            let rhs = std::mem::take(&mut rw.rules[i].1);
            rw.rules[i].1 = rw.reduce(rhs, &mut steps, budget)?;
        }
        let new = rw.rules.len() - 1;
        for j in 0..rw.rules.len() {
            for (p, q) in [(new, j), (j, new)] {
                let (l1, r1) = &rw.rules[p];
                let (l2, r2) = &rw.rules[q];
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let mut left = r1.clone();
                        left.extend_from_slice(&l2[k..]);
                        let mut right = l1[..l1.len() - k].to_vec();
                        right.extend_from_slice(r2);
                        pending.push_back((left, right));
                    }
                }
            }
        }
    }

    // enumerate normal forms breadth first
    let nobj = x.level_len(0);
    let mut out_letters: Vec<Vec<u32>> = vec![Vec::new(); nobj];
    for g in 0..gens.len() as u32 {
        out_letters[src(g)].push(g);
    }
    let mut forms: Vec<(usize, Word)> = (0..nobj).map(|o| (o, Vec::new())).collect();
    let mut frontier: Vec<usize> = (0..nobj).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for idx in frontier {
            let (o, w) = forms[idx].clone();
            let end = w.last().map_or(o, |&g| tgt(g));
            for &g in &out_letters[end] {
                let mut w2 = w.clone();
                w2.push(g);
                if !rw.has_suffix_redex(&w2) {
                    next.push(forms.len());
                    forms.push((o, w2));
                    if steps + forms.len() > budget {
                        return Err(budget_error(steps + forms.len()));
                    }
                }
            }
        }
        frontier = next;
    }

    let index: HashMap<(usize, Word), usize> = forms.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let morphisms: Vec<Morphism> = forms
        .iter()
        .map(|(o, w)| {
            let name = if w.is_empty() {
                format!("id_{}", x.label(0, *o))
            } else {
                w.iter().map(|&g| x.label(1, gens[g as usize]).to_string()).collect::<Vec<_>>().join(";")
            };
            let t = w.last().map_or(*o, |&g| tgt(g));
            Morphism { name, src: *o, tgt: t }
        })
        .collect();
    let objects = (0..nobj).map(|o| x.label(0, o).to_string()).collect();
    let mut scratch = 0;
    let mut compose = |g: usize, f: usize| {
        let mut w = forms[f].1.clone();
        w.extend_from_slice(&forms[g].1);
        let w = rw.reduce(w, &mut scratch, usize::MAX).expect("unbounded reduction");
        index[&(forms[f].0, w)]
    };
    let mut table = HashMap::new();
    let mut out_of = vec![Vec::new(); nobj];
    for (i, m) in morphisms.iter().enumerate() {
        out_of[m.src].push(i);
    }
    for f in 0..morphisms.len() {
        for &g in &out_of[morphisms[f].tgt] {
            table.insert((g, f), compose(g, f));
        }
    }
    let cat = FinCat::new_unchecked(objects, morphisms, (0..nobj).collect(), table)?;
    let edge_class = (0..nedges)
        .map(|e| {
            let s = x.face(1, 1, e);
            let w = rw.reduce(word_of(e), &mut scratch, usize::MAX).expect("unbounded reduction");
            index[&(s, w)]
        })
        .collect();
    Ok(FundamentalCategory { cat, edge_class })
}
