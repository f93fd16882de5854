//! Backtracking search for simplicial maps: enumeration of all maps between
//! small truncated simplicial sets, and isomorphism search (optionally over a
//! common base).

use std::collections::HashMap;
use std::sync::Arc;

use super::{SMap, TruncSSet};

/// Constraints for [`enumerate_smaps`].
#[derive(Default)]
pub struct MapSearch<'a> {
    /// Require every component to be injective.
    pub injective: bool,
    /// Only allow `a ↦ b` at level `n` when `allowed(n, a, b)`.
    pub allowed: Option<&'a dyn Fn(usize, usize, usize) -> bool>,
    /// Stop after this many maps.
    pub limit: Option<usize>,
    /// Require matching coface counts (used for isomorphism search).
    pub match_signatures: bool,
}

fn vertex_key(x: &TruncSSet, n: usize, e: usize) -> usize {
    (0..=n).map(|j| x.vertex(n, e, j)).max().unwrap_or(0)
}

fn signatures(x: &TruncSSet, d: usize) -> Vec<Vec<Vec<usize>>> {
    (0..=d)
        .map(|n| {
            let mut sig = vec![vec![0usize; n + 2]; x.level_len(n)];
            if n < d {
                for z in 0..x.level_len(n + 1) {
                    for j in 0..=n + 1 {
                        sig[x.face(n + 1, j, z)][j] += 1;
                    }
                }
            }
            sig
        })
        .collect()
}

/// All simplicial maps `a -> b` (up to the smaller bound) subject to the
/// search constraints, in a deterministic order.
pub fn enumerate_smaps(a: &Arc<TruncSSet>, b: &Arc<TruncSSet>, opts: &MapSearch<'_>) -> Vec<SMap> {
    let mut out = Vec::new();
    let d = a.dim().min(b.dim());
    search(a, b, opts, |comps| {
        let f = SMap::new_unchecked(a.clone(), b.clone(), comps.to_vec()).expect("well-typed");
        if f.first_violation().is_none() {
            out.push(f);
        }
        opts.limit.is_none_or(|l| out.len() < l)
    });
    let _ = d;
    out
}

pub fn count_smaps(a: &Arc<TruncSSet>, b: &Arc<TruncSSet>) -> usize {
    enumerate_smaps(a, b, &MapSearch::default()).len()
}

fn search(
    a: &TruncSSet,
    b: &TruncSSet,
    opts: &MapSearch<'_>,
    mut emit: impl FnMut(&[Vec<usize>]) -> bool,
) {
    let d = a.dim().min(b.dim());
    if opts.injective && (0..=d).any(|n| a.level_len(n) > b.level_len(n)) {
        return;
    }
    let mut schedule: Vec<(usize, usize, usize, Option<(usize, usize)>)> = Vec::new();
    for n in 0..=d {
        for e in 0..a.level_len(n) {
            schedule.push((vertex_key(a, n, e), n, e, a.degeneracy_of(n, e)));
        }
    }
    schedule.sort_by_key(|&(k, n, e, _)| (k, n, e));
    let mut face_index: Vec<HashMap<Vec<usize>, Vec<usize>>> = vec![HashMap::new()];
    for n in 1..=d {
        let mut idx: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for v in 0..b.level_len(n) {
            idx.entry((0..=n).map(|j| b.face(n, j, v)).collect()).or_default().push(v);
        }
        face_index.push(idx);
    }
    let (sig_a, sig_b) = if opts.match_signatures { (signatures(a, d), signatures(b, d)) } else { (Vec::new(), Vec::new()) };

    let mut assign: Vec<Vec<usize>> = (0..=d).map(|n| vec![usize::MAX; a.level_len(n)]).collect();
    let mut used: Vec<Vec<bool>> = (0..=d).map(|n| vec![false; b.level_len(n)]).collect();
    if schedule.is_empty() {
        emit(&assign);
        return;
    }
    let all_vertices: Vec<usize> = (0..b.level_len(0)).collect();
    let candidates = |depth: usize, assign: &Vec<Vec<usize>>| -> Vec<usize> {
        let (_, n, e, deg) = schedule[depth];
        if let Some((i, y)) = deg {
            return vec![b.degen(n - 1, i, assign[n - 1][y])];
        }
        if n == 0 {
            return all_vertices.clone();
        }
        let key: Vec<usize> = (0..=n).map(|j| assign[n - 1][a.face(n, j, e)]).collect();
        face_index[n].get(&key).cloned().unwrap_or_default()
    };
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(candidates(0, &assign), 0)];
    while !stack.is_empty() {
        let depth = stack.len() - 1;
        let top = &mut stack[depth];
        let (_, n, e, _) = schedule[depth];
        let prev = assign[n][e];
        if prev != usize::MAX {
            used[n][prev] = false;
            assign[n][e] = usize::MAX;
        }
        if top.1 >= top.0.len() {
            stack.pop();
            continue;
        }
        let v = top.0[top.1];
        top.1 += 1;
        if opts.injective && used[n][v] {
            continue;
        }
        if opts.allowed.is_some_and(|f| !f(n, e, v)) {
            continue;
        }
        if opts.match_signatures && sig_a[n][e] != sig_b[n][v] {
            continue;
        }
        if n > 0 && (0..=n).any(|j| b.face(n, j, v) != assign[n - 1][a.face(n, j, e)]) {
            continue;
        }
        assign[n][e] = v;
        used[n][v] = true;
        if depth + 1 == schedule.len() {
            if !emit(&assign) {
                return;
            }
        } else {
            let c = candidates(depth + 1, &assign);
            stack.push((c, 0));
        }
    }
}

fn same_shape(a: &TruncSSet, b: &TruncSSet) -> bool {
    a.dim() == b.dim() && a.level_sizes() == b.level_sizes()
}

/// An isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(a: &Arc<TruncSSet>, b: &Arc<TruncSSet>) -> Option<SMap> {
    if !same_shape(a, b) {
        return None;
    }
    let opts = MapSearch { injective: true, limit: Some(1), match_signatures: true, ..Default::default() };
    enumerate_smaps(a, b, &opts).pop()
}

pub fn are_isomorphic(a: &Arc<TruncSSet>, b: &Arc<TruncSSet>) -> bool {
    find_isomorphism(a, b).is_some()
}

/// An isomorphism `h : A -> B` with `q ∘ h = p`, for `p : A -> X` and
/// `q : B -> X`.
pub fn find_isomorphism_over(p: &SMap, q: &SMap) -> Option<SMap> {
    let (a, b) = (p.source(), q.source());
    let d = p.dim().min(q.dim());
    let a = Arc::new(a.truncate(d));
    let b = Arc::new(b.truncate(d));
    if !same_shape(&a, &b) {
        return None;
    }
    let allowed = |n: usize, x: usize, y: usize| p.apply(n, x) == q.apply(n, y);
    let opts = MapSearch {
        injective: true,
        allowed: Some(&allowed),
        limit: Some(1),
        match_signatures: true,
    };
    enumerate_smaps(&a, &b, &opts).pop()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::FinCat;
    use crate::sset::{nerve, representable};

    #[test]
    fn yoneda_counts() {
        // maps Δ^n -> Δ^m are monotone maps [n] -> [m]
        for n in 0..3 {
            for m in 0..3 {
                let a = Arc::new(representable(n, 3));
                let b = Arc::new(representable(m, 3));
                assert_eq!(count_smaps(&a, &b), crate::ordinal::count_maps(n, m));
            }
        }
    }

    #[test]
    fn nerve_of_poset_is_representable() {
        let a = Arc::new(nerve(&FinCat::ordinal(2), 4));
        let b = Arc::new(representable(2, 4));
        assert!(are_isomorphic(&a, &b));
        let c = Arc::new(representable(1, 4));
        assert!(!are_isomorphic(&a, &c));
    }
}
