use std::collections::BTreeSet;
use std::sync::Arc;

use super::{FinCat, Functor, Presheaf};

/// Order in which non-identity morphisms are assigned during backtracking:
/// each entry is a morphism plus, when available, a factorization `(g, f)`
/// through earlier entries that forces its value.
fn assignment_order(c: &FinCat) -> Vec<(usize, Option<(usize, usize)>)> {
    let nonid: Vec<usize> = (0..c.num_morphisms()).filter(|&m| !c.is_identity(m)).collect();
    let mut decomps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); c.num_morphisms()];
    for (&(g, f), &gf) in c.composition_table() {
        if !c.is_identity(g) && !c.is_identity(f) && !c.is_identity(gf) {
            decomps[gf].push((g, f));
        }
    }
    for d in &mut decomps {
        d.sort_unstable();
    }
    let mut placed = vec![false; c.num_morphisms()];
    let mut order = Vec::new();
    for &m in &nonid {
        if decomps[m].is_empty() {
            placed[m] = true;
            order.push((m, None));
        }
    }
    loop {
        let mut progress = false;
        for &m in &nonid {
            if placed[m] {
                continue;
            }
            if let Some(&(g, f)) = decomps[m].iter().find(|&&(g, f)| placed[g] && placed[f]) {
                placed[m] = true;
                order.push((m, Some((g, f))));
                progress = true;
            }
        }
        if order.len() == nonid.len() {
            break;
        }
        if !progress {
            let m = *nonid.iter().find(|&&m| !placed[m]).unwrap();
            placed[m] = true;
            order.push((m, None));
        }
    }
    order
}

/// Composition triples `(g, f, gf)` among non-identity morphisms, grouped by
/// the member that is assigned last in `order`.
fn triples_by_last(c: &FinCat, order: &[(usize, Option<(usize, usize)>)]) -> Vec<Vec<(usize, usize, usize)>> {
    let mut pos = vec![usize::MAX; c.num_morphisms()];
    for (i, &(m, _)) in order.iter().enumerate() {
        pos[m] = i;
    }
    let mut out = vec![Vec::new(); order.len()];
    for (&(g, f), &gf) in c.composition_table() {
        if c.is_identity(g) || c.is_identity(f) {
            continue;
        }
        let last = [g, f, gf].iter().filter(|&&m| !c.is_identity(m)).map(|&m| pos[m]).max().unwrap();
        out[last].push((g, f, gf));
    }
    out
}

fn all_functions(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if dom > 0 && cod == 0 {
        return out;
    }
    let mut cur = vec![0usize; dom];
    loop {
        out.push(cur.clone());
        let mut i = dom;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < cod {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Canonical encoding of a presheaf up to relabeling of each fiber.
pub fn canonical_form(p: &Presheaf) -> Vec<usize> {
    canonical_relabeling(p).0
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out.sort();
    out
}

fn canonical_relabeling(p: &Presheaf) -> (Vec<usize>, Vec<Vec<usize>>) {
    let c = &**p.base();
    let k = c.num_objects();
    // the encoding is laid out object by object: after choosing the labels
    // of objects 0..=o, every morphism between them is fixed
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); k];
    for m in 0..c.num_morphisms() {
        if !c.is_identity(m) {
            by_last[c.src(m).max(c.tgt(m))].push(m);
        }
    }
    let perms: Vec<Vec<Vec<usize>>> = p.sizes().iter().map(|&s| permutations(s)).collect();
    let mut search = Canon {
        p,
        by_last,
        perms,
        current: vec![Vec::new(); k],
        enc: Vec::new(),
        best: None,
    };
    search.go(0);
    let (best_enc, best_perm) = search.best.unwrap();
    let mut enc = p.sizes().to_vec();
    enc.extend(best_enc);
    (enc, best_perm)
}

struct Canon<'a> {
    p: &'a Presheaf,
    by_last: Vec<Vec<usize>>,
    perms: Vec<Vec<Vec<usize>>>,
    current: Vec<Vec<usize>>,
    enc: Vec<usize>,
    best: Option<(Vec<usize>, Vec<Vec<usize>>)>,
}

impl Canon<'_> {
    fn go(&mut self, o: usize) {
        let c = &**self.p.base();
        if o == c.num_objects() {
            self.best = Some((self.enc.clone(), self.current.clone()));
            return;
        }
        for pi in 0..self.perms[o].len() {
            self.current[o] = self.perms[o][pi].clone();
            let mark = self.enc.len();
            for &m in &self.by_last[o] {
                let (s, t) = (c.src(m), c.tgt(m));
                let mut relabeled = vec![0; self.p.size(t)];
                for y in 0..self.p.size(t) {
                    relabeled[self.current[t][y]] = self.current[s][self.p.apply(m, y)];
                }
                self.enc.extend(relabeled);
            }
            if let Some((b, _)) = &self.best {
                if self.enc[..] > b[..self.enc.len()] {
                    self.enc.truncate(mark);
                    continue;
                }
            }
            self.go(o + 1);
            self.enc.truncate(mark);
        }
    }
}

/// The canonical representative of the isomorphism class of `p`.
pub fn canonicalize(p: &Presheaf) -> Presheaf {
    let (_, perm) = canonical_relabeling(p);
    let c = &**p.base();
    let action = (0..c.num_morphisms())
        .map(|m| {
            let (s, t) = (c.src(m), c.tgt(m));
            let mut a = vec![0; p.size(t)];
            for y in 0..p.size(t) {
                a[perm[t][y]] = perm[s][p.apply(m, y)];
            }
            a
        })
        .collect();
    Presheaf::new_unchecked(p.base().clone(), p.sizes().to_vec(), action)
}

/// Every presheaf on `c` with all fibers of size at most `max_fiber`, one per
/// isomorphism class, in a deterministic order.
pub fn enumerate_presheaves(c: &Arc<FinCat>, max_fiber: usize) -> Vec<Presheaf> {
    let order = assignment_order(c);
    let triples = triples_by_last(c, &order);
    let mut out = Vec::new();
    let k = c.num_objects();
    let mut sizes = vec![0usize; k];
    loop {
        let mut seen = BTreeSet::new();
        let mut action: Vec<Vec<usize>> = (0..c.num_morphisms())
            .map(|m| if c.is_identity(m) { (0..sizes[c.src(m)]).collect() } else { Vec::new() })
            .collect();
        let mut found = Vec::new();
        presheaf_search(c, &sizes, &order, &triples, 0, &mut action, &mut found);
        for p in found {
            let p = Presheaf::new_unchecked(c.clone(), sizes.clone(), p);
            let canon = canonicalize(&p);
            if seen.insert(canon.actions().to_vec()) {
                out.push(canon);
            }
        }
        let mut o = 0;
        loop {
            if o == k {
                return out;
            }
            sizes[o] += 1;
            if sizes[o] <= max_fiber {
                break;
            }
            sizes[o] = 0;
            o += 1;
        }
    }
}

fn presheaf_search(
    c: &FinCat,
    sizes: &[usize],
    order: &[(usize, Option<(usize, usize)>)],
    triples: &[Vec<(usize, usize, usize)>],
    depth: usize,
    action: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if depth == order.len() {
        out.push(action.clone());
        return;
    }
    let (m, forced) = order[depth];
    let candidates = match forced {
        Some((g, f)) => {
            let a: Vec<usize> = action[g].iter().map(|&x| action[f][x]).collect();
            vec![a]
        }
        None => all_functions(sizes[c.tgt(m)], sizes[c.src(m)]),
    };
    for cand in candidates {
        action[m] = cand;
        let ok = triples[depth].iter().all(|&(g, f, gf)| {
            (0..sizes[c.tgt(g)]).all(|x| action[f][action[g][x]] == action[gf][x])
        });
        if ok {
            presheaf_search(c, sizes, order, triples, depth + 1, action, out);
        }
    }
    action[m] = Vec::new();
}

/// Number of presheaves on `c` with fibers of size at most `max_fiber`,
/// counted without identifying isomorphic ones.
pub fn count_presheaves(c: &Arc<FinCat>, max_fiber: usize) -> usize {
    let order = assignment_order(c);
    let triples = triples_by_last(c, &order);
    let k = c.num_objects();
    let mut total = 0;
    for code in 0..(max_fiber + 1).pow(k as u32) {
        let sizes: Vec<usize> = (0..k).map(|o| code / (max_fiber + 1).pow(o as u32) % (max_fiber + 1)).collect();
        let mut action: Vec<Vec<usize>> = (0..c.num_morphisms())
            .map(|m| if c.is_identity(m) { (0..sizes[c.src(m)]).collect() } else { Vec::new() })
            .collect();
        let mut found = Vec::new();
        presheaf_search(c, &sizes, &order, &triples, 0, &mut action, &mut found);
        total += found.len();
    }
    total
}

/// Every functor `c -> d`, stopping after `limit` results when given.
pub fn enumerate_functors(c: &Arc<FinCat>, d: &Arc<FinCat>, limit: Option<usize>) -> Vec<Functor> {
    let order = assignment_order(c);
    let triples = triples_by_last(c, &order);
    let mut out = Vec::new();
    let mut objs = vec![0usize; c.num_objects()];
    if d.num_objects() == 0 {
        if c.num_objects() == 0 {
            out.push(Functor::new_unchecked(c.clone(), d.clone(), Vec::new(), Vec::new()));
        }
        return out;
    }
    loop {
        let mut mors: Vec<usize> = (0..c.num_morphisms())
            .map(|m| if c.is_identity(m) { d.identity(objs[c.src(m)]) } else { usize::MAX })
            .collect();
        functor_search(c, d, &objs, &order, &triples, 0, &mut mors, &mut out, limit);
        if limit.is_some_and(|l| out.len() >= l) {
            out.truncate(limit.unwrap());
            return out;
        }
        let mut o = 0;
        loop {
            if o == c.num_objects() {
                return out;
            }
            objs[o] += 1;
            if objs[o] < d.num_objects() {
                break;
            }
            objs[o] = 0;
            o += 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn functor_search(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    objs: &[usize],
    order: &[(usize, Option<(usize, usize)>)],
    triples: &[Vec<(usize, usize, usize)>],
    depth: usize,
    mors: &mut Vec<usize>,
    out: &mut Vec<Functor>,
    limit: Option<usize>,
) {
    if limit.is_some_and(|l| out.len() >= l) {
        return;
    }
    if depth == order.len() {
        out.push(Functor::new_unchecked(c.clone(), d.clone(), objs.to_vec(), mors.clone()));
        return;
    }
    let (m, forced) = order[depth];
    let candidates = match forced {
        Some((g, f)) => vec![d.compose(mors[g], mors[f]).expect("typed")],
        None => d.hom(objs[c.src(m)], objs[c.tgt(m)]),
    };
    for cand in candidates {
        mors[m] = cand;
        let ok = triples[depth].iter().all(|&(g, f, gf)| d.compose(mors[g], mors[f]) == Some(mors[gf]));
        if ok {
            functor_search(c, d, objs, order, triples, depth + 1, mors, out, limit);
        }
    }
    mors[m] = usize::MAX;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presheaf_counts() {
        let pt = Arc::new(FinCat::ordinal(0));
        assert_eq!(enumerate_presheaves(&pt, 1).len(), 2);
        assert_eq!(enumerate_presheaves(&pt, 0).len(), 1);
        let one = Arc::new(FinCat::ordinal(1));
        assert_eq!(enumerate_presheaves(&one, 0).len(), 1);
        // pairs of sets of size <= 1 with a map P(1) -> P(0)
        assert_eq!(enumerate_presheaves(&one, 1).len(), 3);
        for p in enumerate_presheaves(&one, 2) {
            p.validate().unwrap();
        }
    }

    #[test]
    fn functor_counts() {
        let one = Arc::new(FinCat::ordinal(1));
        let two = Arc::new(FinCat::ordinal(2));
        // monotone maps [1] -> [2]
        assert_eq!(enumerate_functors(&one, &two, None).len(), 6);
        let z2 = Arc::new(FinCat::cyclic_group(2));
        assert_eq!(enumerate_functors(&z2, &z2, None).len(), 2);
        for f in enumerate_functors(&two, &two, None) {
            f.validate().unwrap();
        }
    }
}
