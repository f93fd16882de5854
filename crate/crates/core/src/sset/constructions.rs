use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{SMap, TruncSSet};
use crate::cat::{FinCat, Functor};
use crate::error::{Error, Result};
use crate::ordinal::{all_maps, Convention, OrdinalMap};

/// `Δ^n` truncated at `dim`: the `k`-simplices are the monotone maps
/// `[k] -> [n]`, labeled by their image tuples.
pub fn representable(n: usize, dim: usize) -> TruncSSet {
    let levels: Vec<Vec<OrdinalMap>> = (0..=dim).map(|k| all_maps(k, n)).collect();
    TruncSSet::build_with_action(dim, levels, |alpha, sigma| sigma.after(alpha).unwrap(), OrdinalMap::label)
        .expect("representables are closed under operators")
}

pub fn terminal(dim: usize) -> TruncSSet {
    representable(0, dim)
}

pub fn empty(dim: usize) -> TruncSSet {
    TruncSSet {
        dim,
        labels: vec![Vec::new(); dim + 1],
        faces: (0..=dim).map(|n| if n == 0 { Vec::new() } else { vec![Vec::new(); n + 1] }).collect(),
        degens: (0..dim).map(|n| vec![Vec::new(); n + 1]).collect(),
    }
}

/// The map `Δ^n -> X` classifying `x` in `X_n`.
pub fn simplex_map(x: &Arc<TruncSSet>, n: usize, sigma: usize) -> Result<SMap> {
    if n > x.dim() {
        return Err(Error::OutOfTruncation(format!("no level {n}")));
    }
    let src = Arc::new(representable(n, x.dim()));
    let components = (0..=x.dim())
        .map(|k| all_maps(k, n).iter().map(|a| x.act_unchecked(a.images(), n, sigma)).collect())
        .collect();
    SMap::new_unchecked(src, x.clone(), components)
}

/// Composable chains of length `k` in `c` for `k <= dim`, as (start object,
/// morphisms).
pub fn nerve_chains(c: &FinCat, dim: usize) -> Vec<Vec<(usize, Vec<usize>)>> {
    let mut levels: Vec<Vec<(usize, Vec<usize>)>> = vec![(0..c.num_objects()).map(|o| (o, Vec::new())).collect()];
    for k in 1..=dim {
        let mut next = Vec::new();
        for (o, ms) in &levels[k - 1] {
            let end = ms.last().map_or(*o, |&m| c.tgt(m));
            for &m in c.out_of(end) {
                let mut v = ms.clone();
                v.push(m);
                next.push((*o, v));
            }
        }
        levels.push(next);
    }
    levels
}

pub fn nerve(c: &FinCat, dim: usize) -> TruncSSet {
    let levels = nerve_chains(c, dim);
    TruncSSet::build(
        dim,
        levels,
        |k, i, (o, ms)| chain_face(c, k, i, *o, ms),
        |_, i, (o, ms)| {
            let obj = if i == 0 { *o } else { c.tgt(ms[i - 1]) };
            let mut v = ms.clone();
            v.insert(i, c.identity(obj));
            (*o, v)
        },
        |(o, ms)| {
            if ms.is_empty() {
                c.object_name(*o).to_string()
            } else {
                ms.iter().map(|&m| c.morphism(m).name.as_str()).collect::<Vec<_>>().join("|")
            }
        },
    )
    .expect("nerves are closed under operators")
}

fn chain_face(c: &FinCat, k: usize, i: usize, o: usize, ms: &[usize]) -> (usize, Vec<usize>) {
    if i == 0 {
        (c.tgt(ms[0]), ms[1..].to_vec())
    } else if i == k {
        (o, ms[..k - 1].to_vec())
    } else {
        let mut v = ms[..i - 1].to_vec();
        v.push(c.compose(ms[i], ms[i - 1]).expect("composable chain"));
        v.extend_from_slice(&ms[i + 1..]);
        (o, v)
    }
}

/// `N(F) : N(C) -> N(D)`.
pub fn nerve_map(f: &Functor, dim: usize) -> SMap {
    let (c, d) = (f.source(), f.target());
    let src = Arc::new(nerve(c, dim));
    let tgt = Arc::new(nerve(d, dim));
    let tchains = nerve_chains(d, dim);
    let components = nerve_chains(c, dim)
        .iter()
        .enumerate()
        .map(|(k, lv)| {
            let index: HashMap<&(usize, Vec<usize>), usize> =
                tchains[k].iter().enumerate().map(|(i, t)| (t, i)).collect();
            lv.iter()
                .map(|(o, ms)| index[&(f.obj(*o), ms.iter().map(|&m| f.mor(m)).collect())])
                .collect()
        })
        .collect();
    SMap::new_unchecked(src, tgt, components).expect("nerve of a functor")
}

/// Edgewise subdivision with the default join order.
pub fn sd(x: &TruncSSet) -> Result<TruncSSet> {
    sd_with(x, Convention::Q)
}

/// `(Sd X)_k = X_{2k+1}`, with `alpha` acting as `Q(alpha)`.
pub fn sd_with(x: &TruncSSet, conv: Convention) -> Result<TruncSSet> {
    if x.dim() == 0 {
        return Err(Error::OutOfTruncation("edgewise subdivision needs dimension at least 1".into()));
    }
    let d = (x.dim() - 1) / 2;
    let labels = (0..=d).map(|k| x.labels(2 * k + 1).to_vec()).collect();
    let mut faces = vec![Vec::new()];
    for k in 1..=d {
        let lv = (0..=k)
            .map(|i| {
                let q = conv.on_map(&OrdinalMap::coface(k, i).unwrap());
                (0..x.level_len(2 * k + 1)).map(|e| x.act_unchecked(q.images(), 2 * k + 1, e)).collect()
            })
            .collect();
        faces.push(lv);
    }
    let degens = (0..d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let q = conv.on_map(&OrdinalMap::codegeneracy(k, i).unwrap());
                    (0..x.level_len(2 * k + 1)).map(|e| x.act_unchecked(q.images(), 2 * k + 1, e)).collect()
                })
                .collect()
        })
        .collect();
    Ok(TruncSSet { dim: d, labels, faces, degens })
}

pub fn sd_of_map(f: &SMap) -> Result<SMap> {
    sd_of_map_with(f, Convention::Q)
}

/// Components `f_{2k+1}`.
pub fn sd_of_map_with(f: &SMap, conv: Convention) -> Result<SMap> {
    if f.dim() == 0 {
        return Err(Error::OutOfTruncation("edgewise subdivision needs dimension at least 1".into()));
    }
    let src = Arc::new(sd_with(f.source(), conv)?);
    let tgt = Arc::new(sd_with(f.target(), conv)?);
    let d = (f.dim() - 1) / 2;
    let components = (0..=d).map(|k| f.component(2 * k + 1).to_vec()).collect();
    SMap::new_unchecked(src, tgt, components)
}

/// Levelwise fiber product of `f : A -> X` and `g : B -> X`, with the two
/// projections.
pub fn pullback(f: &SMap, g: &SMap) -> Result<(Arc<TruncSSet>, SMap, SMap)> {
    if f.target().as_ref() != g.target().as_ref() {
        return Err(Error::DimensionMismatch("pullback of maps with different targets".into()));
    }
    let (a, b) = (f.source(), g.source());
    let d = f.dim().min(g.dim());
    let mut levels = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let gf = g.fibers(n);
        let mut lv = Vec::new();
        for x in 0..a.level_len(n) {
            for &y in &gf[f.apply(n, x)] {
                lv.push((x, y));
            }
        }
        levels.push(lv);
    }
    let p = TruncSSet::build(
        d,
        levels.clone(),
        |n, i, &(x, y)| (a.face(n, i, x), b.face(n, i, y)),
        |n, i, &(x, y)| (a.degen(n, i, x), b.degen(n, i, y)),
        |_| String::new(),
    )?;
    let p = p.relabel(|n, k, _| {
        let (x, y) = levels[n][k];
        format!("({},{})", a.label(n, x), b.label(n, y))
    });
    let p = Arc::new(p);
    let pa = SMap::new_unchecked(p.clone(), a.clone(), levels.iter().map(|lv| lv.iter().map(|t| t.0).collect()).collect())?;
    let pb = SMap::new_unchecked(p.clone(), b.clone(), levels.iter().map(|lv| lv.iter().map(|t| t.1).collect()).collect())?;
    Ok((p, pa, pb))
}

/// Shifts down one degree, forgetting the top face and degeneracy.
pub fn dec_top(x: &TruncSSet) -> Result<TruncSSet> {
    dec(x, 0)
}

/// Shifts down one degree, forgetting the bottom face and degeneracy.
pub fn dec_bot(x: &TruncSSet) -> Result<TruncSSet> {
    dec(x, 1)
}

fn dec(x: &TruncSSet, shift: usize) -> Result<TruncSSet> {
    if x.dim() == 0 {
        return Err(Error::OutOfTruncation("décalage needs dimension at least 1".into()));
    }
    let d = x.dim() - 1;
    let labels = (0..=d).map(|k| x.labels(k + 1).to_vec()).collect();
    let faces = (0..=d)
        .map(|k| if k == 0 { Vec::new() } else { (0..=k).map(|i| x.face_table(k + 1, i + shift).to_vec()).collect() })
        .collect();
    let degens = (0..d).map(|k| (0..=k).map(|i| x.degen_table(k + 1, i + shift).to_vec()).collect()).collect();
    Ok(TruncSSet { dim: d, labels, faces, degens })
}

/// The sub-object of `x` on the kept elements, which must be closed under
/// the operators of `x`. Returns it with the inclusion indices.
pub fn restrict(x: &TruncSSet, keep: Vec<Vec<usize>>) -> Result<TruncSSet> {
    let d = keep.len() - 1;
    let mut index: Vec<HashMap<usize, usize>> = Vec::with_capacity(d + 1);
    for lv in &keep {
        index.push(lv.iter().enumerate().map(|(i, &e)| (e, i)).collect());
    }
    let look = |n: usize, e: usize| -> Result<usize> {
        index[n]
            .get(&e)
            .copied()
            .ok_or_else(|| Error::InvalidSSet(vec![format!("sub-object not closed at level {n}")]))
    };
    let labels = keep.iter().enumerate().map(|(n, lv)| lv.iter().map(|&e| x.label(n, e).to_string()).collect()).collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=d {
        let mut lv = Vec::new();
        for i in 0..=n {
            lv.push(keep[n].iter().map(|&e| look(n - 1, x.face(n, i, e))).collect::<Result<Vec<_>>>()?);
        }
        faces.push(lv);
    }
    let mut degens = Vec::new();
    for n in 0..d {
        let mut lv = Vec::new();
        for i in 0..=n {
            lv.push(keep[n].iter().map(|&e| look(n + 1, x.degen(n, i, e))).collect::<Result<Vec<_>>>()?);
        }
        degens.push(lv);
    }
    Ok(TruncSSet { dim: d, labels, faces, degens })
}

/// `X_{/x}`: simplices of `Dec^⊤ X` whose last vertex is `v`.
pub fn slice(x: &TruncSSet, v: usize) -> Result<TruncSSet> {
    let dt = dec_top(x)?;
    let keep = (0..=dt.dim()).map(|k| (0..x.level_len(k + 1)).filter(|&s| x.last_vertex(k + 1, s) == v).collect()).collect();
    restrict(&dt, keep)
}

/// The comparison `Y_{/y} -> X_{/p y}` induced by `p`.
pub fn slice_map(p: &SMap, y: usize) -> Result<SMap> {
    let (ys, xs) = (p.source(), p.target());
    let x = p.apply(0, y);
    let d = p.dim();
    if d == 0 {
        return Err(Error::OutOfTruncation("slices need dimension at least 1".into()));
    }
    let src = slice(&ys.truncate(d), y)?;
    let tgt = slice(&xs.truncate(d), x)?;
    let components = (0..d)
        .map(|k| {
            let ty: Vec<usize> = (0..xs.level_len(k + 1)).filter(|&s| xs.last_vertex(k + 1, s) == x).collect();
            let ti: HashMap<usize, usize> = ty.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            (0..ys.level_len(k + 1))
                .filter(|&s| ys.last_vertex(k + 1, s) == y)
                .map(|s| ti[&p.apply(k + 1, s)])
                .collect()
        })
        .collect();
    SMap::new_unchecked(Arc::new(src), Arc::new(tgt), components)
}

/// An interval with its initial and terminal vertices.
#[derive(Clone, Debug)]
pub struct Interval {
    pub sset: TruncSSet,
    pub initial: usize,
    pub terminal: usize,
}

fn interval_keep(x: &TruncSSet, f: usize) -> Vec<Vec<usize>> {
    (0..=x.dim() - 2).map(|k| (0..x.level_len(k + 2)).filter(|&s| x.long_edge(k + 2, s) == f).collect()).collect()
}

/// `I(f)`: simplices of `Dec_⊥ Dec^⊤ X` whose long edge is `f`.
pub fn interval(x: &TruncSSet, f: usize) -> Result<Interval> {
    if x.dim() < 2 {
        return Err(Error::OutOfTruncation("intervals need dimension at least 2".into()));
    }
    let dd = dec_bot(&dec_top(x)?)?;
    let keep = interval_keep(x, f);
    let pos = |s: usize| keep[0].iter().position(|&e| e == s).expect("marker lies in the interval");
    let initial = pos(x.degen(1, 0, f));
    let terminal = pos(x.degen(1, 1, f));
    Ok(Interval { sset: restrict(&dd, keep)?, initial, terminal })
}

/// The comparison `I(f) -> I(p f)` induced by `p`.
pub fn interval_map(p: &SMap, f: usize) -> Result<SMap> {
    let (ys, xs) = (p.source(), p.target());
    let d = p.dim();
    if d < 2 {
        return Err(Error::OutOfTruncation("intervals need dimension at least 2".into()));
    }
    let (yt, xt) = (ys.truncate(d), xs.truncate(d));
    let pf = p.apply(1, f);
    let src = interval(&yt, f)?.sset;
    let tgt = interval(&xt, pf)?.sset;
    let ykeep = interval_keep(&yt, f);
    let xkeep = interval_keep(&xt, pf);
    let components = (0..=d - 2)
        .map(|k| {
            let ti: HashMap<usize, usize> = xkeep[k].iter().enumerate().map(|(i, &s)| (s, i)).collect();
            ykeep[k].iter().map(|&s| ti[&p.apply(k + 2, s)]).collect()
        })
        .collect();
    SMap::new_unchecked(Arc::new(src), Arc::new(tgt), components)
}

/// The smallest sub-object containing the given simplices `(level, index)`.
pub fn generated_subobject(x: &Arc<TruncSSet>, gens: &[(usize, usize)]) -> Result<(Arc<TruncSSet>, SMap)> {
    let d = x.dim();
    let mut keep: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); d + 1];
    let mut stack: Vec<(usize, usize)> = gens.to_vec();
    while let Some((n, e)) = stack.pop() {
        if n > d || e >= x.level_len(n) {
            return Err(Error::InvalidInput(format!("no simplex {e} in level {n}")));
        }
        if !keep[n].insert(e) {
            continue;
        }
        if n > 0 {
            for i in 0..=n {
                stack.push((n - 1, x.face(n, i, e)));
            }
        }
        if n < d {
            for i in 0..=n {
                stack.push((n + 1, x.degen(n, i, e)));
            }
        }
    }
    let keep: Vec<Vec<usize>> = keep.into_iter().map(|s| s.into_iter().collect()).collect();
    let sub = Arc::new(restrict(x, keep.clone())?);
    let incl = SMap::new_unchecked(sub.clone(), x.clone(), keep)?;
    Ok((sub, incl))
}

fn truncated((sub, incl): (Arc<TruncSSet>, SMap), dim: usize) -> Result<(Arc<TruncSSet>, SMap)> {
    if sub.dim() == dim {
        return Ok((sub, incl));
    }
    let incl = incl.truncate(dim);
    Ok((incl.source().clone(), incl))
}

/// The horn `Λ^n_k` inside `Δ^n`, truncated at `dim`.
pub fn horn(n: usize, k: usize, dim: usize) -> Result<(Arc<TruncSSet>, SMap)> {
    // built with the faces present, then truncated
    let delta = Arc::new(representable(n, dim.max(n)));
    let gens = (0..=n)
        .filter(|&i| i != k)
        .map(|i| {
            let face = OrdinalMap::coface(n, i)?;
            Ok((n - 1, delta.find(n - 1, &face.label()).expect("face present")))
        })
        .collect::<Result<Vec<_>>>()?;
    truncated(generated_subobject(&delta, &gens)?, dim)
}

/// The boundary `∂Δ^n` inside `Δ^n`, truncated at `dim`.
pub fn boundary(n: usize, dim: usize) -> Result<(Arc<TruncSSet>, SMap)> {
    // built with the faces present, then truncated
    let delta = Arc::new(representable(n, dim.max(n)));
    let gens = (0..=n)
        .map(|i| {
            let face = OrdinalMap::coface(n, i)?;
            Ok((n - 1, delta.find(n - 1, &face.label()).expect("face present")))
        })
        .collect::<Result<Vec<_>>>()?;
    truncated(generated_subobject(&delta, &gens)?, dim)
}

/// Disjoint union, with the two coproduct inclusions.
pub fn coproduct(x: &Arc<TruncSSet>, y: &Arc<TruncSSet>) -> Result<(Arc<TruncSSet>, SMap, SMap)> {
    let d = x.dim().min(y.dim());
    let nx: Vec<usize> = (0..=d).map(|n| x.level_len(n)).collect();
    let labels = (0..=d)
        .map(|n| {
            x.labels(n)
                .iter()
                .map(|l| format!("l.{l}"))
                .chain(y.labels(n).iter().map(|l| format!("r.{l}")))
                .collect()
        })
        .collect();
    let join = |a: &[usize], b: &[usize], shift: usize| -> Vec<usize> {
        a.iter().copied().chain(b.iter().map(|&v| v + shift)).collect()
    };
    let faces = (0..=d)
        .map(|n| {
            if n == 0 {
                Vec::new()
            } else {
                (0..=n).map(|i| join(x.face_table(n, i), y.face_table(n, i), nx[n - 1])).collect()
            }
        })
        .collect();
    let degens = (0..d)
        .map(|n| (0..=n).map(|i| join(x.degen_table(n, i), y.degen_table(n, i), nx[n + 1])).collect())
        .collect();
    let sum = Arc::new(TruncSSet { dim: d, labels, faces, degens });
    let inl = SMap::new_unchecked(
        x.clone(),
        sum.clone(),
        (0..=d).map(|n| (0..x.level_len(n)).collect()).collect(),
    )?;
    let inr = SMap::new_unchecked(
        y.clone(),
        sum.clone(),
        (0..=d).map(|n| (0..y.level_len(n)).map(|v| v + nx[n]).collect()).collect(),
    )?;
    Ok((sum, inl, inr))
}

/// Builds an `SMap` from a function on simplices, checking commutation.
pub fn smap_from_fn(source: Arc<TruncSSet>, target: Arc<TruncSSet>, f: impl Fn(usize, usize) -> usize) -> Result<SMap> {
    let d = source.dim().min(target.dim());
    let components = (0..=d).map(|n| (0..source.level_len(n)).map(|x| f(n, x)).collect()).collect();
    SMap::new(source, target, components)
}

/// The unique map to the terminal object.
pub fn to_terminal(x: &Arc<TruncSSet>) -> SMap {
    let t = Arc::new(terminal(x.dim()));
    let components = (0..=x.dim()).map(|n| vec![0; x.level_len(n)]).collect();
    SMap::new_unchecked(x.clone(), t, components).expect("terminal map")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sd_sizes() {
        assert_eq!(sd(&representable(1, 3)).unwrap().level_sizes(), vec![3, 5]);
        assert_eq!(sd(&representable(0, 3)).unwrap().level_sizes(), vec![1, 1]);
        assert!(matches!(sd(&representable(1, 0)), Err(Error::OutOfTruncation(_))));
        sd(&representable(2, 7)).unwrap().validate().unwrap();
        sd_with(&representable(2, 7), Convention::QPrime).unwrap().validate().unwrap();
    }

    #[test]
    fn nerve_sizes() {
        let e1 = FinCat::codiscrete(vec!["a".into(), "b".into()]);
        assert_eq!(nerve(&e1, 2).level_sizes(), vec![2, 4, 8]);
        assert_eq!(nerve(&FinCat::ordinal(0), 3).level_sizes(), vec![1, 1, 1, 1]);
        let n1 = nerve(&FinCat::ordinal(1), 4);
        n1.validate().unwrap();
        assert_eq!(n1.level_sizes(), representable(1, 4).level_sizes());
    }

    #[test]
    fn nerve_action_composes() {
        let c = FinCat::ordinal(2);
        let n = nerve(&c, 3);
        let sigma = n.find(2, "0<=1|1<=2").unwrap();
        let e = n.act(&OrdinalMap::edge(2, 0, 2).unwrap(), sigma).unwrap();
        assert_eq!(n.label(1, e), "0<=2");
    }

    #[test]
    fn dec_and_slice_sizes() {
        let dt = Arc::new(dec_top(&representable(0, 2)).unwrap());
        assert!(crate::sset::are_isomorphic(&dt, &Arc::new(representable(0, 1))));
        let d = dec_top(&nerve(&FinCat::ordinal(1), 3)).unwrap();
        assert_eq!(d.level_sizes(), vec![3, 4, 5]);
        d.validate().unwrap();
        let x = representable(1, 3);
        let s = slice(&x, x.find(0, "1").unwrap()).unwrap();
        assert_eq!(&s.level_sizes()[..2], &[2, 3]);
        s.validate().unwrap();
        let p = representable(0, 2);
        assert_eq!(slice(&p, 0).unwrap().level_sizes(), representable(0, 1).level_sizes());
        let x = nerve(&FinCat::ordinal(2), 4);
        assert_eq!(dec_bot(&dec_top(&x).unwrap()).unwrap(), dec_top(&dec_bot(&x).unwrap()).unwrap());
    }

    #[test]
    fn interval_sizes() {
        let n1 = nerve(&FinCat::ordinal(1), 4);
        let i = interval(&n1, n1.find(1, "0<=1").unwrap()).unwrap();
        assert_eq!(i.sset.level_len(0), 2);
        assert_ne!(i.initial, i.terminal);
        let n2 = nerve(&FinCat::ordinal(2), 4);
        let i = interval(&n2, n2.find(1, "0<=2").unwrap()).unwrap();
        assert_eq!(i.sset.level_len(0), 3);
        i.sset.validate().unwrap();
        let i = interval(&n2, n2.find(1, "1<=1").unwrap()).unwrap();
        assert_eq!(i.sset.level_len(0), 1);
    }

    #[test]
    fn pullback_of_distinct_vertices_is_empty() {
        let d1 = Arc::new(representable(1, 2));
        let a = simplex_map(&d1, 0, d1.find(0, "0").unwrap()).unwrap();
        let b = simplex_map(&d1, 0, d1.find(0, "1").unwrap()).unwrap();
        let (p, _, _) = pullback(&a, &b).unwrap();
        assert!(p.level_sizes().iter().all(|&s| s == 0));
        let id = SMap::identity(d1.clone());
        let (p, _, _) = pullback(&id, &id).unwrap();
        assert_eq!(p.level_sizes(), d1.level_sizes());
        p.validate().unwrap();
    }

    #[test]
    fn horn_and_boundary() {
        let (h, _) = horn(2, 1, 3).unwrap();
        h.validate().unwrap();
        assert_eq!(h.level_len(0), 3);
        assert_eq!(h.nondegenerate(1).len(), 2);
        assert!(h.nondegenerate(2).is_empty());
        let (b, _) = boundary(2, 3).unwrap();
        assert_eq!(b.nondegenerate(1).len(), 3);
    }
}
