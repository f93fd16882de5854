//! Categories of elements of truncated simplicial sets, the last-vertex map
//! `ξ : Nel(X) -> X`, the map `λ : Nel(X) -> Sd(X)`, and the transport between
//! maps over `X` and discrete fibrations over `el(X)`.
//!
//! A `k`-simplex of `Nel(X)` is a chain `[n_0] -> ... -> [n_k]` of monotone
//! maps together with an element of `X_{n_k}`. Everything about `ξ` and `λ`
//! only depends on that description, so the pullback checks work chain by
//! chain without materializing `el(X)`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::cat::{DiscFib, FinCat, Functor, Morphism, Presheaf};
use crate::error::{Error, Result};
use crate::ordinal::{all_maps, q_on_map, q_on_object, OrdinalMap};
use crate::sset::{nerve, nerve_chains, nerve_map, sd, SMap, TruncSSet};

/// The simplex category truncated to `[0], ..., [d]`.
pub fn simplex_category(d: usize) -> FinCat {
    let objects = (0..=d).map(|n| format!("[{n}]")).collect();
    let mut morphisms = Vec::new();
    let mut maps = Vec::new();
    let mut index = HashMap::new();
    for n in 0..=d {
        for m in 0..=d {
            for a in all_maps(m, n) {
                index.insert(a.clone(), morphisms.len());
                morphisms.push(Morphism { name: a.to_string(), src: m, tgt: n });
                maps.push(a);
            }
        }
    }
    let identities = (0..=d).map(|n| index[&OrdinalMap::identity(n)]).collect();
    FinCat::from_fn(objects, morphisms, identities, |g, f| index[&maps[g].after(&maps[f]).unwrap()])
        .expect("simplex category")
}

/// The category of elements of a truncated simplicial set.
#[derive(Clone, Debug)]
pub struct ElCat {
    cat: Arc<FinCat>,
    dim: usize,
    /// `(n, σ)` for each object.
    elements: Vec<(usize, usize)>,
    /// `(α, σ)` for each morphism `(m, α^*σ) -> (n, σ)`.
    arrows: Vec<(OrdinalMap, usize)>,
    offsets: Vec<usize>,
    projection: Functor,
}

impl ElCat {
    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    /// Largest `n` such that `n`-simplices are objects.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn element(&self, o: usize) -> (usize, usize) {
        self.elements[o]
    }

    pub fn arrow(&self, m: usize) -> (&OrdinalMap, usize) {
        let (a, s) = &self.arrows[m];
        (a, *s)
    }

    pub fn find_element(&self, n: usize, sigma: usize) -> usize {
        self.offsets[n] + sigma
    }

    /// The projection to the truncated simplex category.
    pub fn projection(&self) -> &Functor {
        &self.projection
    }
}

/// `el(X)` on all levels of `x`.
pub fn el(x: &TruncSSet) -> ElCat {
    el_upto(x, x.dim()).expect("within truncation")
}

/// `el(X)` restricted to simplices of dimension at most `d`.
pub fn el_upto(x: &TruncSSet, d: usize) -> Result<ElCat> {
    if d > x.dim() {
        return Err(Error::OutOfTruncation(format!("el up to {d} needs dimension {d}, bound is {}", x.dim())));
    }
    let mut elements = Vec::new();
    let mut offsets = Vec::new();
    let mut names = Vec::new();
    for n in 0..=d {
        offsets.push(elements.len());
        for s in 0..x.level_len(n) {
            elements.push((n, s));
            names.push(format!("({n},{})", x.label(n, s)));
        }
    }
    let maps: Vec<Vec<Vec<OrdinalMap>>> = (0..=d).map(|n| (0..=d).map(|m| all_maps(m, n)).collect()).collect();
    let rank: Vec<Vec<HashMap<&OrdinalMap, usize>>> = maps
        .iter()
        .map(|row| row.iter().map(|ms| ms.iter().enumerate().map(|(i, a)| (a, i)).collect()).collect())
        .collect();
    // arrows into (n, σ) are laid out by m, then by the rank of α in all_maps(m, n)
    let mut block: Vec<Vec<usize>> = Vec::new();
    let mut arrows = Vec::new();
    let mut morphisms = Vec::new();
    for n in 0..=d {
        let mut per_m = Vec::new();
        let mut start = 0;
        for m in 0..=d {
            per_m.push(start);
            start += maps[n][m].len();
        }
        block.push(per_m);
        for s in 0..x.level_len(n) {
            for m in 0..=d {
                for a in &maps[n][m] {
                    let src = offsets[m] + x.act_unchecked(a.images(), n, s);
                    morphisms.push(Morphism {
                        name: format!("({},{})", a.label(), x.label(n, s)),
                        src,
                        tgt: offsets[n] + s,
                    });
                    arrows.push((a.clone(), s));
                }
            }
        }
    }
    let widths: Vec<usize> = (0..=d).map(|n| (0..=d).map(|m| maps[n][m].len()).sum()).collect();
    let mut arrow_base = Vec::with_capacity(d + 1);
    let mut acc = 0;
    for n in 0..=d {
        arrow_base.push(acc);
        acc += widths[n] * x.level_len(n);
    }
    let arrow_index =
        |a: &OrdinalMap, s: usize| arrow_base[a.cod()] + s * widths[a.cod()] + block[a.cod()][a.dom()] + rank[a.cod()][a.dom()][a];
    let identities = elements.iter().map(|&(n, s)| arrow_index(&OrdinalMap::identity(n), s)).collect();
    let cat = FinCat::from_fn(names, morphisms, identities, |g, f| {
        let (ga, gs) = &arrows[g];
        let (fa, _) = &arrows[f];
        arrow_index(&ga.after(fa).unwrap(), *gs)
    })?;
    let cat = Arc::new(cat);
    let base = Arc::new(simplex_category(d));
    let base_index: HashMap<&OrdinalMap, usize> = {
        let mut h = HashMap::new();
        let mut i = 0;
        for n in 0..=d {
            for m in 0..=d {
                for a in &maps[n][m] {
                    h.insert(a, i);
                    i += 1;
                }
            }
        }
        h
    };
    let projection = Functor::new_unchecked(
        cat.clone(),
        base,
        elements.iter().map(|&(n, _)| n).collect(),
        arrows.iter().map(|(a, _)| base_index[a]).collect(),
    );
    Ok(ElCat { cat, dim: d, elements, arrows, offsets, projection })
}

/// The nerve of `el(X)`, truncated at `d`.
pub fn nel(x: &TruncSSet, d: usize) -> TruncSSet {
    nerve(el(x).cat(), d)
}

/// A composable chain `[n_0] -> [n_1] -> ... -> [n_k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    start: usize,
    maps: Vec<OrdinalMap>,
}

impl Chain {
    pub fn new(start: usize, maps: Vec<OrdinalMap>) -> Result<Self> {
        let mut end = start;
        for (i, f) in maps.iter().enumerate() {
            if f.dom() != end {
                return Err(Error::DimensionMismatch(format!(
                    "map {} of the chain has domain [{}] but the previous ordinal is [{end}]",
                    i + 1,
                    f.dom()
                )));
            }
            end = f.cod();
        }
        Ok(Chain { start, maps })
    }

    /// The chain `f_1, ..., f_k`, which must be nonempty.
    pub fn from_maps(maps: Vec<OrdinalMap>) -> Result<Self> {
        let start = maps
            .first()
            .map(OrdinalMap::dom)
            .ok_or_else(|| Error::DimensionMismatch("an empty chain needs its object".into()))?;
        Chain::new(start, maps)
    }

    pub fn object(n: usize) -> Self {
        Chain { start: n, maps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[OrdinalMap] {
        &self.maps
    }

    /// `n_i`.
    pub fn ordinal(&self, i: usize) -> usize {
        if i == 0 {
            self.start
        } else {
            self.maps[i - 1].cod()
        }
    }

    pub fn end(&self) -> usize {
        self.ordinal(self.maps.len())
    }

    /// The chain `Q(f_1), ..., Q(f_k)`.
    pub fn twisted(&self) -> Chain {
        Chain { start: q_on_object(self.start), maps: self.maps.iter().map(q_on_map).collect() }
    }
}

/// `β(f) : [k] -> [n_k]`, `i ↦ f_k ⋯ f_{i+1}(n_i)`.
pub fn lower_segments(chain: &Chain) -> OrdinalMap {
    let mut v = vec![chain.start];
    for f in &chain.maps {
        v = v.iter().map(|&i| f.apply(i)).collect();
        v.push(f.cod());
    }
    OrdinalMap::from_images(chain.end(), &v).expect("monotone by construction")
}

/// `α(f) : Q[k] -> [n_k]`: position `k - i` goes to `f_k ⋯ f_{i+1}(0)` and
/// position `k + 1 + i` to `f_k ⋯ f_{i+1}(n_i)`.
pub fn middle_segments(chain: &Chain) -> OrdinalMap {
    let mut v = vec![0, chain.start];
    for f in &chain.maps {
        let mut w = vec![0];
        w.extend(v.iter().map(|&i| f.apply(i)));
        w.push(f.cod());
        v = w;
    }
    OrdinalMap::from_images(chain.end(), &v).expect("monotone by construction")
}

/// Extends a lower-segments map along `f`.
fn extend_lower(beta: &OrdinalMap, f: &OrdinalMap) -> OrdinalMap {
    let mut v: Vec<usize> = beta.images().iter().map(|&i| f.apply(i)).collect();
    v.push(f.cod());
    OrdinalMap::from_images(f.cod(), &v).unwrap()
}

fn extend_middle(alpha: &OrdinalMap, f: &OrdinalMap) -> OrdinalMap {
    let mut v = vec![0];
    v.extend(alpha.images().iter().map(|&i| f.apply(i)));
    v.push(f.cod());
    OrdinalMap::from_images(f.cod(), &v).unwrap()
}

/// Every distinct `β(f)` (`middle = false`) or `α(f)` (`middle = true`) over
/// chains of length exactly `k` through ordinals `[0], ..., [n_max]`.
pub fn segment_maps(k: usize, n_max: usize, middle: bool) -> Vec<OrdinalMap> {
    let mut cur: BTreeSet<OrdinalMap> = (0..=n_max)
        .map(|n| if middle { OrdinalMap::long_edge(n) } else { OrdinalMap::vertex(n, n).unwrap() })
        .collect();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for a in &cur {
            for m in 0..=n_max {
                for f in all_maps(a.cod(), m) {
                    next.insert(if middle { extend_middle(a, &f) } else { extend_lower(a, &f) });
                }
            }
        }
        cur = next;
    }
    cur.into_iter().collect()
}

/// A simplex of `Nel(X)`: a chain together with an element of `X_{n_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElChain {
    pub chain: Chain,
    pub top: usize,
}

/// Reads the simplices of `nerve(el)` as chains.
pub fn el_chains(el: &ElCat, d: usize) -> Vec<Vec<ElChain>> {
    nerve_chains(el.cat(), d)
        .into_iter()
        .map(|lv| {
            lv.into_iter()
                .map(|(o, ms)| {
                    let (n0, s0) = el.element(o);
                    let top = ms.last().map_or(s0, |&m| el.arrow(m).1);
                    let maps = ms.iter().map(|&m| el.arrow(m).0.clone()).collect();
                    ElChain { chain: Chain { start: n0, maps }, top }
                })
                .collect()
        })
        .collect()
}

/// `Nel(q) : Nel(Y) -> Nel(X)` up to level `d`.
pub fn nel_map(q: &SMap, d: usize) -> Result<SMap> {
    let (_, _, fib) = smap_to_discfib(q)?;
    Ok(nerve_map(fib.projection(), d))
}

/// `ξ_X : Nel(X) -> X` up to level `d`.
pub fn xi(x: &Arc<TruncSSet>, d: usize) -> Result<SMap> {
    if d > x.dim() {
        return Err(Error::OutOfTruncation(format!("ξ in degree {d} needs X_{d}, bound is {}", x.dim())));
    }
    let e = el(x);
    let source = Arc::new(nerve(e.cat(), d));
    let components = el_chains(&e, d)
        .iter()
        .map(|lv| lv.iter().map(|c| x.act_unchecked(lower_segments(&c.chain).images(), c.chain.end(), c.top)).collect())
        .collect();
    SMap::new_unchecked(source, x.clone(), components)
}

/// `λ_X : Nel(X) -> Sd(X)` up to level `d`.
pub fn lambda(x: &Arc<TruncSSet>, d: usize) -> Result<SMap> {
    if 2 * d + 1 > x.dim() {
        return Err(Error::OutOfTruncation(format!(
            "λ in degree {d} needs X_{}, bound is {}",
            2 * d + 1,
            x.dim()
        )));
    }
    let e = el(x);
    let source = Arc::new(nerve(e.cat(), d));
    let target = Arc::new(sd(x)?);
    let components = el_chains(&e, d)
        .iter()
        .map(|lv| lv.iter().map(|c| x.act_unchecked(middle_segments(&c.chain).images(), c.chain.end(), c.top)).collect())
        .collect();
    SMap::new_unchecked(source, target, components)
}

/// The pullback `Q^*(el X)` of `el(X) -> Δ` along `Q`, built directly from
/// `el(X)`: objects `(k, e)` with `e` over `[2k+1]`, morphisms `(α, u)` with `u`
/// over `Q(α)`. Returns it with its projection `ω` to `el(X)`.
pub fn q_pullback_el(e: &ElCat) -> Result<(Arc<FinCat>, Functor)> {
    let c = e.cat();
    let dk = (e.dim().max(1) - 1) / 2;
    let mut objects = Vec::new();
    let mut obj_over = Vec::new();
    let mut obj_index = HashMap::new();
    for o in 0..c.num_objects() {
        let (n, _) = e.element(o);
        if n % 2 == 1 && n / 2 <= dk {
            obj_index.insert(o, objects.len());
            objects.push(format!("({},{})", n / 2, c.object_name(o)));
            obj_over.push(o);
        }
    }
    let mut morphisms = Vec::new();
    let mut mor_over = Vec::new();
    let mut mor_index = HashMap::new();
    for m in 0..c.num_morphisms() {
        let (a, _) = e.arrow(m);
        let (p, q) = (a.dom(), a.cod());
        if p % 2 == 0 || q % 2 == 0 || p / 2 > dk || q / 2 > dk {
            continue;
        }
        // u lies over Q(α) exactly when its map is in the image of Q
        let Some(alpha) = q_preimage(a) else { continue };
        mor_index.insert(m, morphisms.len());
        morphisms.push(Morphism {
            name: format!("({},{})", alpha.label(), c.morphism(m).name),
            src: obj_index[&c.src(m)],
            tgt: obj_index[&c.tgt(m)],
        });
        mor_over.push(m);
    }
    let identities = obj_over.iter().map(|&o| mor_index[&c.identity(o)]).collect();
    let cat = FinCat::from_fn(objects, morphisms, identities, |g, f| {
        mor_index[&c.compose(mor_over[g], mor_over[f]).expect("composable")]
    })?;
    let cat = Arc::new(cat);
    let omega = Functor::new_unchecked(cat.clone(), c.clone(), obj_over, mor_over);
    Ok((cat, omega))
}

/// The `α` with `Q(α) = a`, if any.
pub fn q_preimage(a: &OrdinalMap) -> Option<OrdinalMap> {
    let (p, q) = (a.dom(), a.cod());
    if p % 2 == 0 || q % 2 == 0 {
        return None;
    }
    let (m, n) = (p / 2, q / 2);
    let images: Vec<usize> = (0..=m).map(|j| a.apply(m + 1 + j)).collect();
    if images.iter().any(|&v| v <= n) {
        return None;
    }
    let alpha = OrdinalMap::new(m, n, images.iter().map(|&v| v - n - 1).collect()).ok()?;
    (q_on_map(&alpha) == *a).then_some(alpha)
}

/// The renaming isomorphism `el(Sd X) -> Q^*(el X)`, for `x` of odd
/// dimension bound so that both sides see the same levels.
pub fn sd_el_renaming(x: &TruncSSet, el_x: &ElCat, el_sd: &ElCat, pulled: &Arc<FinCat>, omega: &Functor) -> Result<Functor> {
    let mut obj_index = HashMap::new();
    for (o, &u) in omega.on_objects().iter().enumerate() {
        obj_index.insert(el_x.element(u), o);
    }
    let mut mor_index = HashMap::new();
    for (m, &u) in omega.on_morphisms().iter().enumerate() {
        let (a, s) = el_x.arrow(u);
        mor_index.insert((a.clone(), s), m);
    }
    let sdc = el_sd.cat();
    let on_objects = (0..sdc.num_objects())
        .map(|o| {
            let (k, s) = el_sd.element(o);
            obj_index.get(&(2 * k + 1, s)).copied()
        })
        .collect::<Option<Vec<_>>>();
    let on_morphisms = (0..sdc.num_morphisms())
        .map(|m| {
            let (a, s) = el_sd.arrow(m);
            mor_index.get(&(q_on_map(a), s)).copied()
        })
        .collect::<Option<Vec<_>>>();
    let (Some(on_objects), Some(on_morphisms)) = (on_objects, on_morphisms) else {
        return Err(Error::OutOfTruncation(format!(
            "el(X) at dimension {} does not reach the levels of Sd X",
            x.dim()
        )));
    };
    Functor::new(el_sd.cat().clone(), pulled.clone(), on_objects, on_morphisms)
}

/// A simplicial set over `x` built from a presheaf-like family: `fiber(n, σ)`
/// elements over each `σ ∈ X_n` and `restrict(α, σ, i)` giving the element
/// over `α^*σ`.
pub fn smap_from_fibers(
    x: &Arc<TruncSSet>,
    fiber: impl Fn(usize, usize) -> usize,
    restrict: impl Fn(&OrdinalMap, usize, usize) -> usize,
) -> Result<(Arc<TruncSSet>, SMap)> {
    let d = x.dim();
    let levels: Vec<Vec<(usize, usize)>> =
        (0..=d).map(|n| (0..x.level_len(n)).flat_map(|s| (0..fiber(n, s)).map(move |i| (s, i))).collect()).collect();
    let y = TruncSSet::build_with_action(
        d,
        levels.clone(),
        |a, &(s, i)| (x.act_unchecked(a.images(), a.cod(), s), restrict(a, s, i)),
        |_| String::new(),
    )?;
    let y = y.relabel(|n, k, _| {
        let (s, i) = levels[n][k];
        format!("({},{i})", x.label(n, s))
    });
    let y = Arc::new(y);
    let components = levels.iter().map(|lv| lv.iter().map(|t| t.0).collect()).collect();
    let q = SMap::new(y.clone(), x.clone(), components)?;
    Ok((y, q))
}

/// `Y_n = Σ_{σ ∈ X_n} P(n, σ)` for a presheaf on `el(X)`.
pub fn presheaf_to_smap(p: &Presheaf, el_x: &ElCat, x: &Arc<TruncSSet>) -> Result<(Arc<TruncSSet>, SMap)> {
    if el_x.dim() != x.dim() || **p.base() != **el_x.cat() {
        return Err(Error::InvalidPresheaf("the presheaf does not live on el(X)".into()));
    }
    let arrow_of = |a: &OrdinalMap, s: usize| -> usize {
        let t = el_x.find_element(a.cod(), s);
        *el_x
            .cat()
            .incoming(t)
            .iter()
            .find(|&&m| el_x.arrow(m).0 == a)
            .expect("every operator has an arrow")
    };
    smap_from_fibers(x, |n, s| p.size(el_x.find_element(n, s)), |a, s, i| p.apply(arrow_of(a, s), i))
}

/// `el(q) : el(Y) -> el(X)`, a discrete fibration.
pub fn smap_to_discfib(q: &SMap) -> Result<(ElCat, ElCat, DiscFib)> {
    let (y, x) = (q.source(), q.target());
    let d = q.dim();
    let ey = el_upto(y, d)?;
    let ex = el_upto(x, d)?;
    let on_objects = (0..ey.cat().num_objects())
        .map(|o| {
            let (n, s) = ey.element(o);
            ex.find_element(n, q.apply(n, s))
        })
        .collect();
    // arrows of el(Y) and el(X) share their layout, so map (α, σ) to (α, qσ)
    let xc = ex.cat();
    let mut index: HashMap<(&OrdinalMap, usize), usize> = HashMap::new();
    for m in 0..xc.num_morphisms() {
        let (a, s) = ex.arrow(m);
        index.insert((a, s), m);
    }
    let on_morphisms = (0..ey.cat().num_morphisms())
        .map(|m| {
            let (a, s) = ey.arrow(m);
            index[&(a, q.apply(a.cod(), s))]
        })
        .collect();
    let f = Functor::new(ey.cat().clone(), xc.clone(), on_objects, on_morphisms)?;
    let fib = DiscFib::new(f)?;
    Ok((ey, ex, fib))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::q_on_map;
    use crate::sset::{representable, terminal};

    fn om(cod: usize, v: &[usize]) -> OrdinalMap {
        OrdinalMap::from_images(cod, v).unwrap()
    }

    #[test]
    fn element_counts() {
        assert_eq!(el(&representable(1, 1)).cat().num_objects(), 5);
        let e = el(&representable(0, 1));
        assert_eq!(e.cat().num_objects(), 2);
        // one arrow per operator between levels 0 and 1
        assert_eq!(e.cat().num_morphisms(), 1 + 2 + 1 + 3);
        assert_eq!(nel(&representable(0, 1), 1).level_len(0), 2);
        assert!(e.projection().is_discrete_fibration());
        let empty = crate::sset::empty(2);
        assert_eq!(el(&empty).cat().num_objects(), 0);
        let _ = terminal(1);
    }

    #[test]
    fn segment_examples() {
        assert_eq!(lower_segments(&Chain::object(3)), om(3, &[3]));
        assert_eq!(lower_segments(&Chain::from_maps(vec![om(2, &[1, 2])]).unwrap()), om(2, &[2, 2]));
        assert_eq!(middle_segments(&Chain::object(3)), om(3, &[0, 3]));
        let g = om(4, &[1, 3]);
        assert_eq!(middle_segments(&Chain::from_maps(vec![g]).unwrap()), om(4, &[0, 1, 3, 4]));
        let act = om(4, &[0, 2, 4]);
        assert_eq!(middle_segments(&Chain::from_maps(vec![act]).unwrap()), om(4, &[0, 0, 4, 4]));
        let c = Chain::from_maps(vec![om(1, &[0, 0, 1]), om(2, &[0, 2])]).unwrap();
        assert_eq!(lower_segments(&c), om(2, &[2, 2, 2]));
        assert!(Chain::from_maps(vec![om(0, &[0, 0]), om(2, &[0, 1, 2])]).is_err());
    }

    #[test]
    fn twisting_commutes_with_segments() {
        let c = Chain::from_maps(vec![om(2, &[1, 2])]).unwrap();
        assert_eq!(q_on_map(&lower_segments(&c)), middle_segments(&c.twisted()));
    }

    #[test]
    fn segment_map_sets() {
        // every β(f) is last-point preserving and every α(f) is active
        for k in 0..3 {
            for b in segment_maps(k, 3, false) {
                assert!(b.is_last_point_preserving());
            }
            for a in segment_maps(k, 3, true) {
                assert!(a.is_active());
            }
        }
    }

    #[test]
    fn q_preimage_inverts() {
        for m in 0..3 {
            for n in 0..3 {
                for a in all_maps(m, n) {
                    assert_eq!(q_preimage(&q_on_map(&a)), Some(a));
                }
            }
        }
        assert_eq!(q_preimage(&om(3, &[0, 1])), None);
    }
}
