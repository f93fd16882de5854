//! The comprehensive (final, right fibration) factorization for functors and
//! simplicial maps, the (ambifinal, culf) factorization, the untwisting of
//! right fibrations over `Sd X` into culf maps over `X`, and the adjunction
//! `Q_! ⊣ Sd ⊣ Q_*` at finite truncation.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{
    comma_into_with_objects, fundamental_category, grothendieck, pi0, twisted_arrow, DiscFib, FinCat, Functor,
    FundamentalCategory, Presheaf,
};
use crate::checkers::{is_right_fibration, Square};
use crate::elements::{middle_segments, smap_from_fibers, Chain};
use crate::error::{Error, Result};
use crate::ordinal::{all_maps, q_on_map, q_on_object, OrdinalMap};
use crate::sset::{
    enumerate_smaps, representable, sd, sd_of_map, simplex_map, MapSearch, SMap, TruncSSet,
};

/// `right ∘ left`, with the middle object shared.
#[derive(Clone, Debug)]
pub struct Factorization<M> {
    pub left: M,
    pub right: M,
}

impl Factorization<Functor> {
    pub fn middle(&self) -> &Arc<FinCat> {
        self.right.source()
    }

    /// Whether `right ∘ left` is the given functor.
    pub fn composes_to(&self, f: &Functor) -> bool {
        Functor::compose(&self.right, &self.left).is_ok_and(|g| g == *f)
    }
}

impl Factorization<SMap> {
    pub fn middle(&self) -> &Arc<TruncSSet> {
        self.right.source()
    }

    pub fn composes_to(&self, f: &SMap) -> bool {
        SMap::compose(&self.right, &self.left).is_ok_and(|g| g.components() == f.truncate(g.dim()).components())
    }
}

/// `P(d) = π_0(d ↓ F)` with the action by precomposition.
pub fn comprehensive_presheaf(f: &Functor) -> (Presheaf, Vec<Vec<(usize, usize)>>) {
    let d = f.target();
    let mut comps = Vec::new();
    let mut members: Vec<HashMap<(usize, usize), usize>> = Vec::new();
    let mut reps = Vec::new();
    for o in 0..d.num_objects() {
        let (c, objs) = comma_into_with_objects(f, o);
        let comp = pi0(&c);
        let k = comp.iter().max().map_or(0, |m| m + 1);
        comps.push(k);
        let mut rep = vec![(0, 0); k];
        for (i, &(obj, alpha)) in objs.iter().enumerate().rev() {
            rep[comp[i]] = (obj, alpha);
        }
        reps.push(rep);
        members.push(objs.iter().enumerate().map(|(i, &t)| (t, comp[i])).collect());
    }
    let action = (0..d.num_morphisms())
        .map(|u| {
            let (s, t) = (d.src(u), d.tgt(u));
            reps[t]
                .iter()
                .map(|&(obj, alpha)| members[s][&(obj, d.compose(alpha, u).expect("composable"))])
                .collect()
        })
        .collect();
    (Presheaf::new_unchecked(d.clone(), comps, action), reps)
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .iter()
        .map(|&s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

/// `F = r ∘ ℓ` with `r` a discrete fibration and `ℓ` final.
pub fn comprehensive_factorize_functor(f: &Functor) -> Result<Factorization<Functor>> {
    let (p, _) = comprehensive_presheaf(f);
    let fib = grothendieck(&p);
    let comma_index: Vec<HashMap<(usize, usize), usize>> = (0..f.target().num_objects())
        .map(|o| {
            let (c, objs) = comma_into_with_objects(f, o);
            let comp = pi0(&c);
            objs.iter().enumerate().map(|(i, &t)| (t, comp[i])).collect()
        })
        .collect();
    let off = offsets(p.sizes());
    let d = f.target();
    let c = f.source();
    let on_objects: Vec<usize> = (0..c.num_objects())
        .map(|o| {
            let fo = f.obj(o);
            off[fo] + comma_index[fo][&(o, d.identity(fo))]
        })
        .collect();
    let on_morphisms = (0..c.num_morphisms())
        .map(|g| fib.lift(f.mor(g), on_objects[c.tgt(g)]))
        .collect();
    let left = Functor::new(c.clone(), fib.total().clone(), on_objects, on_morphisms)?;
    Ok(Factorization { left, right: fib.projection().clone() })
}

/// The right fibration part of `g : W -> Z` and the unit `W -> R`.
#[derive(Clone, Debug)]
pub struct RfibReflection {
    pub fundamental: FundamentalCategory,
    /// The classifying presheaf on the fundamental category of `Z`.
    pub presheaf: Presheaf,
    pub projection: SMap,
    pub unit: SMap,
}

impl RfibReflection {
    pub fn total(&self) -> &Arc<TruncSSet> {
        self.projection.source()
    }

    pub fn factorization(&self) -> Factorization<SMap> {
        Factorization { left: self.unit.clone(), right: self.projection.clone() }
    }
}

/// Right fibration over `z` classified by a presheaf on its fundamental
/// category: `R_n = Σ_{σ ∈ Z_n} P(last vertex of σ)`.
pub fn rfib_from_presheaf(z: &Arc<TruncSSet>, fc: &FundamentalCategory, p: &Presheaf) -> Result<(Arc<TruncSSet>, SMap)> {
    smap_from_fibers(
        z,
        |n, s| p.size(z.last_vertex(n, s)),
        |a, s, i| {
            let n = a.cod();
            let e = z.edge(n, s, a.last(), n);
            p.apply(fc.edge_class[e], i)
        },
    )
}

/// Union-find over `0..n`.
struct Classes {
    parent: Vec<usize>,
}

impl Classes {
    fn new(n: usize) -> Self {
        Classes { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }

    /// Class numbers in order of first appearance.
    fn numbering(&mut self) -> (Vec<usize>, usize) {
        let mut label = HashMap::new();
        let v = (0..self.parent.len())
            .map(|x| {
                let r = self.find(x);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect();
        (v, label.len())
    }
}

/// Reflection of `g : W -> Z` into right fibrations over `Z`, through the
/// presheaf `P(z) = π_0(z ↓ τ₁ g)` on the fundamental category.
pub fn rfib_reflection(g: &SMap, budget: usize) -> Result<RfibReflection> {
    let (w, z) = (g.source(), g.target());
    if g.dim() < 2 {
        return Err(Error::OutOfTruncation("the reflection needs 2-simplices in the base".into()));
    }
    let fc = fundamental_category(z, budget)?;
    let t = &fc.cat;
    let nz = t.num_objects();
    // pairs (w, q : z -> g(w)) per object z
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nz];
    let mut index: Vec<HashMap<(usize, usize), usize>> = vec![HashMap::new(); nz];
    for zo in 0..nz {
        for v in 0..w.level_len(0) {
            for q in t.hom(zo, g.apply(0, v)) {
                index[zo].insert((v, q), pairs[zo].len());
                pairs[zo].push((v, q));
            }
        }
    }
    let mut classes: Vec<Classes> = pairs.iter().map(|ps| Classes::new(ps.len())).collect();
    for e in 0..w.level_len(1) {
        let (w0, w1) = (w.face(1, 1, e), w.face(1, 0, e));
        let ge = fc.edge_class[g.apply(1, e)];
        for zo in 0..nz {
            for q in t.hom(zo, g.apply(0, w0)) {
                let q2 = t.compose(ge, q).expect("composable");
                let (a, b) = (index[zo][&(w0, q)], index[zo][&(w1, q2)]);
                classes[zo].union(a, b);
            }
        }
    }
    let numbered: Vec<(Vec<usize>, usize)> = classes.iter_mut().map(Classes::numbering).collect();
    let sizes: Vec<usize> = numbered.iter().map(|(_, k)| *k).collect();
    let mut reps: Vec<Vec<(usize, usize)>> = sizes.iter().map(|&k| vec![(0, 0); k]).collect();
    for zo in 0..nz {
        for (i, &pair) in pairs[zo].iter().enumerate().rev() {
            reps[zo][numbered[zo].0[i]] = pair;
        }
    }
    let action = (0..t.num_morphisms())
        .map(|u| {
            let (s, tt) = (t.src(u), t.tgt(u));
            reps[tt]
                .iter()
                .map(|&(v, q)| numbered[s].0[index[s][&(v, t.compose(q, u).expect("composable"))]])
                .collect()
        })
        .collect();
    let presheaf = Presheaf::new_unchecked(Arc::new(t.clone()), sizes, action);
    let (r, projection) = rfib_from_presheaf(z, &fc, &presheaf)?;
    // position of (σ, i) in R_n
    let d = projection.dim().min(w.dim());
    let unit_components = (0..=d)
        .map(|n| {
            let off = offsets(&(0..z.level_len(n)).map(|s| presheaf.size(z.last_vertex(n, s))).collect::<Vec<_>>());
            (0..w.level_len(n))
                .map(|x| {
                    let s = g.apply(n, x);
                    let v = w.last_vertex(n, x);
                    let zo = g.apply(0, v);
                    let cls = numbered[zo].0[index[zo][&(v, t.identity(zo))]];
                    off[s] + cls
                })
                .collect()
        })
        .collect();
    let unit = SMap::new(w.clone(), r, unit_components)?;
    Ok(RfibReflection { fundamental: fc, presheaf, projection, unit })
}

/// Pulls a right fibration `p : R -> Sd X` back along `λ_X` and returns the
/// resulting culf map `Y -> X` (on all levels of `X`).
pub fn untwist(p: &SMap, x: &Arc<TruncSSet>) -> Result<(Arc<TruncSSet>, SMap)> {
    let sx = sd(x)?;
    let r = p.source();
    if p.target().dim() != sx.dim() || **p.target() != sx {
        return Err(Error::DimensionMismatch("the right fibration does not live over Sd X".into()));
    }
    if x.dim() < 3 {
        return Err(Error::OutOfTruncation("untwisting needs X_3".into()));
    }
    let v = is_right_fibration(p)?;
    if !v.holds {
        return Err(Error::NotRightFibration(v.witness.map(|w| w.description).unwrap_or_default()));
    }
    let fibers = p.fibers(0);
    // unique lift of an Sd-edge along its target vertex
    let mut lift: HashMap<(usize, usize), usize> = HashMap::new();
    for e in 0..r.level_len(1) {
        lift.insert((p.apply(1, e), r.face(1, 0, e)), e);
    }
    smap_from_fibers(
        x,
        |n, s| fibers[x.long_edge(n, s)].len(),
        |a, s, i| {
            let n = a.cod();
            let rr = fibers[x.long_edge(n, s)][i];
            let chain = Chain::from_maps(vec![a.clone()]).expect("single map");
            let e = x.act_unchecked(middle_segments(&chain).images(), n, s);
            let up = lift[&(e, rr)];
            let src = r.face(1, 1, up);
            let below = x.long_edge(a.dom(), x.act_unchecked(a.images(), n, s));
            fibers[below].iter().position(|&t| t == src).expect("lift lands in the fiber")
        },
    )
}

/// The culf part of `f` together with the ambifinal comparison map.
pub fn culf_reflection(f: &SMap, budget: usize) -> Result<Factorization<SMap>> {
    let (y, x) = (f.source(), f.target());
    if f.dim() < 5 || y.dim() != x.dim() {
        return Err(Error::OutOfTruncation("culf reflection needs equal bounds of at least 5".into()));
    }
    let sf = sd_of_map(f)?;
    let refl = rfib_reflection(&sf, budget)?;
    let (m, right) = untwist(&refl.projection, x)?;
    let fibers = refl.projection.fibers(0);
    let components = (0..=x.dim())
        .map(|n| {
            let starts = offsets(&(0..x.level_len(n)).map(|s| fibers[x.long_edge(n, s)].len()).collect::<Vec<_>>());
            (0..y.level_len(n))
                .map(|e| {
                    let s = f.apply(n, e);
                    let u = refl.unit.apply(0, y.long_edge(n, e));
                    starts[s] + fibers[x.long_edge(n, s)].iter().position(|&t| t == u).expect("unit lies over f")
                })
                .collect()
        })
        .collect();
    let left = SMap::new(y.clone(), m, components)?;
    Ok(Factorization { left, right })
}

/// Whether the culf part of the reflection of `f` is an isomorphism.
pub fn is_ambifinal(f: &SMap, budget: usize) -> Result<bool> {
    Ok(culf_reflection(f, budget)?.right.is_levelwise_bijective())
}

/// `Q_! A` truncated at `dim`: classes of pairs `(φ : [j] -> Q[k], a)` with `a`
/// non-degenerate in `A_k`. Exact when every non-degenerate simplex of `a`
/// is stored.
pub fn q_lower_shriek(a: &TruncSSet, dim: usize) -> Result<QShriek> {
    let nd: Vec<Vec<usize>> = (0..=a.dim()).map(|k| a.nondegenerate(k)).collect();
    let mut levels: Vec<Vec<(OrdinalMap, usize, usize)>> = Vec::new();
    let mut classes_per_level = Vec::new();
    for j in 0..=dim {
        let mut elems: Vec<(OrdinalMap, usize, usize)> = Vec::new();
        let mut index: HashMap<(OrdinalMap, usize, usize), usize> = HashMap::new();
        for (k, ks) in nd.iter().enumerate() {
            for &s in ks {
                for phi in all_maps(j, q_on_object(k)) {
                    index.insert((phi.clone(), k, s), elems.len());
                    elems.push((phi, k, s));
                }
            }
        }
        let mut cls = Classes::new(elems.len());
        for (k, ks) in nd.iter().enumerate().skip(1) {
            for &s in ks {
                for i in 0..=k {
                    let qd = q_on_map(&OrdinalMap::coface(k, i)?);
                    let face = a.face(k, i, s);
                    let (sigma, b) = a.ez_decompose(k - 1, face);
                    let qs = q_on_map(&sigma);
                    for psi in all_maps(j, q_on_object(k - 1)) {
                        let lhs = index[&(qd.after(&psi)?, k, s)];
                        let rhs = index[&(qs.after(&psi)?, sigma.cod(), b)];
                        cls.union(lhs, rhs);
                    }
                }
            }
        }
        let (num, count) = cls.numbering();
        let mut reps = vec![None; count];
        for (i, e) in elems.iter().enumerate() {
            if reps[num[i]].is_none() {
                reps[num[i]] = Some(e.clone());
            }
        }
        levels.push(reps.into_iter().map(Option::unwrap).collect());
        classes_per_level.push((num, index));
    }
    let lookup = |j: usize, key: &(OrdinalMap, usize, usize)| -> usize {
        let (num, index) = &classes_per_level[j];
        num[index[key]]
    };
    let x = TruncSSet::build_with_action(
        dim,
        levels.iter().map(|lv| (0..lv.len()).map(|c| (lv[c].0.dom(), c)).collect()).collect(),
        |beta, &(j, c)| {
            let (phi, k, s) = &levels[j][c];
            (beta.dom(), lookup(beta.dom(), &(phi.after(beta).unwrap(), *k, *s)))
        },
        |&(j, c)| {
            let (phi, k, s) = &levels[j][c];
            format!("{}@{}", phi.label(), a.label(*k, *s))
        },
    )?;
    Ok(QShriek { sset: Arc::new(x), representatives: levels })
}

#[derive(Clone, Debug)]
pub struct QShriek {
    pub sset: Arc<TruncSSet>,
    /// `(φ, k, a)` representing each element.
    pub representatives: Vec<Vec<(OrdinalMap, usize, usize)>>,
}

/// The counit `Q_! Sd Δ^n -> Δ^n`, truncated at `dim`: `(φ, a) ↦ a ∘ φ`.
pub fn counit_representable(n: usize, dim: usize) -> Result<SMap> {
    let sdn = sd(&representable(n, 2 * n + 1))?;
    let qs = q_lower_shriek(&sdn, dim)?;
    let delta = Arc::new(representable(n, dim));
    let components = qs
        .representatives
        .iter()
        .enumerate()
        .map(|(j, lv)| {
            lv.iter()
                .map(|(phi, k, s)| {
                    let a = OrdinalMap::from_images(n, &labels_to_images(sdn.label(*k, *s))).expect("simplex of Δ^n");
                    delta.find(j, &a.after(phi).unwrap().label()).expect("present")
                })
                .collect()
        })
        .collect();
    SMap::new(qs.sset.clone(), delta, components)
}

fn labels_to_images(label: &str) -> Vec<usize> {
    if label.contains(',') {
        label.split(',').map(|t| t.parse().unwrap()).collect()
    } else {
        label.chars().map(|c| c.to_digit(10).unwrap() as usize).collect()
    }
}

/// The unit `[n] -> Tw[2n+1]`, `i ↦ (n - i <= n + 1 + i)`.
pub fn eta_representable(n: usize) -> Result<Functor> {
    let src = Arc::new(FinCat::ordinal(n));
    let big = FinCat::ordinal(2 * n + 1);
    let tw = Arc::new(twisted_arrow(&big));
    let obj = |i: usize| -> usize { tw.find_object(&format!("{}<={}", n - i, n + 1 + i)).expect("object of Tw") };
    let on_objects: Vec<usize> = (0..=n).map(obj).collect();
    let on_morphisms = src
        .morphisms()
        .iter()
        .map(|m| {
            let h = tw.hom(on_objects[m.src], on_objects[m.tgt]);
            h.first().copied().ok_or_else(|| Error::InvalidFunctor("unit is not monotone".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Functor::new(src, tw, on_objects, on_morphisms)
}

/// `η_{Δ^n} : Δ^n -> Sd Δ^{2n+1}` as a simplicial map, `σ ↦ Q(σ)`.
pub fn eta_representable_smap(n: usize, dim: usize) -> Result<SMap> {
    let src = Arc::new(representable(n, dim));
    let tgt = Arc::new(sd(&representable(2 * n + 1, 2 * dim + 1))?);
    let components = (0..=dim)
        .map(|k| all_maps(k, n).iter().map(|s| tgt.find(k, &q_on_map(s).label()).expect("present")).collect())
        .collect();
    SMap::new(src, tgt, components)
}

/// `(Q_* W)_n = Hom(Sd Δ^n, W)` for `n <= n_max <= W.dim`, acting by
/// precomposition.
pub fn q_star(w: &Arc<TruncSSet>, n_max: usize) -> Result<QStar> {
    let k = w.dim();
    if n_max > k {
        return Err(Error::OutOfTruncation(format!("level {n_max} of Q_* W needs W_{n_max}, bound is {k}")));
    }
    let sds: Vec<Arc<TruncSSet>> =
        (0..=n_max).map(|n| sd(&representable(n, 2 * k + 1)).map(Arc::new)).collect::<Result<_>>()?;
    let maps: Vec<Vec<SMap>> = sds.iter().map(|s| enumerate_smaps(s, w, &MapSearch::default())).collect();
    let index: Vec<HashMap<Vec<Vec<usize>>, usize>> = maps
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, h)| (h.components().to_vec(), i)).collect())
        .collect();
    let sd_op = |beta: &OrdinalMap| -> Vec<Vec<usize>> {
        // Sd(Δ^β) : Sd Δ^m -> Sd Δ^n sends a : Q[j] -> [m] to β ∘ a
        let (m, n) = (beta.dom(), beta.cod());
        (0..=k)
            .map(|j| {
                (0..sds[m].level_len(j))
                    .map(|s| {
                        let a = OrdinalMap::from_images(m, &labels_to_images(sds[m].label(j, s))).unwrap();
                        sds[n].find(j, &beta.after(&a).unwrap().label()).unwrap()
                    })
                    .collect()
            })
            .collect()
    };
    let x = TruncSSet::build_with_action(
        n_max,
        maps.iter().enumerate().map(|(n, lv)| (0..lv.len()).map(|i| (n, i)).collect()).collect(),
        |beta, &(n, i)| {
            let op = sd_op(beta);
            let h = &maps[n][i];
            let comps: Vec<Vec<usize>> =
                op.iter().enumerate().map(|(j, col)| col.iter().map(|&s| h.apply(j, s)).collect()).collect();
            (beta.dom(), index[beta.dom()][&comps])
        },
        |&(n, i)| format!("h{n}.{i}"),
    )?;
    Ok(QStar { sset: Arc::new(x), maps, sds })
}

#[derive(Clone, Debug)]
pub struct QStar {
    pub sset: Arc<TruncSSet>,
    /// The maps `Sd Δ^n -> W` at each level.
    pub maps: Vec<Vec<SMap>>,
    pub sds: Vec<Arc<TruncSSet>>,
}

impl QStar {
    pub fn find(&self, n: usize, components: &[Vec<usize>]) -> Option<usize> {
        self.maps[n].iter().position(|h| h.components() == components)
    }
}

/// `η' : X -> Q_* Sd X` on levels `0..=qs.sset.dim()`, with `qs = q_star(Sd X)`.
pub fn eta_prime(x: &Arc<TruncSSet>, qs: &QStar) -> Result<SMap> {
    let d = qs.sset.dim();
    let components = (0..=d)
        .map(|n| {
            (0..x.level_len(n))
                .map(|s| {
                    let h = sd_of_map(&simplex_map(x, n, s)?)?;
                    qs.find(n, h.components())
                        .ok_or_else(|| Error::OutOfTruncation(format!("no map for simplex {s} in level {n}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SMap::new_unchecked(x.clone(), qs.sset.clone(), components)
}

/// `Q_*(p)` by postcomposition.
pub fn q_star_map(p: &SMap, src: &QStar, tgt: &QStar) -> Result<SMap> {
    let d = src.sset.dim().min(tgt.sset.dim());
    let components = (0..=d)
        .map(|n| {
            src.maps[n]
                .iter()
                .map(|h| {
                    let c: Vec<Vec<usize>> = h
                        .components()
                        .iter()
                        .enumerate()
                        .map(|(j, col)| col.iter().map(|&s| p.apply(j, s)).collect())
                        .collect();
                    tgt.find(n, &c).ok_or_else(|| Error::InvalidSMap("postcomposite missing".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SMap::new(src.sset.clone(), tgt.sset.clone(), components)
}

/// The naturality squares of `η'` at `p : Y -> X`, one per degree
/// `0..=n_max`: `Y_n -> (Q_* Sd Y)_n` over `X_n -> (Q_* Sd X)_n`.
pub fn eta_prime_squares(p: &SMap, n_max: usize) -> Result<Vec<Square>> {
    let (y, x) = (p.source(), p.target());
    if y.dim() != x.dim() || x.dim() % 2 == 0 {
        return Err(Error::DimensionMismatch("η' squares need equal odd bounds".into()));
    }
    let qy = q_star(&Arc::new(sd(y)?), n_max)?;
    let qx = q_star(&Arc::new(sd(x)?), n_max)?;
    let ey = eta_prime(y, &qy)?;
    let ex = eta_prime(x, &qx)?;
    let qp = q_star_map(&sd_of_map(p)?, &qy, &qx)?;
    Ok((0..=n_max)
        .map(|n| Square {
            label: format!("η'-square in degree {n}"),
            sizes: [y.level_len(n), qy.sset.level_len(n), x.level_len(n), qx.sset.level_len(n)],
            top: ey.component(n).to_vec(),
            left: p.component(n).to_vec(),
            right: qp.component(n).to_vec(),
            bottom: ex.component(n).to_vec(),
        })
        .collect())
}

/// Compatible families in `P`, i.e. sections of `grothendieck(P)`.
pub fn global_sections(p: &Presheaf) -> Vec<Vec<usize>> {
    let c = p.base();
    let n = c.num_objects();
    let mut out = Vec::new();
    let mut cur = vec![usize::MAX; n];
    fn go(p: &Presheaf, c: &FinCat, o: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if o == c.num_objects() {
            out.push(cur.clone());
            return;
        }
        for x in 0..p.size(o) {
            cur[o] = x;
            let ok = (0..c.num_morphisms()).all(|m| {
                let (s, t) = (c.src(m), c.tgt(m));
                s.max(t) > o || p.apply(m, cur[t]) == cur[s]
            });
            if ok {
                go(p, c, o + 1, cur, out);
            }
        }
        cur[o] = usize::MAX;
    }
    go(p, c, 0, &mut cur, &mut out);
    out
}

/// For each lifting square of `l : C -> M` against `grothendieck(P)` (with
/// `P` on `M`), the number of diagonal fillers. The squares are the
/// sections of `l^*P` and the fillers the sections of `P` restricting to
/// them.
pub fn functor_filler_counts(l: &Functor, p: &Presheaf) -> Vec<usize> {
    let pulled = p.pullback(l);
    let tops = global_sections(&pulled);
    let sections = global_sections(p);
    tops.iter()
        .map(|u| {
            sections
                .iter()
                .filter(|s| (0..l.source().num_objects()).all(|o| s[l.obj(o)] == u[o]))
                .count()
        })
        .collect()
}

/// Filler counts for `l : W -> R` against a map `q : E -> R`, by enumerating
/// maps `u : W -> E` over `l` and sections `h` of `q`.
pub fn smap_filler_counts(l: &SMap, q: &SMap) -> Vec<usize> {
    let (w, e, r) = (l.source(), q.source(), l.target());
    let over_l = |n: usize, a: usize, b: usize| q.apply(n, b) == l.apply(n, a);
    let tops = enumerate_smaps(w, e, &MapSearch { allowed: Some(&over_l), ..Default::default() });
    let over_id = |n: usize, a: usize, b: usize| q.apply(n, b) == a;
    let sections = enumerate_smaps(r, e, &MapSearch { allowed: Some(&over_id), ..Default::default() });
    tops.iter()
        .map(|u| {
            sections
                .iter()
                .filter(|h| (0..=u.dim()).all(|n| (0..w.level_len(n)).all(|a| h.apply(n, l.apply(n, a)) == u.apply(n, a))))
                .count()
        })
        .collect()
}

/// A discrete fibration over `d` as a [`DiscFib`], from a presheaf.
pub fn discfib_of(p: &Presheaf) -> DiscFib {
    grothendieck(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::DEFAULT_BUDGET;
    use crate::checkers::{is_culf, is_final_functor};
    use crate::sset::{are_isomorphic, nerve, nerve_map, smap_from_fn, terminal};

    fn vertex_of_interval(v: usize, dim: usize) -> SMap {
        let pt = Arc::new(representable(0, dim));
        let x = Arc::new(representable(1, dim));
        smap_from_fn(pt, x.clone(), |n, _| x.find(n, &vec![v.to_string(); n + 1].join("")).unwrap()).unwrap()
    }

    #[test]
    fn comprehensive_vertex_functors() {
        let pt = Arc::new(FinCat::ordinal(0));
        let one = Arc::new(FinCat::ordinal(1));
        let at = |v: usize| Functor::new(pt.clone(), one.clone(), vec![v], vec![one.identity(v)]).unwrap();
        let fa = comprehensive_factorize_functor(&at(1)).unwrap();
        assert!(fa.right.is_isomorphism());
        assert!(fa.composes_to(&at(1)));
        let fa = comprehensive_factorize_functor(&at(0)).unwrap();
        assert_eq!(fa.middle().num_objects(), 1);
        assert!(fa.left.is_isomorphism());
        assert!(is_final_functor(&fa.left).holds);
    }

    #[test]
    fn rfib_reflection_of_vertices() {
        // {1} -> Δ^1 is final: the reflection is all of Δ^1
        let r = rfib_reflection(&vertex_of_interval(1, 3), DEFAULT_BUDGET).unwrap();
        assert!(r.projection.is_levelwise_bijective());
        // {0} -> Δ^1 is already a right fibration
        let r = rfib_reflection(&vertex_of_interval(0, 3), DEFAULT_BUDGET).unwrap();
        assert!(r.unit.is_levelwise_bijective());
        assert_eq!(r.presheaf.sizes(), &[1, 0]);
    }

    #[test]
    fn untwist_identity() {
        let x = Arc::new(nerve(&FinCat::ordinal(1), 5));
        let sx = Arc::new(sd(&x).unwrap());
        let (y, q) = untwist(&SMap::identity(sx), &x).unwrap();
        assert!(are_isomorphic(&y, &x));
        assert!(q.is_levelwise_bijective());
        assert!(is_culf(&q).unwrap().holds);
    }

    #[test]
    fn unit_values() {
        for n in 0..=3 {
            let eta = eta_representable(n).unwrap();
            let tw = eta.target();
            for i in 0..=n {
                assert_eq!(tw.object_name(eta.obj(i)), format!("{}<={}", n - i, n + i + 1));
            }
            assert!(is_final_functor(&eta).holds);
        }
        let e = eta_representable_smap(1, 3).unwrap();
        assert_eq!(e.target().label(0, e.apply(0, 0)), "12");
        assert_eq!(e.target().label(0, e.apply(0, 1)), "03");
    }

    #[test]
    fn q_shriek_of_a_point() {
        // Q_! Δ^0 = Δ^1
        let qs = q_lower_shriek(&terminal(2), 3).unwrap();
        assert!(are_isomorphic(&qs.sset, &Arc::new(representable(1, 3))));
        let eps = counit_representable(1, 3).unwrap();
        eps.source().validate().unwrap();
    }

    #[test]
    fn q_star_of_terminal() {
        let t = Arc::new(terminal(2));
        let qs = q_star(&t, 2).unwrap();
        assert_eq!(qs.sset.level_sizes(), vec![1, 1, 1]);
    }

    #[test]
    fn culf_reflection_of_culf_map() {
        let pp = Arc::new(FinCat::parallel_pair());
        let one = Arc::new(FinCat::ordinal(1));
        let f = Functor::new(pp, one, vec![0, 1], vec![0, 2, 1, 1]).unwrap();
        let nf = nerve_map(&f, 5);
        let fa = culf_reflection(&nf, DEFAULT_BUDGET).unwrap();
        assert!(fa.left.is_levelwise_bijective());
        assert!(fa.composes_to(&nf));
    }
}
