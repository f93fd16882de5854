//! Finite categories given by explicit composition tables, functors,
//! presheaves and discrete fibrations.

mod enumerate;
mod fundamental;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use enumerate::*;
pub use fundamental::*;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `(g, f) -> g ∘ f` for every composable pair.
    compose: HashMap<(usize, usize), usize>,
    out_of: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

impl FinCat {
    /// Builds and validates a category from a full composition table.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(objects, morphisms, identities, compose)?;
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidCategory(m));
        if identities.len() != objects.len() {
            return bad("one identity per object required".into());
        }
        for m in &morphisms {
            if m.src >= objects.len() || m.tgt >= objects.len() {
                return bad(format!("morphism {} has an unknown endpoint", m.name));
            }
        }
        let mut out_of = vec![Vec::new(); objects.len()];
        let mut into = vec![Vec::new(); objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            out_of[m.src].push(i);
            into[m.tgt].push(i);
        }
        Ok(FinCat { objects, morphisms, identities, compose, out_of, into })
    }

    /// Builds a category whose composition is given by a function on
    /// composable pairs.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut c = Self::new_unchecked(objects, morphisms, identities, HashMap::new())?;
        let mut table = HashMap::new();
        for f in 0..c.morphisms.len() {
            for &g in &c.out_of[c.morphisms[f].tgt] {
                table.insert((g, f), compose(g, f));
            }
        }
        c.compose = table;
        Ok(c)
    }

    /// Checks typing, unit and associativity laws.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCategory(m));
        for (o, &id) in self.identities.iter().enumerate() {
            let m = self.morphisms.get(id).ok_or_else(|| Error::InvalidCategory("bad identity".into()))?;
            if m.src != o || m.tgt != o {
                return bad(format!("identity of {} has wrong type", self.objects[o]));
            }
        }
        for f in 0..self.morphisms.len() {
            let (a, b) = (self.morphisms[f].src, self.morphisms[f].tgt);
            for &g in &self.out_of[b] {
                let Some(&gf) = self.compose.get(&(g, f)) else {
                    return bad(format!(
                        "missing composite {} ∘ {}",
                        self.morphisms[g].name, self.morphisms[f].name
                    ));
                };
                let h = self.morphisms.get(gf).ok_or_else(|| Error::InvalidCategory("bad composite".into()))?;
                if h.src != a || h.tgt != self.morphisms[g].tgt {
                    return bad(format!(
                        "composite {} ∘ {} has the wrong type",
                        self.morphisms[g].name, self.morphisms[f].name
                    ));
                }
            }
            if self.compose[&(self.identities[b], f)] != f || self.compose[&(f, self.identities[a])] != f {
                return bad(format!("unit law fails at {}", self.morphisms[f].name));
            }
        }
        if self.compose.len() != self.composable_pairs() {
            return bad("composition table has entries for non-composable pairs".into());
        }
        for f in 0..self.morphisms.len() {
            for &g in &self.out_of[self.morphisms[f].tgt] {
                let gf = self.compose[&(g, f)];
                for &h in &self.out_of[self.morphisms[g].tgt] {
                    if self.compose[&(h, gf)] != self.compose[&(self.compose[&(h, g)], f)] {
                        return bad(format!(
                            "associativity fails at ({}, {}, {})",
                            self.morphisms[h].name, self.morphisms[g].name, self.morphisms[f].name
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn composable_pairs(&self) -> usize {
        (0..self.objects.len()).map(|o| self.into[o].len() * self.out_of[o].len()).sum()
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn src(&self, m: usize) -> usize {
        self.morphisms[m].src
    }

    pub fn tgt(&self, m: usize) -> usize {
        self.morphisms[m].tgt
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].src] == m
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    pub fn composition_table(&self) -> &HashMap<(usize, usize), usize> {
        &self.compose
    }

    pub fn out_of(&self, o: usize) -> &[usize] {
        &self.out_of[o]
    }

    pub fn incoming(&self, o: usize) -> &[usize] {
        &self.into[o]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.out_of[a].iter().copied().filter(|&m| self.morphisms[m].tgt == b).collect()
    }

    pub fn find_object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// Whether `m` has a two-sided inverse.
    pub fn inverse(&self, m: usize) -> Option<usize> {
        let Morphism { src, tgt, .. } = self.morphisms[m];
        self.hom(tgt, src).into_iter().find(|&n| {
            self.compose(n, m) == Some(self.identities[src]) && self.compose(m, n) == Some(self.identities[tgt])
        })
    }

    pub fn is_iso(&self, m: usize) -> bool {
        self.inverse(m).is_some()
    }

    pub fn opposite(&self) -> FinCat {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism { name: format!("{}^op", m.name), src: m.tgt, tgt: m.src })
            .collect();
        let compose = self.compose.iter().map(|(&(g, f), &gf)| ((f, g), gf)).collect();
        FinCat::new_unchecked(self.objects.clone(), morphisms, self.identities.clone(), compose)
            .expect("opposite of a valid category")
    }

    /// The full subcategory on morphisms satisfying `keep`, which must contain
    /// identities and be closed under composition.
    pub fn wide_subcategory(&self, keep: impl Fn(usize) -> bool) -> Result<(FinCat, Vec<usize>)> {
        let kept: Vec<usize> = (0..self.morphisms.len()).filter(|&m| keep(m)).collect();
        let mut index = vec![usize::MAX; self.morphisms.len()];
        for (i, &m) in kept.iter().enumerate() {
            index[m] = i;
        }
        let morphisms = kept.iter().map(|&m| self.morphisms[m].clone()).collect();
        let identities = self
            .identities
            .iter()
            .map(|&id| {
                (index[id] != usize::MAX)
                    .then_some(index[id])
                    .ok_or_else(|| Error::InvalidCategory("subcategory misses an identity".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut compose = HashMap::new();
        for (&(g, f), &gf) in &self.compose {
            if index[g] != usize::MAX && index[f] != usize::MAX {
                if index[gf] == usize::MAX {
                    return Err(Error::InvalidCategory("subcategory not closed under composition".into()));
                }
                compose.insert((index[g], index[f]), index[gf]);
            }
        }
        Ok((FinCat::new_unchecked(self.objects.clone(), morphisms, identities, compose)?, kept))
    }

    /// The poset on `names` with `leq(a, b)` meaning an arrow `a -> b`.
    pub fn poset(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<FinCat> {
        let n = names.len();
        let mut morphisms = Vec::new();
        let mut idx = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    idx.insert((a, b), morphisms.len());
                    morphisms.push(Morphism { name: format!("{}<={}", names[a], names[b]), src: a, tgt: b });
                }
            }
        }
        let identities = (0..n)
            .map(|a| idx.get(&(a, a)).copied().ok_or_else(|| Error::InvalidCategory("not reflexive".into())))
            .collect::<Result<Vec<_>>>()?;
        let ms = morphisms.clone();
        let c = FinCat::from_fn(names, morphisms, identities, |g, f| {
            idx.get(&(ms[f].src, ms[g].tgt)).copied().unwrap_or(usize::MAX)
        })?;
        if c.compose.values().any(|&v| v == usize::MAX) {
            return Err(Error::InvalidCategory("relation is not transitive".into()));
        }
        c.validate()?;
        Ok(c)
    }

    /// The ordinal `[n]` as a category.
    pub fn ordinal(n: usize) -> FinCat {
        FinCat::poset((0..=n).map(|i| i.to_string()).collect(), |a, b| a <= b).expect("linear order")
    }

    /// Codiscrete (contractible groupoid) on `n` objects.
    pub fn codiscrete(names: Vec<String>) -> FinCat {
        FinCat::poset(names, |_, _| true).expect("codiscrete")
    }

    pub fn discrete(names: Vec<String>) -> FinCat {
        FinCat::poset(names, |a, b| a == b).expect("discrete")
    }

    /// The cyclic group of order `k` as a one-object category.
    pub fn cyclic_group(k: usize) -> FinCat {
        assert!(k >= 1);
        let morphisms = (0..k).map(|i| Morphism { name: format!("g{i}"), src: 0, tgt: 0 }).collect();
        FinCat::from_fn(vec!["*".into()], morphisms, vec![0], |g, f| (g + f) % k).expect("group")
    }

    /// Two objects with two parallel non-identity arrows `a => b`.
    pub fn parallel_pair() -> FinCat {
        let morphisms = vec![
            Morphism { name: "id_a".into(), src: 0, tgt: 0 },
            Morphism { name: "id_b".into(), src: 1, tgt: 1 },
            Morphism { name: "f".into(), src: 0, tgt: 1 },
            Morphism { name: "g".into(), src: 0, tgt: 1 },
        ];
        FinCat::from_fn(vec!["a".into(), "b".into()], morphisms, vec![0, 1], |g, f| match (g, f) {
            (0, f) | (1, f) => f,
            (g, _) => g,
        })
        .expect("parallel pair")
    }
}

/// A functor between finite categories.
#[derive(Clone, Debug)]
pub struct Functor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    on_objects: Vec<usize>,
    on_morphisms: Vec<usize>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.on_objects == other.on_objects
            && self.on_morphisms == other.on_morphisms
            && *self.source == *other.source
            && *self.target == *other.target
    }
}

impl Functor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        on_objects: Vec<usize>,
        on_morphisms: Vec<usize>,
    ) -> Result<Self> {
        let f = Functor { source, target, on_objects, on_morphisms };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        on_objects: Vec<usize>,
        on_morphisms: Vec<usize>,
    ) -> Self {
        Functor { source, target, on_objects, on_morphisms }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFunctor(m));
        let (c, d) = (&*self.source, &*self.target);
        if self.on_objects.len() != c.num_objects() || self.on_morphisms.len() != c.num_morphisms() {
            return bad("object or morphism map is not total".into());
        }
        if self.on_objects.iter().any(|&o| o >= d.num_objects())
            || self.on_morphisms.iter().any(|&m| m >= d.num_morphisms())
        {
            return bad("image outside the target".into());
        }
        for (m, mor) in c.morphisms().iter().enumerate() {
            let fm = d.morphism(self.on_morphisms[m]);
            if fm.src != self.on_objects[mor.src] || fm.tgt != self.on_objects[mor.tgt] {
                return bad(format!("{} is sent to a morphism of the wrong type", mor.name));
            }
        }
        for o in 0..c.num_objects() {
            if self.on_morphisms[c.identity(o)] != d.identity(self.on_objects[o]) {
                return bad(format!("identity of {} is not preserved", c.object_name(o)));
            }
        }
        for (&(g, f), &gf) in c.composition_table() {
            if d.compose(self.on_morphisms[g], self.on_morphisms[f]) != Some(self.on_morphisms[gf]) {
                return bad(format!(
                    "composite {} ∘ {} is not preserved",
                    c.morphism(g).name,
                    c.morphism(f).name
                ));
            }
        }
        Ok(())
    }

    pub fn identity(c: Arc<FinCat>) -> Functor {
        let on_objects = (0..c.num_objects()).collect();
        let on_morphisms = (0..c.num_morphisms()).collect();
        Functor { source: c.clone(), target: c, on_objects, on_morphisms }
    }

    /// `g ∘ f`.
    pub fn compose(g: &Functor, f: &Functor) -> Result<Functor> {
        if *f.target != *g.source {
            return Err(Error::DimensionMismatch("functors are not composable".into()));
        }
        Ok(Functor {
            source: f.source.clone(),
            target: g.target.clone(),
            on_objects: f.on_objects.iter().map(|&o| g.on_objects[o]).collect(),
            on_morphisms: f.on_morphisms.iter().map(|&m| g.on_morphisms[m]).collect(),
        })
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj(&self, o: usize) -> usize {
        self.on_objects[o]
    }

    pub fn mor(&self, m: usize) -> usize {
        self.on_morphisms[m]
    }

    pub fn on_objects(&self) -> &[usize] {
        &self.on_objects
    }

    pub fn on_morphisms(&self) -> &[usize] {
        &self.on_morphisms
    }

    /// Whether the functor is an isomorphism of categories.
    pub fn is_isomorphism(&self) -> bool {
        is_bijection(&self.on_objects, self.target.num_objects())
            && is_bijection(&self.on_morphisms, self.target.num_morphisms())
    }

    /// Unique lifting of arrows into objects of the source.
    pub fn is_discrete_fibration(&self) -> bool {
        self.discrete_fibration_failure().is_none()
    }

    pub fn discrete_fibration_failure(&self) -> Option<String> {
        let (e, b) = (&*self.source, &*self.target);
        for x in 0..e.num_objects() {
            let px = self.on_objects[x];
            let mut count = vec![0usize; b.num_morphisms()];
            for &u in e.incoming(x) {
                count[self.on_morphisms[u]] += 1;
            }
            for &alpha in b.incoming(px) {
                if count[alpha] != 1 {
                    return Some(format!(
                        "{} lifts of {} into {}",
                        count[alpha],
                        b.morphism(alpha).name,
                        e.object_name(x)
                    ));
                }
            }
        }
        None
    }

    /// Unique lifting of arrows out of objects of the source.
    pub fn is_discrete_opfibration(&self) -> bool {
        let (e, b) = (&*self.source, &*self.target);
        (0..e.num_objects()).all(|x| {
            let mut count = vec![0usize; b.num_morphisms()];
            for &u in e.out_of(x) {
                count[self.on_morphisms[u]] += 1;
            }
            b.out_of(self.on_objects[x]).iter().all(|&a| count[a] == 1)
        })
    }
}

pub(crate) fn is_bijection(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    map.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

/// A set-valued contravariant functor on a finite category. Fibers are
/// `0..size`; `action[m]` maps `P(tgt m) -> P(src m)`.
#[derive(Clone, Debug)]
pub struct Presheaf {
    base: Arc<FinCat>,
    sizes: Vec<usize>,
    action: Vec<Vec<usize>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        self.sizes == other.sizes && self.action == other.action && *self.base == *other.base
    }
}

impl Presheaf {
    pub fn new(base: Arc<FinCat>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        let p = Presheaf { base, sizes, action };
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn new_unchecked(base: Arc<FinCat>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Self {
        Presheaf { base, sizes, action }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPresheaf(m));
        let c = &*self.base;
        if self.sizes.len() != c.num_objects() || self.action.len() != c.num_morphisms() {
            return bad("fiber sizes or actions are not total".into());
        }
        for (m, mor) in c.morphisms().iter().enumerate() {
            let a = &self.action[m];
            if a.len() != self.sizes[mor.tgt] || a.iter().any(|&v| v >= self.sizes[mor.src]) {
                return bad(format!("action of {} has the wrong type", mor.name));
            }
        }
        for o in 0..c.num_objects() {
            if self.action[c.identity(o)].iter().enumerate().any(|(i, &v)| i != v) {
                return bad(format!("identity at {} acts nontrivially", c.object_name(o)));
            }
        }
        for (&(g, f), &gf) in c.composition_table() {
            let ok = (0..self.sizes[c.tgt(g)]).all(|x| self.action[f][self.action[g][x]] == self.action[gf][x]);
            if !ok {
                return bad(format!(
                    "action does not respect {} ∘ {}",
                    c.morphism(g).name,
                    c.morphism(f).name
                ));
            }
        }
        Ok(())
    }

    pub fn terminal(base: Arc<FinCat>) -> Presheaf {
        let sizes = vec![1; base.num_objects()];
        let action = vec![vec![0]; base.num_morphisms()];
        Presheaf { base, sizes, action }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn size(&self, o: usize) -> usize {
        self.sizes[o]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn action(&self, m: usize) -> &[usize] {
        &self.action[m]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn apply(&self, m: usize, x: usize) -> usize {
        self.action[m][x]
    }

    /// Restriction along a functor `F : C -> base`.
    pub fn pullback(&self, f: &Functor) -> Presheaf {
        let c = f.source().clone();
        let sizes = f.on_objects().iter().map(|&o| self.sizes[o]).collect();
        let action = f.on_morphisms().iter().map(|&m| self.action[m].clone()).collect();
        Presheaf { base: c, sizes, action }
    }

    /// Whether the two presheaves on the same base are isomorphic.
    pub fn is_isomorphic(&self, other: &Presheaf) -> bool {
        *self.base == *other.base && canonical_form(self) == canonical_form(other)
    }
}

/// A discrete fibration: unique lifts of arrows into objects of the total
/// category.
#[derive(Clone, Debug)]
pub struct DiscFib {
    projection: Functor,
}

impl DiscFib {
    pub fn new(projection: Functor) -> Result<Self> {
        if let Some(why) = projection.discrete_fibration_failure() {
            return Err(Error::NotDiscFib(why));
        }
        Ok(DiscFib { projection })
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.projection.source()
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.projection.target()
    }

    pub fn projection(&self) -> &Functor {
        &self.projection
    }

    /// The unique morphism into `x` lying over `alpha`.
    pub fn lift(&self, alpha: usize, x: usize) -> usize {
        let e = self.total();
        *e.incoming(x)
            .iter()
            .find(|&&u| self.projection.mor(u) == alpha)
            .expect("discrete fibration has all lifts")
    }
}

/// The category of elements of a presheaf together with its projection.
pub fn grothendieck(p: &Presheaf) -> DiscFib {
    let c = &**p.base();
    let mut offset = Vec::with_capacity(c.num_objects());
    let mut objects = Vec::new();
    let mut obj_base = Vec::new();
    for o in 0..c.num_objects() {
        offset.push(objects.len());
        for x in 0..p.size(o) {
            objects.push(format!("({},{x})", c.object_name(o)));
            obj_base.push(o);
        }
    }
    // a morphism over alpha : a -> b is indexed by its target element in P(b)
    let mut morphisms = Vec::new();
    let mut mor_base = Vec::new();
    let mut mor_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (alpha, m) in c.morphisms().iter().enumerate() {
        for y in 0..p.size(m.tgt) {
            let x = p.apply(alpha, y);
            mor_index.insert((alpha, y), morphisms.len());
            morphisms.push(Morphism {
                name: format!("({},{y})", m.name),
                src: offset[m.src] + x,
                tgt: offset[m.tgt] + y,
            });
            mor_base.push(alpha);
        }
    }
    let identities = (0..objects.len())
        .map(|e| {
            let o = obj_base[e];
            mor_index[&(c.identity(o), e - offset[o])]
        })
        .collect();
    let total = FinCat::from_fn(objects, morphisms.clone(), identities, |g, f| {
        let gf = c.compose(mor_base[g], mor_base[f]).expect("composable");
        let y = morphisms[g].tgt - offset[c.tgt(mor_base[g])];
        mor_index[&(gf, y)]
    })
    .expect("category of elements");
    let projection = Functor::new_unchecked(Arc::new(total), p.base().clone(), obj_base, mor_base);
    DiscFib { projection }
}

/// Reads the presheaf of fibers off a discrete fibration.
pub fn fiber_presheaf(q: &DiscFib) -> Presheaf {
    let b = &**q.base();
    let e = &**q.total();
    let proj = q.projection();
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); b.num_objects()];
    let mut pos = vec![0usize; e.num_objects()];
    for x in 0..e.num_objects() {
        let o = proj.obj(x);
        pos[x] = fibers[o].len();
        fibers[o].push(x);
    }
    let sizes = fibers.iter().map(Vec::len).collect();
    let action = (0..b.num_morphisms())
        .map(|alpha| {
            fibers[b.tgt(alpha)].iter().map(|&y| pos[e.src(q.lift(alpha, y))]).collect()
        })
        .collect();
    Presheaf::new_unchecked(q.base().clone(), sizes, action)
}

/// The comma category `d ↓ F`: objects `(c, alpha : d -> F c)`.
pub fn comma_into(f: &Functor, d: usize) -> FinCat {
    comma_into_with_objects(f, d).0
}

/// Also returns each comma object as `(c, alpha)`.
pub fn comma_into_with_objects(f: &Functor, d: usize) -> (FinCat, Vec<(usize, usize)>) {
    let (c, dd) = (&**f.source(), &**f.target());
    let mut objs = Vec::new();
    let mut index = HashMap::new();
    for o in 0..c.num_objects() {
        for alpha in dd.hom(d, f.obj(o)) {
            index.insert((o, alpha), objs.len());
            objs.push((o, alpha));
        }
    }
    let mut morphisms = Vec::new();
    let mut mor_data = Vec::new();
    let mut mor_index = HashMap::new();
    for (i, &(o, alpha)) in objs.iter().enumerate() {
        for &gamma in c.out_of(o) {
            let alpha2 = dd.compose(f.mor(gamma), alpha).expect("composable");
            let j = index[&(c.tgt(gamma), alpha2)];
            mor_index.insert((gamma, i), morphisms.len());
            morphisms.push(Morphism { name: format!("{}@{i}", c.morphism(gamma).name), src: i, tgt: j });
            mor_data.push((gamma, i));
        }
    }
    let identities = objs.iter().enumerate().map(|(i, &(o, _))| mor_index[&(c.identity(o), i)]).collect();
    let names = objs
        .iter()
        .map(|&(o, a)| format!("({},{})", c.object_name(o), dd.morphism(a).name))
        .collect();
    let cat = FinCat::from_fn(names, morphisms, identities, |g, h| {
        let (gg, _) = mor_data[g];
        let (hh, i) = mor_data[h];
        mor_index[&(c.compose(gg, hh).expect("composable"), i)]
    })
    .expect("comma category");
    (cat, objs)
}

/// Connected components: returns the component of each object, numbered in
/// order of first appearance.
pub fn pi0(c: &FinCat) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..c.num_objects()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for m in c.morphisms() {
        let (a, b) = (find(&mut parent, m.src), find(&mut parent, m.tgt));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = HashMap::new();
    (0..c.num_objects())
        .map(|o| {
            let r = find(&mut parent, o);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect()
}

pub fn num_components(c: &FinCat) -> usize {
    pi0(c).into_iter().max().map_or(0, |m| m + 1)
}

/// Objects are the morphisms `f : x -> y`; a morphism `f -> f'` is a pair
/// `(a : x' -> x, b : y -> y')` with `f' = b ∘ f ∘ a`.
pub fn twisted_arrow(c: &FinCat) -> FinCat {
    let n = c.num_morphisms();
    let mut morphisms = Vec::new();
    let mut data = Vec::new();
    let mut index = HashMap::new();
    for f in 0..n {
        let (x, y) = (c.src(f), c.tgt(f));
        for &a in c.incoming(x) {
            let fa = c.compose(f, a).unwrap();
            for &b in c.out_of(y) {
                let g = c.compose(b, fa).unwrap();
                index.insert((f, a, b), morphisms.len());
                morphisms.push(Morphism {
                    name: format!("({},{})", c.morphism(a).name, c.morphism(b).name),
                    src: f,
                    tgt: g,
                });
                data.push((f, a, b));
            }
        }
    }
    let identities = (0..n).map(|f| index[&(f, c.identity(c.src(f)), c.identity(c.tgt(f)))]).collect();
    let names = c.morphisms().iter().map(|m| m.name.clone()).collect();
    FinCat::from_fn(names, morphisms, identities, |g, h| {
        let (f, a1, b1) = data[h];
        let (_, a2, b2) = data[g];
        index[&(f, c.compose(a1, a2).unwrap(), c.compose(b2, b1).unwrap())]
    })
    .expect("twisted arrow category")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ordinal_and_poset_laws() {
        let c = FinCat::ordinal(2);
        assert_eq!(c.num_morphisms(), 6);
        c.validate().unwrap();
        let e1 = FinCat::codiscrete(names(&["a", "b"]));
        assert_eq!(e1.num_morphisms(), 4);
        assert!((0..4).all(|m| e1.is_iso(m)));
        FinCat::cyclic_group(2).validate().unwrap();
        FinCat::parallel_pair().validate().unwrap();
    }

    #[test]
    fn grothendieck_example() {
        let c = Arc::new(FinCat::ordinal(1));
        let le = c.find_morphism("0<=1").unwrap();
        let mut action = vec![Vec::new(); 3];
        action[c.identity(0)] = vec![0, 1];
        action[c.identity(1)] = vec![0];
        action[le] = vec![0];
        let p = Presheaf::new(c, vec![2, 1], action).unwrap();
        let q = grothendieck(&p);
        let e = q.total();
        assert_eq!(e.num_objects(), 3);
        let nonid: Vec<_> = (0..e.num_morphisms()).filter(|&m| !e.is_identity(m)).collect();
        assert_eq!(nonid.len(), 1);
        let m = e.morphism(nonid[0]);
        assert_eq!((e.object_name(m.src), e.object_name(m.tgt)), ("(0,0)", "(1,0)"));
        assert!(fiber_presheaf(&q).is_isomorphic(&p));
    }

    #[test]
    fn comma_examples() {
        let d = Arc::new(FinCat::ordinal(1));
        let pt = Arc::new(FinCat::ordinal(0));
        let at1 = Functor::new(pt.clone(), d.clone(), vec![1], vec![d.identity(1)]).unwrap();
        assert_eq!(comma_into(&at1, 0).num_objects(), 1);
        assert_eq!(comma_into(&at1, 1).num_objects(), 1);
        let at0 = Functor::new(pt, d.clone(), vec![0], vec![d.identity(0)]).unwrap();
        assert_eq!(comma_into(&at0, 1).num_objects(), 0);
        let id = Functor::identity(d);
        assert_eq!(num_components(&comma_into(&id, 0)), 1);
    }

    #[test]
    fn pi0_examples() {
        assert_eq!(num_components(&FinCat::ordinal(0)), 1);
        assert_eq!(num_components(&FinCat::discrete(names(&["a", "b"]))), 2);
        let cospan = FinCat::poset(names(&["00", "01", "11"]), |a, b| a == b || b == 1).unwrap();
        assert_eq!(num_components(&cospan), 1);
    }

    #[test]
    fn twisted_arrow_sizes() {
        assert_eq!(twisted_arrow(&FinCat::ordinal(0)).num_objects(), 1);
        assert_eq!(twisted_arrow(&FinCat::ordinal(2)).num_objects(), 6);
        let tw = twisted_arrow(&FinCat::ordinal(1));
        tw.validate().unwrap();
        // both identities map into the arrow 0 -> 1
        let arrow = FinCat::ordinal(1).find_morphism("0<=1").unwrap();
        let nonid: Vec<_> = (0..tw.num_morphisms()).filter(|&m| !tw.is_identity(m)).collect();
        assert_eq!(nonid.len(), 2);
        assert!(nonid.iter().all(|&m| tw.tgt(m) == arrow));
    }
}
