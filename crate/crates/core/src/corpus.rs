//! Built-in examples addressed by name: small categories, truncated
//! simplicial sets and maps between them. Each entry lists the properties it
//! is meant to illustrate; those claims are checked by the test suite, never
//! trusted.

use std::sync::Arc;

use serde::Serialize;

use crate::cat::{fundamental_category, grothendieck, FinCat, Functor, Presheaf, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::factorization::{rfib_from_presheaf, untwist};
use crate::ordinal::OrdinalMap;
use crate::sset::{boundary, horn, nerve, nerve_map, representable, sd, SMap, TruncSSet};

/// A property an entry is expected to have (or to lack).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Culf,
    RightFibration,
    LeftFibration,
    Segal,
    Decomposition,
    RezkComplete,
}

#[derive(Clone, Debug)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
    pub claims: Vec<(Property, bool)>,
}

impl<T> Named<T> {
    fn new(name: &str, value: T, claims: &[(Property, bool)]) -> Self {
        Named { name: name.to_string(), value, claims: claims.to_vec() }
    }

    pub fn claims(&self, p: Property) -> Option<bool> {
        self.claims.iter().find(|(q, _)| *q == p).map(|&(_, b)| b)
    }
}

/// Any instance the corpus can produce.
#[derive(Clone, Debug)]
pub enum Item {
    Category(Arc<FinCat>),
    Functor(Functor),
    SSet(Arc<TruncSSet>),
    Map(SMap),
    Presheaf(Presheaf),
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `00 <= 01, 10 <= 11`, ordered by inclusion of bits.
pub fn lattice_2x2() -> FinCat {
    FinCat::poset(names(&["00", "01", "10", "11"]), |a, b| a & !b == 0).expect("lattice")
}

/// `a -> c <- b`.
pub fn cospan() -> FinCat {
    FinCat::poset(names(&["a", "b", "c"]), |x, y| x == y || y == 2).expect("cospan")
}

/// `a <- c -> b`.
pub fn span() -> FinCat {
    FinCat::poset(names(&["a", "b", "c"]), |x, y| x == y || x == 2).expect("span")
}

/// The free-living isomorphism `E(1)`.
pub fn iso() -> FinCat {
    FinCat::codiscrete(names(&["a", "b"]))
}

pub fn categories() -> Vec<(&'static str, FinCat)> {
    vec![
        ("terminal", FinCat::ordinal(0)),
        ("discrete-2", FinCat::discrete(names(&["a", "b"]))),
        ("poset-1", FinCat::ordinal(1)),
        ("poset-2", FinCat::ordinal(2)),
        ("lattice-2x2", lattice_2x2()),
        ("iso", iso()),
        ("parallel-pair", FinCat::parallel_pair()),
        ("cospan", cospan()),
        ("span", span()),
        ("z2", FinCat::cyclic_group(2)),
    ]
}

pub fn category(name: &str) -> Result<Arc<FinCat>> {
    categories()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| Arc::new(c))
        .ok_or_else(|| Error::InvalidInput(format!("no corpus category {name}")))
}

fn functor(src: &str, tgt: &str, objects: &[usize], morphisms: &[usize]) -> Functor {
    Functor::new(category(src).unwrap(), category(tgt).unwrap(), objects.to_vec(), morphisms.to_vec())
        .expect("corpus functor")
}

/// A morphism of a poset by its endpoints.
fn arrow(c: &FinCat, a: usize, b: usize) -> usize {
    c.hom(a, b)[0]
}

/// A monotone map between ordinals as a functor.
fn ordinal_functor(f: &OrdinalMap) -> Functor {
    let (s, t) = (FinCat::ordinal(f.dom()), FinCat::ordinal(f.cod()));
    let on_morphisms = s.morphisms().iter().map(|m| arrow(&t, f.apply(m.src), f.apply(m.tgt))).collect();
    Functor::new(Arc::new(s), Arc::new(t), f.images().to_vec(), on_morphisms).expect("monotone map")
}

/// A presheaf on a category whose non-identity composites are never
/// identities, with the given fiber sizes and every non-identity arrow acting
/// by the constant map at the first element.
pub fn constant_presheaf(c: Arc<FinCat>, sizes: Vec<usize>) -> Result<Presheaf> {
    let action = (0..c.num_morphisms())
        .map(|m| {
            let t = sizes[c.tgt(m)];
            if c.is_identity(m) {
                (0..t).collect()
            } else {
                vec![0; t]
            }
        })
        .collect();
    Presheaf::new(c, sizes, action)
}

/// Functors between corpus categories used as examples.
pub fn functors() -> Vec<Named<Functor>> {
    use Property::*;
    let p1 = FinCat::ordinal(1);
    let p2 = FinCat::ordinal(2);
    let lat = lattice_2x2();
    vec![
        Named::new(
            "parallel-pair-over-arrow",
            // id_a, id_b, f, g
            functor("parallel-pair", "poset-1", &[0, 1], &[p1.identity(0), p1.identity(1), arrow(&p1, 0, 1), arrow(&p1, 0, 1)]),
            &[(Culf, true), (RightFibration, false), (LeftFibration, false)],
        ),
        Named::new("identity-poset-2", Functor::identity(Arc::new(p2.clone())), &[(Culf, true), (RightFibration, true)]),
        Named::new("identity-lattice", Functor::identity(Arc::new(lat.clone())), &[(Culf, true), (RightFibration, true)]),
        Named::new(
            "vertex-0-of-arrow",
            functor("terminal", "poset-1", &[0], &[p1.identity(0)]),
            &[(Culf, true), (RightFibration, true), (LeftFibration, false)],
        ),
        Named::new(
            "vertex-1-of-arrow",
            functor("terminal", "poset-1", &[1], &[p1.identity(1)]),
            &[(Culf, true), (RightFibration, false), (LeftFibration, true)],
        ),
        Named::new(
            "codiagonal",
            functor("discrete-2", "terminal", &[0, 0], &[0, 0]),
            &[(Culf, true), (RightFibration, true), (LeftFibration, true)],
        ),
        Named::new(
            "sieve-in-poset-2",
            ordinal_functor(&OrdinalMap::d_top(1)),
            &[(Culf, true), (RightFibration, true), (LeftFibration, false)],
        ),
        Named::new(
            "bottom-of-lattice",
            Functor::new(Arc::new(FinCat::ordinal(0)), Arc::new(lat.clone()), vec![0], vec![lat.identity(0)]).unwrap(),
            &[(Culf, true), (RightFibration, true)],
        ),
        Named::new(
            "codegeneracy-2-1",
            ordinal_functor(&OrdinalMap::codegeneracy(1, 0).unwrap()),
            &[(Culf, false), (RightFibration, false)],
        ),
        Named::new(
            "coface-1-2",
            ordinal_functor(&OrdinalMap::coface(2, 1).unwrap()),
            &[(Culf, false), (RightFibration, false)],
        ),
        Named::new("iso-to-point", functor("iso", "terminal", &[0, 0], &[0, 0, 0, 0]), &[(Culf, false), (RightFibration, false)]),
        Named::new("z2-to-point", functor("z2", "terminal", &[0], &[0, 0]), &[(Culf, false), (RightFibration, false)]),
    ]
}

/// Presheaves whose categories of elements give right fibrations in the
/// corpus.
pub fn presheaves() -> Vec<(&'static str, Presheaf)> {
    let p1 = category("poset-1").unwrap();
    let cs = category("cospan").unwrap();
    let lat = Arc::new(lattice_2x2());
    vec![
        ("two-over-target", constant_presheaf(p1, vec![1, 2]).unwrap()),
        ("cospan-fibers", constant_presheaf(cs, vec![1, 2, 2]).unwrap()),
        ("lattice-fibers", constant_presheaf(lat, vec![2, 1, 1, 1]).unwrap()),
    ]
}

/// `N(∫P) -> N(C)` for the corpus presheaves.
fn grothendieck_maps(dim: usize) -> Vec<Named<SMap>> {
    use Property::*;
    presheaves()
        .into_iter()
        .map(|(name, p)| {
            let fib = grothendieck(&p);
            Named::new(&format!("grothendieck-{name}"), nerve_map(fib.projection(), dim), &[(Culf, true), (RightFibration, true)])
        })
        .collect()
}

/// One vertex and one non-degenerate edge: `Δ^1` with its endpoints
/// identified.
pub fn loop_sset(dim: usize) -> Result<TruncSSet> {
    // simplices are 0^a 1^b, with the two constant ones identified
    let normalize = |v: Vec<usize>| -> Vec<usize> {
        if v.iter().all(|&x| x == v[0]) {
            vec![0; v.len()]
        } else {
            v
        }
    };
    let levels = (0..=dim)
        .map(|n| {
            let mut lv = vec![vec![0; n + 1]];
            lv.extend((1..=n).map(|a| (0..=n).map(|i| usize::from(i >= a)).collect()));
            lv
        })
        .collect();
    TruncSSet::build_with_action(
        dim,
        levels,
        |a, v: &Vec<usize>| normalize(a.images().iter().map(|&i| v[i]).collect()),
        |v| if v.iter().all(|&x| x == 0) { "*".into() } else { v.iter().map(|x| x.to_string()).collect() },
    )
}

/// The culf map obtained by untwisting the right fibration over `Sd N(C)`
/// classified by a constant presheaf on the fundamental category with the
/// given fiber size over each edge of `N(C)`.
pub fn untwisted(c: &FinCat, dim: usize, size: impl Fn(&TruncSSet, usize) -> usize) -> Result<SMap> {
    let x = Arc::new(nerve(c, dim));
    let sx = Arc::new(sd(&x)?);
    let fc = fundamental_category(&sx, DEFAULT_BUDGET)?;
    let sizes = (0..sx.level_len(0)).map(|e| size(&x, e)).collect();
    let p = constant_presheaf(Arc::new(fc.cat.clone()), sizes)?;
    let (_, proj) = rfib_from_presheaf(&sx, &fc, &p)?;
    Ok(untwist(&proj, &x)?.1)
}

fn edge_is(x: &TruncSSet, e: usize, a: usize, b: usize) -> bool {
    x.face(1, 1, e) == a && x.face(1, 0, e) == b
}

/// Two parallel copies of the edge `0 -> 1` and one copy of everything else:
/// culf over `N[2]` but not Segal.
pub fn untwist_nonsegal(dim: usize) -> Result<SMap> {
    untwisted(&FinCat::ordinal(2), dim, |x, e| if edge_is(x, e, 0, 1) { 2 } else { 1 })
}

/// Two elements over the edge `0 -> 1` and one over each identity.
pub fn untwist_arrow(dim: usize) -> Result<SMap> {
    untwisted(&FinCat::ordinal(1), dim, |x, e| if edge_is(x, e, 0, 1) { 2 } else { 1 })
}

/// Truncated simplicial sets at bound `dim`.
pub fn objects(dim: usize) -> Result<Vec<Named<Arc<TruncSSet>>>> {
    use Property::*;
    let mut out = Vec::new();
    for n in 0..=3 {
        out.push(Named::new(&format!("simplex-{n}"), Arc::new(representable(n, dim)), &[(Segal, true), (Decomposition, true), (RezkComplete, true)]));
    }
    for (name, c) in categories() {
        let groupoid = matches!(name, "iso" | "z2");
        out.push(Named::new(
            &format!("nerve-{name}"),
            Arc::new(nerve(&c, dim)),
            &[(Segal, true), (Decomposition, true), (RezkComplete, !groupoid)],
        ));
    }
    out.push(Named::new("horn-2-1", horn(2, 1, dim)?.0, &[(Segal, false)]));
    out.push(Named::new("boundary-2", boundary(2, dim)?.0, &[(Segal, false)]));
    out.push(Named::new("boundary-3", boundary(3, dim)?.0, &[(Decomposition, false)]));
    out.push(Named::new("loop", Arc::new(loop_sset(dim)?), &[]));
    if dim >= 5 {
        out.push(Named::new(
            "untwist-nonsegal",
            untwist_nonsegal(dim)?.source().clone(),
            &[(Segal, false), (Decomposition, true), (RezkComplete, true)],
        ));
        out.push(Named::new("untwist-arrow", untwist_arrow(dim)?.source().clone(), &[(Decomposition, true)]));
    }
    Ok(out)
}

/// Maps at bound `dim`.
pub fn maps(dim: usize) -> Result<Vec<Named<SMap>>> {
    use Property::*;
    let mut out: Vec<Named<SMap>> =
        functors().into_iter().map(|f| Named { name: f.name, value: nerve_map(&f.value, dim), claims: f.claims }).collect();
    out.extend(grothendieck_maps(dim));
    out.push(Named::new("horn-2-1-inclusion", horn(2, 1, dim)?.1, &[(Culf, true), (RightFibration, false)]));
    out.push(Named::new("boundary-2-inclusion", boundary(2, dim)?.1, &[(Culf, false), (RightFibration, false)]));
    if dim >= 5 {
        out.push(Named::new("untwist-nonsegal-over-poset-2", untwist_nonsegal(dim)?, &[(Culf, true)]));
        out.push(Named::new("untwist-arrow-over-poset-1", untwist_arrow(dim)?, &[(Culf, true)]));
    }
    Ok(out)
}

/// Every name with its kind, in listing order.
pub fn list() -> Vec<(String, &'static str)> {
    let mut out: Vec<(String, &'static str)> = categories().into_iter().map(|(n, _)| (n.to_string(), "fincat")).collect();
    out.extend(functors().into_iter().map(|f| (format!("{}-functor", f.name), "functor")));
    out.extend(presheaves().into_iter().map(|(n, _)| (n.to_string(), "presheaf")));
    out.extend(objects(7).expect("corpus objects").into_iter().map(|o| (o.name, "trunc_sset")));
    out.extend(maps(7).expect("corpus maps").into_iter().map(|m| (m.name, "smap")));
    out
}

/// Looks up `name` (with or without the `corpus:` prefix) at bound `dim`.
pub fn lookup(name: &str, dim: usize) -> Result<Item> {
    let name = name.strip_prefix("corpus:").unwrap_or(name);
    if let Some((_, c)) = categories().into_iter().find(|(n, _)| *n == name) {
        return Ok(Item::Category(Arc::new(c)));
    }
    if let Some(f) = functors().into_iter().find(|f| format!("{}-functor", f.name) == name) {
        return Ok(Item::Functor(f.value));
    }
    if let Some((_, p)) = presheaves().into_iter().find(|(n, _)| *n == name) {
        return Ok(Item::Presheaf(p));
    }
    if let Some(o) = objects(dim)?.into_iter().find(|o| o.name == name) {
        return Ok(Item::SSet(o.value));
    }
    if let Some(m) = maps(dim)?.into_iter().find(|m| m.name == name) {
        return Ok(Item::Map(m.value));
    }
    Err(Error::InvalidInput(format!("no corpus entry {name}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn everything_validates() {
        for o in objects(7).unwrap() {
            o.value.validate().unwrap_or_else(|e| panic!("{}: {e}", o.name));
        }
        for m in maps(7).unwrap() {
            assert!(m.value.first_violation().is_none(), "{}", m.name);
        }
        for f in functors() {
            f.value.validate().unwrap();
        }
        for (_, p) in presheaves() {
            p.validate().unwrap();
        }
    }

    #[test]
    fn untwisted_sizes() {
        let q = untwist_arrow(7).unwrap();
        // one vertex over each object, two edges over 0 -> 1
        assert_eq!(q.source().level_len(0), 2);
        assert_eq!(q.source().level_len(1), 4);
    }

    #[test]
    fn lookup_by_uri() {
        assert!(matches!(lookup("corpus:parallel-pair-over-arrow", 7).unwrap(), Item::Map(_)));
        assert!(matches!(lookup("corpus:horn-2-1", 7).unwrap(), Item::SSet(_)));
        assert!(matches!(lookup("poset-2", 7).unwrap(), Item::Category(_)));
        assert!(lookup("corpus:nothing", 7).is_err());
    }
}
