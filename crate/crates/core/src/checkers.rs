//! Decision procedures with certificates. Every negative verdict carries a
//! witness; failures of pullback conditions carry the offending square,
//! which [`is_pullback_square`] re-verifies on its own.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cat::{comma_into, num_components, DiscFib, FinCat, Functor};
use crate::elements::{lambda, nel_map, xi, ElCat};
use crate::error::{Error, Result};
use crate::ordinal::{
    active_inert_pushouts, active_maps, all_maps, generating_pushouts, first_vertex_inclusion, last_vertex_inclusion, OrdinalMap, PushoutSquare,
};
use crate::sset::{sd, sd_of_map, SMap, TruncSSet};

/// A commuting square of finite sets `0..sizes[i]`:
///
/// ```text
///   a --top--> b
///   |          |
///  left      right
///   v          v
///   c --bottom-> d
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square {
    pub label: String,
    pub sizes: [usize; 4],
    pub top: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub bottom: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub square: Option<Square>,
    /// `(b, c)`: the element of the fiber product with the wrong number of
    /// preimages.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub element: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub preimages: Option<usize>,
}

impl Witness {
    pub fn note(description: impl Into<String>) -> Self {
        Witness { description: description.into(), square: None, element: None, preimages: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub verified_dim: usize,
    pub route: String,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass(route: impl Into<String>, verified_dim: usize) -> Self {
        Verdict { holds: true, verified_dim, route: route.into(), witness: None }
    }

    pub fn fail(route: impl Into<String>, verified_dim: usize, witness: Witness) -> Self {
        Verdict { holds: false, verified_dim, route: route.into(), witness: Some(witness) }
    }

    fn with_route(mut self, route: &str, verified_dim: usize) -> Self {
        self.route = route.into();
        self.verified_dim = verified_dim;
        self
    }
}

/// Whether `a` maps bijectively onto `b ×_d c`.
pub fn is_pullback_square(sq: &Square) -> Result<Verdict> {
    let [na, nb, nc, nd] = sq.sizes;
    let shape_ok = sq.top.len() == na
        && sq.left.len() == na
        && sq.right.len() == nb
        && sq.bottom.len() == nc
        && sq.top.iter().all(|&v| v < nb)
        && sq.left.iter().all(|&v| v < nc)
        && sq.right.iter().all(|&v| v < nd)
        && sq.bottom.iter().all(|&v| v < nd);
    if !shape_ok {
        return Err(Error::InvalidInput(format!("square {} is malformed", sq.label)));
    }
    if let Some(x) = (0..na).find(|&x| sq.right[sq.top[x]] != sq.bottom[sq.left[x]]) {
        return Err(Error::NonCommuting(format!("{}: element {x} of the corner", sq.label)));
    }
    if fiber_product_size(sq) == na {
        let mut keys: Vec<usize> = (0..na).map(|x| sq.top[x] * nc + sq.left[x]).collect();
        keys.sort_unstable();
        if keys.windows(2).all(|w| w[0] != w[1]) {
            return Ok(Verdict::pass("fiber product", 0));
        }
    }
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..na {
        *count.entry((sq.top[x], sq.left[x])).or_default() += 1;
    }
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); nd];
    for y in 0..nb {
        over[sq.right[y]].push(y);
    }
    for z in 0..nc {
        for &y in &over[sq.bottom[z]] {
            let k = count.get(&(y, z)).copied().unwrap_or(0);
            if k != 1 {
                return Ok(Verdict::fail(
                    "fiber product",
                    0,
                    Witness {
                        description: format!("{}: ({y}, {z}) has {k} preimages", sq.label),
                        square: Some(sq.clone()),
                        element: Some([y, z]),
                        preimages: Some(k),
                    },
                ));
            }
        }
    }
    Ok(Verdict::pass("fiber product", 0))
}

fn fiber_product_size(sq: &Square) -> usize {
    let nd = sq.sizes[3];
    let (mut over_b, mut over_c) = (vec![0usize; nd], vec![0usize; nd]);
    for &d in &sq.right {
        over_b[d] += 1;
    }
    for &d in &sq.bottom {
        over_c[d] += 1;
    }
    over_b.iter().zip(&over_c).map(|(a, b)| a * b).sum()
}

/// The square of `p : Y -> X` at the operator `α : [m] -> [n]`:
/// `Y_n -> Y_m` over `X_n -> X_m`.
pub fn operator_square(p: &SMap, alpha: &OrdinalMap) -> Result<Square> {
    let (m, n) = (alpha.dom(), alpha.cod());
    if m.max(n) > p.dim() {
        return Err(Error::OutOfTruncation(format!("operator {alpha} exceeds the bound {}", p.dim())));
    }
    let (y, x) = (p.source(), p.target());
    Ok(Square {
        label: format!("square at {alpha}"),
        sizes: [y.level_len(n), y.level_len(m), x.level_len(n), x.level_len(m)],
        top: (0..y.level_len(n)).map(|e| y.act_unchecked(alpha.images(), n, e)).collect(),
        left: p.component(n).to_vec(),
        right: p.component(m).to_vec(),
        bottom: (0..x.level_len(n)).map(|e| x.act_unchecked(alpha.images(), n, e)).collect(),
    })
}

pub fn is_cartesian_on(p: &SMap, alpha: &OrdinalMap) -> Result<Verdict> {
    is_pullback_square(&operator_square(p, alpha)?)
}

fn all_cartesian(p: &SMap, route: &str, ops: impl IntoIterator<Item = OrdinalMap>) -> Result<Verdict> {
    for a in ops {
        let v = is_cartesian_on(p, &a)?;
        if !v.holds {
            return Ok(v.with_route(route, p.dim()));
        }
    }
    Ok(Verdict::pass(route, p.dim()))
}

/// Cartesian on the last-vertex inclusions `[0] -> [n]`.
pub fn is_right_fibration(p: &SMap) -> Result<Verdict> {
    all_cartesian(p, "last-vertex squares", (1..=p.dim()).map(last_vertex_inclusion))
}

/// Cartesian on the first-vertex inclusions `[0] -> [n]`.
pub fn is_left_fibration(p: &SMap) -> Result<Verdict> {
    all_cartesian(p, "first-vertex squares", (1..=p.dim()).map(first_vertex_inclusion))
}

/// Cartesian on the active maps `[1] -> [n]` for `n >= 2`.
pub fn is_culf(p: &SMap) -> Result<Verdict> {
    all_cartesian(p, "long-edge squares", (2..=p.dim()).map(OrdinalMap::long_edge))
}

/// The square at the active map `[1] -> [0]`, implied by the others.
pub fn culf_degeneracy_square(p: &SMap) -> Result<Verdict> {
    if p.dim() == 0 {
        return Err(Error::OutOfTruncation("no edges".into()));
    }
    is_cartesian_on(p, &OrdinalMap::constant(1, 0, 0)?)
}

/// Cartesian on every operator between stored levels in the given class.
pub fn is_cartesian_on_class(p: &SMap, route: &str, class: impl Fn(&OrdinalMap) -> bool) -> Result<Verdict> {
    let d = p.dim();
    let ops = (0..=d).flat_map(|n| (0..=d).flat_map(move |m| all_maps(m, n))).filter(|a| class(a));
    all_cartesian(p, route, ops.collect::<Vec<_>>())
}

/// `X_n -> X_1` (last edge) over `X_{n-1} -> X_0` (last vertex). The Segal map
/// at level `n` is bijective for all `n <= D` iff these squares are
/// pullbacks for all `2 <= n <= D`.
pub fn segal_square(x: &TruncSSet, n: usize) -> Result<Square> {
    if n < 2 || n > x.dim() {
        return Err(Error::OutOfTruncation(format!("no Segal square at level {n}")));
    }
    let last_edge = OrdinalMap::edge(n, n - 1, n)?;
    let front = OrdinalMap::d_top(n - 1);
    Ok(Square {
        label: format!("Segal square at level {n}"),
        sizes: [x.level_len(n), x.level_len(1), x.level_len(n - 1), x.level_len(0)],
        top: (0..x.level_len(n)).map(|e| x.act_unchecked(last_edge.images(), n, e)).collect(),
        left: (0..x.level_len(n)).map(|e| x.act_unchecked(front.images(), n, e)).collect(),
        right: x.face_table(1, 1).to_vec(),
        bottom: (0..x.level_len(n - 1)).map(|e| x.last_vertex(n - 1, e)).collect(),
    })
}

pub fn is_segal(x: &TruncSSet) -> Result<Verdict> {
    if x.dim() < 2 {
        return Err(Error::OutOfTruncation("the Segal condition needs dimension at least 2".into()));
    }
    segal_upto(x)
}

fn segal_upto(x: &TruncSSet) -> Result<Verdict> {
    for n in 2..=x.dim() {
        let v = is_pullback_square(&segal_square(x, n)?)?;
        if !v.holds {
            return Ok(v.with_route("Segal squares", x.dim()));
        }
    }
    Ok(Verdict::pass("Segal squares", x.dim()))
}

/// The image under `X` of an active/inert pushout square in `Δ`.
pub fn pushout_image_square(x: &TruncSSet, sq: &PushoutSquare) -> Square {
    pushout_image_square_cached(x, sq, &mut HashMap::new())
}

fn operator_table<'a>(x: &TruncSSet, a: &OrdinalMap, cache: &'a mut HashMap<OrdinalMap, Vec<usize>>) -> &'a [usize] {
    cache
        .entry(a.clone())
        .or_insert_with(|| (0..x.level_len(a.cod())).map(|e| x.act_unchecked(a.images(), a.cod(), e)).collect())
}

fn pushout_image_square_cached(x: &TruncSSet, sq: &PushoutSquare, cache: &mut HashMap<OrdinalMap, Vec<usize>>) -> Square {
    let p = sq.apex();
    let (n, k, m) = (sq.inert.cod(), sq.active.cod(), sq.inert.dom());
    Square {
        label: format!("pushout of {} and {}", sq.inert, sq.active),
        sizes: [x.level_len(p), x.level_len(n), x.level_len(k), x.level_len(m)],
        top: operator_table(x, &sq.active_out, cache).to_vec(),
        left: operator_table(x, &sq.inert_out, cache).to_vec(),
        right: operator_table(x, &sq.inert, cache).to_vec(),
        bottom: operator_table(x, &sq.active, cache).to_vec(),
    }
}

fn pushouts_to_pullbacks(x: &TruncSSet, bound: usize, squares: Vec<PushoutSquare>, route: &str) -> Result<Verdict> {
    if bound > x.dim() {
        return Err(Error::OutOfTruncation(format!("pushouts up to {bound} exceed the bound {}", x.dim())));
    }
    let mut cache = HashMap::new();
    for sq in squares {
        let v = is_pullback_square(&pushout_image_square_cached(x, &sq, &mut cache))?;
        if !v.holds {
            return Ok(v.with_route(route, bound));
        }
    }
    Ok(Verdict::pass(route, bound))
}

/// Route A: every active/inert pushout with apex at most `bound` goes to a
/// pullback. Only the generating squares are evaluated; the rest are
/// pasted from them.
pub fn decomposition_route_a(x: &TruncSSet, bound: usize) -> Result<Verdict> {
    pushouts_to_pullbacks(x, bound, generating_pushouts(bound), "active-inert pushouts")
}

/// Route A evaluated on every square, without pasting.
pub fn decomposition_route_a_exhaustive(x: &TruncSSet, bound: usize) -> Result<Verdict> {
    pushouts_to_pullbacks(x, bound, active_inert_pushouts(bound), "active-inert pushouts, exhaustive")
}

/// Route B: `Sd X` is Segal.
pub fn decomposition_route_b(x: &TruncSSet) -> Result<Verdict> {
    let s = sd(x)?;
    Ok(segal_upto(&s)?.with_route("Segal subdivision", x.dim()))
}

/// Both routes; they must agree.
pub fn is_decomposition(x: &TruncSSet) -> Result<Verdict> {
    if x.dim() < 3 {
        return Err(Error::OutOfTruncation("decomposition checks need dimension at least 3".into()));
    }
    let a = decomposition_route_a(x, x.dim())?;
    let b = decomposition_route_b(x)?;
    if a.holds != b.holds {
        return Err(Error::RouteDisagreement(format!(
            "pushout route says {}, subdivision route says {}",
            a.holds, b.holds
        )));
    }
    let mut v = a;
    v.route = "active-inert pushouts + Segal subdivision".into();
    Ok(v)
}

/// Every comma category `d ↓ F` is nonempty and connected.
pub fn is_final_functor(f: &Functor) -> Verdict {
    let d = f.target();
    for o in 0..d.num_objects() {
        let c = comma_into(f, o);
        let k = num_components(&c);
        if k != 1 {
            return Verdict::fail(
                "comma categories",
                0,
                Witness::note(format!("{} ↓ F has {k} components", d.object_name(o))),
            );
        }
    }
    Verdict::pass("comma categories", 0)
}

/// The terminal objects of a finite category.
pub fn terminal_objects(c: &FinCat) -> Vec<usize> {
    (0..c.num_objects()).filter(|&t| (0..c.num_objects()).all(|o| c.hom(o, t).len() == 1)).collect()
}

pub fn initial_objects(c: &FinCat) -> Vec<usize> {
    (0..c.num_objects()).filter(|&t| (0..c.num_objects()).all(|o| c.hom(t, o).len() == 1)).collect()
}

/// Sufficient test for finality: both categories have a terminal object and
/// `F` preserves it.
pub fn preserves_terminal(f: &Functor) -> bool {
    let (ts, tt) = (terminal_objects(f.source()), terminal_objects(f.target()));
    !ts.is_empty() && !tt.is_empty() && tt.contains(&f.obj(ts[0]))
}

/// Sufficient test for ambifinality on simplicial maps between simplicial
/// sets with chosen endpoints: `f` sends the initial vertex to the initial
/// vertex and the terminal one to the terminal one.
pub fn preserves_endpoints(f: &Functor) -> bool {
    let (is, it) = (initial_objects(f.source()), initial_objects(f.target()));
    preserves_terminal(f) && !is.is_empty() && !it.is_empty() && it.contains(&f.obj(is[0]))
}

/// Edges `f` with 2-simplices witnessing a left and a right inverse.
pub fn equivalences(x: &TruncSSet) -> Result<Vec<usize>> {
    if x.dim() < 2 {
        return Err(Error::OutOfTruncation("equivalences need 2-simplices".into()));
    }
    let mut left = vec![false; x.level_len(1)];
    let mut right = vec![false; x.level_len(1)];
    for s in 0..x.level_len(2) {
        let (d0, d1, d2) = (x.face(2, 0, s), x.face(2, 1, s), x.face(2, 2, s));
        if d1 == x.degen(0, 0, x.face(1, 1, d2)) {
            left[d2] = true;
        }
        if d1 == x.degen(0, 0, x.face(1, 0, d0)) {
            right[d0] = true;
        }
    }
    Ok((0..x.level_len(1)).filter(|&f| left[f] && right[f]).collect())
}

pub fn is_rezk_complete(x: &TruncSSet) -> Result<Verdict> {
    let eq = equivalences(x)?;
    let route = "degenerate equivalences";
    match eq.iter().find(|&&f| !x.is_degenerate(1, f)) {
        Some(&f) => Ok(Verdict::fail(
            route,
            x.dim(),
            Witness::note(format!("edge {} is a non-degenerate equivalence", x.label(1, f))),
        )),
        None => Ok(Verdict::pass(route, x.dim())),
    }
}

/// `X_1 -> X_3` (`s_0 s_1`) over the inclusion `X_1^eq × X_1 × X_1^eq ->
/// X_1 × X_1 × X_1`, with the right leg reading off the three principal
/// edges. The bottom-right corner is restricted to the triples that occur.
pub fn rezk_square(x: &TruncSSet) -> Result<Square> {
    if x.dim() < 3 {
        return Err(Error::OutOfTruncation("the square needs 3-simplices".into()));
    }
    let eq = equivalences(x)?;
    let n1 = x.level_len(1);
    let mut corner: Vec<(usize, usize, usize)> = Vec::new();
    for &a in &eq {
        for b in 0..n1 {
            for &c in &eq {
                corner.push((a, b, c));
            }
        }
    }
    let principal = |t: usize| (x.edge(3, t, 0, 1), x.edge(3, t, 1, 2), x.edge(3, t, 2, 3));
    let mut triples: Vec<(usize, usize, usize)> = corner.clone();
    triples.extend((0..x.level_len(3)).map(principal));
    triples.sort_unstable();
    triples.dedup();
    let index: HashMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let corner_index: HashMap<(usize, usize, usize), usize> =
        corner.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let s0 = |v: usize| x.degen(0, 0, v);
    Ok(Square {
        label: "degenerate 3-simplices over equivalences".into(),
        sizes: [n1, x.level_len(3), corner.len(), triples.len()],
        top: (0..n1).map(|f| x.degen(2, 0, x.degen(1, 1, f))).collect(),
        left: (0..n1).map(|f| corner_index[&(s0(x.face(1, 1, f)), f, s0(x.face(1, 0, f)))]).collect(),
        right: (0..x.level_len(3)).map(|t| index[&principal(t)]).collect(),
        bottom: corner.iter().map(|t| index[t]).collect(),
    })
}

/// Essentially surjective and fully faithful.
pub fn is_dk_equivalence(f: &Functor) -> Verdict {
    let (c, d) = (f.source(), f.target());
    let route = "essential surjectivity + hom bijections";
    for o in 0..d.num_objects() {
        let hit = (0..c.num_objects()).any(|e| d.hom(f.obj(e), o).iter().any(|&m| d.is_iso(m)));
        if !hit {
            return Verdict::fail(
                route,
                0,
                Witness::note(format!("{} is not isomorphic to an image", d.object_name(o))),
            );
        }
    }
    for a in 0..c.num_objects() {
        for b in 0..c.num_objects() {
            let mut image: Vec<usize> = c.hom(a, b).iter().map(|&m| f.mor(m)).collect();
            let n = image.len();
            image.sort_unstable();
            image.dedup();
            if image.len() != n || n != d.hom(f.obj(a), f.obj(b)).len() {
                return Verdict::fail(
                    route,
                    0,
                    Witness::note(format!(
                        "hom({}, {}) does not map bijectively",
                        c.object_name(a),
                        c.object_name(b)
                    )),
                );
            }
        }
    }
    Verdict::pass(route, 0)
}

/// Unique lifting of isomorphisms out of (`outgoing = true`) or into images.
pub fn relative_complete_direction(f: &Functor, outgoing: bool) -> Verdict {
    let (c, d) = (f.source(), f.target());
    let route = if outgoing { "isomorphisms out of images" } else { "isomorphisms into images" };
    for e in 0..c.num_objects() {
        let fe = f.obj(e);
        let down = if outgoing { d.out_of(fe) } else { d.incoming(fe) };
        let up = if outgoing { c.out_of(e) } else { c.incoming(e) };
        for &phi in down.iter().filter(|&&m| d.is_iso(m)) {
            let lifts = up.iter().filter(|&&m| c.is_iso(m) && f.mor(m) == phi).count();
            if lifts != 1 {
                return Verdict::fail(
                    route,
                    0,
                    Witness::note(format!(
                        "{} has {lifts} lifts at {}",
                        d.morphism(phi).name,
                        c.object_name(e)
                    )),
                );
            }
        }
    }
    Verdict::pass(route, 0)
}

pub fn is_relative_complete(f: &Functor) -> Verdict {
    let out = relative_complete_direction(f, true);
    if !out.holds {
        return out;
    }
    relative_complete_direction(f, false)
}

fn restricted_opfibration(q: &DiscFib, el_x: &ElCat, route: &str, class: impl Fn(&OrdinalMap) -> bool) -> Result<Verdict> {
    let base = el_x.cat();
    if **q.base() != **base {
        return Err(Error::InvalidInput("the fibration does not live over el(X)".into()));
    }
    let keep_base = |m: usize| class(el_x.arrow(m).0);
    let (b, _) = base.wide_subcategory(keep_base)?;
    let mut base_index = vec![usize::MAX; base.num_morphisms()];
    let mut i = 0;
    for (m, slot) in base_index.iter_mut().enumerate() {
        if keep_base(m) {
            *slot = i;
            i += 1;
        }
    }
    let proj = q.projection();
    let (t, kept) = q.total().wide_subcategory(|u| keep_base(proj.mor(u)))?;
    let restricted = Functor::new_unchecked(
        std::sync::Arc::new(t),
        std::sync::Arc::new(b),
        proj.on_objects().to_vec(),
        kept.iter().map(|&u| base_index[proj.mor(u)]).collect(),
    );
    let bc = restricted.target();
    let tc = restricted.source();
    for y in 0..tc.num_objects() {
        let mut count = vec![0usize; bc.num_morphisms()];
        for &u in tc.out_of(y) {
            count[restricted.mor(u)] += 1;
        }
        if let Some(&a) = bc.out_of(restricted.obj(y)).iter().find(|&&a| count[a] != 1) {
            return Ok(Verdict::fail(
                route,
                el_x.dim(),
                Witness::note(format!(
                    "{} lifts of {} out of {}",
                    count[a],
                    bc.morphism(a).name,
                    tc.object_name(y)
                )),
            ));
        }
    }
    Ok(Verdict::pass(route, el_x.dim()))
}

/// Unique lifting of arrows out of objects, over the active arrows of
/// `el(X)`.
pub fn is_culfy(q: &DiscFib, el_x: &ElCat) -> Result<Verdict> {
    restricted_opfibration(q, el_x, "opfibration over active arrows", OrdinalMap::is_active)
}

/// Same over the last-point-preserving arrows.
pub fn is_righteous(q: &DiscFib, el_x: &ElCat) -> Result<Verdict> {
    restricted_opfibration(q, el_x, "opfibration over last-point-preserving arrows", OrdinalMap::is_last_point_preserving)
}

/// [`is_culfy`] for `el(p)`, evaluated on the operator squares of `p`
/// without materializing the categories of elements.
pub fn is_culfy_smap(p: &SMap) -> Result<Verdict> {
    is_cartesian_on_class(p, "all active squares", OrdinalMap::is_active)
}

pub fn is_righteous_smap(p: &SMap) -> Result<Verdict> {
    is_cartesian_on_class(p, "all last-point-preserving squares", OrdinalMap::is_last_point_preserving)
}

/// The square `Nel(Y) -> Y` over `Nel(X) -> X` (`ξ` horizontally) in degree
/// `d`, fully materialized.
pub fn xi_square(p: &SMap, d: usize) -> Result<Square> {
    let (y, x) = (p.source(), p.target());
    let top = xi(y, d)?;
    let bottom = xi(x, d)?;
    let left = nel_map(p, d)?;
    Ok(Square {
        label: format!("ξ-square in degree {d}"),
        sizes: [top.source().level_len(d), y.level_len(d), bottom.source().level_len(d), x.level_len(d)],
        top: top.component(d).to_vec(),
        left: left.component(d).to_vec(),
        right: p.component(d).to_vec(),
        bottom: bottom.component(d).to_vec(),
    })
}

/// The square `Nel(Y) -> Sd Y` over `Nel(X) -> Sd X` (`λ` horizontally) in
/// degree `d`, fully materialized.
pub fn lambda_square(p: &SMap, d: usize) -> Result<Square> {
    let top = lambda(p.source(), d)?;
    let bottom = lambda(p.target(), d)?;
    let left = nel_map(p, d)?;
    let right = sd_of_map(p)?;
    Ok(Square {
        label: format!("λ-square in degree {d}"),
        sizes: [
            top.source().level_len(d),
            top.target().level_len(d),
            bottom.source().level_len(d),
            bottom.target().level_len(d),
        ],
        top: top.component(d).to_vec(),
        left: left.component(d).to_vec(),
        right: right.component(d).to_vec(),
        bottom: bottom.component(d).to_vec(),
    })
}

/// The `ξ`-square is a pullback in degrees `0..=p.dim()`. A simplex of
/// `Nel` is a chain with an element on top and `ξ` acts on it by the
/// lower-segments map, so the square splits into the operator squares of
/// `p` at those maps; they are exactly the last-point-preserving maps.
pub fn xi_square_holds(p: &SMap) -> Result<Verdict> {
    let d = p.dim();
    let ops: Vec<OrdinalMap> = (0..=d)
        .flat_map(|k| (0..=d).flat_map(move |n| all_maps(k, n)))
        .filter(OrdinalMap::is_last_point_preserving)
        .collect();
    all_cartesian(p, "ξ-square, chain by chain", ops)
}

/// The `λ`-square is a pullback in degrees `k` with `2k + 1 <= p.dim()`;
/// chain by chain it splits into the operator squares at the
/// middle-segments maps, which are exactly the active maps out of `Q[k]`.
pub fn lambda_square_holds(p: &SMap) -> Result<Verdict> {
    let d = p.dim();
    let ops: Vec<OrdinalMap> = (0..=d)
        .filter(|&k| 2 * k + 1 <= d)
        .flat_map(|k| (0..=d).flat_map(move |n| active_maps(2 * k + 1, n)))
        .collect();
    all_cartesian(p, "λ-square, chain by chain", ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::FinCat;
    use crate::sset::{horn, nerve, nerve_map, representable, smap_from_fn};
    use std::sync::Arc;

    fn vertex_inclusion(v: usize) -> SMap {
        let pt = Arc::new(representable(0, 3));
        let x = Arc::new(representable(1, 3));
        smap_from_fn(pt, x.clone(), |n, _| x.find(n, &vec![v.to_string(); n + 1].join("")).unwrap()).unwrap()
    }

    #[test]
    fn pullback_square_basics() {
        let id = Square { label: "id".into(), sizes: [2, 2, 2, 2], top: vec![0, 1], left: vec![0, 1], right: vec![0, 1], bottom: vec![0, 1] };
        assert!(is_pullback_square(&id).unwrap().holds);
        // fiber of size 2 over a point, compared with a single element
        let sq = Square { label: "p".into(), sizes: [1, 2, 1, 1], top: vec![0], left: vec![0], right: vec![0, 0], bottom: vec![0] };
        let v = is_pullback_square(&sq).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.element, Some([1, 0]));
        assert!(!is_pullback_square(&w.square.unwrap()).unwrap().holds);
        let bad = Square { label: "x".into(), sizes: [1, 2, 1, 2], top: vec![0], left: vec![0], right: vec![0, 1], bottom: vec![1] };
        assert!(matches!(is_pullback_square(&bad), Err(Error::NonCommuting(_))));
    }

    #[test]
    fn vertex_inclusions() {
        // {0} is a sieve in [1]; {1} is not
        assert!(is_right_fibration(&vertex_inclusion(0)).unwrap().holds);
        let v = is_right_fibration(&vertex_inclusion(1)).unwrap();
        assert!(!v.holds && v.witness.is_some());
        assert!(is_left_fibration(&vertex_inclusion(1)).unwrap().holds);
        assert!(!is_left_fibration(&vertex_inclusion(0)).unwrap().holds);
    }

    #[test]
    fn culf_examples() {
        let pp = Arc::new(FinCat::parallel_pair());
        let one = Arc::new(FinCat::ordinal(1));
        let f = Functor::new(pp, one, vec![0, 1], vec![0, 2, 1, 1]).unwrap();
        let nf = nerve_map(&f, 4);
        assert!(is_culf(&nf).unwrap().holds);
        assert!(!is_right_fibration(&nf).unwrap().holds);
        assert!(!is_left_fibration(&nf).unwrap().holds);
        let two = Arc::new(FinCat::ordinal(2));
        let one = Arc::new(FinCat::ordinal(1));
        let s0 = Functor::new(two.clone(), one.clone(), vec![0, 0, 1], {
            let idx = |a: &str| one.find_morphism(a).unwrap();
            two.morphisms()
                .iter()
                .map(|m| {
                    let s = |o: usize| if o == 0 { "0" } else if o == 1 { "0" } else { "1" };
                    idx(&format!("{}<={}", s(m.src), s(m.tgt)))
                })
                .collect()
        })
        .unwrap();
        let v = is_culf(&nerve_map(&s0, 4)).unwrap();
        assert!(!v.holds);
        assert!(!is_pullback_square(&v.witness.unwrap().square.unwrap()).unwrap().holds);
    }

    #[test]
    fn segal_examples() {
        assert!(is_segal(&nerve(&FinCat::parallel_pair(), 4)).unwrap().holds);
        assert!(is_segal(&representable(2, 4)).unwrap().holds);
        let (h, _) = horn(2, 1, 2).unwrap();
        assert!(!is_segal(&h).unwrap().holds);
        assert!(is_segal(&representable(1, 1)).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let e1 = nerve(&FinCat::codiscrete(vec!["a".into(), "b".into()]), 3);
        assert_eq!(equivalences(&e1).unwrap().len(), 4);
        assert!(!is_rezk_complete(&e1).unwrap().holds);
        let p = nerve(&FinCat::ordinal(2), 3);
        let degenerate: Vec<usize> = (0..p.level_len(1)).filter(|&f| p.is_degenerate(1, f)).collect();
        assert_eq!(equivalences(&p).unwrap(), degenerate);
        assert!(is_rezk_complete(&p).unwrap().holds);
    }

    #[test]
    fn dk_and_relative_completeness() {
        let e1 = Arc::new(FinCat::codiscrete(vec!["a".into(), "b".into()]));
        let pt = Arc::new(FinCat::ordinal(0));
        let f = Functor::new(e1.clone(), pt.clone(), vec![0, 0], vec![0; e1.num_morphisms()]).unwrap();
        assert!(is_dk_equivalence(&f).holds);
        assert!(!is_relative_complete(&f).holds);
        let one = Arc::new(FinCat::ordinal(1));
        let incl = Functor::new(pt, one.clone(), vec![0], vec![one.identity(0)]).unwrap();
        assert!(!is_dk_equivalence(&incl).holds);
        assert!(is_relative_complete(&incl).holds);
        assert!(is_final_functor(&Functor::identity(one.clone())).holds);
    }

    #[test]
    fn vertex_functors_and_finality() {
        let pt = Arc::new(FinCat::ordinal(0));
        let one = Arc::new(FinCat::ordinal(1));
        let at = |v: usize| Functor::new(pt.clone(), one.clone(), vec![v], vec![one.identity(v)]).unwrap();
        assert!(is_final_functor(&at(1)).holds);
        assert!(!is_final_functor(&at(0)).holds);
        assert!(preserves_terminal(&at(1)));
    }
}
