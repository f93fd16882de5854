//! Combinatorics of the simplex category: monotone maps between finite
//! ordinals `[n] = {0, ..., n}`, the epi-mono and active-inert factorization
//! systems, and the twisting functor `Q` behind edgewise subdivision.
//!
//! Positions in `Q[n] = [n]^op * [n] = [2n+1]`: the primed element `i'` sits at
//! position `n - i` and the unprimed element `i` at position `n + 1 + i`, so the
//! primes come first in reverse order. Every index computation involving `Q`
//! in this crate goes through [`q_position_primed`] and [`q_position`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A monotone map `[dom] -> [cod]` stored by its image tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawOrdinalMap")]
pub struct OrdinalMap {
    dom: usize,
    cod: usize,
    images: Vec<usize>,
}

#[derive(Deserialize)]
struct RawOrdinalMap {
    dom: usize,
    cod: usize,
    images: Vec<usize>,
}

impl TryFrom<RawOrdinalMap> for OrdinalMap {
    type Error = Error;

    fn try_from(raw: RawOrdinalMap) -> Result<Self> {
        OrdinalMap::new(raw.dom, raw.cod, raw.images)
    }
}

/// The six classification flags of a monotone map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MapClass {
    pub active: bool,
    pub inert: bool,
    pub last_point_preserving: bool,
    pub first_point_preserving: bool,
    pub injective: bool,
    pub surjective: bool,
}

impl OrdinalMap {
    pub fn new(dom: usize, cod: usize, images: Vec<usize>) -> Result<Self> {
        if images.len() != dom + 1 {
            return Err(Error::InvalidOrdinalMap(format!(
                "expected {} images for [{dom}], got {}",
                dom + 1,
                images.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&v| v > cod) {
            return Err(Error::InvalidOrdinalMap(format!("image {bad} outside [{cod}]")));
        }
        if images.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidOrdinalMap(format!("{images:?} is not monotone")));
        }
        Ok(OrdinalMap { dom, cod, images })
    }

    /// Builds `[images.len() - 1] -> [cod]`.
    pub fn from_images(cod: usize, images: &[usize]) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidOrdinalMap("empty image tuple".into()));
        }
        Self::new(images.len() - 1, cod, images.to_vec())
    }

    pub fn identity(n: usize) -> Self {
        OrdinalMap { dom: n, cod: n, images: (0..=n).collect() }
    }

    /// The coface `d^i : [n-1] -> [n]` skipping `i`.
    pub fn coface(n: usize, i: usize) -> Result<Self> {
        if n == 0 || i > n {
            return Err(Error::InvalidOrdinalMap(format!("no coface d^{i} into [{n}]")));
        }
        let images = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
        Ok(OrdinalMap { dom: n - 1, cod: n, images })
    }

    /// The codegeneracy `s^i : [n+1] -> [n]` hitting `i` twice.
    pub fn codegeneracy(n: usize, i: usize) -> Result<Self> {
        if i > n {
            return Err(Error::InvalidOrdinalMap(format!("no codegeneracy s^{i} onto [{n}]")));
        }
        let images = (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
        Ok(OrdinalMap { dom: n + 1, cod: n, images })
    }

    pub fn constant(dom: usize, cod: usize, value: usize) -> Result<Self> {
        Self::new(dom, cod, vec![value; dom + 1])
    }

    /// The vertex `v : [0] -> [n]`.
    pub fn vertex(n: usize, v: usize) -> Result<Self> {
        Self::new(0, n, vec![v])
    }

    /// The edge `[1] -> [n]` with endpoints `a <= b`.
    pub fn edge(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::new(1, n, vec![a, b])
    }

    /// The active map `[1] -> [n]`, `0 -> 0`, `1 -> n`.
    pub fn long_edge(n: usize) -> Self {
        OrdinalMap { dom: 1, cod: n, images: vec![0, n] }
    }

    /// `d^top : [n] -> [n+1]`.
    pub fn d_top(n: usize) -> Self {
        Self::coface(n + 1, n + 1).expect("top coface exists")
    }

    /// `d^bot : [n] -> [n+1]`.
    pub fn d_bot(n: usize) -> Self {
        Self::coface(n + 1, 0).expect("bottom coface exists")
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn first(&self) -> usize {
        self.images[0]
    }

    pub fn last(&self) -> usize {
        self.images[self.dom]
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &OrdinalMap) -> Result<OrdinalMap> {
        compose(self, f)
    }

    pub fn classify(&self) -> MapClass {
        classify(self)
    }

    pub fn is_active(&self) -> bool {
        self.first() == 0 && self.last() == self.cod
    }

    pub fn is_inert(&self) -> bool {
        self.images.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn is_last_point_preserving(&self) -> bool {
        self.last() == self.cod
    }

    pub fn is_first_point_preserving(&self) -> bool {
        self.first() == 0
    }

    pub fn is_injective(&self) -> bool {
        self.images.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.first() == 0
            && self.last() == self.cod
            && self.images.windows(2).all(|w| w[1] <= w[0] + 1)
    }

    /// Compact label such as `0012` (comma separated once values exceed 9).
    pub fn label(&self) -> String {
        if self.cod < 10 {
            self.images.iter().map(|v| char::from(b'0' + *v as u8)).collect()
        } else {
            self.images.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl std::fmt::Display for OrdinalMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}):[{}]->[{}]", self.label(), self.dom, self.cod)
    }
}

/// Composite `g ∘ f`.
pub fn compose(g: &OrdinalMap, f: &OrdinalMap) -> Result<OrdinalMap> {
    if f.cod != g.dom {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose {g} after {f}: codomain [{}] vs domain [{}]",
            f.cod, g.dom
        )));
    }
    Ok(OrdinalMap {
        dom: f.dom,
        cod: g.cod,
        images: f.images.iter().map(|&i| g.images[i]).collect(),
    })
}

pub fn classify(f: &OrdinalMap) -> MapClass {
    MapClass {
        active: f.is_active(),
        inert: f.is_inert(),
        last_point_preserving: f.is_last_point_preserving(),
        first_point_preserving: f.is_first_point_preserving(),
        injective: f.is_injective(),
        surjective: f.is_surjective(),
    }
}

/// The unique factorization `f = mono ∘ epi`.
pub fn epi_mono_factorize(f: &OrdinalMap) -> (OrdinalMap, OrdinalMap) {
    let mut distinct: Vec<usize> = f.images.clone();
    distinct.dedup();
    let k = distinct.len() - 1;
    let mut epi = Vec::with_capacity(f.dom + 1);
    let mut idx = 0;
    for &v in &f.images {
        while distinct[idx] != v {
            idx += 1;
        }
        epi.push(idx);
    }
    (
        OrdinalMap { dom: f.dom, cod: k, images: epi },
        OrdinalMap { dom: k, cod: f.cod, images: distinct },
    )
}

/// The unique factorization `f = inert ∘ active`.
pub fn active_inert_factorize(f: &OrdinalMap) -> (OrdinalMap, OrdinalMap) {
    let lo = f.first();
    let hi = f.last();
    let act = OrdinalMap {
        dom: f.dom,
        cod: hi - lo,
        images: f.images.iter().map(|&v| v - lo).collect(),
    };
    let inr = OrdinalMap { dom: hi - lo, cod: f.cod, images: (lo..=hi).collect() };
    (act, inr)
}

/// All monotone maps `[m] -> [n]` in lexicographic order of image tuples.
pub fn all_maps(m: usize, n: usize) -> Vec<OrdinalMap> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; m + 1];
    loop {
        out.push(OrdinalMap { dom: m, cod: n, images: cur.clone() });
        // next weakly increasing tuple
        let mut pos = m as isize;
        while pos >= 0 && cur[pos as usize] == n {
            pos -= 1;
        }
        if pos < 0 {
            break;
        }
        let p = pos as usize;
        let v = cur[p] + 1;
        for slot in cur.iter_mut().skip(p) {
            *slot = v;
        }
    }
    out
}

/// Number of monotone maps `[m] -> [n]`, i.e. `binomial(m + n + 1, m + 1)`.
pub fn count_maps(m: usize, n: usize) -> usize {
    binomial(m + n + 1, m + 1)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All active maps `[m] -> [n]`.
pub fn active_maps(m: usize, n: usize) -> Vec<OrdinalMap> {
    all_maps(m, n).into_iter().filter(OrdinalMap::is_active).collect()
}

/// All inert maps `[m] -> [n]`; there are `n - m + 1` of them when `m <= n`.
pub fn inert_maps(m: usize, n: usize) -> Vec<OrdinalMap> {
    if m > n {
        return Vec::new();
    }
    (0..=n - m)
        .map(|lo| OrdinalMap { dom: m, cod: n, images: (lo..=lo + m).collect() })
        .collect()
}

/// `Q[n] = [2n+1]`.
pub fn q_on_object(n: usize) -> usize {
    2 * n + 1
}

/// Position of the primed element `i'` inside `Q[n]`.
pub fn q_position_primed(n: usize, i: usize) -> usize {
    n - i
}

/// Position of the unprimed element `i` inside `Q[n]`.
pub fn q_position(n: usize, i: usize) -> usize {
    n + 1 + i
}

/// `Q(f) = f^op * f : Q[m] -> Q[n]`.
pub fn q_on_map(f: &OrdinalMap) -> OrdinalMap {
    let (m, n) = (f.dom, f.cod);
    let images = (0..=2 * m + 1)
        .map(|j| if j <= m { n - f.apply(m - j) } else { n + 1 + f.apply(j - m - 1) })
        .collect();
    OrdinalMap { dom: 2 * m + 1, cod: 2 * n + 1, images }
}

/// The other join order `[n] * [n]^op`: element `i` at position `i`, `i'` at
/// position `2n + 1 - i`.
pub fn q_prime_on_map(f: &OrdinalMap) -> OrdinalMap {
    let (m, n) = (f.dom, f.cod);
    let images = (0..=2 * m + 1)
        .map(|j| if j <= m { f.apply(j) } else { 2 * n + 1 - f.apply(2 * m + 1 - j) })
        .collect();
    OrdinalMap { dom: 2 * m + 1, cod: 2 * n + 1, images }
}

/// Which join order realizes edgewise subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `[n]^op * [n]`; culf maps subdivide to right fibrations.
    #[default]
    Q,
    /// `[n] * [n]^op`; culf maps subdivide to left fibrations.
    QPrime,
}

impl Convention {
    pub fn on_map(self, f: &OrdinalMap) -> OrdinalMap {
        match self {
            Convention::Q => q_on_map(f),
            Convention::QPrime => q_prime_on_map(f),
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(Convention::Q),
            "qprime" => Ok(Convention::QPrime),
            other => Err(Error::InvalidInput(format!("unknown convention {other:?}"))),
        }
    }
}

/// The last-vertex inclusion `[0] -> [n]`.
pub fn last_vertex_inclusion(n: usize) -> OrdinalMap {
    OrdinalMap { dom: 0, cod: n, images: vec![n] }
}

pub fn first_vertex_inclusion(n: usize) -> OrdinalMap {
    OrdinalMap { dom: 0, cod: n, images: vec![0] }
}

/// A pushout square in the simplex category of an inert map along an active
/// one:
///
/// ```text
///   [m] --inert--> [n]
///    |              |
///  active        active_out
///    v              v
///   [k] --inert_out--> [p]
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushoutSquare {
    pub inert: OrdinalMap,
    pub active: OrdinalMap,
    pub inert_out: OrdinalMap,
    pub active_out: OrdinalMap,
}

impl PushoutSquare {
    /// Pushout of `inert : [m] >-> [n]` along `active : [m] -|-> [k]`, computed
    /// by substituting the image segment of the inert map.
    pub fn new(inert: &OrdinalMap, active: &OrdinalMap) -> Result<Self> {
        if !inert.is_inert() || !active.is_active() || inert.dom != active.dom {
            return Err(Error::InvalidOrdinalMap(format!(
                "expected an inert and an active map with common domain, got {inert} and {active}"
            )));
        }
        let (m, n, k) = (inert.dom, inert.cod, active.cod);
        let p = n - m + k;
        let lo = inert.first();
        let hi = inert.last();
        let inert_out = OrdinalMap { dom: k, cod: p, images: (lo..=lo + k).collect() };
        let active_out_images = (0..=n)
            .map(|i| {
                if i < lo {
                    i
                } else if i <= hi {
                    lo + active.apply(i - lo)
                } else {
                    i - m + k
                }
            })
            .collect();
        let active_out = OrdinalMap { dom: n, cod: p, images: active_out_images };
        Ok(PushoutSquare { inert: inert.clone(), active: active.clone(), inert_out, active_out })
    }

    pub fn apex(&self) -> usize {
        self.inert_out.cod
    }
}

/// Every inert/active pushout square whose apex `[n - m + k]` is at most
/// `bound`.
pub fn active_inert_pushouts(bound: usize) -> Vec<PushoutSquare> {
    let mut out = Vec::new();
    for n in 0..=bound {
        for m in 0..=n {
            for k in 0..=bound + m - n {
                let actives = active_maps(m, k);
                if actives.is_empty() {
                    continue;
                }
                for inert in inert_maps(m, n) {
                    for active in &actives {
                        out.push(PushoutSquare::new(&inert, active).expect("classes checked"));
                    }
                }
            }
        }
    }
    out
}

/// The pushouts of an outer coface `[m] -> [m+1]` along an inner coface or a
/// codegeneracy out of `[m]`, apex at most `bound`. Every square of
/// [`active_inert_pushouts`] is a grid of these, so a functor sends all of
/// them to pullbacks iff it sends these to pullbacks.
pub fn generating_pushouts(bound: usize) -> Vec<PushoutSquare> {
    let mut out = Vec::new();
    for m in 1..bound {
        let inerts = [OrdinalMap::d_bot(m), OrdinalMap::d_top(m)];
        let mut actives: Vec<OrdinalMap> = (1..=m).map(|i| OrdinalMap::coface(m + 1, i).unwrap()).collect();
        actives.extend((0..m).map(|i| OrdinalMap::codegeneracy(m - 1, i).unwrap()));
        for inert in &inerts {
            for active in &actives {
                let sq = PushoutSquare::new(inert, active).expect("classes checked");
                if sq.apex() <= bound {
                    out.push(sq);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn om(cod: usize, images: &[usize]) -> OrdinalMap {
        OrdinalMap::from_images(cod, images).unwrap()
    }

    #[test]
    fn compose_examples() {
        let f = om(2, &[0, 2]);
        assert_eq!(compose(&OrdinalMap::identity(2), &f).unwrap(), f);
        assert_eq!(compose(&om(2, &[0, 2]), &om(1, &[0, 0])).unwrap(), om(2, &[0, 0]));
        let d0 = OrdinalMap::coface(2, 0).unwrap();
        let s0 = OrdinalMap::codegeneracy(1, 0).unwrap();
        // pointwise: s0 = (0,0,1), d0 = (1,2)
        assert_eq!(compose(&d0, &s0).unwrap(), om(2, &[1, 1, 2]));
        assert!(matches!(compose(&s0, &d0), Ok(_)));
        assert!(matches!(
            compose(&om(2, &[0, 2]), &om(2, &[0, 1])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&om(2, &[0, 2]));
        assert!(c.active && !c.inert);
        let c = classify(&om(2, &[1, 2]));
        assert!(c.inert && !c.active && c.last_point_preserving);
        let c = classify(&om(1, &[0, 0, 1]));
        assert!(c.active && c.surjective);
    }

    #[test]
    fn factorization_examples() {
        let (e, m) = epi_mono_factorize(&om(2, &[0, 0, 2]));
        assert_eq!((e, m), (om(1, &[0, 0, 1]), om(2, &[0, 2])));
        let id = OrdinalMap::identity(3);
        assert_eq!(epi_mono_factorize(&id), (id.clone(), id.clone()));
        let (e, m) = epi_mono_factorize(&om(2, &[1, 1]));
        assert_eq!((e, m), (om(0, &[0, 0]), om(2, &[1])));

        assert_eq!(
            active_inert_factorize(&om(2, &[1, 2])),
            (OrdinalMap::identity(1), om(2, &[1, 2]))
        );
        assert_eq!(
            active_inert_factorize(&om(2, &[0, 2])),
            (om(2, &[0, 2]), OrdinalMap::identity(2))
        );
        assert_eq!(
            active_inert_factorize(&om(3, &[1, 1, 2])),
            (om(1, &[0, 0, 1]), om(3, &[1, 2]))
        );
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_on_object(0), 1);
        assert_eq!(q_on_object(1), 3);
        assert_eq!(q_on_object(4), 9);
        assert_eq!(q_on_map(&OrdinalMap::coface(1, 0).unwrap()), om(3, &[0, 3]));
        assert_eq!(q_on_map(&OrdinalMap::identity(3)), OrdinalMap::identity(7));
        assert_eq!(q_on_map(&OrdinalMap::codegeneracy(0, 0).unwrap()), om(1, &[0, 0, 1, 1]));
        // omitted positions of Q(d^i) are exactly i and i'
        for n in 1..5 {
            for i in 0..=n {
                let q = q_on_map(&OrdinalMap::coface(n, i).unwrap());
                let missing: Vec<usize> =
                    (0..=2 * n + 1).filter(|p| !q.images().contains(p)).collect();
                assert_eq!(missing, vec![q_position_primed(n, i), q_position(n, i)]);
            }
        }
    }

    #[test]
    fn last_vertex_examples() {
        assert_eq!(last_vertex_inclusion(0), OrdinalMap::identity(0));
        assert_eq!(last_vertex_inclusion(2), om(2, &[2]));
        assert_eq!(last_vertex_inclusion(5), om(5, &[5]));
    }

    #[test]
    fn all_maps_counts() {
        for m in 0..5 {
            for n in 0..5 {
                assert_eq!(all_maps(m, n).len(), count_maps(m, n));
            }
        }
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(OrdinalMap::new(1, 2, vec![2, 1]).is_err());
        assert!(OrdinalMap::new(1, 1, vec![0, 2]).is_err());
        assert!(OrdinalMap::new(2, 1, vec![0, 1]).is_err());
        let json = r#"{"dom":1,"cod":2,"images":[0,2]}"#;
        let f: OrdinalMap = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), json);
        assert!(serde_json::from_str::<OrdinalMap>(r#"{"dom":1,"cod":2,"images":[2,0]}"#).is_err());
    }
}
