//! Finite truncated simplicial sets and simplicial maps.
//!
//! A [`TruncSSet`] stores levels `X_0, ..., X_D` as index ranges together with
//! the face and degeneracy generators. Arbitrary operators act through the
//! epi-mono decomposition of the ordinal map.

mod constructions;
mod search;

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ordinal::OrdinalMap;

pub use constructions::*;
pub use search::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSSet {
    dim: usize,
    labels: Vec<Vec<String>>,
    /// `faces[n][i][x] = d_i x` for `1 <= n <= dim`; `faces[0]` is empty.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[n][i][x] = s_i x` for `0 <= n < dim`.
    degens: Vec<Vec<Vec<usize>>>,
}

impl TruncSSet {
    /// Builds from raw generator tables and checks every simplicial identity.
    pub fn from_tables(
        dim: usize,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let x = Self::from_tables_unvalidated(dim, labels, faces, degens)?;
        x.validate()?;
        Ok(x)
    }

    /// Checks table shapes and ranges only.
    pub fn from_tables_unvalidated(
        dim: usize,
        labels: Vec<Vec<String>>,
        mut faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidSSet(vec![msg]));
        if labels.len() != dim + 1 {
            return bad(format!("expected {} levels, got {}", dim + 1, labels.len()));
        }
        if faces.len() == dim {
            faces.insert(0, Vec::new());
        }
        if faces.len() != dim + 1 {
            return bad(format!("expected face tables for levels 1..={dim}"));
        }
        if degens.len() != dim {
            return bad(format!("expected degeneracy tables for levels 0..{dim}"));
        }
        for n in 1..=dim {
            if faces[n].len() != n + 1 {
                return bad(format!("level {n} needs {} face maps", n + 1));
            }
            for (i, d) in faces[n].iter().enumerate() {
                if d.len() != labels[n].len() {
                    return bad(format!("d_{i} on level {n} is not total"));
                }
                if let Some(&v) = d.iter().find(|&&v| v >= labels[n - 1].len()) {
                    return bad(format!("d_{i} on level {n} points to missing element {v}"));
                }
            }
        }
        if !faces[0].is_empty() {
            return bad("level 0 has no face maps".into());
        }
        for n in 0..dim {
            if degens[n].len() != n + 1 {
                return bad(format!("level {n} needs {} degeneracy maps", n + 1));
            }
            for (i, s) in degens[n].iter().enumerate() {
                if s.len() != labels[n].len() {
                    return bad(format!("s_{i} on level {n} is not total"));
                }
                if let Some(&v) = s.iter().find(|&&v| v >= labels[n + 1].len()) {
                    return bad(format!("s_{i} on level {n} points to missing element {v}"));
                }
            }
        }
        Ok(TruncSSet { dim, labels, faces, degens })
    }

    /// Builds a simplicial set from explicit simplices and generator actions.
    pub fn build<T, F, S, L>(dim: usize, levels: Vec<Vec<T>>, face: F, degen: S, label: L) -> Result<Self>
    where
        T: Eq + Hash,
        F: Fn(usize, usize, &T) -> T,
        S: Fn(usize, usize, &T) -> T,
        L: Fn(&T) -> String,
    {
        if levels.len() != dim + 1 {
            return Err(Error::InvalidSSet(vec![format!(
                "expected {} levels, got {}",
                dim + 1,
                levels.len()
            )]));
        }
        let index: Vec<HashMap<&T, usize>> = levels
            .iter()
            .map(|lv| lv.iter().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        let lookup = |n: usize, t: &T, what: &str| -> Result<usize> {
            index[n].get(t).copied().ok_or_else(|| {
                Error::InvalidSSet(vec![format!("{what} leaves level {n} (got {})", label(t))])
            })
        };
        let mut faces = vec![Vec::new()];
        for n in 1..=dim {
            let mut lv = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let col = levels[n]
                    .iter()
                    .map(|t| lookup(n - 1, &face(n, i, t), "face"))
                    .collect::<Result<Vec<_>>>()?;
                lv.push(col);
            }
            faces.push(lv);
        }
        let mut degens = Vec::with_capacity(dim);
        for n in 0..dim {
            let mut lv = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let col = levels[n]
                    .iter()
                    .map(|t| lookup(n + 1, &degen(n, i, t), "degeneracy"))
                    .collect::<Result<Vec<_>>>()?;
                lv.push(col);
            }
            degens.push(lv);
        }
        let labels = levels.iter().map(|lv| lv.iter().map(&label).collect()).collect();
        Ok(TruncSSet { dim, labels, faces, degens })
    }

    /// Builds from simplices and a single operator action `alpha^*`.
    pub fn build_with_action<T, A, L>(dim: usize, levels: Vec<Vec<T>>, act: A, label: L) -> Result<Self>
    where
        T: Eq + Hash,
        A: Fn(&OrdinalMap, &T) -> T,
        L: Fn(&T) -> String,
    {
        let cofaces: Vec<Vec<OrdinalMap>> = (0..=dim)
            .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| OrdinalMap::coface(n, i).unwrap()).collect() })
            .collect();
        let codegens: Vec<Vec<OrdinalMap>> =
            (0..dim).map(|n| (0..=n).map(|i| OrdinalMap::codegeneracy(n, i).unwrap()).collect()).collect();
        Self::build(
            dim,
            levels,
            |n, i, t| act(&cofaces[n][i], t),
            |n, i, t| act(&codegens[n][i], t),
            label,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level_len(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.level_len(0) == 0
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    pub fn label(&self, n: usize, x: usize) -> &str {
        &self.labels[n][x]
    }

    /// Index of the element with the given label.
    pub fn find(&self, n: usize, label: &str) -> Option<usize> {
        self.labels.get(n)?.iter().position(|l| l == label)
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degen(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][i][x]
    }

    pub fn face_table(&self, n: usize, i: usize) -> &[usize] {
        &self.faces[n][i]
    }

    pub fn degen_table(&self, n: usize, i: usize) -> &[usize] {
        &self.degens[n][i]
    }

    /// `alpha^* x` for `alpha : [m] -> [n]` and `x` in `X_n`.
    pub fn act(&self, alpha: &OrdinalMap, x: usize) -> Result<usize> {
        let (m, n) = (alpha.dom(), alpha.cod());
        if m > self.dim || n > self.dim {
            return Err(Error::OutOfTruncation(format!(
                "operator {alpha} needs dimension {} but the bound is {}",
                m.max(n),
                self.dim
            )));
        }
        if x >= self.level_len(n) {
            return Err(Error::InvalidInput(format!("no element {x} in level {n}")));
        }
        Ok(self.act_unchecked(alpha.images(), n, x))
    }

    /// Operator action by image tuple; caller guarantees ranges.
    pub(crate) fn act_unchecked(&self, images: &[usize], n: usize, x: usize) -> usize {
        assert!(n < 128, "dimension {n} is beyond the supported range");
        let mut cur = x;
        let mut level = n;
        // injective part: delete the values missed by the image, from the top
        let hit = images.iter().fold(0u128, |acc, &v| acc | (1u128 << v));
        for j in (0..=n).rev() {
            if hit & (1u128 << j) == 0 {
                cur = self.faces[level][j][cur];
                level -= 1;
            }
        }
        // surjective part: one degeneracy per repeated value, applied last-first
        let total = images.windows(2).filter(|w| w[0] == w[1]).count();
        let mut seen = 0;
        for p in (0..images.len() - 1).rev() {
            if images[p] == images[p + 1] {
                seen += 1;
                let j = p - (total - seen);
                cur = self.degens[level][j][cur];
                level += 1;
            }
        }
        cur
    }

    /// The `j`-th vertex of `x` in `X_n`.
    pub fn vertex(&self, n: usize, x: usize, j: usize) -> usize {
        self.act_unchecked(&[j], n, x)
    }

    pub fn last_vertex(&self, n: usize, x: usize) -> usize {
        self.vertex(n, x, n)
    }

    pub fn first_vertex(&self, n: usize, x: usize) -> usize {
        self.vertex(n, x, 0)
    }

    /// The image of `x` under the active map `[1] -> [n]`; for `n = 0` this is
    /// the degenerate edge `s_0 x`.
    pub fn long_edge(&self, n: usize, x: usize) -> usize {
        self.act_unchecked(&[0, n], n, x)
    }

    pub fn edge(&self, n: usize, x: usize, a: usize, b: usize) -> usize {
        self.act_unchecked(&[a, b], n, x)
    }

    /// Whether `x` is in the image of some degeneracy.
    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        self.degeneracy_of(n, x).is_some()
    }

    /// Some `(i, y)` with `x = s_i y`, if `x` is degenerate.
    pub fn degeneracy_of(&self, n: usize, x: usize) -> Option<(usize, usize)> {
        if n == 0 {
            return None;
        }
        (0..n).find_map(|i| {
            let y = self.faces[n][i][x];
            (self.degens[n - 1][i][y] == x).then_some((i, y))
        })
    }

    /// Eilenberg-Zilber form `x = σ^* y`: a surjection `σ : [n] -> [l]` and a
    /// non-degenerate `y` in `X_l`.
    pub fn ez_decompose(&self, n: usize, x: usize) -> (OrdinalMap, usize) {
        let mut sigma = OrdinalMap::identity(n);
        let (mut level, mut cur) = (n, x);
        while let Some((i, y)) = self.degeneracy_of(level, cur) {
            // x = sigma^* s_i y = (s^i ∘ sigma)^* y
            sigma = OrdinalMap::codegeneracy(level - 1, i).unwrap().after(&sigma).unwrap();
            level -= 1;
            cur = y;
        }
        (sigma, cur)
    }

    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.level_len(n)).filter(|&x| !self.is_degenerate(n, x)).collect()
    }

    /// Every violated simplicial identity, each with a witness element.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let lab = |n: usize, x: usize| self.labels[n][x].clone();
        for n in 2..=self.dim {
            for x in 0..self.level_len(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face(n - 1, i, self.face(n, j, x));
                        let rhs = self.face(n - 1, j - 1, self.face(n, i, x));
                        if lhs != rhs {
                            out.push(format!(
                                "d_{i} d_{j} != d_{} d_{i} at level {n} element {}",
                                j - 1,
                                lab(n, x)
                            ));
                        }
                    }
                }
            }
        }
        for n in 0..self.dim {
            for x in 0..self.level_len(n) {
                for i in 0..=n {
                    let sx = self.degen(n, i, x);
                    for j in 0..=n + 1 {
                        let lhs = self.face(n + 1, j, sx);
                        let rhs = if j == i || j == i + 1 {
                            x
                        } else if j < i {
                            self.degen(n - 1, i - 1, self.face(n, j, x))
                        } else {
                            self.degen(n - 1, i, self.face(n, j - 1, x))
                        };
                        if lhs != rhs {
                            out.push(format!(
                                "d_{j} s_{i} identity fails at level {n} element {}",
                                lab(n, x)
                            ));
                        }
                    }
                }
            }
        }
        for n in 0..self.dim.saturating_sub(1) {
            for x in 0..self.level_len(n) {
                for j in 0..=n {
                    for i in 0..=j {
                        let lhs = self.degen(n + 1, i, self.degen(n, j, x));
                        let rhs = self.degen(n + 1, j + 1, self.degen(n, i, x));
                        if lhs != rhs {
                            out.push(format!(
                                "s_{i} s_{j} != s_{} s_{i} at level {n} element {}",
                                j + 1,
                                lab(n, x)
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSSet(v))
        }
    }

    /// Keeps levels `0..=d`.
    pub fn truncate(&self, d: usize) -> TruncSSet {
        let d = d.min(self.dim);
        TruncSSet {
            dim: d,
            labels: self.labels[..=d].to_vec(),
            faces: self.faces[..=d].to_vec(),
            degens: self.degens[..d].to_vec(),
        }
    }

    pub fn relabel(&self, f: impl Fn(usize, usize, &str) -> String) -> TruncSSet {
        let mut out = self.clone();
        for (n, lv) in out.labels.iter_mut().enumerate() {
            for (x, l) in lv.iter_mut().enumerate() {
                *l = f(n, x, l);
            }
        }
        out
    }
}

/// A levelwise map of truncated simplicial sets, defined up to the smaller of
/// the two bounds.
#[derive(Clone, Debug)]
pub struct SMap {
    source: Arc<TruncSSet>,
    target: Arc<TruncSSet>,
    components: Vec<Vec<usize>>,
}

impl SMap {
    pub fn new(source: Arc<TruncSSet>, target: Arc<TruncSSet>, components: Vec<Vec<usize>>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, components)?;
        if let Some(err) = f.first_violation() {
            return Err(Error::InvalidSMap(err));
        }
        Ok(f)
    }

    /// Checks shapes but not commutation with operators.
    pub fn new_unchecked(
        source: Arc<TruncSSet>,
        target: Arc<TruncSSet>,
        mut components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let d = source.dim().min(target.dim());
        if components.len() < d + 1 {
            return Err(Error::InvalidSMap(format!(
                "expected components for levels 0..={d}, got {}",
                components.len()
            )));
        }
        components.truncate(d + 1);
        for (n, c) in components.iter().enumerate() {
            if c.len() != source.level_len(n) {
                return Err(Error::InvalidSMap(format!("component {n} is not total")));
            }
            if let Some(&v) = c.iter().find(|&&v| v >= target.level_len(n)) {
                return Err(Error::InvalidSMap(format!("component {n} hits missing element {v}")));
            }
        }
        Ok(SMap { source, target, components })
    }

    pub fn first_violation(&self) -> Option<String> {
        let (x, y) = (&*self.source, &*self.target);
        let d = self.dim();
        for n in 1..=d {
            for a in 0..x.level_len(n) {
                for i in 0..=n {
                    if self.components[n - 1][x.face(n, i, a)] != y.face(n, i, self.components[n][a]) {
                        return Some(format!(
                            "d_{i} does not commute at level {n} element {}",
                            x.label(n, a)
                        ));
                    }
                }
            }
        }
        for n in 0..d {
            for a in 0..x.level_len(n) {
                for i in 0..=n {
                    if self.components[n + 1][x.degen(n, i, a)] != y.degen(n, i, self.components[n][a]) {
                        return Some(format!(
                            "s_{i} does not commute at level {n} element {}",
                            x.label(n, a)
                        ));
                    }
                }
            }
        }
        None
    }

    pub fn identity(x: Arc<TruncSSet>) -> SMap {
        let components = (0..=x.dim()).map(|n| (0..x.level_len(n)).collect()).collect();
        SMap { source: x.clone(), target: x, components }
    }

    /// `g ∘ f`.
    pub fn compose(g: &SMap, f: &SMap) -> Result<SMap> {
        if f.target.as_ref() != g.source.as_ref() {
            return Err(Error::DimensionMismatch("composite of non-matching maps".into()));
        }
        let d = f.dim().min(g.dim()).min(g.target.dim());
        let components = (0..=d)
            .map(|n| f.components[n].iter().map(|&a| g.components[n][a]).collect())
            .collect();
        Ok(SMap { source: f.source.clone(), target: g.target.clone(), components })
    }

    pub fn source(&self) -> &Arc<TruncSSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TruncSSet> {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.components.len() - 1
    }

    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.components[n][x]
    }

    pub fn component(&self, n: usize) -> &[usize] {
        &self.components[n]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Restricts source and target to levels `0..=d`.
    pub fn truncate(&self, d: usize) -> SMap {
        let d = d.min(self.dim());
        SMap {
            source: Arc::new(self.source.truncate(d)),
            target: Arc::new(self.target.truncate(d)),
            components: self.components[..=d].to_vec(),
        }
    }

    pub fn is_levelwise_bijective(&self) -> bool {
        (0..=self.dim()).all(|n| {
            let c = &self.components[n];
            if c.len() != self.target.level_len(n) {
                return false;
            }
            let mut seen = vec![false; c.len()];
            c.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }

    /// Elements of `X_n` lying over `y`.
    pub fn fiber(&self, n: usize, y: usize) -> Vec<usize> {
        self.components[n].iter().enumerate().filter(|&(_, &v)| v == y).map(|(i, _)| i).collect()
    }

    /// Fibers over every element of the target level.
    pub fn fibers(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.target.level_len(n)];
        for (x, &y) in self.components[n].iter().enumerate() {
            out[y].push(x);
        }
        out
    }
}

impl PartialEq for SMap {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
            && *self.source == *other.source
            && *self.target == *other.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::all_maps;

    #[test]
    fn representable_sizes() {
        assert_eq!(representable(0, 2).level_sizes(), vec![1, 1, 1]);
        assert_eq!(representable(1, 1).level_sizes(), vec![2, 3]);
        assert_eq!(representable(2, 2).level_sizes(), vec![3, 6, 10]);
        representable(2, 3).validate().unwrap();
    }

    #[test]
    fn act_is_composition_on_representables() {
        let d = representable(2, 4);
        for n in 0..=4 {
            for m in 0..=4 {
                for alpha in all_maps(m, n) {
                    for x in 0..d.level_len(n) {
                        let sigma = OrdinalMap::from_images(2, &parse_label(d.label(n, x))).unwrap();
                        let got = d.act(&alpha, x).unwrap();
                        let want = sigma.after(&alpha).unwrap();
                        assert_eq!(d.label(m, got), want.label());
                    }
                }
            }
        }
    }

    fn parse_label(s: &str) -> Vec<usize> {
        s.bytes().map(|b| (b - b'0') as usize).collect()
    }

    #[test]
    fn constructed_violation_is_reported() {
        // two vertices, one edge with d_0 = d_1 swapped wrongly on a 2-simplex
        let labels = vec![
            vec!["a".into(), "b".into()],
            vec!["aa".into(), "bb".into(), "ab".into()],
            vec!["aaa".into(), "bbb".into(), "x".into()],
        ];
        let faces = vec![
            vec![],
            vec![vec![0, 1, 1], vec![0, 1, 0]],
            // x has d0 = ab, d1 = ab, d2 = aa: d_0 d_1 = b but d_0 d_0 = b, d_1 d_2 = a vs d_1 d_1 = a ...
            vec![vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 1]],
        ];
        let degens = vec![vec![vec![0, 1]], vec![vec![0, 1, 2], vec![0, 1, 2]]];
        let err = TruncSSet::from_tables(2, labels, faces, degens).unwrap_err();
        match err {
            Error::InvalidSSet(v) => assert!(!v.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
