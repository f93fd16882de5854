//! The verification suite. Every check runs over the built-in corpus (or an
//! exhaustive family of small instances), re-derives the expected facts with
//! the checkers and reports how many cases it looked at and which failed.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cat::{
    enumerate_functors, enumerate_presheaves, fundamental_category, twisted_arrow, FinCat, Functor, DEFAULT_BUDGET,
};
use crate::checkers::*;
use crate::corpus::{self, Property};
use crate::elements::{el, el_chains, lambda, lower_segments, middle_segments, smap_to_discfib, xi, Chain};
use crate::error::{Error, Result};
use crate::factorization::*;
use crate::ordinal::{all_maps, q_on_map, Convention, OrdinalMap};
use crate::sset::{
    are_isomorphic, count_smaps, dec_bot, dec_top, enumerate_smaps, find_isomorphism_over, interval_map, nerve, nerve_map, pullback,
    representable, sd, sd_of_map, sd_of_map_with, slice_map, MapSearch, SMap, TruncSSet,
};

#[derive(Clone, Debug)]
pub struct Config {
    /// Bound of the corpus instances; odd and at least 7 for the full suite.
    pub dim: usize,
    /// Smaller exhaustive ranges, for smoke runs.
    pub quick: bool,
    pub seed: u64,
    pub budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { dim: 7, quick: false, seed: 0x5d_c0de, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<String>,
}

/// Counts cases and keeps the first few failures.
#[derive(Default)]
pub struct Tally {
    cases: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 20 {
                self.failures.push(what());
            }
        }
    }
}

pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    run: fn(&Config, &mut Tally) -> Result<()>,
}

impl Check {
    pub fn run(&self, cfg: &Config) -> Outcome {
        let mut t = Tally::default();
        if let Err(e) = (self.run)(cfg, &mut t) {
            t.check(false, || format!("error: {e}"));
        }
        if t.cases == 0 {
            t.check(false, || "no cases were examined".into());
        }
        Outcome {
            id: self.id.into(),
            title: self.title.into(),
            passed: t.failed == 0,
            cases: t.cases,
            failures: t.failures,
        }
    }
}

/// The numbered acceptance criteria.
pub fn criteria() -> Vec<Check> {
    vec![
        Check { id: "1", title: "culf maps are exactly those whose subdivision is a right fibration", run: culf_vs_subdivided_rfib },
        Check { id: "2", title: "both decomposition routes agree", run: decomposition_routes },
        Check { id: "3", title: "untwisting roundtrips over N[1], N[2], N(2x2)", run: untwist_roundtrips },
        Check { id: "4", title: "untwisted maps are culf with decomposition sources", run: untwist_outputs },
        Check { id: "5", title: "segment maps: formulas, twisting, unique fillers", run: segments },
        Check { id: "6", title: "ξ, λ and η' squares are pullbacks", run: cartesian_squares },
        Check { id: "7", title: "unit and counit on representables", run: units_and_counits },
        Check { id: "8", title: "comprehensive factorization of functors", run: comprehensive },
        Check { id: "9", title: "Rezk completeness package", run: rezk_package },
        Check { id: "10", title: "isomorphisms are the relative complete DK equivalences", run: dk_relative_complete },
        Check { id: "11", title: "culfy and righteous agree with culf and right fibration", run: culfy_righteous },
    ]
}

/// Further invariants run by `verify-all`.
pub fn invariants() -> Vec<Check> {
    vec![
        Check { id: "claims", title: "corpus claims re-derived", run: corpus_claims },
        Check { id: "degeneracy-square", title: "culf maps are cartesian on [1] -> [0]", run: degeneracy_square },
        Check { id: "q-prime", title: "culf iff the primed subdivision is a left fibration", run: q_prime_convention },
        Check { id: "final-orthogonal", title: "finality agrees with orthogonality", run: final_vs_orthogonal },
        Check { id: "segal-lifts", title: "right fibrations over Segal objects have Segal sources", run: segal_lifts },
        Check { id: "d0-square", title: "between Segal objects the d0 square decides right fibrations", run: d0_square },
        Check { id: "slices-intervals", title: "slices detect right fibrations, intervals detect culf", run: slices_intervals },
        Check { id: "route-a-pasting", title: "generating pushouts decide all pushouts", run: pasting },
        Check { id: "twisted-arrow", title: "Sd N(C) is N(Tw C)", run: twisted_arrow_nerves },
        Check { id: "xi-final", title: "ξ is final", run: xi_final },
        Check { id: "q-star-rfib", title: "Q_* sends right fibrations to culf maps", run: q_star_rfib },
        Check { id: "two-inverses", title: "untwisting and the Q_* route agree", run: two_inverses },
        Check { id: "adjunction", title: "Hom(Sd X, W) = Hom(X, Q_* W)", run: adjunction },
        Check { id: "culf-reflection", title: "culf reflection examples", run: culf_reflection_examples },
        Check { id: "random-chains", title: "twisting commutes with segments on random chains", run: random_chains },
        Check { id: "rfib-closure", title: "right fibrations compose and left-cancel", run: rfib_closure },
        Check { id: "dec-commute", title: "the two décalages commute", run: dec_commute },
        Check { id: "lambda-active-edges", title: "λ sends edges over active maps to degenerate edges", run: lambda_active_edges },
    ]
}

fn maps(cfg: &Config) -> Result<Vec<corpus::Named<SMap>>> {
    corpus::maps(cfg.dim)
}

fn holds(v: Result<Verdict>) -> Result<bool> {
    v.map(|v| v.holds)
}

fn culf_vs_subdivided_rfib(cfg: &Config, t: &mut Tally) -> Result<()> {
    let (mut pos, mut neg, mut rfib) = (Vec::new(), Vec::new(), 0);
    for m in maps(cfg)? {
        let culf = holds(is_culf(&m.value))?;
        let sd_rfib = holds(is_right_fibration(&sd_of_map(&m.value)?))?;
        t.check(culf == sd_rfib, || format!("{}: culf {culf}, Sd right fibration {sd_rfib}", m.name));
        if culf {
            pos.push(m.name.clone());
        } else {
            neg.push(m.name.clone());
        }
        if holds(is_right_fibration(&m.value))? {
            rfib += 1;
        }
    }
    t.check(pos.len() >= 4 && pos.iter().any(|n| n == "parallel-pair-over-arrow"), || format!("culf positives: {pos:?}"));
    t.check(neg.len() >= 4 && neg.iter().any(|n| n == "codegeneracy-2-1"), || format!("negatives: {neg:?}"));
    t.check(rfib >= 4, || format!("only {rfib} right fibrations"));
    Ok(())
}

fn decomposition_routes(cfg: &Config, t: &mut Tally) -> Result<()> {
    let (mut segal, mut nonsegal_untwisted, mut negative) = (0, 0, 0);
    for o in corpus::objects(cfg.dim)? {
        match is_decomposition(&o.value) {
            Ok(v) => {
                t.check(true, String::new);
                let s = holds(is_segal(&o.value))?;
                if v.holds && s {
                    segal += 1;
                }
                if v.holds && !s && o.name.starts_with("untwist") {
                    nonsegal_untwisted += 1;
                }
                if !v.holds {
                    negative += 1;
                }
            }
            Err(Error::RouteDisagreement(msg)) => t.check(false, || format!("{}: {msg}", o.name)),
            Err(e) => return Err(e),
        }
    }
    t.check(segal > 0 && nonsegal_untwisted > 0 && negative > 0, || {
        format!("coverage: {segal} Segal, {nonsegal_untwisted} untwisted non-Segal, {negative} negatives")
    });
    Ok(())
}

/// One untwisting case: the direction, the base, whether the roundtrip found
/// an isomorphism, and the checker verdicts on the untwisted map.
#[derive(Clone, Debug)]
struct RoundtripCase {
    label: String,
    iso: bool,
    culf: bool,
    decomposition: std::result::Result<bool, String>,
}

fn roundtrip_bases(cfg: &Config) -> Vec<&'static str> {
    if cfg.quick {
        vec!["poset-1", "poset-2"]
    } else {
        vec!["poset-1", "poset-2", "lattice-2x2"]
    }
}

fn untwisted_verdicts(label: String, iso: bool, y: &TruncSSet, q: &SMap) -> Result<RoundtripCase> {
    let culf = holds(is_culf(q))?;
    let decomposition = match is_decomposition(y) {
        Ok(v) => Ok(v.holds),
        Err(e) => Err(e.to_string()),
    };
    Ok(RoundtripCase { label, iso, culf, decomposition })
}

fn compute_roundtrips(cfg: &Config) -> Result<Vec<RoundtripCase>> {
    let mut out = Vec::new();
    let culf_maps: Vec<_> = maps(cfg)?.into_iter().filter(|m| is_culf(&m.value).is_ok_and(|v| v.holds)).collect();
    for base in roundtrip_bases(cfg) {
        let x = Arc::new(nerve(&*corpus::category(base)?, cfg.dim));
        let sx = Arc::new(sd(&x)?);
        let fc = fundamental_category(&sx, cfg.budget)?;
        for (i, p) in enumerate_presheaves(&Arc::new(fc.cat.clone()), 2).iter().enumerate() {
            let (_, proj) = rfib_from_presheaf(&sx, &fc, p)?;
            let (y, q) = untwist(&proj, &x)?;
            let iso = find_isomorphism_over(&sd_of_map(&q)?, &proj).is_some();
            out.push(untwisted_verdicts(format!("presheaf {i} over {base}"), iso, &y, &q)?);
        }
        for m in culf_maps.iter().filter(|m| **m.value.target() == *x) {
            let (y, q) = untwist(&sd_of_map(&m.value)?, &x)?;
            let iso = find_isomorphism_over(&q, &m.value).is_some();
            out.push(untwisted_verdicts(format!("{} over {base}", m.name), iso, &y, &q)?);
        }
    }
    Ok(out)
}

type RoundtripCache = Mutex<HashMap<(usize, bool, usize), Arc<Vec<RoundtripCase>>>>;

/// The roundtrip sweep is shared by two criteria, so it is computed once.
fn roundtrips(cfg: &Config) -> Result<Arc<Vec<RoundtripCase>>> {
    static CACHE: OnceLock<RoundtripCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (cfg.dim, cfg.quick, cfg.budget);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(compute_roundtrips(cfg)?);
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

fn untwist_roundtrips(cfg: &Config, t: &mut Tally) -> Result<()> {
    let cases = roundtrips(cfg)?;
    for c in cases.iter() {
        t.check(c.iso, || format!("{}: no isomorphism", c.label));
    }
    let over_maps = cases.iter().filter(|c| !c.label.starts_with("presheaf")).count();
    t.check(over_maps > 0, || "no corpus culf maps over the bases".into());
    Ok(())
}

fn untwist_outputs(cfg: &Config, t: &mut Tally) -> Result<()> {
    for c in roundtrips(cfg)?.iter() {
        t.check(c.culf, || format!("{}: not culf", c.label));
        t.check(c.decomposition == Ok(true), || format!("{}: decomposition {:?}", c.label, c.decomposition));
    }
    Ok(())
}

/// Composite `f_k ∘ ... ∘ f_{i+1}` applied to `v`.
fn push_forward(maps: &[OrdinalMap], from: usize, v: usize) -> usize {
    maps[from..].iter().fold(v, |acc, f| f.apply(acc))
}

struct SegmentSearch {
    /// All maps `[a] -> [b]` for `a, b <= n_max`.
    maps: Vec<Vec<Vec<OrdinalMap>>>,
    /// Filler found by exhaustive search, keyed by the composite it extends.
    lower_fill: HashMap<OrdinalMap, Vec<OrdinalMap>>,
    middle_fill: HashMap<OrdinalMap, Vec<OrdinalMap>>,
    k_max: usize,
    n_max: usize,
}

impl SegmentSearch {
    /// Every last-point-preserving `v : [j] -> [n]` with `v ∘ d^top = w`.
    fn lower_fillers(&mut self, w: &OrdinalMap) -> Vec<OrdinalMap> {
        let (j, n) = (w.dom() + 1, w.cod());
        let maps = &self.maps;
        self.lower_fill
            .entry(w.clone())
            .or_insert_with(|| {
                maps[j][n]
                    .iter()
                    .filter(|v| v.is_last_point_preserving() && v.after(&OrdinalMap::d_top(j - 1)).unwrap() == *w)
                    .cloned()
                    .collect()
            })
            .clone()
    }

    /// Every active `v : Q[j] -> [n]` with `v ∘ Q(d^top) = w`.
    fn middle_fillers(&mut self, w: &OrdinalMap) -> Vec<OrdinalMap> {
        let j = (w.dom() + 1) / 2;
        let n = w.cod();
        let qd = q_on_map(&OrdinalMap::d_top(j - 1));
        self.middle_fill
            .entry(w.clone())
            .or_insert_with(|| {
                all_maps(2 * j + 1, n).into_iter().filter(|v| v.is_active() && v.after(&qd).unwrap() == *w).collect()
            })
            .clone()
    }

    fn visit(&mut self, t: &mut Tally, chain: &mut Vec<OrdinalMap>, start: usize, beta: &OrdinalMap, alpha: &OrdinalMap) {
        let k = chain.len();
        let c = Chain::new(start, chain.clone()).expect("composable");
        let end = c.end();
        // lower segments: i ↦ f_k ⋯ f_{i+1}(n_i)
        let lower: Vec<usize> = (0..=k).map(|i| push_forward(chain, i, c.ordinal(i))).collect();
        let mut middle = vec![0; 2 * k + 2];
        for i in 0..=k {
            middle[k - i] = push_forward(chain, i, 0);
            middle[k + 1 + i] = lower[i];
        }
        let (b, a) = (lower_segments(&c), middle_segments(&c));
        t.check(b.images() == lower && *beta == b, || format!("lower segments of {chain:?}"));
        t.check(a.images() == middle && *alpha == a, || format!("middle segments of {chain:?}"));
        t.check(q_on_map(&b) == middle_segments(&c.twisted()), || format!("Q(B(f)) vs A(Q(f)) at {chain:?}"));
        if k == self.k_max {
            return;
        }
        for n in 0..=self.n_max {
            for fi in 0..self.maps[end][n].len() {
                let f = self.maps[end][n][fi].clone();
                let lf = self.lower_fillers(&f.after(beta).unwrap());
                let mf = self.middle_fillers(&f.after(alpha).unwrap());
                t.check(lf.len() == 1 && mf.len() == 1, || {
                    format!("{} lower and {} middle fillers after {chain:?} then {f}", lf.len(), mf.len())
                });
                if lf.len() != 1 || mf.len() != 1 {
                    continue;
                }
                chain.push(f);
                self.visit(t, chain, start, &lf[0], &mf[0]);
                chain.pop();
            }
        }
    }
}

fn segments(cfg: &Config, t: &mut Tally) -> Result<()> {
    let (k_max, n_max) = if cfg.quick { (2, 3) } else { (3, 4) };
    let maps = (0..=n_max)
        .map(|a| (0..=n_max).map(|b| all_maps(a, b)).collect())
        .collect();
    let mut s = SegmentSearch { maps, lower_fill: HashMap::new(), middle_fill: HashMap::new(), k_max, n_max };
    for n0 in 0..=n_max {
        let beta = OrdinalMap::vertex(n0, n0)?;
        let alpha = OrdinalMap::long_edge(n0);
        s.visit(t, &mut Vec::new(), n0, &beta, &alpha);
    }
    Ok(())
}

/// Maps small enough to materialize `Nel` at low degree.
fn small_maps() -> Result<Vec<corpus::Named<SMap>>> {
    Ok(corpus::maps(3)?
        .into_iter()
        .filter(|m| m.value.source().level_len(3) <= 40 && m.value.target().level_len(3) <= 40)
        .collect())
}

fn cartesian_squares(cfg: &Config, t: &mut Tally) -> Result<()> {
    let mut lambda_failures = 0;
    for m in maps(cfg)? {
        let p = &m.value;
        if holds(is_right_fibration(p))? {
            let v = xi_square_holds(p)?;
            t.check(v.holds, || format!("{}: ξ-square {:?}", m.name, v.witness));
        }
        let culf = holds(is_culf(p))?;
        let lam = holds(lambda_square_holds(p))?;
        t.check(lam == culf, || format!("{}: λ-square {lam}, culf {culf}", m.name));
        if !culf && !lam {
            lambda_failures += 1;
        }
    }
    t.check(lambda_failures > 0, || "no non-culf map fails the λ-square".into());
    // the same squares, materialized in low degrees
    for m in small_maps()? {
        let p = &m.value;
        if holds(is_right_fibration(p))? {
            for d in 0..=2 {
                t.check(is_pullback_square(&xi_square(p, d)?)?.holds, || format!("{}: materialized ξ-square {d}", m.name));
            }
        }
        let culf = holds(is_culf(p))?;
        let explicit = is_pullback_square(&lambda_square(p, 0)?)?.holds && is_pullback_square(&lambda_square(p, 1)?)?.holds;
        t.check(explicit == culf, || format!("{}: materialized λ-squares {explicit}, culf {culf}", m.name));
    }
    // η' squares in degrees 0..=2, for culf maps between small objects
    let mut eta_maps = 0;
    for m in maps(cfg)? {
        let p = &m.value;
        if p.target().level_len(3) > 20 || !holds(is_culf(p))? {
            continue;
        }
        for sq in eta_prime_squares(p, 2)? {
            t.check(is_pullback_square(&sq)?.holds, || format!("{}: {}", m.name, sq.label));
        }
        eta_maps += 1;
    }
    t.check(eta_maps >= 4, || format!("η' squares checked on only {eta_maps} culf maps"));
    Ok(())
}

fn units_and_counits(cfg: &Config, t: &mut Tally) -> Result<()> {
    for n in 0..=3 {
        let eta = eta_representable(n)?;
        for i in 0..=n {
            let name = eta.target().object_name(eta.obj(i)).to_string();
            t.check(name == format!("{}<={}", n - i, n + i + 1), || format!("η at {n}: {i} ↦ {name}"));
        }
        t.check(is_final_functor(&eta).holds, || format!("η at {n} is not final"));
        t.check(preserves_terminal(&eta), || format!("η at {n} does not preserve the terminal object"));
        let s = eta_representable_smap(n, 3)?;
        t.check(s.first_violation().is_none(), || format!("η at {n} is not simplicial"));
    }
    for n in 0..=2 {
        let eps = counit_representable(n, cfg.dim)?;
        let amb = is_ambifinal(&eps, cfg.budget)?;
        t.check(amb, || format!("counit at {n} has a nontrivial culf part"));
    }
    Ok(())
}

/// Corpus categories with at most three objects.
fn small_categories() -> Vec<(&'static str, Arc<FinCat>)> {
    corpus::categories().into_iter().filter(|(_, c)| c.num_objects() <= 3).map(|(n, c)| (n, Arc::new(c))).collect()
}

fn comprehensive_cases(cfg: &Config, cap: usize) -> Vec<(String, Functor)> {
    let cats = small_categories();
    let mut out = Vec::new();
    let cap = if cfg.quick { cap / 10 } else { cap };
    'outer: for (a, c) in &cats {
        for (b, d) in &cats {
            for (i, f) in enumerate_functors(c, d, Some(cap - out.len())).into_iter().enumerate() {
                out.push((format!("{a} -> {b} #{i}"), f));
                if out.len() == cap {
                    break 'outer;
                }
            }
        }
    }
    out
}

fn comprehensive(cfg: &Config, t: &mut Tally) -> Result<()> {
    for (name, f) in comprehensive_cases(cfg, 500) {
        let fa = comprehensive_factorize_functor(&f)?;
        t.check(fa.composes_to(&f), || format!("{name}: composite differs"));
        t.check(fa.right.is_discrete_fibration(), || format!("{name}: right part is not a discrete fibration"));
        t.check(is_final_functor(&fa.left).holds, || format!("{name}: left part is not final"));
        let ps = enumerate_presheaves(fa.middle(), 2);
        for (i, p) in ps.iter().enumerate() {
            let counts = functor_filler_counts(&fa.left, p);
            t.check(counts.iter().all(|&c| c == 1), || format!("{name}: filler counts {counts:?} against presheaf {i}"));
        }
        // the nerve of the right part is the reflection of the nerve
        let nf = nerve_map(&f, 3);
        let refl = rfib_reflection(&nf, cfg.budget)?;
        let nr = nerve_map(&fa.right, 3);
        t.check(find_isomorphism_over(&nr, &refl.projection).is_some(), || format!("{name}: nerve of the right part differs"));
    }
    Ok(())
}

fn rezk_package(cfg: &Config, t: &mut Tally) -> Result<()> {
    let objects = corpus::objects(cfg.dim)?;
    let mut good = Vec::new();
    for o in &objects {
        let x = &o.value;
        if !holds(is_decomposition(x))? || !holds(is_rezk_complete(x))? {
            continue;
        }
        good.push(x.clone());
        t.check(is_pullback_square(&rezk_square(x)?)?.holds, || format!("{}: equivalence square", o.name));
        let s = sd(x)?;
        t.check(holds(is_segal(&s))? && holds(is_rezk_complete(&s))?, || format!("{}: Sd is not a Rezk complete Segal object", o.name));
    }
    let mut culf_into = 0;
    for m in maps(cfg)? {
        let p = &m.value;
        if !good.iter().any(|x| **x == **p.target()) || !holds(is_culf(p))? {
            continue;
        }
        culf_into += 1;
        let y = p.source();
        t.check(holds(is_decomposition(y))? && holds(is_rezk_complete(y))?, || format!("{}: source", m.name));
    }
    t.check(culf_into > 0, || "no culf maps into Rezk complete decomposition objects".into());
    Ok(())
}

fn dk_relative_complete(_cfg: &Config, t: &mut Tally) -> Result<()> {
    let cats: Vec<_> =
        corpus::categories().into_iter().filter(|(_, c)| c.num_objects() <= 3 && c.num_morphisms() <= 6).map(|(n, c)| (n, Arc::new(c))).collect();
    for (a, c) in &cats {
        for (b, d) in &cats {
            for f in enumerate_functors(c, d, None) {
                let iso = nerve_map(&f, 2).is_levelwise_bijective();
                let dk = is_dk_equivalence(&f).holds;
                let rc = is_relative_complete(&f).holds;
                t.check(iso == (dk && rc), || format!("{a} -> {b} {:?}: iso {iso}, DK {dk}, relative complete {rc}", f.on_objects()));
                let (out, inc) = (relative_complete_direction(&f, true).holds, relative_complete_direction(&f, false).holds);
                t.check(out == inc, || format!("{a} -> {b}: the two endpoint inclusions disagree"));
            }
        }
    }
    let named: HashMap<String, Functor> = corpus::functors().into_iter().map(|f| (f.name, f.value)).collect();
    let e = &named["iso-to-point"];
    t.check(is_dk_equivalence(e).holds && !is_relative_complete(e).holds, || "E(1) -> 1".into());
    let v = &named["vertex-0-of-arrow"];
    t.check(!is_dk_equivalence(v).holds && is_relative_complete(v).holds, || "{0} -> [1]".into());
    Ok(())
}

fn culfy_righteous(cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in maps(cfg)? {
        let p = &m.value;
        let (c, cy) = (holds(is_culf(p))?, holds(is_culfy_smap(p))?);
        t.check(c == cy, || format!("{}: culf {c}, culfy {cy}", m.name));
        let (r, ry) = (holds(is_right_fibration(p))?, holds(is_righteous_smap(p))?);
        t.check(r == ry, || format!("{}: right fibration {r}, righteous {ry}", m.name));
    }
    // on materialized categories of elements
    for m in small_maps()? {
        let p = &m.value;
        let (_, ex, fib) = smap_to_discfib(p)?;
        let (c, cy) = (holds(is_culf(p))?, holds(is_culfy(&fib, &ex))?);
        t.check(c == cy, || format!("{}: culf {c}, culfy {cy} on el", m.name));
        let (r, ry) = (holds(is_right_fibration(p))?, holds(is_righteous(&fib, &ex))?);
        t.check(r == ry, || format!("{}: right fibration {r}, righteous {ry} on el", m.name));
    }
    Ok(())
}

fn property_verdict(p: Property, m: Option<&SMap>, x: Option<&TruncSSet>) -> Result<bool> {
    match (p, m, x) {
        (Property::Culf, Some(m), _) => holds(is_culf(m)),
        (Property::RightFibration, Some(m), _) => holds(is_right_fibration(m)),
        (Property::LeftFibration, Some(m), _) => holds(is_left_fibration(m)),
        (Property::Segal, _, Some(x)) => holds(is_segal(x)),
        (Property::Decomposition, _, Some(x)) => holds(is_decomposition(x)),
        (Property::RezkComplete, _, Some(x)) => holds(is_rezk_complete(x)),
        _ => Err(Error::InvalidInput(format!("{p:?} does not apply"))),
    }
}

fn corpus_claims(cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in maps(cfg)? {
        for &(p, want) in &m.claims {
            let got = property_verdict(p, Some(&m.value), None)?;
            t.check(got == want, || format!("{}: {p:?} is {got}", m.name));
        }
    }
    for o in corpus::objects(cfg.dim)? {
        for &(p, want) in &o.claims {
            let got = property_verdict(p, None, Some(&o.value))?;
            t.check(got == want, || format!("{}: {p:?} is {got}", o.name));
        }
    }
    let looped = corpus::loop_sset(3)?;
    t.check(matches!(fundamental_category(&looped, cfg.budget), Err(Error::BudgetExceeded { .. })), || {
        "the loop has a finite fundamental category".into()
    });
    Ok(())
}

fn degeneracy_square(cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in maps(cfg)? {
        if holds(is_culf(&m.value))? {
            t.check(holds(culf_degeneracy_square(&m.value))?, || m.name.clone());
        }
    }
    Ok(())
}

fn q_prime_convention(cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in maps(cfg)? {
        let culf = holds(is_culf(&m.value))?;
        let left = holds(is_left_fibration(&sd_of_map_with(&m.value, Convention::QPrime)?))?;
        t.check(culf == left, || format!("{}: culf {culf}, primed left fibration {left}", m.name));
    }
    Ok(())
}

fn final_vs_orthogonal(_cfg: &Config, t: &mut Tally) -> Result<()> {
    for f in corpus::functors() {
        let fin = is_final_functor(&f.value).holds;
        let orth = enumerate_presheaves(f.value.target(), 2)
            .iter()
            .all(|p| functor_filler_counts(&f.value, p).iter().all(|&c| c == 1));
        t.check(fin == orth, || format!("{}: final {fin}, orthogonal {orth}", f.name));
    }
    Ok(())
}

fn segal_lifts(cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in maps(cfg)? {
        let p = &m.value;
        if holds(is_right_fibration(p))? && holds(is_segal(p.target()))? {
            t.check(holds(is_segal(p.source()))?, || m.name.clone());
        }
    }
    Ok(())
}

fn d0_square(cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in maps(cfg)? {
        let p = &m.value;
        if holds(is_segal(p.source()))? && holds(is_segal(p.target()))? {
            let d0 = holds(is_cartesian_on(p, &OrdinalMap::coface(1, 0)?))?;
            let rf = holds(is_right_fibration(p))?;
            t.check(d0 == rf, || format!("{}: d0 square {d0}, right fibration {rf}", m.name));
        }
    }
    Ok(())
}

fn slices_intervals(_cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in corpus::maps(5)? {
        let p = &m.value;
        let y = p.source();
        let slices = (0..y.level_len(0)).map(|v| slice_map(p, v).map(|s| s.is_levelwise_bijective())).collect::<Result<Vec<_>>>()?;
        let rf = holds(is_right_fibration(p))?;
        t.check(rf == slices.iter().all(|&b| b), || format!("{}: slices vs right fibration", m.name));
        let intervals = (0..y.level_len(1)).map(|f| interval_map(p, f).map(|s| s.is_levelwise_bijective())).collect::<Result<Vec<_>>>()?;
        let culf = holds(is_culf(p))?;
        t.check(culf == intervals.iter().all(|&b| b), || format!("{}: intervals vs culf", m.name));
    }
    Ok(())
}

fn pasting(cfg: &Config, t: &mut Tally) -> Result<()> {
    for o in corpus::objects(cfg.dim)? {
        let a = holds(decomposition_route_a(&o.value, cfg.dim))?;
        let all = holds(decomposition_route_a_exhaustive(&o.value, cfg.dim))?;
        t.check(a == all, || format!("{}: generating {a}, all squares {all}", o.name));
    }
    Ok(())
}

fn twisted_arrow_nerves(_cfg: &Config, t: &mut Tally) -> Result<()> {
    for (name, c) in corpus::categories() {
        let a = Arc::new(sd(&nerve(&c, 7))?);
        let b = Arc::new(nerve(&twisted_arrow(&c), 3));
        t.check(are_isomorphic(&a, &b), || format!("{name}: Sd N(C) is not N(Tw C)"));
        let fc = fundamental_category(&nerve(&c, 2), DEFAULT_BUDGET)?;
        let n1 = Arc::new(nerve(&fc.cat, 2));
        t.check(are_isomorphic(&n1, &Arc::new(nerve(&c, 2))), || format!("{name}: fundamental category of the nerve"));
    }
    Ok(())
}

fn xi_final(cfg: &Config, t: &mut Tally) -> Result<()> {
    for name in ["simplex-1", "horn-2-1", "nerve-poset-1", "nerve-z2"] {
        let x = match corpus::lookup(name, 3)? {
            corpus::Item::SSet(x) => x,
            _ => unreachable!(),
        };
        let r = rfib_reflection(&xi(&x, 2)?, cfg.budget)?;
        t.check(r.projection.is_levelwise_bijective(), || format!("{name}: reflection of ξ is not trivial"));
    }
    Ok(())
}

fn q_star_rfib(_cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in corpus::maps(3)? {
        let p = &m.value;
        if !holds(is_right_fibration(p))? || p.target().level_len(3) > 20 {
            continue;
        }
        let qr = q_star(p.source(), 2)?;
        let qw = q_star(p.target(), 2)?;
        let qp = q_star_map(p, &qr, &qw)?;
        t.check(holds(is_culf(&qp))?, || format!("{}: Q_* of it is not culf", m.name));
    }
    Ok(())
}

fn two_inverses(cfg: &Config, t: &mut Tally) -> Result<()> {
    let x = Arc::new(nerve(&FinCat::ordinal(1), 7));
    let sx = Arc::new(sd(&x)?);
    let fc = fundamental_category(&sx, cfg.budget)?;
    let qsx = q_star(&sx, 2)?;
    let eta = eta_prime(&x, &qsx)?.truncate(2);
    for p in enumerate_presheaves(&Arc::new(fc.cat.clone()), 2) {
        let (r, proj) = rfib_from_presheaf(&sx, &fc, &p)?;
        let (_, q) = untwist(&proj, &x)?;
        let qr = q_star(&r, 2)?;
        let qp = q_star_map(&proj, &qr, &qsx)?;
        let (_, pulled, _) = pullback(&eta, &qp)?;
        t.check(find_isomorphism_over(&pulled, &q.truncate(2)).is_some(), || format!("presheaf {:?}", p.sizes()));
    }
    Ok(())
}

fn adjunction(_cfg: &Config, t: &mut Tally) -> Result<()> {
    for (xname, wname) in [("simplex-1", "nerve-cospan"), ("horn-2-1", "nerve-poset-1"), ("simplex-1", "nerve-z2")] {
        let w = match corpus::lookup(wname, 3)? {
            corpus::Item::SSet(w) => w,
            _ => unreachable!(),
        };
        let x7 = match corpus::lookup(xname, 7)? {
            corpus::Item::SSet(x) => x,
            _ => unreachable!(),
        };
        let x3 = Arc::new(x7.truncate(3));
        let left = count_smaps(&Arc::new(sd(&x7)?), &w);
        let qw = q_star(&w, 3)?;
        let right = count_smaps(&x3, &qw.sset);
        t.check(left == right, || format!("{xname}, {wname}: {left} vs {right}"));
    }
    Ok(())
}

fn culf_reflection_examples(cfg: &Config, t: &mut Tally) -> Result<()> {
    for m in maps(cfg)? {
        if m.value.target().level_len(3) > 20 || !holds(is_culf(&m.value))? {
            continue;
        }
        let fa = culf_reflection(&m.value, cfg.budget)?;
        t.check(fa.left.is_levelwise_bijective(), || format!("{}: ambifinal part of a culf map", m.name));
    }
    let (one, two) = (Arc::new(FinCat::ordinal(1)), Arc::new(FinCat::ordinal(2)));
    let active = nerve_map(&monotone(&one, &two, &[0, 2])?, cfg.dim);
    let fa = culf_reflection(&active, cfg.budget)?;
    t.check(fa.right.is_levelwise_bijective(), || "active [1] -> [2] has a nontrivial culf part".into());
    let point = Arc::new(FinCat::ordinal(0));
    let last = nerve_map(&monotone(&point, &one, &[1])?, cfg.dim);
    let fa = culf_reflection(&last, cfg.budget)?;
    t.check(holds(is_culf(&fa.right))? && fa.composes_to(&last), || "last vertex of [1]".into());
    Ok(())
}

/// The functor between posets given on objects.
fn monotone(c: &Arc<FinCat>, d: &Arc<FinCat>, objects: &[usize]) -> Result<Functor> {
    let on_morphisms = c.morphisms().iter().map(|m| d.hom(objects[m.src], objects[m.tgt])[0]).collect();
    Functor::new(c.clone(), d.clone(), objects.to_vec(), on_morphisms)
}

fn random_chains(cfg: &Config, t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rounds = if cfg.quick { 200 } else { 2000 };
    for _ in 0..rounds {
        let k = rng.random_range(1..=5);
        let mut n = rng.random_range(0..=6);
        let start = n;
        let mut ms = Vec::new();
        for _ in 0..k {
            let m = rng.random_range(0..=6);
            let mut images: Vec<usize> = (0..=n).map(|_| rng.random_range(0..=m)).collect();
            images.sort_unstable();
            ms.push(OrdinalMap::from_images(m, &images)?);
            n = m;
        }
        let c = Chain::new(start, ms)?;
        t.check(q_on_map(&lower_segments(&c)) == middle_segments(&c.twisted()), || format!("{:?}", c.maps()));
    }
    Ok(())
}

fn rfib_closure(_cfg: &Config, t: &mut Tally) -> Result<()> {
    let cats: Vec<_> =
        corpus::categories().into_iter().filter(|(_, c)| c.num_morphisms() <= 5).map(|(n, c)| (n, Arc::new(c))).collect();
    let rf = |f: &Functor| -> Result<bool> { holds(is_right_fibration(&nerve_map(f, 3))) };
    for (a, c) in &cats {
        for (b, d) in &cats {
            for f in enumerate_functors(c, d, Some(20)) {
                for (e, x) in &cats {
                    for g in enumerate_functors(d, x, Some(20)) {
                        let gf = Functor::compose(&g, &f)?;
                        let (rf_f, rf_g, rf_gf) = (rf(&f)?, rf(&g)?, rf(&gf)?);
                        t.check(!(rf_f && rf_g) || rf_gf, || format!("{a} -> {b} -> {e}: composite"));
                        t.check(!(rf_g && rf_gf) || rf_f, || format!("{a} -> {b} -> {e}: cancellation"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn dec_commute(cfg: &Config, t: &mut Tally) -> Result<()> {
    for o in corpus::objects(cfg.dim)? {
        let a = Arc::new(dec_bot(&dec_top(&o.value)?)?);
        let b = Arc::new(dec_top(&dec_bot(&o.value)?)?);
        t.check(are_isomorphic(&a, &b), || o.name.clone());
    }
    Ok(())
}

fn lambda_active_edges(_cfg: &Config, t: &mut Tally) -> Result<()> {
    for o in corpus::objects(3)? {
        let x = &o.value;
        if x.level_len(3) > 100 {
            continue;
        }
        let l = lambda(x, 1)?;
        let e = el(x);
        for (i, c) in el_chains(&e, 1)[1].iter().enumerate() {
            if c.chain.maps()[0].is_active() {
                t.check(l.target().is_degenerate(1, l.apply(1, i)), || format!("{}: edge {i}", o.name));
            }
        }
    }
    Ok(())
}

/// Maps between two small objects, for spot checks.
pub fn all_maps_between(a: &Arc<TruncSSet>, b: &Arc<TruncSSet>) -> Vec<SMap> {
    enumerate_smaps(a, b, &MapSearch::default())
}

/// Yoneda: maps `Δ^n -> X` are `X_n`.
pub fn yoneda_holds(x: &Arc<TruncSSet>, n: usize) -> bool {
    count_smaps(&Arc::new(representable(n, x.dim())), x) == x.level_len(n)
}

pub fn run_all(cfg: &Config, with_invariants: bool) -> Vec<Outcome> {
    let mut checks = criteria();
    if with_invariants {
        checks.extend(invariants());
    }
    checks.iter().map(|c| c.run(cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_keeps_failures() {
        let mut t = Tally::default();
        t.check(true, || unreachable!());
        t.check(false, || "x".into());
        assert_eq!((t.cases, t.failed, t.failures.len()), (2, 1, 1));
    }
}
