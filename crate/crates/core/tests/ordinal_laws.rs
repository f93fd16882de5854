//! Laws of the simplex category, checked against brute-force enumeration.

use sdkit::elements::segment_maps;
use sdkit::ordinal::*;

/// Every weakly monotone tuple of length `m + 1` in `0..=n`, built without
/// the library.
fn tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, lo: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(len, v, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m + 1, 0, n, &mut Vec::new(), &mut out);
    out
}

fn maps(m: usize, n: usize) -> Vec<OrdinalMap> {
    tuples(m, n).iter().map(|t| OrdinalMap::from_images(n, t).unwrap()).collect()
}

fn active(t: &[usize], n: usize) -> bool {
    t[0] == 0 && *t.last().unwrap() == n
}

fn inert(t: &[usize]) -> bool {
    t.windows(2).all(|w| w[1] == w[0] + 1)
}

#[test]
fn enumeration_matches_the_library() {
    for m in 0..=5 {
        for n in 0..=5 {
            assert_eq!(maps(m, n), all_maps(m, n), "[{m}] -> [{n}]");
        }
    }
}

#[test]
fn classes_are_closed_under_composition() {
    for a in 0..=5 {
        for b in 0..=5 {
            let fs = maps(a, b);
            for c in 0..=5 {
                for g in maps(b, c) {
                    for f in &fs {
                        let gf = compose(&g, f).unwrap();
                        let expect: Vec<usize> = f.images().iter().map(|&i| g.images()[i]).collect();
                        assert_eq!(gf.images(), &expect[..]);
                        if g.is_active() && f.is_active() {
                            assert!(gf.is_active());
                        }
                        if g.is_inert() && f.is_inert() {
                            assert!(gf.is_inert());
                        }
                    }
                }
            }
        }
        assert!(OrdinalMap::identity(a).is_active() && OrdinalMap::identity(a).is_inert());
    }
}

#[test]
fn classification_matches_definitions() {
    for m in 0..=4 {
        for n in 0..=4 {
            for t in tuples(m, n) {
                let c = classify(&OrdinalMap::from_images(n, &t).unwrap());
                assert_eq!(c.active, active(&t, n));
                assert_eq!(c.inert, inert(&t));
                assert_eq!(c.last_point_preserving, t[m] == n);
                assert_eq!(c.first_point_preserving, t[0] == 0);
                assert_eq!(c.injective, t.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(c.surjective, (0..=n).all(|v| t.contains(&v)));
            }
        }
    }
}

#[test]
fn factorizations_are_unique() {
    for m in 0..=4 {
        for n in 0..=4 {
            for f in maps(m, n) {
                let mut epi_mono = Vec::new();
                let mut act_inert = Vec::new();
                for k in 0..=4 {
                    for l in maps(m, k) {
                        for r in maps(k, n) {
                            if compose(&r, &l).unwrap() != f {
                                continue;
                            }
                            if l.is_surjective() && r.is_injective() {
                                epi_mono.push((l.clone(), r.clone()));
                            }
                            if l.is_active() && r.is_inert() {
                                act_inert.push((l.clone(), r.clone()));
                            }
                        }
                    }
                }
                assert_eq!(epi_mono, vec![epi_mono_factorize(&f)], "epi-mono of {f}");
                assert_eq!(act_inert, vec![active_inert_factorize(&f)], "active-inert of {f}");
            }
        }
    }
}

#[test]
fn twisting_is_a_functor() {
    for a in 0..=4 {
        assert_eq!(q_on_map(&OrdinalMap::identity(a)), OrdinalMap::identity(2 * a + 1));
        for b in 0..=4 {
            for f in maps(a, b) {
                let q = q_on_map(&f);
                // primes reversed first, then the original
                for j in 0..=a {
                    assert_eq!(q.apply(a - j), b - f.apply(j));
                    assert_eq!(q.apply(a + 1 + j), b + 1 + f.apply(j));
                }
                for c in 0..=4 {
                    for g in maps(b, c) {
                        let gf = compose(&g, &f).unwrap();
                        assert_eq!(q_on_map(&gf), compose(&q_on_map(&g), &q).unwrap());
                        assert_eq!(q_prime_on_map(&gf), compose(&q_prime_on_map(&g), &q_prime_on_map(&f)).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn twisting_sends_last_point_preserving_maps_to_active_ones() {
    for m in 0..=5 {
        for n in 0..=5 {
            for f in maps(m, n).into_iter().filter(OrdinalMap::is_last_point_preserving) {
                assert!(q_on_map(&f).is_active(), "{f}");
            }
        }
    }
}

/// Brute-force universal property: for every cocone `(u, v)` on the span
/// into some `[t]`, exactly one map out of the apex factors it.
fn is_pushout(sq: &PushoutSquare, t_max: usize) -> bool {
    let p = sq.apex();
    let commutes = compose(&sq.active_out, &sq.inert).unwrap() == compose(&sq.inert_out, &sq.active).unwrap();
    commutes
        && (0..=t_max).all(|t| {
            maps(sq.inert.cod(), t).iter().all(|u| {
                maps(sq.active.cod(), t).iter().all(|v| {
                    if compose(u, &sq.inert).unwrap() != compose(v, &sq.active).unwrap() {
                        return true;
                    }
                    let through = maps(p, t)
                        .into_iter()
                        .filter(|h| compose(h, &sq.active_out).unwrap() == *u && compose(h, &sq.inert_out).unwrap() == *v)
                        .count();
                    through == 1
                })
            })
        })
}

#[test]
fn pushouts_have_the_universal_property() {
    for sq in active_inert_pushouts(3) {
        assert!(is_pushout(&sq, 3), "{} along {}", sq.inert, sq.active);
    }
    let sq = PushoutSquare::new(&OrdinalMap::d_bot(1), &OrdinalMap::codegeneracy(0, 0).unwrap()).unwrap();
    assert_eq!(sq.apex(), 1);
}

#[test]
fn pushout_counts() {
    // independent count of (inert [m] >-> [n], active [m] -|-> [k]) with n - m + k <= bound
    let count = |bound: usize| {
        let mut c = 0;
        for n in 0..=bound {
            for m in 0..=n {
                for k in 0..=bound {
                    if n - m + k > bound {
                        continue;
                    }
                    let inerts = tuples(m, n).into_iter().filter(|t| inert(t)).count();
                    let actives = tuples(m, k).into_iter().filter(|t| active(t, k)).count();
                    c += inerts * actives;
                }
            }
        }
        c
    };
    for bound in 1..=4 {
        assert_eq!(active_inert_pushouts(bound).len(), count(bound));
    }
    assert_eq!(active_inert_pushouts(2).len(), 19);
    assert!(active_inert_pushouts(1).iter().any(|sq| sq.inert.is_identity() && sq.active.dom() == 1 && sq.active.is_identity()));
}

#[test]
fn generating_pushouts_are_pushouts() {
    for sq in generating_pushouts(4) {
        assert!(sq.inert.is_inert() && sq.active.is_active());
        assert!(sq.apex() <= 4);
        assert!(is_pushout(&sq, 2));
    }
    assert_eq!(generating_pushouts(3).len(), 8);
}

#[test]
fn segment_maps_exhaust_their_classes() {
    // lower segments give every last-point-preserving map out of [k], middle
    // segments every active map out of Q[k]
    for k in 0..=3 {
        let lpp: Vec<OrdinalMap> =
            (0..=4).flat_map(|n| maps(k, n)).filter(OrdinalMap::is_last_point_preserving).collect();
        let mut lower = segment_maps(k, 4, false);
        lower.sort();
        let mut lpp_sorted = lpp.clone();
        lpp_sorted.sort();
        assert_eq!(lower, lpp_sorted, "k = {k}");
    }
    for k in 0..=2 {
        let act: Vec<OrdinalMap> = (0..=5).flat_map(|n| maps(2 * k + 1, n)).filter(OrdinalMap::is_active).collect();
        let mut middle = segment_maps(k, 5, true);
        middle.sort();
        let mut act_sorted = act.clone();
        act_sorted.sort();
        assert_eq!(middle, act_sorted, "k = {k}");
    }
}
