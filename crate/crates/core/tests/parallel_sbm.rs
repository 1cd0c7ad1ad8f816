use std::collections::{BTreeSet, HashMap};

use ddm_core::matchers::match_sbm_seq;
use ddm_core::parallel_sbm::{
    build_endpoints, match_sbm_par, prefix_combine, segment_scan, sort_endpoints, BoundKind, Endpoint,
};
use ddm_core::{Interval, MatchMode, MatcherConfig, Role};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_intervals(rng: &mut ChaCha8Rng, n: usize, span: u32, max_len: u32) -> Vec<Interval> {
    (0..n)
        .map(|_| {
            let lo = (rng.next_u32() % span) as f64;
            let len = 1 + rng.next_u32() % max_len;
            Interval::new(lo, lo + len as f64).unwrap()
        })
        .collect()
}

// Positions of each region's endpoints in the sorted array.
fn positions(sorted: &[Endpoint]) -> HashMap<(Role, u32), (usize, usize)> {
    let mut lower = HashMap::new();
    let mut out = HashMap::new();
    for (i, e) in sorted.iter().enumerate() {
        match e.kind {
            BoundKind::Lower => {
                lower.insert((e.role, e.id), i);
            }
            BoundKind::Upper => {
                out.insert((e.role, e.id), (lower[&(e.role, e.id)], i));
            }
        }
    }
    out
}

fn ids(pos: &HashMap<(Role, u32), (usize, usize)>, role: Role, keep: impl Fn(usize, usize) -> bool) -> BTreeSet<u32> {
    pos.iter()
        .filter(|(k, &(lo, hi))| k.0 == role && keep(lo, hi))
        .map(|(k, _)| k.1)
        .collect()
}

#[test]
fn deltas_and_prefix_sets_match_positional_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..50 {
        let n = 50 + (rng.next_u32() % 400) as usize;
        let m = 50 + (rng.next_u32() % 400) as usize;
        let span = if trial % 2 == 0 { 60 } else { 10_000 };
        let subs = random_intervals(&mut rng, n, span, 40);
        let upds = random_intervals(&mut rng, m, span, 40);
        let mut e = build_endpoints(&subs, &upds, 1);
        sort_endpoints(&mut e, 1);
        let pos = positions(e.as_slice());
        for workers in [1, 2, 3, 4, 7, 8, 16] {
            let segs = e.segments(workers);
            let mut starts = vec![0];
            for s in &segs {
                starts.push(starts.last().unwrap() + s.len());
            }
            let deltas: Vec<_> = segs.iter().map(|s| segment_scan(s)).collect();
            let active = prefix_combine(&deltas);
            for p in 0..workers {
                let (a, b) = (starts[p], starts[p + 1]);
                let inside = |i: usize| a <= i && i < b;
                for (role, add, del) in [
                    (Role::Subscription, &deltas[p].sub_add, &deltas[p].sub_del),
                    (Role::Update, &deltas[p].upd_add, &deltas[p].upd_del),
                ] {
                    let want_add = ids(&pos, role, |lo, hi| inside(lo) && !inside(hi));
                    let want_del = ids(&pos, role, |lo, hi| inside(hi) && !inside(lo));
                    assert_eq!(add.iter().collect::<BTreeSet<_>>(), want_add);
                    assert_eq!(del.iter().collect::<BTreeSet<_>>(), want_del);
                    assert!(add.is_disjoint(del));
                }
                let open_at = |role| ids(&pos, role, |lo, hi| lo < a && a <= hi);
                assert_eq!(active.subs[p].iter().collect::<BTreeSet<_>>(), open_at(Role::Subscription));
                assert_eq!(active.upds[p].iter().collect::<BTreeSet<_>>(), open_at(Role::Update));
            }
        }
    }
}

#[test]
fn parallel_equals_sequential_with_heavy_ties() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..50 {
        let n = 5_000;
        // A coarse coordinate span forces many equal endpoints, so ties
        // straddle every segment boundary.
        let span = if trial % 3 == 0 { 50 } else { 1_000_000 };
        let subs = random_intervals(&mut rng, n, span, if span == 50 { 5 } else { 500 });
        let upds = random_intervals(&mut rng, n, span, if span == 50 { 5 } else { 500 });
        let seq = match_sbm_seq(&subs, &upds, &MatcherConfig::default());
        for workers in [1, 2, 3, 4, 7, 8, 16] {
            let cfg = MatcherConfig::with_workers(workers);
            assert_eq!(match_sbm_par(&subs, &upds, &cfg), seq, "trial {trial} P={workers}");
        }
        let counted = match_sbm_par(
            &subs,
            &upds,
            &MatcherConfig { workers: 4, mode: MatchMode::CountOnly, ..Default::default() },
        );
        assert_eq!(counted.count, seq.count);
    }
}

#[test]
fn more_workers_than_endpoints() {
    let subs = [Interval::new(0.0, 2.0).unwrap()];
    let upds = [Interval::new(1.0, 3.0).unwrap()];
    let r = match_sbm_par(&subs, &upds, &MatcherConfig::with_workers(16));
    assert_eq!(r.pairs, vec![(0, 0)]);
}

#[test]
fn endpoint_multiset_equals_region_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let subs = random_intervals(&mut rng, 300, 100, 20);
    let upds = random_intervals(&mut rng, 200, 100, 20);
    let mut e = build_endpoints(&subs, &upds, 4);
    assert_eq!(e.len(), 2 * 500);
    let mut got: Vec<f64> = e.as_slice().iter().map(|x| x.coord).collect();
    let mut want: Vec<f64> = subs.iter().chain(&upds).flat_map(|i| [i.lower(), i.upper()]).collect();
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    assert_eq!(got, want);
    let mut one = e.clone();
    sort_endpoints(&mut e, 4);
    sort_endpoints(&mut one, 1);
    assert!(e.is_sorted());
    assert_eq!(e.as_slice(), one.as_slice());
}
