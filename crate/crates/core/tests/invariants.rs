use std::collections::HashSet;

use grasscode::designs::{spread_construct, verify_code};
use grasscode::matcher::{greedy_matching, nibble_matching, IncidenceIndex};
use grasscode::rng::SeededRng;
use grasscode::{FieldSpec, Space, Subspace, SubspaceCode};
use proptest::prelude::*;

fn space(q: u32, n: usize) -> Space {
    let (p, e) = grasscode::field::parse_order(&q.to_string()).unwrap();
    Space::new(FieldSpec::build(p, e, None).unwrap(), n)
}

fn q_binom(q: u64, n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut row = vec![1u64];
    for m in 1..=n {
        let mut next = vec![1u64; m + 1];
        for j in 1..m {
            next[j] = row[j - 1] + q.pow(j as u32) * row[j];
        }
        row = next;
    }
    row[k]
}

/// Dimension of an intersection from the number of shared vectors.
fn intersection_dim_by_vectors(s: &Space, u: &Subspace, v: &Subspace) -> usize {
    let a: HashSet<Vec<u32>> = s.vectors(u).collect();
    let shared = s.vectors(v).filter(|x| a.contains(x)).count() as u64;
    (0..).find(|&d| s.q().pow(d as u32) == shared).unwrap()
}

#[test]
fn sampled_degrees_and_codegrees() {
    for (q, n, k, delta) in [
        (2u32, 6usize, 3usize, 1usize),
        (3, 4, 2, 1),
        (2, 5, 3, 2),
        (4, 3, 2, 1),
    ] {
        let s = space(q, n);
        let idx = IncidenceIndex::build(&s, k, delta).unwrap();
        let v = idx.vertex_count();
        assert_eq!(v, q_binom(q as u64, n, k - delta));
        let mut rng = SeededRng::new(q as u64 * 100 + n as u64);
        for _ in 0..100 {
            let a = rng.below(v) as u32;
            let degree = idx.vertex_degree(a).unwrap();
            assert_eq!(degree, q_binom(q as u64, n - (k - delta), delta).into());
            let b = rng.below(v) as u32;
            if a != b {
                idx.pair_codegree(a, b).unwrap();
            }
        }
    }
}

#[test]
fn matchings_are_vertex_disjoint() {
    let s = space(3, 4);
    let idx = IncidenceIndex::build(&s, 2, 1).unwrap();
    for seed in 0..3 {
        for m in [
            greedy_matching(&idx, seed).unwrap(),
            nibble_matching(&idx, seed, 0.2, 5).unwrap(),
        ] {
            let mut seen = HashSet::new();
            for e in &m.edges {
                for id in idx.expand(e) {
                    assert!(seen.insert(id), "vertex {id} covered twice");
                }
            }
            assert_eq!(m.uncovered, idx.vertex_count() - seen.len() as u64);
        }
    }
}

#[test]
fn verify_code_agrees_with_vector_counting() {
    let s = space(2, 5);
    let all: Vec<Subspace> = s.enumerate(2).unwrap().collect();
    let mut rng = SeededRng::new(11);
    for _ in 0..40 {
        let picks: Vec<Subspace> = (0..6)
            .map(|_| all[rng.below(all.len() as u64) as usize].clone())
            .collect();
        let code = SubspaceCode::new(&s, 2, picks).unwrap();
        let m = code.members();
        let mut min = None::<usize>;
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                let d = 2 * (2 - intersection_dim_by_vectors(&s, &m[i], &m[j]));
                min = Some(min.map_or(d, |x| x.min(d)));
            }
        }
        let report = verify_code(&code, 4).unwrap();
        assert_eq!(report.min_distance, min);
        assert_eq!(report.valid, min.is_none_or(|d| d >= 4));
    }
}

#[test]
fn emitted_codes_reparse() {
    for (q, n, k) in [
        (2u32, 4usize, 2usize),
        (3, 4, 2),
        (4, 4, 2),
        (8, 2, 1),
        (9, 2, 1),
        (2, 6, 3),
    ] {
        let code = spread_construct(&space(q, n), k).unwrap();
        let text = code.to_file_string().unwrap();
        let back = SubspaceCode::parse(&text).unwrap();
        assert_eq!(back, code);
        assert_eq!(back.to_file_string().unwrap(), text);
        assert!(verify_code(&back, 2 * k).unwrap().valid);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_codes_round_trip(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 4, 5]), n in 1usize..5) {
        let s = space(q, n);
        let mut rng = SeededRng::new(seed);
        let k = rng.below(n as u64 + 1) as usize;
        let members: Vec<Subspace> = (0..5)
            .map(|_| {
                let rows: Vec<Vec<u32>> = (0..k)
                    .map(|_| (0..n).map(|_| rng.below(q as u64) as u32).collect())
                    .collect();
                s.canonicalize(&rows).unwrap()
            })
            .filter(|u| u.dim() == k)
            .collect();
        let mut code = SubspaceCode::new(&s, k, members).unwrap();
        code.push_comment(format!("seed {seed}"));
        let text = code.to_file_string().unwrap();
        let back = SubspaceCode::parse(&text).unwrap();
        prop_assert_eq!(&back, &code);
        prop_assert_eq!(back.comments(), code.comments());
    }
}
