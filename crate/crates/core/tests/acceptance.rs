//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Runs without the libtest harness.

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use grasscode::bounds::{
    bound_ratio, closed_form, covering_bound, gaussian_binomial, iterated_johnson,
    iterated_schonheim, packing_bound, ClosedForm,
};
use grasscode::cyclic::{cyclic_greedy_search, CharacteristicVector, CyclicSpace};
use grasscode::designs::{
    code_to_covering, covering_to_code, dual_code, lift_covering, spread_construct, turan_dual,
    verify_code, verify_covering, CoveringDesign, Design,
};
use grasscode::matcher::{greedy_matching, matching_to_code, nibble_matching, IncidenceIndex};
use grasscode::rng::SeededRng;
use grasscode::{FieldSpec, Space, Subspace, SubspaceCode};
use num_bigint::BigUint;
use num_rational::BigRational;

/// Gaussian binomial by the q-Pascal recurrence, independent of the library.
fn q_binom(q: u128, n: usize, k: usize) -> u128 {
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = vec![1u128; m + 1];
        for j in 1..m {
            next[j] = row[j - 1] + q.pow(j as u32) * row[j];
        }
        row = next;
    }
    if k > n {
        0
    } else {
        row[k]
    }
}

fn gf(q: u32) -> Space {
    let (p, e) = grasscode::field::parse_order(&q.to_string()).unwrap();
    Space::new(FieldSpec::build(p, e, None).unwrap(), 0)
}

fn space(q: u32, n: usize) -> Space {
    gf(q).with_ambient(n)
}

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

fn pairwise_distances(code: &SubspaceCode) -> Vec<usize> {
    let s = code.space();
    let m = code.members();
    let mut out = Vec::new();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            out.push(s.distance(&m[i], &m[j]).unwrap());
        }
    }
    out
}

fn criterion_1() {
    let s = space(2, 4);
    let spread = spread_construct(&s, 2).unwrap();
    assert_eq!(spread.len(), 5);
    let report = verify_code(&spread, 4).unwrap();
    assert!(report.valid);
    assert_eq!(report.min_distance, Some(4));
    let packing = packing_bound(2, 4, 2, 1).unwrap();
    let ratio = bound_ratio(&big(5), &BigRational::from_integer(packing.into())).unwrap();
    assert_eq!(ratio.exact, BigRational::from_integer(1.into()));
    // (q^n - 1)/(q^2 - 1) at even n
    assert_eq!(spread.len() as u128, (2u128.pow(4) - 1) / 3);
}

fn criterion_2() {
    for q in [2u32, 3] {
        for n in 0..=5 {
            let s = space(q, n);
            for k in 0..=n {
                let counted = s.enumerate(k).unwrap().count() as u128;
                assert_eq!(counted, q_binom(q as u128, n, k), "q={q} n={n} k={k}");
                assert_eq!(gaussian_binomial(q as u64, n, k).unwrap(), big(counted));
            }
        }
    }
    for (n, k, expected) in [(4, 2, 35u128), (5, 2, 155), (6, 3, 1395)] {
        let counted = space(2, n).enumerate(k).unwrap().count() as u128;
        assert_eq!(counted, expected);
        assert_eq!(gaussian_binomial(2, n, k).unwrap(), big(expected));
    }
}

fn criterion_3() {
    for q in [2u64, 3] {
        for n in 1..=12 {
            for k in 1..=n {
                for delta in 0..=k {
                    let p = packing_bound(q, n, k, delta).unwrap();
                    let j = iterated_johnson(q, n, k, delta).unwrap();
                    assert!(
                        j <= p,
                        "johnson {j} > packing {p} at q={q} n={n} k={k} delta={delta}"
                    );
                    let ratio_num = q_binom(q as u128, n, k - delta);
                    let ratio_den = q_binom(q as u128, k, k - delta);
                    assert_eq!(p, big(ratio_num / ratio_den));
                    let c = covering_bound(q, n, k, delta).unwrap();
                    assert_eq!(c, big(ratio_num.div_ceil(ratio_den)));
                    if delta < k {
                        let s = iterated_schonheim(q, n, k, k - delta).unwrap();
                        assert!(
                            s >= c,
                            "schonheim {s} < covering {c} at q={q} n={n} k={k} delta={delta}"
                        );
                    }
                }
            }
        }
    }
    assert_eq!(iterated_johnson(2, 6, 3, 1).unwrap(), big(90));
    assert_eq!(packing_bound(2, 6, 3, 1).unwrap(), big(93));
}

fn criterion_4() {
    let s = space(2, 5);
    let points: Vec<Subspace> = s.enumerate(1).unwrap().collect();
    let hyperplanes: Vec<Subspace> = s.enumerate(4).unwrap().collect();
    assert_eq!(hyperplanes.len(), 31);
    let covers: Vec<HashSet<usize>> = hyperplanes
        .iter()
        .map(|h| {
            (0..points.len())
                .filter(|&i| s.contains(h, &points[i]).unwrap())
                .collect()
        })
        .collect();
    let covers_all =
        |set: &[usize]| (0..points.len()).all(|p| set.iter().any(|&h| covers[h].contains(&p)));
    let mut best = None;
    'size: for size in 1..=3usize {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if covers_all(&idx) {
                best = Some((size, idx.clone()));
                break 'size;
            }
            let Some(i) = (0..size).rev().find(|&i| idx[i] < 31 - size + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let (size, witness) = best.expect("three hyperplanes through a common 3-space cover F_2^5");
    assert_eq!(size, 3);
    let value = closed_form(ClosedForm::CoveringLargeN { q: 2, t: 1, r: 1 })
        .unwrap()
        .value;
    // (q^((r+1)t) - 1)/(q^t - 1) with q=2, t=1, r=1
    assert_eq!(value, big(2u128.pow(2) - 1));
    assert_eq!(value, big(size as u128));

    let code = SubspaceCode::new(&s, 4, witness.iter().map(|&i| hyperplanes[i].clone())).unwrap();
    let cov = CoveringDesign::certify(code, 1).unwrap();
    let lifted = lift_covering(&cov).unwrap();
    assert_eq!(
        (
            lifted.len(),
            lifted.code().n(),
            lifted.code().k(),
            lifted.r()
        ),
        (3, 6, 5, 1)
    );
    assert!(verify_covering(lifted.code(), 1).unwrap().valid);
}

fn criterion_5() {
    let s = space(2, 4);
    let spread = spread_construct(&s, 2).unwrap();
    let cov = code_to_covering(&spread).unwrap();
    assert_eq!(cov.code().members(), spread.members());
    let upsilon = q_binom(2, 4, 1) as i128 - q_binom(2, 2, 1) as i128 * 5;
    assert_eq!(upsilon, 0);
    assert_eq!(cov.len() as i128, 5 + upsilon);
    let back = covering_to_code(&cov).unwrap();
    assert_eq!(back.members(), spread.members());
    assert_eq!(
        back.len() as i128,
        5 + q_binom(2, 4, 1) as i128 - q_binom(2, 2, 1) as i128 * 5
    );

    let s6 = space(2, 6);
    let idx = IncidenceIndex::build(&s6, 3, 1).unwrap();
    for seed in [1u64, 2, 3] {
        let code = matching_to_code(&greedy_matching(&idx, seed).unwrap(), &s6).unwrap();
        let m = code.len() as i128;
        let upsilon = q_binom(2, 6, 2) as i128 - q_binom(2, 3, 2) as i128 * m;
        assert!(upsilon >= 0);
        let cov = code_to_covering(&code).unwrap();
        assert!(verify_covering(cov.code(), 2).unwrap().valid);
        assert!((cov.len() as i128) <= m + upsilon);
        let c = cov.len() as i128;
        let pruned = covering_to_code(&cov).unwrap();
        assert!(verify_code(&pruned, 4).unwrap().valid);
        assert!(
            pruned.len() as i128 >= c + q_binom(2, 6, 2) as i128 - q_binom(2, 3, 2) as i128 * c
        );
    }
}

fn check_matching(n: usize, seeds: &[u64]) -> Vec<String> {
    let s = space(2, n);
    let idx = IncidenceIndex::build(&s, 3, 1).unwrap();
    let v = q_binom(2, n, 2);
    let l = q_binom(2, 3, 2);
    let floor = v.div_ceil(l * l) as usize;
    let packing = (v / l) as usize;
    let mut notes = Vec::new();
    for &seed in seeds {
        let runs = [
            (
                "greedy",
                greedy_matching(&idx, seed).unwrap(),
                greedy_matching(&idx, seed).unwrap(),
            ),
            (
                "nibble",
                nibble_matching(&idx, seed, 0.05, 50).unwrap(),
                nibble_matching(&idx, seed, 0.05, 50).unwrap(),
            ),
        ];
        for (name, a, b) in runs {
            let code = matching_to_code(&a, &s).unwrap();
            let report = verify_code(&code, 4).unwrap();
            assert!(report.valid, "{name} seed {seed} at n={n}");
            assert!(
                code.len() >= floor && code.len() <= packing,
                "{name}: size {}",
                code.len()
            );
            assert_eq!(a.uncovered as u128, v - l * code.len() as u128);
            let again = matching_to_code(&b, &s).unwrap();
            assert_eq!(
                code.to_file_string().unwrap(),
                again.to_file_string().unwrap()
            );
            notes.push(format!(
                "{name}@n={n},seed={seed}: {}/{packing}",
                code.len()
            ));
        }
    }
    notes
}

fn criterion_6() -> String {
    let mut notes = check_matching(6, &[42, 7]);
    notes.extend(check_matching(8, &[1]));
    assert_eq!(q_binom(2, 6, 2).div_ceil(49), 14);
    assert_eq!(q_binom(2, 8, 2).div_ceil(49), 221);
    assert_eq!(q_binom(2, 8, 2) / 7, 1542);
    notes.join(", ")
}

fn criterion_7() {
    let s4 = space(2, 4);
    let s6 = space(2, 6);
    let idx = IncidenceIndex::build(&s6, 3, 1).unwrap();
    let codes = vec![
        spread_construct(&s4, 2).unwrap(),
        spread_construct(&s6, 3).unwrap(),
        spread_construct(&s6, 2).unwrap(),
        matching_to_code(&greedy_matching(&idx, 5).unwrap(), &s6).unwrap(),
        spread_construct(&space(3, 4), 2).unwrap(),
    ];
    for code in &codes {
        let dual = dual_code(code).unwrap();
        // complements are taken memberwise; compare distances in member order
        let pairs_before = pairwise_distances(code);
        let s = code.space();
        let duals: Vec<Subspace> = code
            .members()
            .iter()
            .map(|m| s.orthogonal_complement(m).unwrap())
            .collect();
        let mut pairs_after = Vec::new();
        for i in 0..duals.len() {
            for j in i + 1..duals.len() {
                pairs_after.push(s.distance(&duals[i], &duals[j]).unwrap());
            }
        }
        assert_eq!(pairs_before, pairs_after);
        assert_eq!(dual.len(), code.len());
    }
    let spread = CoveringDesign::certify(spread_construct(&s4, 2).unwrap(), 1).unwrap();
    let t = turan_dual(&Design::Covering(spread.clone())).unwrap();
    let Design::Turan(td) = &t else {
        panic!("expected a Turán design")
    };
    assert_eq!(
        (td.len(), td.code().n(), td.k(), td.code().k()),
        (5, 4, 3, 2)
    );
    let back = turan_dual(&t).unwrap();
    assert_eq!(back, Design::Covering(spread));
}

fn criterion_8() {
    let s = space(2, 4);
    let cs = CyclicSpace::new(&s).unwrap();
    let subfield: Vec<Vec<u32>> = [0u64, 5, 10]
        .iter()
        .map(|&i| cs.ext().coords(cs.ext().alpha_pow(i)))
        .collect();
    let gf4 = s.canonicalize(&subfield).unwrap();
    let orbit = cs.orbit(&cs.to_field_repr(&gf4).unwrap());
    assert_eq!(orbit.len(), 5);
    let as_set: HashSet<Subspace> = orbit
        .iter()
        .map(|f| cs.from_field_repr(f).unwrap())
        .collect();
    let spread = spread_construct(&s, 2).unwrap();
    assert_eq!(as_set, spread.members().iter().cloned().collect());
    assert!(cs.is_cyclic(&spread).unwrap().cyclic);
    let found = cyclic_greedy_search(&cs, 2, 4, 0).unwrap();
    assert_eq!(found.ratio.exact, BigRational::from_integer(1.into()));
}

fn random_subspace(space: &Space, rng: &mut SeededRng, k: usize) -> Subspace {
    let q = space.q();
    let rows: Vec<Vec<u32>> = (0..k)
        .map(|_| (0..space.n()).map(|_| rng.below(q) as u32).collect())
        .collect();
    space.canonicalize(&rows).unwrap()
}

fn criterion_9() {
    const CHECKS: usize = 10_000;
    let mut rng = SeededRng::new(2024);
    let spaces = [space(2, 6), space(3, 4), space(4, 3), space(2, 10)];

    // metric axioms
    for i in 0..CHECKS {
        let s = &spaces[i % spaces.len()];
        let n = s.n();
        let [a, b, c] = [0, 1, 2].map(|_| {
            let k = rng.below(n as u64 + 1) as usize;
            random_subspace(s, &mut rng, k)
        });
        let dab = s.distance(&a, &b).unwrap();
        assert_eq!(dab, s.distance(&b, &a).unwrap());
        assert_eq!(dab == 0, a == b);
        assert!(dab <= s.distance(&a, &c).unwrap() + s.distance(&c, &b).unwrap());
    }

    // canonical form is idempotent and basis-independent
    for i in 0..CHECKS {
        let s = &spaces[i % spaces.len()];
        let k = rng.below(s.n() as u64 + 1) as usize;
        let u = random_subspace(s, &mut rng, k);
        let rows: Vec<Vec<u32>> = u.rows().map(|r| r.to_vec()).collect();
        assert_eq!(s.canonicalize(&rows).unwrap(), u);
        if u.dim() >= 2 {
            let mut mixed = rows.clone();
            let sum: Vec<u32> = mixed[0]
                .iter()
                .zip(&mixed[1])
                .map(|(&x, &y)| s.field().add(x, y))
                .collect();
            mixed[1] = sum;
            mixed.reverse();
            assert_eq!(s.canonicalize(&mixed).unwrap(), u);
        }
    }

    // field representation round trip and shift equivariance
    let models: Vec<CyclicSpace> = [space(2, 6), space(3, 3), space(2, 8)]
        .iter()
        .map(|s| CyclicSpace::new(s).unwrap())
        .collect();
    for i in 0..CHECKS {
        let cs = &models[i % models.len()];
        let s = cs.space();
        let k = rng.below(s.n() as u64 + 1) as usize;
        let u = random_subspace(s, &mut rng, k);
        let f = cs.to_field_repr(&u).unwrap();
        assert_eq!(cs.from_field_repr(&f).unwrap(), u);
        let steps = rng.below(f.period() as u64);
        let shifted = cs
            .to_field_repr(&cs.alpha_shift(&u, steps as i64).unwrap())
            .unwrap();
        assert_eq!(
            shifted.characteristic_vector(),
            f.characteristic_vector().shifted(steps as usize)
        );
        assert_eq!(
            CharacteristicVector::from_ones(f.period() as usize, shifted.logs()),
            shifted.characteristic_vector()
        );
    }
}

fn main() {
    type Check = Box<dyn Fn() -> String>;
    let unit = |f: fn()| -> Check {
        Box::new(move || {
            f();
            String::new()
        })
    };
    let criteria: Vec<(u32, &str, Duration, Check)> = vec![
        (
            1,
            "spread optimality at (2,4,2)",
            Duration::from_secs(1),
            unit(criterion_1),
        ),
        (
            2,
            "enumeration matches Gaussian binomials",
            Duration::from_secs(30),
            unit(criterion_2),
        ),
        (
            3,
            "bound dominance grid",
            Duration::from_secs(10),
            unit(criterion_3),
        ),
        (
            4,
            "minimum hyperplane covering of F_2^5 and its lift",
            Duration::from_secs(60),
            unit(criterion_4),
        ),
        (
            5,
            "code/covering round trips",
            Duration::from_secs(60),
            unit(criterion_5),
        ),
        (
            6,
            "matching guarantees and reproducibility",
            Duration::from_secs(300),
            Box::new(criterion_6),
        ),
        (7, "duality", Duration::from_secs(30), unit(criterion_7)),
        (
            8,
            "cyclic spread",
            Duration::from_secs(10),
            unit(criterion_8),
        ),
        (
            9,
            "randomized metric and conversion checks",
            Duration::from_secs(60),
            unit(criterion_9),
        ),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| name.contains(f.as_str()) || f == &id.to_string())
        {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(note) if elapsed <= limit => (true, note),
            Ok(_) => (false, format!("took longer than {limit:?}")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into());
                (false, msg)
            }
        };
        if !ok {
            failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        let detail = if detail.is_empty() {
            String::new()
        } else {
            format!(" [{detail}]")
        };
        println!(
            "criterion {id}: {status} {name} ({:.2}s){detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
