//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion listed in `KNOWN` is expected to fail for the stated reason; the
//! run exits nonzero if any other criterion fails, or if a known one passes.

use std::time::{Duration, Instant};

use milnor_core::arrangement::{census, generate, rank2_flats, Arrangement, Family, Remark26Params};
use milnor_core::criteria::{
    component_counts, partition, verify_certificate, Certificate, CheckOptions, Context, Status, Theorem,
};
use milnor_core::cyclo::{nonvanishing_guaranteed, sum_roots};
use milnor_core::linalg::Matrix;
use milnor_core::monodromy::{
    build_diagram, global_generators, half_twist, local_matrix, milnor_dim, DiagramSource, EigenRep, MilnorOptions,
};
use milnor_core::oracle::{fox_h1, presentation_from_diagram};

const KNOWN: &[(u32, &str)] = &[(
    4,
    "remark26i(3,1) is the braid arrangement (complete quadrilateral): its dual 3-graph \
     minus L1 has three components {L2}, {P1Q1, P2Q2}, {P1Q2, P2Q1}, and the eigenspace \
     has dimension 1 by both routes (matching criterion 7), so no vanishing check can pass",
)];

struct Outcome {
    pass: bool,
    detail: String,
    certs: Vec<(Arrangement, Certificate)>,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome {
        pass,
        detail,
        certs: Vec::new(),
    }
}

fn ctx(arr: &Arrangement) -> Context<'_> {
    Context::new(arr, CheckOptions::default()).expect("line arrangement")
}

/// `milnor_dim` and `fox_h1` on the same diagram.
fn both_dims(arr: &Arrangement, m: u32, opts: &MilnorOptions) -> (usize, usize, DiagramSource) {
    let r = milnor_dim(arr, m, opts).expect("milnor_dim");
    let diagram = r.diagram.expect("m divides d");
    let pres = presentation_from_diagram(&diagram).expect("presentation");
    let k = (arr.degree() / m as usize) as i64;
    (r.dim, fox_h1(&pres, m, k).expect("fox_h1"), diagram.source)
}

fn criterion1() -> Outcome {
    let s = sum_roots(12, &[0, 3, 4, 8, 9]).unwrap();
    let g = nonvanishing_guaranteed(12, 5);
    outcome(s.is_zero() && !g, format!("sum = {s}, guaranteed(12,5) = {g}"))
}

fn criterion2() -> Outcome {
    let a = generate(&Family::Hessian { b: 3 }, 0).unwrap();
    let c = ctx(&a);
    let cen = census(&c.flats);
    let r = partition(12, &c.flats, 4, None).len();
    let t1 = c.check_theorem1(4).unwrap();
    let t2 = c.check_theorem2(4).unwrap();
    let (dim, fox, source) = both_dims(&a, 4, &MilnorOptions::default());
    let pass = cen.get(&4) == Some(&9)
        && cen.get(&2) == Some(&12)
        && cen.len() == 2
        && r == 4
        && t1.status == Status::Inconclusive
        && t2.status == Status::Inconclusive
        && source == DiagramSource::Tracked
        && dim == fox
        && dim >= 1;
    let detail = format!(
        "census {cen:?}, r_4 = {r}, T1 {:?}, T2 {:?}, milnor_dim = {dim}, fox_h1 = {fox} ({source:?})",
        t1.status, t2.status
    );
    Outcome {
        pass,
        detail,
        certs: vec![(a.clone(), t1), (a, t2)],
    }
}

fn criterion3() -> Outcome {
    let a = generate(&Family::Hessian { b: 7 }, 0).unwrap();
    let opts = CheckOptions {
        lattice_only: true,
        ..Default::default()
    };
    let c = Context::new(&a, opts).unwrap();
    let t1 = c.check_theorem1(4).unwrap();
    let t2 = c.check_theorem2(4).unwrap();
    let pass = a.degree() == 52 && t2.theorem == Some(Theorem::T2) && t1.status == Status::Inconclusive;
    let detail = format!(
        "d = {}, T2 {:?} {:?}, T1 {:?}",
        a.degree(),
        t2.status,
        t2.theorem,
        t1.status
    );
    Outcome {
        pass,
        detail,
        certs: vec![(a.clone(), t1), (a, t2)],
    }
}

fn criterion4() -> Outcome {
    let small = generate(&Family::Remark26i { m: 3, a: 1 }, 0).unwrap();
    let big = generate(&Family::Remark26i { m: 4, a: 2 }, 0).unwrap();
    let t_small = ctx(&small).check_theorem1(3).unwrap();
    let t_big = ctx(&big).check_theorem1(4).unwrap();
    let (dim, fox, _) = both_dims(&small, 3, &MilnorOptions::default());
    let parts = partition(6, &ctx(&small).flats, 3, Some(0));
    let pass =
        small.degree() == 6 && big.degree() == 20 && t_small.vanishes() && t_big.vanishes() && dim == 0 && fox == 0;
    let detail = format!(
        "d=6: T1 {:?}, milnor_dim = {dim}, fox_h1 = {fox}, components without L1 {parts:?}; d=20: T1 {:?} {:?}",
        t_small.status,
        t_big.status,
        t_big.theorem.map(Theorem::tag)
    );
    Outcome {
        pass,
        detail,
        certs: vec![(small, t_small), (big, t_big)],
    }
}

fn criterion5() -> Outcome {
    let a = generate(&Family::Remark26ii(Remark26Params::default()), 0).unwrap();
    let c = ctx(&a);
    let rp = partition(40, &c.flats, 4, Some(39)).len();
    let t1 = c.check_theorem1(4).unwrap();
    let pass = a.degree() == 40 && rp == 4 && t1.vanishes() && t1.theorem != Some(Theorem::TrivialOrder);
    let detail = format!(
        "d = {}, r'_4 = {rp}, T1 {:?} {:?}",
        a.degree(),
        t1.status,
        t1.theorem.map(Theorem::tag)
    );
    Outcome {
        pass,
        detail,
        certs: vec![(a, t1)],
    }
}

fn criterion6() -> Outcome {
    let a = generate(&Family::Remark26iii(Remark26Params::default()), 0).unwrap();
    let flats = rank2_flats(&a);
    let d = a.degree();
    let (r, primes) = component_counts(d, &flats, 4);
    let rp = primes[d - 1];
    let best = primes.iter().max().copied().unwrap_or(0);
    let pass = d == 112 && rp == 4 && r == 5;
    // Not asserted: which reordering (if any) lets the first check through.
    let t1 = ctx(&a).check_theorem1(4).unwrap();
    let detail = format!(
        "d = {d}, r_4 = {r}, default r'_4 = {rp}, largest r'_4 over removals = {best}; T1 {:?} {:?} removing {:?}",
        t1.status,
        t1.theorem.map(Theorem::tag),
        t1.removed_index.map(|i| a.hyperplane(i).label.clone())
    );
    Outcome {
        pass,
        detail,
        certs: vec![(a.clone(), t1)],
    }
}

fn criterion7() -> Outcome {
    let a = generate(&Family::Braid, 0).unwrap();
    let c = ctx(&a);
    let t1 = c.check_theorem1(3).unwrap();
    let t2 = c.check_theorem2(3).unwrap();
    let (dim, fox, _) = both_dims(&a, 3, &MilnorOptions::default());
    let pass = dim == 1 && fox == 1 && t1.status == Status::Inconclusive && t2.status == Status::Inconclusive;
    Outcome {
        pass,
        detail: format!(
            "milnor_dim = {dim}, fox_h1 = {fox}, T1 {:?}, T2 {:?}",
            t1.status, t2.status
        ),
        certs: vec![(a.clone(), t1), (a, t2)],
    }
}

fn primitive(m: u32) -> Vec<i64> {
    (1..m as i64).filter(|&k| num_integer::gcd(k, m as i64) == 1).collect()
}

fn fixes_ones(g: &Matrix, m: u32) -> bool {
    let ones = vec![milnor_core::cyclo::CycloNum::one(m); g.nrows()];
    g.mul_vec(&ones) == ones
}

fn criterion8(mut certs: Vec<(Arrangement, Certificate)>) -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut counts = [0usize; 6];

    // Rank law of the local block.
    for m in 2..=12u32 {
        for k in primitive(m) {
            let rep = EigenRep::new(m, k).unwrap();
            for q in 2..=12usize {
                let l = local_matrix(q, 0, q, &rep);
                let rank = l.minus_identity().rank();
                let ok = if q % m as usize == 0 { rank <= 1 } else { rank == q - 1 } && fixes_ones(&l, m);
                counts[0] += 1;
                if !ok {
                    failures.push(format!("rank law m={m} k={k} q={q}: rank {rank}"));
                }
            }
        }
    }

    // Half-twists: squares, braid relations, far commutation.
    for m in 2..=6u32 {
        let rep = EigenRep::new(m, 1).unwrap();
        for dim in 2..=6usize {
            let t: Vec<Matrix> = (0..dim - 1).map(|p| half_twist(dim, p, true, &rep)).collect();
            for p in 0..dim - 1 {
                counts[1] += 1;
                let inv = half_twist(dim, p, false, &rep);
                if t[p].mul(&t[p]) != local_matrix(dim, p, 2, &rep)
                    || t[p].mul(&inv) != Matrix::identity(dim, m)
                    || !fixes_ones(&t[p], m)
                {
                    failures.push(format!("square m={m} dim={dim} p={p}"));
                }
                for q in p + 1..dim - 1 {
                    let (a, b) = (&t[p], &t[q]);
                    let ok = if q == p + 1 {
                        a.mul(b).mul(a) == b.mul(a).mul(b)
                    } else {
                        a.mul(b) == b.mul(a)
                    };
                    if !ok {
                        failures.push(format!("braid relation m={m} dim={dim} ({p},{q})"));
                    }
                }
            }
        }
    }

    // Invariance over random real arrangements.
    for seed in 0..20u64 {
        let d = 5 + (seed % 4) as usize;
        let a = generate(&Family::RandomReal { d }, seed).unwrap();
        let flats = rank2_flats(&a);
        let c = ctx(&a);
        let mut perm: Vec<usize> = (0..d).collect();
        perm.rotate_left(1 + seed as usize % (d - 1));
        let reordered = a.permuted(&perm).unwrap();
        let reversed = a.permuted(&(0..d).rev().collect::<Vec<_>>()).unwrap();
        for m in (2..=d as u32).filter(|m| d.is_multiple_of(*m as usize)) {
            let base = MilnorOptions::default();
            let (dim, fox, _) = both_dims(&a, m, &base);
            let rep = EigenRep::new(m, -1).unwrap();
            let (diagram, _) = build_diagram(&a, &flats, &base).unwrap();
            for g in global_generators(&diagram, &rep) {
                counts[2] += 1;
                if !fixes_ones(&g, m) {
                    failures.push(format!("Σe not fixed seed={seed} m={m}"));
                }
            }
            let variants = [
                (
                    "center",
                    milnor_dim(
                        &a,
                        m,
                        &MilnorOptions {
                            seed: 1 + seed,
                            ..Default::default()
                        },
                    ),
                ),
                (
                    "flip",
                    milnor_dim(
                        &a,
                        m,
                        &MilnorOptions {
                            flip: true,
                            ..Default::default()
                        },
                    ),
                ),
                ("reorder", milnor_dim(&reordered, m, &base)),
                ("reverse", milnor_dim(&reversed, m, &base)),
            ];
            counts[3] += 1;
            if fox != dim {
                failures.push(format!("fox {fox} != milnor_dim {dim} seed={seed} m={m}"));
            }
            for (name, v) in variants {
                let v = v.map(|r| r.dim);
                if v != Ok(dim) {
                    failures.push(format!("{name} changed dim seed={seed} m={m}: {v:?} vs {dim}"));
                }
            }

            let t1 = c.check_theorem1(m).unwrap();
            let t2 = c.check_theorem2(m).unwrap();
            counts[4] += 1;
            if t1.vanishes() && !t2.vanishes() {
                failures.push(format!("T1 without T2 seed={seed} m={m}"));
            }
            if (t1.vanishes() || t2.vanishes()) && dim != 0 {
                failures.push(format!("certified vanishing but dim {dim} seed={seed} m={m}"));
            }
            let (r, primes) = component_counts(d, &flats, m);
            if !primes.iter().any(|&p| p == r || p + 1 == r) {
                failures.push(format!(
                    "no removal gives r' in {{r, r-1}} seed={seed} m={m}: r={r} r'={primes:?}"
                ));
            }
            certs.push((a.clone(), t1));
            certs.push((a.clone(), t2));
        }
    }

    for (a, cert) in &certs {
        counts[5] += 1;
        if verify_certificate(a, cert) != Ok(true) {
            failures.push(format!(
                "certificate replay failed: d={} m={} {:?}",
                a.degree(),
                cert.m,
                cert.checker
            ));
        }
    }

    let detail = format!(
        "{} rank-law cases, {} twist cases, {} generators, {} invariance cases, {} checker cases, {} replays{}",
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        counts[4],
        counts[5],
        if failures.is_empty() {
            String::new()
        } else {
            format!("; failures: {}", failures.join("; "))
        }
    );
    outcome(failures.is_empty(), detail)
}

fn main() {
    // Runtime budgets per criterion.
    let budgets = [1u64, 120, 30, 60, 60, 120, 30, 600];
    let mut unexpected = 0;
    let mut certs = Vec::new();
    let runs: Vec<Box<dyn Fn() -> Outcome>> = vec![
        Box::new(criterion1),
        Box::new(criterion2),
        Box::new(criterion3),
        Box::new(criterion4),
        Box::new(criterion5),
        Box::new(criterion6),
        Box::new(criterion7),
    ];
    let mut report = |n: u32, start: Instant, o: &Outcome| {
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budgets[n as usize - 1]);
        let pass = o.pass && in_time;
        let known = KNOWN.iter().find(|(k, _)| *k == n);
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {tag} ({:.2?}) {}", elapsed, o.detail);
        if !in_time {
            println!("    over the {}s budget", budgets[n as usize - 1]);
        }
        match (pass, known) {
            (false, Some((_, why))) => println!("    known: {why}"),
            (true, Some(_)) => {
                println!("    expected to fail; update KNOWN");
                unexpected += 1;
            }
            (false, None) => unexpected += 1,
            (true, None) => {}
        }
    };
    for (i, run) in runs.iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        report(i as u32 + 1, start, &o);
        certs.append(&mut o.certs);
    }
    let start = Instant::now();
    let o = criterion8(certs);
    report(8, start, &o);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
