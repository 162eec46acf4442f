//! Seeded randomized checks, exposed as `fqcert selftest`.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use fqcert::covers::regular_closure;
use fqcert::homology::{find_functional, ClassVector, Functional};
use fqcert::words::{conjugator, oracle_conjugate};
use fqcert::wreath::{wreath_multiply, ExtendedHom, FiniteQuotient};
use fqcert::{certify_nonconjugate, verify_nonconjugate, Caps, CoverGraph, Error, SearchMode, Word};

fn random_word(rng: &mut StdRng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let raw: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank as i32);
            if rng.gen() {
                g
            } else {
                -g
            }
        })
        .collect();
    Word::reduce(&raw, rank).expect("letters in range")
}

fn random_normal_cover(rng: &mut StdRng, rank: usize, max_degree: usize) -> CoverGraph {
    loop {
        let d = rng.gen_range(1..=4);
        let perms = (0..rank)
            .map(|_| {
                let mut p: Vec<u32> = (0..d as u32).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        if let Ok(c) = CoverGraph::new(rank, perms) {
            if let Ok(rc) = regular_closure(&c, max_degree) {
                return rc;
            }
        }
    }
}

fn homomorphism_law(rng: &mut StdRng, cases: usize) -> Result<(), String> {
    for _ in 0..cases {
        let cover = random_normal_cover(rng, 2, 12);
        let quotient = FiniteQuotient::new(&cover).map_err(|e| e.to_string())?;
        let dim = quotient.basis().dim();
        let phi = Functional((0..dim).map(|_| rng.gen_range(-3..=3)).collect());
        let modulus = rng.gen_range(2..=7);
        let tau = ExtendedHom::new(&quotient, phi, modulus).map_err(|e| e.to_string())?;
        let (g, h) = (random_word(rng, 2, 8), random_word(rng, 2, 8));
        let lhs = tau.eval(&g.concat(&h).unwrap()).unwrap();
        let rhs = wreath_multiply(&tau.eval(&g).unwrap(), &tau.eval(&h).unwrap()).unwrap();
        if lhs != rhs {
            return Err(format!("τ({g}·{h}) ≠ τ({g})·τ({h}) on cover {:?}", cover.perms()));
        }
    }
    Ok(())
}

fn brute_force_exists(target: &[i64], kill: &[Vec<i64>]) -> bool {
    let dim = target.len();
    let mut phi = vec![-3i64; dim];
    loop {
        let dot = |v: &[i64]| v.iter().zip(&phi).map(|(a, b)| a * b).sum::<i64>();
        if dot(target) == 1 && kill.iter().all(|k| dot(k) == 0) {
            return true;
        }
        let mut i = 0;
        while i < dim && phi[i] == 3 {
            phi[i] = -3;
            i += 1;
        }
        if i == dim {
            return false;
        }
        phi[i] += 1;
    }
}

fn solver(rng: &mut StdRng, cases: usize) -> Result<(), String> {
    for _ in 0..cases {
        let dim = rng.gen_range(1..=3);
        let count = rng.gen_range(0..=2);
        let mut vec = || (0..dim).map(|_| rng.gen_range(-2..=2)).collect::<Vec<i64>>();
        let target = vec();
        let kill: Vec<Vec<i64>> = (0..count).map(|_| vec()).collect();
        let cv = |v: &Vec<i64>| ClassVector::from_dense(v);
        let got = find_functional(&cv(&target), &kill.iter().map(cv).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
        match got {
            Some(phi) => {
                if phi.eval(&cv(&target)) != 1 || kill.iter().any(|k| phi.eval(&cv(k)) != 0) {
                    return Err(format!("bad solution {:?} for {target:?}, {kill:?}", phi.0));
                }
            }
            None if brute_force_exists(&target, &kill) => {
                return Err(format!("missed a solution for {target:?}, {kill:?}"));
            }
            None => {}
        }
    }
    Ok(())
}

fn oracle(rng: &mut StdRng, cases: usize) -> Result<(), String> {
    for _ in 0..cases {
        let w = random_word(rng, 2, 8);
        let h = random_word(rng, 2, 6);
        let v = w.conjugate(&h).unwrap();
        if !oracle_conjugate(&w, &v).unwrap() {
            return Err(format!("{w} and its conjugate {v} reported non-conjugate"));
        }
        match conjugator(&w, &v).unwrap() {
            Some(x) if w.conjugate(&x).unwrap() == v => {}
            other => return Err(format!("bad conjugator {other:?} for {w}, {v}")),
        }
    }
    Ok(())
}

fn round_trip(rng: &mut StdRng, cases: usize) -> Result<(), String> {
    let caps = Caps::default();
    for _ in 0..cases {
        let (a, b) = (random_word(rng, 2, 5), random_word(rng, 2, 5));
        if a.is_empty() || b.is_empty() {
            continue;
        }
        match certify_nonconjugate(&a, &b, SearchMode::Auto, &caps) {
            Ok(cert) => {
                let report = verify_nonconjugate(&cert);
                if !report.accepted() {
                    return Err(format!("certificate for ({a}, {b}) rejected:\n{report}"));
                }
            }
            Err(Error::ElementsConjugate { .. }) if oracle_conjugate(&a, &b).unwrap() => {}
            Err(e) => return Err(format!("({a}, {b}): {e}")),
        }
    }
    Ok(())
}

type Check = fn(&mut StdRng, usize) -> Result<(), String>;

pub fn run(seed: u64, cases: usize) -> bool {
    let mut rng = StdRng::seed_from_u64(seed);
    let checks: [(&str, Check); 4] = [
        ("extension homomorphism law", homomorphism_law),
        ("integer solver against brute force", solver),
        ("conjugacy oracle and witnesses", oracle),
        ("certify/verify round trip", round_trip),
    ];
    let mut ok = true;
    for (name, check) in checks {
        match check(&mut rng, cases) {
            Ok(()) => println!("pass  {name}"),
            Err(msg) => {
                ok = false;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("seed {seed}, {cases} cases per check");
    ok
}
