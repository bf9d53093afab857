//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Rates are compared as exact rationals (zero tolerance). Each criterion
//! carries its own wall-clock limit; exceeding it is a failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use funalign::capacity::*;
use funalign::code::*;
use funalign::decomposition::{full_decompose, validate_coloring};
use funalign::network::*;
use funalign::oracle::{oracle_search, SearchMode, SearchOutcome};
use funalign::verify::{decoder_exists, rank_condition, subspace_dims};
use funalign::{Gf2Matrix, Rate};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn formula_fidelity() -> Outcome {
    for (m, n, want) in [(3, 5, Rate::new(3, 1)), (3, 4, Rate::new(8, 3)), (4, 4, Rate::new(4, 1))] {
        let got = capacity_symmetric::<Rate>(m, n);
        ensure(got == want, || format!("C({m},{n}) = {got}, expected {want}"))?;
    }
    let mut points = 0;
    for m in 0..=20u32 {
        for n in 0..=20u32 {
            let c = capacity_symmetric::<Rate>(m, n);
            let (lo, hi) = (i64::from(m.min(n)), i64::from(m.max(n)));
            // Piecewise form: n on the diagonal, min(lo, 2hi/3) elsewhere.
            let want = if lo == hi {
                Rate::from_integer(hi)
            } else if 3 * lo <= 2 * hi {
                Rate::from_integer(lo)
            } else {
                Rate::new(2 * hi, 3)
            };
            ensure(c == want, || format!("C({m},{n}) = {c}, expected {want}"))?;
            if m != n {
                let p = NetworkParams2x2::symmetric(m, n);
                let up = upper_nondegenerate::<Rate>(&p).expect("non-degenerate");
                let cut = upper_cutset::<Rate>(&p);
                ensure(c == up.min(cut), || format!("C({m},{n}) != min of upper bounds"))?;
            }
            points += 1;
        }
    }
    Ok(format!("{points} grid points exact"))
}

fn golden_case2() -> Outcome {
    let want1 = [
        "1000", "0000", "0000", "0000", "0100", "0000", "0001", "0001", "0010", "0001", "0000", "0000",
    ];
    let want2 = [
        "1000", "0000", "0001", "0001", "0100", "0000", "0000", "0000", "0010", "0001", "0000", "0000",
    ];
    let (v1, v2) = case2_matrices(3, 4).map_err(|e| e.to_string())?;
    ensure(v1 == Gf2Matrix::from_rows(&want1).unwrap(), || format!("V1 differs:\n{v1}"))?;
    ensure(v2 == Gf2Matrix::from_rows(&want2).unwrap(), || format!("V2 differs:\n{v2}"))?;
    let code = construct_case2(3, 4).map_err(|e| e.to_string())?;
    ensure(code.beamformers[0].columns(0..4) == v1, || "transmitter 1 does not carry V1".into())?;
    ensure(code.beamformers[1].columns(4..8) == v2, || "transmitter 2 does not carry V2".into())?;
    let ranks = rank_condition(&code).map_err(|e| e.to_string())?;
    ensure(ranks == (12, 12), || format!("rank condition {ranks:?}"))?;
    Ok("V1, V2 bit-exact; ranks (12, 12)".into())
}

fn rank_sweep() -> Outcome {
    let mut count = 0;
    for n in 1..=10u32 {
        for m in 1..n {
            if 3 * m < 2 * n {
                continue;
            }
            let code = construct_case2(m, n).map_err(|e| e.to_string())?;
            let ranks = rank_condition(&code).map_err(|e| e.to_string())?;
            let full = 3 * n as usize;
            ensure(ranks == (full, full), || format!("({m},{n}): ranks {ranks:?}, want {full}"))?;
            let pass = decoder_exists(&code).map_err(|e| e.to_string())?.pass;
            ensure(pass, || format!("({m},{n}): no decoder"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (m,n) pairs at full rank and decodable"))
}

fn decomposition_soundness() -> Outcome {
    let mut count = 0;
    for m in 1..=12u32 {
        for n in 1..=12u32 {
            if m == n {
                continue;
            }
            for users in [2, 3] {
                let params = NetworkParamsSym::new(m, n, users).unwrap();
                let dec = full_decompose(m, n, users).map_err(|e| e.to_string())?;
                ensure(validate_coloring(&params, &dec), || format!("({m},{n},{users}): coloring invalid"))?;
                ensure(dec.total() == (m, n), || format!("({m},{n}): parts sum to {:?}", dec.total()))?;
                count += 1;
            }
        }
    }
    let s = full_decompose(2, 7, 2).map_err(|e| e.to_string())?.to_string();
    ensure(s == "(0,1)^3 x (1,2)^2", || format!("(2,7) printed {s}"))?;
    Ok(format!("{count} decompositions valid; (2,7) = {s}"))
}

fn end_to_end() -> Outcome {
    let mut count = 0;
    let grids: [(usize, u32); 3] = [(2, 10), (3, 8), (4, 8)];
    for (users, max) in grids {
        for m in 0..=max {
            for n in 0..=max {
                let code = construct_auto(m, n, users).map_err(|e| e.to_string())?;
                let want: Rate = if users == 2 {
                    capacity_symmetric(m, n)
                } else {
                    luser_linear_capacity(m, n, users).unwrap()
                };
                ensure(code.rate() == want, || {
                    format!("({m},{n},{users}) {}: rate {} != {want}", code.label, code.rate())
                })?;
                let pass = decoder_exists(&code).map_err(|e| e.to_string())?.pass;
                ensure(pass, || format!("({m},{n},{users}) {}: no decoder", code.label))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} codes decode at capacity"))
}

fn degeneracy_equivalence() -> Outcome {
    let mut mismatches = Vec::new();
    let mut total = 0;
    for a in 0..=5 {
        for b in 0..=5 {
            for c in 0..=5 {
                for d in 0..=5 {
                    let p = NetworkParams2x2::new(a, b, c, d);
                    if classify_constructive(&p).class != classify_closed_form(&p) {
                        mismatches.push((a, b, c, d));
                    }
                    total += 1;
                }
            }
        }
    }
    ensure(mismatches.is_empty(), || {
        let sample: Vec<String> = mismatches.iter().take(6).map(|t| format!("{t:?}")).collect();
        format!(
            "{} of {total} tuples disagree, e.g. {}",
            mismatches.len(),
            sample.join(" ")
        )
    })?;
    Ok(format!("{total} tuples agree"))
}

fn oracle_evidence() -> Outcome {
    let mode = SearchMode::Exhaustive { budget: 1 << 24 };
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let sym = |m, n, l| -> Network { NetworkParamsSym::new(m, n, l).unwrap().into() };
    let search = |net: &Network, k| oracle_search(net, k, 1, mode, jobs).map_err(|e| e.to_string());

    ensure(search(&sym(1, 2, 2), 2)? == SearchOutcome::Impossible, || "(1,2) K=2 not impossible".into())?;
    ensure(search(&sym(0, 1, 2), 1)? == SearchOutcome::Impossible, || "(0,1) K=1 not impossible".into())?;
    ensure(
        matches!(search(&sym(1, 2, 2), 1)?, SearchOutcome::Achievable(_)),
        || "(1,2) K=1 not achievable".into(),
    )?;

    let mut instances = 0;
    for users in 2..=3usize {
        for m in 0..=3u32 {
            for n in 0..=3u32 {
                if m.max(n) == 0 {
                    continue;
                }
                let (bound, formula): (Rate, Rate) = if users == 2 {
                    let p = NetworkParams2x2::symmetric(m, n);
                    let cut = upper_cutset::<Rate>(&p);
                    let bound = upper_nondegenerate::<Rate>(&p).map_or(cut, |u| u.min(cut));
                    (bound, capacity_symmetric(m, n))
                } else {
                    (
                        luser_upper_bound(m, n, users).unwrap(),
                        luser_linear_capacity(m, n, users).unwrap(),
                    )
                };
                for k in 1..=3usize {
                    let out = search(&sym(m, n, users), k)?;
                    if let SearchOutcome::Unknown(why) = &out {
                        return Err(format!("({m},{n},{users}) K={k} not searchable: {why}"));
                    }
                    let achieved = matches!(out, SearchOutcome::Achievable(_));
                    let rate = Rate::from_integer(k as i64);
                    ensure(!achieved || rate <= bound, || {
                        format!("({m},{n},{users}) K={k} achievable above bound {bound}")
                    })?;
                    ensure(!(formula.is_integer() && rate == formula) || achieved, || {
                        format!("({m},{n},{users}) capacity-formula rate {formula} not found")
                    })?;
                    instances += 1;
                }
            }
        }
    }
    Ok(format!("3 named cases + {instances} instances consistent"))
}

fn subspace_properties() -> Outcome {
    let mut codes = Vec::new();
    for users in 3..=4 {
        for m in 0..=8u32 {
            for n in 0..=8u32 {
                codes.push(construct_auto(m, n, users).map_err(|e| e.to_string())?);
            }
        }
    }
    for users in 3..=5 {
        for r in 1..=12 {
            for o in [Orientation::DirectStronger, Orientation::CrossStronger] {
                codes.push(construct_luser_gap1(r, o, users).map_err(|e| e.to_string())?);
            }
        }
    }
    for code in &codes {
        let sym = code.network.as_symmetric().expect("symmetric");
        let r = subspace_dims(code).map_err(|e| e.to_string())?;
        ensure(r.independent.iter().all(|&b| b), || format!("{}: W's not independent", code.network))?;
        if sym.m() != sym.n() {
            ensure(r.forbidden.is_empty(), || {
                format!("{}: forbidden dimension pattern for sources {:?}", code.network, r.forbidden)
            })?;
        }
    }
    Ok(format!("{} codes checked", codes.len()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 formula fidelity", Duration::from_secs(1), formula_fidelity),
        ("2 case II golden listing", Duration::from_secs(1), golden_case2),
        ("3 rank condition sweep", Duration::from_secs(10), rank_sweep),
        ("4 decomposition soundness", Duration::from_secs(5), decomposition_soundness),
        ("5 end-to-end achievability", Duration::from_secs(60), end_to_end),
        ("6 degeneracy equivalence", Duration::from_secs(30), degeneracy_equivalence),
        ("7 oracle converse evidence", Duration::from_secs(600), oracle_evidence),
        ("8 subspace properties", Duration::from_secs(30), subspace_properties),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}, but over the {limit:?} limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {name}: {} ({:.3}s / {}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
