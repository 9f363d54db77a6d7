//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use zxel::equivalence::check_equivalent;
use zxel::io::{parse_diagram, serialize_diagram};
use zxel::normalform::{
    nf_equal, nf_from_vector, nf_self_plug, nf_tensor, nf_to_diagram, normalize,
    row_addition_diagram, row_multiplication_diagram,
};
use zxel::rewrite::{default_budget, simplify};
use zxel::rules::{axioms, check_catalog, derived_catalog};
use zxel::semantics::{contract_state, interpret, DEFAULT_WIRE_CAP};
use zxel::testing::{corpus, Pair, PairKind};
use zxel::C64;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_c(rng: &mut StdRng) -> C64 {
    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("took {t:.1?}, limit {limit:?}"))
    }
}

fn sweep(rules: &[zxel::rules::RewriteRule], limit: Duration) -> Outcome {
    let start = Instant::now();
    let reports = check_catalog(rules, 20, 1e-9);
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed() || r.max_deviation > 1e-9)
        .map(|r| r.rule.as_str())
        .collect();
    if !failed.is_empty() {
        return Err(format!("unsound: {}", failed.join(", ")));
    }
    within(limit, start)?;
    let worst = reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    Ok(format!(
        "{} rules and their flips, max deviation {worst:.1e}, {:.1?}",
        reports.len(),
        start.elapsed()
    ))
}

fn rule_soundness() -> Outcome {
    sweep(&axioms(), Duration::from_secs(30))
}

fn derived_soundness() -> Outcome {
    let rules = derived_catalog();
    if rules.len() < 30 {
        return Err(format!("only {} derived rules", rules.len()));
    }
    let required = [
        "Hopf",
        "Pic",
        "AD'",
        "BiA",
        "Dis",
        "add-commute",
        "mul-commute",
        "add-mul-commute",
        "pi-pair-add",
        "pi-pair-mul",
    ];
    for name in required {
        if !rules.iter().any(|r| r.name == name) {
            return Err(format!("missing {name}"));
        }
    }
    sweep(&rules, Duration::from_secs(120))
}

fn elementary_faithfulness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut checked = 0;
    for m in 1..=3usize {
        let size = 1usize << m;
        for mask in 1..size {
            let subset: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).collect();
            let a = random_c(&mut rng);
            let got = interpret(&row_addition_diagram(m, a, &subset).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let j = size - 1 - mask;
            for r in 0..size {
                for col in 0..size {
                    let want = if r == col {
                        c(1.0, 0.0)
                    } else if r == j && col == size - 1 {
                        a
                    } else {
                        c(0.0, 0.0)
                    };
                    if (got.get(r, col) - want).norm() > 1e-12 {
                        return Err(format!("row addition m={m} S={subset:?} entry ({r},{col})"));
                    }
                }
            }
            checked += 1;
        }
        let a = random_c(&mut rng);
        let got = interpret(&row_multiplication_diagram(m, a)).map_err(|e| e.to_string())?;
        for r in 0..size {
            for col in 0..size {
                let want = match (r == col, r == size - 1) {
                    (true, true) => a,
                    (true, false) => c(1.0, 0.0),
                    _ => c(0.0, 0.0),
                };
                if (got.get(r, col) - want).norm() > 1e-12 {
                    return Err(format!("row multiplication m={m} entry ({r},{col})"));
                }
            }
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} elementary diagrams match their matrices"
    ))
}

fn nf_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let m = i % 5;
        let v: Vec<C64> = (0..1usize << m).map(|_| random_c(&mut rng)).collect();
        let nf = nf_from_vector(&v).map_err(|e| e.to_string())?;
        let back =
            contract_state(&nf_to_diagram(&nf), DEFAULT_WIRE_CAP).map_err(|e| e.to_string())?;
        let dev = v
            .iter()
            .zip(&back)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        if dev > 1e-9 {
            return Err(format!("vector {i} (m={m}) deviates by {dev:.2e}"));
        }
        worst = worst.max(dev);
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "200 vectors, m <= 4, max deviation {worst:.1e}, {:.1?}",
        start.elapsed()
    ))
}

/// Sums the coefficients whose bits at positions `p` and `q` agree.
fn cup_oracle(v: &[C64], m: usize, p: usize, q: usize) -> Vec<C64> {
    let mut out = vec![c(0.0, 0.0); 1 << (m - 2)];
    for (k, x) in v.iter().enumerate() {
        let bit = |pos: usize| (k >> (m - 1 - pos)) & 1;
        if bit(p) == bit(q) {
            let r = (0..m)
                .filter(|&pos| pos != p && pos != q)
                .fold(0, |acc, pos| (acc << 1) | bit(pos));
            out[r] += x;
        }
    }
    out
}

fn self_plug() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let a: Vec<C64> = (0..4).map(|_| random_c(&mut rng)).collect();
    let got = nf_self_plug(&nf_from_vector(&a).unwrap(), 0, 1).map_err(|e| e.to_string())?;
    if got.coeffs != vec![a[0] + a[3]] {
        return Err("m = 2 plug is not a_0 + a_3".into());
    }
    let a: Vec<C64> = (0..8).map(|_| random_c(&mut rng)).collect();
    let got = nf_self_plug(&nf_from_vector(&a).unwrap(), 1, 2).map_err(|e| e.to_string())?;
    if got.coeffs != vec![a[0] + a[3], a[4] + a[7]] {
        return Err("m = 3 plug is not (a_4k + a_4k+3)_k".into());
    }
    for case in 0..100 {
        let m = rng.gen_range(2..=5);
        let v: Vec<C64> = (0..1usize << m).map(|_| random_c(&mut rng)).collect();
        let p = rng.gen_range(0..m);
        let q = (p + rng.gen_range(1..m)) % m;
        let got = nf_self_plug(&nf_from_vector(&v).unwrap(), p, q).map_err(|e| e.to_string())?;
        let want = cup_oracle(&v, m, p, q);
        if got
            .coeffs
            .iter()
            .zip(&want)
            .any(|(x, y)| (x - y).norm() > 1e-12)
        {
            return Err(format!(
                "case {case}: m={m} plug ({p},{q}) differs from the cup oracle"
            ));
        }
    }
    Ok("exact right-most formulas, 100 random pairs match the cup oracle".into())
}

fn tensor_protocol() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    for case in 0..100 {
        let (m, n) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let a: Vec<C64> = (0..1usize << m).map(|_| random_c(&mut rng)).collect();
        let b: Vec<C64> = (0..1usize << n).map(|_| random_c(&mut rng)).collect();
        let t = nf_tensor(&nf_from_vector(&a).unwrap(), &nf_from_vector(&b).unwrap());
        let mut want = Vec::new();
        for x in &a {
            for y in &b {
                want.push(x * y);
            }
        }
        if t.m != m + n
            || t.coeffs
                .iter()
                .zip(&want)
                .any(|(x, y)| (x - y).norm() > 1e-12)
        {
            return Err(format!(
                "case {case}: m={m}, n={n} differs from the Kronecker product"
            ));
        }
    }
    Ok("100 random tensor products match a_i b_j".into())
}

fn completeness(pairs: &[Pair]) -> Outcome {
    let start = Instant::now();
    let (mut equal, mut distinct) = (0, 0);
    for (i, pair) in pairs.iter().enumerate() {
        let (l, r) = (
            interpret(&pair.left).map_err(|e| e.to_string())?,
            interpret(&pair.right).map_err(|e| e.to_string())?,
        );
        let same_semantics = l.max_abs_diff(&r).expect("same type") <= 1e-9;
        let (nl, nr) = (
            normalize(&pair.left).map_err(|e| e.to_string())?,
            normalize(&pair.right).map_err(|e| e.to_string())?,
        );
        let same_nf = nf_equal(&nl, &nr, 1e-9);
        if pair.kind == PairKind::Rewritten && !same_nf {
            return Err(format!(
                "pair {i}: rewritten pair has different normal forms"
            ));
        }
        if same_nf != same_semantics {
            return Err(format!(
                "pair {i}: normal forms say {same_nf}, semantics say {same_semantics}"
            ));
        }
        let verdict = check_equivalent(&pair.left, &pair.right, 1e-9)
            .map_err(|e| format!("pair {i}: {e}"))?;
        if verdict.equal != same_semantics {
            return Err(format!("pair {i}: verdict disagrees with the semantics"));
        }
        if same_semantics {
            equal += 1;
        } else {
            distinct += 1;
        }
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!(
        "{} pairs ({equal} equal, {distinct} distinct), verdicts agree 100%, {:.1?}",
        pairs.len(),
        start.elapsed()
    ))
}

fn simplifier_safety(pairs: &[Pair]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut steps = 0;
    for (i, pair) in pairs.iter().enumerate() {
        for d in [&pair.left, &pair.right] {
            let budget = default_budget(d);
            let s = simplify(d, budget);
            if s.exhausted || s.steps.len() > budget {
                return Err(format!("pair {i}: budget {budget} exhausted"));
            }
            let dev = interpret(d)
                .map_err(|e| e.to_string())?
                .max_abs_diff(&interpret(&s.diagram).map_err(|e| e.to_string())?)
                .expect("same type");
            if dev > 1e-9 {
                return Err(format!(
                    "pair {i}: simplification moved the matrix by {dev:.2e}"
                ));
            }
            worst = worst.max(dev);
            steps += s.steps.len();
        }
    }
    Ok(format!(
        "{} diagrams, {steps} rewrites, max deviation {worst:.1e}",
        2 * pairs.len()
    ))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn zxel(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_zxel"))
        .args(args)
        .env_remove("ZXEL_WIRE_CAP")
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("killed by a signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn expect_code(args: &[&str], want: i32) -> Result<String, String> {
    let (code, out) = zxel(args)?;
    if code == want {
        Ok(out)
    } else {
        Err(format!(
            "`zxel {}` exited {code}, expected {want}",
            args.join(" ")
        ))
    }
}

fn cli_contract() -> Outcome {
    expect_code(
        &["check-eq", &fixture("chain.json"), &fixture("fused.json")],
        0,
    )?;
    expect_code(
        &[
            "check-eq",
            &fixture("scalar2.json"),
            &fixture("scalar3.json"),
        ],
        1,
    )?;
    expect_code(
        &["check-eq", &fixture("chain.json"), &fixture("cap.json")],
        2,
    )?;
    expect_code(&["interpret", &fixture("malformed.json")], 2)?;
    expect_code(&["elementary", &fixture("swap.txt")], 2)?;

    for name in ["chain.json", "not_gate.json", "cap.json", "loop.json"] {
        let text = std::fs::read_to_string(fixture(name)).map_err(|e| e.to_string())?;
        let original = parse_diagram(&text).map_err(|e| e.to_string())?;
        let written = expect_code(&["simplify", &fixture(name), "--budget", "0"], 0)?;
        let back = parse_diagram(&written).map_err(|e| e.to_string())?;
        if !back.structurally_equal(&original) || serialize_diagram(&back) != written {
            return Err(format!("{name} does not round-trip"));
        }
    }

    expect_code(&["rules"], 0)?;
    expect_code(
        &[
            "rules",
            "--samples",
            "2",
            "--extra",
            &fixture("corrupted_rules.json"),
        ],
        1,
    )?;
    expect_code(&["rules", "--samples", "2", "--corrupt", "S1"], 1)?;
    Ok("exit codes 0/1/2, file round trip, rules 0 on the catalogue and 1 when corrupted".into())
}

fn main() -> ExitCode {
    let pairs = corpus(0x2a, 500);
    let criteria: Vec<Criterion> = vec![
        ("rule soundness", Box::new(rule_soundness)),
        ("derived-rule soundness", Box::new(derived_soundness)),
        ("elementary faithfulness", Box::new(elementary_faithfulness)),
        ("normal-form round trip", Box::new(nf_round_trip)),
        ("self-plug formulas", Box::new(self_plug)),
        ("tensor protocol", Box::new(tensor_protocol)),
        ("desk-scale completeness", Box::new(|| completeness(&pairs))),
        ("simplifier safety", Box::new(|| simplifier_safety(&pairs))),
        ("CLI contract", Box::new(cli_contract)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(reason) => {
                failures += 1;
                println!("[FAIL] {}. {name}: {reason}", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
