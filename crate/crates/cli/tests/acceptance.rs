//! Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use modinv_cli::{verify_instance, Instance, VerifyConfig};
use modinv_core::grouplift::{
    closure, cocycle_f, cocycle_g, h_gamma, sl2_blocks, sl2_generators, DEFAULT_CLOSURE_CAP,
};
use modinv_core::invariants::{
    complement_gamma, composed_invariants, dickson_pair, dickson_support_check, dickson_u,
    kernel_action, kernel_invariants, lifted_invariants,
};
use modinv_core::mvpoly::{jacobian_det, Monomial};
use modinv_core::verify::{
    express_in_generators, generated_dimension, kemper_check, oracle_sweep, FixedSpaceOracle,
    GeneratorExpr,
};
use modinv_core::{Fel, Field, LambdaSpace, MultiPoly, Variant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn gf(m: u32) -> Arc<Field> {
    Arc::new(Field::with_default_modulus(m).unwrap())
}

fn sl2_count(n: u32) -> usize {
    let q = 1usize << n;
    q * (q * q - 1)
}

/// `a^(2^k)` by repeated multiplication.
fn frob(f: &Field, mut a: Fel, k: u32) -> Fel {
    for _ in 0..k {
        a = f.mul(a, a);
    }
    a
}

fn group_orders() -> Outcome {
    let mut found = Vec::new();
    for (n, expected) in [(1, 6usize), (2, 60), (3, 504)] {
        let start = Instant::now();
        let f = gf(n);
        let g = closure(
            &f,
            &sl2_generators(&f, n).unwrap().to_vec(),
            DEFAULT_CLOSURE_CAP,
        )
        .map_err(|e| e.to_string())?;
        within(start, Duration::from_secs(1))?;
        check(g.len() == expected, format!("n={n}: order {}", g.len()))?;
        check(g.len() == sl2_count(n), format!("n={n}: q(q^2-1) mismatch"))?;
        found.push(g.len().to_string());
    }
    Ok(format!("orders {}", found.join(", ")))
}

fn cocycle_identities() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for (n, expected) in [(1, 24usize), (2, 960), (3, 32_256)] {
        let f = gf(n);
        let fdef =
            |a: Fel, b: Fel| Fel::ONE + a + b + f.mul(frob(&f, a, n - 1), frob(&f, b, n - 1));
        let gdef = |a: Fel, b: Fel| fdef(a, b) + Fel::ONE;
        let elems: Vec<Fel> = f.elements().collect();
        let mut count = 0;
        for [[a, b], [c, d]] in sl2_blocks(&f, n).unwrap() {
            for &p in &elems {
                for &q in &elems {
                    let common = f.mul(p, fdef(a, b)) + f.mul(q, fdef(c, d));
                    let (s, t) = (f.mul(p, a) + f.mul(q, c), f.mul(p, b) + f.mul(q, d));
                    let lib_f = cocycle_f(&f, p, q, n).unwrap();
                    let lib_g = cocycle_g(&f, p, q, n).unwrap();
                    check(
                        lib_f == fdef(p, q) && lib_g == gdef(p, q),
                        "library f/g disagree",
                    )?;
                    check(
                        common + lib_f == cocycle_f(&f, s, t, n).unwrap(),
                        format!("f identity, n={n}"),
                    )?;
                    check(
                        common + lib_g == cocycle_g(&f, s, t, n).unwrap(),
                        format!("g identity, n={n}"),
                    )?;
                    count += 1;
                }
            }
        }
        check(count == expected, format!("n={n}: {count} instances"))?;
        for &t in &elems {
            for &a in &elems {
                for &b in &elems {
                    let lhs = cocycle_g(&f, f.mul(t, a), f.mul(t, b), n).unwrap();
                    check(
                        lhs == f.mul(t, cocycle_g(&f, a, b, n).unwrap()),
                        "homogeneity",
                    )?;
                }
            }
        }
        counts.push(count.to_string());
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "{} instances, g-variant and homogeneity hold",
        counts.join(" + ")
    ))
}

fn h_gamma_closure() -> Outcome {
    let start = Instant::now();
    for n in [2, 3] {
        let f = gf(n);
        for gamma in [Fel::ZERO, Fel::ONE] {
            let h = h_gamma(&f, n, gamma).map_err(|e| e.to_string())?;
            check(
                h.len() == sl2_count(n),
                format!("n={n} gamma={gamma}: {}", h.len()),
            )?;
            for a in h.iter() {
                for b in h.iter() {
                    check(
                        h.contains(&a.mul(b, &f)),
                        format!("n={n} gamma={gamma}: not closed"),
                    )?;
                }
            }
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok("closed, orders 60 and 504".into())
}

fn instance(n: u32, d: u32, variant: Variant) -> Instance {
    Instance::from_config(&VerifyConfig::new(n, d, variant)).unwrap()
}

fn splitting() -> Outcome {
    let start = Instant::now();
    let mut orders = Vec::new();
    for d in [0, 1] {
        let rep = verify_instance(&instance(2, d, Variant::H1)).map_err(|e| e.to_string())?;
        let s = rep.split.as_ref().ok_or("no split data")?;
        let g = rep.group_order.unwrap();
        check(
            s.complement_order == 60,
            format!("d={d}: complement {}", s.complement_order),
        )?;
        check(
            s.intersection_order == 1,
            format!("d={d}: intersection {}", s.intersection_order),
        )?;
        check(
            s.complement_order * s.kernel_order == g,
            format!("d={d}: product != {g}"),
        )?;
        check(
            g == if d == 0 { 60 } else { 960 },
            format!("d={d}: |G| = {g}"),
        )?;
        orders.push(g.to_string());
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "|G| = {}, complement 60, trivial intersection",
        orders.join(", ")
    ))
}

fn kernel_invariant_checks() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 1..=3 {
        for d in 0..=2 {
            let ls = LambdaSpace::default_for(n, d).unwrap();
            let f = ls.field().clone();
            let k = kernel_invariants(&ls).unwrap();
            for g in ls.kernel_group().iter() {
                for p in [&k.fx, &k.fy, &k.fz] {
                    check(
                        p.act(g).unwrap() == *p,
                        format!("n={n} d={d}: moved by {g:?}"),
                    )?;
                }
            }
            let prod = ls
                .elements()
                .iter()
                .filter(|a| !a.is_zero())
                .fold(Fel::ONE, |acc, a| f.mul(acc, *a));
            let expected = MultiPoly::monomial(
                &f,
                f.mul(prod, prod),
                Monomial::new(0, 0, 2 * ((1 << (n * d)) - 1)),
            );
            check(
                jacobian_det(&k.fx, &k.fy, &k.fz).unwrap() == expected,
                format!("n={n} d={d}: Jacobian"),
            )?;
            check(
                dickson_support_check(&k.fx, n, d) && dickson_support_check(&k.fy, n, d),
                format!("n={n} d={d}: support"),
            )?;
            cases += 1;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{cases} (n, d) cases"))
}

fn dickson_identities() -> Outcome {
    let start = Instant::now();
    for n in 1..=3 {
        let f = gf(n);
        let q = 1u32 << n;
        let (c0, c1) = dickson_pair(&f, n).unwrap();
        let u = dickson_u(&f, n).unwrap();
        check(u.pow(q - 1).unwrap() == c0, format!("n={n}: u^(q-1) != c0"))?;
        let gamma = if n == 1 {
            Fel::ONE
        } else {
            complement_gamma(&f, n).unwrap()
        };
        let l = lifted_invariants(&f, n, gamma).unwrap();
        check(
            l.u.pow(q - 1).unwrap() == l.c0,
            format!("n={n}: lifted u^(q-1) != c0"),
        )?;
        check(l.u.restrict_z0() == u, format!("n={n}: u restriction"))?;
        check(l.c1.restrict_z0() == c1, format!("n={n}: c1 restriction"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok("n = 1, 2, 3".into())
}

fn run_cli(args: &[&str]) -> Result<(i32, Value), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_modinv"))
        .arg("verify")
        .args(args)
        .arg("--quiet")
        .arg("--json")
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().unwrap_or(-1);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{args:?}: {e}"))?;
    let json = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    Ok((code, json))
}

fn verify_instances() -> Outcome {
    let cases: [(&[&str], u64, [u64; 3], Duration); 4] = [
        (
            &["--n", "2", "--d", "0", "--variant", "h1"],
            60,
            [5, 12, 1],
            Duration::from_secs(10),
        ),
        (
            &["--n", "2", "--d", "0", "--variant", "h0"],
            60,
            [5, 12, 1],
            Duration::from_secs(10),
        ),
        (
            &["--n", "2", "--d", "1", "--variant", "h1"],
            960,
            [20, 48, 1],
            Duration::from_secs(300),
        ),
        (
            &["--n", "3", "--d", "0", "--variant", "h1"],
            504,
            [9, 56, 1],
            Duration::from_secs(10),
        ),
    ];
    for (args, order, degrees, limit) in cases {
        let start = Instant::now();
        let (code, r) = run_cli(args)?;
        within(start, limit)?;
        let q = 1u64 << r["n"].as_u64().unwrap();
        let qd = q.pow(r["d"].as_u64().unwrap() as u32);
        check(
            degrees == [(q + 1) * qd, (q * q - q) * qd, 1],
            "degree formula",
        )?;
        check(code == 0, format!("{args:?}: exit {code}"))?;
        check(
            r["group_order"] == order,
            format!("{args:?}: order {}", r["group_order"]),
        )?;
        check(
            r["degrees"] == serde_json::json!(degrees),
            format!("{args:?}: degrees {}", r["degrees"]),
        )?;
        check(r["degree_product"] == order, format!("{args:?}: product"))?;
        check(r["jacobian_nonzero"] == true, format!("{args:?}: Jacobian"))?;
        check(
            r["verdict"] == "POLYNOMIAL",
            format!("{args:?}: verdict {}", r["verdict"]),
        )?;
        if args.contains(&"h0") {
            let offsets_zero = r["action"]
                .as_array()
                .unwrap()
                .iter()
                .all(|a| a["offset"] == serde_json::json!(["0x0", "0x0"]));
            check(offsets_zero, "h0: offsets not zero")?;
        }
    }
    Ok("4 instances POLYNOMIAL, exit 0".into())
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let inst = instance(2, 0, Variant::H1);
    let f = inst.field.clone();
    let k = kernel_invariants(&inst.lambda).unwrap();
    let desc = kernel_action(&f, 2, &inst.lifts, &k).unwrap();
    let invs = composed_invariants(&f, 2, &k, &desc).unwrap().as_array();
    let oracle = FixedSpaceOracle::new(&f, &inst.lifts, 3).unwrap();
    let rows = oracle_sweep(&oracle, &invs, 0..=60).map_err(|e| e.to_string())?;
    check(rows.len() == 61, "row count")?;
    if let Some(bad) = rows.iter().find(|r| !r.agrees()) {
        return Err(format!(
            "n=2 d=0 degree {}: {} vs {}",
            bad.degree, bad.fixed_dim, bad.generated_dim
        ));
    }
    // 5a + 12b + c = 12 has 4 solutions; their products are independent
    check(
        generated_dimension(&invs, 12).unwrap() == 4,
        "degree 12 count",
    )?;

    let f2 = gf(1);
    let (c0, c1) = dickson_pair(&f2, 1).unwrap();
    let gens = sl2_generators(&f2, 1).unwrap().to_vec();
    let oracle2 = FixedSpaceOracle::new(&f2, &gens, 2).unwrap();
    let rows2 = oracle_sweep(&oracle2, &[c0, c1], 0..=15).map_err(|e| e.to_string())?;
    if let Some(bad) = rows2.iter().find(|r| !r.agrees()) {
        return Err(format!(
            "q=2 degree {}: {} vs {}",
            bad.degree, bad.fixed_dim, bad.generated_dim
        ));
    }
    within(start, Duration::from_secs(600))?;
    Ok("degrees 0..60 (n=2, d=0) and 0..15 (q=2, two variables) agree".into())
}

fn expression_round_trip() -> Outcome {
    let start = Instant::now();
    let inst = instance(2, 0, Variant::H1);
    let f = inst.field.clone();
    let k = kernel_invariants(&inst.lambda).unwrap();
    let desc = kernel_action(&f, 2, &inst.lifts, &k).unwrap();
    let invs = composed_invariants(&f, 2, &k, &desc).unwrap().as_array();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..100 {
        let deg: u32 = rng.gen_range(0..=60);
        let mut terms = Vec::new();
        for b in 0..=deg / 12 {
            for a in 0..=(deg - 12 * b) / 5 {
                if rng.gen_bool(0.5) {
                    let c = Fel::from_bits(rng.gen_range(1..4));
                    terms.push((Monomial::new(a, b, deg - 5 * a - 12 * b), c));
                }
            }
        }
        if terms.is_empty() {
            terms.push((Monomial::new(0, 0, deg), Fel::ONE));
        }
        let e = GeneratorExpr::from_terms(&f, terms);
        let p = e.substitute(&invs).unwrap();
        let back = express_in_generators(&p, &invs, &inst.lifts)
            .map_err(|err| format!("case {case} (degree {deg}): {err}"))?;
        check(
            back.substitute(&invs).unwrap() == p,
            format!("case {case}: substitution differs"),
        )?;
        check(back == e, format!("case {case}: expression differs"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok("100 random invariants re-expressed exactly".into())
}

fn negative_controls() -> Outcome {
    let mut seen = Vec::new();
    for d in [0, 1] {
        let mut inst = instance(2, d, Variant::H1);
        let e = inst.field.subfield_generator(2).unwrap();
        inst.lifts[0] = inst.lifts[0].with_column([Fel::ONE, e + Fel::ONE]);
        let r = verify_instance(&inst).map_err(|e| e.to_string())?;
        check(
            r.verdict != "POLYNOMIAL",
            format!("d={d}: corrupted lift still POLYNOMIAL"),
        )?;
        let clause = r.failed_clause.clone().ok_or("no clause named")?;
        check(
            r.verdict == format!("FAIL({clause})"),
            "verdict does not name its clause",
        )?;
        check(
            r.split.as_ref().is_some_and(|s| !s.is_split),
            format!("d={d}: splitting still reported"),
        )?;
        seen.push(format!("d={d} {}", r.verdict));
    }

    let inst = instance(2, 0, Variant::H1);
    let f = inst.field.clone();
    let k = kernel_invariants(&inst.lambda).unwrap();
    let desc = kernel_action(&f, 2, &inst.lifts, &k).unwrap();
    let invs = composed_invariants(&f, 2, &k, &desc).unwrap().as_array();
    let rep = kemper_check(61, &invs, &inst.lifts).map_err(|e| e.to_string())?;
    check(
        rep.verdict.to_string() == "FAIL(degree-product)",
        format!("got {}", rep.verdict),
    )?;
    seen.push(format!("order 61 {}", rep.verdict));
    Ok(seen.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("group orders by closure", group_orders),
        ("cocycle identities", cocycle_identities),
        ("H_gamma closure", h_gamma_closure),
        ("splitting", splitting),
        ("kernel invariants", kernel_invariant_checks),
        ("Dickson identities", dickson_identities),
        ("verify instances", verify_instances),
        ("oracle agreement", oracle_agreement),
        ("expression round trip", expression_round_trip),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({ms} ms)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({ms} ms)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
