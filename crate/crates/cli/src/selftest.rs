use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use modinv_core::grouplift::{cocycle_f, cocycle_g, sl2_blocks, sl2_generators};
use modinv_core::invariants::{
    complement_gamma, dickson_pair, dickson_support_check, dickson_u, kernel_invariants,
    lifted_invariants,
};
use modinv_core::verify::{oracle_sweep, FixedSpaceOracle};
use modinv_core::{Fel, Field, LambdaSpace};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Cocycle,
    Dickson,
    Oracle,
    All,
}

impl FromStr for Scope {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Scope, CliError> {
        match s {
            "cocycle" => Ok(Scope::Cocycle),
            "dickson" => Ok(Scope::Dickson),
            "oracle" => Ok(Scope::Oracle),
            "all" => Ok(Scope::All),
            other => Err(CliError::Invalid(format!(
                "unknown selftest scope {other:?} (expected cocycle, dickson, oracle or all)"
            ))),
        }
    }
}

/// One suite of checks for one subfield degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub n: u32,
    pub checked: u64,
    pub passed: u64,
    pub detail: Option<String>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.checked == self.passed
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<12} n={} {}/{} pass",
            if self.ok() { "ok  " } else { "FAIL" },
            self.suite,
            self.n,
            self.passed,
            self.checked
        )?;
        if let Some(d) = &self.detail {
            write!(f, "; {d}")?;
        }
        Ok(())
    }
}

/// Largest subfield degree covered by the exhaustive suites.
pub const MAX_SELFTEST_N: u32 = 3;

fn field(n: u32) -> Result<Arc<Field>, CliError> {
    Ok(Arc::new(Field::with_default_modulus(n)?))
}

fn tally(name: &str, n: u32, results: impl IntoIterator<Item = bool>) -> SuiteResult {
    let (mut checked, mut passed) = (0, 0);
    for ok in results {
        checked += 1;
        passed += u64::from(ok);
    }
    SuiteResult {
        suite: name.to_string(),
        n,
        checked,
        passed,
        detail: None,
    }
}

/// Cocycle identity and its `g`-variant over all blocks and all `(p, q)`,
/// and homogeneity of `g` over all `(t, a, b)`.
pub fn cocycle_suite(n: u32) -> Result<Vec<SuiteResult>, CliError> {
    let f = field(n)?;
    let elems: Vec<Fel> = f.elements().collect();
    let mut identity = Vec::new();
    for [[a, b], [c, d]] in sl2_blocks(&f, n)? {
        let (fab, fcd) = (cocycle_f(&f, a, b, n)?, cocycle_f(&f, c, d, n)?);
        for &p in &elems {
            for &q in &elems {
                let common = f.mul(p, fab) + f.mul(q, fcd);
                let (s, t) = (f.mul(p, a) + f.mul(q, c), f.mul(p, b) + f.mul(q, d));
                let holds_f = common + cocycle_f(&f, p, q, n)? == cocycle_f(&f, s, t, n)?;
                let holds_g = common + cocycle_g(&f, p, q, n)? == cocycle_g(&f, s, t, n)?;
                identity.push(holds_f && holds_g);
            }
        }
    }
    let mut homogeneity = Vec::new();
    for &t in &elems {
        for &a in &elems {
            for &b in &elems {
                let lhs = cocycle_g(&f, f.mul(t, a), f.mul(t, b), n)?;
                homogeneity.push(lhs == f.mul(t, cocycle_g(&f, a, b, n)?));
            }
        }
    }
    Ok(vec![
        tally("cocycle", n, identity),
        tally("homogeneity", n, homogeneity),
    ])
}

/// `u^(q-1) = c0`, lifted analogues with restrictions to `z = 0`, and the
/// support property of the kernel invariants for `d <= 2`.
pub fn dickson_suite(n: u32) -> Result<Vec<SuiteResult>, CliError> {
    let f = field(n)?;
    let q = 1u32 << n;
    let (c0, c1) = dickson_pair(&f, n)?;
    let u = dickson_u(&f, n)?;
    let mut checks = vec![u.pow(q - 1)? == c0];
    let mut gammas = vec![Fel::ONE];
    if n > 1 {
        gammas.push(complement_gamma(&f, n)?);
    }
    for gamma in gammas {
        let l = lifted_invariants(&f, n, gamma)?;
        checks.push(l.u.pow(q - 1)? == l.c0);
        checks.push(l.u.restrict_z0() == u);
        checks.push(l.c1.restrict_z0() == c1);
    }
    let mut dickson = tally("dickson", n, checks);
    dickson.detail = Some(format!("c0 = {c0}, c1 = {c1}"));

    let mut support = Vec::new();
    for d in 0..=2 {
        if n * d.max(1) > modinv_core::ffield::MAX_DEGREE {
            continue;
        }
        let k = kernel_invariants(&LambdaSpace::default_for(n, d)?)?;
        support.push(dickson_support_check(&k.fx, n, d));
        support.push(dickson_support_check(&k.fy, n, d));
    }
    Ok(vec![dickson, tally("support", n, support)])
}

/// Two-variable SL2(GF(2^n)) fixed-space dimensions against the span of
/// monomials in `(c0, c1)`, degrees `0..=15`.
pub fn oracle_suite(n: u32) -> Result<Vec<SuiteResult>, CliError> {
    let f = field(n)?;
    let (c0, c1) = dickson_pair(&f, n)?;
    let gens = sl2_generators(&f, n)?.to_vec();
    let oracle = FixedSpaceOracle::new(&f, &gens, 2)?;
    let rows = oracle_sweep(&oracle, &[c0, c1], 0..=15)?;
    let mut out = tally("oracle", n, rows.iter().map(|r| r.agrees()));
    let dims: Vec<String> = rows.iter().map(|r| r.fixed_dim.to_string()).collect();
    out.detail = Some(format!("dimensions by degree 0..15: {}", dims.join(" ")));
    Ok(vec![out])
}

/// Runs the suites in `scope` for subfield degree `n`, or for every default
/// degree (1..=3 for cocycle and dickson, 1 for oracle).
pub fn run_selftest(scope: Scope, n: Option<u32>) -> Result<Vec<SuiteResult>, CliError> {
    if let Some(n) = n {
        if !(1..=MAX_SELFTEST_N).contains(&n) {
            return Err(CliError::Invalid(format!(
                "selftest --n must lie in 1..={MAX_SELFTEST_N}, got {n}"
            )));
        }
    }
    let exhaustive: Vec<u32> = n.map_or((1..=MAX_SELFTEST_N).collect(), |n| vec![n]);
    let oracle_ns: Vec<u32> = n.map_or(vec![1], |n| vec![n]);
    let mut out = Vec::new();
    if matches!(scope, Scope::Cocycle | Scope::All) {
        for &n in &exhaustive {
            out.extend(cocycle_suite(n)?);
        }
    }
    if matches!(scope, Scope::Dickson | Scope::All) {
        for &n in &exhaustive {
            out.extend(dickson_suite(n)?);
        }
    }
    if matches!(scope, Scope::Oracle | Scope::All) {
        for &n in &oracle_ns {
            out.extend(oracle_suite(n)?);
        }
    }
    Ok(out)
}
