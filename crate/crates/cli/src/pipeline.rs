use std::time::Instant;

use modinv_core::ffield::format_hex;
use modinv_core::grouplift::{closure, lifts_conjugate_to_h1, verify_splitting};
use modinv_core::invariants::{
    composed_invariants, kernel_action, kernel_invariants, ActionDescriptor,
};
use modinv_core::verify::{kemper_check, oracle_sweep, Clause, FixedSpaceOracle, Verdict};
use modinv_core::{Error, Fel, Field, Mat3};

use crate::config::{Instance, VerifyConfig};
use crate::report::{ActionEntry, Moduli, OracleEntry, SplitSummary, VerificationReport};
use crate::CliError;

/// The check a failed run stopped at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailedCheck {
    /// Group closure exceeded `--max-group`.
    Closure,
    Splitting,
    KernelAction,
    Kemper(Clause),
    Oracle,
}

impl FailedCheck {
    pub fn as_str(&self) -> &'static str {
        match self {
            FailedCheck::Closure => "closure",
            FailedCheck::Splitting => "splitting",
            FailedCheck::KernelAction => "kernel-action",
            FailedCheck::Kemper(c) => c.as_str(),
            FailedCheck::Oracle => "oracle",
        }
    }
}

fn hex(a: Fel) -> String {
    a.to_string()
}

fn action_entries(desc: &ActionDescriptor) -> Vec<ActionEntry> {
    desc.actions
        .iter()
        .map(|a| ActionEntry {
            generator: a.generator.rows().map(|r| r.map(hex)),
            linear: a.linear.map(|r| r.map(hex)),
            offset: a.offset.map(hex),
        })
        .collect()
}

fn action_note(field: &Field, n: u32, desc: &ActionDescriptor) -> Result<String, Error> {
    if desc.is_linear() {
        let by_block = desc.actions.iter().all(|a| a.linear == a.generator.block());
        return Ok(if by_block {
            "linear: every lift acts on (f_x, f_y) through its SL2 block with zero offsets".into()
        } else {
            "linear: zero offsets on (f_x, f_y)".into()
        });
    }
    let e = field.subfield_generator(n)?;
    let ei = field.inv(e)?;
    let diag = &desc.actions[0];
    let alpha = desc.alpha;
    if diag.linear == [[ei, Fel::ZERO], [Fel::ZERO, e]] && diag.offset[1] == field.mul(e, alpha) {
        Ok(format!(
            "affine: the diagonal lift maps f_x to e^-1 f_x + alpha z^{qd} and f_y to e f_y + e alpha z^{qd} with e = {e}, alpha = {alpha}",
            qd = desc.z_power
        ))
    } else {
        Ok("affine: offsets as listed per lift".into())
    }
}

fn fail(report: &mut VerificationReport, check: FailedCheck, message: Option<String>) {
    report.verdict = format!("FAIL({})", check.as_str());
    report.failed_clause = Some(check.as_str().to_string());
    report.message = message;
}

/// Validates the configuration and runs the full pipeline.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    let start = Instant::now();
    let instance = Instance::from_config(cfg)?;
    let mut report = verify_instance(&instance)?;
    if cfg.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Runs construction and every check on a validated instance.
///
/// A failed check is recorded in the report; only unexpected internal errors
/// are returned as `Err`.
pub fn verify_instance(inst: &Instance) -> Result<VerificationReport, CliError> {
    let field = &inst.field;
    let n = inst.n;
    let ls = &inst.lambda;
    let mut report = VerificationReport {
        n,
        d: inst.d(),
        variant: inst.variant.to_string(),
        moduli: Moduli {
            q: format_hex(inst.modulus_q),
            ambient: format_hex(field.modulus()),
        },
        lambda_basis: ls.basis().iter().map(|b| hex(*b)).collect(),
        group_order: None,
        split: None,
        alpha: None,
        gamma: None,
        action_note: None,
        action: Vec::new(),
        degrees: None,
        degree_product: None,
        jacobian_nonzero: None,
        invariance: None,
        oracle: Vec::new(),
        verdict: Verdict::Polynomial.to_string(),
        failed_clause: None,
        message: None,
        elapsed_ms: None,
    };

    let gens = group_generators(inst);
    let group = match closure(field, &gens, inst.max_group) {
        Ok(g) => g,
        Err(Error::ClosureCap(cap)) => {
            fail(
                &mut report,
                FailedCheck::Closure,
                Some(format!("group closure exceeded {cap} elements")),
            );
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.group_order = Some(group.len());

    let kernel = ls.kernel_group();
    let split = match verify_splitting(field, &group, &kernel, &inst.lifts, inst.max_group) {
        Ok(s) => s,
        Err(e @ (Error::NotNormal | Error::ClosureCap(_))) => {
            fail(&mut report, FailedCheck::Splitting, Some(e.to_string()));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    let summary = SplitSummary {
        kernel_order: split.kernel_order,
        complement_order: split.complement_order,
        intersection_order: split.intersection_order,
        kernel_is_restriction_kernel: split.kernel_is_restriction_kernel,
        complement_in_group: split.complement_in_group,
        conjugate_to_h1: lifts_conjugate_to_h1(field, n, &inst.lifts)?,
        is_split: split.is_split(),
    };
    report.split = Some(summary);
    if !split.is_split() {
        fail(
            &mut report,
            FailedCheck::Splitting,
            Some(format!(
                "kernel {} * complement {} vs group {}, intersection {}, kernel is restriction kernel: {}",
                split.kernel_order,
                split.complement_order,
                split.group_order,
                split.intersection_order,
                split.kernel_is_restriction_kernel
            )),
        );
        return Ok(report);
    }

    let kinv = kernel_invariants(ls)?;
    let composed = kernel_action(field, n, &inst.lifts, &kinv).and_then(|desc| {
        let comp = composed_invariants(field, n, &kinv, &desc)?;
        Ok((desc, comp))
    });
    let (desc, composed) = match composed {
        Ok(pair) => pair,
        Err(e @ Error::NotAffineAction(_)) => {
            fail(&mut report, FailedCheck::KernelAction, Some(e.to_string()));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.alpha = Some(hex(desc.alpha));
    report.gamma = Some(hex(composed.gamma));
    report.action_note = Some(action_note(field, n, &desc)?);
    report.action = action_entries(&desc);

    let invs = composed.as_array();
    let kemper = kemper_check(group.len() as u64, &invs, group.generators())?;
    report.degrees = Some(kemper.degrees);
    report.degree_product = Some(kemper.degree_product);
    report.jacobian_nonzero = Some(kemper.jacobian_nonzero);
    report.invariance = Some(kemper.invariance.clone());

    if let Some(k) = inst.oracle_max_degree {
        let oracle = FixedSpaceOracle::new(field, group.generators(), 3)?;
        let rows = oracle_sweep(&oracle, &invs, 0..=k)?;
        report.oracle = rows
            .iter()
            .map(|r| OracleEntry {
                degree: r.degree,
                fixed_dim: r.fixed_dim,
                generated_dim: r.generated_dim,
            })
            .collect();
    }

    if let Verdict::Fail(clause) = kemper.verdict {
        let msg = match clause {
            Clause::Invariance => "a candidate invariant is moved by a generator".to_string(),
            Clause::DegreeProduct => format!(
                "degree product {} differs from group order {}",
                kemper.degree_product,
                group.len()
            ),
            Clause::Jacobian => "the Jacobian determinant vanishes".to_string(),
        };
        fail(&mut report, FailedCheck::Kemper(clause), Some(msg));
    } else if let Some(bad) = report
        .oracle
        .iter()
        .find(|r| r.fixed_dim != r.generated_dim)
    {
        let msg = format!(
            "degree {}: fixed space dimension {} vs generated dimension {}",
            bad.degree, bad.fixed_dim, bad.generated_dim
        );
        fail(&mut report, FailedCheck::Oracle, Some(msg));
    }
    Ok(report)
}

/// Group generators of an instance: lifts followed by kernel translations.
pub fn group_generators(inst: &Instance) -> Vec<Mat3> {
    let mut gens = inst.lifts.clone();
    gens.extend(inst.lambda.kernel_generators());
    gens
}
