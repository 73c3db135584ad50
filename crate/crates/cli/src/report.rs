use std::fmt::Write as _;

use serde::Serialize;

/// Outcome of one `verify` run. Field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: u32,
    pub d: u32,
    pub variant: String,
    pub moduli: Moduli,
    pub lambda_basis: Vec<String>,
    pub group_order: Option<usize>,
    pub split: Option<SplitSummary>,
    pub alpha: Option<String>,
    pub gamma: Option<String>,
    pub action_note: Option<String>,
    pub action: Vec<ActionEntry>,
    pub degrees: Option<[u32; 3]>,
    pub degree_product: Option<u64>,
    pub jacobian_nonzero: Option<bool>,
    /// One row per group generator: whether each of the three invariants is fixed.
    pub invariance: Option<Vec<[bool; 3]>>,
    pub oracle: Vec<OracleEntry>,
    pub verdict: String,
    pub failed_clause: Option<String>,
    pub message: Option<String>,
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Moduli {
    pub q: String,
    pub ambient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitSummary {
    pub kernel_order: usize,
    pub complement_order: usize,
    pub intersection_order: usize,
    pub kernel_is_restriction_kernel: bool,
    pub complement_in_group: bool,
    pub conjugate_to_h1: bool,
    pub is_split: bool,
}

/// Action of one lift on `(f_x, f_y)`:
/// `f_x -> linear[0][0] f_x + linear[0][1] f_y + offset[0] z^(q^d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionEntry {
    pub generator: [[String; 3]; 2],
    pub linear: [[String; 2]; 2],
    pub offset: [String; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleEntry {
    pub degree: u32,
    pub fixed_dim: usize,
    pub generated_dim: usize,
}

impl VerificationReport {
    pub fn is_polynomial(&self) -> bool {
        self.failed_clause.is_none()
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "instance    n={} d={} variant={} modulus_q={} ambient={}",
            self.n, self.d, self.variant, self.moduli.q, self.moduli.ambient
        );
        if let Some(order) = self.group_order {
            let _ = write!(out, "group       order {order}");
            if let Some(s) = &self.split {
                let _ = write!(
                    out,
                    " = {} (kernel) * {} (complement), intersection {}, split {}",
                    s.kernel_order, s.complement_order, s.intersection_order, s.is_split
                );
            }
            out.push('\n');
        }
        if let Some(note) = &self.action_note {
            let _ = writeln!(out, "action      {note}");
        }
        if let (Some(deg), Some(prod)) = (self.degrees, self.degree_product) {
            let _ = writeln!(
                out,
                "invariants  degrees ({}, {}, {}), product {prod}, jacobian nonzero {}",
                deg[0],
                deg[1],
                deg[2],
                self.jacobian_nonzero.unwrap_or(false)
            );
        }
        if let (Some(first), Some(last)) = (self.oracle.first(), self.oracle.last()) {
            let bad: Vec<u32> = self
                .oracle
                .iter()
                .filter(|r| r.fixed_dim != r.generated_dim)
                .map(|r| r.degree)
                .collect();
            if bad.is_empty() {
                let _ = writeln!(
                    out,
                    "oracle      degrees {}..{} agree",
                    first.degree, last.degree
                );
            } else {
                let _ = writeln!(out, "oracle      disagreement in degrees {bad:?}");
            }
        }
        if let Some(msg) = &self.message {
            let _ = writeln!(out, "detail      {msg}");
        }
        let _ = writeln!(out, "verdict     {}", self.verdict);
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed     {ms} ms");
        }
        out
    }
}
