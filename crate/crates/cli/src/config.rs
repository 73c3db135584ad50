use std::sync::Arc;

use modinv_core::ffield::format_hex;
use modinv_core::grouplift::{lift_generators, DEFAULT_CLOSURE_CAP};
use modinv_core::verify::DEFAULT_ORACLE_DEGREE_CAP;
use modinv_core::{Fel, Field, LambdaSpace, Mat3, Variant};

use crate::CliError;

/// Parameters of one `verify` run, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n: u32,
    /// Defaults to the length of `lambda_basis`, or 0.
    pub d: Option<u32>,
    pub variant: Variant,
    pub modulus_q: Option<u32>,
    pub modulus_ambient: Option<u32>,
    pub lambda_basis: Option<Vec<u32>>,
    pub oracle_max_degree: Option<u32>,
    pub max_group: usize,
    pub timing: bool,
}

impl VerifyConfig {
    pub fn new(n: u32, d: u32, variant: Variant) -> VerifyConfig {
        VerifyConfig {
            n,
            d: Some(d),
            variant,
            modulus_q: None,
            modulus_ambient: None,
            lambda_basis: None,
            oracle_max_degree: None,
            max_group: DEFAULT_CLOSURE_CAP,
            timing: true,
        }
    }
}

/// A validated instance: ambient field, kernel space and lifts.
#[derive(Clone, Debug)]
pub struct Instance {
    pub n: u32,
    pub variant: Variant,
    pub field: Arc<Field>,
    /// Modulus of GF(2^n) as reported; when the ambient degree exceeds `n`
    /// it is validated but the subfield is taken as the Frobenius fixed points.
    pub modulus_q: u32,
    pub lambda: LambdaSpace,
    /// Diagonal lift first.
    pub lifts: Vec<Mat3>,
    pub oracle_max_degree: Option<u32>,
    pub max_group: usize,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn modulus_degree(modulus: u32) -> u32 {
    31 - modulus.leading_zeros().min(31)
}

impl Instance {
    pub fn d(&self) -> u32 {
        self.lambda.dim()
    }

    pub fn from_config(cfg: &VerifyConfig) -> Result<Instance, CliError> {
        let n = cfg.n;
        if n < 2 {
            return Err(invalid(format!(
                "n = {n} is outside the supported range: the construction requires n > 1"
            )));
        }
        let d = match (cfg.d, &cfg.lambda_basis) {
            (Some(d), Some(b)) if b.len() != d as usize => {
                return Err(invalid(format!(
                    "--d {d} does not match the {} lambda basis elements",
                    b.len()
                )))
            }
            (Some(d), _) => d,
            (None, Some(b)) => b.len() as u32,
            (None, None) => 0,
        };
        let modulus_q = match cfg.modulus_q {
            Some(m) => {
                Field::new(n, m).map_err(|e| invalid(format!("--modulus-q: {e}")))?;
                m
            }
            None => Field::default_modulus(n)
                .ok_or_else(|| invalid(format!("no field of degree {n} is supported")))?,
        };
        let field = match cfg.modulus_ambient {
            Some(m) => Field::new(modulus_degree(m), m)
                .map_err(|e| invalid(format!("--modulus-ambient: {e}")))?,
            None => {
                let degree = n
                    .checked_mul(d.max(1))
                    .filter(|&m| m <= modinv_core::ffield::MAX_DEGREE)
                    .ok_or_else(|| {
                        invalid(format!(
                            "ambient degree n * max(d, 1) for n = {n}, d = {d} exceeds 16"
                        ))
                    })?;
                if degree == n {
                    Field::new(n, modulus_q).map_err(|e| invalid(e.to_string()))?
                } else {
                    Field::with_default_modulus(degree).map_err(|e| invalid(e.to_string()))?
                }
            }
        };
        if field.degree() == n && field.modulus() != modulus_q {
            return Err(invalid(format!(
                "--modulus-q {} and --modulus-ambient {} define different fields of degree {n}",
                format_hex(modulus_q),
                format_hex(field.modulus())
            )));
        }
        if field.degree() % n != 0 {
            return Err(invalid(format!(
                "n = {n} does not divide the ambient degree {}",
                field.degree()
            )));
        }
        let field = Arc::new(field);
        let lambda = match &cfg.lambda_basis {
            Some(bits) => {
                let basis = bits
                    .iter()
                    .map(|&b| field.elem(b))
                    .collect::<Result<Vec<Fel>, _>>()
                    .map_err(|e| invalid(format!("--lambda-basis: {e}")))?;
                LambdaSpace::new(field.clone(), n, basis)
            }
            None => LambdaSpace::default_in(field.clone(), n, d),
        }
        .map_err(|e| invalid(format!("lambda space: {e}")))?;
        if let Some(k) = cfg.oracle_max_degree {
            if k > DEFAULT_ORACLE_DEGREE_CAP {
                return Err(invalid(format!(
                    "--oracle-max-degree {k} exceeds the cap {DEFAULT_ORACLE_DEGREE_CAP}"
                )));
            }
        }
        if cfg.max_group == 0 {
            return Err(invalid("--max-group must be positive"));
        }
        let lifts = lift_generators(&field, n, cfg.variant)
            .map_err(|e| invalid(e.to_string()))?
            .to_vec();
        Ok(Instance {
            n,
            variant: cfg.variant,
            field,
            modulus_q,
            lambda,
            lifts,
            oracle_max_degree: cfg.oracle_max_degree,
            max_group: cfg.max_group,
        })
    }
}
