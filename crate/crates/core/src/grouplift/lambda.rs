use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Fel, Field};

use super::{GroupSet, Mat3};

/// A GF(2^n)-subspace `L` of an ambient field, given by a basis.
///
/// The translation part of the kernel is `L x L`.
#[derive(Clone, Debug)]
pub struct LambdaSpace {
    field: Arc<Field>,
    n: u32,
    basis: Vec<Fel>,
    span: Vec<Fel>,
}

impl LambdaSpace {
    pub fn new(field: Arc<Field>, n: u32, basis: Vec<Fel>) -> Result<LambdaSpace> {
        field.check_subfield_degree(n)?;
        if let Some(b) = basis.iter().find(|b| !field.contains(**b)) {
            return Err(Error::ForeignElement(format!("basis element {b}")));
        }
        let scalars = field.subfield_elements(n)?;
        let mut span = vec![Fel::ZERO];
        for &b in &basis {
            let mut next = Vec::with_capacity(span.len() * scalars.len());
            for &s in &scalars {
                let sb = field.mul(s, b);
                next.extend(span.iter().map(|&v| v + sb));
            }
            span = next;
        }
        let distinct: BTreeSet<Fel> = span.iter().copied().collect();
        if distinct.len() != span.len() {
            return Err(Error::DependentBasis(n));
        }
        Ok(LambdaSpace {
            field,
            n,
            basis,
            span: distinct.into_iter().collect(),
        })
    }

    /// The smallest faithful instance of dimension `d`: the empty basis for
    /// `d = 0`, and otherwise `{1, th, ..., th^(d-1)}` with `th` the
    /// canonical generator of GF(2^(dn)), which is also the ambient field.
    pub fn default_for(n: u32, d: u32) -> Result<LambdaSpace> {
        let degree = n
            .checked_mul(d.max(1))
            .ok_or_else(|| Error::InvalidArgument("n * d overflows".into()))?;
        let field = Arc::new(Field::with_default_modulus(degree)?);
        Self::default_in(field, n, d)
    }

    /// Default basis inside a given ambient field of degree divisible by `dn`.
    pub fn default_in(field: Arc<Field>, n: u32, d: u32) -> Result<LambdaSpace> {
        if d == 0 {
            return LambdaSpace::new(field, n, Vec::new());
        }
        let theta = field.subfield_generator(n * d)?;
        let basis = (0..d as u64).map(|i| field.pow(theta, i)).collect();
        LambdaSpace::new(field, n, basis)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn subfield_degree(&self) -> u32 {
        self.n
    }

    /// `d`, the dimension over GF(2^n).
    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn basis(&self) -> &[Fel] {
        &self.basis
    }

    /// All `2^(dn)` elements of the span, sorted by bit value.
    pub fn elements(&self) -> &[Fel] {
        &self.span
    }

    /// `|L| = 2^(dn)`.
    pub fn cardinality(&self) -> u64 {
        self.span.len() as u64
    }

    /// All pairs `(alpha, beta)` in `L x L`, lexicographic.
    pub fn enumerate_pairs(&self) -> Vec<(Fel, Fel)> {
        let mut out = Vec::with_capacity(self.span.len() * self.span.len());
        for &a in &self.span {
            for &b in &self.span {
                out.push((a, b));
            }
        }
        out
    }

    /// Translations generating the kernel as an abelian 2-group: `(s*b, 0)`
    /// and `(0, s*b)` for `b` in the basis and `s` in `{1, e, ..., e^(n-1)}`.
    pub fn kernel_generators(&self) -> Vec<Mat3> {
        let e = self
            .field
            .subfield_generator(self.n)
            .expect("validated at construction");
        let mut gens = Vec::new();
        for &b in &self.basis {
            for i in 0..self.n as u64 {
                let sb = self.field.mul(self.field.pow(e, i), b);
                gens.push(Mat3::translation(sb, Fel::ZERO));
                gens.push(Mat3::translation(Fel::ZERO, sb));
            }
        }
        gens
    }

    /// The kernel group `N` of all translations by `L x L`.
    pub fn kernel_group(&self) -> GroupSet {
        let elements = self
            .enumerate_pairs()
            .into_iter()
            .map(|(a, b)| Mat3::translation(a, b))
            .collect();
        GroupSet::from_parts(elements, self.kernel_generators())
    }
}
