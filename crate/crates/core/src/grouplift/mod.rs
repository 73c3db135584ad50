//! The reflection groups `G = N x| H` over GF(2^n): generators of SL2, their
//! lifts to 3x3 matrices, the skew-homomorphism `f`, the subgroups `H_gamma`,
//! the kernel `N`, and the splitting check.

mod group;
mod lambda;
mod mat3;

use std::fmt;
use std::str::FromStr;

pub use group::{closure, GroupSet, DEFAULT_CLOSURE_CAP};
pub use lambda::LambdaSpace;
pub use mat3::Mat3;

use crate::error::{Error, Result};
use crate::ffield::{Fel, Field};

fn check_in_subfield(field: &Field, n: u32, values: &[Fel]) -> Result<()> {
    field.check_subfield_degree(n)?;
    match values.iter().find(|&&a| !field.in_subfield(a, n)) {
        Some(a) => Err(Error::ForeignElement(format!(
            "{a} is not in the subfield GF(2^{n})"
        ))),
        None => Ok(()),
    }
}

/// `f(a, b) = 1 + a + b + a^(2^(n-1)) b^(2^(n-1))` on GF(2^n).
pub fn cocycle_f(field: &Field, a: Fel, b: Fel, n: u32) -> Result<Fel> {
    Ok(Fel::ONE + cocycle_g(field, a, b, n)?)
}

/// `g(a, b) = f(a, b) + 1`, homogeneous of degree one over GF(2^n).
pub fn cocycle_g(field: &Field, a: Fel, b: Fel, n: u32) -> Result<Fel> {
    check_in_subfield(field, n, &[a, b])?;
    let half = n - 1;
    Ok(a + b + field.mul(field.frobenius(a, half), field.frobenius(b, half)))
}

/// The upper-triangular, lower-triangular and diagonal generators of
/// SL2(GF(2^n)), embedded with trivial third row and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sl2Generators {
    pub r: Mat3,
    pub s: Mat3,
    pub t: Mat3,
    /// Generator of GF(2^n)^* used in `r`.
    pub e: Fel,
}

impl Sl2Generators {
    pub fn to_vec(&self) -> Vec<Mat3> {
        vec![self.r, self.s, self.t]
    }
}

const S_BLOCK: [[Fel; 2]; 2] = [[Fel::ONE, Fel::ONE], [Fel::ZERO, Fel::ONE]];
const T_BLOCK: [[Fel; 2]; 2] = [[Fel::ONE, Fel::ZERO], [Fel::ONE, Fel::ONE]];

pub fn sl2_generators(field: &Field, n: u32) -> Result<Sl2Generators> {
    let e = field.subfield_generator(n)?;
    let r_block = [[field.inv(e)?, Fel::ZERO], [Fel::ZERO, e]];
    Ok(Sl2Generators {
        r: Mat3::from_block(r_block, [Fel::ZERO; 2]),
        s: Mat3::from_block(S_BLOCK, [Fel::ZERO; 2]),
        t: Mat3::from_block(T_BLOCK, [Fel::ZERO; 2]),
        e,
    })
}

/// Which lift of the diagonal generator the group contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Diagonal generator lifted with third column `(1, e)`.
    H1,
    /// Diagonal generator lifted block-diagonally.
    H0,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::H1 => "h1",
            Variant::H0 => "h0",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "h1" => Ok(Variant::H1),
            "h0" => Ok(Variant::H0),
            other => Err(Error::InvalidArgument(format!(
                "unknown variant {other:?} (expected h1 or h0)"
            ))),
        }
    }
}

/// Lifts `(R~ or R~', S~, T~)` of the SL2 generators.
pub fn lift_generators(field: &Field, n: u32, variant: Variant) -> Result<Sl2Generators> {
    let mut gens = sl2_generators(field, n)?;
    if variant == Variant::H1 {
        gens.r = gens.r.with_column([Fel::ONE, gens.e]);
    }
    Ok(gens)
}

/// Every element of SL2(GF(2^n)) as a 2x2 block, in lexicographic order.
pub fn sl2_blocks(field: &Field, n: u32) -> Result<Vec<[[Fel; 2]; 2]>> {
    let sub = field.subfield_elements(n)?;
    let mut out = Vec::new();
    for &a in &sub {
        for &b in &sub {
            for &c in &sub {
                for &d in &sub {
                    if (field.mul(a, d) + field.mul(b, c)).is_one() {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `|SL2(GF(2^n))| = q (q^2 - 1)`.
pub fn sl2_order(n: u32) -> u64 {
    let q = 1u64 << n;
    q * (q * q - 1)
}

/// The cocycle column `gamma * (f(a, b), f(c, d))` of a block.
pub fn cocycle_column(field: &Field, n: u32, gamma: Fel, block: [[Fel; 2]; 2]) -> Result<[Fel; 2]> {
    Ok([
        field.mul(gamma, cocycle_f(field, block[0][0], block[0][1], n)?),
        field.mul(gamma, cocycle_f(field, block[1][0], block[1][1], n)?),
    ])
}

/// The set `H_gamma` of SL2 blocks with cocycle column `gamma * f`,
/// checked to be multiplicatively closed.
pub fn h_gamma(field: &Field, n: u32, gamma: Fel) -> Result<GroupSet> {
    if !field.contains(gamma) {
        return Err(Error::ForeignElement(format!("gamma {gamma}")));
    }
    let mut elements = Vec::new();
    for block in sl2_blocks(field, n)? {
        elements.push(Mat3::from_block(
            block,
            cocycle_column(field, n, gamma, block)?,
        ));
    }
    let gens = lift_generators(field, n, Variant::H0)?
        .to_vec()
        .into_iter()
        .map(|g| cocycle_column(field, n, gamma, g.block()).map(|col| g.with_column(col)))
        .collect::<Result<Vec<_>>>()?;
    let set = GroupSet::from_parts(elements, gens);
    if !set.is_closed(field) {
        return Err(Error::InvalidArgument(format!(
            "H_gamma for gamma = {gamma} is not closed"
        )));
    }
    Ok(set)
}

/// `D^-1 g D` for `D = diag(1, 1, c)`, which scales the third column by `c`.
pub fn rescale_z(field: &Field, g: &Mat3, c: Fel) -> Mat3 {
    let [a, b] = g.column();
    g.with_column([field.mul(c, a), field.mul(c, b)])
}

/// True iff conjugating every lift by `diag(1, 1, 1 + e^-1)` lands in `H_1`.
pub fn lifts_conjugate_to_h1(field: &Field, n: u32, lifts: &[Mat3]) -> Result<bool> {
    let e = field.subfield_generator(n)?;
    let c = Fel::ONE + field.inv(e)?;
    for g in lifts {
        let h = rescale_z(field, g, c);
        if h.column() != cocycle_column(field, n, Fel::ONE, h.block())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the semidirect-product test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub group_order: usize,
    pub kernel_order: usize,
    /// Order of the subgroup generated by the lifts.
    pub complement_order: usize,
    pub intersection_order: usize,
    /// `N` equals the set of elements of `G` with identity block.
    pub kernel_is_restriction_kernel: bool,
    /// The lifts lie in `G`.
    pub complement_in_group: bool,
}

impl SplitReport {
    /// `G = N H` with `N` the restriction kernel and `N` meeting `H` trivially.
    pub fn is_split(&self) -> bool {
        self.kernel_is_restriction_kernel
            && self.complement_in_group
            && self.intersection_order == 1
            && self.complement_order * self.kernel_order == self.group_order
    }
}

/// Checks that `G` is the semidirect product of `N` and the group generated
/// by `lifts`.
///
/// Fails with [`Error::NotNormal`] unless `N` lies in `G` and is stable under
/// conjugation by the generators of `G`.
pub fn verify_splitting(
    field: &Field,
    group: &GroupSet,
    kernel: &GroupSet,
    lifts: &[Mat3],
    cap: usize,
) -> Result<SplitReport> {
    if !kernel.is_subset_of(group) {
        return Err(Error::NotNormal);
    }
    for g in group.generators() {
        let gi = g.inverse(field)?;
        for k in kernel.iter() {
            if !kernel.contains(&gi.mul(k, field).mul(g, field)) {
                return Err(Error::NotNormal);
            }
        }
    }
    let complement = closure(field, lifts, cap)?;
    let restriction = group.restriction_kernel();
    Ok(SplitReport {
        group_order: group.len(),
        kernel_order: kernel.len(),
        complement_order: complement.len(),
        intersection_order: complement.intersection_len(kernel),
        kernel_is_restriction_kernel: restriction.len() == kernel.len()
            && restriction.iter().all(|g| kernel.contains(g)),
        complement_in_group: complement.is_subset_of(group),
    })
}
