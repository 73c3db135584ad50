//! Checking that three invariants freely generate the invariant ring.
//!
//! [`kemper_check`] applies the degree/Jacobian criterion. The oracle pair
//! [`graded_fixed_dimension`] / [`generated_dimension`] computes, degree by
//! degree, the dimension of the space of invariants (as a simultaneous kernel,
//! no averaging) and the dimension of the span of monomials in the candidate
//! generators; free generation predicts they agree. [`express_in_generators`]
//! rewrites an invariant in the generators by restricting to `z = 0`,
//! subtracting and dividing by `z`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffield::{Fel, Field};
use crate::grouplift::Mat3;
use crate::linalg;
use crate::mvpoly::{format_terms, jacobian_det, Monomial, MultiPoly, Substitution, Var};

/// Default degree cap of the fixed-space oracle.
pub const DEFAULT_ORACLE_DEGREE_CAP: u32 = 60;

/// `act(p, g) = p` for every `g` in `gens`.
pub fn is_invariant(p: &MultiPoly, gens: &[Mat3]) -> Result<bool> {
    for g in gens {
        if p.act(g)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A clause of the degree/Jacobian criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    Invariance,
    DegreeProduct,
    Jacobian,
}

impl Clause {
    pub fn as_str(&self) -> &'static str {
        match self {
            Clause::Invariance => "invariance",
            Clause::DegreeProduct => "degree-product",
            Clause::Jacobian => "jacobian",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Polynomial,
    Fail(Clause),
}

impl Verdict {
    pub fn is_polynomial(&self) -> bool {
        matches!(self, Verdict::Polynomial)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Polynomial => f.write_str("POLYNOMIAL"),
            Verdict::Fail(c) => write!(f, "FAIL({c})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KemperReport {
    pub group_order: u64,
    pub degrees: [u32; 3],
    pub degree_product: u64,
    /// `invariance[g][i]`: invariant `i` is fixed by generator `g`.
    pub invariance: Vec<[bool; 3]>,
    pub jacobian_nonzero: bool,
    pub verdict: Verdict,
}

impl KemperReport {
    pub fn all_invariant(&self) -> bool {
        self.invariance.iter().flatten().all(|&b| b)
    }
}

/// The degree/Jacobian criterion for three homogeneous invariants.
///
/// Every clause is evaluated; the verdict names the first failing one in the
/// order invariance, degree product, Jacobian.
pub fn kemper_check(
    group_order: u64,
    invs: &[MultiPoly; 3],
    gens: &[Mat3],
) -> Result<KemperReport> {
    if invs.iter().any(|p| p.is_zero() || !p.is_homogeneous()) {
        return Err(Error::NotHomogeneous);
    }
    let degrees = invs.each_ref().map(|p| p.degree().unwrap_or(0));
    let degree_product = degrees.iter().map(|&d| d as u64).product();
    let mut invariance = Vec::with_capacity(gens.len());
    for g in gens {
        let mut row = [false; 3];
        for (slot, p) in row.iter_mut().zip(invs) {
            *slot = p.act(g)? == *p;
        }
        invariance.push(row);
    }
    let jacobian_nonzero = !jacobian_det(&invs[0], &invs[1], &invs[2])?.is_zero();
    let mut report = KemperReport {
        group_order,
        degrees,
        degree_product,
        invariance,
        jacobian_nonzero,
        verdict: Verdict::Polynomial,
    };
    report.verdict = if !report.all_invariant() {
        Verdict::Fail(Clause::Invariance)
    } else if degree_product != group_order {
        Verdict::Fail(Clause::DegreeProduct)
    } else if !jacobian_nonzero {
        Verdict::Fail(Clause::Jacobian)
    } else {
        Verdict::Polynomial
    };
    Ok(report)
}

/// Monomials of degree `deg` in `vars` variables, grouped by `z`-exponent.
fn monomial_basis(deg: u32, vars: usize) -> Vec<Monomial> {
    let max_z = if vars == 3 { deg } else { 0 };
    let mut out = Vec::new();
    for c in 0..=max_z {
        for a in (0..=deg - c).rev() {
            out.push(Monomial::new(a, deg - c - a, c));
        }
    }
    out
}

fn to_dense(p: &MultiPoly, index: &HashMap<Monomial, usize>, len: usize) -> Result<Vec<Fel>> {
    let mut v = vec![Fel::ZERO; len];
    for (m, c) in p.terms() {
        let i = index
            .get(m)
            .ok_or_else(|| Error::InvalidArgument(format!("monomial {m:?} outside the basis")))?;
        v[*i] = *c;
    }
    Ok(v)
}

/// Dimension of the degree-`deg` invariants, by exact linear algebra.
#[derive(Clone, Debug)]
pub struct FixedSpaceOracle {
    field: Arc<Field>,
    gens: Vec<Mat3>,
    vars: usize,
    cap: u32,
}

impl FixedSpaceOracle {
    /// With `vars = 2` the polynomials are in `x, y` only and every generator
    /// must have zero third column.
    pub fn new(field: &Arc<Field>, gens: &[Mat3], vars: usize) -> Result<FixedSpaceOracle> {
        if vars != 2 && vars != 3 {
            return Err(Error::InvalidArgument(format!(
                "vars must be 2 or 3, got {vars}"
            )));
        }
        if let Some(g) = gens.iter().find(|g| !g.entries_in(field)) {
            return Err(Error::ForeignElement(format!("generator {g:?}")));
        }
        if vars == 2 && gens.iter().any(|g| g.column() != [Fel::ZERO; 2]) {
            return Err(Error::InvalidArgument(
                "two-variable oracle needs generators fixing the plane z = 0 pointwise in z".into(),
            ));
        }
        Ok(FixedSpaceOracle {
            field: field.clone(),
            gens: gens.to_vec(),
            vars,
            cap: DEFAULT_ORACLE_DEGREE_CAP,
        })
    }

    pub fn with_degree_cap(mut self, cap: u32) -> FixedSpaceOracle {
        self.cap = cap;
        self
    }

    pub fn fixed_dimension(&self, deg: u32) -> Result<usize> {
        Ok(self.fixed_space(deg)?.len())
    }

    /// A basis of the degree-`deg` invariants.
    pub fn fixed_basis(&self, deg: u32) -> Result<Vec<MultiPoly>> {
        let basis = monomial_basis(deg, self.vars);
        Ok(self
            .fixed_space(deg)?
            .into_iter()
            .map(|v| MultiPoly::from_terms(&self.field, basis.iter().copied().zip(v)))
            .collect())
    }

    fn fixed_space(&self, deg: u32) -> Result<Vec<Vec<Fel>>> {
        if deg > self.cap {
            return Err(Error::DegreeCap {
                degree: deg,
                cap: self.cap,
            });
        }
        let f = &*self.field;
        let basis = monomial_basis(deg, self.vars);
        let len = basis.len();
        let index: HashMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let (graded, ungraded): (Vec<Mat3>, Vec<Mat3>) =
            self.gens.iter().partition(|g| g.column() == [Fel::ZERO; 2]);
        let mut subs: Vec<Substitution> = graded
            .iter()
            .map(|g| Substitution::for_matrix(&self.field, g))
            .collect::<Result<_>>()?;

        // Generators with zero third column preserve the z-exponent, so their
        // common fixed space splits into one small block per z-exponent.
        let mut kernel: Vec<Vec<Fel>> = Vec::new();
        let max_z = if self.vars == 3 { deg } else { 0 };
        let mut offset = 0;
        for c in 0..=max_z {
            let width = (deg - c + 1) as usize;
            let block = &basis[offset..offset + width];
            let mut columns: Vec<Vec<Fel>> = vec![Vec::with_capacity(width * subs.len()); width];
            for sub in subs.iter_mut() {
                for (j, m) in block.iter().enumerate() {
                    let img = sub.monomial_image(m)?;
                    let mut v = vec![Fel::ZERO; width];
                    for (mm, cc) in img.terms() {
                        v[index[mm] - offset] += *cc;
                    }
                    v[j] += Fel::ONE;
                    columns[j].extend(v);
                }
            }
            let combos = if subs.is_empty() {
                (0..width)
                    .map(|j| {
                        let mut e = vec![Fel::ZERO; width];
                        e[j] = Fel::ONE;
                        e
                    })
                    .collect()
            } else {
                linalg::null_space(f, &columns)
            };
            for combo in combos {
                let mut v = vec![Fel::ZERO; len];
                v[offset..offset + width].copy_from_slice(&combo);
                kernel.push(v);
            }
            offset += width;
        }

        // Remaining generators cut the space down one at a time.
        for g in &ungraded {
            if kernel.is_empty() {
                break;
            }
            let mut sub = Substitution::for_matrix(&self.field, g)?;
            let mut cache: HashMap<usize, Vec<(usize, Fel)>> = HashMap::new();
            let mut images = Vec::with_capacity(kernel.len());
            for v in &kernel {
                let mut w = v.clone();
                for (i, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(i) {
                        let img = sub.monomial_image(&basis[i])?;
                        e.insert(img.terms().map(|(m, a)| (index[m], *a)).collect());
                    }
                    for &(k, a) in &cache[&i] {
                        w[k] += f.mul(*c, a);
                    }
                }
                images.push(w);
            }
            let combos = linalg::null_space(f, &images);
            kernel = combos
                .iter()
                .map(|combo| {
                    let mut v = vec![Fel::ZERO; len];
                    for (c, kv) in combo.iter().zip(&kernel) {
                        if !c.is_zero() {
                            for (dst, src) in v.iter_mut().zip(kv) {
                                *dst += f.mul(*c, *src);
                            }
                        }
                    }
                    v
                })
                .collect();
        }
        Ok(kernel)
    }
}

/// Dimension of the degree-`deg` polynomials fixed by all of `gens`, in
/// `vars` variables, with the default degree cap.
pub fn graded_fixed_dimension(
    field: &Arc<Field>,
    gens: &[Mat3],
    deg: u32,
    vars: usize,
) -> Result<usize> {
    FixedSpaceOracle::new(field, gens, vars)?.fixed_dimension(deg)
}

/// One degree of an oracle sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub degree: u32,
    pub fixed_dim: usize,
    pub generated_dim: usize,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.fixed_dim == self.generated_dim
    }
}

/// Fixed and generated dimensions for every degree in `degrees`, computed
/// concurrently and returned in degree order.
pub fn oracle_sweep(
    oracle: &FixedSpaceOracle,
    invs: &[MultiPoly],
    degrees: RangeInclusive<u32>,
) -> Result<Vec<OracleRow>> {
    if !degrees.is_empty() && *degrees.end() > oracle.cap {
        return Err(Error::DegreeCap {
            degree: *degrees.end(),
            cap: oracle.cap,
        });
    }
    degrees
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|degree| {
            Ok(OracleRow {
                degree,
                fixed_dim: oracle.fixed_dimension(degree)?,
                generated_dim: generated_dimension(invs, degree)?,
            })
        })
        .collect()
}

/// Cached powers of a fixed polynomial.
struct Powers {
    base: MultiPoly,
    cache: Vec<MultiPoly>,
}

impl Powers {
    fn new(base: &MultiPoly) -> Powers {
        Powers {
            cache: vec![MultiPoly::one(base.field())],
            base: base.clone(),
        }
    }

    fn get(&mut self, e: u32) -> Result<&MultiPoly> {
        while self.cache.len() <= e as usize {
            let k = self.cache.len();
            let next = if k.is_multiple_of(2) {
                self.cache[k / 2].square()?
            } else {
                self.cache[k - 1].checked_mul(&self.base)?
            };
            self.cache.push(next);
        }
        Ok(&self.cache[e as usize])
    }
}

/// Exponent vectors `a` with `sum a_i degrees[i] = deg`, lexicographic.
fn exponent_solutions(degrees: &[u32], deg: u32) -> Vec<Vec<u32>> {
    fn rec(degrees: &[u32], rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match degrees.split_first() {
            None => {
                if rest == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&d, tail)) => {
                for a in 0..=rest / d {
                    prefix.push(a);
                    rec(tail, rest - a * d, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(degrees, deg, &mut Vec::new(), &mut out);
    out
}

fn homogeneous_degrees(invs: &[MultiPoly]) -> Result<Vec<u32>> {
    invs.iter()
        .map(|p| match p.degree() {
            Some(d) if d > 0 && p.is_homogeneous() => Ok(d),
            Some(0) => Err(Error::InvalidArgument("generator of degree 0".into())),
            _ => Err(Error::NotHomogeneous),
        })
        .collect()
}

/// Dimension of the span of the products `prod invs[i]^(a_i)` of degree `deg`.
pub fn generated_dimension(invs: &[MultiPoly], deg: u32) -> Result<usize> {
    let degrees = homogeneous_degrees(invs)?;
    let Some(field) = invs.first().map(|p| p.field().clone()) else {
        return Ok(usize::from(deg == 0));
    };
    let mut powers: Vec<Powers> = invs.iter().map(Powers::new).collect();
    let mut products = Vec::new();
    for exps in exponent_solutions(&degrees, deg) {
        let mut acc = MultiPoly::one(&field);
        for (pw, &a) in powers.iter_mut().zip(&exps) {
            acc = acc.checked_mul(pw.get(a)?)?;
        }
        products.push(acc);
    }
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in &products {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(*m).or_insert(next);
        }
    }
    let rows = products
        .iter()
        .map(|p| {
            let mut v = vec![Fel::ZERO; index.len()];
            for (m, c) in p.terms() {
                v[index[m]] = *c;
            }
            v
        })
        .collect();
    Ok(linalg::rank(&field, rows))
}

/// A polynomial in abstract symbols `U, C, Z` standing for three concrete
/// generators.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorExpr {
    field: Arc<Field>,
    terms: BTreeMap<Monomial, Fel>,
}

impl GeneratorExpr {
    pub fn zero(field: &Arc<Field>) -> GeneratorExpr {
        GeneratorExpr {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: &Arc<Field>,
        terms: impl IntoIterator<Item = (Monomial, Fel)>,
    ) -> GeneratorExpr {
        let mut out = GeneratorExpr::zero(field);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Fel) {
        let slot = self.terms.entry(m).or_insert(Fel::ZERO);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Terms in graded-lex descending order, exponents for `(U, C, Z)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Fel)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Fel {
        self.terms.get(m).copied().unwrap_or(Fel::ZERO)
    }

    /// Replaces `U, C, Z` by the given polynomials.
    pub fn substitute(&self, invs: &[MultiPoly; 3]) -> Result<MultiPoly> {
        let mut powers: Vec<Powers> = invs.iter().map(Powers::new).collect();
        let mut out = MultiPoly::zero(&self.field);
        for (m, c) in &self.terms {
            let mut acc = MultiPoly::constant(&self.field, *c);
            for (pw, &a) in powers.iter_mut().zip(&m.0) {
                acc = acc.checked_mul(pw.get(a)?)?;
            }
            out = out.checked_add(&acc)?;
        }
        Ok(out)
    }
}

impl fmt::Display for GeneratorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(f, self.terms(), ["U", "C", "Z"])
    }
}

impl fmt::Debug for GeneratorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Writes an invariant `p` as a polynomial in `invs = (u, c1, z)`.
///
/// At each step the `z = 0` restriction of the remainder is matched by a
/// polynomial in the restricted `u, c1` (exact linear solve in that degree),
/// the match is subtracted, and the remainder is divided by `z`. The degree
/// drops by one per step.
pub fn express_in_generators(
    p: &MultiPoly,
    invs: &[MultiPoly; 3],
    gens: &[Mat3],
) -> Result<GeneratorExpr> {
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let field = p.field().clone();
    if invs[2] != MultiPoly::var(&field, Var::Z) {
        return Err(Error::InvalidArgument("third generator must be z".into()));
    }
    let degrees = homogeneous_degrees(&invs[..2])?;
    if !is_invariant(p, gens)? {
        return Err(Error::NotInvariant);
    }
    let restricted = [invs[0].restrict_z0(), invs[1].restrict_z0()];
    let mut full_powers: Vec<Powers> = invs[..2].iter().map(Powers::new).collect();
    let mut restricted_powers: Vec<Powers> = restricted.iter().map(Powers::new).collect();

    let mut expr = GeneratorExpr::zero(&field);
    let mut rest = p.clone();
    let mut z_exp = 0u32;
    while let Some(deg) = rest.degree() {
        let head = rest.restrict_z0();
        if !head.is_zero() {
            let sols = exponent_solutions(&degrees, deg);
            let index: HashMap<Monomial, usize> = (0..=deg)
                .map(|a| (Monomial::new(a, deg - a, 0), a as usize))
                .collect();
            let len = deg as usize + 1;
            let mut columns = Vec::with_capacity(sols.len());
            for s in &sols {
                let left = restricted_powers[0].get(s[0])?.clone();
                let prod = left.checked_mul(restricted_powers[1].get(s[1])?)?;
                columns.push(to_dense(&prod, &index, len)?);
            }
            let target = to_dense(&head, &index, len)?;
            let coeffs = linalg::solve(&field, &columns, &target)
                .ok_or(Error::NotExpressible(deg + z_exp))?;
            for (s, c) in sols.iter().zip(coeffs) {
                if c.is_zero() {
                    continue;
                }
                let left = full_powers[0].get(s[0])?.clone();
                let prod = left.checked_mul(full_powers[1].get(s[1])?)?;
                rest = rest.checked_add(&prod.scale(c))?;
                expr.add_term(Monomial::new(s[0], s[1], z_exp), c);
            }
        }
        if rest.is_zero() {
            break;
        }
        rest = rest.div_exact_z()?;
        z_exp += 1;
    }
    Ok(expr)
}
