//! Sparse trivariate polynomials in `x, y, z` over GF(2^m).
//!
//! # Text format
//!
//! A polynomial prints as its terms in graded-lex descending order joined by
//! `" + "`. A term is `coeff*x^a*y^b*z^c` where:
//!
//! * `coeff` is the hexadecimal coefficient (`0x3`), omitted when it is 1
//!   unless the term is the constant term;
//! * a variable with exponent 0 is omitted, an exponent of 1 is written
//!   without `^1`;
//! * the zero polynomial prints as `0`.
//!
//! So `x^2*y + 0x2*x*z^3 + 0x1` is a well-formed polynomial. The same grammar
//! is used with other variable names (see [`format_terms`]).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{parse_hex, Fel, Field};
use crate::grouplift::Mat3;

/// Cap on total degree of any polynomial the crate constructs.
pub const MAX_TOTAL_DEGREE: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// An exponent triple, ordered graded-lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn new(x: u32, y: u32, z: u32) -> Monomial {
        Monomial([x, y, z])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let m = Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ]);
        if m.degree() > MAX_TOTAL_DEGREE {
            return Err(Error::DegreeOverflow(MAX_TOTAL_DEGREE));
        }
        Ok(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Writes terms (given in descending order) using `names` for the variables.
pub fn format_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Monomial, &'a Fel)>,
    names: [&str; 3],
) -> fmt::Result {
    let mut first = true;
    for (mono, c) in terms {
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        let mut parts = Vec::new();
        if !c.is_one() || *mono == Monomial::ONE {
            parts.push(c.to_string());
        }
        for (name, &e) in names.iter().zip(mono.0.iter()) {
            match e {
                0 => {}
                1 => parts.push((*name).to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        f.write_str(&parts.join("*"))?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Parses the text format with the given variable names.
pub fn parse_terms(field: &Field, s: &str, names: [&str; 3]) -> Result<BTreeMap<Monomial, Fel>> {
    let mut terms: BTreeMap<Monomial, Fel> = BTreeMap::new();
    let s = s.trim();
    if s == "0" {
        return Ok(terms);
    }
    for term in s.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        let mut coeff = Fel::ONE;
        let mut exps = [0u32; 3];
        for (i, factor) in term.split('*').map(str::trim).enumerate() {
            if i == 0 && factor.starts_with("0x") {
                coeff = field.elem(parse_hex(factor)?)?;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let v = names
                .iter()
                .position(|&n| n == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            exps[v] += exp;
        }
        let mono = Monomial(exps);
        if mono.degree() > MAX_TOTAL_DEGREE {
            return Err(Error::DegreeOverflow(MAX_TOTAL_DEGREE));
        }
        let slot = terms.entry(mono).or_insert(Fel::ZERO);
        *slot += coeff;
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(terms)
}

/// A polynomial in `x, y, z` with coefficients in a shared [`Field`].
#[derive(Clone)]
pub struct MultiPoly {
    field: Arc<Field>,
    terms: BTreeMap<Monomial, Fel>,
}

fn same_field(a: &Arc<Field>, b: &Arc<Field>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl MultiPoly {
    pub fn zero(field: &Arc<Field>) -> MultiPoly {
        MultiPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<Field>) -> MultiPoly {
        MultiPoly::constant(field, Fel::ONE)
    }

    pub fn constant(field: &Arc<Field>, c: Fel) -> MultiPoly {
        MultiPoly::monomial(field, c, Monomial::ONE)
    }

    pub fn var(field: &Arc<Field>, v: Var) -> MultiPoly {
        let mut e = [0; 3];
        e[v.index()] = 1;
        MultiPoly::monomial(field, Fel::ONE, Monomial(e))
    }

    pub fn monomial(field: &Arc<Field>, c: Fel, m: Monomial) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly {
            field: field.clone(),
            terms,
        }
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms(
        field: &Arc<Field>,
        terms: impl IntoIterator<Item = (Monomial, Fel)>,
    ) -> MultiPoly {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            *out.entry(m).or_insert(Fel::ZERO) += c;
        }
        out.retain(|_, c: &mut Fel| !c.is_zero());
        MultiPoly {
            field: field.clone(),
            terms: out,
        }
    }

    /// `a x + b y + c z`.
    pub fn linear(field: &Arc<Field>, a: Fel, b: Fel, c: Fel) -> MultiPoly {
        MultiPoly::from_terms(
            field,
            [
                (Monomial::new(1, 0, 0), a),
                (Monomial::new(0, 1, 0), b),
                (Monomial::new(0, 0, 1), c),
            ],
        )
    }

    pub fn parse(field: &Arc<Field>, s: &str) -> Result<MultiPoly> {
        Ok(MultiPoly {
            field: field.clone(),
            terms: parse_terms(field, s, ["x", "y", "z"])?,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (graded-lex descending) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Fel)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Fel {
        self.terms.get(m).copied().unwrap_or(Fel::ZERO)
    }

    pub fn leading_term(&self) -> Option<(Monomial, Fel)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    fn check_field(&self, other: &MultiPoly) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_field(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    fn add_assign_unchecked(&mut self, other: &MultiPoly) {
        for (m, c) in &other.terms {
            let slot = self.terms.entry(*m).or_insert(Fel::ZERO);
            *slot += *c;
            if slot.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Fel) {
        let slot = self.terms.entry(m).or_insert(Fel::ZERO);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(&self.field));
        }
        let f = &*self.field;
        let mut acc: HashMap<Monomial, Fel> =
            HashMap::with_capacity(self.terms.len() * other.terms.len().min(64));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.checked_mul(mb)?).or_insert(Fel::ZERO) += f.mul(*ca, *cb);
            }
        }
        Ok(MultiPoly::from_terms(&self.field, acc))
    }

    pub fn scale(&self, c: Fel) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.field);
        }
        MultiPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, self.field.mul(*a, c)))
                .collect(),
        }
    }

    /// Multiplies by a single monomial.
    pub fn shift(&self, m: &Monomial) -> Result<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.checked_mul(m)?, *c);
        }
        Ok(MultiPoly {
            field: self.field.clone(),
            terms,
        })
    }

    /// `p^2`, computed termwise since squaring is additive in characteristic 2.
    pub fn square(&self) -> Result<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.checked_mul(m)?, self.field.square(*c));
        }
        Ok(MultiPoly {
            field: self.field.clone(),
            terms,
        })
    }

    pub fn pow(&self, mut e: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.square()?;
            }
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for the i-th variable.
    pub fn compose(&self, images: [&MultiPoly; 3]) -> Result<MultiPoly> {
        for img in images {
            self.check_field(img)?;
        }
        let mut sub = Substitution::new(images.map(MultiPoly::clone));
        sub.apply(self)
    }

    /// Right action of `g` by the dual substitution
    /// `x -> g00 x + g01 y + g02 z`, `y -> g10 x + g11 y + g12 z`, `z -> z`.
    pub fn act(&self, g: &Mat3) -> Result<MultiPoly> {
        Substitution::for_matrix(&self.field, g)?.apply(self)
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> MultiPoly {
        let i = v.index();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] % 2 == 1)
            .map(|(m, c)| {
                let mut e = m.0;
                e[i] -= 1;
                (Monomial(e), *c)
            })
            .collect();
        MultiPoly {
            field: self.field.clone(),
            terms,
        }
    }

    /// `p / z`; every term must contain `z`.
    pub fn div_exact_z(&self) -> Result<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[2] == 0 {
                return Err(Error::NotDivisibleByZ(format!(
                    "term {} has no z",
                    MultiPoly::monomial(&self.field, *c, *m)
                )));
            }
            terms.insert(Monomial([m.0[0], m.0[1], m.0[2] - 1]), *c);
        }
        Ok(MultiPoly {
            field: self.field.clone(),
            terms,
        })
    }

    /// Sets `z = 0`.
    pub fn restrict_z0(&self) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[2] == 0)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Evaluates at a point of the coefficient field.
    pub fn eval(&self, point: [Fel; 3]) -> Fel {
        let f = &*self.field;
        self.terms.iter().fold(Fel::ZERO, |acc, (m, c)| {
            let mut t = *c;
            for (p, &e) in point.iter().zip(m.0.iter()) {
                t = f.mul(t, f.pow(*p, e as u64));
            }
            acc + t
        })
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &MultiPoly) -> bool {
        same_field(&self.field, &other.field) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(f, self.terms(), ["x", "y", "z"])
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs)
            .expect("polynomials over different fields")
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;

    /// Panics on mismatched fields or degree overflow; see [`MultiPoly::checked_mul`].
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial product failed")
    }
}

/// `det (d p_i / d v_j)`, expanded over the six permutations.
pub fn jacobian_det(p1: &MultiPoly, p2: &MultiPoly, p3: &MultiPoly) -> Result<MultiPoly> {
    p1.check_field(p2)?;
    p1.check_field(p3)?;
    let rows = [p1, p2, p3].map(|p| Var::ALL.map(|v| p.partial(v)));
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut det = MultiPoly::zero(p1.field());
    for perm in PERMS {
        let term = rows[0][perm[0]]
            .checked_mul(&rows[1][perm[1]])?
            .checked_mul(&rows[2][perm[2]])?;
        det.add_assign_unchecked(&term);
    }
    Ok(det)
}

/// A fixed substitution of the three variables, caching powers of the images.
pub struct Substitution {
    images: [MultiPoly; 3],
    powers: [Vec<MultiPoly>; 3],
}

impl Substitution {
    pub fn new(images: [MultiPoly; 3]) -> Substitution {
        Substitution {
            powers: std::array::from_fn(|i| vec![MultiPoly::one(images[i].field())]),
            images,
        }
    }

    /// The substitution realizing the right action of `g`.
    pub fn for_matrix(field: &Arc<Field>, g: &Mat3) -> Result<Substitution> {
        if !g.entries_in(field) {
            return Err(Error::FieldMismatch);
        }
        let r = g.rows();
        Ok(Substitution::new([
            MultiPoly::linear(field, r[0][0], r[0][1], r[0][2]),
            MultiPoly::linear(field, r[1][0], r[1][1], r[1][2]),
            MultiPoly::var(field, Var::Z),
        ]))
    }

    /// `images[i]^e`, built from smaller cached powers (even powers by squaring).
    pub fn power(&mut self, i: usize, e: u32) -> Result<&MultiPoly> {
        while self.powers[i].len() <= e as usize {
            let k = self.powers[i].len();
            let next = if k.is_multiple_of(2) {
                self.powers[i][k / 2].square()?
            } else {
                self.powers[i][k - 1].checked_mul(&self.images[i])?
            };
            self.powers[i].push(next);
        }
        Ok(&self.powers[i][e as usize])
    }

    /// Image of a single monomial.
    pub fn monomial_image(&mut self, m: &Monomial) -> Result<MultiPoly> {
        let [a, b, c] = m.0;
        let px = self.power(0, a)?.clone();
        let py = self.power(1, b)?.clone();
        let xy = px.checked_mul(&py)?;
        let pz = self.power(2, c)?;
        if pz.num_terms() == 1 {
            let (zm, zc) = pz.leading_term().expect("nonzero");
            return Ok(xy.shift(&zm)?.scale(zc));
        }
        xy.checked_mul(pz)
    }

    pub fn apply(&mut self, p: &MultiPoly) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(p.field());
        for (m, c) in p.terms.iter() {
            let img = self.monomial_image(m)?.scale(*c);
            out.add_assign_unchecked(&img);
        }
        Ok(out)
    }
}
