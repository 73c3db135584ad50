//! Explicit invariants: the kernel invariants `f_x, f_y, f_z`, the Dickson
//! invariants `c0, c1, u` of SL2(GF(q)), their lifts through the cocycle `g`,
//! and the composed invariants for a nontrivial kernel.
//!
//! Every Dickson-type construction here is a product of "forms"
//! `a X + b Y + gamma g(a, b) Z` over pairs `(a, b)` in GF(q)^2, where the
//! coordinates `(X, Y, Z)` are `(x, y, z)` for the plain and lifted
//! invariants and `(f_x, f_y, z^(q^d))` for the composed ones.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Fel, Field};
use crate::grouplift::{cocycle_column, cocycle_g, LambdaSpace, Mat3};
use crate::mvpoly::{Monomial, MultiPoly, Var};

/// `f_x = prod (x + a z)`, `f_y = prod (y + a z)` over `a` in `L`, and `f_z = z`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelInvariants {
    pub fx: MultiPoly,
    pub fy: MultiPoly,
    pub fz: MultiPoly,
    /// `q^d = |L|`, the degree of `f_x` and `f_y`.
    pub z_power: u32,
}

pub fn kernel_invariants(ls: &LambdaSpace) -> Result<KernelInvariants> {
    let field = ls.field();
    let x = MultiPoly::var(field, Var::X);
    let y = MultiPoly::var(field, Var::Y);
    let z = MultiPoly::var(field, Var::Z);
    let mut fx = MultiPoly::one(field);
    let mut fy = MultiPoly::one(field);
    for &a in ls.elements() {
        let az = z.scale(a);
        fx = fx.checked_mul(&(&x + &az))?;
        fy = fy.checked_mul(&(&y + &az))?;
    }
    Ok(KernelInvariants {
        fx,
        fy,
        fz: z,
        z_power: ls.cardinality() as u32,
    })
}

/// True iff `x` and `y` occur in `f` only with exponents `0` or `q^m`,
/// `0 <= m <= d`, where `q = 2^n`.
pub fn dickson_support_check(f: &MultiPoly, n: u32, d: u32) -> bool {
    let allowed = |e: u32| e == 0 || (0..=d).any(|m| 1u64.checked_shl(n * m) == Some(e as u64));
    f.terms()
        .all(|(m, _)| allowed(m.exp(Var::X)) && allowed(m.exp(Var::Y)))
}

/// Coefficients `c_0, ..., c_d` of the additive polynomial
/// `prod_{a in L} (X + a) = sum c_m X^(q^m)`, read off `f_x`.
pub fn dickson_coefficients(kinv: &KernelInvariants, n: u32) -> Vec<Fel> {
    let top = kinv.z_power;
    let mut out = Vec::new();
    let mut qm = 1u32;
    loop {
        out.push(kinv.fx.coeff(&Monomial::new(qm, 0, top - qm)));
        if qm >= top {
            break;
        }
        qm <<= n;
    }
    out
}

/// `sum_m c_m v^(q^m)`.
pub fn linearized_eval(field: &Field, coeffs: &[Fel], n: u32, v: Fel) -> Fel {
    coeffs.iter().enumerate().fold(Fel::ZERO, |acc, (m, &c)| {
        acc + field.mul(c, field.frobenius(v, n * m as u32))
    })
}

/// Coordinates and lift scale for the form products.
struct Frame<'a> {
    field: &'a Arc<Field>,
    n: u32,
    coords: [MultiPoly; 3],
    gamma: Fel,
}

impl Frame<'_> {
    fn plain(field: &Arc<Field>, n: u32, gamma: Fel) -> Frame<'_> {
        Frame {
            field,
            n,
            coords: Var::ALL.map(|v| MultiPoly::var(field, v)),
            gamma,
        }
    }

    fn form(&self, a: Fel, b: Fel) -> Result<MultiPoly> {
        let f = &**self.field;
        let lift = f.mul(self.gamma, cocycle_g(f, a, b, self.n)?);
        let mut out = self.coords[0].scale(a);
        out = &out + &self.coords[1].scale(b);
        Ok(&out + &self.coords[2].scale(lift))
    }

    fn product(&self, pairs: impl IntoIterator<Item = (Fel, Fel)>) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(self.field);
        for (a, b) in pairs {
            acc = acc.checked_mul(&self.form(a, b)?)?;
        }
        Ok(acc)
    }

    fn dickson(&self) -> Result<DicksonSet> {
        let sub = self.field.subfield_elements(self.n)?;
        let f = &**self.field;
        let nonzero: Vec<(Fel, Fel)> = sub
            .iter()
            .flat_map(|&a| sub.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| !(a.is_zero() && b.is_zero()))
            .collect();
        let reps = projective_points(&sub);

        let c0 = self.product(nonzero.iter().copied())?;
        let u = self.product(reps.iter().copied())?;
        let mut c1 = MultiPoly::zero(self.field);
        // lines of W, spanned by w; forms l = (a, b) with a w0 + b w1 != 0
        for &(w0, w1) in &reps {
            let off_line = nonzero
                .iter()
                .copied()
                .filter(|&(a, b)| !(f.mul(a, w0) + f.mul(b, w1)).is_zero());
            c1 = &c1 + &self.product(off_line)?;
        }
        Ok(DicksonSet { c0, c1, u })
    }
}

/// Canonical representatives of the projective line over the subfield:
/// `(0, 1)` then `(1, b)` for `b` ascending.
fn projective_points(sub: &[Fel]) -> Vec<(Fel, Fel)> {
    std::iter::once((Fel::ZERO, Fel::ONE))
        .chain(sub.iter().map(|&b| (Fel::ONE, b)))
        .collect()
}

/// The Dickson invariants of SL2(GF(q)) in some coordinate frame.
#[derive(Clone, Debug, PartialEq)]
pub struct DicksonSet {
    /// Product of all nonzero forms; degree `q^2 - 1`.
    pub c0: MultiPoly,
    /// Sum over lines of the forms not vanishing on the line; degree `q^2 - q`.
    pub c1: MultiPoly,
    /// Product of canonical representatives of the `q + 1` form lines; `u^(q-1) = c0`.
    pub u: MultiPoly,
}

/// `(c0, c1)` in `x, y`.
pub fn dickson_pair(field: &Arc<Field>, n: u32) -> Result<(MultiPoly, MultiPoly)> {
    let d = Frame::plain(field, n, Fel::ZERO).dickson()?;
    Ok((d.c0, d.c1))
}

pub fn dickson_u(field: &Arc<Field>, n: u32) -> Result<MultiPoly> {
    Ok(Frame::plain(field, n, Fel::ZERO).dickson()?.u)
}

/// All three Dickson invariants with forms lifted by `l -> l + gamma g(a, b) z`.
///
/// `gamma = 0` gives the unlifted invariants; the lifted ones are invariant
/// under `H_gamma`.
pub fn lifted_invariants(field: &Arc<Field>, n: u32, gamma: Fel) -> Result<DicksonSet> {
    if !field.contains(gamma) {
        return Err(Error::ForeignElement(format!("gamma {gamma}")));
    }
    Frame::plain(field, n, gamma).dickson()
}

/// The `gamma` with `<R~, S~, T~> = H_gamma`, namely `(1 + e^-1)^-1`.
pub fn complement_gamma(field: &Field, n: u32) -> Result<Fel> {
    let e = field.subfield_generator(n)?;
    field
        .inv(Fel::ONE + field.inv(e)?)
        .map_err(|_| Error::InvalidArgument("e = 1: no nontrivial diagonal lift for n = 1".into()))
}

/// How one lift acts on `(f_x, f_y)`:
/// `f_x -> l00 f_x + l01 f_y + o0 z^(q^d)` and likewise for `f_y` with row 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftAction {
    pub generator: Mat3,
    pub linear: [[Fel; 2]; 2],
    pub offset: [Fel; 2],
}

impl LiftAction {
    /// The action written as a matrix on the coordinates `(f_x, f_y, z^(q^d))`.
    pub fn induced_matrix(&self) -> Mat3 {
        Mat3::from_block(self.linear, self.offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDescriptor {
    pub actions: Vec<LiftAction>,
    /// Offset of `f_x` under the first lift (the diagonal one).
    pub alpha: Fel,
    pub z_power: u32,
}

impl ActionDescriptor {
    pub fn is_linear(&self) -> bool {
        self.actions
            .iter()
            .all(|a| a.offset.iter().all(|o| o.is_zero()))
    }
}

/// Reads off the affine action of each lift on `(f_x, f_y)` by coefficient
/// comparison.
///
/// `lifts[0]` is taken to be the diagonal lift whose `f_x` offset is reported
/// as `alpha`. Fails if an image is not of the form
/// `l0 f_x + l1 f_y + o z^(q^d)` with `l0, l1` in GF(2^n).
pub fn kernel_action(
    field: &Arc<Field>,
    n: u32,
    lifts: &[Mat3],
    kinv: &KernelInvariants,
) -> Result<ActionDescriptor> {
    let qd = kinv.z_power;
    let lead_x = Monomial::new(qd, 0, 0);
    let lead_y = Monomial::new(0, qd, 0);
    let zq = Monomial::new(0, 0, qd);
    let mut actions = Vec::with_capacity(lifts.len());
    for g in lifts {
        let mut linear = [[Fel::ZERO; 2]; 2];
        let mut offset = [Fel::ZERO; 2];
        for (i, f) in [&kinv.fx, &kinv.fy].into_iter().enumerate() {
            let image = f.act(g)?;
            let (a, b) = (image.coeff(&lead_x), image.coeff(&lead_y));
            if !field.in_subfield(a, n) || !field.in_subfield(b, n) {
                return Err(Error::NotAffineAction(format!(
                    "linear coefficients {a}, {b} outside GF(2^{n})"
                )));
            }
            let mut rest = &image + &kinv.fx.scale(a);
            rest = &rest + &kinv.fy.scale(b);
            let o = rest.coeff(&zq);
            rest.add_term(zq, o);
            if !rest.is_zero() {
                return Err(Error::NotAffineAction(format!(
                    "residual {rest} after removing the affine part"
                )));
            }
            linear[i] = [a, b];
            offset[i] = o;
        }
        actions.push(LiftAction {
            generator: *g,
            linear,
            offset,
        });
    }
    let alpha = actions.first().map(|a| a.offset[0]).unwrap_or(Fel::ZERO);
    Ok(ActionDescriptor {
        actions,
        alpha,
        z_power: qd,
    })
}

/// The lift scale `gamma` with each induced matrix equal to its block
/// extended by `gamma * (f(a, b), f(c, d))`; zero for a linear action.
pub fn induced_gamma(field: &Field, n: u32, desc: &ActionDescriptor) -> Result<Fel> {
    let mut gamma = None;
    for act in &desc.actions {
        let unit = cocycle_column(field, n, Fel::ONE, act.linear)?;
        for (u, o) in unit.iter().zip(act.offset) {
            if !u.is_zero() && gamma.is_none() {
                gamma = Some(field.div(o, *u)?);
            }
        }
    }
    let gamma = gamma.unwrap_or(Fel::ZERO);
    for act in &desc.actions {
        if cocycle_column(field, n, gamma, act.linear)? != act.offset {
            return Err(Error::NotAffineAction(format!(
                "offsets {:?} of {:?} are not gamma * f for gamma = {gamma}",
                act.offset, act.generator
            )));
        }
    }
    Ok(gamma)
}

/// Candidate generators `(u_bar, c1_bar, z)` of the invariant ring of `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComposedInvariants {
    pub u: MultiPoly,
    pub c1: MultiPoly,
    pub z: MultiPoly,
    /// Lift scale used in the `(f_x, f_y, z^(q^d))` frame; zero means the
    /// unlifted Dickson invariants were used.
    pub gamma: Fel,
}

impl ComposedInvariants {
    pub fn as_array(&self) -> [MultiPoly; 3] {
        [self.u.clone(), self.c1.clone(), self.z.clone()]
    }

    pub fn degrees(&self) -> [u32; 3] {
        [&self.u, &self.c1, &self.z].map(|p| p.degree().unwrap_or(0))
    }
}

/// Substitutes `(f_x, f_y, z^(q^d))` into the lifted Dickson construction
/// whose lift scale matches the descriptor.
pub fn composed_invariants(
    field: &Arc<Field>,
    n: u32,
    kinv: &KernelInvariants,
    desc: &ActionDescriptor,
) -> Result<ComposedInvariants> {
    let gamma = induced_gamma(field, n, desc)?;
    let zq = MultiPoly::monomial(field, Fel::ONE, Monomial::new(0, 0, kinv.z_power));
    let frame = Frame {
        field,
        n,
        coords: [kinv.fx.clone(), kinv.fy.clone(), zq],
        gamma,
    };
    let set = frame.dickson()?;
    Ok(ComposedInvariants {
        u: set.u,
        c1: set.c1,
        z: kinv.fz.clone(),
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouplift::{lift_generators, Variant};

    fn gf(m: u32) -> Arc<Field> {
        Arc::new(Field::with_default_modulus(m).unwrap())
    }

    fn p(f: &Arc<Field>, s: &str) -> MultiPoly {
        MultiPoly::parse(f, s).unwrap()
    }

    #[test]
    fn kernel_invariants_small() {
        let ls = LambdaSpace::default_for(2, 0).unwrap();
        let k = kernel_invariants(&ls).unwrap();
        let f = ls.field();
        assert_eq!(
            (k.fx.clone(), k.fy.clone(), k.fz.clone()),
            (p(f, "x"), p(f, "y"), p(f, "z"))
        );

        let ls = LambdaSpace::default_for(1, 1).unwrap();
        let k = kernel_invariants(&ls).unwrap();
        assert_eq!(k.fx, p(ls.field(), "x^2 + x*z"));

        let ls = LambdaSpace::default_for(2, 1).unwrap();
        let k = kernel_invariants(&ls).unwrap();
        assert_eq!(k.fx.degree(), Some(4));
        let xs: Vec<u32> = k.fx.terms().map(|(m, _)| m.exp(Var::X)).collect();
        assert_eq!(xs, vec![4, 1]);
    }

    #[test]
    fn support_check() {
        let f = gf(1);
        assert!(dickson_support_check(&p(&f, "x"), 2, 0));
        assert!(dickson_support_check(&p(&f, "x^2 + x*z"), 1, 1));
        assert!(!dickson_support_check(&p(&f, "x^3 + z^3"), 1, 1));
    }

    #[test]
    fn dickson_over_gf2() {
        let f = gf(1);
        let (c0, c1) = dickson_pair(&f, 1).unwrap();
        assert_eq!(c0, p(&f, "x^2*y + x*y^2"));
        assert_eq!(c1, p(&f, "x^2 + x*y + y^2"));
        assert_eq!(dickson_u(&f, 1).unwrap(), c0);
    }

    #[test]
    fn dickson_over_gf4() {
        let f = gf(2);
        let (c0, c1) = dickson_pair(&f, 2).unwrap();
        assert_eq!((c0.degree(), c1.degree()), (Some(15), Some(12)));
        let u = dickson_u(&f, 2).unwrap();
        assert_eq!(u.degree(), Some(5));
        assert_eq!(u.pow(3).unwrap(), c0);
        let sl2 = crate::grouplift::sl2_generators(&f, 2).unwrap();
        for g in sl2.to_vec() {
            assert_eq!(c0.act(&g).unwrap(), c0);
            assert_eq!(c1.act(&g).unwrap(), c1);
            assert_eq!(u.act(&g).unwrap(), u);
        }
    }

    #[test]
    fn lifted_gf4() {
        let f = gf(2);
        let gamma = complement_gamma(&f, 2).unwrap();
        let lifted = lifted_invariants(&f, 2, gamma).unwrap();
        let plain = lifted_invariants(&f, 2, Fel::ZERO).unwrap();
        assert_eq!(lifted.u.restrict_z0(), plain.u);
        assert_eq!(lifted.c1.restrict_z0(), plain.c1);
        assert_eq!((lifted.u.degree(), lifted.c1.degree()), (Some(5), Some(12)));
        assert_eq!(lifted.u.pow(3).unwrap(), lifted.c0);
        for g in lift_generators(&f, 2, Variant::H1).unwrap().to_vec() {
            assert_eq!(lifted.u.act(&g).unwrap(), lifted.u);
            assert_eq!(lifted.c1.act(&g).unwrap(), lifted.c1);
        }
        // the same forms lifted with gamma = 1 are not R~-invariant
        let h1 = lifted_invariants(&f, 2, Fel::ONE).unwrap();
        let r = lift_generators(&f, 2, Variant::H1).unwrap().r;
        assert_ne!(h1.u.act(&r).unwrap(), h1.u);
        assert!(complement_gamma(&gf(1), 1).is_err());
    }

    #[test]
    fn action_descriptor_shapes() {
        let ls = LambdaSpace::default_for(2, 1).unwrap();
        let f = ls.field().clone();
        let k = kernel_invariants(&ls).unwrap();
        let lifts = lift_generators(&f, 2, Variant::H1).unwrap();
        let desc = kernel_action(&f, 2, &lifts.to_vec(), &k).unwrap();
        let one = Fel::ONE;
        assert_eq!(desc.actions[1].linear, [[one, one], [Fel::ZERO, one]]);
        assert_eq!(desc.actions[1].offset, [Fel::ZERO; 2]);
        let e = lifts.e;
        assert_eq!(
            desc.actions[0].linear,
            [[f.inv(e).unwrap(), Fel::ZERO], [Fel::ZERO, e]]
        );
        // 1 lies in L, so the offset vanishes
        assert!(desc.alpha.is_zero());
        assert_eq!(desc.actions[0].offset[1], f.mul(e, desc.alpha));
    }

    #[test]
    fn affine_offsets_for_shifted_lambda() {
        // L = th * GF(4) inside GF(16) does not contain 1, so alpha != 0
        let f = gf(4);
        let theta = f.mult_generator();
        let ls = LambdaSpace::new(f.clone(), 2, vec![theta]).unwrap();
        let k = kernel_invariants(&ls).unwrap();
        let lifts = lift_generators(&f, 2, Variant::H1).unwrap();
        let desc = kernel_action(&f, 2, &lifts.to_vec(), &k).unwrap();
        let e = lifts.e;
        assert!(!desc.alpha.is_zero());
        assert_eq!(desc.actions[0].offset[1], f.mul(e, desc.alpha));
        let coeffs = dickson_coefficients(&k, 2);
        assert_eq!(linearized_eval(&f, &coeffs, 2, Fel::ONE), desc.alpha);

        let comp = composed_invariants(&f, 2, &k, &desc).unwrap();
        assert_eq!(comp.degrees(), [20, 48, 1]);
        let mut gens = lifts.to_vec();
        gens.extend(ls.kernel_generators());
        for g in gens {
            assert_eq!(comp.u.act(&g).unwrap(), comp.u);
            assert_eq!(comp.c1.act(&g).unwrap(), comp.c1);
        }
    }

    #[test]
    fn inconsistent_offsets_are_rejected() {
        let ls = LambdaSpace::default_for(2, 0).unwrap();
        let f = ls.field().clone();
        let k = kernel_invariants(&ls).unwrap();
        let mut lifts = lift_generators(&f, 2, Variant::H1).unwrap().to_vec();
        lifts[0] = lifts[0].with_column([Fel::ONE, lifts[0].column()[1] + Fel::ONE]);
        let desc = kernel_action(&f, 2, &lifts, &k).unwrap();
        assert!(matches!(
            composed_invariants(&f, 2, &k, &desc),
            Err(Error::NotAffineAction(_))
        ));
    }
}
