//! Separable isogenies with cyclic prime-order kernels, in Vélu form.
//!
//! A step is computed from a kernel x-set on a session representative; the
//! raw Vélu codomain is then rescaled onto the session's representative
//! model for its j-invariant by an isomorphism x -> u^2 x.  When the target
//! has extra automorphisms the choice of u^2 is ambiguous; any choice maps
//! kernels to kernels in the same Aut-orbit, and we fix the
//! lexicographically smallest valid one.

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::poly::Poly;
use crate::session::Session;

/// A degree-d isogeny from a representative curve to a representative
/// curve, with its kernel and the normalization scale.
pub struct IsogenyStep {
    pub domain: usize,
    pub codomain: usize,
    pub degree: u64,
    pub kernel_xs: Vec<Fe>,
    /// Raw Vélu codomain coefficients (before rescaling).
    pub raw_a: Fe,
    pub raw_b: Fe,
    /// Scale with x_rep = u_sq * x_raw mapping the raw codomain onto the
    /// representative model.
    pub u_sq: Fe,
    x_num: Poly,
    x_den: Poly,
}

impl IsogenyStep {
    /// The x-coordinate map onto the raw codomain; None when x is a kernel
    /// x-coordinate (the image is the point at infinity).
    pub fn push_x_raw(&self, x: &Fe) -> Option<Fe> {
        let den = self.x_den.eval(x);
        let num = self.x_num.eval(x);
        num.div(&den)
    }

    /// The x-coordinate map onto the representative codomain model.
    pub fn push_x(&self, x: &Fe) -> Option<Fe> {
        self.push_x_raw(x).map(|v| v.mul(&self.u_sq))
    }

    /// Push a set of kernel x-coordinates (of order coprime to the degree)
    /// onto the representative codomain model.
    pub fn push_xs(&self, xs: &[Fe]) -> Result<Vec<Fe>> {
        let mut out = Vec::with_capacity(xs.len());
        for x in xs {
            let v = self.push_x(x).ok_or_else(|| {
                Error::Internal("kernel transport hit the isogeny kernel".into())
            })?;
            out.push(v);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Construct the Vélu isogeny with the given kernel x-set on curve
/// `domain`; the kernel must be the x-set of a cyclic subgroup of prime
/// order (half-set of nonzero points for odd order, one point for order 2).
pub fn velu_quotient(session: &Session, domain: usize, kernel_xs: &[Fe]) -> Result<IsogenyStep> {
    let rec = &session.curves[domain];
    let e = &rec.curve;
    let fld = e.field();
    let a = e.a();
    let b = e.b();
    let degree = (2 * kernel_xs.len() + 1) as u64;
    let degree = if kernel_xs.len() == 1 && e.rhs(&kernel_xs[0]).is_zero() {
        2
    } else {
        degree
    };
    // Accumulate Vélu sums and the x-map numerator/denominator.
    let mut v_sum = fld.zero();
    let mut w_sum = fld.zero();
    struct Term {
        x: Fe,
        v: Fe,
        u: Fe,
        two_torsion: bool,
    }
    let mut terms = Vec::with_capacity(kernel_xs.len());
    for xq in kernel_xs {
        let gx = xq.square().mul_u64(3).add(a);
        let fq = e.rhs(xq);
        let (u, v, tt) = if fq.is_zero() {
            (fld.zero(), gx.clone(), true)
        } else {
            (fq.mul_u64(4), gx.mul_u64(2), false)
        };
        v_sum = v_sum.add(&v);
        w_sum = w_sum.add(&u).add(&xq.mul(&v));
        terms.push(Term {
            x: xq.clone(),
            v,
            u,
            two_torsion: tt,
        });
    }
    let raw_a = a.sub(&v_sum.mul_u64(5));
    let raw_b = b.sub(&w_sum.mul_u64(7));
    // x-map: X = x + sum_Q [ v_Q/(x - x_Q) + u_Q/(x - x_Q)^2 ].
    let mut den = Poly::one(fld);
    for t in &terms {
        let lin = Poly::from_coeffs(fld, vec![t.x.neg(), fld.one()]);
        den = den.mul(&lin);
        if !t.two_torsion {
            den = den.mul(&lin);
        }
    }
    let mut num = Poly::x(fld).mul(&den);
    for t in &terms {
        let lin = Poly::from_coeffs(fld, vec![t.x.neg(), fld.one()]);
        let (cof1, r1) = den.divrem(&lin);
        debug_assert!(r1.is_zero());
        num = num.add(&cof1.mul_fe(&t.v));
        if !t.two_torsion {
            let (cof2, r2) = cof1.divrem(&lin);
            debug_assert!(r2.is_zero());
            num = num.add(&cof2.mul_fe(&t.u));
        }
    }
    // Codomain representative.
    let raw_j = crate::curve::j_from_ab(&raw_a, &raw_b);
    let codomain = session.curve_by_j_work(&raw_j).ok_or_else(|| {
        Error::Invariant(format!(
            "isogenous j-invariant {raw_j} is not in the supersingular list"
        ))
    })?;
    let mut step = IsogenyStep {
        domain,
        codomain,
        degree,
        kernel_xs: kernel_xs.to_vec(),
        raw_a,
        raw_b,
        u_sq: fld.one(),
        x_num: num,
        x_den: den,
    };
    // Raw images of the domain's n-torsion, for the matching fallback.
    let mut raw_images = Vec::new();
    for x in &session.curves[domain].n_torsion_x {
        if step.kernel_xs.contains(x) {
            continue;
        }
        if let Some(v) = step.push_x_raw(x) {
            raw_images.push(v);
        }
    }
    raw_images.sort();
    raw_images.dedup();
    step.u_sq = resolve_scale(session, step.codomain, &step.raw_a, &step.raw_b, &raw_images)?;
    Ok(step)
}

/// The j-invariant of the raw Vélu quotient by a kernel x-set (no
/// normalization; enough when only the codomain j matters).
pub fn quotient_j(e: &crate::curve::Curve, kernel_xs: &[Fe]) -> Fe {
    let a = e.a();
    let b = e.b();
    let fld = e.field();
    let mut v_sum = fld.zero();
    let mut w_sum = fld.zero();
    for xq in kernel_xs {
        let gx = xq.square().mul_u64(3).add(a);
        let fq = e.rhs(xq);
        let (u, v) = if fq.is_zero() {
            (fld.zero(), gx.clone())
        } else {
            (fq.mul_u64(4), gx.mul_u64(2))
        };
        v_sum = v_sum.add(&v);
        w_sum = w_sum.add(&u).add(&xq.mul(&v));
    }
    let raw_a = a.sub(&v_sum.mul_u64(5));
    let raw_b = b.sub(&w_sum.mul_u64(7));
    crate::curve::j_from_ab(&raw_a, &raw_b)
}

/// Determine the x-scale u^2 mapping a raw model (raw_a, raw_b) onto the
/// representative model of its j-invariant.  `raw_torsion_xs` are known
/// level-torsion x-coordinates on the raw model, used as a fallback when
/// the closed-form scale is not rational over the working field.
pub(crate) fn resolve_scale(
    session: &Session,
    codomain: usize,
    raw_a: &Fe,
    raw_b: &Fe,
    raw_torsion_xs: &[Fe],
) -> Result<Fe> {
    let target = &session.curves[codomain].curve;
    let fld = target.field();
    let (ta, tb) = (target.a(), target.b());
    let (ra, rb) = (raw_a, raw_b);
    let j = target.j();
    let f1728 = fld.from_u64(1728 % fld.p());
    if !j.is_zero() && *j != f1728 {
        // u^4 = A/a', u^6 = B/b' => u^2 = (B a') / (b' A).
        let u2 = tb
            .mul(ra)
            .div(&rb.mul(ta))
            .ok_or_else(|| Error::Internal("normalization division by zero".into()))?;
        debug_assert!(u2.square() == ta.div(ra).unwrap());
        return Ok(u2);
    }
    // Ambiguous cases: collect the valid candidates and pick the smallest;
    // all candidates differ by an automorphism of the target.
    let candidates: Vec<Fe> = if *j == f1728 {
        // z^2 = A / a'.
        let rhs = ta.div(ra).ok_or_else(|| {
            Error::Internal("normalization: raw a vanishes at j = 1728".into())
        })?;
        match rhs.sqrt() {
            Some(z) => vec![z.clone(), z.neg()],
            None => Vec::new(),
        }
    } else {
        // j = 0: z^3 = B / b'.
        let rhs = tb.div(rb).ok_or_else(|| {
            Error::Internal("normalization: raw b vanishes at j = 0".into())
        })?;
        let cubic = Poly::from_coeffs(
            fld,
            vec![rhs.neg(), fld.zero(), fld.zero(), fld.one()],
        );
        cubic.roots()
    };
    if let Some(u2) = candidates.iter().min() {
        return Ok(u2.clone());
    }
    // The scale is not rational in the working field.  Recover it by
    // matching known torsion x-coordinates of the raw model against the
    // target's torsion: u^2 = x_target / x_raw for any nonzero raw x.
    let target_xs = &session.curves[codomain].n_torsion_x;
    let sample = raw_torsion_xs.iter().find(|v| !v.is_zero());
    let Some(sample) = sample else {
        // Every transported coordinate is zero; any scale acts trivially.
        return Ok(fld.one());
    };
    let constraint_ok = |u2: &Fe| -> bool {
        if *j == f1728 {
            u2.square() == ta.div(ra).unwrap()
        } else {
            u2.square().mul(u2) == tb.div(rb).unwrap()
        }
    };
    let mut valid: Vec<Fe> = Vec::new();
    for t in target_xs {
        let Some(u2) = t.div(sample) else { continue };
        if !constraint_ok(&u2) {
            continue;
        }
        if raw_torsion_xs
            .iter()
            .all(|r| target_xs.binary_search(&r.mul(&u2)).is_ok())
        {
            valid.push(u2);
        }
    }
    valid.sort();
    valid.dedup();
    valid.into_iter().next().ok_or_else(|| {
        Error::Internal("normalization scale could not be resolved".into())
    })
}

/// The kernel of the dual isogeny: the image of the full degree-torsion of
/// the domain, as x-coordinates on the representative codomain model.
pub fn dual_kernel_xs(session: &Session, step: &IsogenyStep) -> Result<Vec<Fe>> {
    let rec = &session.curves[step.domain];
    let torsion: &[Fe] = if step.degree == session.n {
        &rec.n_torsion_x
    } else if Some(step.degree) == session.ell {
        rec.ell_torsion_x
            .as_ref()
            .ok_or_else(|| Error::Internal("missing ell-torsion cache".into()))?
    } else {
        return Err(Error::Params(format!(
            "dual kernel: degree {} not tracked by the session",
            step.degree
        )));
    };
    let mut out = Vec::new();
    for x in torsion {
        if step.kernel_xs.contains(x) {
            continue;
        }
        let v = step.push_x(x).ok_or_else(|| {
            Error::Internal("dual kernel transport hit the kernel".into())
        })?;
        out.push(v);
    }
    out.sort();
    out.dedup();
    let expected = if step.degree == 2 { 1 } else { ((step.degree - 1) / 2) as usize };
    if out.len() != expected {
        return Err(Error::Invariant(format!(
            "dual kernel has {} x-coordinates, expected {expected}",
            out.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::SessionConfig;

    fn p61_session(n: u64) -> Session {
        let cfg = SessionConfig {
            p: 61,
            n,
            fp2_modulus: Some("s^2+60*s+2".into()),
            overrides: Some(
                "j = 9; a = 53; b = 18\n\
                 j = 41; a = 6; b = 34\n\
                 j = 50; a = 14; b = 36\n\
                 j = 20s+32; a = 30s+47; b = 48s+49\n\
                 j = 41s+52; a = 31s+16; b = 13s+36\n"
                    .into(),
            ),
            ..Default::default()
        };
        Session::new(&cfg).unwrap()
    }

    #[test]
    fn velu_degree2_roundtrip() {
        let s = p61_session(2);
        for ci in 0..s.curve_count() {
            for sub in s.curves[ci].n_subgroups.clone() {
                let step = velu_quotient(&s, ci, &sub.xs).unwrap();
                assert_eq!(step.degree, 2);
                // Codomain is supersingular and on the list by construction.
                // The dual kernel is again an order-2 subgroup, and taking
                // the quotient by it returns to the domain j-invariant.
                let dual = dual_kernel_xs(&s, &step).unwrap();
                let back = velu_quotient(&s, step.codomain, &dual).unwrap();
                assert_eq!(back.codomain, ci, "dual does not return");
            }
        }
    }

    #[test]
    fn velu_degree3_roundtrip() {
        let s = p61_session(3);
        for ci in 0..s.curve_count() {
            for sub in s.curves[ci].n_subgroups.clone() {
                let step = velu_quotient(&s, ci, &sub.xs).unwrap();
                assert_eq!(step.degree, 3);
                let dual = dual_kernel_xs(&s, &step).unwrap();
                assert_eq!(dual.len(), 1);
                let back = velu_quotient(&s, step.codomain, &dual).unwrap();
                assert_eq!(back.codomain, ci);
            }
        }
    }

    #[test]
    fn pushed_torsion_lands_in_torsion() {
        let s = p61_session(3);
        for ci in 0..s.curve_count() {
            let rec = &s.curves[ci];
            for sub in &rec.n_subgroups {
                let step = velu_quotient(&s, ci, &sub.xs).unwrap();
                let tgt = &s.curves[step.codomain].n_torsion_x;
                for x in &rec.n_torsion_x {
                    if sub.xs.contains(x) {
                        continue;
                    }
                    let img = step.push_x(x).unwrap();
                    assert!(
                        tgt.binary_search(&img).is_ok(),
                        "image {img} is not a torsion x on the codomain"
                    );
                }
            }
        }
    }

    #[test]
    fn isogenous_curves_have_isogenous_duals() {
        // Composing an isogeny with its dual multiplies by the degree; on
        // x-coordinates, pushing a non-kernel 3-torsion x through phi and
        // phi-hat must land on an x of the same subgroup (x([3]P) undefined
        // => the composite kills 3-torsion) -- verify the composite kernel
        // contains the full 3-torsion by checking pole counts.
        let s = p61_session(3);
        let step = velu_quotient(&s, 0, &s.curves[0].n_subgroups[0].xs).unwrap();
        let dual = dual_kernel_xs(&s, &step).unwrap();
        let back = velu_quotient(&s, step.codomain, &dual).unwrap();
        // phi-hat(phi(x)) for x in E[3] \ ker(phi) hits ker(phi-hat) poles
        // exactly when phi(x) is in the dual kernel, i.e. always lands at
        // infinity for the composite: phi(E[3]) = ker(phi-hat) for the
        // subgroup part.  Spot-check one orbit.
        let rec = &s.curves[0];
        for x in &rec.n_torsion_x {
            if step.kernel_xs.contains(x) {
                continue;
            }
            let mid = step.push_x(x).unwrap();
            // mid is 3-torsion on the codomain; composite with `back` gives
            // a point of E[3] on the domain again (up to automorphism).
            if !back.kernel_xs.contains(&mid) {
                let fin = back.push_x(&mid).unwrap();
                assert!(rec.n_torsion_x.binary_search(&fin).is_ok());
            }
        }
    }
}
