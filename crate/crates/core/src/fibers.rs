//! The involutions D ([E,G] -> [E/G, dual kernel]) and F ([E,G] -> [E^p,
//! G^p]) on the set of level structures, the orbit ("fiber") of each class
//! under the group they generate, the fiber-size census, and the counts of
//! isogenies onto Frobenius-conjugate curves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::isogeny::{dual_kernel_xs, quotient_j, resolve_scale, velu_quotient};
use crate::level::LevelSet;
use crate::session::Session;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FiberTag {
    /// Size 1: G is the kernel of a self-dual degree-N endomorphism and
    /// everything is F_p-rational.
    SelfDualEndo,
    /// Size 2, F-fixed, D-moved, E != E/G: an F_p-rational isogeny between
    /// distinct F_p-rational curves.
    FpRational,
    /// Size 2, F-fixed, D-moved, E = E/G: an F_p-rational endomorphism that
    /// is not self-dual.
    FpEndoNotSelfDual,
    /// Size 2, D-fixed, F-moved: a self-dual endomorphism of a curve not
    /// defined over F_p.
    NonFpSelfDual,
    /// Size 2, DF-fixed, E = E^p: an endomorphism not defined over F_p of a
    /// curve defined over F_p.
    NonFpEndo,
    /// Size 2, DF-fixed, E != E^p: an isogeny between distinct curves with
    /// Frobenius-conjugate j-invariants.
    ConjugateIsogeny,
    /// Size 4: no coincidences.
    Generic,
    /// p != 1 mod 12: no classification attempted.
    Unclassified,
}

impl std::fmt::Display for FiberTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The fiber through a class: its distinct member classes and its size
/// counted in (E, G) pairs (i.e. weighted by Aut-orbit sizes).
#[derive(Clone, Debug)]
pub struct FiberRecord {
    /// Sorted distinct class indices of {c, D(c), F(c), DF(c)}.
    pub classes: Vec<usize>,
    /// Number of (E, G) pairs in the fiber: the sum of the members'
    /// Aut-orbit sizes.  Equals |classes| when p = 1 mod 12.
    pub size: usize,
    pub tag: FiberTag,
}

/// D([E, G]) = [E/G, ker(dual)]: quotient by (the canonical member of) the
/// class, transported onto the codomain representative.
pub fn involution_d(session: &Session, set: &LevelSet, idx: usize) -> Result<usize> {
    let c = &set.classes[idx];
    let step = velu_quotient(session, c.curve_idx, &c.rep.xs)?;
    let dual = dual_kernel_xs(session, &step)?;
    let cod = &session.curves[step.codomain];
    set.class_of_xs(step.codomain, &cod.aut_x, &dual)
        .ok_or_else(|| Error::Invariant("dual kernel is not a known class".into()))
}

/// F([E, G]) = [E^p, G^p]: conjugate the model coefficient-wise, normalize
/// back onto the representative of j^p, and transport the kernel.
pub fn involution_f(session: &Session, set: &LevelSet, idx: usize) -> Result<usize> {
    let c = &set.classes[idx];
    let rec = &session.curves[c.curve_idx];
    let raw_a = rec.curve.a().frobenius();
    let raw_b = rec.curve.b().frobenius();
    let j_conj = rec.j_work.frobenius();
    let codomain = session
        .curve_by_j_work(&j_conj)
        .ok_or_else(|| Error::Invariant("conjugate j-invariant not in the list".into()))?;
    let mut raw_torsion: Vec<Fe> = rec.n_torsion_x.iter().map(|x| x.frobenius()).collect();
    raw_torsion.sort();
    let u2 = resolve_scale(session, codomain, &raw_a, &raw_b, &raw_torsion)?;
    let xs: Vec<Fe> = c.rep.xs.iter().map(|x| x.frobenius().mul(&u2)).collect();
    let cod = &session.curves[codomain];
    set.class_of_xs(codomain, &cod.aut_x, &xs)
        .ok_or_else(|| Error::Invariant("conjugated kernel is not a known class".into()))
}

/// The orbit of a class under {id, D, F, DF}, with commutation checked.
pub fn fiber_of(session: &Session, set: &LevelSet, idx: usize) -> Result<FiberRecord> {
    let d = involution_d(session, set, idx)?;
    let f = involution_f(session, set, idx)?;
    let df = involution_f(session, set, d)?;
    let fd = involution_d(session, set, f)?;
    if df != fd {
        return Err(Error::Invariant(format!(
            "involutions do not commute on class {idx}: D∘F = {fd}, F∘D = {df}"
        )));
    }
    let mut classes = vec![idx, d, f, df];
    classes.sort_unstable();
    classes.dedup();
    let size = classes
        .iter()
        .map(|&i| set.classes[i].orbit_size())
        .sum();
    let tag = classify(session, set, idx, d, f, df, classes.len());
    Ok(FiberRecord { classes, size, tag })
}

fn classify(
    session: &Session,
    set: &LevelSet,
    c: usize,
    d: usize,
    f: usize,
    df: usize,
    distinct: usize,
) -> FiberTag {
    if session.p % 12 != 1 {
        return FiberTag::Unclassified;
    }
    match distinct {
        1 => FiberTag::SelfDualEndo,
        4 => FiberTag::Generic,
        2 => {
            let cc = &set.classes[c];
            if f == c {
                // F-fixed; D gives the second member.
                if set.classes[d].curve_idx == cc.curve_idx {
                    FiberTag::FpEndoNotSelfDual
                } else {
                    FiberTag::FpRational
                }
            } else if d == c {
                FiberTag::NonFpSelfDual
            } else {
                debug_assert_eq!(df, c);
                if session.curves[cc.curve_idx].j_fp2.in_prime_field() {
                    FiberTag::NonFpEndo
                } else {
                    FiberTag::ConjugateIsogeny
                }
            }
        }
        _ => FiberTag::Unclassified, // size 3: impossible for p = 1 mod 12
    }
}

/// Partition all classes into fibers, in order of smallest member index.
pub fn fiber_partition(session: &Session, set: &LevelSet) -> Result<Vec<FiberRecord>> {
    let mut seen = vec![false; set.len()];
    let mut out = Vec::new();
    for i in 0..set.len() {
        if seen[i] {
            continue;
        }
        let fiber = fiber_of(session, set, i)?;
        if session.p % 12 == 1 && fiber.classes.len() == 3 {
            return Err(Error::Internal(
                "fiber of size 3 encountered with p = 1 mod 12".into(),
            ));
        }
        for &m in &fiber.classes {
            seen[m] = true;
        }
        out.push(fiber);
    }
    Ok(out)
}

/// The fiber-size census for p = 1 mod 12.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Census {
    pub f1: usize,
    pub f2: usize,
    pub f4: usize,
    /// Number of fibers: F1 + F2 + F4.
    pub t: usize,
    /// Number of supersingular j-invariants.
    pub s_p: usize,
    pub n: u64,
}

pub fn fiber_census(session: &Session, set: &LevelSet) -> Result<Census> {
    if session.p % 12 != 1 {
        return Err(Error::Params(format!(
            "census requires p = 1 mod 12 (got p = {})",
            session.p
        )));
    }
    let fibers = fiber_partition(session, set)?;
    let mut f1 = 0;
    let mut f2 = 0;
    let mut f4 = 0;
    for f in &fibers {
        match f.classes.len() {
            1 => f1 += 1,
            2 => f2 += 1,
            4 => f4 += 1,
            k => {
                return Err(Error::Internal(format!(
                    "fiber of size {k} with p = 1 mod 12"
                )))
            }
        }
    }
    let t = fibers.len();
    let s_p = session.curve_count();
    let n = session.n;
    if f1 + f2 + f4 != t {
        return Err(Error::Internal("census identity F1+F2+F4 = T failed".into()));
    }
    if f1 + 2 * f2 + 4 * f4 != (n as usize + 1) * s_p {
        return Err(Error::Internal(format!(
            "census identity F1+2F2+4F4 = (N+1)#S_p failed: {} vs {}",
            f1 + 2 * f2 + 4 * f4,
            (n as usize + 1) * s_p
        )));
    }
    Ok(Census {
        f1,
        f2,
        f4,
        t,
        s_p,
        n,
    })
}

/// Approximate upper bound 4T - (N+1)#S_p for alpha'_N (assumes F1 = 0).
pub fn alpha_prime_upper_bound(c: &Census) -> i64 {
    4 * c.t as i64 - (c.n as i64 + 1) * c.s_p as i64
}

/// The exact rearrangement 4T - (N+1)#S_p + 3F1 (no F1 = 0 assumption);
/// alpha'_N never exceeds this.
pub fn alpha_prime_exact_bound(c: &Census) -> i64 {
    alpha_prime_upper_bound(c) + 3 * c.f1 as i64
}

/// Direct enumeration of alpha_N: pairs (E, G) among the representatives
/// with E/G isomorphic to E^p, counted once per subgroup (i.e. up to
/// post-composition with automorphisms).
#[derive(Clone, Debug, Serialize)]
pub struct AlphaEnumeration {
    pub alpha: u64,
    /// Restriction to curves with j not in F_p.
    pub alpha_prime: u64,
    /// Per-curve counts (curve label, count), in curve order.
    pub breakdown: Vec<(String, u64)>,
}

pub fn count_conjugate_isogenies(session: &Session) -> AlphaEnumeration {
    // A pair (E, psi) with psi: E -> E^p of degree N corresponds to an
    // embedding of Z[sqrt(-pN)] exactly when the composite with Frobenius
    // has trace zero, i.e. psi^(p) = +/- psi-hat.  On kernels this says
    // the class [E, ker psi] is fixed by D compose F.  Counting classes
    // (kernels up to Aut) matches the graph-reading convention.  The
    // quotient-j comparison is a cheap necessary filter before the
    // involution check.
    let set = session.level_set();
    let mut per_curve = vec![0u64; session.curve_count()];
    for (idx, class) in set.classes.iter().enumerate() {
        let rec = &session.curves[class.curve_idx];
        let target = rec.j_work.frobenius();
        if quotient_j(&rec.curve, &class.rep.xs) != target {
            continue;
        }
        let d = involution_d(session, &set, idx);
        let f = involution_f(session, &set, idx);
        if let (Ok(d), Ok(f)) = (d, f) {
            if d == f {
                per_curve[class.curve_idx] += 1;
            }
        }
    }
    let mut alpha = 0u64;
    let mut alpha_prime = 0u64;
    let mut breakdown = Vec::new();
    for (ci, count) in per_curve.into_iter().enumerate() {
        alpha += count;
        if !session.curves[ci].j_fp2.in_prime_field() {
            alpha_prime += count;
        }
        breakdown.push((session.curve_label(ci), count));
    }
    AlphaEnumeration {
        alpha,
        alpha_prime,
        breakdown,
    }
}
