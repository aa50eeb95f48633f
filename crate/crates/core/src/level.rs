//! Cyclic level structures: order-n subgroups of E[n] and their equivalence
//! classes under Aut(E).
//!
//! A subgroup is represented by the x-coordinates of its nonzero points
//! (each x stands for a pair {P, -P}), which is enough for everything done
//! with kernels here; a generator point is lifted when the y-coordinate is
//! rational over the working field.

use std::collections::BTreeSet;

use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::poly::Poly;

/// A cyclic subgroup of prime order n, given by kernel x-coordinates.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub order: u64,
    /// Sorted distinct x-coordinates of the nonzero points: (n-1)/2 of them
    /// for odd n, one for n = 2.
    pub xs: Vec<Fe>,
    /// Smallest x-coordinate; the points with this x generate the subgroup.
    pub gen_x: Fe,
    /// y with y^2 = rhs(gen_x), lexicographically smaller choice, when it
    /// is rational over the curve's field.
    pub gen_y: Option<Fe>,
    /// Monic kernel polynomial prod (x - x_i).
    pub kernel_poly: Poly,
}

impl Subgroup {
    pub fn from_xs(curve: &Curve, order: u64, mut xs: Vec<Fe>) -> Subgroup {
        xs.sort();
        xs.dedup();
        let gen_x = xs[0].clone();
        let gen_y = curve.rhs(&gen_x).sqrt();
        let kernel_poly = Poly::from_roots(curve.field(), &xs);
        Subgroup {
            order,
            xs,
            gen_x,
            gen_y,
            kernel_poly,
        }
    }

    /// Canonical comparison key.
    pub fn key(&self) -> Vec<Vec<u64>> {
        self.xs.iter().map(|x| x.coords().to_vec()).collect()
    }

    pub fn gen_point(&self) -> Option<Point> {
        self.gen_y
            .as_ref()
            .map(|y| Point::Affine(self.gen_x.clone(), y.clone()))
    }
}

pub(crate) fn xs_key(xs: &[Fe]) -> Vec<Vec<u64>> {
    xs.iter().map(|x| x.coords().to_vec()).collect()
}

/// Partition the full n-torsion x-coordinates into the n+1 cyclic subgroups
/// of order n.  `torsion_x` must be the complete, sorted root set of the
/// level-n x-division polynomial over the curve's field.
pub fn subgroups_of_order(curve: &Curve, n: u64, torsion_x: &[Fe]) -> Result<Vec<Subgroup>> {
    let expected = if n == 2 { 3 } else { ((n * n - 1) / 2) as usize };
    if torsion_x.len() != expected {
        return Err(Error::Internal(format!(
            "level {n}: expected {expected} torsion x-coordinates, found {}",
            torsion_x.len()
        )));
    }
    if n == 2 {
        return Ok(torsion_x
            .iter()
            .map(|x| Subgroup::from_xs(curve, 2, vec![x.clone()]))
            .collect());
    }
    let h = ((n - 1) / 2) as usize;
    // x([k]P) = x - psi_{k+1} psi_{k-1} / psi_k^2, via the x-parts P_k.
    let table = curve.psi_x_table(n / 2 + 3);
    let fld = curve.field();
    let f4 = Poly::from_coeffs(
        fld,
        vec![
            curve.b().clone(),
            curve.a().clone(),
            fld.zero(),
            fld.one(),
        ],
    )
    .mul_fe(&fld.from_u64(4));
    let mult_x = |k: u64, x: &Fe| -> Result<Fe> {
        let pk = table[k as usize].eval(x);
        let pk1 = table[(k + 1) as usize].eval(x);
        let pk_1 = table[(k - 1) as usize].eval(x);
        let (num, den) = if k % 2 == 1 {
            (pk1.mul(&pk_1).mul(&f4.eval(x)), pk.square())
        } else {
            (pk1.mul(&pk_1), pk.square().mul(&f4.eval(x)))
        };
        let q = num
            .div(&den)
            .ok_or_else(|| Error::Internal(format!("x-multiplication by {k} hit a pole")))?;
        Ok(x.sub(&q))
    };
    let mut remaining: BTreeSet<Fe> = torsion_x.iter().cloned().collect();
    let mut out = Vec::with_capacity(n as usize + 1);
    while let Some(x0) = remaining.iter().next().cloned() {
        let mut xs = vec![x0.clone()];
        for k in 2..=h as u64 {
            xs.push(mult_x(k, &x0)?);
        }
        for x in &xs {
            if !remaining.remove(x) {
                return Err(Error::Internal(format!(
                    "level {n}: multiple of {x} escaped the torsion root set"
                )));
            }
        }
        out.push(Subgroup::from_xs(curve, n, xs));
    }
    if out.len() != (n + 1) as usize {
        return Err(Error::Internal(format!(
            "level {n}: found {} subgroups instead of {}",
            out.len(),
            n + 1
        )));
    }
    out.sort_by_key(|s| s.key());
    Ok(out)
}

/// The orbit of a subgroup's x-set under Aut(E) acting by x -> u^2 x.
/// Returns the distinct x-sets, sorted; the first one is the canonical
/// representative of the class.
pub fn aut_orbit_xs(aut_x: &[Fe], xs: &[Fe]) -> Vec<Vec<Fe>> {
    let mut seen: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    let mut orbit = Vec::new();
    for u2 in aut_x {
        let mut mapped: Vec<Fe> = xs.iter().map(|x| x.mul(u2)).collect();
        mapped.sort();
        if seen.insert(xs_key(&mapped)) {
            orbit.push(mapped);
        }
    }
    orbit.sort_by_key(|v| xs_key(v));
    orbit
}

/// An equivalence class [E, G] of level structures: a curve index into the
/// session's representative list plus the Aut-orbit of kernel x-sets.
#[derive(Clone, Debug)]
pub struct LevelClass {
    pub curve_idx: usize,
    /// Canonical subgroup (minimal x-set in the orbit).
    pub rep: Subgroup,
    /// All x-sets in the orbit, sorted; length = orbit size.
    pub orbit_xs: Vec<Vec<Fe>>,
}

impl LevelClass {
    pub fn orbit_size(&self) -> usize {
        self.orbit_xs.len()
    }

    pub fn key(&self) -> (usize, Vec<Vec<u64>>) {
        (self.curve_idx, self.rep.key())
    }
}

/// The finite set of classes [E, G] over all representative curves, with a
/// lookup index keyed by (curve, canonical x-set).
pub struct LevelSet {
    pub order: u64,
    pub classes: Vec<LevelClass>,
    index: std::collections::BTreeMap<(usize, Vec<Vec<u64>>), usize>,
}

impl LevelSet {
    /// Group the per-curve subgroups into Aut-orbits.  `per_curve[i]` are
    /// the order-n subgroups of curve i; `auts[i]` its x-action scalars.
    pub fn build(order: u64, per_curve: &[Vec<Subgroup>], auts: &[Vec<Fe>], curves: &[Curve]) -> LevelSet {
        let mut classes = Vec::new();
        for (ci, subs) in per_curve.iter().enumerate() {
            let mut taken: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
            for s in subs {
                if taken.contains(&s.key()) {
                    continue;
                }
                let orbit = aut_orbit_xs(&auts[ci], &s.xs);
                for member in &orbit {
                    taken.insert(xs_key(member));
                }
                let rep = Subgroup::from_xs(&curves[ci], order, orbit[0].clone());
                classes.push(LevelClass {
                    curve_idx: ci,
                    rep,
                    orbit_xs: orbit,
                });
            }
        }
        classes.sort_by_key(|c| c.key());
        let index = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.key(), i))
            .collect();
        LevelSet {
            order,
            classes,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Find the class containing (curve_idx, xs), canonicalizing under the
    /// curve's automorphisms.
    pub fn class_of_xs(&self, curve_idx: usize, aut_x: &[Fe], xs: &[Fe]) -> Option<usize> {
        let orbit = aut_orbit_xs(aut_x, xs);
        self.index
            .get(&(curve_idx, xs_key(&orbit[0])))
            .copied()
    }

    /// Sum of orbit sizes; equals (n+1) * #curves.
    pub fn total_weight(&self) -> usize {
        self.classes.iter().map(|c| c.orbit_size()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::field::Field;

    #[test]
    fn subgroup_partition_level_3() {
        // E_9 over F_61^4 (3-torsion needs the quartic extension).
        let f = Field::default_extension(61, 4, "t").unwrap();
        let e = Curve::new(f.from_u64(53), f.from_u64(18)).unwrap();
        let psi = e.division_poly_x(3).unwrap();
        let roots = psi.roots();
        assert_eq!(roots.len(), 4);
        let subs = subgroups_of_order(&e, 3, &roots).unwrap();
        assert_eq!(subs.len(), 4);
        for s in &subs {
            assert_eq!(s.xs.len(), 1);
            // The points above gen_x are 3-torsion.
            if let Some(p) = s.gen_point() {
                assert_eq!(e.mul(3, &p), crate::curve::Point::Infinity);
                assert!(!p.is_infinity());
            }
        }
    }

    #[test]
    fn subgroup_partition_level_5() {
        let f = Field::default_extension(61, 4, "t").unwrap();
        let e = Curve::new(f.from_u64(53), f.from_u64(18)).unwrap();
        let roots = e.division_poly_x(5).unwrap().roots();
        assert_eq!(roots.len(), 12);
        let subs = subgroups_of_order(&e, 5, &roots).unwrap();
        assert_eq!(subs.len(), 6);
        for s in &subs {
            assert_eq!(s.xs.len(), 2);
            let p = s.gen_point().expect("5-torsion rational here");
            assert_eq!(e.mul(5, &p), crate::curve::Point::Infinity);
            // x(2P) must be the other kernel x.
            let x2 = e.double_x(&s.gen_x).unwrap();
            assert!(s.xs.contains(&x2));
        }
    }

    #[test]
    fn orbits_at_j_zero() {
        // j = 0 over F_23^2: Aut acts on the four 3-subgroups with orbits
        // of sizes 1 and 3 (one kernel x is 0 and fixed; the others are the
        // cube-root orbit).
        let f = Field::default_extension(23, 2, "s").unwrap();
        let e = Curve::new(f.zero(), f.one()).unwrap();
        let roots = e.division_poly_x(3).unwrap().roots();
        assert_eq!(roots.len(), 4);
        let subs = subgroups_of_order(&e, 3, &roots).unwrap();
        let auts = e.aut_x_scalars();
        assert_eq!(auts.len(), 3);
        let curves = vec![e.clone()];
        let set = LevelSet::build(3, &[subs], &[auts], &curves);
        let mut sizes: Vec<usize> = set.classes.iter().map(|c| c.orbit_size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3]);
        assert_eq!(set.total_weight(), 4);
    }
}
