//! Elliptic curves in short Weierstrass form `y^2 = x^3 + a x + b` over a
//! finite field of characteristic p >= 5.
//!
//! Everything here is exact: point arithmetic is affine, supersingularity is
//! decided through the Hasse invariant, and the supersingular locus is
//! enumerated by an F_p scan followed by closure under 2-isogenies.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Point {
    Infinity,
    Affine(Fe, Fe),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&Fe> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(x),
        }
    }
}

/// A short Weierstrass curve over a fixed finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Curve {
    field: Arc<Field>,
    a: Fe,
    b: Fe,
    j: Fe,
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

impl Curve {
    pub fn new(a: Fe, b: Fe) -> Result<Curve> {
        let field = a.field().clone();
        let disc = a.square().mul(&a).mul_u64(4).add(&b.square().mul_u64(27));
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let j = j_from_ab(&a, &b);
        Ok(Curve { field, a, b, j })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn a(&self) -> &Fe {
        &self.a
    }

    pub fn b(&self) -> &Fe {
        &self.b
    }

    pub fn j(&self) -> &Fe {
        &self.j
    }

    /// x^3 + a x + b.
    pub fn rhs(&self, x: &Fe) -> Fe {
        x.square().mul(x).add(&self.a.mul(x)).add(&self.b)
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => y.square() == self.rhs(x),
        }
    }

    /// Lift an x-coordinate to a point; the lexicographically smaller of
    /// the two y-values is chosen.  None when x is not on the curve over
    /// this field.
    pub fn lift_x(&self, x: &Fe) -> Option<Point> {
        let y = self.rhs(x).sqrt()?;
        Some(Point::Affine(x.clone(), y))
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), y.neg()),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        match (p, q) {
            (Point::Infinity, _) => q.clone(),
            (_, Point::Infinity) => p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                if x1 == x2 {
                    if y1 == y2 {
                        if y1.is_zero() {
                            return Point::Infinity;
                        }
                        // Doubling.
                        let num = x1.square().mul_u64(3).add(&self.a);
                        let den = y1.mul_u64(2);
                        let l = num.div(&den).unwrap();
                        let x3 = l.square().sub(x1).sub(x2);
                        let y3 = l.mul(&x1.sub(&x3)).sub(y1);
                        return Point::Affine(x3, y3);
                    }
                    return Point::Infinity;
                }
                let l = y2.sub(y1).div(&x2.sub(x1)).unwrap();
                let x3 = l.square().sub(x1).sub(x2);
                let y3 = l.mul(&x1.sub(&x3)).sub(y1);
                Point::Affine(x3, y3)
            }
        }
    }

    pub fn mul(&self, k: u64, p: &Point) -> Point {
        let mut r = Point::Infinity;
        let mut base = p.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = self.add(&r, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        r
    }

    /// x([2]P) as a function of x(P), when [2]P != O:
    /// (x^4 - 2 a x^2 - 8 b x + a^2) / (4 (x^3 + a x + b)).
    pub fn double_x(&self, x: &Fe) -> Option<Fe> {
        let den = self.rhs(x).mul_u64(4);
        let x2 = x.square();
        let num = x2
            .square()
            .sub(&self.a.mul(&x2).mul_u64(2))
            .sub(&self.b.mul(x).mul_u64(8))
            .add(&self.a.square());
        num.div(&den)
    }

    /// The curve with p-power-Frobenius coefficients.
    pub fn frobenius_curve(&self) -> Curve {
        Curve {
            field: self.field.clone(),
            a: self.a.frobenius(),
            b: self.b.frobenius(),
            j: self.j.frobenius(),
        }
    }

    /// Supersingularity via the Hasse invariant: the coefficient of
    /// x^(p-1) in (x^3 + a x + b)^((p-1)/2) vanishes exactly for
    /// supersingular curves (p >= 5).
    pub fn is_supersingular(&self) -> bool {
        let p = self.field.p();
        let cut = (p - 1) as usize;
        // Iteratively multiply by the cubic, truncating above degree p-1;
        // truncation is sound because higher terms never influence lower
        // coefficients.
        let f3 = [
            self.b.clone(),
            self.a.clone(),
            self.field.zero(),
            self.field.one(),
        ];
        let mut acc: Vec<Fe> = vec![self.field.one()];
        for _ in 0..(p - 1) / 2 {
            let mut next = vec![self.field.zero(); (acc.len() + 3).min(cut + 1)];
            for (i, c) in acc.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (k, fk) in f3.iter().enumerate() {
                    if fk.is_zero() {
                        continue;
                    }
                    if i + k <= cut {
                        next[i + k] = next[i + k].add(&c.mul(fk));
                    }
                }
            }
            acc = next;
        }
        acc.get(cut).map(|c| c.is_zero()).unwrap_or(true)
    }

    /// Number of points over the curve's (small) base field, by direct
    /// character summation.  Intended as an independent oracle in tests.
    pub fn count_points(&self) -> u64 {
        let q_big = self.field.order();
        let q = u64::try_from(&q_big).expect("field too large for direct counting");
        let mut n: u64 = 1; // infinity
        for i in 0..q {
            let x = self.field.nth_lex(i);
            let v = self.rhs(&x);
            if v.is_zero() {
                n += 1;
            } else if v.is_square() {
                n += 2;
            }
        }
        n
    }

    /// |Aut(E)|: 6 at j = 0, 4 at j = 1728, otherwise 2.
    pub fn automorphism_count(&self) -> usize {
        let f1728 = self.field.from_u64(1728 % self.field.p());
        if self.j.is_zero() {
            6
        } else if self.j == f1728 {
            4
        } else {
            2
        }
    }

    /// The automorphisms of E as scalars u (acting by (x,y) -> (u^2 x, u^3 y)):
    /// the roots of unity of order dividing 2, 4 or 6 according to j.  Over a
    /// field containing F_{p^2} the full automorphism group is rational.
    pub fn automorphisms(&self) -> Vec<Fe> {
        let k = match self.automorphism_count() {
            6 => 6u64,
            4 => 4,
            _ => 2,
        };
        let mut c = vec![self.field.zero(); k as usize + 1];
        c[0] = self.field.one().neg();
        c[k as usize] = self.field.one();
        Poly::from_coeffs(&self.field, c).roots()
    }

    /// The distinct scalars u^2 by which Aut(E) acts on x-coordinates,
    /// sorted.  {1}, {1,-1} or the cube roots of unity present in the field.
    pub fn aut_x_scalars(&self) -> Vec<Fe> {
        let one = self.field.one();
        let f1728 = self.field.from_u64(1728 % self.field.p());
        if self.j.is_zero() {
            let mut c = vec![self.field.zero(); 4];
            c[0] = one.neg();
            c[3] = one;
            Poly::from_coeffs(&self.field, c).roots()
        } else if self.j == f1728 {
            let mut v = vec![one.neg(), one];
            v.sort();
            v
        } else {
            vec![one]
        }
    }

    /// The x-division polynomial of level n: a polynomial in x whose roots
    /// over the algebraic closure are the x-coordinates of the nonzero
    /// n-torsion points.  For odd n this is psi_n itself; for n = 2 it is
    /// x^3 + a x + b.  Requires gcd(n, p) = 1 and n >= 2.
    pub fn division_poly_x(&self, n: u64) -> Result<Poly> {
        if n < 2 || n % self.field.p() == 0 {
            return Err(Error::Params(format!(
                "division polynomial level {n} invalid for p = {}",
                self.field.p()
            )));
        }
        let fld = &self.field;
        if n == 2 {
            return Ok(Poly::from_coeffs(
                fld,
                vec![self.b.clone(), self.a.clone(), fld.zero(), fld.one()],
            ));
        }
        if n % 2 == 0 {
            // Even n > 2: psi_n = 2y * P_n(x); the x-division polynomial
            // combines the 2-torsion cubic with P_n.
            let pn = self.psi_x_part(n);
            let two = self.division_poly_x(2)?;
            return Ok(two.mul(&pn).make_monic());
        }
        Ok(self.psi_x_part(n).make_monic())
    }

    /// The x-part P_n of the division polynomial: psi_n = P_n(x) for odd n
    /// and psi_n = 2y * P_n(x) for even n, with y^2 = x^3 + a x + b
    /// substituted throughout.  With this normalization the standard
    /// recurrences become, writing F = (2y)^2 = 4(x^3 + a x + b):
    ///   P_{2m}   = P_m (P_{m+2} P_{m-1}^2 - P_{m-2} P_{m+1}^2)
    ///   P_{2m+1} = F^2 P_{m+2} P_m^3 - P_{m-1} P_{m+1}^3   (m even)
    ///   P_{2m+1} = P_{m+2} P_m^3 - F^2 P_{m-1} P_{m+1}^3   (m odd)
    fn psi_x_part(&self, n: u64) -> Poly {
        self.psi_x_table(n).pop().unwrap()
    }

    /// The x-parts P_0 .. P_upto (see `psi_x_part`).
    pub(crate) fn psi_x_table(&self, upto: u64) -> Vec<Poly> {
        let n = upto.max(4);
        let fld = &self.field;
        let a = &self.a;
        let b = &self.b;
        let f4 = Poly::from_coeffs(
            fld,
            vec![self.b.clone(), self.a.clone(), fld.zero(), fld.one()],
        )
        .mul_fe(&fld.from_u64(4));
        let f4sq = f4.mul(&f4);
        let mut cache: Vec<Option<Poly>> = vec![None; (n as usize) + 3];
        cache[0] = Some(Poly::zero(fld));
        cache[1] = Some(Poly::one(fld));
        cache[2] = Some(Poly::one(fld));
        cache[3] = Some(Poly::from_coeffs(
            fld,
            vec![
                a.square().neg(),
                b.mul_u64(12),
                a.mul_u64(6),
                fld.zero(),
                fld.from_u64(3),
            ],
        ));
        cache[4] = Some(
            Poly::from_coeffs(
                fld,
                vec![
                    b.square().mul_u64(8).add(&a.square().mul(a)).neg(),
                    a.mul(b).mul_u64(4).neg(),
                    a.square().mul_u64(5).neg(),
                    b.mul_u64(20),
                    a.mul_u64(5),
                    fld.zero(),
                    fld.one(),
                ],
            )
            .mul_fe(&fld.from_u64(2)),
        );

        fn get(cache: &mut Vec<Option<Poly>>, k: u64, f4sq: &Poly) -> Poly {
            if let Some(v) = &cache[k as usize] {
                return v.clone();
            }
            let m = k / 2;
            let val = if k % 2 == 0 {
                let pm = get(cache, m, f4sq);
                let t1 = get(cache, m + 2, f4sq).mul(&get(cache, m - 1, f4sq).square());
                let t2 = get(cache, m - 2, f4sq).mul(&get(cache, m + 1, f4sq).square());
                pm.mul(&t1.sub(&t2))
            } else {
                let pm = get(cache, m, f4sq);
                let t1 = get(cache, m + 2, f4sq).mul(&pm.square()).mul(&pm);
                let pm1 = get(cache, m + 1, f4sq);
                let t2 = get(cache, m - 1, f4sq).mul(&pm1.square()).mul(&pm1);
                if m % 2 == 0 {
                    f4sq.mul(&t1).sub(&t2)
                } else {
                    t1.sub(&f4sq.mul(&t2))
                }
            };
            cache[k as usize] = Some(val.clone());
            val
        }

        for k in 0..=n {
            get(&mut cache, k, &f4sq);
        }
        cache
            .into_iter()
            .take(upto as usize + 1)
            .map(|v| v.unwrap())
            .collect()
    }

    /// Degree r such that the full n-torsion (x- and y-coordinates) is
    /// rational over the degree-r extension of the curve's base field,
    /// found by incrementing r and testing exactly.
    pub fn torsion_field_degree(&self, n: u64) -> Result<usize> {
        let psi = self.division_poly_x(n)?.squarefree_part();
        let fld = &self.field;
        let d = fld.degree();
        let q = fld.order();
        let xpoly = Poly::x(fld).rem(&psi);
        let f = Poly::from_coeffs(
            fld,
            vec![self.b.clone(), self.a.clone(), fld.zero(), fld.one()],
        );
        // x^(q^r) mod psi, built incrementally.
        let xq = psi.frobenius_power_x(d);
        let mut xqr = xq.clone();
        let full = psi.degree().unwrap();
        for r in 1..=(n * n) as usize {
            // All x-coordinates rational over F_{q^r}?
            let g = psi.gcd(&xqr.sub(&xpoly));
            if g.degree() == Some(full) {
                // y-check: f(x)^((q^r - 1)/2) must be 1 (or f(x) = 0) at
                // every root, i.e. f * (z - 1) = 0 mod psi.
                let e = (q.pow(r as u32) - BigUint::one()) >> 1;
                let z = f.pow_mod(&e, &psi);
                let w = f.mul(&z.sub(&Poly::one(fld))).rem(&psi);
                if w.is_zero() {
                    return Ok(r);
                }
            }
            xqr = xqr.compose_mod(&xq, &psi);
        }
        Err(Error::Internal(format!(
            "torsion field degree for n = {n} not found"
        )))
    }
}

/// j-invariant 1728 * 4a^3 / (4a^3 + 27b^2).
pub fn j_from_ab(a: &Fe, b: &Fe) -> Fe {
    let field = a.field();
    let a3 = a.square().mul(a).mul_u64(4);
    let disc = a3.add(&b.square().mul_u64(27));
    a3.mul_u64(1728 % field.p()).div(&disc).expect("singular curve")
}

/// A fixed model with the given j-invariant:
/// (0, min nonzero) for j = 0, (min nonzero, 0) for j = 1728, and otherwise
/// a = 3j(1728-j), b = 2j(1728-j)^2.
pub fn curve_with_j(field: &Arc<Field>, j: &Fe) -> Curve {
    let f1728 = field.from_u64(1728 % field.p());
    if j.is_zero() {
        return Curve::new(field.zero(), field.nth_lex(1)).unwrap();
    }
    if *j == f1728 {
        return Curve::new(field.nth_lex(1), field.zero()).unwrap();
    }
    let t = f1728.sub(j);
    let a = j.mul(&t).mul_u64(3);
    let b = j.mul(&t.square()).mul_u64(2);
    Curve::new(a, b).unwrap()
}

/// The representative model for a j-invariant: the curve with that j whose
/// coefficient pair (a, b) is smallest in lexicographic coordinate order.
pub fn representative_for_j(field: &Arc<Field>, j: &Fe) -> Curve {
    let f1728 = field.from_u64(1728 % field.p());
    if j.is_zero() {
        // a = 0 forced; smallest valid b is the first nonzero element.
        return Curve::new(field.zero(), field.nth_lex(1)).unwrap();
    }
    if *j == f1728 {
        // b = 0 forced; smallest valid a.
        return Curve::new(field.nth_lex(1), field.zero()).unwrap();
    }
    // For fixed a != 0: 27 j b^2 = 4 a^3 (1728 - j).
    let t = f1728.sub(j);
    let c27j_inv = j.mul_u64(27).inv().unwrap();
    let mut i = 1u64;
    loop {
        let a = field.nth_lex(i);
        i += 1;
        if a.is_zero() {
            continue;
        }
        let b2 = a.square().mul(&a).mul_u64(4).mul(&t).mul(&c27j_inv);
        if b2.is_zero() {
            // t = 0 handled above; b = 0 would give j = 1728.
            continue;
        }
        if let Some(b) = b2.sqrt() {
            let bneg = b.neg();
            let bmin = if b <= bneg { b } else { bneg };
            let c = Curve::new(a, bmin).unwrap();
            debug_assert!(c.j() == j);
            return c;
        }
    }
}

/// All supersingular j-invariants over F_{p^2}, sorted lexicographically.
///
/// Strategy: scan j in F_p by exact point counts over F_p (trace zero), then
/// close under 2-isogenies over F_{p^2}.  The supersingular locus is
/// connected under 2-isogenies and every supersingular j lies in F_{p^2},
/// so this reaches everything.
pub fn supersingular_j_invariants(fp2: &Arc<Field>) -> Vec<Fe> {
    let p = fp2.p();
    // Quadratic residue table over F_p.
    let mut is_sq = vec![false; p as usize];
    for x in 0..p {
        is_sq[((x as u128 * x as u128) % p as u128) as usize] = true;
    }
    let mulp = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let mut seeds: Vec<u64> = Vec::new();
    for j0 in 0..p {
        // Model over F_p for this j.
        let (a, b) = if j0 == 0 {
            (0u64, 1u64)
        } else if j0 == 1728 % p {
            (1u64, 0u64)
        } else {
            let t = (1728 % p + p - j0) % p;
            (mulp(3, mulp(j0, t)), mulp(2, mulp(j0, mulp(t, t))))
        };
        // Character sum: supersingular over F_p <=> trace 0 <=> sum chi(f(x)) = 0.
        let mut s: i64 = 0;
        for x in 0..p {
            let fx = (mulp(mulp(x, x), x) + mulp(a, x) + b) % p;
            if fx == 0 {
                continue;
            }
            s += if is_sq[fx as usize] { 1 } else { -1 };
        }
        if s == 0 {
            seeds.push(j0);
        }
    }
    // BFS closure under 2-isogeny over F_{p^2}.
    let mut known: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue: Vec<Fe> = Vec::new();
    for j0 in seeds {
        let j = fp2.from_u64(j0);
        if known.insert(j.coords().to_vec()) {
            queue.push(j);
        }
    }
    while let Some(j) = queue.pop() {
        for nj in two_isogenous_j(fp2, &j) {
            if known.insert(nj.coords().to_vec()) {
                queue.push(nj);
            }
        }
    }
    known.into_iter().map(|c| fp2.elem(c)).collect()
}

/// The j-invariants 2-isogenous to j (with multiplicity collapsed), using a
/// model whose 2-torsion is rational over F_{p^2}.
fn two_isogenous_j(fp2: &Arc<Field>, j: &Fe) -> Vec<Fe> {
    let e = model_with_split_two_torsion(fp2, j);
    let cubic = e.division_poly_x(2).unwrap();
    let roots = cubic.roots();
    debug_assert_eq!(roots.len(), 3);
    let mut out = Vec::new();
    for x0 in roots {
        // Degree-2 Vélu: v = 3 x0^2 + a, w = x0 * v.
        let v = x0.square().mul_u64(3).add(e.a());
        let w = x0.mul(&v);
        let a2 = e.a().sub(&v.mul_u64(5));
        let b2 = e.b().sub(&w.mul_u64(7));
        out.push(j_from_ab(&a2, &b2));
    }
    out.sort();
    out.dedup();
    out
}

/// A model for j over F_{p^2} whose full 2-torsion is rational.  Some twist
/// in the appropriate family always works for supersingular j (the twist
/// with group (Z/(p -+ 1))^2 has even group exponent).
pub fn model_with_split_two_torsion(fp2: &Arc<Field>, j: &Fe) -> Curve {
    let base = curve_with_j(fp2, j);
    let f1728 = fp2.from_u64(1728 % fp2.p());
    let mut i = 1u64;
    loop {
        let d = fp2.nth_lex(i);
        i += 1;
        if d.is_zero() {
            continue;
        }
        let cand = if j.is_zero() {
            Curve::new(fp2.zero(), base.b().mul(&d)).unwrap()
        } else if *j == f1728 {
            Curve::new(base.a().mul(&d), fp2.zero()).unwrap()
        } else {
            Curve::new(base.a().mul(&d.square()), base.b().mul(&d.square().mul(&d))).unwrap()
        };
        let cubic = cand.division_poly_x(2).unwrap();
        if cubic.roots().len() == 3 {
            return cand;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp2_61() -> Arc<Field> {
        Field::from_prime_modulus(61, vec![2, 60, 1], "s").unwrap()
    }

    #[test]
    fn point_arithmetic_basics() {
        let f = fp2_61();
        let e = Curve::new(f.from_u64(53), f.from_u64(18)).unwrap();
        // Find some point and check group laws.
        let mut pt = None;
        for i in 0..200 {
            let x = f.nth_lex(i);
            if let Some(p) = e.lift_x(&x) {
                pt = Some(p);
                break;
            }
        }
        let p = pt.unwrap();
        assert!(e.contains(&p));
        let two_p = e.add(&p, &p);
        assert!(e.contains(&two_p));
        assert_eq!(e.mul(2, &p), two_p);
        assert_eq!(e.add(&p, &e.neg(&p)), Point::Infinity);
        // Associativity spot check.
        let q = e.mul(3, &p);
        let r = e.mul(5, &p);
        assert_eq!(e.add(&e.add(&p, &q), &r), e.add(&p, &e.add(&q, &r)));
    }

    #[test]
    fn j_invariants_of_table_models() {
        let f = fp2_61();
        // Known supersingular models over F_61 / F_61^2.
        let cases: Vec<((u64, u64), (u64, u64), (u64, u64))> = vec![
            // ((a0,a1),(b0,b1),(j0,j1)) coordinates (constant, s-part)
            ((53, 0), (18, 0), (9, 0)),
            ((6, 0), (34, 0), (41, 0)),
            ((14, 0), (36, 0), (50, 0)),
            ((47, 30), (49, 48), (32, 20)),
            ((16, 31), (36, 13), (52, 41)),
        ];
        for ((a0, a1), (b0, b1), (j0, j1)) in cases {
            let e = Curve::new(f.elem(vec![a0, a1]), f.elem(vec![b0, b1])).unwrap();
            assert_eq!(e.j(), &f.elem(vec![j0, j1]));
            assert!(e.is_supersingular());
        }
    }

    #[test]
    fn hasse_agrees_with_point_counts_fp61() {
        // Over F_61 supersingularity is trace = 0, i.e. #E(F_61) = 62.
        let f = Field::prime(61).unwrap();
        for i in 0..60 {
            let a = f.nth_lex(i % 61);
            let b = f.nth_lex((3 * i + 5) % 61);
            let Ok(e) = Curve::new(a, b) else { continue };
            let ss = e.is_supersingular();
            let n = e.count_points();
            assert_eq!(ss, n == 62, "mismatch for curve #{i}");
        }
    }

    #[test]
    fn supersingular_count_61() {
        let f = fp2_61();
        let js = supersingular_j_invariants(&f);
        // 61 = 12*5 + 1, so #S_p = floor(p/12) = 5 and the locus is
        // {9, 41, 50, 20s+32, 41s+52}.
        assert_eq!(js.len(), 5);
        let expect: Vec<Fe> = vec![
            f.elem(vec![9, 0]),
            f.elem(vec![41, 0]),
            f.elem(vec![50, 0]),
            f.elem(vec![32, 20]),
            f.elem(vec![52, 41]),
        ];
        for j in &expect {
            assert!(js.contains(j), "missing j = {j}");
        }
    }

    #[test]
    fn supersingular_count_23_and_37() {
        let f23 = Field::from_prime_modulus(23, vec![5, 21, 1], "s").unwrap();
        let js23 = supersingular_j_invariants(&f23);
        let expect: Vec<Fe> = vec![
            f23.from_u64(0),
            f23.from_u64(3),
            f23.from_u64(19),
        ];
        assert_eq!(js23, {
            let mut e = expect.clone();
            e.sort();
            e
        });
        let f37 = Field::from_prime_modulus(37, vec![2, 33, 1], "s").unwrap();
        let js37 = supersingular_j_invariants(&f37);
        assert_eq!(js37.len(), 3);
        // j = 8 is the F_p-rational one; the other two are conjugate.
        assert!(js37.contains(&f37.from_u64(8)));
        let non_rational: Vec<&Fe> = js37.iter().filter(|j| !j.in_prime_field()).collect();
        assert_eq!(non_rational.len(), 2);
        assert_eq!(non_rational[0].frobenius(), *non_rational[1]);
    }

    #[test]
    fn division_poly_degrees() {
        let f = fp2_61();
        let e = Curve::new(f.from_u64(53), f.from_u64(18)).unwrap();
        assert_eq!(e.division_poly_x(2).unwrap().degree(), Some(3));
        assert_eq!(e.division_poly_x(3).unwrap().degree(), Some(4));
        assert_eq!(e.division_poly_x(5).unwrap().degree(), Some(12));
        assert_eq!(e.division_poly_x(7).unwrap().degree(), Some(24));
    }

    #[test]
    fn division_poly_roots_are_torsion() {
        let f = fp2_61();
        let e = Curve::new(f.from_u64(53), f.from_u64(18)).unwrap();
        for n in [2u64, 3, 5] {
            let psi = e.division_poly_x(n).unwrap();
            for x in psi.roots() {
                // x-coordinate of an n-torsion point: multiply a lift by n.
                if let Some(p) = e.lift_x(&x) {
                    assert_eq!(e.mul(n, &p), Point::Infinity, "n = {n}, x = {x}");
                } else {
                    // y not rational here; check via the doubling chain on x
                    // only for odd n (x of [n]P infinite means psi_n(x) = 0,
                    // which is what we started from), so just re-verify the
                    // root is simple.
                    assert!(psi.eval(&x).is_zero());
                }
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        let f = fp2_61();
        let e0 = Curve::new(f.zero(), f.one()).unwrap(); // j = 0
        assert_eq!(e0.automorphism_count(), 6);
        assert_eq!(e0.automorphisms().len(), 6);
        assert_eq!(e0.aut_x_scalars().len(), 3);
        let e1728 = Curve::new(f.one(), f.zero()).unwrap();
        assert_eq!(e1728.automorphism_count(), 4);
        assert_eq!(e1728.automorphisms().len(), 4);
        assert_eq!(e1728.aut_x_scalars().len(), 2);
        let e = Curve::new(f.from_u64(53), f.from_u64(18)).unwrap();
        assert_eq!(e.automorphism_count(), 2);
        assert_eq!(e.aut_x_scalars(), vec![f.one()]);
    }

    #[test]
    fn torsion_degrees_61() {
        let f = fp2_61();
        // E_9 = (53, 18) has #E(F_61^2) = 62^2 (Frobenius acts as -61), so
        // its 2-torsion is rational but odd torsion needs the degree where
        // (-61)^r = 1 mod n, i.e. r = 2 for n in {3, 5}.
        let e9 = Curve::new(f.from_u64(53), f.from_u64(18)).unwrap();
        assert_eq!(e9.count_points(), 62 * 62);
        assert_eq!(e9.torsion_field_degree(2).unwrap(), 1);
        assert_eq!(e9.torsion_field_degree(3).unwrap(), 2);
        assert_eq!(e9.torsion_field_degree(5).unwrap(), 2);
    }

    #[test]
    fn representative_is_deterministic_and_correct() {
        let f = fp2_61();
        for j in supersingular_j_invariants(&f) {
            let e = representative_for_j(&f, &j);
            assert_eq!(e.j(), &j);
            let e2 = representative_for_j(&f, &j);
            assert_eq!(e, e2);
        }
    }

    #[test]
    fn frobenius_curve_conjugates() {
        let f = fp2_61();
        let e = Curve::new(f.elem(vec![47, 30]), f.elem(vec![49, 48])).unwrap();
        let c = e.frobenius_curve();
        assert_eq!(c.a(), &f.elem(vec![16, 31]));
        assert_eq!(c.b(), &f.elem(vec![36, 13]));
        assert_eq!(c.j(), &f.elem(vec![52, 41]));
    }
}
