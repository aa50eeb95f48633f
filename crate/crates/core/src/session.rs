//! A session fixes the prime p, the level n (and optionally an isogeny
//! degree ell), the field tower, and the representative curve for every
//! supersingular j-invariant.  All higher-level computations (fibers,
//! graphs, counts) run against a session so that their outputs are
//! reproducible and mutually consistent.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::curve::{
    representative_for_j, supersingular_j_invariants, Curve,
};
use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Field};
use crate::level::{subgroups_of_order, LevelSet, Subgroup};
use crate::textio;

#[derive(Clone, Debug, Default)]
pub struct SessionConfig {
    pub p: u64,
    pub n: u64,
    pub ell: Option<u64>,
    /// Modulus for F_{p^2} as a polynomial text, e.g. "s^2+60*s+2".
    /// Defaults to the lexicographically smallest irreducible quadratic.
    pub fp2_modulus: Option<String>,
    /// Modulus for the working field K as a polynomial text.  Defaults to
    /// the smallest irreducible of the required degree.
    pub tower_modulus: Option<String>,
    /// Override models "j = ...; a = ...; b = ..." (one per line).
    pub overrides: Option<String>,
}

/// Everything the session knows about one representative curve.
pub struct CurveRecord {
    /// j-invariant as an element of F_{p^2}.
    pub j_fp2: Fe,
    /// The representative model over F_{p^2}.
    pub model_fp2: Curve,
    /// The same model base-changed to the working field.
    pub curve: Curve,
    pub j_work: Fe,
    /// Sorted x-coordinates of the nonzero n-torsion points (working field).
    pub n_torsion_x: Vec<Fe>,
    /// The n+1 cyclic subgroups of order n, sorted by x-set.
    pub n_subgroups: Vec<Subgroup>,
    pub ell_torsion_x: Option<Vec<Fe>>,
    pub ell_subgroups: Option<Vec<Subgroup>>,
    /// Distinct u^2 by which Aut acts on x-coordinates (working field).
    pub aut_x: Vec<Fe>,
}

pub struct Session {
    pub p: u64,
    pub n: u64,
    pub ell: Option<u64>,
    pub fp2: Arc<Field>,
    pub work: Arc<Field>,
    /// Embedding F_{p^2} -> K.
    pub embed: Embedding,
    pub curves: Vec<CurveRecord>,
    j_index: BTreeMap<Vec<u64>, usize>,
}

fn validate_level(p: u64, n: u64, what: &str) -> Result<()> {
    if n < 2 || !crate::field::is_prime_u64(n) {
        return Err(Error::Params(format!("{what} = {n} must be a prime >= 2")));
    }
    if n == p {
        return Err(Error::Params(format!("{what} = {n} must differ from p")));
    }
    Ok(())
}

/// Extract the generator symbol from a modulus text (its unique letter).
fn modulus_symbol(text: &str) -> Result<String> {
    let mut sym = None;
    let mut cur = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_alphabetic() || ch == '_' {
            cur.push(ch);
        } else {
            if !cur.is_empty() {
                match &sym {
                    None => sym = Some(cur.clone()),
                    Some(s) if *s == cur => {}
                    Some(s) => {
                        return Err(Error::Parse(format!(
                            "modulus `{text}` mixes symbols `{s}` and `{cur}`"
                        )))
                    }
                }
                cur.clear();
            }
        }
    }
    sym.ok_or_else(|| Error::Parse(format!("modulus `{text}` has no generator symbol")))
}

fn build_field_from_text(p: u64, text: &str) -> Result<Arc<Field>> {
    let sym = modulus_symbol(text)?;
    let coeffs = textio::parse_prime_modulus(p, &sym, text)?;
    Field::from_prime_modulus(p, coeffs, &sym)
}

impl Session {
    pub fn new(cfg: &SessionConfig) -> Result<Session> {
        let p = cfg.p;
        if p < 5 || !crate::field::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        validate_level(p, cfg.n, "n")?;
        if let Some(ell) = cfg.ell {
            validate_level(p, ell, "ell")?;
            if ell == cfg.n {
                return Err(Error::Params(format!(
                    "ell = {ell} must be coprime to the level n = {}",
                    cfg.n
                )));
            }
        }
        let fp2 = match &cfg.fp2_modulus {
            Some(text) => {
                let f = build_field_from_text(p, text)?;
                if f.degree() != 2 {
                    return Err(Error::Params(format!(
                        "fp2 modulus must have degree 2, got {}",
                        f.degree()
                    )));
                }
                f
            }
            None => Field::default_extension(p, 2, "s")?,
        };

        // Supersingular locus and representative models over F_{p^2}.
        let js = supersingular_j_invariants(&fp2);
        let overrides = parse_overrides(&fp2, cfg.overrides.as_deref().unwrap_or(""))?;
        let mut models: Vec<(Fe, Curve)> = Vec::with_capacity(js.len());
        for j in &js {
            let model = match overrides.get(&j.coords().to_vec()) {
                Some(m) => m.clone(),
                None => representative_for_j(&fp2, j),
            };
            if model.j() != j {
                return Err(Error::Params(format!(
                    "override model for j = {j} has j-invariant {}",
                    model.j()
                )));
            }
            if !model.is_supersingular() {
                return Err(Error::Invariant(format!(
                    "model for j = {j} is not supersingular"
                )));
            }
            models.push((j.clone(), model));
        }
        for j in overrides.keys() {
            if !js.iter().any(|x| x.coords() == &j[..]) {
                return Err(Error::Params(format!(
                    "override j = {} is not a supersingular j-invariant",
                    fp2.elem(j.clone())
                )));
            }
        }

        // Working field degree: lcm of the per-curve torsion field degrees
        // over F_{p^2}, for n and (if present) ell.
        let mut m = 1usize;
        for (_, model) in &models {
            let r = model.torsion_field_degree(cfg.n)?;
            m = lcm(m, r);
            if let Some(ell) = cfg.ell {
                let r = model.torsion_field_degree(ell)?;
                m = lcm(m, r);
            }
        }
        let need = 2 * m;
        let (work, embed) = match &cfg.tower_modulus {
            Some(text) => {
                let f = build_field_from_text(p, text)?;
                if f.degree() % 2 != 0 || (f.degree() / 2) % m != 0 {
                    return Err(Error::Params(format!(
                        "tower modulus degree {} cannot contain the required \
                         torsion field F_p^{need}",
                        f.degree()
                    )));
                }
                let emb = Embedding::new(&fp2, &f)?;
                (f, emb)
            }
            None if need == 2 => (fp2.clone(), Embedding::identity(&fp2)),
            None => {
                let f = Field::default_extension(p, need, "t")?;
                let emb = Embedding::new(&fp2, &f)?;
                (f, emb)
            }
        };

        let mut curves = Vec::with_capacity(models.len());
        let mut j_index = BTreeMap::new();
        for (idx, (j, model)) in models.into_iter().enumerate() {
            let a = embed.apply(model.a());
            let b = embed.apply(model.b());
            let curve = Curve::new(a, b)?;
            let j_work = curve.j().clone();
            let n_torsion_x = full_torsion_x(&curve, cfg.n)?;
            let n_subgroups = subgroups_of_order(&curve, cfg.n, &n_torsion_x)?;
            let (ell_torsion_x, ell_subgroups) = match cfg.ell {
                Some(ell) => {
                    let tx = full_torsion_x(&curve, ell)?;
                    let subs = subgroups_of_order(&curve, ell, &tx)?;
                    (Some(tx), Some(subs))
                }
                None => (None, None),
            };
            let aut_x = curve.aut_x_scalars();
            j_index.insert(j_work.coords().to_vec(), idx);
            curves.push(CurveRecord {
                j_fp2: j,
                model_fp2: model,
                curve,
                j_work,
                n_torsion_x,
                n_subgroups,
                ell_torsion_x,
                ell_subgroups,
                aut_x,
            });
        }

        Ok(Session {
            p,
            n: cfg.n,
            ell: cfg.ell,
            fp2,
            work,
            embed,
            curves,
            j_index,
        })
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    /// Index of the representative with the given j (working-field element).
    pub fn curve_by_j_work(&self, j: &Fe) -> Option<usize> {
        self.j_index.get(&j.coords().to_vec()).copied()
    }

    /// "E_<j>" with j printed as an element of F_{p^2}.
    pub fn curve_label(&self, idx: usize) -> String {
        format!("E_{}", self.curves[idx].j_fp2)
    }

    /// "(E_<j>, <generator x>)".
    pub fn class_label(&self, set: &LevelSet, class_idx: usize) -> String {
        let c = &set.classes[class_idx];
        format!(
            "({}, {})",
            self.curve_label(c.curve_idx),
            c.rep.gen_x
        )
    }

    /// The level set S_n of all classes [E, G].
    pub fn level_set(&self) -> LevelSet {
        let per_curve: Vec<Vec<Subgroup>> = self
            .curves
            .iter()
            .map(|c| c.n_subgroups.clone())
            .collect();
        let auts: Vec<Vec<Fe>> = self.curves.iter().map(|c| c.aut_x.clone()).collect();
        let curves: Vec<Curve> = self.curves.iter().map(|c| c.curve.clone()).collect();
        LevelSet::build(self.n, &per_curve, &auts, &curves)
    }

    /// The classes at level ell (used for graph edges).
    pub fn ell_level_set(&self) -> Result<LevelSet> {
        let ell = self
            .ell
            .ok_or_else(|| Error::Params("session has no ell".into()))?;
        let per_curve: Vec<Vec<Subgroup>> = self
            .curves
            .iter()
            .map(|c| c.ell_subgroups.clone().unwrap())
            .collect();
        let auts: Vec<Vec<Fe>> = self.curves.iter().map(|c| c.aut_x.clone()).collect();
        let curves: Vec<Curve> = self.curves.iter().map(|c| c.curve.clone()).collect();
        Ok(LevelSet::build(ell, &per_curve, &auts, &curves))
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All roots of the level-n x-division polynomial over the curve's field,
/// sorted; errors if any root is missing (field too small).
fn full_torsion_x(curve: &Curve, n: u64) -> Result<Vec<Fe>> {
    let psi = curve.division_poly_x(n)?;
    let roots = psi.roots();
    let expected = if n == 2 { 3 } else { ((n * n - 1) / 2) as usize };
    if roots.len() != expected {
        return Err(Error::Internal(format!(
            "level {n}: torsion not rational over the working field \
             ({} of {expected} x-coordinates found)",
            roots.len()
        )));
    }
    Ok(roots)
}

/// Parse override lines "j = <elt>; a = <elt>; b = <elt>".
fn parse_overrides(fp2: &Arc<Field>, text: &str) -> Result<BTreeMap<Vec<u64>, Curve>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut j = None;
        let mut a = None;
        let mut b = None;
        for part in line.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part.split_once('=').ok_or_else(|| {
                Error::Parse(format!("override line {}: expected `key = value`", lineno + 1))
            })?;
            let val = textio::parse_fe(fp2, v.trim())?;
            match k.trim() {
                "j" => j = Some(val),
                "a" => a = Some(val),
                "b" => b = Some(val),
                other => {
                    return Err(Error::Parse(format!(
                        "override line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        let (j, a, b) = match (j, a, b) {
            (Some(j), Some(a), Some(b)) => (j, a, b),
            _ => {
                return Err(Error::Parse(format!(
                    "override line {}: need j, a and b",
                    lineno + 1
                )))
            }
        };
        let curve = Curve::new(a, b)?;
        if curve.j() != &j {
            return Err(Error::Params(format!(
                "override line {}: model has j = {}, not {}",
                lineno + 1,
                curve.j(),
                j
            )));
        }
        out.insert(j.coords().to_vec(), curve);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p61_n2() -> Session {
        let cfg = SessionConfig {
            p: 61,
            n: 2,
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
    fn session_p61_level2() {
        let s = p61_n2();
        assert_eq!(s.curve_count(), 5);
        // 2-torsion is rational over F_61^2 for these models.
        assert_eq!(s.work.degree(), 2);
        for c in &s.curves {
            assert_eq!(c.n_torsion_x.len(), 3);
            assert_eq!(c.n_subgroups.len(), 3);
        }
        let set = s.level_set();
        // No automorphism identifications away from j = 0, 1728 and none of
        // these j are 0 or 1728, so T = 3 * 5 = 15.
        assert_eq!(set.len(), 15);
        assert_eq!(set.total_weight(), 15);
    }

    #[test]
    fn session_p23_level3() {
        let cfg = SessionConfig {
            p: 23,
            n: 3,
            fp2_modulus: Some("s^2+21*s+5".into()),
            ..Default::default()
        };
        let s = Session::new(&cfg).unwrap();
        assert_eq!(s.curve_count(), 3);
        let set = s.level_set();
        // j = 0 contributes 2 classes (orbits 1+3); j = 3 is 1728 mod 23 and
        // its four subgroups pair up under x -> -x (2 classes); j = 19 is
        // generic (4 classes).
        let t: usize = set.len();
        let w = set.total_weight();
        assert_eq!(w, 4 * 3);
        assert_eq!(t, 8);
        // Class labels are well-formed.
        for i in 0..set.len() {
            let l = s.class_label(&set, i);
            assert!(l.starts_with("(E_"), "{l}");
        }
    }

    #[test]
    fn session_p37_level3_with_tower() {
        let cfg = SessionConfig {
            p: 37,
            n: 3,
            fp2_modulus: Some("s^2+33*s+2".into()),
            tower_modulus: Some("a^4+6*a^2+24*a+2".into()),
            ..Default::default()
        };
        let s = Session::new(&cfg).unwrap();
        assert_eq!(s.curve_count(), 3);
        assert_eq!(s.work.degree(), 4);
        assert_eq!(s.work.symbol(), "a");
        let set = s.level_set();
        assert_eq!(set.total_weight(), 4 * 3);
    }

    #[test]
    fn bad_overrides_rejected() {
        let cfg = SessionConfig {
            p: 61,
            n: 2,
            fp2_modulus: Some("s^2+60*s+2".into()),
            overrides: Some("j = 10; a = 1; b = 1\n".into()),
            ..Default::default()
        };
        // j(1,1) != 10.
        assert!(Session::new(&cfg).is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(Session::new(&SessionConfig {
            p: 61,
            n: 61,
            ..Default::default()
        })
        .is_err());
        assert!(Session::new(&SessionConfig {
            p: 61,
            n: 4,
            ..Default::default()
        })
        .is_err());
        assert!(Session::new(&SessionConfig {
            p: 9,
            n: 2,
            ..Default::default()
        })
        .is_err());
    }
}
