//! Parsing and formatting of field elements and polynomials.
//!
//! Elements print like `20s+32` or `17a^3+5a+1` (descending powers of the
//! field generator, no `*`).  The parser is more liberal: it accepts an
//! optional `*` between coefficient and symbol, arbitrary whitespace, and
//! parenthesized-free sums of monomials, e.g. `s^2 + 60*s + 2`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::Poly;

/// Format an element as a sum of monomials in the field generator,
/// descending powers.
pub fn format_fe(x: &Fe) -> String {
    let field = x.field();
    if field.degree() == 1 {
        return format!("{}", x.coords()[0]);
    }
    let sym = field.symbol();
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in x.coords().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match i {
            0 => format!("{c}"),
            1 if c == 1 => sym.to_string(),
            1 => format!("{c}{sym}"),
            _ if c == 1 => format!("{sym}^{i}"),
            _ => format!("{c}{sym}^{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Format a polynomial in the variable `var`, descending powers.  The
/// coefficients print as field elements, parenthesized when they have more
/// than one term.
pub fn format_poly(f: &Poly, var: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = format_fe(c);
        let needs_paren = cs.contains('+') || cs.contains('-');
        let coeff = if needs_paren { format!("({cs})") } else { cs };
        let part = match i {
            0 => coeff,
            1 if c.is_one() => var.to_string(),
            1 => format!("{coeff}*{var}"),
            _ if c.is_one() => format!("{var}^{i}"),
            _ => format!("{coeff}*{var}^{i}"),
        };
        parts.push(part);
    }
    parts.join("+")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Sym(String),
    Caret,
    Star,
    Plus,
    Minus,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut v: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(dig) = d.to_digit(10) {
                        v = v
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(dig as u64))
                            .ok_or_else(|| Error::Parse(format!("integer overflow in `{s}`")))?;
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() && !d.is_ascii_digit() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Sym(name));
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            _ => return Err(Error::Parse(format!("unexpected character `{ch}` in `{s}`"))),
        }
    }
    Ok(toks)
}

/// A parsed monomial: coefficient and the power of each symbol seen.
struct Monomial {
    coeff: u64,
    negate: bool,
    powers: Vec<(String, u32)>,
}

/// Parse a sum of monomials in at most the given symbols.
fn parse_monomials(s: &str) -> Result<Vec<Monomial>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut monomials = Vec::new();
    let mut i = 0usize;
    loop {
        let mut negate = false;
        while i < toks.len() {
            match toks[i] {
                Tok::Plus => i += 1,
                Tok::Minus => {
                    negate = !negate;
                    i += 1;
                }
                _ => break,
            }
        }
        if i >= toks.len() {
            return Err(Error::Parse(format!("dangling operator in `{s}`")));
        }
        let mut coeff: u64 = 1;
        let mut powers: Vec<(String, u32)> = Vec::new();
        let mut expect_factor = true;
        while i < toks.len() {
            match &toks[i] {
                Tok::Num(v) => {
                    // Adjacency means multiplication (e.g. `20s`).
                    coeff = coeff
                        .checked_mul(*v)
                        .ok_or_else(|| Error::Parse(format!("coefficient overflow in `{s}`")))?;
                    expect_factor = false;
                    i += 1;
                }
                Tok::Sym(name) => {
                    let name = name.clone();
                    i += 1;
                    let mut power = 1u32;
                    if i < toks.len() && toks[i] == Tok::Caret {
                        i += 1;
                        match toks.get(i) {
                            Some(Tok::Num(e)) => {
                                power = u32::try_from(*e).map_err(|_| {
                                    Error::Parse(format!("exponent too large in `{s}`"))
                                })?;
                                i += 1;
                            }
                            _ => return Err(Error::Parse(format!("expected exponent in `{s}`"))),
                        }
                    }
                    match powers.iter_mut().find(|(n, _)| *n == name) {
                        Some((_, pw)) => *pw += power,
                        None => powers.push((name, power)),
                    }
                    expect_factor = false;
                }
                Tok::Star => {
                    if expect_factor {
                        return Err(Error::Parse(format!("misplaced `*` in `{s}`")));
                    }
                    expect_factor = true;
                    i += 1;
                }
                Tok::Plus | Tok::Minus => break,
                Tok::Caret => return Err(Error::Parse(format!("misplaced `^` in `{s}`"))),
            }
        }
        monomials.push(Monomial {
            coeff,
            negate,
            powers,
        });
        if i >= toks.len() {
            break;
        }
    }
    Ok(monomials)
}

/// Parse a field element written in the field's generator symbol.
pub fn parse_fe(field: &Arc<Field>, s: &str) -> Result<Fe> {
    let monomials = parse_monomials(s)?;
    let p = field.p();
    let mut coords = vec![0u64; field.degree()];
    for m in monomials {
        let mut power = 0u32;
        for (name, pw) in &m.powers {
            if name != field.symbol() {
                return Err(Error::Parse(format!(
                    "unknown symbol `{name}` (field generator is `{}`)",
                    if field.symbol().is_empty() { "<none>" } else { field.symbol() }
                )));
            }
            power += pw;
        }
        let mut v = field.from_u64(m.coeff % p);
        if m.negate {
            v = v.neg();
        }
        let term = field.gen().pow(power as u64).mul(&v);
        // Accumulate coordinates.
        for (k, &c) in term.coords().iter().enumerate() {
            coords[k] = (coords[k] + c) % p;
        }
    }
    Ok(field.elem(coords))
}

/// Parse a polynomial in `var` with coefficients in `field`.  The variable
/// must be distinct from the field generator symbol; coefficients may use
/// the generator symbol.
pub fn parse_poly(field: &Arc<Field>, var: &str, s: &str) -> Result<Poly> {
    let monomials = parse_monomials(s)?;
    let mut coeffs: Vec<Fe> = Vec::new();
    for m in monomials {
        let mut xpow = 0u32;
        let mut gen_pow = 0u32;
        for (name, pw) in &m.powers {
            if name == var {
                xpow += pw;
            } else if name == field.symbol() {
                gen_pow += pw;
            } else {
                return Err(Error::Parse(format!(
                    "unknown symbol `{name}` in `{s}`"
                )));
            }
        }
        let mut v = field.from_u64(m.coeff % field.p());
        if m.negate {
            v = v.neg();
        }
        let v = v.mul(&field.gen().pow(gen_pow as u64));
        let idx = xpow as usize;
        if coeffs.len() <= idx {
            coeffs.resize(idx + 1, field.zero());
        }
        coeffs[idx] = coeffs[idx].add(&v);
    }
    Ok(Poly::from_coeffs(field, coeffs))
}

/// Parse a monic modulus over F_p given in variable `symbol`,
/// returning the prime-field coefficient vector (ascending).
pub fn parse_prime_modulus(p: u64, symbol: &str, s: &str) -> Result<Vec<u64>> {
    let monomials = parse_monomials(s)?;
    let mut coeffs: Vec<u64> = Vec::new();
    for m in monomials {
        let mut pow = 0u32;
        for (name, pw) in &m.powers {
            if name != symbol {
                return Err(Error::Parse(format!(
                    "modulus must be a polynomial in `{symbol}`, found `{name}`"
                )));
            }
            pow += pw;
        }
        let idx = pow as usize;
        if coeffs.len() <= idx {
            coeffs.resize(idx + 1, 0);
        }
        let mut c = m.coeff % p;
        if m.negate {
            c = (p - c) % p;
        }
        coeffs[idx] = (coeffs[idx] + c) % p;
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_fp2_element() {
        let f = Field::from_prime_modulus(61, vec![2, 60, 1], "s").unwrap();
        let x = f.elem(vec![32, 20]);
        assert_eq!(format_fe(&x), "20s+32");
        assert_eq!(parse_fe(&f, "20s+32").unwrap(), x);
        assert_eq!(parse_fe(&f, "20*s + 32").unwrap(), x);
        assert_eq!(parse_fe(&f, " 32+20s").unwrap(), x);
    }

    #[test]
    fn negative_terms() {
        let f = Field::from_prime_modulus(61, vec![2, 60, 1], "s").unwrap();
        assert_eq!(parse_fe(&f, "-1").unwrap(), f.from_u64(60));
        assert_eq!(parse_fe(&f, "s - 5").unwrap(), f.elem(vec![56, 1]));
    }

    #[test]
    fn quartic_symbol() {
        let f = Field::from_prime_modulus(37, vec![2, 24, 6, 0, 1], "a").unwrap();
        let x = f.elem(vec![0, 0, 0, 17]);
        assert_eq!(format_fe(&x), "17a^3");
        assert_eq!(parse_fe(&f, "17a^3").unwrap(), x);
        assert_eq!(parse_fe(&f, "17 * a^3").unwrap(), x);
    }

    #[test]
    fn prime_modulus_parse() {
        assert_eq!(
            parse_prime_modulus(61, "s", "s^2+60*s+2").unwrap(),
            vec![2, 60, 1]
        );
        assert_eq!(
            parse_prime_modulus(61, "s", "s^2 - s + 2").unwrap(),
            vec![2, 60, 1]
        );
        assert_eq!(
            parse_prime_modulus(37, "a", "a^4+6*a^2+24*a+2").unwrap(),
            vec![2, 24, 6, 0, 1]
        );
    }

    #[test]
    fn poly_with_extension_coefficients() {
        let f = Field::from_prime_modulus(61, vec![2, 60, 1], "s").unwrap();
        let p = parse_poly(&f, "x", "x^2 + (s)*x + 20s+32").unwrap_or_else(|_| {
            // Parentheses are not part of the grammar; the plain form works.
            parse_poly(&f, "x", "x^2 + s*x + 20s+32").unwrap()
        });
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.coeff(1), f.gen());
        assert_eq!(p.coeff(0), f.elem(vec![32, 20]));
    }

    #[test]
    fn prime_field_format() {
        let f = Field::prime(61).unwrap();
        assert_eq!(format_fe(&f.from_u64(9)), "9");
        assert_eq!(parse_fe(&f, "70").unwrap(), f.from_u64(9));
    }
}
