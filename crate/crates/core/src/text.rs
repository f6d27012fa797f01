//! Textual formats shared by the library and the command-line tool.
//!
//! Polynomials print as terms in descending powers with zero terms and unit
//! coefficients omitted (`T^2+T+2`); extension-field coefficients print as
//! bracketed coordinate lists (`[1,2]*T^3+[0,1]`).  The parser here accepts
//! exactly what the printers emit (whitespace-insensitively), so every value
//! round-trips bit-exactly.

use num::{BigInt, BigRational, Signed, Zero};

use crate::drinfeld::LocalCondition;
use crate::error::{Error, Result};
use crate::gfq::{Field, FqElem};
use crate::polyfq::{Poly, Prime};

/// Parse a field specification: `gf(9)` or a bare prime power `9`.
pub fn parse_field_spec(s: &str) -> Result<Field> {
    let s = s.trim();
    let body = if let Some(rest) = s.strip_prefix("gf(") {
        rest.strip_suffix(')')
            .ok_or_else(|| Error::parse(format!("malformed field spec {s:?}")))?
    } else {
        s
    };
    let q: u64 = body
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("malformed field spec {s:?}")))?;
    Field::from_order(q)
}

fn parse_elem(field: &Field, s: &str) -> Result<FqElem> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix('[') {
        let body = body
            .strip_suffix(']')
            .ok_or_else(|| Error::parse(format!("unterminated coefficient {s:?}")))?;
        let coords: Vec<u64> = body
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::parse(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<_>>()?;
        field.from_coeffs(coords)
    } else {
        let r: u64 = s
            .parse()
            .map_err(|_| Error::parse(format!("bad coefficient {s:?}")))?;
        Ok(field.from_residue(r))
    }
}

/// Parse a polynomial in the display format, e.g. `T^2+T+2`, `2*T+1`,
/// `[1,1]*T+[1,0]`, or `0`.
pub fn parse_poly(field: &Field, s: &str) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::parse("empty polynomial"));
    }
    let mut acc = Poly::zero(field);
    for term in compact.split('+') {
        if term.is_empty() {
            return Err(Error::parse(format!("empty term in {s:?}")));
        }
        let (coeff_str, power) = match term.find('T') {
            None => (term, None),
            Some(pos) => {
                let head = &term[..pos];
                let tail = &term[pos + 1..];
                let k: usize = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| Error::parse(format!("bad exponent in {term:?}")))?
                };
                let coeff = match head.strip_suffix('*') {
                    Some("") => return Err(Error::parse(format!("bad term {term:?}"))),
                    Some(c) => c,
                    None => head,
                };
                (coeff, Some(k))
            }
        };
        let coeff = if coeff_str.is_empty() {
            if power.is_none() {
                return Err(Error::parse(format!("bad term {term:?}")));
            }
            field.one()
        } else {
            parse_elem(field, coeff_str)?
        };
        acc = acc.add(&Poly::monomial(field, coeff, power.unwrap_or(0)));
    }
    Ok(acc)
}

/// Parse a reduction condition `(good|bad|stable|unstable|stable=INT|stable>=INT)@POLY`.
pub fn parse_condition(field: &Field, s: &str) -> Result<(Prime, LocalCondition)> {
    let (kind, poly_str) = s
        .split_once('@')
        .ok_or_else(|| Error::parse(format!("condition {s:?} needs the form KIND@PRIME")))?;
    let cond = match kind.trim() {
        "good" => LocalCondition::Good,
        "bad" => LocalCondition::Bad,
        "stable" => LocalCondition::Stable,
        "unstable" => LocalCondition::Unstable,
        other => {
            if let Some(v) = other.strip_prefix("stable>=") {
                LocalCondition::StableRankGeq(
                    v.trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("bad rank in {s:?}")))?,
                )
            } else if let Some(v) = other.strip_prefix("stable=") {
                LocalCondition::StableRankEq(
                    v.trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("bad rank in {s:?}")))?,
                )
            } else {
                return Err(Error::parse(format!("unknown condition kind {other:?}")));
            }
        }
    };
    let prime = Prime::new(parse_poly(field, poly_str)?)?;
    Ok((prime, cond))
}

pub fn format_condition(prime: &Prime, cond: LocalCondition) -> String {
    format!("{cond}@{prime}")
}

/// Render an exact rational with a fixed number of decimal digits, rounding
/// half away from zero.  Deterministic across platforms.
pub fn decimal_string(x: &BigRational, digits: usize) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let abs = x.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (abs.numer() * &scale * 2 + abs.denom()) / (abs.denom() * 2);
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>width$}", width = digits)
    }
}

/// Render a rational as `num/den` (or just `num` for integers).
pub fn fraction_string(x: &BigRational) -> String {
    if x.denom().is_zero() || x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
