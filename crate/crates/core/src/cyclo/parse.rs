//! Literal syntax: rationals `p/q` or `p`; cyclotomic elements as polynomials
//! in `z`, e.g. `1/2 - 3z^2` or `2*z^3 + z`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CycloNum, Rat};

pub(crate) fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad integer `{n}`"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad integer `{d}`"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rat::new(n, d))
}

pub(crate) fn parse_cyclo(s: &str, order: u32) -> Result<CycloNum, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty coefficient".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        // A sign splits terms unless it follows `^` (negative exponents are not allowed anyway).
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut coeffs: Vec<Rat> = Vec::new();
    for term in terms {
        let (neg, body) = match term.as_bytes()[0] {
            b'-' => (true, &term[1..]),
            b'+' => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(format!("dangling sign in `{s}`"));
        }
        let (coef, exp) = match body.find('z') {
            None => (parse_rat(body)?, 0usize),
            Some(pos) => {
                let head = body[..pos].trim_end_matches('*');
                let c = if head.is_empty() { Rat::one() } else { parse_rat(head)? };
                let tail = &body[pos + 1..];
                let e = if tail.is_empty() {
                    1
                } else if let Some(e) = tail.strip_prefix('^') {
                    e.parse::<usize>().map_err(|_| format!("bad exponent `{e}`"))?
                } else {
                    return Err(format!("unexpected `{tail}` after z"));
                };
                (c, e)
            }
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, Rat::zero());
        }
        coeffs[exp] += if neg { -coef } else { coef };
    }
    Ok(CycloNum::from_poly(order, coeffs))
}
