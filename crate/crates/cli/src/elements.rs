//! Element and cochain syntax: terms `name` or `(c)*name` joined by `+`,
//! exactly as the reports print them. A leading `-` negates a term.

use twist_core::hochschild::{AssocAlgebra, Cochain};
use twist_core::{GradedModule, Ring, Scalar, Vector};

use crate::CliError;

fn bad(s: &str, why: &str) -> CliError {
    CliError::Presentation(format!("cannot parse `{s}`: {why}"))
}

/// Splits at `+` outside parentheses and brackets.
fn terms(s: &str) -> Result<Vec<&str>, CliError> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '+' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(bad(s, "unbalanced parentheses"));
        }
    }
    if depth != 0 {
        return Err(bad(s, "unbalanced parentheses"));
    }
    out.push(s[start..].trim());
    if out.iter().any(|t| t.is_empty()) {
        return Err(bad(s, "empty term"));
    }
    Ok(out)
}

/// Byte offset of the `)` closing the `(` at offset 0.
fn closing(t: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// One term as `(coefficient, name)`; `known` says whether a string is a
/// complete name, so that names containing parentheses parse.
fn split_term<'a>(ring: &Ring, t: &'a str, known: &dyn Fn(&str) -> bool) -> Result<(Scalar, &'a str), CliError> {
    if known(t) {
        return Ok((ring.one(), t));
    }
    if let Some(rest) = t.strip_prefix('-') {
        let (c, name) = split_term(ring, rest.trim_start(), known)?;
        return Ok((-c, name));
    }
    if t.starts_with('(') {
        if let Some(close) = closing(t) {
            if let Some(name) = t[close + 1..].trim_start().strip_prefix('*') {
                return Ok((ring.parse_scalar(&t[1..close])?, name.trim()));
            }
        }
    } else if let Some((c, name)) = t.split_once('*') {
        return Ok((ring.parse_scalar(c)?, name.trim()));
    }
    Ok((ring.one(), t))
}

pub fn parse_element(m: &GradedModule, s: &str) -> Result<Vector, CliError> {
    let s = s.trim();
    let mut v = m.zero();
    if s == "0" {
        return Ok(v);
    }
    let known = |n: &str| m.find(n).is_some();
    for t in terms(s)? {
        let (c, name) = split_term(m.ring(), t, &known)?;
        let i = m.find(name).ok_or_else(|| CliError::Presentation(format!("unknown basis element `{name}`")))?;
        v[i] = &v[i] + &c;
    }
    Ok(v)
}

pub fn format_element(m: &GradedModule, v: &Vector) -> String {
    m.format(v)
}

fn cochain_name(b: &AssocAlgebra, args: &[usize], out: usize) -> String {
    let m = b.module();
    let args: Vec<&str> = args.iter().map(|&a| m.name(a)).collect();
    format!("({})->{}", args.join(","), m.name(out))
}

/// `(x,y)->z` as argument and output indices.
fn parse_cochain_name(b: &AssocAlgebra, name: &str) -> Option<(Vec<usize>, usize)> {
    let m = b.module();
    let rest = name.strip_prefix('(')?;
    let (args, out) = rest.split_once(")->")?;
    let args = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',').map(|a| m.find(a.trim())).collect::<Option<Vec<_>>>()?
    };
    Some((args, m.find(out.trim())?))
}

/// Cochains use the same term syntax with basis names `(x,y)->z`.
pub fn parse_cochain(b: &AssocAlgebra, arity: usize, s: &str) -> Result<Cochain, CliError> {
    let s = s.trim();
    let mut f = Cochain::zero(b.ring(), b.dim(), arity);
    if s == "0" {
        return Ok(f);
    }
    let known = |n: &str| parse_cochain_name(b, n).is_some();
    for t in terms(s)? {
        let (c, name) = split_term(b.ring(), t, &known)?;
        let (args, out) = parse_cochain_name(b, name).ok_or_else(|| bad(name, "not a cochain term `(x,..)->z`"))?;
        if args.len() != arity {
            return Err(bad(name, &format!("expected {arity} arguments")));
        }
        let old = f.eval(&args)[out].clone();
        f.set(&args, out, &old + &c);
    }
    Ok(f)
}

pub fn format_cochain(b: &AssocAlgebra, f: &Cochain) -> String {
    let parts: Vec<String> = f
        .terms()
        .map(|(args, o, c)| {
            let name = cochain_name(b, &args, o);
            if c.is_one() {
                name
            } else {
                format!("({c})*{name}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use twist_core::fixtures;

    #[test]
    fn elements_round_trip_through_format() {
        let a = fixtures::two_by_two(Ring::Rationals);
        let m = a.module();
        let mut v = m.zero();
        v[0] = Ring::Rationals.from_rational(-3, 4).unwrap();
        v[2] = Ring::Rationals.one();
        let s = format_element(m, &v);
        assert_eq!(parse_element(m, &s).unwrap(), v);
        assert!(parse_element(m, "0").unwrap().is_zero());
    }

    #[test]
    fn element_syntax_variants() {
        let a = fixtures::e1(Ring::Prime(5));
        let m = a.module();
        let u = m.find("u").unwrap();
        assert_eq!(parse_element(m, "2*u + u").unwrap()[u].to_string(), "3");
        assert_eq!(parse_element(m, "-u").unwrap()[u].to_string(), "4");
        assert_eq!(parse_element(m, "(1/2)*u").unwrap()[u].to_string(), "3");
        assert!(matches!(parse_element(m, "w"), Err(CliError::Presentation(_))));
        assert!(parse_element(m, "(2*u").is_err());
        assert!(parse_element(m, "u +").is_err());
    }

    #[test]
    fn truncated_coefficients_keep_their_sums() {
        let t =
            twist_core::graded::TruncatedRing::univariate(twist_core::graded::BaseField::Rationals, "t", 2).unwrap();
        let r = Ring::Truncated(t);
        let a = fixtures::e1(r.clone());
        let m = a.module();
        let v = parse_element(m, "(1 + 2*t)*u + (-t^2)*a").unwrap();
        assert_eq!(parse_element(m, &format_element(m, &v)).unwrap(), v);
        assert_eq!(v[m.find("u").unwrap()], r.parse_scalar("1 + 2*t").unwrap());
    }

    #[test]
    fn cochains_round_trip() {
        let b = AssocAlgebra::new(fixtures::dual_numbers_algebra(Ring::Rationals)).unwrap();
        let names: Vec<String> = b.module().basis().iter().map(|e| e.name.clone()).collect();
        let s = format!("({},{})->{} + (-2)*({},{})->{}", names[1], names[1], names[0], names[0], names[1], names[1]);
        let f = parse_cochain(&b, 2, &s).unwrap();
        assert_eq!(f.terms().count(), 2);
        assert_eq!(parse_cochain(&b, 2, &format_cochain(&b, &f)).unwrap(), f);
        let zero_ary = parse_cochain(&b, 0, &format!("()->{}", names[1])).unwrap();
        assert_eq!(zero_ary.arity(), 0);
        assert!(parse_cochain(&b, 1, &s).is_err());
    }
}
