//! Canonical text form shared with the command-line language.
//!
//! A sum is printed term by term as `coeff*d[i,j](u)`; the coefficient is
//! omitted when it is one, constants and monomials carry their sign into the
//! joining operator, and anything longer is parenthesised.

use crate::field::{MultiIndex, RatFunc, Scalar, Var};

/// `d[1,2](u)`, `u`, `d[1,2]` or the empty string for the identity.
pub fn dterm(mu: &MultiIndex, unknown: Option<&str>) -> String {
    match (mu.is_zero(), unknown) {
        (true, Some(u)) => u.to_string(),
        (true, None) => String::new(),
        (false, Some(u)) => format!("d{mu}({u})"),
        (false, None) => format!("d{mu}"),
    }
}

/// Split a coefficient into (negative?, printable magnitude or `None` for 1).
fn coeff_parts<S: Scalar>(c: &RatFunc<S>, name: &dyn Fn(&Var) -> String) -> (bool, Option<String>) {
    if let Some(k) = c.as_constant() {
        let neg = k.is_negative();
        let a = k.abs();
        return (
            neg,
            if a.is_one() {
                None
            } else {
                Some(a.to_string())
            },
        );
    }
    if c.is_polynomial() && c.numer().num_terms() == 1 {
        let (_, k) = c.numer().leading().unwrap();
        if k.is_negative() {
            return (true, Some(c.neg().fmt_with(name)));
        }
        return (false, Some(c.fmt_with(name)));
    }
    (false, Some(format!("({})", c.fmt_with(name))))
}

pub fn format_terms<S: Scalar>(
    terms: impl Iterator<Item = (RatFunc<S>, String)>,
    name: &dyn Fn(&Var) -> String,
) -> String {
    let mut out = String::new();
    for (k, (c, d)) in terms.enumerate() {
        let (neg, mag) = coeff_parts(&c, name);
        let body = match (mag, d.is_empty()) {
            (None, true) => "1".to_string(),
            (None, false) => d,
            (Some(m), true) => m,
            (Some(m), false) => format!("{m}*{d}"),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// One equation `Σ_j A[j](u_j)`, terms sorted by multi-index descending and
/// then by unknown position.
pub fn format_row<S: Scalar>(
    row: &[super::OreOperator<S>],
    unknowns: &[String],
    name: &dyn Fn(&Var) -> String,
) -> String {
    let mut terms: Vec<(&MultiIndex, usize, &RatFunc<S>)> = row
        .iter()
        .enumerate()
        .flat_map(|(j, p)| p.terms().map(move |(mu, a)| (mu, j, a)))
        .collect();
    terms.sort_by(|a, b| b.0.cmp(a.0).then(a.1.cmp(&b.1)));
    format_terms(
        terms
            .into_iter()
            .map(|(mu, j, a)| (a.clone(), dterm(mu, Some(&unknowns[j])))),
        name,
    )
}
