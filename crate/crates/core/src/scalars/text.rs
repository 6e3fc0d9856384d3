//! Canonical text for coefficients and sums of terms.

use super::rational::Rational;

/// One printed term: sign, coefficient magnitude, and monomial (may be empty).
pub(crate) struct TermText {
    pub negative: bool,
    pub magnitude: String,
    pub monomial: String,
}

/// Joins terms as `a + b - c`; coefficients `1` are dropped before a monomial.
pub(crate) fn format_terms(terms: Vec<TermText>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, t) in terms.into_iter().enumerate() {
        let body = if t.monomial.is_empty() {
            t.magnitude
        } else if t.magnitude == "1" {
            t.monomial
        } else {
            format!("{}*{}", t.magnitude, t.monomial)
        };
        match (k, t.negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

/// Integers print bare, other rationals in parentheses.
pub(crate) fn rational_term(q: &Rational) -> (bool, String) {
    let mag = q.abs();
    let text = if mag.is_integer() {
        mag.to_string()
    } else {
        format!("({mag})")
    };
    (q.is_negative(), text)
}

/// `c0 + c1*E(N) + c2*E(N)^2 + ...` over the nonzero coefficients.
pub(crate) fn cyclotomic_inner(conductor: u32, coeffs: &[Rational]) -> String {
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let (negative, magnitude) = rational_term(c);
            let monomial = match i {
                0 => String::new(),
                1 => format!("E({conductor})"),
                _ => format!("E({conductor})^{i}"),
            };
            TermText {
                negative,
                magnitude,
                monomial,
            }
        })
        .collect();
    format_terms(terms)
}
