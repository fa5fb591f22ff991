//! Deterministic printer emitting the expression grammar.
//!
//! Terms print in descending monomial order, fractions as
//! `(num)/(den)`; `parse(render(e))` reproduces `e` exactly.

use crate::jetspace::JetSpace;
use crate::scalar::Scalar;
use crate::symexpr::{Polynomial, RatExpr};

pub fn render<S: Scalar>(space: &JetSpace<S>, e: &RatExpr<S>) -> String {
    assert_eq!(space.id(), e.space_id(), "expression from another space");
    if e.is_polynomial() {
        render_poly(space, e.numerator())
    } else {
        format!(
            "({})/({})",
            render_poly(space, e.numerator()),
            render_poly(space, e.denominator())
        )
    }
}

fn render_poly<S: Scalar>(space: &JetSpace<S>, p: &Polynomial<S>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let c = c.abs();
        let mono = m
            .factors()
            .iter()
            .map(|&(v, exp)| {
                let name = &space.coord(v).name;
                if exp == 1 {
                    name.clone()
                } else {
                    format!("{name}^{exp}")
                }
            })
            .collect::<Vec<_>>()
            .join("*");
        if mono.is_empty() {
            out.push_str(&c.to_string());
        } else if c.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{c}*{mono}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::jetspace::{JetSpace, SpaceSpec};
    use num_rational::BigRational;

    fn space() -> JetSpace<BigRational> {
        JetSpace::new(SpaceSpec::new(&["x", "t"], &["y"], 3).constants(&["m"])).unwrap()
    }

    #[test]
    fn printing_round_trips() {
        let sp = space();
        for src in [
            "0",
            "1/2",
            "-y - y_tt",
            "(1/2)*y_x^2 - 3*x*t",
            "m^2*y/(1+x)",
            "(y_xt + y^3)/(x^2 - t)",
        ] {
            let e = sp.parse(src).unwrap();
            let printed = sp.render(&e);
            let back = sp.parse(&printed).unwrap();
            assert_eq!(back, e, "round trip failed for `{src}` -> `{printed}`");
        }
    }

    #[test]
    fn canonical_strings() {
        let sp = space();
        let e = sp.parse("y_tt + y").unwrap().neg();
        assert_eq!(sp.render(&e), "-y - y_tt");
        assert_eq!(sp.render(&sp.parse("0").unwrap()), "0");
        assert_eq!(sp.render(&sp.parse("x*3/6").unwrap()), "1/2*x");
    }
}
