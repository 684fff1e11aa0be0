use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::{Poly, Rf, VarRegistry};

fn render(p: &Poly, reg: &VarRegistry, latex: bool) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let abs: BigInt = c.abs();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            factors.push(abs.to_string());
        }
        for (v, e) in m.iter() {
            let name = if latex { reg.latex(v) } else { reg.name(v) };
            factors.push(match (e, latex) {
                (1, _) => name,
                (_, false) => format!("{name}^{e}"),
                (_, true) => format!("{name}^{{{e}}}"),
            });
        }
        out.push_str(&factors.join(if latex { " " } else { "*" }));
    }
    out
}

/// Plain text in canonical term order, e.g. `f0*f1 + a0`.
pub fn poly_text(p: &Poly, reg: &VarRegistry) -> String {
    render(p, reg, false)
}

pub fn poly_latex(p: &Poly, reg: &VarRegistry) -> String {
    render(p, reg, true)
}

/// List of `{"exp": [...], "coeff": "..."}` pairs; coefficients are decimal
/// strings so arbitrary precision survives.
pub fn poly_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| json!({ "exp": m.exponents(), "coeff": c.to_string() }))
            .collect(),
    )
}

impl Rf {
    pub fn to_text(&self, reg: &VarRegistry) -> String {
        let n = poly_text(self.numer(), reg);
        if self.denom().is_one() {
            return n;
        }
        let d = poly_text(self.denom(), reg);
        let wrap = |s: String, p: &Poly| {
            let (m, c) = &p.terms()[0];
            if p.nterms() > 1 || c.is_negative() || (m.degree() > 0 && !c.is_one()) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, self.numer()), wrap(d, self.denom()))
    }

    pub fn to_latex(&self, reg: &VarRegistry) -> String {
        let n = poly_latex(self.numer(), reg);
        if self.denom().is_one() {
            return n;
        }
        format!("\\frac{{{}}}{{{}}}", n, poly_latex(self.denom(), reg))
    }

    /// Structured form with the variable names needed to read the exponent
    /// vectors.
    pub fn to_json(&self, reg: &VarRegistry) -> Value {
        let width = self
            .numer()
            .max_exponents()
            .len()
            .max(self.denom().max_exponents().len());
        let names: Vec<String> = (0..width as u32).map(|i| reg.name(super::Var(i))).collect();
        json!({
            "vars": names,
            "num": poly_json(self.numer()),
            "den": poly_json(self.denom()),
        })
    }
}
