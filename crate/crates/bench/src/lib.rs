//! Shared fixtures for the benchmarks.

use cremona::birep::{BirationalRep, Word};
use cremona::rootdata::OrientationMode;
use cremona::symfield::{parse_rf, Poly};

/// A(1)_l with the cyclic orientation.
pub fn affine(l: usize) -> BirationalRep {
    BirationalRep::affine_cyclic(l, OrientationMode::ThmA).expect("affine rep")
}

pub fn word(rep: &BirationalRep, src: &str) -> Word {
    Word::parse(src, rep.cartan()).expect("word")
}

fn poly(rep: &BirationalRep, src: &str) -> Poly {
    parse_rf(src, rep.registry())
        .expect("expression")
        .as_integer_poly()
        .expect("integer polynomial")
        .clone()
}

/// Two dense-ish polynomials in the A(1)_3 variables.
pub fn factors(rep: &BirationalRep) -> (Poly, Poly) {
    (
        poly(rep, "f0*f1*f2 - a0*f2 + a1*f3 + 3*f0^2*f3 - a2*a3 + f1*f2*f3 + 2"),
        poly(rep, "f0^2*f2*f3 - a0*f0 - a2*f1*f3 + a3^2*f1 - 5*f2 + a1*a2*f0"),
    )
}

/// `(p*c, q*c)` sharing the common factor `c`, for the GCD bench.
pub fn gcd_pair(rep: &BirationalRep) -> (Poly, Poly) {
    let (p, q) = factors(rep);
    let c = poly(rep, "f0*f3 + a0*f1 - a3*f2^2 + 1");
    (&p * &c, &q * &c)
}
