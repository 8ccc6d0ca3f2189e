//! Catalog of the renormalization maps, semiconjugacies, and spectral
//! curve families used throughout the library.
//!
//! Every formula is stored with exact rational coefficients. The maps are
//! built fresh on each call (construction is cheap compared to any use).

use super::curves::CurveFamily;
use super::identity::SemiConjugacy;
use super::orbit::backward_orbit_1d;
use super::poly::MultiPoly;
use super::ratfun::{RationalFunction, RationalMapND};
use crate::error::{Error, Result};

/// Names of all maps in the catalog.
pub const MAP_NAMES: &[&str] = &[
    "grigorchuk-f",
    "grigorchuk-g",
    "grigorchuk-h",
    "basilica",
    "hanoi",
    "img-phi",
    "schur1-5param",
    "schur2-5param",
    "chebyshev",
    "hanoi-1d",
    "theta-alpha",
];

/// Names of the semiconjugacies in the catalog.
pub const SEMICONJUGACY_NAMES: &[&str] = &["grigorchuk-f", "grigorchuk-g", "hanoi"];

/// Names of the spectral curve families in the catalog.
pub const CURVE_FAMILY_NAMES: &[&str] = &["grigorchuk", "hanoi"];

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| (*s).to_string()).collect()
}

/// Look up a map by name.
pub fn map(name: &str) -> Result<RationalMapND> {
    match name {
        "grigorchuk-f" => Ok(grigorchuk_f()),
        "grigorchuk-g" => Ok(grigorchuk_g()),
        "grigorchuk-h" => Ok(grigorchuk_h()),
        "basilica" => Ok(basilica()),
        "hanoi" => Ok(hanoi()),
        "img-phi" => Ok(img_phi()),
        "schur1-5param" => Ok(schur1_5param()),
        "schur2-5param" => Ok(schur2_5param()),
        "chebyshev" => Ok(chebyshev()),
        "hanoi-1d" => Ok(hanoi_1d()),
        "theta-alpha" => Ok(theta_alpha()),
        _ => Err(Error::UnknownName {
            kind: "map",
            name: name.to_string(),
        }),
    }
}

/// One-line-per-component description of every catalog map.
pub fn describe_all() -> String {
    let mut out = String::new();
    for name in MAP_NAMES {
        out.push_str(&map(name).expect("catalog name").describe());
    }
    out
}

/// First renormalization of the two-parameter pencil on the first branching
/// group: (la, mu) -> (2(4-mu^2)/la^2, -mu - mu(4-mu^2)/la^2).
pub fn grigorchuk_f() -> RationalMapND {
    let la = MultiPoly::var(2, 0);
    let mu = MultiPoly::var(2, 1);
    let four_minus_mu2 = MultiPoly::int(2, 4).sub(&mu.pow(2));
    let la2 = la.pow(2);
    // la' = 2(4 - mu^2)/la^2
    let c0 = RationalFunction::new(four_minus_mu2.scale_int(2), la2.clone());
    // mu' = -mu - mu(4 - mu^2)/la^2 = -mu(la^2 + 4 - mu^2)/la^2
    let c1 = RationalFunction::new(
        mu.neg().mul(&la2.add(&four_minus_mu2)),
        la2,
    );
    RationalMapND::new("grigorchuk-f", names(&["la", "mu"]), vec![c0, c1])
}

/// Second renormalization of the same pencil:
/// (la, mu) -> (2 la^2/(4-mu^2), mu + mu la^2/(4-mu^2)).
pub fn grigorchuk_g() -> RationalMapND {
    let la = MultiPoly::var(2, 0);
    let mu = MultiPoly::var(2, 1);
    let four_minus_mu2 = MultiPoly::int(2, 4).sub(&mu.pow(2));
    let la2 = la.pow(2);
    let c0 = RationalFunction::new(la2.scale_int(2), four_minus_mu2.clone());
    // mu' = mu(4 - mu^2 + la^2)/(4 - mu^2)
    let c1 = RationalFunction::new(
        mu.mul(&four_minus_mu2.add(&la2)),
        four_minus_mu2,
    );
    RationalMapND::new("grigorchuk-g", names(&["la", "mu"]), vec![c0, c1])
}

/// The involution exchanging the two renormalizations:
/// (la, mu) -> (4/la, -2 mu/la).
pub fn grigorchuk_h() -> RationalMapND {
    let la = MultiPoly::var(2, 0);
    let mu = MultiPoly::var(2, 1);
    let c0 = RationalFunction::new(MultiPoly::int(2, 4), la.clone());
    let c1 = RationalFunction::new(mu.scale_int(-2), la);
    RationalMapND::new("grigorchuk-h", names(&["la", "mu"]), vec![c0, c1])
}

/// Renormalization of the Basilica pencil:
/// (la, mu) -> ((mu-2)/la^2, -2 + mu(mu-2)/la^2).
pub fn basilica() -> RationalMapND {
    let la = MultiPoly::var(2, 0);
    let mu = MultiPoly::var(2, 1);
    let mu_minus_2 = mu.sub(&MultiPoly::int(2, 2));
    let la2 = la.pow(2);
    let c0 = RationalFunction::new(mu_minus_2.clone(), la2.clone());
    // mu' = (-2 la^2 + mu(mu - 2))/la^2
    let c1 = RationalFunction::new(
        la2.scale_int(-2).add(&mu.mul(&mu_minus_2)),
        la2,
    );
    RationalMapND::new("basilica", names(&["la", "mu"]), vec![c0, c1])
}

/// Renormalization of the two-parameter operator family on the three-peg
/// tower group. Both components share the denominator
/// (x-y-1)(x^2-1+y-y^2).
pub fn hanoi() -> RationalMapND {
    let x = MultiPoly::var(2, 0);
    let y = MultiPoly::var(2, 1);
    let den = x
        .sub(&y)
        .sub(&MultiPoly::int(2, 1))
        .mul(&x.pow(2).sub(&MultiPoly::int(2, 1)).add(&y).sub(&y.pow(2)));
    // x' = x - 2(x^2 - x - y^2) y^2 / den
    let c0 = RationalFunction::new(
        x.mul(&den)
            .sub(&x.pow(2).sub(&x).sub(&y.pow(2)).mul(&y.pow(2)).scale_int(2)),
        den.clone(),
    );
    // y' = (x + y - 1) y^2 / den
    let c1 = RationalFunction::new(
        x.add(&y).sub(&MultiPoly::int(2, 1)).mul(&y.pow(2)),
        den,
    );
    RationalMapND::new("hanoi", names(&["x", "y"]), vec![c0, c1])
}

/// Renormalization of the three-parameter pencil on the iterated monodromy
/// group of z^2 + i.
pub fn img_phi() -> RationalMapND {
    let y = MultiPoly::var(3, 0);
    let z = MultiPoly::var(3, 1);
    let la = MultiPoly::var(3, 2);
    let zl = z.sub(&la);
    // (z - la - y)(z - la + y)
    let quad = zl.sub(&y).mul(&zl.add(&y));
    let c0 = RationalFunction::new(z.clone(), y.clone());
    let c1 = RationalFunction::new(MultiPoly::int(3, 1), quad.clone());
    // la' = (-la y^2 + la (z-la)^2 + z - la) / (y (z-la-y)(z-la+y))
    let c2 = RationalFunction::new(
        la.neg().mul(&y.pow(2)).add(&la.mul(&zl.pow(2))).add(&zl),
        y.mul(&quad),
    );
    RationalMapND::new("img-phi", names(&["y", "z", "la"]), vec![c0, c1, c2])
}

fn five_vars() -> (MultiPoly, MultiPoly, MultiPoly, MultiPoly, MultiPoly) {
    (
        MultiPoly::var(5, 0),
        MultiPoly::var(5, 1),
        MultiPoly::var(5, 2),
        MultiPoly::var(5, 3),
        MultiPoly::var(5, 4),
    )
}

/// First Schur map on the five-parameter pencil of the first branching
/// group, in non-homogeneous coordinates (x, y, z, u, v).
pub fn schur1_5param() -> RationalMapND {
    let (x, y, z, u, v) = five_vars();
    let x2 = x.pow(2);
    let (y2, z2, u2, v2) = (y.pow(2), z.pow(2), u.pow(2), v.pow(2));
    // Q = (y+z+u+v)(y+z-u-v)(y-z+u-v)(-y+z+u-v)
    let q = y
        .add(&z)
        .add(&u)
        .add(&v)
        .mul(&y.add(&z).sub(&u).sub(&v))
        .mul(&y.sub(&z).add(&u).sub(&v))
        .mul(&y.neg().add(&z).add(&u).sub(&v));
    let c_x = RationalFunction::from_poly(z.add(&y));
    let c_y = RationalFunction::new(
        x2.mul(
            &y.mul(&z)
                .mul(&v)
                .scale_int(2)
                .sub(&u.mul(&y2.add(&z2).sub(&u2).add(&v2))),
        ),
        q.clone(),
    );
    let c_z = RationalFunction::new(
        x2.mul(
            &z.mul(&u)
                .mul(&v)
                .scale_int(2)
                .sub(&y.mul(&y2.neg().add(&z2).add(&u2).add(&v2))),
        ),
        q.clone(),
    );
    let c_u = RationalFunction::new(
        x2.mul(
            &y.mul(&u)
                .mul(&v)
                .scale_int(2)
                .sub(&z.mul(&y2.sub(&z2).add(&u2).add(&v2))),
        ),
        q.clone(),
    );
    // v' = u + v + x^2(2yzu - v(y^2+z^2+u^2-v^2))/Q
    let c_v = RationalFunction::new(
        u.add(&v).mul(&q).add(&x2.mul(
            &y.mul(&z)
                .mul(&u)
                .scale_int(2)
                .sub(&v.mul(&y2.add(&z2).add(&u2).sub(&v2))),
        )),
        q,
    );
    RationalMapND::new(
        "schur1-5param",
        names(&["x", "y", "z", "u", "v"]),
        vec![c_x, c_y, c_z, c_u, c_v],
    )
}

/// Second Schur map on the same five-parameter pencil. Its third iterate
/// fixes the three middle coordinates, which it permutes cyclically.
pub fn schur2_5param() -> RationalMapND {
    let (x, y, z, u, v) = five_vars();
    let x2 = x.pow(2);
    // P = (u+v+y+z)(u+v-y-z)
    let p = u
        .add(&v)
        .add(&y)
        .add(&z)
        .mul(&u.add(&v).sub(&y).sub(&z));
    let c_x = RationalFunction::new(x2.mul(&y.add(&z)), p.clone());
    let c_y = RationalFunction::from_poly(u.clone());
    let c_z = RationalFunction::from_poly(y.clone());
    let c_u = RationalFunction::from_poly(z.clone());
    // v' = v - x^2(u+v)/P
    let c_v = RationalFunction::new(v.mul(&p).sub(&x2.mul(&u.add(&v))), p);
    RationalMapND::new(
        "schur2-5param",
        names(&["x", "y", "z", "u", "v"]),
        vec![c_x, c_y, c_z, c_u, c_v],
    )
}

/// The interval map x -> 2x^2 - 1 (degree-two Chebyshev form), the
/// one-dimensional factor of both Grigorchuk renormalizations.
pub fn chebyshev() -> RationalMapND {
    let x = MultiPoly::var(1, 0);
    let c = RationalFunction::from_poly(x.pow(2).scale_int(2).sub(&MultiPoly::int(1, 1)));
    RationalMapND::new("chebyshev", names(&["x"]), vec![c])
}

/// The one-dimensional factor x -> x^2 - x - 3 of the tower-group map.
pub fn hanoi_1d() -> RationalMapND {
    let x = MultiPoly::var(1, 0);
    let c = RationalFunction::from_poly(x.pow(2).sub(&x).sub(&MultiPoly::int(1, 3)));
    RationalMapND::new("hanoi-1d", names(&["x"]), vec![c])
}

/// The hyperbola-index map th -> 1 - 2 th^2: pulling a spectral hyperbola
/// back under the renormalization splits it into the two preimages of its
/// index under this map.
pub fn theta_alpha() -> RationalMapND {
    let th = MultiPoly::var(1, 0);
    let c = RationalFunction::from_poly(MultiPoly::int(1, 1).sub(&th.pow(2).scale_int(2)));
    RationalMapND::new("theta-alpha", names(&["th"]), vec![c])
}

/// Projection semiconjugating `grigorchuk-f` to `chebyshev`:
/// psi(la, mu) = (4 - mu^2 + la^2)/(4 la).
pub fn psi_f() -> RationalFunction {
    let la = MultiPoly::var(2, 0);
    let mu = MultiPoly::var(2, 1);
    RationalFunction::new(
        MultiPoly::int(2, 4).sub(&mu.pow(2)).add(&la.pow(2)),
        la.scale_int(4),
    )
}

/// Projection semiconjugating `grigorchuk-g` to `chebyshev`:
/// psi(la, mu) = (4 - mu^2 + la^2)/(4 la), the same function as [`psi_f`].
///
/// One projection serves both renormalization maps because it is invariant
/// under the involution `grigorchuk-h` that swaps them (psi∘H = psi, and
/// G = H∘F).  The classical display of this projection as
/// `(4 - x^2 + y^2)/(4 y)` matches this formula when its arguments `(x, y)`
/// are read as `(mu, la)`; read in `(la, mu)` order instead, that display
/// is a first integral of G (psi∘G = psi, see the catalog tests), not a
/// semiconjugacy onto `chebyshev`.
pub fn psi_g() -> RationalFunction {
    psi_f()
}

/// Projection semiconjugating `hanoi` to `hanoi-1d`:
/// psi(x, y) = (x^2 - xy - 2y^2 - 1)/y.
///
/// This formula is fitted, not quoted: it is the index of the hyperbola
/// family (`x^2 - xy - 2y^2 - theta y = 1` is exactly the level set
/// psi = theta), found by a low-degree rational ansatz and then verified
/// to satisfy the semiconjugacy identity exactly.
pub fn psi_hanoi() -> RationalFunction {
    let x = MultiPoly::var(2, 0);
    let y = MultiPoly::var(2, 1);
    RationalFunction::new(
        x.pow(2)
            .sub(&x.mul(&y))
            .sub(&y.pow(2).scale_int(2))
            .sub(&MultiPoly::int(2, 1)),
        y,
    )
}

/// Look up a semiconjugacy by the name of its source map.
pub fn semiconjugacy(name: &str) -> Result<SemiConjugacy> {
    match name {
        "grigorchuk-f" => Ok(SemiConjugacy {
            source: grigorchuk_f(),
            projection: psi_f(),
            factor: chebyshev(),
        }),
        "grigorchuk-g" => Ok(SemiConjugacy {
            source: grigorchuk_g(),
            projection: psi_g(),
            factor: chebyshev(),
        }),
        "hanoi" => Ok(SemiConjugacy {
            source: hanoi(),
            projection: psi_hanoi(),
            factor: hanoi_1d(),
        }),
        _ => Err(Error::UnknownName {
            kind: "semiconjugacy",
            name: name.to_string(),
        }),
    }
}

/// Build a spectral curve family, with index values taken from the
/// backward orbit of the matching one-dimensional map up to `depth`.
///
/// - `grigorchuk`: hyperbolas `4 - mu^2 + la^2 + 4 la th = 0` with `th`
///   in the backward orbit of 0 under `theta-alpha` (plus `th = 1`, whose
///   hyperbola degenerates into the two lines covering the level-one
///   spectrum), together with the line `la + mu - 2 = 0`.
/// - `hanoi`: hyperbolas `x^2 - xy - 2y^2 - th y - 1 = 0` with `th` in the
///   backward orbit of {-2, 0} under `hanoi-1d`, together with the lines
///   `x - 1 - 2y`, `x + 1 + y`, `x - 1 + y`.
pub fn curve_family(name: &str, depth: usize) -> Result<CurveFamily> {
    match name {
        "grigorchuk" => {
            let la = MultiPoly::var(3, 0);
            let mu = MultiPoly::var(3, 1);
            let th = MultiPoly::var(3, 2);
            let template = MultiPoly::int(3, 4)
                .sub(&mu.pow(2))
                .add(&la.pow(2))
                .add(&la.mul(&th).scale_int(4));
            let line = {
                let la = MultiPoly::var(2, 0);
                let mu = MultiPoly::var(2, 1);
                la.add(&mu).sub(&MultiPoly::int(2, 2))
            };
            let orbit = backward_orbit_1d(&theta_alpha(), &[0.0], depth)?;
            let mut theta_values = orbit.values.clone();
            theta_values.push(1.0);
            theta_values.sort_by(f64::total_cmp);
            CurveFamily::new(
                "grigorchuk",
                names(&["la", "mu"]),
                template,
                theta_values,
                vec![line],
                orbit.dropped_complex,
            )
        }
        "hanoi" => {
            let x = MultiPoly::var(3, 0);
            let y = MultiPoly::var(3, 1);
            let th = MultiPoly::var(3, 2);
            let template = x
                .pow(2)
                .sub(&x.mul(&y))
                .sub(&y.pow(2).scale_int(2))
                .sub(&y.mul(&th))
                .sub(&MultiPoly::int(3, 1));
            let (x2, y2) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
            let lines = vec![
                x2.sub(&MultiPoly::int(2, 1)).sub(&y2.scale_int(2)),
                x2.add(&MultiPoly::int(2, 1)).add(&y2),
                x2.sub(&MultiPoly::int(2, 1)).add(&y2),
            ];
            let orbit = backward_orbit_1d(&hanoi_1d(), &[-2.0, 0.0], depth)?;
            CurveFamily::new(
                "hanoi",
                names(&["x", "y"]),
                template,
                orbit.values.clone(),
                lines,
                orbit.dropped_complex,
            )
        }
        _ => Err(Error::UnknownName {
            kind: "curve family",
            name: name.to_string(),
        }),
    }
}
