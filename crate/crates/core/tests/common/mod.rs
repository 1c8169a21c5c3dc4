//! Seeded generators of random valid systems and polynomials.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stokes_core::matrix::{Mat2, Poly, PolyMat2};
use stokes_core::odeforms::{validate_system, FinalFormSpec, InterlacedSpec, SystemSpec, VectorField, FIELD_VARIABLES};
use stokes_core::satcheck::QShortPoly;
use stokes_core::series::{rat, MultiSeries, Rational};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut TestRng) -> Rational {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn positive_rational(rng: &mut TestRng) -> Rational {
    rat(rng.gen_range(1..=4), rng.gen_range(1..=3))
}

pub fn nonzero_rational(rng: &mut TestRng) -> Rational {
    let r = positive_rational(rng);
    if rng.gen_bool(0.5) {
        -r
    } else {
        r
    }
}

/// Random polynomial of degree at most `deg`.
pub fn poly(rng: &mut TestRng, deg: usize) -> Poly {
    Poly::new((0..=deg).map(|_| small_rational(rng)).collect())
}

/// Exact nonlinearity with a few terms, always including a pure `X` term
/// so that solutions are nontrivial.
pub fn field(rng: &mut TestRng) -> VectorField {
    std::array::from_fn(|_| {
        let mut g = MultiSeries::with_vars(&FIELD_VARIABLES, [], None);
        g.add_term(vec![rng.gen_range(0..=2), 0, 0], nonzero_rational(rng));
        for _ in 0..rng.gen_range(0..=3) {
            let e = vec![rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2)];
            g.add_term(e, small_rational(rng));
        }
        g
    })
}

pub fn final_form(rng: &mut TestRng) -> FinalFormSpec {
    let q = rng.gen_range(1..=4u32);
    let r = rng.gen_range(1..=q);
    let mut a = poly(rng, r as usize - 1).coeffs().to_vec();
    a.resize(r as usize, rat(0, 1));
    a[0] = positive_rational(rng);
    let mut js = vec![Mat2::rotation_dilation(small_rational(rng), nonzero_rational(rng))];
    for _ in 0..(q - r) {
        js.push(Mat2::new(small_rational(rng), small_rational(rng), small_rational(rng), small_rational(rng)));
    }
    let spec = FinalFormSpec { q, r, a: Poly::new(a), j: PolyMat2::new(js), g: field(rng) };
    assert!(validate_system(&SystemSpec::FinalForm(spec.clone())).is_valid(), "generator produced an invalid final form");
    spec
}

pub fn interlaced(rng: &mut TestRng) -> InterlacedSpec {
    let q = rng.gen_range(1..=4u32);
    let r = rng.gen_range(1..=q);
    let mut a = poly(rng, q as usize).coeffs().to_vec();
    a.resize(q as usize + 1, rat(0, 1));
    a[0] = positive_rational(rng);
    let mut b = poly(rng, (q - r) as usize).coeffs().to_vec();
    b.resize((q - r) as usize + 1, rat(0, 1));
    b[0] = nonzero_rational(rng);
    let mut c = [poly(rng, q as usize), poly(rng, q as usize)];
    for ci in &mut c {
        let mut v = ci.coeffs().to_vec();
        v.resize(q as usize + 1, rat(0, 1));
        v[0] = rat(0, 1);
        *ci = Poly::new(v);
    }
    let spec = InterlacedSpec { q, r, a: Poly::new(a), b: Poly::new(b), c, g: field(rng) };
    assert!(validate_system(&SystemSpec::Interlaced(spec.clone())).is_valid(), "generator produced an invalid interlaced form");
    spec
}

/// Positive `q`-short polynomial of degree at most `max_deg`.
pub fn qshort(rng: &mut TestRng, q: u32, max_deg: usize) -> QShortPoly {
    let nu = rng.gen_range(1..=max_deg.min(4));
    let deg = rng.gen_range(nu..=max_deg.min((q as usize + 1) * nu - 1));
    let mut c = vec![rat(0, 1); deg + 1];
    c[nu] = positive_rational(rng);
    for k in nu + 1..=deg {
        c[k] = small_rational(rng);
    }
    if c[deg] == rat(0, 1) {
        c[deg] = positive_rational(rng);
    }
    QShortPoly::new(Poly::new(c), q).expect("generator produced a non-q-short polynomial")
}

/// A second polynomial distinct from `p`, half the time sharing its
/// leading term so that only higher terms separate them.
pub fn distinct_qshort(rng: &mut TestRng, p: &QShortPoly, max_deg: usize) -> QShortPoly {
    let q = p.q();
    loop {
        let cand = if rng.gen_bool(0.5) {
            let nu = p.nu() as usize;
            let top = max_deg.min((q as usize + 1) * nu - 1);
            if top <= nu {
                qshort(rng, q, max_deg)
            } else {
                let mu = rng.gen_range(nu + 1..=top);
                let bump = Poly::monomial(nonzero_rational(rng), mu);
                match QShortPoly::new(p.poly().add(&bump), q) {
                    Ok(c) => c,
                    Err(_) => continue,
                }
            }
        } else {
            qshort(rng, q, max_deg)
        };
        if cand.poly() != p.poly() {
            return cand;
        }
    }
}
